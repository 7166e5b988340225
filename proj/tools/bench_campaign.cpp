// Times the Monte Carlo campaign with the serial reference loop and with the
// OpenMP trial loop, and checks that both produce identical reports.

#include "mmwcache/simulator.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mmwcache;

int main(int argc, char** argv) {
  long trials = argc > 1 ? std::atol(argv[1]) : 2000;
  const NetworkConfig cfg;
  const ContentLibrary lib;
  const DerivedConstants dc = derive_constants(cfg, lib);
  const CachingPolicy policy = optimize_caching(placement_distances(dc, cfg, lib), lib, cfg);

  auto timed = [&](ExecMode mode) {
    const auto t0 = std::chrono::steady_clock::now();
    const MetricsReport rep = run_campaign(cfg, lib, policy, System::S1, trials, 12345, mode);
    const auto t1 = std::chrono::steady_clock::now();
    return std::pair{rep, std::chrono::duration<double>(t1 - t0).count()};
  };

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("trials:  %ld\n", trials);

  const auto [serial_rep, serial_s] = timed(ExecMode::Serial);
  std::printf("serial:   %.3f s  (%.1f us/trial)  sp=%.4f\n", serial_s,
              1e6 * serial_s / trials, serial_rep.sp.value);
  const auto [parallel_rep, parallel_s] = timed(ExecMode::Parallel);
  std::printf("parallel: %.3f s  (%.1f us/trial)  sp=%.4f\n", parallel_s,
              1e6 * parallel_s / trials, parallel_rep.sp.value);
  std::printf("speedup:  %.2fx\n", serial_s / parallel_s);

  if (!(serial_rep == parallel_rep)) {
    std::printf("MISMATCH: serial and parallel reports differ\n");
    return 1;
  }
  std::printf("serial and parallel reports identical\n");
  return 0;
}
