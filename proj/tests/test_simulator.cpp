#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmwcache/analytic.hpp"
#include "mmwcache/rng.hpp"
#include "mmwcache/simulator.hpp"
#include "support/oracles.hpp"

#include <numeric>

using namespace mmwcache;

namespace {

struct ReferenceSetup {
  NetworkConfig cfg;
  ContentLibrary lib;
  CachingPolicy policy;
  AssociationThresholds th;
  DeliveryRule rule;
};

const ReferenceSetup& reference() {
  static const ReferenceSetup ref = [] {
    ReferenceSetup r;
    const DerivedConstants dc = derive_constants(r.cfg, r.lib);
    r.policy = optimize_caching(placement_distances(dc, r.cfg, r.lib), r.lib, r.cfg);
    r.th = association_thresholds(r.policy, dc, r.lib, r.cfg);
    r.rule = s1_delivery_rule(r.th, r.cfg, r.lib);
    return r;
  }();
  return ref;
}

// Small window keeps statistical tests fast; still far larger than the
// discovery neighborhood.
NetworkConfig small_window_config() {
  NetworkConfig cfg;
  cfg.sim_radius = 500.0;
  return cfg;
}

}  // namespace

TEST_CASE("topology generation") {
  const NetworkConfig cfg = small_window_config();
  SUBCASE("same seed reproduces the same realization") {
    const Topology a = generate_topology(cfg, 42);
    const Topology b = generate_topology(cfg, 42);
    REQUIRE(a.mu.size() == b.mu.size());
    for (size_t i = 0; i < a.mu.size(); ++i) {
      CHECK(a.mu[i].x == b.mu[i].x);
      CHECK(a.mu[i].y == b.mu[i].y);
    }
    CHECK(a.active == b.active);
  }
  SUBCASE("typical user pinned at the origin, active") {
    const Topology t = generate_topology(cfg, 7);
    CHECK(t.mu[0].x == 0.0);
    CHECK(t.mu[0].y == 0.0);
    CHECK(t.active[0] == 1);
  }
  SUBCASE("empty network keeps only the typical user") {
    NetworkConfig empty = cfg;
    empty.lambda_u = 0.0;
    empty.lambda_r = 0.0;
    const Topology t = generate_topology(empty, 7);
    CHECK(t.mu.size() == 1);
    CHECK(t.rrh.empty());
  }
  SUBCASE("window precondition") {
    NetworkConfig bad = cfg;
    bad.sim_radius = bad.d_l + bad.d_r - 1.0;
    CHECK_THROWS_AS(generate_topology(bad, 7), std::invalid_argument);
  }
  SUBCASE("point count is Poisson with the right mean") {
    const double expected = cfg.lambda_u * kPi * cfg.sim_radius * cfg.sim_radius;
    const int n_seeds = 400;
    double total = 0, total_sq = 0;
    for (int s = 0; s < n_seeds; ++s) {
      const double c = static_cast<double>(generate_topology(cfg, 1000 + s).mu.size() - 1);
      total += c;
      total_sq += c * c;
    }
    const double mean = total / n_seeds;
    CHECK(std::fabs(mean - expected) <= 3.0 * std::sqrt(expected / n_seeds));
    // index of dispersion near one for a Poisson count
    const double var = (total_sq - n_seeds * mean * mean) / (n_seeds - 1);
    CHECK(var / mean == doctest::Approx(1.0).epsilon(0.2));
  }
  SUBCASE("activity flags are Bernoulli(rho)") {
    long active = 0, total = 0;
    for (int s = 0; s < 50; ++s) {
      const Topology t = generate_topology(cfg, 2000 + s);
      for (size_t i = 1; i < t.mu.size(); ++i) {
        active += t.active[i];
        ++total;
      }
    }
    const double p = static_cast<double>(active) / total;
    CHECK(std::fabs(p - cfg.rho) <= 3.0 * std::sqrt(cfg.rho * (1 - cfg.rho) / total));
  }
}

TEST_CASE("cache assignment") {
  const NetworkConfig cfg = small_window_config();
  SUBCASE("zero policy leaves caches empty") {
    Topology t = generate_topology(cfg, 5);
    assign_caches(t, std::vector<double>(20, 0.0), 6);
    for (size_t m = 0; m < t.mu.size(); ++m)
      for (int f = 0; f < 20; ++f) CHECK(!t.mu_caches_file(m, f));
  }
  SUBCASE("per-file frequencies match the policy") {
    const std::vector<double> q = {0.8, 0.5, 0.2, 0.0, 0.05};
    long count[5] = {0, 0, 0, 0, 0};
    long users = 0;
    for (int s = 0; s < 30; ++s) {
      Topology t = generate_topology(cfg, 3000 + s);
      assign_caches(t, q, 4000 + s);
      users += static_cast<long>(t.mu.size());
      for (size_t m = 0; m < t.mu.size(); ++m)
        for (int f = 0; f < 5; ++f) count[f] += t.mu_caches_file(m, f);
    }
    for (int f = 0; f < 5; ++f) {
      const double p = static_cast<double>(count[f]) / users;
      const double sigma = std::sqrt(std::max(q[f] * (1 - q[f]), 1e-12) / users);
      CHECK(std::fabs(p - q[f]) <= std::max(3.0 * sigma, 1e-12));
    }
  }
  SUBCASE("average cache size respects the storage budget") {
    const ContentLibrary lib;
    const NetworkConfig ref;
    const DerivedConstants dc = derive_constants(ref, lib);
    const CachingPolicy p = optimize_caching(placement_distances(dc, ref, lib), lib, ref);
    Topology t = generate_topology(cfg, 99);
    assign_caches(t, p.q, 100);
    long bits = 0;
    for (size_t m = 0; m < t.mu.size(); ++m)
      for (int f = 0; f < lib.n_files; ++f) bits += t.mu_caches_file(m, f);
    const double mean_size = static_cast<double>(bits) / t.mu.size();
    const double expected = std::accumulate(p.q.begin(), p.q.end(), 0.0);
    CHECK(expected <= lib.m_d + 1e-9);
    CHECK(std::fabs(mean_size - expected) <= 3.0 * std::sqrt(expected / t.mu.size()) + 0.05);
  }
  SUBCASE("rejects probabilities outside the unit interval") {
    Topology t = generate_topology(cfg, 5);
    CHECK_THROWS_AS(assign_caches(t, std::vector<double>{1.2}, 6), std::invalid_argument);
  }
}

TEST_CASE("nearest-cacher distance follows the thinned-process law") {
  const NetworkConfig cfg = small_window_config();
  const double q1 = 0.54;
  const std::vector<double> q = {0.9, q1, 0.3};
  std::vector<double> distances;
  distances.reserve(10000);
  for (int s = 0; s < 10000; ++s) {
    Topology t = generate_topology(cfg, 50000 + s);
    assign_caches(t, q, 90000 + s);
    double best = 1e300;
    for (size_t m = 1; m < t.mu.size(); ++m) {
      if (t.active[m] || !t.mu_caches_file(m, 1)) continue;
      best = std::min(best, norm(t.mu[m]));
    }
    if (best < 1e300) distances.push_back(best);
  }
  REQUIRE(distances.size() == 10000);  // a missing cacher in this window is ~impossible
  const double lam = kPi * cfg.lambda_u * (1.0 - cfg.rho) * q1;
  const double p =
      oracles::ks_p_value(distances, [&](double r) { return 1.0 - std::exp(-lam * r * r); });
  CHECK(p > 0.01);
}

TEST_CASE("association resolution across the network") {
  const auto& ref = reference();
  SUBCASE("fully active network cannot offload over D2D") {
    NetworkConfig cfg = small_window_config();
    cfg.rho = 1.0;
    Topology t = generate_topology(cfg, 11);
    assign_caches(t, ref.policy.q, 12);
    const auto dec = resolve_associations(t, ref.rule, ref.lib, 13);
    for (const auto& d : dec) {
      if (!d) continue;
      CHECK(!is_d2d(d->mode));
    }
  }
  SUBCASE("empty caches with a full edge cloud pin everything to the fronthaul") {
    NetworkConfig cfg = small_window_config();
    ContentLibrary lib = ref.lib;
    lib.m_e = lib.n_files;
    Topology t = generate_topology(cfg, 21);
    assign_caches(t, std::vector<double>(lib.n_files, 0.0), 22);
    DeliveryRule rule = s2_delivery_rule(cfg, lib);
    const auto dec = resolve_associations(t, rule, lib, 23);
    long requests = 0;
    for (const auto& d : dec) {
      if (!d) continue;
      ++requests;
      CHECK(d->mode == DeliveryMode::CellularFronthaul);
    }
    CHECK(requests > 0);
  }
  SUBCASE("inactive users never request, active users always do") {
    Topology t = generate_topology(small_window_config(), 31);
    assign_caches(t, ref.policy.q, 32);
    const auto dec = resolve_associations(t, ref.rule, ref.lib, 33);
    for (size_t m = 0; m < t.mu.size(); ++m) CHECK(dec[m].has_value() == (t.active[m] != 0));
  }
  SUBCASE("D2D servers are inactive users within the file's search radius") {
    Topology t = generate_topology(reference().cfg, 41);
    assign_caches(t, ref.policy.q, 42);
    const auto dec = resolve_associations(t, ref.rule, ref.lib, 43);
    for (size_t m = 0; m < t.mu.size(); ++m) {
      if (!dec[m] || !is_d2d(dec[m]->mode)) continue;
      const int s = dec[m]->server_index;
      CHECK(t.active[s] == 0);
      CHECK(t.mu_caches_file(s, dec[m]->file_index));
      CHECK(dec[m]->server_distance <= ref.rule.radius[dec[m]->file_index] + 1e-9);
      CHECK(dist(t.mu[m], t.mu[s]) == doctest::Approx(dec[m]->server_distance));
      CHECK((dec[m]->mode == DeliveryMode::D2dLos) == (dec[m]->server_distance <= ref.cfg.d_l));
    }
  }
}

TEST_CASE("typical-user evaluation") {
  const auto& ref = reference();
  SUBCASE("self-cache service is free and always succeeds") {
    NetworkConfig cfg = small_window_config();
    Topology t = generate_topology(cfg, 51);
    assign_caches(t, std::vector<double>(ref.lib.n_files, 1.0), 52);
    const auto dec = resolve_associations(t, ref.rule, ref.lib, 53);
    const TrialOutcome out = evaluate_typical_user(t, dec, cfg, ref.lib, 54);
    CHECK(out.decision.mode == DeliveryMode::SelfCache);
    CHECK(out.success);
    CHECK(out.power_w == 0.0);
    CHECK(out.throughput_bps == ref.lib.rate_bps[out.file_index]);
    CHECK(!out.sinr.has_value());
  }
  SUBCASE("a lone nearby server without interferers almost always succeeds") {
    // Hand-built realization: the typical user plus one inactive cacher 10 m away.
    NetworkConfig cfg = small_window_config();
    const ContentLibrary lib = ContentLibrary::uniform_rate(2, 1.0, 1e9, 1, 0);
    Topology t;
    t.window_radius = cfg.sim_radius;
    t.mu = {{0, 0}, {10.0, 0.0}};
    t.active = {1, 0};
    t.n_files = 2;
    t.cache_words = 1;
    t.cache = {0, 3};  // server caches both files
    DeliveryRule rule;
    rule.radius = {60.0, 60.0};
    rule.los_radius = cfg.d_l;
    rule.edge_capacity = 0;
    int successes = 0;
    for (int s = 0; s < 300; ++s) {
      const auto dec = resolve_associations(t, rule, lib, 600 + s);
      REQUIRE(dec[0].has_value());
      REQUIRE(is_d2d(dec[0]->mode));
      const TrialOutcome out = evaluate_typical_user(t, dec, cfg, lib, 900 + s);
      successes += out.success;
      CHECK(out.power_w == cfg.p_d);
      CHECK(out.sinr.has_value());
    }
    CHECK(successes > 280);  // success probability here is exp(-0.022) ~ 0.978
  }
  SUBCASE("cellular fallback without any RRH fails but still bills power") {
    NetworkConfig cfg = small_window_config();
    cfg.lambda_r = 0.0;
    ContentLibrary lib = ContentLibrary::uniform_rate(2, 1.0, 1e7, 1, 2);
    Topology t = generate_topology(cfg, 61);
    assign_caches(t, std::vector<double>(2, 0.0), 62);
    DeliveryRule rule = s2_delivery_rule(cfg, lib);
    const auto dec = resolve_associations(t, rule, lib, 63);
    const TrialOutcome out = evaluate_typical_user(t, dec, cfg, lib, 64);
    CHECK(out.decision.mode == DeliveryMode::CellularFronthaul);
    CHECK(!out.success);
    CHECK(out.power_w == cfg.p_c);
  }
  SUBCASE("backhaul delivery bills the extra power") {
    NetworkConfig cfg = small_window_config();
    ContentLibrary lib = ContentLibrary::uniform_rate(2, 1.0, 1e7, 1, 0);
    Topology t = generate_topology(cfg, 71);
    assign_caches(t, std::vector<double>(2, 0.0), 72);
    const auto dec = resolve_associations(t, s2_delivery_rule(cfg, lib), lib, 73);
    const TrialOutcome out = evaluate_typical_user(t, dec, cfg, lib, 74);
    CHECK(out.decision.mode == DeliveryMode::CellularBackhaul);
    CHECK(out.power_w == cfg.p_c + cfg.p_b);
  }
}

TEST_CASE("energy metrics") {
  const NetworkConfig cfg;
  auto outcome = [&](DeliveryMode mode, bool success, double rate, double power) {
    TrialOutcome o;
    o.decision.mode = mode;
    o.success = success;
    o.throughput_bps = success ? rate : 0.0;
    o.power_w = power;
    return o;
  };
  SUBCASE("no D2D attempts leaves the D2D efficiency undefined") {
    std::vector<TrialOutcome> outs = {outcome(DeliveryMode::SelfCache, true, 1e9, 0.0),
                                      outcome(DeliveryMode::CellularFronthaul, false, 1e9, 0.1)};
    const auto [total, d2d] = energy_metrics(outs, cfg);
    CHECK(total.has_value());
    CHECK(!d2d.has_value());
  }
  SUBCASE("all-successful D2D gives rate over power") {
    std::vector<TrialOutcome> outs(4, outcome(DeliveryMode::D2dLos, true, 1e9, cfg.p_d));
    const auto [total, d2d] = energy_metrics(outs, cfg);
    CHECK(*d2d == doctest::Approx(1e9 / cfg.p_d));
    CHECK(*total == doctest::Approx(1e9 / cfg.p_d));
  }
  SUBCASE("failed D2D attempts burn power for nothing") {
    std::vector<TrialOutcome> outs = {outcome(DeliveryMode::D2dLos, true, 1e9, cfg.p_d),
                                      outcome(DeliveryMode::D2dNlos, false, 1e9, cfg.p_d)};
    const auto [total, d2d] = energy_metrics(outs, cfg);
    CHECK(*d2d == doctest::Approx(0.5 * 1e9 / cfg.p_d));
    (void)total;
  }
  SUBCASE("all-self-cache traffic consumes no power") {
    std::vector<TrialOutcome> outs(3, outcome(DeliveryMode::SelfCache, true, 1e9, 0.0));
    const auto [total, d2d] = energy_metrics(outs, cfg);
    CHECK(!total.has_value());
    CHECK(!d2d.has_value());
  }
  CHECK_THROWS_AS(energy_metrics({}, cfg), std::invalid_argument);
}

TEST_CASE("campaign behavior") {
  const auto& ref = reference();
  SUBCASE("full caching makes every metric one") {
    CachingPolicy ones;
    ones.q.assign(ref.lib.n_files, 1.0);
    const MetricsReport rep = run_campaign(ref.cfg, ref.lib, ones, System::S1, 200, 5);
    CHECK(rep.sp.value == 1.0);
    CHECK(rep.op_d.value == 1.0);
    CHECK(rep.sop_d.value == 1.0);
    CHECK(!rep.ee_total.has_value());  // nothing ever transmits
  }
  SUBCASE("confidence intervals shrink like the square root of the trial count") {
    const MetricsReport small = run_campaign(ref.cfg, ref.lib, ref.policy, System::S1, 1000, 9);
    const MetricsReport large = run_campaign(ref.cfg, ref.lib, ref.policy, System::S1, 10000, 9);
    const double shrink = small.sp.ci / large.sp.ci;  // ~sqrt(10)
    CHECK(shrink > 2.0);
    CHECK(shrink < 5.0);
  }
  SUBCASE("reruns with one seed are bit-identical, across execution modes too") {
    const MetricsReport a =
        run_campaign(ref.cfg, ref.lib, ref.policy, System::S1, 600, 77, ExecMode::Parallel);
    const MetricsReport b =
        run_campaign(ref.cfg, ref.lib, ref.policy, System::S1, 600, 77, ExecMode::Parallel);
    const MetricsReport c =
        run_campaign(ref.cfg, ref.lib, ref.policy, System::S1, 600, 77, ExecMode::Serial);
    CHECK(a == b);
    CHECK(a == c);
  }
  SUBCASE("offloading decomposition and ordering invariants") {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
      const MetricsReport rep = run_campaign(ref.cfg, ref.lib, ref.policy, System::S1, 500, seed);
      CHECK(rep.sop_d.value <= rep.op_d.value);
      CHECK(rep.self_hit.value <= rep.sp.value + 1e-12);
      CHECK(rep.sop_d.value <= rep.sp.value + 1e-12);
    }
  }
  SUBCASE("trial count must be positive") {
    CHECK_THROWS_AS(run_campaign(ref.cfg, ref.lib, ref.policy, System::S1, 0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("simulation agrees with the analytic model at the reference point") {
  const auto& ref = reference();
  const long trials = 25000;
  const auto outcomes = run_trials(ref.cfg, ref.lib, ref.policy.q, ref.rule, trials, 20240501);
  const MetricsReport rep = summarize(outcomes, ref.cfg);

  const AnalyticReport an = overall_report(ref.policy, ref.th, ref.cfg, ref.lib);
  // self-cache hits and D2D associations are exactly binomial under the model
  CHECK(std::fabs(rep.self_hit.value - an.p_s) <=
        3.0 * std::sqrt(an.p_s * (1.0 - an.p_s) / trials));
  CHECK(std::fabs((rep.op_d.value - rep.self_hit.value) - an.p_d) <=
        3.0 * std::sqrt(an.p_d * (1.0 - an.p_d) / trials));
  CHECK(std::fabs(rep.sp.value - an.sp_total) <= 0.02);

  // conditional D2D success against the quadrature prediction
  long d2d_attempts = 0, d2d_success = 0;
  for (const TrialOutcome& o : outcomes) {
    if (!is_d2d(o.decision.mode)) continue;
    ++d2d_attempts;
    d2d_success += o.success;
  }
  REQUIRE(d2d_attempts > 1000);
  const double cond_mc = static_cast<double>(d2d_success) / d2d_attempts;
  const double cond_an = an.sp_d2d / an.p_d;
  CHECK(std::fabs(cond_mc - cond_an) <= 0.02);
}

TEST_CASE("worst-case interference realization matches the closed form") {
  const NetworkConfig cfg;
  const auto mc = oracles::mc_campbell_interference(cfg, 30000, 314159);
  const double closed = worst_case_avg_interference(cfg);
  CHECK(std::fabs(mc.mean - closed) <= 0.01 * closed);
}
