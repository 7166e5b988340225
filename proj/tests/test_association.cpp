#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmwcache/association.hpp"
#include "mmwcache/rng.hpp"

using namespace mmwcache;

namespace {

CachingPolicy policy_of(std::vector<double> q) {
  CachingPolicy p;
  p.q = std::move(q);
  p.kind = PolicyKind::Custom;
  return p;
}

// Thresholds with one file and an explicit search radius.
AssociationThresholds single_file_thresholds(double radius, double range_los = 1e9,
                                             double range_nlos = 0.0) {
  AssociationThresholds th;
  th.range_los = {range_los};
  th.range_nlos = {range_nlos};
  th.search_radius = {radius};
  return th;
}

}  // namespace

TEST_CASE("gamma scaling factor") {
  const NetworkConfig cfg;
  const ContentLibrary lib = ContentLibrary::uniform_rate(4, 1.2, 1e9, 2, 0);
  SUBCASE("empty policy has nothing to offload to") {
    CHECK(gamma_los_d2d(policy_of({0, 0, 0, 0}), lib, cfg) == 0.0);
  }
  SUBCASE("full caching absorbs every request in self cache") {
    CHECK(gamma_los_d2d(policy_of({1, 1, 1, 1}), lib, cfg) == 0.0);
  }
  SUBCASE("matches term-by-term summation") {
    const std::vector<double> q = {0.8, 0.45, 0.2, 0.05};
    const auto beta = zipf_popularity(4, 1.2);
    const double a = kPi * cfg.lambda_u * (1.0 - cfg.rho) * cfg.d_l * cfg.d_l;
    double expected = 0;
    for (int i = 0; i < 4; ++i)
      expected += beta[i] * (1.0 - q[i]) * (1.0 - std::exp(-a * q[i]));
    CHECK(gamma_los_d2d(policy_of(q), lib, cfg) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("lies in the unit interval for arbitrary valid policies") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> q(4);
      for (double& v : q) v = rng.uniform();
      const double g = gamma_los_d2d(policy_of(q), lib, cfg);
      CHECK(g >= 0.0);
      CHECK(g < 1.0);
    }
  }
}

TEST_CASE("association thresholds") {
  NetworkConfig cfg;
  const ContentLibrary lib = ContentLibrary::uniform_rate(1, 0.0, 1e9, 1, 0);
  // A zero policy turns the interference scale off, so the ranges are set by
  // the effective noise alone; pick it to land each branch.
  auto with_noise = [&](double noise) {
    DerivedConstants dc;
    dc.noise_d2d = noise;
    dc.worst_avg_interference = 0.123;  // irrelevant at gamma = 0
    dc.threshold_d2d = {1.0};
    return association_thresholds(policy_of({0.0}), dc, lib, cfg);
  };
  const double g2 = cfg.g_m * cfg.g_m;

  SUBCASE("rate-limited LoS range wins when it is short") {
    // range_los = 37.5 = d_l/2 < d_l
    const double base = std::pow(37.5, cfg.alpha_l);
    const AssociationThresholds th = with_noise(g2 / base);
    CHECK(th.range_los[0] == doctest::Approx(37.5).epsilon(1e-12));
    CHECK(th.search_radius[0] == doctest::Approx(37.5).epsilon(1e-12));
  }
  SUBCASE("LoS ball radius wins when NLoS cannot sustain the rate") {
    // range_los > d_l but range_nlos < d_l: threshold settles at d_l
    const double base = std::pow(100.0, cfg.alpha_l);  // range_nlos = base^(1/4) ~ 15.6
    const AssociationThresholds th = with_noise(g2 / base);
    CHECK(th.range_los[0] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(th.range_nlos[0] < cfg.d_l);
    CHECK(th.search_radius[0] == doctest::Approx(cfg.d_l).epsilon(1e-12));
  }
  SUBCASE("NLoS range wins when it reaches past the LoS ball") {
    const double base = 1e8;  // range_nlos = 100 in (d_l, range_los)
    const AssociationThresholds th = with_noise(g2 / base);
    CHECK(th.range_nlos[0] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(th.range_los[0] > th.range_nlos[0]);
    CHECK(th.search_radius[0] == doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("discovery range caps everything") {
    cfg.d_r = 60.0;
    const AssociationThresholds th = with_noise(g2 / 1e8);
    CHECK(th.search_radius[0] == doctest::Approx(60.0).epsilon(1e-12));
  }
  SUBCASE("zero threshold opens the search up to the discovery range") {
    DerivedConstants dc;
    dc.noise_d2d = 1.0;
    dc.worst_avg_interference = 1.0;
    dc.threshold_d2d = {0.0};
    const AssociationThresholds th = association_thresholds(policy_of({0.0}), dc, lib, cfg);
    CHECK(std::isinf(th.range_los[0]));
    CHECK(th.search_radius[0] == cfg.d_r);
  }
  SUBCASE("formula consistency on the reference configuration") {
    const NetworkConfig ref;
    const ContentLibrary full;
    const DerivedConstants dc = derive_constants(ref, full);
    const CachingPolicy p =
        optimize_caching(placement_distances(dc, ref, full), full, ref);
    const AssociationThresholds th = association_thresholds(p, dc, full, ref);
    CHECK(th.interference_scale > 0.0);
    CHECK(th.interference_scale < 1.0);
    for (int i = 0; i < full.n_files; ++i) {
      CHECK(th.range_los[i] >= th.range_nlos[i]);
      CHECK(th.search_radius[i] <= ref.d_r);
      const double direct =
          std::min({th.range_los[i], std::max(th.range_nlos[i], ref.d_l), ref.d_r});
      CHECK(th.search_radius[i] == doctest::Approx(direct).epsilon(1e-14));
    }
    // scaled interference widens the admissible LoS range
    const PlacementGeometry g = placement_distances(dc, ref, full);
    CHECK(th.range_los[0] > g.worst_case_range[0]);
  }
}

TEST_CASE("associate") {
  const NetworkConfig cfg;

  SUBCASE("self cache short-circuits") {
    const auto th = single_file_thresholds(100.0);
    const auto d = associate(0, {0}, {{10.0, {0}}}, {}, th, cfg);
    CHECK(d.mode == DeliveryMode::SelfCache);
    CHECK(d.server_index == -1);
  }
  SUBCASE("closest cacher wins and is LoS inside the ball") {
    const auto th = single_file_thresholds(100.0);
    const std::vector<NeighborCache> nb = {{50.0, {0}}, {30.0, {0}}, {40.0, {}}};
    const auto d = associate(0, {}, nb, {}, th, cfg);
    CHECK(d.mode == DeliveryMode::D2dLos);
    CHECK(d.server_distance == 30.0);
    CHECK(d.server_index == 1);
  }
  SUBCASE("cacher beyond the LoS ball is NLoS") {
    const auto th = single_file_thresholds(100.0);
    const std::vector<NeighborCache> nb = {{90.0, {0}}};
    const auto d = associate(0, {}, nb, {}, th, cfg);
    CHECK(d.mode == DeliveryMode::D2dNlos);
    CHECK(d.server_distance == 90.0);
  }
  SUBCASE("non-cachers are invisible") {
    const auto th = single_file_thresholds(100.0);
    const std::vector<NeighborCache> nb = {{40.0, {1, 2}}, {60.0, {0}}};
    const auto d = associate(0, {}, nb, {}, th, cfg);
    CHECK(d.server_index == 1);
    CHECK(d.server_distance == 60.0);
  }
  SUBCASE("equidistant cachers resolve to the lowest index") {
    const auto th = single_file_thresholds(100.0);
    const std::vector<NeighborCache> nb = {{50.0, {0}}, {50.0, {0}}};
    CHECK(associate(0, {}, nb, {}, th, cfg).server_index == 0);
  }
  SUBCASE("out-of-range cacher falls back to the cellular path") {
    const auto th = single_file_thresholds(45.0);
    const std::vector<NeighborCache> nb = {{50.0, {0}}};
    CHECK(associate(0, {}, nb, {0}, th, cfg).mode == DeliveryMode::CellularFronthaul);
    CHECK(associate(0, {}, nb, {}, th, cfg).mode == DeliveryMode::CellularBackhaul);
  }
  SUBCASE("empty neighborhood is valid") {
    const auto th = single_file_thresholds(45.0);
    CHECK(associate(0, {}, {}, {0}, th, cfg).mode == DeliveryMode::CellularFronthaul);
  }
  SUBCASE("bad file index is rejected") {
    const auto th = single_file_thresholds(45.0);
    CHECK_THROWS_AS(associate(1, {}, {}, {}, th, cfg), std::invalid_argument);
    CHECK_THROWS_AS(associate(-1, {}, {}, {}, th, cfg), std::invalid_argument);
  }
}

TEST_CASE("association properties on random instances") {
  const NetworkConfig cfg;
  Rng rng(321);
  for (int t = 0; t < 200; ++t) {
    const int n_files = 1 + static_cast<int>(rng.uniform() * 5);
    AssociationThresholds th;
    th.range_los.assign(n_files, 1e9);
    th.range_nlos.assign(n_files, 0.0);
    th.search_radius.resize(n_files);
    for (double& r : th.search_radius) r = rng.uniform() * cfg.d_r;

    std::vector<NeighborCache> nb(static_cast<size_t>(rng.uniform() * 6));
    for (auto& x : nb) {
      x.distance = rng.uniform() * 200.0;
      for (int f = 0; f < n_files; ++f)
        if (rng.bernoulli(0.4)) x.files.push_back(f);
    }
    const int file = static_cast<int>(rng.uniform() * n_files);
    const std::vector<int> edge = rng.bernoulli(0.5) ? std::vector<int>{file} : std::vector<int>{};

    const DeliveryDecision a = associate(file, {}, nb, edge, th, cfg);
    const DeliveryDecision b = associate(file, {}, nb, edge, th, cfg);
    CHECK(a.mode == b.mode);            // determinism
    CHECK(a.server_index == b.server_index);

    if (is_d2d(a.mode)) {
      CHECK(a.server_distance <= th.search_radius[file]);
      for (const auto& x : nb) {  // no closer cacher was skipped
        const bool has = std::find(x.files.begin(), x.files.end(), file) != x.files.end();
        if (has) CHECK(x.distance >= a.server_distance);
      }
    }

    // enlarging a cache never downgrades a D2D decision to cellular
    if (!nb.empty()) {
      auto nb2 = nb;
      nb2[static_cast<size_t>(rng.uniform() * nb.size())].files.push_back(file);
      const DeliveryDecision c = associate(file, {}, nb2, edge, th, cfg);
      if (is_d2d(a.mode)) CHECK(is_d2d(c.mode));
    }
  }
}
