#include "pql/calibration.hpp"
#include "pql/checks.hpp"
#include "pql/fuchsian.hpp"
#include "pql/search.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace pql;

namespace {

// Brute-force oracle: minimum over a fine regular grid.
double fine_grid_min(const std::function<double(const HPoint&)>& f, const SearchBox& box, int n,
                     const std::function<bool(const HPoint&)>& ok = {}) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const HPoint p = box.point(box.re_min + (box.re_max - box.re_min) * i / (n - 1),
                                 box.log_im_min + (box.log_im_max - box.log_im_min) * j / (n - 1));
      if (!ok || ok(p)) best = std::min(best, f(p));
    }
  return best;
}

}  // namespace

TEST(Search, RejectsDegenerateDomains) {
  const auto f = [](const HPoint& p) { return p.re(); };
  EXPECT_THROW(minimize_over_box(f, {1, 1, 0, 1}, {}), std::invalid_argument);
  SearchOptions bad;
  bad.resolution = 1;
  EXPECT_THROW(minimize_over_box(f, {}, bad), std::invalid_argument);
  EXPECT_THROW(minimize_over_box(f, {}, {}, [](const HPoint&) { return false; }), std::domain_error);
}

TEST(Search, ReportsArgminAndResolution) {
  const HPoint target(0.7, 2.0);
  const auto r = minimize_over_box([&](const HPoint& p) { return distance(p, target); }, {}, {});
  EXPECT_LT(r.value, 1e-8);
  EXPECT_NEAR(r.argmin.re(), 0.7, 1e-7);
  EXPECT_NEAR(r.argmin.im(), 2.0, 1e-7);
  EXPECT_EQ(r.resolution, SearchOptions{}.resolution);
}

TEST(DisplacementMin, Examples) {
  const auto lox = displacement_min(Isometry(2, 0, 0, 0.5), calibration_box());
  EXPECT_NEAR(lox.value, 2.0 * std::log(2.0), 1e-9);
  EXPECT_NEAR(lox.argmin.re(), 0.0, 1e-6);
  EXPECT_NEAR(displacement_min(Isometry::identity(), calibration_box()).value, 0.0, 1e-15);
  // parabolic: displacement 2 asinh(1/(2y)) along iy, so growing boxes push the minimum toward 0
  double previous = std::numeric_limits<double>::infinity();
  for (double top : {1.0, 2.0, 4.0, 8.0}) {
    const auto r = displacement_min(Isometry(1, 1, 0, 1), {-4, 4, -3, top});
    EXPECT_NEAR(r.value, 2.0 * std::asinh(0.5 * std::exp(-top)), 1e-9);
    EXPECT_LT(r.value, previous);
    previous = r.value;
  }
}

TEST(Energy, SingleLoxodromicEqualsTranslationLength) {
  const Isometry m(3, 1, 2, 1);
  EnergyConfig cfg{{m}, calibration_box(), {}, {{HPoint(3.5, 0.1), 0.3}}};
  const double l = stable_translation_length(m);
  EXPECT_NEAR(energy(cfg, EnergyNorm::LInf).value, l, 1e-8);
  EXPECT_NEAR(energy(cfg, EnergyNorm::L1).value, energy(cfg, EnergyNorm::LInf).value, 1e-12);
}

TEST(Energy, InputValidation) {
  EXPECT_THROW(energy(EnergyConfig{}, EnergyNorm::L1), std::invalid_argument);
  EnergyConfig cfg{{Isometry(2, 0, 0, 0.5)}, calibration_box(), {}, {}};
  EXPECT_THROW(restricted_energy(cfg), std::invalid_argument);
  cfg.excluded_balls.push_back({HPoint(0, 1), -1.0});
  EXPECT_THROW(restricted_energy(cfg), std::invalid_argument);
}

TEST(Energy, SearchNoWorseThanFineGridOracle) {
  Rng rng(81);
  SearchOptions opts;
  opts.resolution = 40;
  for (int t = 0; t < 12; ++t) {
    const EnergyConfig cfg = detail::random_energy_config(rng, opts);
    for (auto norm : {EnergyNorm::L1, EnergyNorm::LInf}) {
      const auto f = [&](const HPoint& p) { return pointwise_energy(cfg.isometries, p, norm); };
      EXPECT_LE(energy(cfg, norm).value, fine_grid_min(f, cfg.box, 400) + 1e-9);
    }
    const auto thick = [&](const HPoint& p) {
      for (const auto& b : cfg.excluded_balls)
        if (distance(p, b.center) < b.radius) return false;
      return true;
    };
    const auto f1 = [&](const HPoint& p) { return pointwise_energy(cfg.isometries, p, EnergyNorm::L1); };
    EXPECT_LE(restricted_energy(cfg).value, fine_grid_min(f1, cfg.box, 400, thick) + 1e-9);
  }
}

TEST(Energy, ChainOnRandomConfigs) {
  Rng rng(82);
  SearchOptions opts;
  opts.resolution = 40;
  for (int t = 0; t < 30; ++t) {
    const EnergyConfig cfg = detail::random_energy_config(rng, opts);
    const double linf = energy(cfg, EnergyNorm::LInf).value, l1 = energy(cfg, EnergyNorm::L1).value;
    EXPECT_LE(linf, l1 + 1e-3);
    EXPECT_LE(l1, static_cast<double>(cfg.isometries.size()) * linf + 1e-3);
    EXPECT_LE(l1, restricted_energy(cfg).value + 1e-3);
  }
}

TEST(FixSetProbe, TubeAroundAxis) {
  const Isometry m(2, 0, 0, 0.5);
  const double len = stable_translation_length(m);
  std::vector<HPoint> samples;
  for (double re = -2; re <= 2; re += 0.25)
    for (double li = -2; li <= 2; li += 0.25) samples.push_back({re, std::exp(li)});
  const std::vector<Isometry> u{m};
  const auto near = fix_set_probe(u, len + 0.1, samples, std::log(2.0));
  ASSERT_FALSE(near.inside.empty());
  // tube oracle: sinh(d(mx,x)/2) = cosh(t) sinh(len/2) with t the distance to the axis
  for (const HPoint& p : near.inside) {
    const double t = distance_to_imaginary_axis(p);
    EXPECT_LE(std::cosh(t) * std::sinh(0.5 * len), std::sinh(0.5 * (len + 0.1)) + 1e-12);
  }
  EXPECT_EQ(near.violations, 0u);
  EXPECT_TRUE(fix_set_probe(u, 0.5 * len, samples, std::log(2.0)).inside.empty());
  const std::vector<Isometry> id{Isometry::identity()};
  const auto all = fix_set_probe(id, 0.1, samples, std::log(2.0));
  EXPECT_EQ(all.inside.size(), samples.size());
  EXPECT_EQ(all.checked, 0u);
  EXPECT_THROW(fix_set_probe(u, 0.0, samples, 1.0), std::invalid_argument);
}

TEST(Thinness, AxisPointsHaveNonPositiveDefect) {
  const Isometry m(2, 0, 0, 0.5);
  const double len = stable_translation_length(m);
  for (double y : {0.1, 1.0, 7.0}) {
    const auto gp = boundary_gromov_product({0, false}, {0, true}, {0.0, y});
    EXPECT_NEAR(gp.value, 0.0, 1e-9);
    EXPECT_LE(gp.value - 0.5 * (len + 1.0 - len), 0.0);
  }
  Rng rng(83);
  const auto at_len = thinness_defect(m, len, 200, rng);
  EXPECT_GE(at_len.samples_inside, 1u);
  EXPECT_LE(at_len.defect, 1e-9);
}

TEST(Thinness, DefectMatchesTubeGeometry) {
  // The defect grows with the distance t to the axis, so it peaks on the tube boundary
  // sinh(d/2) = cosh t sinh(len/2), where it equals log cosh t - (d - len)/2.
  Rng rng(84);
  const Isometry m(2, 0, 0, 0.5);
  const double len = stable_translation_length(m), d = len + 5.0;
  const auto r = thinness_defect(m, d, 4000, rng);
  const double t_edge = std::acosh(std::sinh(0.5 * d) / std::sinh(0.5 * len));
  const double peak = std::log(std::cosh(t_edge)) - 0.5 * (d - len);
  EXPECT_LE(r.defect, peak + 1e-9);
  EXPECT_GT(r.defect, peak - 0.05);
  EXPECT_LE(r.defect, thinness_bound(std::log(2.0), len));
  EXPECT_THROW(thinness_defect(Isometry(1, 1, 0, 1), 1.0, 10, rng), std::invalid_argument);
  EXPECT_THROW(thinness_defect(m, 0.5 * len, 10, rng), std::invalid_argument);
}

TEST(Fuchsian, RelatorClosesUp) {
  const auto gens = genus2_fuchsian();
  EXPECT_LE(distance_to_pm_identity(relator_product(gens)), 1e-12);
  for (const auto& g : gens) {
    EXPECT_EQ(classify(g), IsometryType::Loxodromic);
    EXPECT_NEAR(std::abs(g.trace()), 2.0 + std::sqrt(2.0), 1e-12);
  }
}

TEST(Fuchsian, OctagonInradius) {
  EXPECT_NEAR(std::cosh(octagon_inradius()), 1.0 / std::tan(std::numbers::pi / 8), 1e-14);
}

TEST(Fuchsian, InjectivityRadiusEstimate) {
  const auto gens = genus2_fuchsian();
  const auto l1 = injectivity_radius_estimate(gens, 1);
  ASSERT_TRUE(l1.has_value());
  EXPECT_NEAR(*l1, stable_translation_length(gens[0]), 1e-12);
  const auto l3 = injectivity_radius_estimate(gens, 3);
  ASSERT_TRUE(l3.has_value());
  EXPECT_GT(*l3, 0.0);
  EXPECT_LE(*l3, *l1 + 1e-12);
  const std::array<Isometry, 1> single{Isometry(2, 0, 0, 0.5)};
  EXPECT_NEAR(*injectivity_radius_estimate(single, 3), 2 * std::log(2.0), 1e-12);
  const std::array<Isometry, 1> id{Isometry::identity()};
  EXPECT_FALSE(injectivity_radius_estimate(id, 3).has_value());
  EXPECT_THROW(injectivity_radius_estimate(id, 0), std::invalid_argument);
}

TEST(Calibration, RoundTripAndSchema) {
  const Calibration c = calibrate(20000, 5);
  EXPECT_GE(c.delta_hat, c.delta_hat_sampled);
  EXPECT_GT(c.delta_hat, 0.5);
  EXPECT_LT(c.delta_hat, std::log(2.0) + 1e-9);
  const auto path = std::filesystem::temp_directory_path() / "pql-test-calibration.json";
  write_calibration(c, path);
  const Calibration back = read_calibration(path);
  EXPECT_EQ(back.delta_hat, c.delta_hat);
  EXPECT_EQ(back.octagon_generators, c.octagon_generators);
  nlohmann::json j = to_json(c);
  j["schema"] = "other/1";
  EXPECT_THROW(calibration_from_json(j), std::runtime_error);
  EXPECT_THROW(read_calibration(path.string() + ".missing"), std::runtime_error);
  EXPECT_THROW(calibrate(0), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(Calibration, DeterministicGivenSeed) {
  EXPECT_EQ(calibrate(5000, 9).delta_hat, calibrate(5000, 9).delta_hat);
}
