#pragma once

// Named verification checks and the suite runner behind the pql CLI.

#include "pql/calibration.hpp"
#include "pql/cyclotomic.hpp"
#include "pql/fuchsian.hpp"
#include "pql/hyperbolic.hpp"
#include "pql/qn_group.hpp"
#include "pql/random.hpp"
#include "pql/report.hpp"
#include "pql/search.hpp"
#include "pql/surface.hpp"
#include "pql/twist.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pql {

struct CheckRequest {
  std::string check_id;
  nlohmann::json params = nlohmann::json::object();  // key -> scalar
  std::optional<std::filesystem::path> output_path;
};

/// Exit codes: 0 pass, 1 mathematical failure, 2 usage/configuration error.
inline int exit_code(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return 0;
    case CheckStatus::Fail: return 1;
    case CheckStatus::Error: return 2;
  }
  return 2;
}

inline constexpr const char* kDefaultCalibrationPath = "pql-calibration.json";

/// Thrown for missing or malformed calibration; reported as a configuration error.
struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::int64_t int_param(const nlohmann::json& p, const char* key, std::int64_t fallback) {
  if (!p.contains(key)) return fallback;
  const auto& v = p.at(key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("parameter '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline std::int64_t required_int(const nlohmann::json& p, const char* key) {
  if (!p.contains(key)) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
  return int_param(p, key, 0);
}

inline std::string string_param(const nlohmann::json& p, const char* key, const std::string& fallback) {
  if (!p.contains(key)) return fallback;
  const auto& v = p.at(key);
  if (!v.is_string()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::string required_string(const nlohmann::json& p, const char* key) {
  if (!p.contains(key)) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
  return string_param(p, key, "");
}

inline Calibration load_calibration(const nlohmann::json& p) {
  const std::filesystem::path path = string_param(p, "calibration", kDefaultCalibrationPath);
  try {
    return read_calibration(path);
  } catch (const std::exception& e) {
    throw ConfigurationError(e.what());
  }
}

inline void require_positive(std::int64_t v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be positive");
}

// ---------------------------------------------------------------------------
// Algebra checks.

inline void check_cyclotomic(CheckReport& r, const nlohmann::json& p) {
  const std::int64_t n_max = int_param(p, "n", 200);
  require_positive(n_max, "n");
  std::int64_t product_bad = 0, chi_bad = 0, order_bad = 0;
  std::optional<nlohmann::json> product_w, chi_w, order_w;
  for (std::int64_t m = 1; m <= n_max; ++m) {
    IntPolynomial prod = IntPolynomial::monomial(0);
    for (auto d : divisors(m)) prod = prod * cyclotomic_polynomial(d);
    if (!(prod == IntPolynomial::x_pow_minus_one(static_cast<std::size_t>(m)))) {
      ++product_bad;
      if (!product_w) product_w = nlohmann::json{{"n", m}, {"product", prod.to_string()}};
    }
  }
  for (std::int64_t m = 2; m <= std::min<std::int64_t>(n_max, 32); ++m) {
    const auto ctx = ring_context(m);
    for (std::int64_t k = 0; k < m; ++k) {
      const RingElement v = chi_value(ctx, k);
      if (!v.is_zero()) {
        ++chi_bad;
        if (!chi_w) chi_w = nlohmann::json{{"n", m}, {"k", k}, {"value", v.to_string()}};
      }
    }
  }
  for (std::int64_t m = 2; m <= std::min<std::int64_t>(n_max, 64); ++m) {
    const auto order = xi_order(ring_context(m));
    const std::int64_t expected = m == 2 ? 1 : m;
    if (order != expected) {
      ++order_bad;
      if (!order_w) order_w = nlohmann::json{{"n", m}, {"xi_order", order ? nlohmann::json(*order) : nlohmann::json()}};
    }
  }
  r.expect_eq<std::int64_t>("divisor_product_equals_x_pow_n_minus_1_violations", 0, product_bad, product_w);
  r.expect_eq<std::int64_t>("chi_value_nonzero_count", 0, chi_bad, chi_w);
  r.expect_eq<std::int64_t>("xi_order_mismatches", 0, order_bad, order_w);
}

inline void check_metabelian(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const std::int64_t n = required_int(p, "n");
  const std::int64_t trials = int_param(p, "trials", int_param(p, "samples", 1000));
  require_positive(trials, "trials");
  const CheckReport inner = verify_metabelian_periodic(n, trials, seed);
  r.items = inner.items;
  r.status = inner.status;
  r.counterexample = inner.counterexample;
}

inline void check_scc_order(CheckReport& r, const nlohmann::json& p) {
  const int g = static_cast<int>(int_param(p, "genus", int_param(p, "g", 2)));
  const std::int64_t n = required_int(p, "n");
  const SccSpec spec = parse_scc_spec(required_string(p, "spec"));
  const SurfacePresentation pres = standard_presentation(g);
  const Word gamma = scc_word(g, spec);
  const auto f = f_hom(g);
  r.add("f_validates", true, hom_validate(pres, f), hom_validate(pres, f), nullptr,
        nlohmann::json{{"f", image_table(f)}});
  const Word fg = hom_apply(f, gamma);
  const Word expected_fg =
      spec.kind == SccSpec::Kind::NonSeparating ? generator_word(2, 0) : commutator(generator_word(2, 0), generator_word(2, 1));
  r.add("f_of_curve", to_string(expected_fg, Naming::FreePair), to_string(fg, Naming::FreePair), fg == expected_fg);
  const std::int64_t order = scc_witness_order(g, n, spec);
  r.expect_eq<std::int64_t>("witness_order", n, order,
                            nlohmann::json{{"curve", to_string(gamma)},
                                           {"image", to_json(hom_apply(qn_witness(g, n), gamma))}});
  const auto trivial = scc_first_trivial_power(g, n, spec);
  r.add("first_trivial_power_below_n", nullptr, trivial ? nlohmann::json(*trivial) : nlohmann::json(nullptr),
        !trivial.has_value(), nullptr, nlohmann::json{{"curve", to_string(gamma)}, {"k", trivial.value_or(0)}});
}

inline Endomorphism maybe_corrupt(Endomorphism e, const nlohmann::json& p) {
  if (string_param(p, "fault", "") == "corrupt-twist") e.images[static_cast<std::size_t>(b_gen(1))] = generator_word(e.rank(), a_gen(1));
  return e;
}

inline void check_twist_valid(CheckReport& r, const nlohmann::json& p) {
  const int g = static_cast<int>(int_param(p, "genus", int_param(p, "g", 2)));
  const TwistSpec spec = parse_twist_spec(required_string(p, "spec"));
  const SurfacePresentation pres = standard_presentation(g);
  const Endomorphism t = maybe_corrupt(twist(g, spec), p);
  const Word image = endo_apply(t, pres.relator);
  const nlohmann::json witness = {{"twist", image_table(t)}, {"relator_image", to_string(image)}};
  r.add("relator_image_conjugate_to_relator", true, endo_validate(pres, t), endo_validate(pres, t), nullptr, witness);
  if (spec.kind == TwistSpec::Kind::AlongA) {
    r.add("relator_image_equals_relator", to_string(pres.relator), to_string(image), image == pres.relator, nullptr,
          witness);
  } else {
    const Word expected = conjugate(twist_curve(g, spec), pres.relator);
    r.add("relator_image_equals_curve_conjugate", to_string(expected), to_string(image), image == expected, nullptr,
          witness);
  }
  const std::int64_t det = integer_determinant(abelianization_matrix(t));
  r.add("abelianization_determinant_is_unit", "+-1", det, det == 1 || det == -1, nullptr, witness);
}

inline void check_twist_trivial(CheckReport& r, const nlohmann::json& p) {
  const int g = static_cast<int>(int_param(p, "genus", int_param(p, "g", 2)));
  const std::int64_t n = required_int(p, "n");
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  const TwistSpec spec = parse_twist_spec(required_string(p, "spec"));
  const WitnessKind witness = parse_witness(string_param(p, "witness", "qn"));
  if (witness == WitnessKind::QnViaF && n <= 2) throw std::invalid_argument("Q_n witness requires n > 2");
  const CheckReport inner = verify_twist_power_trivial(g, n, spec, witness);
  r.items = inner.items;
  r.status = inner.status;
  r.counterexample = inner.counterexample;
  // |T^n(x)| <= |x| + n|c| for twists along a_j, |x| + 2n|c| for the conjugating twists.
  const Word curve = twist_curve(g, spec);
  const Endomorphism tn = endo_power(twist(g, spec), static_cast<int>(n));
  const std::int64_t factor = spec.kind == TwistSpec::Kind::AlongA ? 1 : 2;
  std::int64_t worst = 0;
  for (const Word& img : tn.images)
    worst = std::max<std::int64_t>(worst, static_cast<std::int64_t>(img.size()) - 1 -
                                              factor * n * static_cast<std::int64_t>(curve.size()));
  r.add("word_length_growth_excess", nlohmann::json{{"at_most", 0}}, worst, worst <= 0);
}

inline void check_commuting_twists(CheckReport& r, const nlohmann::json& p) {
  const int g = static_cast<int>(int_param(p, "genus", int_param(p, "g", 2)));
  const std::int64_t n = required_int(p, "n");
  require_positive(n, "n");
  const std::string specs = required_string(p, "spec");
  const auto comma = specs.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("commuting-twists spec must be 'twist:aI,twist:aJ'");
  const CheckReport inner = verify_commuting_twists(g, n, parse_twist_spec(specs.substr(0, comma)),
                                                    parse_twist_spec(specs.substr(comma + 1)));
  r.items = inner.items;
  r.status = inner.status;
  r.counterexample = inner.counterexample;
}

/// Gamma -> H1(S; Z/n) is onto and kills the n-th powers of the curve representatives
/// and of their images under every implemented twist.
inline void check_h1_surjection(CheckReport& r, const nlohmann::json& p) {
  const int g = static_cast<int>(int_param(p, "genus", int_param(p, "g", 2)));
  const std::int64_t n = int_param(p, "n", 2);
  const SurfacePresentation pres = standard_presentation(g);
  const auto h = h1_hom(g, n);
  r.add("relator_maps_to_zero", true, hom_validate(pres, h), hom_validate(pres, h));
  std::int64_t missing = 0;
  for (int i = 0; i < pres.rank(); ++i) {
    H1Vector e = h.target.identity();
    e.entries[static_cast<std::size_t>(i)] = 1 % n;
    if (!(hom_apply(h, pres.generator(i)) == e)) ++missing;
  }
  r.expect_eq<std::int64_t>("basis_vectors_not_hit", 0, missing);
  std::int64_t bad = 0;
  std::optional<nlohmann::json> cex;
  std::vector<Word> curves;
  for (const auto& s : all_scc_specs(g)) curves.push_back(scc_word(g, s));
  for (int i = 1; i <= g; ++i) curves.push_back(pres.b(i));
  const std::size_t base = curves.size();
  for (const auto& ts : all_twist_specs(g))
    for (std::size_t c = 0; c < base; ++c) curves.push_back(endo_apply(twist(g, ts), curves[c]));
  for (const Word& c : curves) {
    if (!hom_apply(h, power(c, n)).is_zero()) {
      ++bad;
      if (!cex) cex = nlohmann::json{{"curve", to_string(c)}};
    }
  }
  r.expect_eq<std::int64_t>("curve_powers_not_killed", 0, bad, cex);
}

// ---------------------------------------------------------------------------
// Geometry checks.

/// Loxodromic with fixed points in [-3, 3] and stable length in [0.1, 4].
inline Isometry random_loxodromic(Rng& rng) {
  double e1 = 0.0, e2 = 0.0;
  do {
    e1 = rng.uniform(-3.0, 3.0);
    e2 = rng.uniform(-3.0, 3.0);
  } while (std::abs(e1 - e2) < 0.2);
  const double len = rng.uniform(0.1, 4.0);
  const Isometry conj = e2 > e1 ? Isometry(e2, e1, 1.0, 1.0) : Isometry(-e2, e1, -1.0, 1.0);
  const Isometry diag(std::exp(0.5 * len), 0.0, 0.0, std::exp(-0.5 * len));
  const Isometry m = conj * diag * conj.inverse();
  return rng.uniform() < 0.5 ? m : Isometry(-m.a(), -m.b(), -m.c(), -m.d());
}

inline nlohmann::json to_json(const Isometry& m) { return m.entries(); }
inline nlohmann::json to_json(const HPoint& x) { return {x.re(), x.im()}; }

inline SearchOptions search_options(const nlohmann::json& p, int fallback) {
  SearchOptions o;
  o.resolution = static_cast<int>(int_param(p, "resolution", fallback));
  if (o.resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  return o;
}

inline void check_four_point(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const Calibration cal = load_calibration(p);
  const std::int64_t samples = int_param(p, "samples", 100000);
  require_positive(samples, "samples");
  Rng rng(derive_seed(seed, "four-point/fresh"));
  double worst = -std::numeric_limits<double>::infinity();
  nlohmann::json witness;
  for (std::int64_t s = 0; s < samples; ++s) {
    const HPoint x = random_point(rng, cal.box), y = random_point(rng, cal.box), z = random_point(rng, cal.box),
                 t = random_point(rng, cal.box);
    const double v = four_point_defect(x, y, z, t);
    if (v > worst) {
      worst = v;
      witness = {to_json(x), to_json(y), to_json(z), to_json(t)};
    }
  }
  r.expect_le("max_four_point_defect", worst, cal.delta_hat, 1e-6, nlohmann::json{{"quadruple", witness}});
}

inline void check_metric(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const std::int64_t samples = int_param(p, "samples", 100000);
  require_positive(samples, "samples");
  const SearchBox box = calibration_box();
  Rng rng(derive_seed(seed, "metric"));
  double worst_tri = -std::numeric_limits<double>::infinity(), worst_sym = 0.0;
  nlohmann::json tri_w;
  for (std::int64_t s = 0; s < samples; ++s) {
    const HPoint x = random_point(rng, box), y = random_point(rng, box), z = random_point(rng, box);
    const double excess = distance(x, z) - distance(x, y) - distance(y, z);
    if (excess > worst_tri) {
      worst_tri = excess;
      tri_w = {to_json(x), to_json(y), to_json(z)};
    }
    worst_sym = std::max(worst_sym, std::abs(distance(x, y) - distance(y, x)));
  }
  r.expect_le("distance_triangle_excess", worst_tri, 0.0, 1e-12, nlohmann::json{{"triple", tri_w}});
  r.expect_le("distance_symmetry_error", worst_sym, 0.0, 1e-12);

  double worst_cone = -std::numeric_limits<double>::infinity();
  nlohmann::json cone_w;
  for (std::int64_t s = 0; s < samples; ++s) {
    const ConeParams cp(rng.uniform(0.3, 3.0), rng.uniform(2.0 * std::numbers::pi, 5.0 * std::numbers::pi));
    double pos[3], rad[3];
    for (int i = 0; i < 3; ++i) {
      pos[i] = rng.uniform(0.0, cp.total_angle());
      rad[i] = rng.uniform(0.0, cp.rho());
    }
    auto dy = [&](int i, int j) {
      const double gap = std::abs(pos[i] - pos[j]);
      return std::min(gap, cp.total_angle() - gap) * std::sinh(cp.rho());
    };
    auto dc = [&](int i, int j) { return cone_distance(cp, dy(i, j), rad[i], rad[j]); };
    const double excess = dc(0, 2) - dc(0, 1) - dc(1, 2);
    if (excess > worst_cone) {
      worst_cone = excess;
      cone_w = {{"rho", cp.rho()}, {"total_angle", cp.total_angle()}, {"angles", pos}, {"radii", rad}};
    }
  }
  r.expect_le("cone_triangle_excess", worst_cone, 0.0, 1e-12, cone_w);
}

inline void check_lengths(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const Calibration cal = load_calibration(p);
  const std::int64_t samples = int_param(p, "samples", 50);
  require_positive(samples, "samples");
  const SearchOptions opts = search_options(p, 48);
  Rng rng(derive_seed(seed, "lengths"));
  double worst_low = -std::numeric_limits<double>::infinity();
  double worst_high = -std::numeric_limits<double>::infinity();
  double worst_power = 0.0;
  nlohmann::json w_low, w_high, w_pow;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Isometry m = random_loxodromic(rng);
    const double stable = stable_translation_length(m);
    const SearchResult res = displacement_min(m, cal.box, opts);
    const double low = stable - res.value;  // displacement below the stable length
    const double high = res.value - (stable + 8.0 * cal.delta_hat);
    if (low > worst_low) {
      worst_low = low;
      w_low = {{"matrix", to_json(m)}, {"argmin", to_json(res.argmin)}, {"value", res.value}, {"stable", stable}};
    }
    if (high > worst_high) {
      worst_high = high;
      w_high = {{"matrix", to_json(m)}, {"value", res.value}, {"stable", stable}};
    }
    for (int k = 1; k <= 5; ++k) {
      const double err = std::abs(stable_translation_length(m.power(k)) - k * stable);
      if (err > worst_power) {
        worst_power = err;
        w_pow = {{"matrix", to_json(m)}, {"k", k}};
      }
    }
  }
  r.expect_le("stable_minus_displacement_min", worst_low, 0.0, 1e-6, w_low);
  r.expect_le("displacement_min_minus_stable_plus_8delta", worst_high, 0.0, 0.0, w_high);
  r.expect_le("power_additivity_error", worst_power, 0.0, 1e-9, w_pow);
  r.params["resolution"] = opts.resolution;
}

inline void check_cone(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const std::int64_t samples = int_param(p, "samples", 10000);
  require_positive(samples, "samples");
  Rng rng(derive_seed(seed, "cone"));
  double apex = 0.0, zero = 0.0, saturate = 0.0, loc_zero = 0.0, loc_pi = 0.0, agree = 0.0;
  nlohmann::json agree_w;
  for (std::int64_t s = 0; s < samples; ++s) {
    const ConeParams cp(rng.uniform(0.3, 3.0), rng.uniform(2.0 * std::numbers::pi, 5.0 * std::numbers::pi));
    const double r1 = rng.uniform(0.0, cp.rho()), r2 = rng.uniform(0.0, cp.rho());
    const double dy = rng.uniform(0.0, 0.5 * cp.circumference());
    apex = std::max(apex, std::abs(cone_distance(cp, dy, r1, 0.0) - r1));
    zero = std::max(zero, std::abs(cone_distance(cp, 0.0, r1, r2) - std::abs(r1 - r2)));
    const double big = rng.uniform(std::numbers::pi, 2.0 * std::numbers::pi) * std::sinh(cp.rho());
    saturate = std::max(saturate, std::abs(cone_distance(cp, big, r1, r2) - (r1 + r2)));
    loc_zero = std::max(loc_zero, std::abs(cone_law_of_cosines(cp, 0.0, r1, r2) - std::abs(r1 - r2)));
    loc_pi = std::max(loc_pi, std::abs(cone_law_of_cosines(cp, std::numbers::pi, r1, r2) - (r1 + r2)));
    // Matched parameters: Y is the circle of circumference Theta sinh(rho).
    const double theta = rng.uniform(-2.0 * cp.total_angle(), 2.0 * cp.total_angle());
    const double along = std::fmod(std::abs(theta), cp.total_angle());
    const double dy_circle = std::min(along, cp.total_angle() - along) * std::sinh(cp.rho());
    const double err = std::abs(cone_law_of_cosines(cp, theta, r1, r2) - cone_distance(cp, dy_circle, r1, r2));
    if (err > agree) {
      agree = err;
      agree_w = {{"rho", cp.rho()}, {"total_angle", cp.total_angle()}, {"theta", theta}, {"r1", r1}, {"r2", r2}};
    }
  }
  r.expect_le("apex_case_error", apex, 0.0, 1e-12);
  r.expect_le("zero_angle_case_error", zero, 0.0, 1e-12);
  r.expect_le("pi_saturation_case_error", saturate, 0.0, 1e-12);
  r.expect_le("law_of_cosines_zero_angle_error", loc_zero, 0.0, 1e-12);
  r.expect_le("law_of_cosines_pi_error", loc_pi, 0.0, 1e-12);
  r.expect_le("law_of_cosines_vs_cone_metric", agree, 0.0, 1e-12, agree_w);
}

inline EnergyConfig random_energy_config(Rng& rng, const SearchOptions& opts) {
  EnergyConfig cfg;
  const auto count = rng.integer(1, 4);
  for (std::int64_t i = 0; i < count; ++i) cfg.isometries.push_back(random_loxodromic(rng));
  cfg.box = calibration_box();
  cfg.options = opts;
  const auto balls = rng.integer(1, 2);
  for (std::int64_t i = 0; i < balls; ++i)
    cfg.excluded_balls.push_back({random_point(rng, cfg.box), rng.uniform(0.2, 1.0)});
  return cfg;
}

inline void check_energy(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const std::int64_t samples = int_param(p, "samples", 100);
  require_positive(samples, "samples");
  const SearchOptions opts = search_options(p, 40);
  constexpr double tol = 1e-3;
  Rng rng(derive_seed(seed, "energy"));
  double w1 = -std::numeric_limits<double>::infinity(), w2 = w1, w3 = w1;
  nlohmann::json c1, c2, c3;
  for (std::int64_t s = 0; s < samples; ++s) {
    const EnergyConfig cfg = random_energy_config(rng, opts);
    const double linf = energy(cfg, EnergyNorm::LInf).value;
    const double l1 = energy(cfg, EnergyNorm::L1).value;
    const double l1p = restricted_energy(cfg).value;
    const double u = static_cast<double>(cfg.isometries.size());
    nlohmann::json mats = nlohmann::json::array();
    for (const auto& m : cfg.isometries) mats.push_back(to_json(m));
    const nlohmann::json w = {{"U", mats}, {"linf", linf}, {"l1", l1}, {"l1_restricted", l1p}};
    if (linf - l1 > w1) { w1 = linf - l1; c1 = w; }
    if (l1 - u * linf > w2) { w2 = l1 - u * linf; c2 = w; }
    if (l1 - l1p > w3) { w3 = l1 - l1p; c3 = w; }
  }
  r.expect_le("linf_minus_l1", w1, 0.0, tol, c1);
  r.expect_le("l1_minus_card_times_linf", w2, 0.0, tol, c2);
  r.expect_le("l1_minus_restricted_l1", w3, 0.0, tol, c3);
  r.params["resolution"] = opts.resolution;
}

inline void check_fuchsian(CheckReport& r) {
  const auto gens = genus2_fuchsian();
  const double relator_err = distance_to_pm_identity(relator_product(gens));
  r.expect_le("relator_distance_to_pm_identity", relator_err, 0.0, 1e-9);
  std::int64_t non_lox = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& g : gens) {
    if (classify(g) != IsometryType::Loxodromic) ++non_lox;
    lo = std::min(lo, stable_translation_length(g));
    hi = std::max(hi, stable_translation_length(g));
  }
  r.expect_eq<std::int64_t>("non_loxodromic_generators", 0, non_lox);
  r.expect_le("generator_length_spread", hi - lo, 0.0, 1e-9);
  const auto inj = injectivity_radius_estimate(gens, 3);
  r.add("injectivity_radius_l3", nlohmann::json{{"greater_than", 0.0}}, inj ? nlohmann::json(*inj) : nlohmann::json(),
        inj.has_value() && *inj > 0.0);
}

inline void check_thinness(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const Calibration cal = load_calibration(p);
  const std::int64_t samples = int_param(p, "samples", 20);
  require_positive(samples, "samples");
  Rng rng(derive_seed(seed, "thinness"));
  double worst = -std::numeric_limits<double>::infinity(), worst_stab = 0.0;
  std::int64_t empty = 0;
  nlohmann::json w;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Isometry m = random_loxodromic(rng);
    const double len = stable_translation_length(m);
    for (double extra : {1.0, 5.0}) {
      const ThinnessResult t = thinness_defect(m, len + extra, 400, rng);
      if (t.samples_inside == 0) ++empty;
      worst_stab = std::max(worst_stab, t.worst_stabilization);
      const double excess = t.defect - thinness_bound(cal.delta_hat, len);
      if (excess > worst) {
        worst = excess;
        w = {{"matrix", to_json(m)}, {"d", len + extra}, {"defect", t.defect}, {"bound", thinness_bound(cal.delta_hat, len)}};
      }
    }
  }
  r.expect_le("defect_minus_thinness_bound", worst, 0.0, 0.0, w);
  r.expect_eq<std::int64_t>("cells_without_fix_samples", 0, empty);
  r.expect_le("boundary_product_stabilization", worst_stab, 0.0, 1e-9);
}

inline void check_fix_set(CheckReport& r, const nlohmann::json& p, std::uint64_t seed) {
  const Calibration cal = load_calibration(p);
  const std::int64_t samples = int_param(p, "samples", 20);
  require_positive(samples, "samples");
  const SearchOptions opts = search_options(p, 32);
  Rng rng(derive_seed(seed, "fix-set"));
  std::int64_t violations = 0, empty = 0, nonempty_below = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  nlohmann::json w;
  for (std::int64_t s = 0; s < samples; ++s) {
    std::vector<Isometry> u{random_loxodromic(rng)};
    if (rng.uniform() < 0.5) u.push_back(random_loxodromic(rng));
    EnergyConfig cfg{u, calibration_box(), opts, {}};
    const double lambda = energy(cfg, EnergyNorm::LInf).value;
    std::vector<HPoint> pts;
    for (int k = 0; k < 3000; ++k) pts.push_back(random_point(rng, cfg.box));
    const FixSetProbe probe = fix_set_probe(u, lambda + 1.0, pts, cal.delta_hat);
    if (probe.inside.empty()) ++empty;
    violations += static_cast<std::int64_t>(probe.violations);
    if (probe.worst_margin < worst_margin) {
      worst_margin = probe.worst_margin;
      nlohmann::json mats = nlohmann::json::array();
      for (const auto& m : u) mats.push_back(to_json(m));
      w = {{"U", mats}, {"d", lambda + 1.0}, {"margin", probe.worst_margin}};
    }
    if (u.size() == 1) {
      const double len = stable_translation_length(u[0]);
      const FixSetProbe below = fix_set_probe(u, 0.5 * len, pts, cal.delta_hat);
      if (!below.inside.empty()) ++nonempty_below;
    }
  }
  r.expect_eq<std::int64_t>("displacement_growth_violations", 0, violations, w);
  r.expect_eq<std::int64_t>("cells_without_fix_samples", 0, empty);
  r.expect_eq<std::int64_t>("fix_nonempty_below_translation_length", 0, nonempty_below);
}

struct CheckEntry {
  const char* id;
  bool needs_calibration;
  std::function<void(CheckReport&, const nlohmann::json&, std::uint64_t)> run;
};

inline const std::vector<CheckEntry>& catalogue() {
  static const std::vector<CheckEntry> entries = {
      {"cyclotomic", false, [](auto& r, const auto& p, auto) { check_cyclotomic(r, p); }},
      {"metabelian", false, [](auto& r, const auto& p, auto s) { check_metabelian(r, p, s); }},
      {"scc-order", false, [](auto& r, const auto& p, auto) { check_scc_order(r, p); }},
      {"twist-valid", false, [](auto& r, const auto& p, auto) { check_twist_valid(r, p); }},
      {"twist-trivial", false, [](auto& r, const auto& p, auto) { check_twist_trivial(r, p); }},
      {"commuting-twists", false, [](auto& r, const auto& p, auto) { check_commuting_twists(r, p); }},
      {"h1-surjection", false, [](auto& r, const auto& p, auto) { check_h1_surjection(r, p); }},
      {"four-point", true, [](auto& r, const auto& p, auto s) { check_four_point(r, p, s); }},
      {"metric", false, [](auto& r, const auto& p, auto s) { check_metric(r, p, s); }},
      {"lengths", true, [](auto& r, const auto& p, auto s) { check_lengths(r, p, s); }},
      {"cone", false, [](auto& r, const auto& p, auto s) { check_cone(r, p, s); }},
      {"energy", false, [](auto& r, const auto& p, auto s) { check_energy(r, p, s); }},
      {"fuchsian", false, [](auto& r, const auto&, auto) { check_fuchsian(r); }},
      {"thinness", true, [](auto& r, const auto& p, auto s) { check_thinness(r, p, s); }},
      {"fix-set", true, [](auto& r, const auto& p, auto s) { check_fix_set(r, p, s); }},
  };
  return entries;
}

}  // namespace detail

inline std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& e : detail::catalogue()) ids.emplace_back(e.id);
  return ids;
}

/// Runs one registered check. Mathematical failures produce a fail report;
/// unknown ids, bad parameters and missing calibration produce an error report.
inline CheckReport run_check(const CheckRequest& req) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  report.check_id = req.check_id;
  report.params = req.params;
  report.params.erase("seed");
  report.params.erase("calibration");
  report.seed = static_cast<std::uint64_t>(req.params.value("seed", std::int64_t{0}));
  try {
    const auto& entries = detail::catalogue();
    const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return req.check_id == e.id; });
    if (it == entries.end()) throw std::invalid_argument("unknown check_id '" + req.check_id + "'");
    const std::uint64_t stream = derive_seed(report.seed, req.check_id + "/" + report.params.dump());
    it->run(report, req.params, stream);
  } catch (const std::exception& e) {
    report.items.clear();
    report.fail_with_error(e.what());
  }
  report.duration_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (req.output_path) {
    std::ofstream out(*req.output_path);
    out << dump_report(report);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Suites.

struct SuiteOptions {
  std::string name = "all";  // algebra | geometry | all
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> report_dir;
  std::filesystem::path calibration = kDefaultCalibrationPath;
  bool corrupt_twist = false;  // fault injection for the regression harness
  bool stable = false;         // write duration_ms as 0
  unsigned threads = 0;        // 0 => hardware concurrency
};

struct SuiteResult {
  std::vector<CheckReport> reports;
  int exit_code = 0;
  std::string message;
  std::size_t passed = 0, failed = 0, errored = 0;
};

inline std::vector<CheckRequest> algebra_cells(const SuiteOptions& opt) {
  using nlohmann::json;
  std::vector<CheckRequest> cells;
  const auto seed = static_cast<std::int64_t>(opt.seed);
  cells.push_back({"cyclotomic", json{{"n", 200}}, {}});
  for (int n = 3; n <= 12; ++n) cells.push_back({"metabelian", json{{"n", n}, {"trials", 1000}, {"seed", seed}}, {}});
  for (int g = 2; g <= 4; ++g)
    for (int n = 3; n <= 12; ++n)
      for (const auto& s : all_scc_specs(g))
        cells.push_back({"scc-order", json{{"genus", g}, {"n", n}, {"spec", to_string(s)}}, {}});
  for (int g = 2; g <= 3; ++g) {
    for (const auto& t : all_twist_specs(g)) {
      json p{{"genus", g}, {"spec", to_string(t)}};
      if (opt.corrupt_twist) p["fault"] = "corrupt-twist";
      cells.push_back({"twist-valid", p, {}});
    }
    for (int n = 3; n <= 10; ++n)
      for (const auto& t : all_twist_specs(g))
        for (const char* w : {"qn", "h1"})
          cells.push_back({"twist-trivial", json{{"genus", g}, {"n", n}, {"spec", to_string(t)}, {"witness", w}}, {}});
    for (int n = 3; n <= 10; ++n)
      for (int i = 1; i <= g; ++i)
        for (int j = i + 1; j <= g; ++j)
          cells.push_back({"commuting-twists",
                           json{{"genus", g}, {"n", n},
                                {"spec", to_string(TwistSpec::along_a(i)) + "," + to_string(TwistSpec::along_a(j))}},
                           {}});
  }
  for (int g = 2; g <= 4; ++g) cells.push_back({"h1-surjection", json{{"genus", g}, {"n", 2}}, {}});
  return cells;
}

inline std::vector<CheckRequest> geometry_cells(const SuiteOptions& opt) {
  using nlohmann::json;
  const auto seed = static_cast<std::int64_t>(opt.seed);
  const std::string cal = opt.calibration.string();
  return {
      {"four-point", json{{"samples", 100000}, {"seed", seed}, {"calibration", cal}}, {}},
      {"metric", json{{"samples", 100000}, {"seed", seed}}, {}},
      {"lengths", json{{"samples", 50}, {"seed", seed}, {"calibration", cal}}, {}},
      {"cone", json{{"samples", 10000}, {"seed", seed}}, {}},
      {"energy", json{{"samples", 100}, {"seed", seed}}, {}},
      {"fuchsian", json::object(), {}},
      {"thinness", json{{"samples", 20}, {"seed", seed}, {"calibration", cal}}, {}},
      {"fix-set", json{{"samples", 20}, {"seed", seed}, {"calibration", cal}}, {}},
  };
}

inline std::string cell_file_name(const CheckReport& r, std::size_t index) {
  std::string name = std::to_string(index) + "_" + r.check_id;
  for (const auto& [k, v] : r.params.items()) {
    std::string val = v.is_string() ? v.get<std::string>() : v.dump();
    for (char& c : val)
      if (c == ':' || c == ',' || c == '/') c = '-';
    name += "_" + k + "-" + val;
  }
  return name + ".json";
}

inline SuiteResult run_suite(const SuiteOptions& opt) {
  SuiteResult result;
  std::vector<CheckRequest> cells;
  const bool algebra = opt.name == "algebra" || opt.name == "all";
  const bool geometry = opt.name == "geometry" || opt.name == "all";
  if (!algebra && !geometry) {
    result.exit_code = 2;
    result.message = "unknown suite '" + opt.name + "' (expected algebra, geometry or all)";
    return result;
  }
  if (geometry && !std::filesystem::exists(opt.calibration)) {
    result.exit_code = 2;
    result.message = "calibration file " + opt.calibration.string() + " not found; run 'pql calibrate' first";
    return result;
  }
  if (algebra) cells = algebra_cells(opt);
  if (geometry) {
    auto g = geometry_cells(opt);
    cells.insert(cells.end(), g.begin(), g.end());
  }

  result.reports.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) result.reports[i] = run_check(cells[i]);
  };
  const unsigned n_threads = std::max(1U, opt.threads ? opt.threads : std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& r : result.reports) {
    switch (r.status) {
      case CheckStatus::Pass: ++result.passed; break;
      case CheckStatus::Fail: ++result.failed; break;
      case CheckStatus::Error: ++result.errored; break;
    }
  }
  result.exit_code = result.errored ? 2 : (result.failed ? 1 : 0);

  if (opt.report_dir) {
    std::filesystem::create_directories(*opt.report_dir);
    std::ofstream summary(*opt.report_dir / "summary.ndjson");
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
      const auto& r = result.reports[i];
      const std::string file = cell_file_name(r, i);
      std::ofstream(*opt.report_dir / file) << dump_report(r, opt.stable);
      summary << nlohmann::json{{"check_id", r.check_id}, {"params", r.params}, {"status", to_string(r.status)},
                                {"report", file}}
                     .dump()
              << "\n";
    }
  }
  return result;
}

}  // namespace pql
