#pragma once

// Numerical infima over a region of the half-plane: grid scan followed by a
// rotating-direction pattern search. Results always carry the argmin and the
// grid resolution that produced them.

#include "pql/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pql {

/// Box in (Re z, log Im z) coordinates.
struct SearchBox {
  double re_min = -4.0;
  double re_max = 4.0;
  double log_im_min = -3.0;
  double log_im_max = 3.0;

  bool degenerate() const { return !(re_max > re_min) || !(log_im_max > log_im_min); }
  bool contains(double re, double log_im) const {
    return re >= re_min && re <= re_max && log_im >= log_im_min && log_im <= log_im_max;
  }
  HPoint point(double re, double log_im) const { return {re, std::exp(log_im)}; }
};

struct SearchOptions {
  int resolution = 48;      // grid points per axis
  int starts = 6;           // best grid points refined
  int refine_steps = 20000;  // pattern-search iteration cap per start
  double min_step = 1e-11;
};

struct SearchResult {
  double value = std::numeric_limits<double>::infinity();
  HPoint argmin{0.0, 1.0};
  int resolution = 0;
};

using Objective = std::function<double(const HPoint&)>;
using Feasible = std::function<bool(const HPoint&)>;

/// Minimizes `f` over the feasible part of the box. Throws if no grid point is feasible.
inline SearchResult minimize_over_box(const Objective& f, const SearchBox& box, const SearchOptions& opts,
                                      const Feasible& feasible = {}) {
  if (box.degenerate()) throw std::invalid_argument("search domain is degenerate");
  if (opts.resolution < 2) throw std::invalid_argument("search resolution must be >= 2");
  auto ok = [&](double re, double li) { return box.contains(re, li) && (!feasible || feasible(box.point(re, li))); };

  struct Candidate {
    double value, re, li;
  };
  std::vector<Candidate> grid;
  const int n = opts.resolution;
  const double h_re = (box.re_max - box.re_min) / (n - 1);
  const double h_li = (box.log_im_max - box.log_im_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = box.re_min + i * h_re;
      const double li = box.log_im_min + j * h_li;
      if (!ok(re, li)) continue;
      grid.push_back({f(box.point(re, li)), re, li});
    }
  }
  if (grid.empty()) throw std::domain_error("search domain has no feasible point");
  const auto k = std::min<std::size_t>(grid.size(), static_cast<std::size_t>(std::max(1, opts.starts)));
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(k), grid.end(),
                    [](const Candidate& x, const Candidate& y) { return x.value < y.value; });

  constexpr int kDirections = 16;
  constexpr int kRotations = 4;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Candidate best = grid.front();
  for (std::size_t s = 0; s < k; ++s) {
    Candidate cur = grid[s];
    double step = std::max(h_re, h_li);
    double offset = 0.0;
    int misses = 0;
    for (int it = 0; it < opts.refine_steps && step > opts.min_step; ++it) {
      bool improved = false;
      for (int d = 0; d < kDirections; ++d) {
        const double ang = offset + 2.0 * std::numbers::pi * d / kDirections;
        const double re = cur.re + step * std::cos(ang);
        const double li = cur.li + step * std::sin(ang);
        if (!ok(re, li)) continue;
        const double v = f(box.point(re, li));
        if (v < cur.value) {
          cur = {v, re, li};
          improved = true;
        }
      }
      offset += golden;
      // Max-type energies have ridges where descent cones are narrow: try a few
      // rotated direction sets before shrinking.
      if (improved) {
        misses = 0;
      } else if (++misses == kRotations) {
        misses = 0;
        step *= 0.5;
      }
    }
    if (cur.value < best.value) best = cur;
  }
  return {best.value, box.point(best.re, best.li), n};
}

/// Numerical min of d(Mx, x) over the box.
inline SearchResult displacement_min(const Isometry& m, const SearchBox& box, const SearchOptions& opts = {}) {
  return minimize_over_box([&](const HPoint& x) { return distance(m.apply(x), x); }, box, opts);
}

// ---------------------------------------------------------------------------
// Energies.

struct ExcludedBall {
  HPoint center;
  double radius;
};

struct EnergyConfig {
  std::vector<Isometry> isometries;
  SearchBox box;
  SearchOptions options;
  std::vector<ExcludedBall> excluded_balls;  // the thin part
};

enum class EnergyNorm { L1, LInf };

/// Sum (L1) or max (LInf) of displacements d(ux, x), u in U.
inline double pointwise_energy(std::span<const Isometry> u, const HPoint& x, EnergyNorm norm) {
  double acc = 0.0;
  for (const Isometry& g : u) {
    const double disp = distance(g.apply(x), x);
    acc = norm == EnergyNorm::L1 ? acc + disp : std::max(acc, disp);
  }
  return acc;
}

inline void check_energy_config(const EnergyConfig& cfg) {
  if (cfg.isometries.empty()) throw std::invalid_argument("energy: U must be nonempty");
  for (const auto& b : cfg.excluded_balls)
    if (!(b.radius > 0.0)) throw std::invalid_argument("energy: excluded ball radii must be positive");
}

inline SearchResult energy(const EnergyConfig& cfg, EnergyNorm norm) {
  check_energy_config(cfg);
  return minimize_over_box([&](const HPoint& x) { return pointwise_energy(cfg.isometries, x, norm); }, cfg.box,
                           cfg.options);
}

/// L1 energy with the basepoint restricted to the thick part (box minus the excluded balls).
inline SearchResult restricted_energy(const EnergyConfig& cfg) {
  check_energy_config(cfg);
  if (cfg.excluded_balls.empty()) throw std::invalid_argument("restricted_energy: excluded balls required");
  auto thick = [&](const HPoint& x) {
    for (const auto& b : cfg.excluded_balls)
      if (distance(x, b.center) < b.radius) return false;
    return true;
  };
  return minimize_over_box([&](const HPoint& x) { return pointwise_energy(cfg.isometries, x, EnergyNorm::L1); },
                           cfg.box, cfg.options, thick);
}

// ---------------------------------------------------------------------------
// Fix sets and thinness.

struct FixSetProbe {
  std::vector<HPoint> inside;
  std::vector<HPoint> outside;
  double diameter = 0.0;       // max pairwise distance among inside samples
  std::size_t checked = 0;     // outside points tested for displacement growth
  std::size_t violations = 0;  // points with sup d(ux,x) < 2 d(x, Fix) + d - 10 delta
  double worst_margin = std::numeric_limits<double>::infinity();
};

/// Classifies samples against Fix(U, d) and checks displacement growth outside it,
/// measuring d(x, Fix) against the sampled inside points.
inline FixSetProbe fix_set_probe(std::span<const Isometry> u, double d, std::span<const HPoint> samples,
                                 double delta_hat) {
  if (!(d > 0.0)) throw std::invalid_argument("fix_set_probe: d must be positive");
  if (samples.empty()) throw std::invalid_argument("fix_set_probe: empty sample set");
  FixSetProbe out;
  std::vector<double> sup_disp;
  for (const HPoint& x : samples) {
    const double s = pointwise_energy(u, x, EnergyNorm::LInf);
    if (s <= d) {
      out.inside.push_back(x);
    } else {
      out.outside.push_back(x);
      sup_disp.push_back(s);
    }
  }
  for (std::size_t i = 0; i < out.inside.size(); ++i)
    for (std::size_t j = i + 1; j < out.inside.size(); ++j)
      out.diameter = std::max(out.diameter, distance(out.inside[i], out.inside[j]));
  if (out.inside.empty()) return out;
  for (std::size_t i = 0; i < out.outside.size(); ++i) {
    double to_fix = std::numeric_limits<double>::infinity();
    for (const HPoint& y : out.inside) to_fix = std::min(to_fix, distance(out.outside[i], y));
    const double margin = sup_disp[i] - (2.0 * to_fix + d - 10.0 * delta_hat);
    out.worst_margin = std::min(out.worst_margin, margin);
    ++out.checked;
    if (margin < 0.0) ++out.violations;
  }
  return out;
}

struct ThinnessResult {
  double defect = -std::numeric_limits<double>::infinity();  // max of <M-,M+>_y - (d - ||M||)/2
  std::size_t samples_inside = 0;
  double worst_stabilization = 0.0;
};

/// Samples points at distance t from the axis of M (with the axis points included)
/// and evaluates the thinness defect on those lying in Fix(M, d).
template <class RngT>
ThinnessResult thinness_defect(const Isometry& m, double d, int samples, RngT& rng) {
  if (classify(m) != IsometryType::Loxodromic) throw std::invalid_argument("thinness_defect: M must be loxodromic");
  const double len = stable_translation_length(m);
  if (d < len) throw std::invalid_argument("thinness_defect: d must be >= the translation length");
  const auto [minus, plus] = fixed_points(m);
  const Isometry to_model = normalizing_map(minus, plus);
  const Isometry from_model = to_model.inverse();
  // Fix(M,d) is the tube sinh(d/2) >= cosh(t) sinh(len/2); sample a bit beyond it.
  const double t_edge = std::acosh(std::max(1.0, std::sinh(0.5 * d) / std::sinh(0.5 * len)));
  ThinnessResult out;
  for (int k = 0; k < samples; ++k) {
    const double t = (k == 0) ? 0.0 : rng.uniform(0.0, t_edge + 0.5);
    const double s = rng.uniform(-2.0, 2.0);
    const double phi = std::atan(std::sinh(t)) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const HPoint model(std::exp(s) * std::sin(phi), std::exp(s) * std::cos(phi));
    const HPoint y = from_model.apply(model);
    if (distance(m.apply(y), y) > d) continue;
    ++out.samples_inside;
    const auto gp = boundary_gromov_product(minus, plus, y);
    out.worst_stabilization = std::max(out.worst_stabilization, gp.stabilization_error);
    out.defect = std::max(out.defect, gp.value - 0.5 * (d - len));
  }
  return out;
}

/// The bound 100 (delta / stable length + 1) delta.
inline double thinness_bound(double delta_hat, double stable_length) {
  return 100.0 * (delta_hat / stable_length + 1.0) * delta_hat;
}

}  // namespace pql
