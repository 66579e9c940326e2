#pragma once

// The geometry calibration document: a measured four-point constant delta-hat
// for the sampling box, plus the frozen genus-2 generators and their lengths.

#include "pql/fuchsian.hpp"
#include "pql/hyperbolic.hpp"
#include "pql/random.hpp"
#include "pql/report.hpp"
#include "pql/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pql {

inline constexpr const char* kCalibrationSchema = "pql-calibration/1";

/// Sampling box shared by calibration and every delta-dependent check.
inline SearchBox calibration_box() { return {-4.0, 4.0, -3.0, 3.0}; }

inline HPoint random_point(Rng& rng, const SearchBox& box) {
  return box.point(rng.uniform(box.re_min, box.re_max), rng.uniform(box.log_im_min, box.log_im_max));
}

struct Calibration {
  std::string schema = kCalibrationSchema;
  std::string library_version = kLibraryVersion;
  double delta_hat = 0.0;
  double delta_hat_sampled = 0.0;  // before local ascent
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  SearchBox box = calibration_box();
  std::vector<std::array<double, 4>> octagon_generators;
  double octagon_generator_length = 0.0;
  double injectivity_radius_l3 = 0.0;
};

namespace detail {

using Quad = std::array<double, 8>;  // (re, log im) x 4

inline double quad_defect(const Quad& q, const SearchBox& box) {
  return four_point_defect(box.point(q[0], q[1]), box.point(q[2], q[3]), box.point(q[4], q[5]),
                           box.point(q[6], q[7]));
}

inline Quad clamp_to_box(Quad q, const SearchBox& box) {
  for (std::size_t i = 0; i < 8; i += 2) {
    q[i] = std::clamp(q[i], box.re_min, box.re_max);
    q[i + 1] = std::clamp(q[i + 1], box.log_im_min, box.log_im_max);
  }
  return q;
}

// Coordinate pattern search maximizing the defect inside the box.
inline double ascend(Quad q, const SearchBox& box) {
  double best = quad_defect(q, box);
  for (double step = 0.5; step > 1e-9;) {
    bool improved = false;
    for (std::size_t i = 0; i < 8; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Quad trial = q;
        trial[i] += sgn * step;
        trial = clamp_to_box(trial, box);
        const double v = quad_defect(trial, box);
        if (v > best) {
          best = v;
          q = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace detail

/// Maximum four-point defect over `samples` random quadruples in the box, then
/// sharpened by local ascent from the best few.
inline Calibration calibrate(std::int64_t samples, std::uint64_t seed = 0) {
  if (samples < 1) throw std::invalid_argument("calibrate: samples must be positive");
  Calibration cal;
  cal.samples = samples;
  cal.seed = seed;
  const SearchBox box = cal.box;
  Rng rng(derive_seed(seed, "calibrate/four-point"));
  constexpr std::size_t kKeep = 16;
  std::vector<std::pair<double, detail::Quad>> top;
  for (std::int64_t s = 0; s < samples; ++s) {
    detail::Quad q;
    for (std::size_t i = 0; i < 8; i += 2) {
      q[i] = rng.uniform(box.re_min, box.re_max);
      q[i + 1] = rng.uniform(box.log_im_min, box.log_im_max);
    }
    const double v = detail::quad_defect(q, box);
    if (top.size() < kKeep || v > top.back().first) {
      top.emplace_back(v, q);
      std::sort(top.begin(), top.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
      if (top.size() > kKeep) top.pop_back();
    }
  }
  cal.delta_hat_sampled = top.front().first;
  cal.delta_hat = cal.delta_hat_sampled;
  for (const auto& [v, q] : top) cal.delta_hat = std::max(cal.delta_hat, detail::ascend(q, box));

  const auto gens = genus2_fuchsian();
  for (const auto& g : gens) cal.octagon_generators.push_back(g.entries());
  cal.octagon_generator_length = stable_translation_length(gens[0]);
  cal.injectivity_radius_l3 = injectivity_radius_estimate(gens, 3).value_or(0.0);
  return cal;
}

inline nlohmann::json to_json(const Calibration& c) {
  return {{"schema", c.schema},
          {"library_version", c.library_version},
          {"delta_hat", c.delta_hat},
          {"delta_hat_sampled", c.delta_hat_sampled},
          {"samples", c.samples},
          {"seed", c.seed},
          {"box", {{"re_min", c.box.re_min}, {"re_max", c.box.re_max},
                   {"log_im_min", c.box.log_im_min}, {"log_im_max", c.box.log_im_max}}},
          {"octagon_generators", c.octagon_generators},
          {"octagon_generator_length", c.octagon_generator_length},
          {"injectivity_radius_l3", c.injectivity_radius_l3}};
}

inline Calibration calibration_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != kCalibrationSchema)
    throw std::runtime_error("calibration: unsupported schema '" + j.value("schema", "") + "'");
  Calibration c;
  c.library_version = j.at("library_version").get<std::string>();
  c.delta_hat = j.at("delta_hat").get<double>();
  c.delta_hat_sampled = j.at("delta_hat_sampled").get<double>();
  c.samples = j.at("samples").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& b = j.at("box");
  c.box = {b.at("re_min").get<double>(), b.at("re_max").get<double>(), b.at("log_im_min").get<double>(),
           b.at("log_im_max").get<double>()};
  c.octagon_generators = j.at("octagon_generators").get<std::vector<std::array<double, 4>>>();
  c.octagon_generator_length = j.at("octagon_generator_length").get<double>();
  c.injectivity_radius_l3 = j.at("injectivity_radius_l3").get<double>();
  if (!(c.delta_hat > 0.0)) throw std::runtime_error("calibration: delta_hat must be positive");
  return c;
}

inline void write_calibration(const Calibration& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write calibration file " + path.string());
  out << to_json(c).dump(2) << "\n";
}

inline Calibration read_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("calibration file " + path.string() + " not found; run 'pql calibrate' first");
  return calibration_from_json(nlohmann::json::parse(in));
}

}  // namespace pql
