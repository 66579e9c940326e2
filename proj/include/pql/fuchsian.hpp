#pragma once

// A genus-2 Fuchsian group: side pairings of the regular hyperbolic octagon
// with interior angles pi/4, sides labelled a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1.

#include "pql/hyperbolic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pql {

namespace detail {

// Elliptic isometry fixing i, turning directions at i by `angle`.
inline Isometry rotation_about_i(double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  return {c, s, -s, c};
}

}  // namespace detail

/// Center-to-side-midpoint distance r of the octagon: cosh r = cot(pi/8).
inline double octagon_inradius() { return std::acosh(1.0 / std::tan(std::numbers::pi / 8.0)); }

/// Isometry carrying side `from` onto side `to` and the octagon across side `to`.
/// Sides are indexed 0..7 counterclockwise, side k facing direction k pi/4 from i.
inline Isometry octagon_side_pairing(int from, int to) {
  const double r = octagon_inradius();
  const Isometry shift(std::exp(r), 0.0, 0.0, std::exp(-r));  // side at angle pi -> side at angle 0
  const double quarter = std::numbers::pi / 4.0;
  return detail::rotation_about_i(to * quarter) * shift * detail::rotation_about_i(std::numbers::pi - from * quarter);
}

/// The eight factors of the surface relator, in order:
/// A1, B1, A1^-1, B1^-1, A2, B2, A2^-1, B2^-1.
inline std::array<Isometry, 8> genus2_fuchsian() {
  const Isometry a1 = octagon_side_pairing(2, 0);
  const Isometry b1 = octagon_side_pairing(1, 3);
  const Isometry a2 = octagon_side_pairing(6, 4);
  const Isometry b2 = octagon_side_pairing(5, 7);
  return {a1, b1, a1.inverse(), b1.inverse(), a2, b2, a2.inverse(), b2.inverse()};
}

inline Isometry relator_product(std::span<const Isometry> factors) {
  Isometry acc = Isometry::identity();
  for (const Isometry& m : factors) acc = acc * m;
  return acc;
}

/// Minimum stable length over loxodromic elements given by nonempty reduced words
/// of length <= max_len in the generators and their inverses; nullopt if none is loxodromic.
inline std::optional<double> injectivity_radius_estimate(std::span<const Isometry> gens, int max_len) {
  if (max_len < 1) throw std::invalid_argument("injectivity_radius_estimate: word length must be >= 1");
  std::vector<Isometry> letters;
  for (const auto& g : gens) letters.push_back(g);
  for (const auto& g : gens) letters.push_back(g.inverse());
  const std::size_t k = gens.size();
  auto inverse_letter = [k](std::size_t l) { return l < k ? l + k : l - k; };

  std::optional<double> best;
  struct Frontier {
    Isometry value;
    std::size_t last;
  };
  std::vector<Frontier> frontier;
  for (std::size_t l = 0; l < letters.size(); ++l) frontier.push_back({letters[l], l});
  for (int len = 1; len <= max_len; ++len) {
    for (const auto& f : frontier) {
      if (classify(f.value) == IsometryType::Loxodromic) {
        const double s = stable_translation_length(f.value);
        if (!best || s < *best) best = s;
      }
    }
    if (len == max_len) break;
    std::vector<Frontier> next;
    next.reserve(frontier.size() * (letters.size() - 1));
    for (const auto& f : frontier)
      for (std::size_t l = 0; l < letters.size(); ++l)
        if (l != inverse_letter(f.last)) next.push_back({f.value * letters[l], l});
    frontier = std::move(next);
  }
  return best;
}

}  // namespace pql
