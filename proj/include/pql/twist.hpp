#pragma once

// Dehn-twist endomorphisms of the standard surface presentation.
//
//   AlongA(j):       b_j -> b_j a_j, every other generator fixed.
//   SeparatingCut(i): with c = [a1,b1]...[ai,bi], generators a1..bi fixed and
//                     a_{i+1}..b_g -> c x c^{-1}.

#include "pql/report.hpp"
#include "pql/surface.hpp"
#include "pql/words.hpp"

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pql {

struct Endomorphism {
  int genus = 0;
  std::vector<Word> images;  // 2g words over the same alphabet

  int rank() const noexcept { return 2 * genus; }
  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;
};

inline Endomorphism identity_endo(int genus) {
  Endomorphism e{genus, {}};
  for (int i = 0; i < 2 * genus; ++i) e.images.push_back(generator_word(2 * genus, i));
  return e;
}

/// Substitute-and-reduce.
inline Word endo_apply(const Endomorphism& e, const Word& w) {
  if (w.rank() != e.rank()) throw std::invalid_argument("endo_apply: alphabet mismatch");
  Word acc(e.rank());
  for (const Letter& l : w.letters()) {
    const Word& img = e.images[static_cast<std::size_t>(l.generator)];
    acc = acc * (l.sign > 0 ? img : invert(img));
  }
  return acc;
}

/// (e1 o e2)(x) = e1(e2(x))
inline Endomorphism endo_compose(const Endomorphism& e1, const Endomorphism& e2) {
  if (e1.genus != e2.genus) throw std::invalid_argument("endo_compose: genus mismatch");
  Endomorphism out{e1.genus, {}};
  for (const Word& w : e2.images) out.images.push_back(endo_apply(e1, w));
  return out;
}

inline Endomorphism endo_power(const Endomorphism& e, int m) {
  if (m < 0) throw std::invalid_argument("endo_power: exponent must be >= 0");
  Endomorphism acc = identity_endo(e.genus);
  for (int i = 0; i < m; ++i) acc = endo_compose(e, acc);
  return acc;
}

struct TwistSpec {
  enum class Kind { AlongA, SeparatingCut };
  Kind kind = Kind::AlongA;
  int index = 1;

  static TwistSpec along_a(int j) { return {Kind::AlongA, j}; }
  static TwistSpec separating_cut(int i) { return {Kind::SeparatingCut, i}; }
  friend bool operator==(const TwistSpec&, const TwistSpec&) = default;
};

inline std::string to_string(const TwistSpec& s) {
  return s.kind == TwistSpec::Kind::AlongA ? "twist:a" + std::to_string(s.index)
                                           : "twist:sep:" + std::to_string(s.index);
}

/// "twist:aJ" | "twist:sep:I"
inline TwistSpec parse_twist_spec(std::string_view text) {
  auto number = [&](std::string_view digits) {
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
      throw std::invalid_argument("bad twist spec '" + std::string(text) + "'");
    return std::stoi(std::string(digits));
  };
  if (text.starts_with("twist:sep:")) return TwistSpec::separating_cut(number(text.substr(10)));
  if (text.starts_with("twist:a")) return TwistSpec::along_a(number(text.substr(7)));
  throw std::invalid_argument("bad twist spec '" + std::string(text) + "' (expected twist:aJ or twist:sep:I)");
}

inline std::vector<TwistSpec> all_twist_specs(int genus) {
  std::vector<TwistSpec> out;
  for (int j = 1; j <= genus; ++j) out.push_back(TwistSpec::along_a(j));
  for (int i = 1; i < genus; ++i) out.push_back(TwistSpec::separating_cut(i));
  return out;
}

/// The curve the twist is supported on: a_j, or [a1,b1]...[ai,bi].
inline Word twist_curve(int genus, const TwistSpec& spec) {
  const SurfacePresentation p = standard_presentation(genus);
  if (spec.kind == TwistSpec::Kind::AlongA) {
    if (spec.index < 1 || spec.index > genus) throw std::invalid_argument("AlongA index out of range");
    return p.a(spec.index);
  }
  if (spec.index < 1 || spec.index >= genus) throw std::invalid_argument("SeparatingCut index out of range");
  return commutator_prefix(p, spec.index);
}

inline Endomorphism twist(int genus, const TwistSpec& spec) {
  const Word gamma = twist_curve(genus, spec);
  Endomorphism e = identity_endo(genus);
  if (spec.kind == TwistSpec::Kind::AlongA) {
    auto& img = e.images[static_cast<std::size_t>(b_gen(spec.index))];
    img = img * gamma;
  } else {
    for (int g = 2 * spec.index; g < 2 * genus; ++g) {
      auto& img = e.images[static_cast<std::size_t>(g)];
      img = conjugate(gamma, img);
    }
  }
  return e;
}

/// True iff the relator's image is conjugate to the relator or its inverse.
inline bool endo_validate(const SurfacePresentation& p, const Endomorphism& e) {
  if (e.genus != p.genus) throw std::invalid_argument("endo_validate: genus mismatch");
  const Word image = endo_apply(e, p.relator);
  return conjugacy_equal(image, p.relator) || conjugacy_equal(image, invert(p.relator));
}

/// Exponent-sum matrix M[i][j] = exponent of generator i in e(x_j).
inline std::vector<std::vector<std::int64_t>> abelianization_matrix(const Endomorphism& e) {
  const auto r = static_cast<std::size_t>(e.rank());
  std::vector<std::vector<std::int64_t>> m(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t j = 0; j < r; ++j)
    for (const Letter& l : e.images[j].letters()) m[static_cast<std::size_t>(l.generator)][j] += l.sign;
  return m;
}

/// Fraction-free (Bareiss) integer determinant.
inline std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t n = m.size();
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return n == 0 ? 1 : sign * m[n - 1][n - 1];
}

inline nlohmann::json image_table(const Endomorphism& e) {
  nlohmann::json t = nlohmann::json::object();
  for (int i = 0; i < e.rank(); ++i)
    t[letter_name({i, 1}, Naming::Surface)] = to_string(e.images[static_cast<std::size_t>(i)]);
  return t;
}

enum class WitnessKind { QnViaF, H1Mod };

inline std::string to_string(WitnessKind w) { return w == WitnessKind::QnViaF ? "qn" : "h1"; }

inline WitnessKind parse_witness(std::string_view text) {
  if (text == "qn") return WitnessKind::QnViaF;
  if (text == "h1") return WitnessKind::H1Mod;
  throw std::invalid_argument("bad witness '" + std::string(text) + "' (expected qn or h1)");
}

namespace detail {

template <class Target>
void check_power_trivial(CheckReport& report, const SurfacePresentation& p, const Homomorphism<Target>& witness,
                         const Endomorphism& tn) {
  report.add("witness_kills_relator", true, hom_validate(p, witness), hom_validate(p, witness));
  std::int64_t bad = 0;
  std::optional<nlohmann::json> cex;
  for (int x = 0; x < p.rank(); ++x) {
    const Word gen = p.generator(x);
    if (!witness.target.equal(hom_apply(witness, endo_apply(tn, gen)), hom_apply(witness, gen))) {
      ++bad;
      if (!cex) cex = nlohmann::json{{"generator", to_string(gen)}, {"twist_power_image", to_string(endo_apply(tn, gen))}};
    }
  }
  report.expect_eq<std::int64_t>("generators_moved_by_twist_power", 0, bad, cex);
}

}  // namespace detail

/// witness(T^n(x)) = witness(x) for every generator x.
inline CheckReport verify_twist_power_trivial(int genus, std::int64_t n, const TwistSpec& spec, WitnessKind witness) {
  CheckReport report;
  report.check_id = "twist-trivial";
  report.params = {{"genus", genus}, {"n", n}, {"spec", to_string(spec)}, {"witness", to_string(witness)}};
  const SurfacePresentation p = standard_presentation(genus);
  const Endomorphism t = twist(genus, spec);
  const Endomorphism tn = endo_power(t, static_cast<int>(n));
  report.add("twist_valid", true, endo_validate(p, t), endo_validate(p, t), nullptr,
             nlohmann::json{{"twist", image_table(t)}});
  if (witness == WitnessKind::QnViaF) {
    detail::check_power_trivial(report, p, qn_witness(genus, n), tn);
  } else {
    detail::check_power_trivial(report, p, h1_hom(genus, n), tn);
  }
  return report;
}

/// Disjoint AlongA twists commute, and (T1 T2)^n = T1^n T2^n.
inline CheckReport verify_commuting_twists(int genus, std::int64_t n, const TwistSpec& s1, const TwistSpec& s2) {
  if (s1.kind != TwistSpec::Kind::AlongA || s2.kind != TwistSpec::Kind::AlongA)
    throw std::invalid_argument("verify_commuting_twists: both twists must be AlongA");
  if (s1.index == s2.index) throw std::invalid_argument("verify_commuting_twists: curves must be distinct");
  CheckReport report;
  report.check_id = "commuting-twists";
  report.params = {{"genus", genus}, {"n", n}, {"spec", to_string(s1) + "," + to_string(s2)}};
  const Endomorphism t1 = twist(genus, s1);
  const Endomorphism t2 = twist(genus, s2);
  const Endomorphism t12 = endo_compose(t1, t2);
  const Endomorphism t21 = endo_compose(t2, t1);
  report.add("twists_commute", true, t12 == t21, t12 == t21, nullptr,
             nlohmann::json{{"t1t2", image_table(t12)}, {"t2t1", image_table(t21)}});
  const int m = static_cast<int>(n);
  const Endomorphism lhs = endo_power(t12, m);
  const Endomorphism rhs = endo_compose(endo_power(t1, m), endo_power(t2, m));
  report.add("power_of_product_splits", true, lhs == rhs, lhs == rhs, nullptr,
             nlohmann::json{{"lhs", image_table(lhs)}, {"rhs", image_table(rhs)}});
  return report;
}

}  // namespace pql
