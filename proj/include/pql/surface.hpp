#pragma once

// Closed surface groups <a1,b1,...,ag,bg | [a1,b1]...[ag,bg]>, simple closed
// curve representatives, and witness homomorphisms into F2, Q_n and H1(S; Z/n).

#include "pql/qn_group.hpp"
#include "pql/words.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pql {

inline constexpr int a_gen(int j) { return 2 * (j - 1); }      // a_j, 1-based j
inline constexpr int b_gen(int j) { return 2 * (j - 1) + 1; }  // b_j

struct SurfacePresentation {
  int genus = 0;
  Word relator;

  int rank() const noexcept { return 2 * genus; }
  Word generator(int index) const { return generator_word(rank(), index); }
  Word a(int j) const { return generator(a_gen(j)); }
  Word b(int j) const { return generator(b_gen(j)); }
};

/// [a1,b1][a2,b2]...[ag,bg]
inline SurfacePresentation standard_presentation(int genus) {
  if (genus < 2) throw std::invalid_argument("surface genus must be >= 2, got " + std::to_string(genus));
  SurfacePresentation p{genus, Word(2 * genus)};
  for (int j = 1; j <= genus; ++j) p.relator = p.relator * commutator(p.a(j), p.b(j));
  return p;
}

struct SccSpec {
  enum class Kind { NonSeparating, Separating };
  Kind kind = Kind::NonSeparating;
  int index = 0;  // i for Separating(i)

  static SccSpec nonseparating() { return {Kind::NonSeparating, 0}; }
  static SccSpec separating(int i) { return {Kind::Separating, i}; }

  friend bool operator==(const SccSpec&, const SccSpec&) = default;
};

inline std::string to_string(const SccSpec& s) {
  return s.kind == SccSpec::Kind::NonSeparating ? "nonsep" : "sep:" + std::to_string(s.index);
}

/// "nonsep" | "sep:i"
inline SccSpec parse_scc_spec(std::string_view text) {
  if (text == "nonsep") return SccSpec::nonseparating();
  if (text.starts_with("sep:")) {
    const std::string digits(text.substr(4));
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
      return SccSpec::separating(std::stoi(digits));
  }
  throw std::invalid_argument("bad scc spec '" + std::string(text) + "' (expected nonsep or sep:i)");
}

/// Every curve type for genus g: nonsep, sep:1 .. sep:g-1.
inline std::vector<SccSpec> all_scc_specs(int genus) {
  std::vector<SccSpec> out{SccSpec::nonseparating()};
  for (int i = 1; i < genus; ++i) out.push_back(SccSpec::separating(i));
  return out;
}

/// [a1,b1]...[ai,bi] as a word in the genus-g alphabet.
inline Word commutator_prefix(const SurfacePresentation& p, int i) {
  Word w(p.rank());
  for (int j = 1; j <= i; ++j) w = w * commutator(p.a(j), p.b(j));
  return w;
}

inline Word scc_word(int genus, const SccSpec& spec) {
  const SurfacePresentation p = standard_presentation(genus);
  if (spec.kind == SccSpec::Kind::NonSeparating) return p.a(1);
  if (spec.index < 1 || spec.index >= genus) {
    throw std::invalid_argument("separating index must satisfy 1 <= i < g (i=" + std::to_string(spec.index) +
                                ", g=" + std::to_string(genus) + ")");
  }
  return commutator_prefix(p, spec.index);
}

// ---------------------------------------------------------------------------
// Targets. Each provides Element, identity(), multiply(), inverse(), equal().

struct FreeGroupTarget {
  using Element = Word;
  int rank = 2;
  Element identity() const { return Word(rank); }
  Element multiply(const Element& x, const Element& y) const { return x * y; }
  Element inverse(const Element& x) const { return invert(x); }
  bool equal(const Element& x, const Element& y) const { return x == y; }
};

struct QnTarget {
  using Element = QnElement;
  RingContextPtr ctx;
  Element identity() const { return QnElement::identity(ctx); }
  Element multiply(const Element& x, const Element& y) const { return x * y; }
  Element inverse(const Element& x) const { return x.inverse(); }
  bool equal(const Element& x, const Element& y) const { return x == y; }
};

/// Exponent-sum vector mod n.
struct H1Vector {
  std::int64_t n = 2;
  std::vector<std::int64_t> entries;

  bool is_zero() const {
    for (auto e : entries)
      if (e) return false;
    return true;
  }
  friend bool operator==(const H1Vector&, const H1Vector&) = default;
};

struct H1Target {
  using Element = H1Vector;
  std::int64_t n = 2;
  int dim = 4;
  Element identity() const { return {n, std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0)}; }
  Element multiply(const Element& x, const Element& y) const {
    Element out = identity();
    for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] = detail::mod(x.entries[i] + y.entries[i], n);
    return out;
  }
  Element inverse(const Element& x) const {
    Element out = identity();
    for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] = detail::mod(-x.entries[i], n);
    return out;
  }
  bool equal(const Element& x, const Element& y) const { return x == y; }
};

template <class Target>
struct Homomorphism {
  int domain_rank = 0;
  Target target;
  std::vector<typename Target::Element> images;  // one per domain generator
};

template <class Target>
typename Target::Element hom_apply(const Homomorphism<Target>& h, std::span<const Letter> letters) {
  auto acc = h.target.identity();
  for (const Letter& l : letters) {
    if (l.generator < 0 || l.generator >= h.domain_rank) throw std::out_of_range("hom_apply: alphabet mismatch");
    const auto& img = h.images[static_cast<std::size_t>(l.generator)];
    acc = h.target.multiply(acc, l.sign > 0 ? img : h.target.inverse(img));
  }
  return acc;
}

template <class Target>
typename Target::Element hom_apply(const Homomorphism<Target>& h, const Word& w) {
  if (w.rank() != h.domain_rank) throw std::invalid_argument("hom_apply: alphabet mismatch");
  return hom_apply(h, w.letters());
}

/// True iff the relator is sent to the identity.
template <class Target>
bool hom_validate(const SurfacePresentation& p, const Homomorphism<Target>& h) {
  if (h.domain_rank != p.rank()) throw std::invalid_argument("hom_validate: domain does not match presentation");
  return h.target.equal(hom_apply(h, p.relator), h.target.identity());
}

/// outer o inner, where inner lands in the free group that is outer's domain.
template <class Target>
Homomorphism<Target> hom_compose(const Homomorphism<Target>& outer, const Homomorphism<FreeGroupTarget>& inner) {
  if (inner.target.rank != outer.domain_rank) throw std::invalid_argument("hom_compose: rank mismatch");
  Homomorphism<Target> out{inner.domain_rank, outer.target, {}};
  for (const Word& w : inner.images) out.images.push_back(hom_apply(outer, w));
  return out;
}

/// f: Gamma -> F2 with f(a1) = f(bg) = a, f(b1) = f(ag) = b, all other generators -> 1.
inline Homomorphism<FreeGroupTarget> f_hom(int genus) {
  if (genus < 2) throw std::invalid_argument("f_hom: genus must be >= 2");
  Homomorphism<FreeGroupTarget> f{2 * genus, FreeGroupTarget{2}, std::vector<Word>(2 * genus, Word(2))};
  const Word a = generator_word(2, 0);
  const Word b = generator_word(2, 1);
  f.images[a_gen(1)] = a;
  f.images[b_gen(genus)] = a;
  f.images[b_gen(1)] = b;
  f.images[a_gen(genus)] = b;
  return f;
}

/// rho: F2 -> Q_n, a -> A, b -> B.
inline Homomorphism<QnTarget> rho_hom(std::int64_t n) {
  const QnGenerators gens = qn_generators(n);
  return {2, QnTarget{gens.a.context()}, {gens.a, gens.b}};
}

/// rho o f: Gamma -> Q_n.
inline Homomorphism<QnTarget> qn_witness(int genus, std::int64_t n) { return hom_compose(rho_hom(n), f_hom(genus)); }

/// Abelianization mod n: generator i -> e_i.
inline Homomorphism<H1Target> h1_hom(int genus, std::int64_t n) {
  if (n < 2) throw std::invalid_argument("h1_hom: n must be >= 2");
  const H1Target target{n, 2 * genus};
  Homomorphism<H1Target> h{2 * genus, target, {}};
  for (int i = 0; i < 2 * genus; ++i) {
    auto e = target.identity();
    e.entries[static_cast<std::size_t>(i)] = 1 % n;
    h.images.push_back(e);
  }
  return h;
}

inline H1Vector h1_image(int genus, std::int64_t n, std::span<const Letter> letters) {
  return hom_apply(h1_hom(genus, n), letters);
}

inline H1Vector h1_image(int genus, std::int64_t n, const Word& w) { return hom_apply(h1_hom(genus, n), w); }

/// Order of rho(f(gamma)) in Q_n for the standard representative gamma.
inline std::int64_t scc_witness_order(int genus, std::int64_t n, const SccSpec& spec) {
  const Word gamma = scc_word(genus, spec);
  const auto order = qn_element_order(hom_apply(qn_witness(genus, n), gamma));
  if (!order) throw std::runtime_error("scc witness image has no order <= n: Q_n is not n-periodic");
  return *order;
}

/// Smallest k in [1, n) with rho(f(gamma^k)) = 1, evaluating gamma^k as a word; nullopt if none.
inline std::optional<std::int64_t> scc_first_trivial_power(int genus, std::int64_t n, const SccSpec& spec) {
  const Word gamma = scc_word(genus, spec);
  const auto witness = qn_witness(genus, n);
  for (std::int64_t k = 1; k < n; ++k) {
    if (hom_apply(witness, power(gamma, k)).is_identity()) return k;
  }
  return std::nullopt;
}

inline std::string to_string(const H1Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.entries.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v.entries[i]);
  }
  return out + ") mod " + std::to_string(v.n);
}

/// Generator-image table, e.g. {"a1": "a", "b1": "b", ...}.
inline nlohmann::json image_table(const Homomorphism<FreeGroupTarget>& h) {
  nlohmann::json t = nlohmann::json::object();
  for (int i = 0; i < h.domain_rank; ++i)
    t[letter_name({i, 1}, Naming::Surface)] = to_string(h.images[static_cast<std::size_t>(i)], Naming::FreePair);
  return t;
}

inline nlohmann::json image_table(const Homomorphism<QnTarget>& h) {
  nlohmann::json t = nlohmann::json::object();
  const Naming naming = h.domain_rank == 2 ? Naming::FreePair : Naming::Surface;
  for (int i = 0; i < h.domain_rank; ++i) t[letter_name({i, 1}, naming)] = to_json(h.images[static_cast<std::size_t>(i)]);
  return t;
}

}  // namespace pql
