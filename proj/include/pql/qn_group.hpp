#pragma once

// The finite group Q_n generated by A = [[xi,0],[0,1]] and B = [[1,1],[0,1]]
// over R = Z[xi]/(n). Every element is upper triangular [[xi^k, z],[0,1]] and
// is stored as the pair (k mod n, z).

#include "pql/cyclotomic.hpp"
#include "pql/random.hpp"
#include "pql/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace pql {

class QnElement {
 public:
  QnElement(std::int64_t k, RingElement upper)
      : k_(detail::mod(k, upper.n())), z_(std::move(upper)) {}

  static QnElement identity(const RingContextPtr& ctx) { return {0, RingElement::zero(ctx)}; }

  const RingContextPtr& context() const noexcept { return z_.context(); }
  std::int64_t n() const noexcept { return z_.n(); }
  std::int64_t k_exp() const noexcept { return k_; }
  const RingElement& upper() const noexcept { return z_; }
  RingElement diagonal() const { return xi_power(context(), k_); }

  bool is_identity() const { return *this == identity(context()); }

  /// Semantic equality: the diagonal entries xi^k are compared in R.
  friend bool operator==(const QnElement& x, const QnElement& y) {
    return x.z_ == y.z_ && (x.k_ == y.k_ || x.diagonal() == y.diagonal());
  }

  // (k,z)(k',z') = (k+k', xi^k z' + z)
  friend QnElement operator*(const QnElement& x, const QnElement& y) {
    if (x.n() != y.n()) throw std::invalid_argument("Q_n context mismatch");
    return {x.k_ + y.k_, x.diagonal() * y.z_ + x.z_};
  }

  // (k,z)^{-1} = (-k, -xi^{-k} z)
  QnElement inverse() const { return {-k_, -(xi_power(context(), -k_) * z_)}; }

 private:
  std::int64_t k_;
  RingElement z_;
};

inline QnElement qn_mul(const QnElement& x, const QnElement& y) { return x * y; }
inline QnElement qn_inv(const QnElement& x) { return x.inverse(); }
inline QnElement qn_commutator(const QnElement& x, const QnElement& y) {
  return x * y * x.inverse() * y.inverse();
}

/// x^m for any integer m, by repeated squaring.
inline QnElement qn_pow(const QnElement& x, std::int64_t m) {
  QnElement base = m < 0 ? x.inverse() : x;
  auto e = static_cast<std::uint64_t>(m < 0 ? -m : m);
  QnElement acc = QnElement::identity(x.context());
  while (e) {
    if (e & 1U) acc = acc * base;
    base = base * base;
    e >>= 1U;
  }
  return acc;
}

/// Closed form C^m = (mk, (1 + xi^k + ... + xi^{(m-1)k}) z), m >= 0.
inline QnElement qn_pow_closed_form(const QnElement& x, std::int64_t m) {
  const auto& ctx = x.context();
  RingElement partial = RingElement::zero(ctx);
  for (std::int64_t j = 0; j < m; ++j) partial = partial + xi_power(ctx, j * x.k_exp());
  return {m * x.k_exp(), partial * x.upper()};
}

struct QnGenerators {
  QnElement a;
  QnElement b;
};

inline QnGenerators qn_generators(std::int64_t n) {
  if (n <= 2) throw std::invalid_argument("Q_n requires n > 2, got " + std::to_string(n));
  auto ctx = ring_context(n);
  return {QnElement(1, RingElement::zero(ctx)), QnElement(0, RingElement::one(ctx))};
}

/// Least m >= 1 with x^m = 1, found by iterated multiplication with cap n.
/// Each step is cross-checked against the closed power formula.
inline std::optional<std::int64_t> qn_element_order(const QnElement& x) {
  QnElement acc = x;
  for (std::int64_t m = 1; m <= x.n(); ++m) {
    if (!(acc == qn_pow_closed_form(x, m))) {
      throw std::logic_error("Q_n power closed form disagrees with iterated product");
    }
    if (acc.is_identity()) return m;
    acc = acc * x;
  }
  return std::nullopt;
}

inline nlohmann::json to_json(const QnElement& x) {
  auto coeffs = x.upper().coefficients();
  return {{"k", x.k_exp()}, {"z", std::vector<std::int64_t>(coeffs.begin(), coeffs.end())}, {"n", x.n()}};
}

/// Product of a random word of length <= max_len in A^{+-1}, B^{+-1}.
inline QnElement random_qn_element(const QnGenerators& gens, Rng& rng, int max_len = 20) {
  const QnElement letters[4] = {gens.a, gens.a.inverse(), gens.b, gens.b.inverse()};
  QnElement acc = QnElement::identity(gens.a.context());
  const auto len = rng.integer(0, max_len);
  for (std::int64_t i = 0; i < len; ++i) acc = acc * letters[rng.integer(0, 3)];
  return acc;
}

/// Samples Q_n and asserts: commutators are unitriangular, commutators commute,
/// x^n = 1, and ord(A) = ord([A,B]) = n.
inline CheckReport verify_metabelian_periodic(std::int64_t n, std::int64_t trials, std::uint64_t seed) {
  CheckReport report;
  report.check_id = "metabelian";
  report.params = {{"n", n}, {"trials", trials}};
  report.seed = seed;
  const QnGenerators gens = qn_generators(n);
  const auto& ctx = gens.a.context();
  const RingElement one = RingElement::one(ctx);
  Rng rng(derive_seed(seed, "metabelian/" + std::to_string(n)));

  std::int64_t unitri_bad = 0, commute_bad = 0, periodic_bad = 0;
  std::optional<nlohmann::json> unitri_w, commute_w, periodic_w;
  for (std::int64_t t = 0; t < trials; ++t) {
    const QnElement x = random_qn_element(gens, rng);
    const QnElement y = random_qn_element(gens, rng);
    const QnElement c1 = qn_commutator(x, y);
    if (!(c1.diagonal() == one)) {
      ++unitri_bad;
      if (!unitri_w) unitri_w = nlohmann::json{{"x", to_json(x)}, {"y", to_json(y)}, {"commutator", to_json(c1)}};
    }
    const QnElement c2 = qn_commutator(random_qn_element(gens, rng), random_qn_element(gens, rng));
    if (!(c1 * c2 == c2 * c1)) {
      ++commute_bad;
      if (!commute_w) commute_w = nlohmann::json{{"c1", to_json(c1)}, {"c2", to_json(c2)}};
    }
    if (!qn_pow(x, n).is_identity()) {
      ++periodic_bad;
      if (!periodic_w) periodic_w = nlohmann::json{{"x", to_json(x)}};
    }
  }
  report.expect_eq<std::int64_t>("commutators_unitriangular_violations", 0, unitri_bad, unitri_w);
  report.expect_eq<std::int64_t>("commutators_commute_violations", 0, commute_bad, commute_w);
  report.expect_eq<std::int64_t>("x_pow_n_identity_violations", 0, periodic_bad, periodic_w);

  const auto ord_a = qn_element_order(gens.a);
  const auto ord_c = qn_element_order(qn_commutator(gens.a, gens.b));
  report.add("order_A", n, ord_a ? nlohmann::json(*ord_a) : nlohmann::json(nullptr), ord_a == n, nullptr,
             nlohmann::json{{"A", to_json(gens.a)}});
  report.add("order_commutator_AB", n, ord_c ? nlohmann::json(*ord_c) : nlohmann::json(nullptr), ord_c == n,
             nullptr, nlohmann::json{{"[A,B]", to_json(qn_commutator(gens.a, gens.b))}});
  return report;
}

}  // namespace pql
