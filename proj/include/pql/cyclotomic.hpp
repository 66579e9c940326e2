#pragma once

// Cyclotomic polynomials over Z and the finite ring R = (Z/nZ)[X]/(Phi_n).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pql {

using BigInt = boost::multiprecision::cpp_int;

/// Integer polynomial, constant term first, no trailing zero coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static IntPolynomial monomial(std::size_t degree, BigInt c = 1) {
    std::vector<BigInt> v(degree + 1);
    v[degree] = std::move(c);
    return IntPolynomial(std::move(v));
  }

  /// X^n - 1
  static IntPolynomial x_pow_minus_one(std::size_t n) {
    std::vector<BigInt> v(n + 1);
    v[0] = -1;
    v[n] += 1;
    return IntPolynomial(std::move(v));
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }
  BigInt coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  BigInt max_abs_coefficient() const {
    BigInt m = 0;
    for (const auto& c : coeffs_) m = std::max(m, BigInt(abs(c)));
    return m;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  friend IntPolynomial operator*(const IntPolynomial& p, const IntPolynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<BigInt> out(p.coeffs_.size() + q.coeffs_.size() - 1);
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j) out[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return IntPolynomial(std::move(out));
  }

  /// Exact division by a monic divisor; throws if a remainder is left.
  IntPolynomial divide_exact(const IntPolynomial& divisor) const {
    if (!divisor.is_monic()) throw std::invalid_argument("divide_exact: divisor must be monic");
    if (is_zero()) return {};
    std::vector<BigInt> rem = coeffs_;
    const std::size_t dd = divisor.coeffs_.size() - 1;
    if (rem.size() - 1 < dd) throw std::domain_error("divide_exact: nonzero remainder");
    std::vector<BigInt> quot(rem.size() - dd);
    for (std::size_t k = quot.size(); k-- > 0;) {
      const BigInt c = rem[k + dd];
      quot[k] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) rem[k + j] -= c * divisor.coeffs_[j];
    }
    for (const auto& r : rem)
      if (r != 0) throw std::domain_error("divide_exact: nonzero remainder");
    return IntPolynomial(std::move(quot));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      const BigInt& c = coeffs_[i];
      if (c == 0) continue;
      const BigInt mag = abs(c);
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      if (mag != 1 || i == 0) out += mag.str();
      if (i >= 1) out += "X";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<BigInt> coeffs_;
};

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline std::int64_t euler_totient(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("euler_totient: n must be positive");
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

/// Phi_n over Z, by exact division of X^n - 1 by the product of Phi_d, d | n, d < n.
inline IntPolynomial cyclotomic_polynomial(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be >= 1");
  std::map<std::int64_t, IntPolynomial> phi;
  for (std::int64_t d : divisors(n)) {
    IntPolynomial prod = IntPolynomial::monomial(0);
    for (const auto& [e, pe] : phi)
      if (d % e == 0) prod = prod * pe;
    phi[d] = IntPolynomial::x_pow_minus_one(static_cast<std::size_t>(d)).divide_exact(prod);
  }
  return phi.at(n);
}

/// Immutable description of R = (Z/nZ)[X]/(Phi_n mod n).
struct RingContext {
  std::int64_t n = 0;
  std::size_t degree = 0;                // phi(n)
  std::vector<std::int64_t> modulus;     // Phi_n mod n, monic, degree+1 entries
  std::vector<std::vector<std::int64_t>> xi_powers;  // xi^0 .. xi^{n-1}, reduced
};

using RingContextPtr = std::shared_ptr<const RingContext>;

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  a %= n;
  return a < 0 ? a + n : a;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
}

// Reduces an arbitrary-length coefficient vector modulo (n, Phi_n).
inline std::vector<std::int64_t> reduce_poly(std::vector<std::int64_t> c, const RingContext& ctx) {
  const std::size_t d = ctx.degree;
  for (auto& x : c) x = mod(x, ctx.n);
  for (std::size_t k = c.size(); k-- > d;) {
    const std::int64_t lead = c[k];
    if (lead == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      c[k - d + j] = mod(c[k - d + j] - mulmod(lead, ctx.modulus[j], ctx.n), ctx.n);
    c[k] = 0;
  }
  c.resize(d, 0);
  return c;
}

inline std::vector<std::int64_t> mul_poly(std::span<const std::int64_t> x,
                                          std::span<const std::int64_t> y,
                                          const RingContext& ctx) {
  std::vector<std::int64_t> out(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      out[i + j] = mod(out[i + j] + mulmod(x[i], y[j], ctx.n), ctx.n);
  }
  return reduce_poly(std::move(out), ctx);
}

}  // namespace detail

inline RingContextPtr ring_context(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("ring_context: n must be >= 2");
  auto ctx = std::make_shared<RingContext>();
  ctx->n = n;
  const IntPolynomial phi = cyclotomic_polynomial(n);
  ctx->degree = static_cast<std::size_t>(phi.degree());
  for (const auto& c : phi.coefficients()) {
    BigInt r = c % n;
    if (r < 0) r += n;
    ctx->modulus.push_back(static_cast<std::int64_t>(r));
  }
  std::vector<std::int64_t> one(ctx->degree, 0);
  one[0] = 1 % n;
  std::vector<std::int64_t> x = {0, 1};
  x = detail::reduce_poly(x, *ctx);
  ctx->xi_powers.push_back(one);
  for (std::int64_t k = 1; k < n; ++k)
    ctx->xi_powers.push_back(detail::mul_poly(ctx->xi_powers.back(), x, *ctx));
  return ctx;
}

class RingElement {
 public:
  RingElement(RingContextPtr ctx, std::vector<std::int64_t> coeffs) : ctx_(std::move(ctx)) {
    if (!ctx_) throw std::invalid_argument("RingElement: null context");
    coeffs_ = detail::reduce_poly(std::move(coeffs), *ctx_);
  }

  static RingElement zero(RingContextPtr ctx) { return {ctx, {}}; }
  static RingElement one(RingContextPtr ctx) { return {ctx, {1}}; }
  static RingElement constant(RingContextPtr ctx, std::int64_t c) { return {ctx, {c}}; }

  const RingContextPtr& context() const noexcept { return ctx_; }
  std::int64_t n() const noexcept { return ctx_->n; }
  std::span<const std::int64_t> coefficients() const noexcept { return coeffs_; }

  bool is_zero() const {
    for (auto c : coeffs_)
      if (c) return false;
    return true;
  }

  friend bool operator==(const RingElement& x, const RingElement& y) {
    check_same(x, y);
    return x.coeffs_ == y.coeffs_;
  }

  friend RingElement operator+(const RingElement& x, const RingElement& y) {
    check_same(x, y);
    std::vector<std::int64_t> out(x.coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.coeffs_[i] + y.coeffs_[i];
    return {x.ctx_, std::move(out)};
  }

  RingElement operator-() const {
    std::vector<std::int64_t> out(coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -coeffs_[i];
    return {ctx_, std::move(out)};
  }

  friend RingElement operator-(const RingElement& x, const RingElement& y) { return x + (-y); }

  friend RingElement operator*(const RingElement& x, const RingElement& y) {
    check_same(x, y);
    return {x.ctx_, detail::mul_poly(x.coeffs_, y.coeffs_, *x.ctx_)};
  }

  std::string to_string() const {
    std::string out = "R(n=" + std::to_string(ctx_->n) + ")[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(coeffs_[i]);
    }
    return out + "]";
  }

 private:
  static void check_same(const RingElement& x, const RingElement& y) {
    if (x.ctx_->n != y.ctx_->n) throw std::invalid_argument("ring context mismatch");
  }

  RingContextPtr ctx_;
  std::vector<std::int64_t> coeffs_;
};

inline RingElement ring_add(const RingElement& x, const RingElement& y) { return x + y; }
inline RingElement ring_neg(const RingElement& x) { return -x; }
inline RingElement ring_mul(const RingElement& x, const RingElement& y) { return x * y; }

/// x^e by repeated squaring, e >= 0.
inline RingElement ring_pow(RingElement x, std::uint64_t e) {
  RingElement acc = RingElement::one(x.context());
  while (e) {
    if (e & 1U) acc = acc * x;
    x = x * x;
    e >>= 1U;
  }
  return acc;
}

/// The class of X.
inline RingElement xi(const RingContextPtr& ctx) { return {ctx, {0, 1}}; }

/// xi^k for any integer k, using xi^n = 1.
inline RingElement xi_power(const RingContextPtr& ctx, std::int64_t k) {
  return {ctx, ctx->xi_powers[static_cast<std::size_t>(detail::mod(k, ctx->n))]};
}

/// Least k in [1, n] with xi^k = 1; nullopt if none (which would contradict xi^n = 1).
inline std::optional<std::int64_t> xi_order(const RingContextPtr& ctx) {
  const RingElement x = xi(ctx);
  const RingElement one = RingElement::one(ctx);
  RingElement acc = x;
  for (std::int64_t k = 1; k <= ctx->n; ++k) {
    if (acc == one) return k;
    acc = acc * x;
  }
  return std::nullopt;
}

/// 1 + xi^k + xi^{2k} + ... + xi^{(n-1)k} evaluated in R.
inline RingElement chi_value(const RingContextPtr& ctx, std::int64_t k) {
  const RingElement step = ring_pow(xi(ctx), static_cast<std::uint64_t>(detail::mod(k, ctx->n)));
  RingElement term = RingElement::one(ctx);
  RingElement sum = RingElement::zero(ctx);
  for (std::int64_t j = 0; j < ctx->n; ++j) {
    sum = sum + term;
    term = term * step;
  }
  return sum;
}

}  // namespace pql
