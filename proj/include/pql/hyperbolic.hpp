#pragma once

// The hyperbolic plane in the upper half-plane model, acted on by SL(2,R).

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pql {

class HPoint {
 public:
  HPoint(double re, double im) : re_(re), im_(im) {
    if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im)) {
      throw std::invalid_argument("HPoint: imaginary part must be positive and finite");
    }
  }
  explicit HPoint(std::complex<double> z) : HPoint(z.real(), z.imag()) {}

  double re() const noexcept { return re_; }
  double im() const noexcept { return im_; }
  std::complex<double> z() const noexcept { return {re_, im_}; }

 private:
  double re_;
  double im_;
};

/// d(p,q) = arccosh(1 + |p-q|^2 / (2 Im p Im q)), evaluated as 2 asinh(|p-q| / (2 sqrt(Im p Im q))).
inline double distance(const HPoint& p, const HPoint& q) {
  return 2.0 * std::asinh(std::abs(p.z() - q.z()) / (2.0 * std::sqrt(p.im() * q.im())));
}

/// <x,y>_z = (d(x,z) + d(y,z) - d(x,y)) / 2
inline double gromov_product(const HPoint& x, const HPoint& y, const HPoint& z) {
  return 0.5 * (distance(x, z) + distance(y, z) - distance(x, y));
}

/// min{<x,y>_t, <y,z>_t} - <x,z>_t; the four-point constant is its supremum.
inline double four_point_defect(const HPoint& x, const HPoint& y, const HPoint& z, const HPoint& t) {
  return std::min(gromov_product(x, y, t), gromov_product(y, z, t)) - gromov_product(x, z, t);
}

/// Point of R u {infinity} on the boundary of the half-plane.
struct BoundaryPoint {
  double x = 0.0;
  bool infinite = false;
};

enum class IsometryType { Elliptic, Parabolic, Loxodromic };

inline const char* to_string(IsometryType t) {
  switch (t) {
    case IsometryType::Elliptic: return "elliptic";
    case IsometryType::Parabolic: return "parabolic";
    case IsometryType::Loxodromic: return "loxodromic";
  }
  return "?";
}

inline constexpr double kParabolicTolerance = 1e-9;

/// z -> (az + b)/(cz + d), scaled on construction to determinant one.
class Isometry {
 public:
  Isometry(double a, double b, double c, double d) {
    const double det = a * d - b * c;
    if (!(det > 0.0) || !std::isfinite(det)) throw std::invalid_argument("Isometry: determinant must be positive");
    const double s = 1.0 / std::sqrt(det);
    m_ = {a * s, b * s, c * s, d * s};
  }

  static Isometry identity() { return {1, 0, 0, 1}; }

  double a() const noexcept { return m_[0]; }
  double b() const noexcept { return m_[1]; }
  double c() const noexcept { return m_[2]; }
  double d() const noexcept { return m_[3]; }
  std::array<double, 4> entries() const noexcept { return m_; }
  double trace() const noexcept { return m_[0] + m_[3]; }
  double determinant() const noexcept { return m_[0] * m_[3] - m_[1] * m_[2]; }

  HPoint apply(const HPoint& p) const {
    const std::complex<double> z = p.z();
    const std::complex<double> w = (m_[0] * z + m_[1]) / (m_[2] * z + m_[3]);
    // Im w = Im z / |cz + d|^2, computed directly to keep it positive.
    const double im = p.im() / std::norm(m_[2] * z + m_[3]);
    return {w.real(), im};
  }

  Isometry inverse() const { return raw(m_[3], -m_[1], -m_[2], m_[0]); }

  // No rescaling: det(xy) = 1 already, and recomputing ad - bc for large entries
  // cancels badly enough to visibly perturb traces of powers.
  friend Isometry operator*(const Isometry& x, const Isometry& y) {
    return raw(x.a() * y.a() + x.b() * y.c(), x.a() * y.b() + x.b() * y.d(), x.c() * y.a() + x.d() * y.c(),
               x.c() * y.b() + x.d() * y.d());
  }

  Isometry power(int k) const {
    Isometry base = k < 0 ? inverse() : *this;
    Isometry acc = identity();
    for (int i = 0; i < std::abs(k); ++i) acc = acc * base;
    return acc;
  }

 private:
  Isometry() = default;
  static Isometry raw(double a, double b, double c, double d) {
    Isometry m;
    m.m_ = {a, b, c, d};
    return m;
  }

  std::array<double, 4> m_{};
};

/// Largest entrywise distance to +I or -I, whichever is closer.
inline double distance_to_pm_identity(const Isometry& m) {
  auto dist = [&](double s) {
    return std::max({std::abs(m.a() - s), std::abs(m.b()), std::abs(m.c()), std::abs(m.d() - s)});
  };
  return std::min(dist(1.0), dist(-1.0));
}

inline IsometryType classify(const Isometry& m) {
  const double t = std::abs(m.trace());
  if (std::abs(t - 2.0) <= kParabolicTolerance) return IsometryType::Parabolic;
  return t < 2.0 ? IsometryType::Elliptic : IsometryType::Loxodromic;
}

/// 2 arccosh(|tr|/2) for loxodromic isometries, 0 otherwise.
inline double stable_translation_length(const Isometry& m) {
  if (classify(m) != IsometryType::Loxodromic) return 0.0;
  return 2.0 * std::acosh(std::abs(m.trace()) / 2.0);
}

/// Repelling and attracting fixed points (gamma^-, gamma^+) of a loxodromic isometry.
inline std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const Isometry& m) {
  if (classify(m) != IsometryType::Loxodromic) throw std::invalid_argument("fixed_points: isometry is not loxodromic");
  // c z^2 + (d - a) z - b = 0; a fixed point z attracts iff |cz + d| > 1.
  if (m.c() == 0.0) {
    const BoundaryPoint finite{m.b() / (m.d() - m.a()), false};
    const BoundaryPoint inf{0.0, true};
    return std::abs(m.a()) > 1.0 ? std::pair{finite, inf} : std::pair{inf, finite};
  }
  const double disc = std::sqrt((m.d() - m.a()) * (m.d() - m.a()) + 4.0 * m.b() * m.c());
  const double z1 = (m.a() - m.d() + disc) / (2.0 * m.c());
  const double z2 = (m.a() - m.d() - disc) / (2.0 * m.c());
  const bool z1_attracts = std::abs(m.c() * z1 + m.d()) > 1.0;
  return z1_attracts ? std::pair{BoundaryPoint{z2, false}, BoundaryPoint{z1, false}}
                     : std::pair{BoundaryPoint{z1, false}, BoundaryPoint{z2, false}};
}

/// Orientation-preserving isometry sending `from` to 0 and `to` to infinity.
inline Isometry normalizing_map(const BoundaryPoint& from, const BoundaryPoint& to) {
  if (from.infinite && to.infinite) throw std::invalid_argument("normalizing_map: distinct points required");
  if (to.infinite) return {1.0, -from.x, 0.0, 1.0};
  if (from.infinite) return {0.0, -1.0, 1.0, -to.x};
  // z -> s (z - from) / (z - to), s = sign(from - to) keeps the determinant positive
  const double s = from.x > to.x ? 1.0 : -1.0;
  return {s, -s * from.x, 1.0, -to.x};
}

struct BoundaryGromovProduct {
  double value = 0.0;
  double stabilization_error = 0.0;  // |P(30) - P(15)|
};

/// <xi, eta>_y for boundary points, as the limit of finite Gromov products along
/// the geodesic xi-eta, truncated at parameter 30 with a stabilization check at 15.
inline BoundaryGromovProduct boundary_gromov_product(const BoundaryPoint& xi, const BoundaryPoint& eta,
                                                     const HPoint& y) {
  const Isometry n = normalizing_map(xi, eta);
  const HPoint w = n.apply(y);
  const double foot = std::abs(w.z());  // the geodesic is the imaginary axis; i|w| is the foot of w
  auto at = [&](double s) {
    const HPoint lo(0.0, foot * std::exp(-s));
    const HPoint hi(0.0, foot * std::exp(s));
    return gromov_product(lo, hi, w);
  };
  const double p30 = at(30.0);
  return {p30, std::abs(p30 - at(15.0))};
}

/// Distance from p to the imaginary axis: sinh t = |Re p| / Im p.
inline double distance_to_imaginary_axis(const HPoint& p) { return std::asinh(std::abs(p.re()) / p.im()); }

// ---------------------------------------------------------------------------
// Model cones.

class ConeParams {
 public:
  ConeParams(double rho, double total_angle) : rho_(rho), total_angle_(total_angle) {
    if (!(rho > 0.0)) throw std::invalid_argument("ConeParams: rho must be positive");
    if (!(total_angle >= 2.0 * std::numbers::pi)) throw std::invalid_argument("ConeParams: total angle must be >= 2pi");
  }
  double rho() const noexcept { return rho_; }
  double total_angle() const noexcept { return total_angle_; }
  double circumference() const noexcept { return total_angle_ * std::sinh(rho_); }

 private:
  double rho_;
  double total_angle_;
};

namespace detail {

inline void check_cone_radius(const ConeParams& cp, double r) {
  if (!(r >= 0.0 && r <= cp.rho())) throw std::out_of_range("cone radius outside [0, rho]");
}

// cosh l = cosh r1 cosh r2 - sinh r1 sinh r2 cos(phi), phi in [0, pi], solved as
// sinh^2(l/2) = sinh^2((r1 - r2)/2) + sinh r1 sinh r2 sin^2(phi/2).
inline double hyperbolic_law_of_cosines(double r1, double r2, double phi) {
  const double a = std::sinh(0.5 * (r1 - r2));
  const double s = std::sin(0.5 * phi);
  return 2.0 * std::asinh(std::sqrt(a * a + std::sinh(r1) * std::sinh(r2) * s * s));
}

}  // namespace detail

/// Distance between (y1, r1) and (y2, r2) in the cone of radius rho over Y, where dY = d(y1, y2).
inline double cone_distance(const ConeParams& cp, double dY, double r1, double r2) {
  if (!(dY >= 0.0)) throw std::invalid_argument("cone_distance: dY must be >= 0");
  detail::check_cone_radius(cp, r1);
  detail::check_cone_radius(cp, r2);
  return detail::hyperbolic_law_of_cosines(r1, r2, std::min(std::numbers::pi, dY / std::sinh(cp.rho())));
}

/// Representative of theta in (-Theta/2, Theta/2].
inline double reduce_cone_angle(const ConeParams& cp, double theta) {
  const double big = cp.total_angle();
  double t = std::fmod(theta, big);
  if (t > 0.5 * big) t -= big;
  if (t <= -0.5 * big) t += big;
  return t;
}

/// Conical law of cosines with the angle read modulo the total angle.
inline double cone_law_of_cosines(const ConeParams& cp, double theta, double r1, double r2) {
  detail::check_cone_radius(cp, r1);
  detail::check_cone_radius(cp, r2);
  const double t = reduce_cone_angle(cp, theta);
  return detail::hyperbolic_law_of_cosines(r1, r2, std::min(std::numbers::pi, std::abs(t)));
}

// ---------------------------------------------------------------------------
// Strong quasi-convexity on samples.

struct QuasiConvexityReport {
  double worst_qc_excess = -std::numeric_limits<double>::infinity();      // d(x,Y) - <y,y'>_x - 2 delta
  double worst_metric_excess = -std::numeric_limits<double>::infinity();  // max(dX - dY, dY - dX - 8 delta)
  bool holds(double tol = 1e-9) const { return worst_qc_excess <= tol && worst_metric_excess <= tol; }
};

/// Checks on sampled data that a subset Y is strongly quasi-convex:
///   d(x,Y) <= <y,y'>_x + 2 delta  for probes x and y, y' in the samples, and
///   dX(y,y') <= dY(y,y') <= dX(y,y') + 8 delta  for the induced length metric dY.
template <class InducedMetric, class DistanceToSet>
QuasiConvexityReport check_strongly_quasi_convex(std::span<const HPoint> set_samples, std::span<const HPoint> probes,
                                                 InducedMetric&& induced, DistanceToSet&& dist_to_set, double delta) {
  QuasiConvexityReport r;
  for (std::size_t i = 0; i < set_samples.size(); ++i) {
    for (std::size_t j = i + 1; j < set_samples.size(); ++j) {
      const double dx = distance(set_samples[i], set_samples[j]);
      const double dy = induced(set_samples[i], set_samples[j]);
      r.worst_metric_excess = std::max({r.worst_metric_excess, dx - dy, dy - dx - 8.0 * delta});
      for (const HPoint& x : probes) {
        r.worst_qc_excess = std::max(r.worst_qc_excess,
                                     dist_to_set(x) - gromov_product(set_samples[i], set_samples[j], x) - 2.0 * delta);
      }
    }
  }
  return r;
}

}  // namespace pql
