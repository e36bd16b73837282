#pragma once

#include <cmath>
#include <complex>

namespace su11 {

// Forward-mode dual numbers for derivatives with respect to one real
// parameter. The phase enters every closed form only through exp(+-i*phi)
// factors, so a complex-valued dual (value + derivative, both complex) is all
// the machinery the derivative engine needs. Propagation is exact to machine
// precision; the finite-difference stencil in detection.hpp is kept purely as
// a test oracle.

struct Dual {
  double v = 0.0;  ///< value
  double d = 0.0;  ///< derivative w.r.t. the seeded parameter

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}
  constexpr Dual(double value, double deriv) : v(value), d(deriv) {}

  static constexpr Dual seed(double value) { return {value, 1.0}; }

  friend constexpr Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
  friend constexpr Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
  friend constexpr Dual operator-(Dual a) { return {-a.v, -a.d}; }
  friend constexpr Dual operator*(Dual a, Dual b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend constexpr Dual operator/(Dual a, Dual b) {
    const double inv = 1.0 / b.v;
    return {a.v * inv, (a.d - a.v * b.d * inv) * inv};
  }
  Dual& operator+=(Dual o) { return *this = *this + o; }
  Dual& operator*=(Dual o) { return *this = *this * o; }
};

inline Dual sqrt(Dual a) {
  const double s = std::sqrt(a.v);
  return {s, s > 0.0 ? a.d / (2.0 * s) : 0.0};
}
inline Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }

/// Complex number with a complex derivative channel. Only the operations the
/// coefficient formulas use are provided.
struct CDual {
  std::complex<double> v{0.0, 0.0};
  std::complex<double> d{0.0, 0.0};

  CDual() = default;
  CDual(double value) : v(value) {}
  CDual(std::complex<double> value) : v(value) {}
  CDual(std::complex<double> value, std::complex<double> deriv) : v(value), d(deriv) {}
  CDual(Dual x) : v(x.v), d(x.d) {}

  friend CDual operator+(const CDual& a, const CDual& b) { return {a.v + b.v, a.d + b.d}; }
  friend CDual operator-(const CDual& a, const CDual& b) { return {a.v - b.v, a.d - b.d}; }
  friend CDual operator-(const CDual& a) { return {-a.v, -a.d}; }
  friend CDual operator*(const CDual& a, const CDual& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend CDual operator/(const CDual& a, const CDual& b) {
    const std::complex<double> inv = 1.0 / b.v;
    return {a.v * inv, (a.d - a.v * b.d * inv) * inv};
  }
};

// The parameter is real, so d/dphi commutes with complex conjugation.
inline CDual conj(const CDual& a) { return {std::conj(a.v), std::conj(a.d)}; }
inline CDual exp(const CDual& a) {
  const std::complex<double> e = std::exp(a.v);
  return {e, e * a.d};
}
/// exp(i*x) for a real dual argument.
inline CDual expi(Dual x) {
  const std::complex<double> e{std::cos(x.v), std::sin(x.v)};
  return {e, e * std::complex<double>{0.0, 1.0} * x.d};
}
inline Dual abs2(const CDual& a) {
  return {std::norm(a.v), 2.0 * (std::conj(a.v) * a.d).real()};
}
inline Dual real_part(const CDual& a) { return {a.v.real(), a.d.real()}; }

// Plain-scalar twins so the same templated formulas evaluate with
// std::complex<double> / double.
inline std::complex<double> expi(double x) { return {std::cos(x), std::sin(x)}; }
inline double abs2(const std::complex<double>& z) { return std::norm(z); }
inline double real_part(const std::complex<double>& z) { return z.real(); }

inline double value_of(double x) { return x; }
inline double value_of(Dual x) { return x.v; }

/// Maps a real scalar type to its complex companion.
template <class R>
struct complex_of;
template <>
struct complex_of<double> {
  using type = std::complex<double>;
};
template <>
struct complex_of<Dual> {
  using type = CDual;
};
template <class R>
using complex_of_t = typename complex_of<R>::type;

}  // namespace su11
