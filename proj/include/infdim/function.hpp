#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "infdim/core/quadrature.hpp"
#include "infdim/core/types.hpp"

namespace infdim {

// Orthonormal shifted Legendre series on an interval [a, b]:
//   u_n(x) = sqrt((2n+1)/L) P_n(t),  t = (2x - a - b) / L,  n = 0, 1, ...
// A series is the coefficient vector (c_0, c_1, ...) of sum c_n u_n.
namespace legendre {

using Series = std::vector<Complex>;

inline double to_reference(const Interval& iv, double x) { return (2.0 * x - iv.a - iv.b) / iv.length(); }

/// Values of u_0..u_n at x.
inline void basis_values(const Interval& iv, double x, int n, std::span<double> out) {
  const double t = to_reference(iv, x);
  const double inv_len = 1.0 / iv.length();
  double p0 = 1.0, p1 = t;
  for (int k = 0; k <= n; ++k) {
    double pk;
    if (k == 0) {
      pk = 1.0;
    } else if (k == 1) {
      pk = t;
    } else {
      pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    out[k] = std::sqrt((2.0 * k + 1.0) * inv_len) * pk;
  }
}

inline Complex evaluate(const Series& c, const Interval& iv, double x) {
  if (c.empty()) return 0.0;
  const double t = to_reference(iv, x);
  const double inv_len = 1.0 / iv.length();
  Complex sum = c[0] * std::sqrt(inv_len);
  double p0 = 1.0, p1 = t;
  if (c.size() > 1) sum += c[1] * std::sqrt(3.0 * inv_len) * t;
  for (std::size_t k = 2; k < c.size(); ++k) {
    const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
    sum += c[k] * (std::sqrt((2.0 * k + 1.0) * inv_len) * pk);
  }
  return sum;
}

inline int degree(const Series& c) { return static_cast<int>(c.size()) - 1; }

inline void trim(Series& c) {
  while (!c.empty() && c.back() == Complex{}) c.pop_back();
}

inline void add_scaled(Series& dst, const Series& src, Complex s) {
  if (dst.size() < src.size()) dst.resize(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] += s * src[k];
}

/// Series of x * p(x).
inline Series times_x(const Series& c, const Interval& iv) {
  if (c.empty()) return {};
  const double m = iv.midpoint(), h = iv.half_length();
  auto beta = [](std::size_t n) { return n / std::sqrt(4.0 * n * n - 1.0); };
  Series out(c.size() + 1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    out[k] += m * c[k];
    out[k + 1] += h * beta(k + 1) * c[k];
    if (k > 0) out[k - 1] += h * beta(k) * c[k];
  }
  return out;
}

/// Series of x -> integral of p over [a, x].
inline Series antiderivative(const Series& c, const Interval& iv) {
  if (c.empty()) return {};
  const double h = iv.half_length();
  Series out(c.size() + 1);
  out[0] += h * c[0];
  out[1] += h * c[0] / std::sqrt(3.0);
  for (std::size_t n = 1; n < c.size(); ++n) {
    const double up = 1.0 / std::sqrt((2.0 * n + 1.0) * (2.0 * n + 3.0));
    const double down = 1.0 / std::sqrt((2.0 * n + 1.0) * (2.0 * n - 1.0));
    out[n + 1] += h * up * c[n];
    out[n - 1] -= h * down * c[n];
  }
  return out;
}

/// Series of p'. Quadratic in the degree; meant for low-degree envelopes.
inline Series derivative(const Series& c, const Interval& iv) {
  if (c.size() <= 1) return {};
  const double scale = 2.0 / iv.length();
  Series out(c.size() - 1);
  for (std::size_t n = 1; n < c.size(); ++n) {
    if (c[n] == Complex{}) continue;
    for (std::size_t k = (n - 1) % 2; k < n; k += 2) {
      out[k] += scale * std::sqrt((2.0 * n + 1.0) * (2.0 * k + 1.0)) * c[n];
    }
  }
  return out;
}

/// Derivatives p^{(j)} at both endpoints for j = 0..degree.
inline void endpoint_derivatives(const Series& c, const Interval& iv, std::vector<Complex>& at_a,
                                 std::vector<Complex>& at_b) {
  const int d = std::max(degree(c), 0);
  at_a.assign(d + 1, 0.0);
  at_b.assign(d + 1, 0.0);
  const double scale = 2.0 / iv.length();
  for (int n = 0; n <= degree(c); ++n) {
    const double norm = std::sqrt((2.0 * n + 1.0) / iv.length());
    // P_n^{(j)}(1) = prod_{i<j} (n(n+1) - i(i+1)) / (2(i+1)); P_n^{(j)}(-1) = (-1)^{n+j} P_n^{(j)}(1).
    double dj = 1.0, chain = 1.0;
    for (int j = 0; j <= n; ++j) {
      const double right = norm * chain * dj;
      const double left = ((n + j) % 2 == 0 ? 1.0 : -1.0) * right;
      at_b[j] += c[n] * right;
      at_a[j] += c[n] * left;
      dj *= (n * (n + 1.0) - j * (j + 1.0)) / (2.0 * (j + 1.0));
      chain *= scale;
    }
  }
}

/// L2 projection of f onto u_0..u_degree using a Gauss-Legendre rule of `order` points.
template <class F>
Series project(F&& f, const Interval& iv, int degree, int order) {
  const auto rule = gauss_legendre(order, iv.a, iv.b);
  Series out(degree + 1);
  std::vector<double> u(degree + 1);
  for (int k = 0; k < order; ++k) {
    const Complex fx = f(rule.nodes[k]);
    basis_values(iv, rule.nodes[k], degree, u);
    for (int n = 0; n <= degree; ++n) out[n] += rule.weights[k] * u[n] * fx;
  }
  return out;
}

/// Series of the polynomial sum_k m_k x^k.
inline Series from_monomials(std::span<const Complex> m, const Interval& iv) {
  if (m.empty()) return {};
  const int d = static_cast<int>(m.size()) - 1;
  auto horner = [&](double x) {
    Complex s = 0.0;
    for (int k = d; k >= 0; --k) s = s * x + m[k];
    return s;
  };
  return project(horner, iv, d, d + 2);
}

}  // namespace legendre

/// Element of L2[a, b] of the form  sum_w p_w(x) exp(i w x)  with polynomial
/// envelopes p_w stored as orthonormal Legendre series on [a, b].
///
/// The class contains polynomials, Fourier modes, the cosine/sine families of
/// the Volterra SVD, and is closed under integration from a and multiplication
/// by x, which keeps operator actions exact.
class Function {
 public:
  struct Component {
    double frequency = 0.0;
    legendre::Series envelope;
  };

  explicit Function(Interval iv = {}) : iv_(iv) {}

  static Function zero(const Interval& iv) { return Function(iv); }

  /// c * u_n, the n-th (0-based) orthonormal Legendre polynomial.
  static Function legendre_polynomial(const Interval& iv, int n, Complex c = 1.0) {
    legendre::Series s(n + 1);
    s[n] = c;
    return series(iv, std::move(s));
  }

  static Function series(const Interval& iv, legendre::Series s, double frequency = 0.0) {
    Function f(iv);
    f.add_component(frequency, s, 1.0);
    return f;
  }

  static Function constant(const Interval& iv, Complex c) {
    return series(iv, {c * std::sqrt(iv.length())});
  }

  /// Polynomial from monomial coefficients m_0 + m_1 x + ...
  static Function polynomial(const Interval& iv, std::span<const Complex> monomials) {
    return series(iv, legendre::from_monomials(monomials, iv));
  }
  static Function polynomial(const Interval& iv, std::initializer_list<Complex> monomials) {
    return polynomial(iv, std::span<const Complex>(monomials.begin(), monomials.size()));
  }

  /// c * exp(i w x).
  static Function exponential(const Interval& iv, double omega, Complex c = 1.0) {
    return series(iv, {c * std::sqrt(iv.length())}, omega);
  }

  /// Orthonormal mode L^{-1/2} exp(2 pi i k (x - a) / L).
  static Function fourier_mode(const Interval& iv, long k) {
    const double omega = 2.0 * pi * static_cast<double>(k) / iv.length();
    const Complex phase = std::polar(1.0, -omega * iv.a);
    return series(iv, {phase}, omega);
  }

  /// Legendre interpolant of f on the `order`-point Gauss-Legendre grid.
  static Function sampled(const Interval& iv, const std::function<Complex(double)>& f, int order) {
    return series(iv, legendre::project(f, iv, order - 1, order));
  }

  const Interval& interval() const { return iv_; }
  const std::vector<Component>& components() const { return comps_; }

  int max_degree() const {
    int d = -1;
    for (const auto& c : comps_) d = std::max(d, legendre::degree(c.envelope));
    return d;
  }

  double max_abs_frequency() const {
    double w = 0.0;
    for (const auto& c : comps_) w = std::max(w, std::abs(c.frequency));
    return w;
  }

  Complex operator()(double x) const {
    Complex s = 0.0;
    for (const auto& c : comps_) {
      const Complex p = legendre::evaluate(c.envelope, iv_, x);
      s += c.frequency == 0.0 ? p : p * std::polar(1.0, c.frequency * x);
    }
    return s;
  }

  /// Adds s * p(x) exp(i w x), merging with an existing component of equal frequency.
  void add_component(double omega, const legendre::Series& p, Complex s) {
    auto it = std::lower_bound(comps_.begin(), comps_.end(), omega,
                               [](const Component& c, double w) { return c.frequency < w; });
    auto same = [&](const Component& c) {
      return std::abs(c.frequency - omega) <= 1e-12 * std::max(1.0, std::abs(omega));
    };
    if (it != comps_.end() && same(*it)) {
      legendre::add_scaled(it->envelope, p, s);
      return;
    }
    if (it != comps_.begin() && same(*(it - 1))) {
      legendre::add_scaled((it - 1)->envelope, p, s);
      return;
    }
    Component c{omega == 0.0 ? 0.0 : omega, {}};
    legendre::add_scaled(c.envelope, p, s);
    comps_.insert(it, std::move(c));
  }

  Function& operator+=(const Function& o) {
    check_same_interval(o);
    for (const auto& c : o.comps_) add_component(c.frequency, c.envelope, 1.0);
    return *this;
  }
  Function& operator-=(const Function& o) {
    check_same_interval(o);
    for (const auto& c : o.comps_) add_component(c.frequency, c.envelope, -1.0);
    return *this;
  }
  Function& operator*=(Complex s) {
    for (auto& c : comps_)
      for (auto& v : c.envelope) v *= s;
    return *this;
  }
  friend Function operator+(Function l, const Function& r) { return l += r; }
  friend Function operator-(Function l, const Function& r) { return l -= r; }
  friend Function operator*(Complex s, Function f) { return f *= s; }

  /// this += s * o
  void axpy(Complex s, const Function& o) {
    check_same_interval(o);
    for (const auto& c : o.comps_) add_component(c.frequency, c.envelope, s);
  }

  void check_same_interval(const Function& o) const {
    if (!(iv_ == o.iv_)) throw SpaceMismatch("functions live on different intervals");
  }

 private:
  Interval iv_;
  std::vector<Component> comps_;
};

namespace detail {

// Envelope degree above which integration by parts is not attempted.
inline constexpr int max_parts_degree = 24;

inline bool parts_stable(int degree_sum, double omega_h) {
  return degree_sum <= max_parts_degree &&
         omega_h > 2.0 * (degree_sum + 1.0) * (degree_sum + 1.0) + 8.0;
}

inline int oscillatory_order(int degree_sum, double omega_h) {
  // transition zone of the Bessel coefficients of e^{i w t} is ~ w^{1/3} wide
  return static_cast<int>(std::ceil(0.5 * (degree_sum + omega_h) + 8.0 * std::cbrt(omega_h))) + 20;
}

struct EnvelopeCache {
  double frequency;
  const legendre::Series* envelope;
  int degree;
  std::vector<Complex> da, db;  // endpoint derivatives (only for low degree)
  Complex phase_a, phase_b;     // exp(i w a), exp(i w b)
};

inline std::vector<EnvelopeCache> make_cache(const Function& f) {
  std::vector<EnvelopeCache> out;
  out.reserve(f.components().size());
  const auto& iv = f.interval();
  for (const auto& c : f.components()) {
    EnvelopeCache e{c.frequency, &c.envelope, legendre::degree(c.envelope), {}, {}, {}, {}};
    if (e.degree < 0) continue;
    if (e.degree <= max_parts_degree) legendre::endpoint_derivatives(c.envelope, iv, e.da, e.db);
    e.phase_a = std::polar(1.0, c.frequency * iv.a);
    e.phase_b = std::polar(1.0, c.frequency * iv.b);
    out.push_back(std::move(e));
  }
  return out;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// integral over [a,b] of conj(p(x) e^{iwx}) q(x) e^{imx} dx
inline Complex component_inner(const EnvelopeCache& p, const EnvelopeCache& q, const Interval& iv) {
  const double delta = q.frequency - p.frequency;
  const double scale = std::max({1.0, std::abs(p.frequency), std::abs(q.frequency)});
  if (std::abs(delta) <= 1e-12 * scale) {
    const auto& a = *p.envelope;
    const auto& b = *q.envelope;
    Complex s = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) s += std::conj(a[k]) * b[k];
    return s;
  }
  const int d = p.degree + q.degree;
  const double omega_h = std::abs(delta) * iv.half_length();
  if (parts_stable(d, omega_h) && !p.da.empty() && !q.da.empty()) {
    // sum_j (-1)^j [r^(j) e^{i delta x}]_a^b / (i delta)^{j+1},  r = conj(p) q
    const Complex ea = std::conj(p.phase_a) * q.phase_a;
    const Complex eb = std::conj(p.phase_b) * q.phase_b;
    const Complex inv = 1.0 / Complex(0.0, delta);
    Complex sum = 0.0, power = inv;
    for (int j = 0; j <= d; ++j) {
      Complex ra = 0.0, rb = 0.0;
      for (int i = std::max(0, j - q.degree); i <= std::min(j, p.degree); ++i) {
        const double bc = binomial(j, i);
        ra += bc * std::conj(p.da[i]) * q.da[j - i];
        rb += bc * std::conj(p.db[i]) * q.db[j - i];
      }
      const Complex term = (rb * eb - ra * ea) * power;
      sum += (j % 2 == 0) ? term : -term;
      power *= inv;
    }
    return sum;
  }
  const int order = oscillatory_order(d, omega_h);
  const auto rule = gauss_legendre(order, iv.a, iv.b);
  Complex sum = 0.0;
  for (int k = 0; k < order; ++k) {
    const double x = rule.nodes[k];
    const Complex pv = legendre::evaluate(*p.envelope, iv, x);
    const Complex qv = legendre::evaluate(*q.envelope, iv, x);
    sum += rule.weights[k] * std::conj(pv) * qv * std::polar(1.0, delta * x);
  }
  return sum;
}

}  // namespace detail

/// L2 inner product, conjugate-linear in the first argument.
inline Complex inner(const Function& f, const Function& g) {
  f.check_same_interval(g);
  const auto cf = detail::make_cache(f);
  const auto cg = detail::make_cache(g);
  Complex s = 0.0;
  for (const auto& p : cf)
    for (const auto& q : cg) s += detail::component_inner(p, q, f.interval());
  return s;
}

inline double norm(const Function& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

/// x * f(x).
inline Function times_x(const Function& f) {
  Function out(f.interval());
  for (const auto& c : f.components())
    out.add_component(c.frequency, legendre::times_x(c.envelope, f.interval()), 1.0);
  return out;
}

/// Integral of f over the whole interval.
inline Complex integral(const Function& f) {
  return inner(Function::constant(f.interval(), 1.0), f);
}

/// x -> integral of f over [a, x].
inline Function integrate_from_left(const Function& f) {
  const Interval& iv = f.interval();
  Function out(iv);
  legendre::Series polynomial_part;
  for (const auto& c : f.components()) {
    const int d = legendre::degree(c.envelope);
    if (d < 0) continue;
    if (c.frequency == 0.0) {
      legendre::add_scaled(polynomial_part, c.envelope, 1.0);
      continue;
    }
    const double w = c.frequency;
    const double omega_h = std::abs(w) * iv.half_length();
    if (detail::parts_stable(d, omega_h)) {
      // q = sum_j (-1)^j p^{(j)} / (i w)^{j+1};  result q(x)e^{iwx} - q(a)e^{iwa}
      legendre::Series q, dp = c.envelope;
      const Complex inv = 1.0 / Complex(0.0, w);
      Complex power = inv;
      for (int j = 0; j <= d; ++j) {
        legendre::add_scaled(q, dp, (j % 2 == 0) ? power : -power);
        dp = legendre::derivative(dp, iv);
        power *= inv;
      }
      const Complex qa = legendre::evaluate(q, iv, iv.a) * std::polar(1.0, w * iv.a);
      out.add_component(w, q, 1.0);
      out.add_component(0.0, {-qa * std::sqrt(iv.length())}, 1.0);
    } else {
      const int deg = d + static_cast<int>(std::ceil(omega_h)) + 40;
      const int order = detail::oscillatory_order(deg + d, omega_h);
      const auto& env = c.envelope;
      auto g = [&](double x) { return legendre::evaluate(env, iv, x) * std::polar(1.0, w * x); };
      legendre::add_scaled(polynomial_part, legendre::project(g, iv, deg, order), 1.0);
    }
  }
  if (!polynomial_part.empty()) out.add_component(0.0, legendre::antiderivative(polynomial_part, iv), 1.0);
  return out;
}

}  // namespace infdim
