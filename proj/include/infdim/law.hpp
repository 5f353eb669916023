#pragma once

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "infdim/core/types.hpp"

namespace infdim {

std::string format_number(double x);

/// Closed-form real sequence n -> c * r^n * (n + s)^(-p).
///
/// Covers power laws (r = 1), geometric laws (p = 0) and constants. Laws are
/// evaluated on demand, so any index is available.
class SequenceLaw {
 public:
  SequenceLaw() = default;

  static SequenceLaw power(double p, double c = 1.0, double s = 0.0) { return {c, 1.0, p, s}; }
  static SequenceLaw geometric(double r, double c = 1.0) { return {c, r, 0.0, 0.0}; }
  static SequenceLaw constant(double c) { return {c, 1.0, 0.0, 0.0}; }
  static SequenceLaw zero() { return constant(0.0); }

  /// Grammar: pow:p[:c[:s]] | geom:r[:c] | const:c | zero
  static SequenceLaw parse(std::string_view text);

  double operator()(long n) const {
    if (c_ == 0.0) return 0.0;
    double v = c_;
    if (r_ != 1.0) v *= std::pow(r_, static_cast<double>(n));
    if (p_ != 0.0) v *= std::pow(static_cast<double>(n) + s_, -p_);
    return v;
  }

  double scale() const { return c_; }
  double ratio() const { return r_; }
  double exponent() const { return p_; }
  double shift() const { return s_; }
  bool is_zero() const { return c_ == 0.0; }

  /// True when the law tends to zero as n grows.
  bool vanishes_at_infinity() const { return c_ == 0.0 || r_ < 1.0 || (r_ == 1.0 && p_ > 0.0); }
  bool bounded() const { return c_ == 0.0 || r_ < 1.0 || (r_ == 1.0 && p_ >= 0.0); }
  bool square_summable() const { return c_ == 0.0 || r_ < 1.0 || (r_ == 1.0 && 2.0 * p_ > 1.0); }

  /// Pointwise quotient this / other, when it stays in the closed-form family.
  SequenceLaw divided_by(const SequenceLaw& other) const {
    if (other.c_ == 0.0) throw InvalidArgument("division by the zero law");
    if (c_ == 0.0) return zero();
    if (p_ != 0.0 && other.p_ != 0.0 && s_ != other.s_) {
      throw InvalidArgument("quotient of power laws with different shifts has no closed form");
    }
    const double s = p_ != 0.0 ? s_ : other.s_;
    return {c_ / other.c_, r_ / other.r_, p_ - other.p_, s};
  }

  /// sum_{n > m} law(n)^2, accurate to 1e-10 relative (throws when divergent).
  double tail_sum_of_squares(long m) const;

  std::string to_string() const {
    if (c_ == 0.0) return "zero";
    if (r_ == 1.0 && p_ == 0.0) return "const:" + format_number(c_);
    if (p_ == 0.0) {
      std::string out = "geom:" + format_number(r_);
      if (c_ != 1.0) out += ":" + format_number(c_);
      return out;
    }
    if (r_ == 1.0) {
      std::string out = "pow:" + format_number(p_);
      if (c_ != 1.0 || s_ != 0.0) out += ":" + format_number(c_);
      if (s_ != 0.0) out += ":" + format_number(s_);
      return out;
    }
    return "law:" + format_number(c_) + ":" + format_number(r_) + ":" + format_number(p_) + ":" +
           format_number(s_);
  }

  friend bool operator==(const SequenceLaw&, const SequenceLaw&) = default;

 private:
  SequenceLaw(double c, double r, double p, double s) : c_(c), r_(r), p_(p), s_(s) {}

  double c_ = 0.0;
  double r_ = 1.0;
  double p_ = 0.0;
  double s_ = 0.0;
};

/// Shortest round-trip decimal representation, locale independent.
inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InvalidArgument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline SequenceLaw SequenceLaw::parse(std::string_view text) {
  const auto parts = detail::split(text, ':');
  const auto& head = parts.front();
  auto arg = [&](std::size_t i, double fallback) {
    return i < parts.size() ? detail::parse_double(parts[i]) : fallback;
  };
  if (head == "zero" && parts.size() == 1) return zero();
  if (head == "const" && parts.size() == 2) return constant(arg(1, 0.0));
  if (head == "pow" && parts.size() >= 2 && parts.size() <= 4) return power(arg(1, 0.0), arg(2, 1.0), arg(3, 0.0));
  if (head == "geom" && parts.size() >= 2 && parts.size() <= 3) {
    const double r = arg(1, 0.0);
    if (!(r > 0.0)) throw InvalidArgument("geometric ratio must be positive");
    return geometric(r, arg(2, 1.0));
  }
  if (head == "law" && parts.size() == 5) return {arg(1, 0.0), arg(2, 1.0), arg(3, 0.0), arg(4, 0.0)};
  throw InvalidArgument("unrecognized sequence law '" + std::string(text) +
                        "' (expected pow:p[:c[:s]], geom:r[:c], const:c or zero)");
}

inline double SequenceLaw::tail_sum_of_squares(long m) const {
  if (c_ == 0.0) return 0.0;
  if (!square_summable()) throw InvalidArgument("law " + to_string() + " is not square-summable");
  const SequenceLaw sq{c_ * c_, r_ * r_, 2.0 * p_, s_};
  if (r_ == 1.0) {
    // Direct summation to m0, then Euler-Maclaurin on f(x) = C (x+s)^(-q).
    const double q = sq.p_;
    const long m0 = std::max<long>(m, 200);
    double head = 0.0;
    for (long n = m0; n > m; --n) head += sq(n);
    const double C = sq.c_;
    const double x = static_cast<double>(m0) + s_;
    // f^{(k)}(x) = C (-1)^k q (q+1) ... (q+k-1) x^{-q-k}
    auto deriv = [&](int k) {
      double v = C * std::pow(x, -q - k);
      for (int i = 0; i < k; ++i) v *= -(q + i);
      return v;
    };
    static constexpr double bernoulli[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0};
    double fact = 1.0;
    double tail = C * std::pow(x, 1.0 - q) / (q - 1.0) - 0.5 * deriv(0);
    double next = 0.0;
    for (int k = 1; k <= 5; ++k) {
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      const double term = bernoulli[k - 1] / fact * deriv(2 * k - 1);
      if (k == 5) {
        next = std::abs(term);
        break;
      }
      tail -= term;
    }
    const double total = head + tail;
    if (next > 1e-10 * std::abs(total)) {
      throw Error("tail remainder bound not met for " + to_string());
    }
    return total;
  }
  const double rho = sq.r_;
  if (sq.p_ == 0.0) return sq.c_ * std::pow(rho, static_cast<double>(m + 1)) / (1.0 - rho);
  // Geometric factor: sum terms until the geometric remainder bound is negligible.
  double total = 0.0;
  for (long n = m + 1;; ++n) {
    const double t = sq(n);
    total += t;
    // Consecutive-term ratios are bounded by rho when q >= 0 and decrease towards rho when q < 0.
    const double ratio = sq.p_ >= 0.0 ? rho : sq(n + 1) / t;
    if (ratio < 1.0 && t * ratio / (1.0 - ratio) <= 1e-17 * total) break;
    if (n - m > 100000000) throw Error("tail summation did not converge");
  }
  return total;
}

}  // namespace infdim
