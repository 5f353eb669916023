#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "infdim/element.hpp"
#include "infdim/law.hpp"

namespace infdim {

// Operator kinds. Sequence operators act on l2(N) unless stated otherwise.

/// e_n -> a_n e_n
struct MultiplicationSeq {
  SequenceLaw a;
};
/// e_n -> e_{n+1}
struct RightShift {};
/// e_n -> sigma_n e_{n+1} on l2(N)
struct WeightedShift {
  SequenceLaw sigma;
};
/// e_n -> sigma_|n| e_{n+1} on l2(Z)
struct WeightedShiftZ {
  SequenceLaw sigma;
};
/// (Vf)(x) = integral of f over [0, x], on L2[0, 1]
struct Volterra {};
/// f -> x f on L2[a, b]
struct MultiplicationX {
  Interval interval;
};

using OperatorKind =
    std::variant<MultiplicationSeq, RightShift, WeightedShift, WeightedShiftZ, Volterra, MultiplicationX>;

/// Description of an operator; `parse` accepts
///   volterra | right-shift | mult-x:a,b | mult-seq:<law> | wshift:<law> | wshift-z:<law>
struct OperatorSpec {
  OperatorKind kind;

  static OperatorSpec parse(std::string_view text);
  std::string to_string() const;
};

/// Exact singular system: A = sum_k sigma_k |psi_k><phi_k|, k = 1, 2, ...
struct SvdTriple {
  std::function<double(long)> sigma;
  std::function<Element(long)> right;  // phi_k
  std::function<Element(long)> left;   // psi_k
  bool strictly_decreasing = true;
};

inline const Interval unit_interval{0.0, 1.0};

/// A model bounded operator with its capabilities. Immutable.
class BoundedOperator {
 public:
  explicit BoundedOperator(OperatorKind kind) : kind_(std::move(kind)) {}

  const OperatorKind& kind() const { return kind_; }

  std::string label() const { return OperatorSpec{kind_}.to_string(); }

  Space space() const {
    return std::visit(
        [](const auto& k) -> Space {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Volterra>) return Space::functions(unit_interval);
          else if constexpr (std::is_same_v<K, MultiplicationX>) return Space::functions(k.interval);
          else if constexpr (std::is_same_v<K, WeightedShiftZ>) return Space::integers();
          else return Space::naturals();
        },
        kind_);
  }

  Element apply(const Element& f) const { return act(f, false); }
  Element apply_adjoint(const Element& f) const { return act(f, true); }
  bool has_adjoint() const { return true; }

  Complex matrix_element(const Element& v, const Element& u) const { return inner(v, apply(u)); }

  std::optional<double> norm() const {
    return std::visit(
        [](const auto& k) -> std::optional<double> {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, MultiplicationSeq>) {
            double m = 0.0;
            for (long n = 1; n <= 10000; ++n) m = std::max(m, std::abs(k.a(n)));
            return m;
          } else if constexpr (std::is_same_v<K, RightShift>) {
            return 1.0;
          } else if constexpr (std::is_same_v<K, WeightedShift>) {
            return k.sigma(1);
          } else if constexpr (std::is_same_v<K, WeightedShiftZ>) {
            return k.sigma(0);
          } else if constexpr (std::is_same_v<K, Volterra>) {
            return 2.0 / pi;
          } else {
            return std::max(std::abs(k.interval.a), std::abs(k.interval.b));
          }
        },
        kind_);
  }

  bool is_self_adjoint() const {
    return std::holds_alternative<MultiplicationSeq>(kind_) || std::holds_alternative<MultiplicationX>(kind_);
  }

  bool is_positive_semidefinite() const {
    if (auto* m = std::get_if<MultiplicationSeq>(&kind_)) {
      for (long n = 1; n <= 10000; ++n)
        if (m->a(n) < 0.0) return false;
      return true;
    }
    if (auto* m = std::get_if<MultiplicationX>(&kind_)) return m->interval.a >= 0.0;
    return false;
  }

  bool has_svd() const {
    return std::holds_alternative<Volterra>(kind_) || std::holds_alternative<WeightedShift>(kind_) ||
           std::holds_alternative<WeightedShiftZ>(kind_);
  }

  SvdTriple svd() const;

 private:
  Element act(const Element& f, bool adjoint) const;

  OperatorKind kind_;
};

namespace detail {

inline void check_weight_law(const SequenceLaw& sigma, long start) {
  double prev = sigma(start);
  if (!(prev > 0.0)) throw InvalidArgument("weight law must be positive");
  for (long n = start + 1; n <= 10000; ++n) {
    if (prev < std::numeric_limits<double>::min()) break;  // beyond the normal range the law is not resolvable
    const double cur = sigma(n);
    if (!(cur > 0.0) || !(cur < prev)) {
      throw InvalidArgument("weight law " + sigma.to_string() + " must satisfy 0 < sigma_{n+1} < sigma_n (fails at n = " +
                            std::to_string(n - 1) + ")");
    }
    prev = cur;
  }
  if (!sigma.vanishes_at_infinity()) throw InvalidArgument("weight law must tend to zero");
}

}  // namespace detail

/// Validated operator construction.
inline BoundedOperator make_operator(const OperatorSpec& spec) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, WeightedShift>) detail::check_weight_law(k.sigma, 1);
        if constexpr (std::is_same_v<K, WeightedShiftZ>) detail::check_weight_law(k.sigma, 0);
        if constexpr (std::is_same_v<K, MultiplicationSeq>) {
          if (!k.a.bounded()) throw InvalidArgument("multiplication law must be bounded");
        }
        if constexpr (std::is_same_v<K, MultiplicationX>) make_interval(k.interval.a, k.interval.b);
      },
      spec.kind);
  return BoundedOperator(spec.kind);
}

inline Element BoundedOperator::act(const Element& f, bool adjoint) const {
  if (!(f.space() == space())) {
    throw SpaceMismatch("operator " + label() + " acts on " + space().describe() + ", got an element of " +
                        f.space().describe());
  }
  return std::visit(
      [&](const auto& k) -> Element {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Volterra>) {
          const Function& g = f.function();
          if (!adjoint) return integrate_from_left(g);
          // (V* g)(x) = integral over [x, 1] = integral(g) - (V g)(x)
          Function out = Function::constant(g.interval(), integral(g));
          out -= integrate_from_left(g);
          return out;
        } else if constexpr (std::is_same_v<K, MultiplicationX>) {
          return times_x(f.function());
        } else {
          const Sequence& x = f.sequence();
          Sequence y(x.index_set());
          if constexpr (std::is_same_v<K, MultiplicationSeq>) {
            for (long n = x.first_index(); n <= x.last_index(); ++n) y.set(n, k.a(n) * x.at(n));
          } else if constexpr (std::is_same_v<K, RightShift>) {
            for (long n = x.first_index(); n <= x.last_index(); ++n) {
              if (adjoint) {
                if (n >= 2) y.set(n - 1, x.at(n));
              } else {
                y.set(n + 1, x.at(n));
              }
            }
          } else if constexpr (std::is_same_v<K, WeightedShift>) {
            for (long n = x.first_index(); n <= x.last_index(); ++n) {
              if (adjoint) {
                if (n >= 2) y.set(n - 1, k.sigma(n - 1) * x.at(n));
              } else {
                y.set(n + 1, k.sigma(n) * x.at(n));
              }
            }
          } else {  // WeightedShiftZ
            for (long n = x.first_index(); n <= x.last_index(); ++n) {
              if (adjoint) {
                y.set(n - 1, k.sigma(std::abs(n - 1)) * x.at(n));
              } else {
                y.set(n + 1, k.sigma(std::abs(n)) * x.at(n));
              }
            }
          }
          return y;
        }
      },
      kind_);
}

inline SvdTriple BoundedOperator::svd() const {
  if (auto* k = std::get_if<WeightedShift>(&kind_)) {
    SequenceLaw s = k->sigma;
    return {[s](long j) { return s(j); },
            [](long j) -> Element { return Sequence::unit(Space::Kind::natural, j); },
            [](long j) -> Element { return Sequence::unit(Space::Kind::natural, j + 1); }, true};
  }
  if (auto* k = std::get_if<WeightedShiftZ>(&kind_)) {
    SequenceLaw s = k->sigma;
    return {[s](long j) { return s(std::abs(symmetric_index(j))); },
            [](long j) -> Element { return Sequence::unit(Space::Kind::integer, symmetric_index(j)); },
            [](long j) -> Element { return Sequence::unit(Space::Kind::integer, symmetric_index(j) + 1); }, false};
  }
  if (std::holds_alternative<Volterra>(kind_)) {
    // sigma_k = 2/((2k-1) pi), phi_k = sqrt2 cos(w x), psi_k = sqrt2 sin(w x), w = (2k-1) pi / 2
    auto freq = [](long j) { return (2.0 * j - 1.0) * pi / 2.0; };
    const double r = std::sqrt(2.0) / 2.0;
    return {[](long j) { return 2.0 / ((2.0 * j - 1.0) * pi); },
            [=](long j) -> Element {
              Function f = Function::exponential(unit_interval, freq(j), r);
              f += Function::exponential(unit_interval, -freq(j), r);
              return f;
            },
            [=](long j) -> Element {
              const Complex c = r / Complex(0.0, 1.0);
              Function f = Function::exponential(unit_interval, freq(j), c);
              f += Function::exponential(unit_interval, -freq(j), -c);
              return f;
            },
            true};
  }
  throw CapabilityError("operator " + label() + " has no exact singular value decomposition");
}

inline Element apply(const BoundedOperator& op, const Element& f) { return op.apply(f); }

inline SvdTriple exact_svd(const BoundedOperator& op) { return op.svd(); }

/// V^n f via the kernel (x-y)^{n-1}/(n-1)!, evaluated by per-node Gauss-Legendre
/// sub-quadrature on [0, x] and re-expanded as a Legendre series.
inline Element volterra_power_apply(int n, const Element& f) {
  if (n < 1) throw InvalidArgument("Volterra power must be >= 1");
  const Function& g = f.function();
  if (!(g.interval() == unit_interval)) throw SpaceMismatch("Volterra operator acts on L2[0,1]");
  const int deg = std::max(g.max_degree(), 0);
  const double w = g.max_abs_frequency();
  const int osc = w > 0.0 ? static_cast<int>(std::ceil(0.5 * w)) + 40 : 0;
  const int out_degree = deg + n + osc;
  const int sub_order = std::max(64, (n - 1 + deg + osc) / 2 + 20);
  double fact = 1.0;
  for (int i = 2; i < n; ++i) fact *= i;
  auto kernel_integral = [&](double x) -> Complex {
    if (x <= 0.0) return 0.0;
    const auto rule = gauss_legendre(sub_order, 0.0, x);
    Complex s = 0.0;
    for (int k = 0; k < sub_order; ++k) {
      const double y = rule.nodes[k];
      s += rule.weights[k] * std::pow(x - y, n - 1) * g(y);
    }
    return s / fact;
  };
  return Function::series(unit_interval, legendre::project(kernel_integral, unit_interval, out_degree, out_degree + 1));
}

// --- spec strings ---------------------------------------------------------

inline OperatorSpec OperatorSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw InvalidArgument("operator '" + std::string(head) + "' needs an argument");
  };
  if (head == "volterra" && arg.empty()) return {Volterra{}};
  if (head == "right-shift" && arg.empty()) return {RightShift{}};
  if (head == "mult-x") {
    need_arg();
    const auto ab = detail::split(arg, ',');
    if (ab.size() != 2) throw InvalidArgument("mult-x expects 'mult-x:a,b'");
    return {MultiplicationX{make_interval(detail::parse_double(ab[0]), detail::parse_double(ab[1]))}};
  }
  if (head == "mult-seq") {
    need_arg();
    return {MultiplicationSeq{SequenceLaw::parse(arg)}};
  }
  if (head == "wshift") {
    need_arg();
    return {WeightedShift{SequenceLaw::parse(arg)}};
  }
  if (head == "wshift-z") {
    need_arg();
    return {WeightedShiftZ{SequenceLaw::parse(arg)}};
  }
  throw InvalidArgument("unknown operator '" + std::string(text) + "'");
}

inline std::string OperatorSpec::to_string() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MultiplicationSeq>) return "mult-seq:" + k.a.to_string();
        else if constexpr (std::is_same_v<K, RightShift>) return "right-shift";
        else if constexpr (std::is_same_v<K, WeightedShift>) return "wshift:" + k.sigma.to_string();
        else if constexpr (std::is_same_v<K, WeightedShiftZ>) return "wshift-z:" + k.sigma.to_string();
        else if constexpr (std::is_same_v<K, Volterra>) return "volterra";
        else return "mult-x:" + format_number(k.interval.a) + "," + format_number(k.interval.b);
      },
      kind);
}

inline BoundedOperator make_operator(std::string_view text) { return make_operator(OperatorSpec::parse(text)); }

}  // namespace infdim
