#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "infdim/core/coefficients.hpp"
#include "infdim/function.hpp"

namespace infdim {

/// Ambient Hilbert space: l2(N), l2(Z) or L2[a, b].
struct Space {
  enum class Kind { natural, integer, function };
  Kind kind = Kind::natural;
  Interval interval{};

  static Space naturals() { return {Kind::natural, {}}; }
  static Space integers() { return {Kind::integer, {}}; }
  static Space functions(const Interval& iv) { return {Kind::function, iv}; }

  bool is_sequence() const { return kind != Kind::function; }

  std::string describe() const {
    switch (kind) {
      case Kind::natural: return "l2(N)";
      case Kind::integer: return "l2(Z)";
      case Kind::function:
        return "L2[" + std::to_string(interval.a) + "," + std::to_string(interval.b) + "]";
    }
    return "?";
  }

  friend bool operator==(const Space& l, const Space& r) {
    return l.kind == r.kind && (l.kind != Kind::function || l.interval == r.interval);
  }
};

/// Finitely supported square-summable sequence indexed by N (from 1) or Z.
///
/// Integer-indexed sequences store the symmetric window [-K, K].
class Sequence {
 public:
  explicit Sequence(Space::Kind index = Space::Kind::natural) : index_(index) {
    if (index == Space::Kind::integer) v_.assign(1, 0.0);
  }

  /// x_1, x_2, ... from the given values.
  static Sequence naturals(std::vector<Complex> values) {
    Sequence s(Space::Kind::natural);
    s.v_ = std::move(values);
    return s;
  }

  /// x_{-K}, ..., x_K from 2K+1 values.
  static Sequence integers(std::vector<Complex> values) {
    if (values.size() % 2 == 0) throw InvalidArgument("integer-indexed window needs odd length");
    Sequence s(Space::Kind::integer);
    s.v_ = std::move(values);
    return s;
  }

  /// Canonical unit vector e_n.
  static Sequence unit(Space::Kind index, long n) {
    Sequence s(index);
    s.set(n, 1.0);
    return s;
  }

  Space::Kind index_set() const { return index_; }
  Space space() const { return {index_, {}}; }

  long first_index() const { return index_ == Space::Kind::natural ? 1 : -window(); }
  long last_index() const {
    return index_ == Space::Kind::natural ? static_cast<long>(v_.size()) : window();
  }
  long window() const { return static_cast<long>(v_.size() / 2); }

  Complex at(long n) const {
    const long k = offset(n);
    return (k < 0 || k >= static_cast<long>(v_.size())) ? Complex{} : v_[k];
  }

  void set(long n, Complex value) {
    if (index_ == Space::Kind::natural && n < 1) throw InvalidArgument("l2(N) index must be >= 1");
    reserve_index(n);
    v_[offset(n)] = value;
  }

  /// Grows the stored support so that index n is addressable.
  void reserve_index(long n) {
    if (index_ == Space::Kind::natural) {
      if (n > static_cast<long>(v_.size())) v_.resize(n, 0.0);
    } else {
      const long k = std::abs(n);
      const long old = window();
      if (k > old) {
        std::vector<Complex> w(2 * k + 1, 0.0);
        std::copy(v_.begin(), v_.end(), w.begin() + (k - old));
        v_ = std::move(w);
      }
    }
  }

  const std::vector<Complex>& values() const { return v_; }

  void axpy(Complex s, const Sequence& o) {
    check_same(o);
    reserve_index(o.index_ == Space::Kind::natural ? o.last_index() : o.window());
    for (long n = o.first_index(); n <= o.last_index(); ++n) v_[offset(n)] += s * o.at(n);
  }

  Sequence& operator*=(Complex s) {
    for (auto& x : v_) x *= s;
    return *this;
  }

  friend Complex inner(const Sequence& l, const Sequence& r) {
    l.check_same(r);
    const long lo = std::max(l.first_index(), r.first_index());
    const long hi = std::min(l.last_index(), r.last_index());
    Complex s = 0.0;
    for (long n = lo; n <= hi; ++n) s += std::conj(l.at(n)) * r.at(n);
    return s;
  }

  void check_same(const Sequence& o) const {
    if (index_ != o.index_) throw SpaceMismatch("sequences indexed by different sets");
  }

 private:
  long offset(long n) const { return index_ == Space::Kind::natural ? n - 1 : n + window(); }

  Space::Kind index_;
  std::vector<Complex> v_;
};

/// Vector of the ambient Hilbert space: a sequence or a function.
class Element {
 public:
  Element() : rep_(Sequence()) {}
  Element(Sequence s) : rep_(std::move(s)) {}
  Element(Function f) : rep_(std::move(f)) {}

  static Element zero(const Space& sp) {
    if (sp.kind == Space::Kind::function) return Function::zero(sp.interval);
    return Sequence(sp.kind);
  }

  Space space() const {
    if (auto* f = std::get_if<Function>(&rep_)) return Space::functions(f->interval());
    return std::get<Sequence>(rep_).space();
  }

  bool is_function() const { return std::holds_alternative<Function>(rep_); }
  const Function& function() const {
    if (auto* f = std::get_if<Function>(&rep_)) return *f;
    throw SpaceMismatch("expected a function-space element, got a sequence");
  }
  const Sequence& sequence() const {
    if (auto* s = std::get_if<Sequence>(&rep_)) return *s;
    throw SpaceMismatch("expected a sequence-space element, got a function");
  }

  /// this += s * o
  void axpy(Complex s, const Element& o) {
    if (auto* f = std::get_if<Function>(&rep_)) {
      f->axpy(s, o.function());
    } else {
      std::get<Sequence>(rep_).axpy(s, o.sequence());
    }
  }

  Element& operator+=(const Element& o) {
    axpy(1.0, o);
    return *this;
  }
  Element& operator-=(const Element& o) {
    axpy(-1.0, o);
    return *this;
  }
  Element& operator*=(Complex s) {
    std::visit([s](auto& x) { x *= s; }, rep_);
    return *this;
  }
  friend Element operator+(Element l, const Element& r) { return l += r; }
  friend Element operator-(Element l, const Element& r) { return l -= r; }
  friend Element operator*(Complex s, Element e) { return e *= s; }

  friend Complex inner(const Element& l, const Element& r) {
    if (l.is_function()) return infdim::inner(l.function(), r.function());
    return inner(l.sequence(), r.sequence());
  }

 private:
  std::variant<Sequence, Function> rep_;
};

inline double norm(const Element& e) { return std::sqrt(std::max(0.0, inner(e, e).real())); }

/// sum_k c_k e_k for a list of elements sharing one space.
inline Element linear_combination(const std::vector<Element>& elems, const DenseVector& c, const Space& sp) {
  Element out = Element::zero(sp);
  for (Eigen::Index k = 0; k < c.size(); ++k)
    if (c[k] != Complex{}) out.axpy(c[k], elems[static_cast<std::size_t>(k)]);
  return out;
}

}  // namespace infdim

namespace infdim {

/// Symmetric enumeration of Z used by integer-indexed and Fourier bases:
/// k = 1, 2, 3, 4, 5, ... maps to 0, +1, -1, +2, -2, ...
inline long symmetric_index(long k) {
  if (k < 1) throw InvalidArgument("enumeration starts at 1");
  const long m = k / 2;
  return (k % 2 == 0) ? m : -m;
}

}  // namespace infdim
