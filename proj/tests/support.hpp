#pragma once

#include <random>

#include "infdim/infdim.hpp"

namespace testing_support {

using namespace infdim;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline Complex random_complex() { return {uniform(), uniform()}; }

inline DenseMatrix random_matrix(long r, long c) {
  DenseMatrix A(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) A(i, j) = random_complex();
  return A;
}

inline DenseVector random_vector(long n) {
  DenseVector v(n);
  for (long i = 0; i < n; ++i) v[i] = random_complex();
  return v;
}

inline DenseMatrix random_unitary(long n) {
  Eigen::HouseholderQR<DenseMatrix> qr(random_matrix(n, n));
  return qr.householderQ() * DenseMatrix::Identity(n, n);
}

/// Random polynomial of degree <= deg on iv, plus optionally one oscillatory component.
inline Function random_function(const Interval& iv, int deg = 6, bool oscillatory = true) {
  legendre::Series s(static_cast<std::size_t>(deg + 1));
  for (auto& c : s) c = random_complex();
  Function f = Function::series(iv, s);
  if (oscillatory) {
    legendre::Series t(3);
    for (auto& c : t) c = random_complex();
    f += Function::series(iv, t, 2.0 * pi * std::round(uniform(1.0, 6.0)) / iv.length() + uniform(-1.0, 1.0));
  }
  return f;
}

inline Sequence random_sequence(Space::Kind kind, long support = 12) {
  Sequence s(kind);
  for (long k = 1; k <= support; ++k) s.set(kind == Space::Kind::natural ? k : symmetric_index(k), random_complex());
  return s;
}

inline Element random_element(const Space& sp) {
  if (sp.kind == Space::Kind::function) return random_function(sp.interval);
  return random_sequence(sp.kind);
}

inline Element unit(Element e) {
  const double n = norm(e);
  return (1.0 / n) * e;
}

}  // namespace testing_support
