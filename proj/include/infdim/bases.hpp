#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infdim/core/linalg.hpp"
#include "infdim/operators.hpp"

namespace infdim {

/// An enumerable orthonormal family u_1, u_2, ... of the ambient space.
/// Finite families (Krylov after breakdown, adversarial) report their size.
class OrthonormalBasis {
 public:
  using Generator = std::function<Element(long)>;

  OrthonormalBasis(Space space, Generator gen, std::string label, bool complete,
                   std::optional<long> size = std::nullopt)
      : space_(std::move(space)), gen_(std::move(gen)), label_(std::move(label)), complete_(complete), size_(size) {}

  /// n-th element, n >= 1.
  Element operator()(long n) const {
    if (n < 1) throw InvalidArgument("basis index starts at 1");
    if (size_ && n > *size_) {
      throw InvalidArgument("basis '" + label_ + "' has only " + std::to_string(*size_) + " elements, asked for " +
                            std::to_string(n));
    }
    return gen_(n);
  }

  std::vector<Element> first(long N) const {
    std::vector<Element> out;
    out.reserve(static_cast<std::size_t>(N));
    for (long n = 1; n <= N; ++n) out.push_back((*this)(n));
    return out;
  }

  const Space& space() const { return space_; }
  const std::string& label() const { return label_; }
  bool complete() const { return complete_; }
  std::optional<long> size() const { return size_; }
  /// Number of available elements up to N.
  long available(long N) const { return size_ ? std::min(N, *size_) : N; }

 private:
  Space space_;
  Generator gen_;
  std::string label_;
  bool complete_;
  std::optional<long> size_;
};

inline OrthonormalBasis legendre_basis(const Interval& iv) {
  make_interval(iv.a, iv.b);
  return {Space::functions(iv), [iv](long n) -> Element { return Function::legendre_polynomial(iv, static_cast<int>(n - 1)); },
          "legendre", true};
}

inline OrthonormalBasis fourier_basis(const Interval& iv) {
  make_interval(iv.a, iv.b);
  return {Space::functions(iv), [iv](long n) -> Element { return Function::fourier_mode(iv, symmetric_index(n)); },
          "fourier", true};
}

/// e_{n+offset} on l2(N); on l2(Z) the n-th element is e_{k+offset} with k = 0, 1, -1, 2, ...
inline OrthonormalBasis canonical_basis(Space::Kind index, long offset = 0) {
  if (index == Space::Kind::function) throw InvalidArgument("canonical basis needs a sequence space");
  std::string label = offset == 0 ? "canonical" : "canonical+" + std::to_string(offset);
  if (index == Space::Kind::natural) {
    if (offset < 0) throw InvalidArgument("canonical basis offset on N must be >= 0");
    return {Space::naturals(), [offset](long n) -> Element { return Sequence::unit(Space::Kind::natural, n + offset); },
            std::move(label), offset == 0};
  }
  return {Space::integers(),
          [offset](long n) -> Element { return Sequence::unit(Space::Kind::integer, symmetric_index(n) + offset); },
          std::move(label), true};
}

inline constexpr double arnoldi_breakdown = 1e-12;

/// Incremental Arnoldi process for K(A, g) (modified Gram-Schmidt, one reorthogonalization pass).
/// After m steps: A U_m = U_{m+1} H (m+1 x m), or A U_m = U_m H (m x m) once exhausted.
class ArnoldiProcess {
 public:
  ArnoldiProcess(const BoundedOperator& op, const Element& g) : op_(op) {
    beta_ = norm(g);
    if (!(beta_ > 0.0)) throw InvalidArgument("Krylov space of the zero vector");
    vectors_.push_back((1.0 / beta_) * g);
  }

  /// Adds one column; returns false once the space is exhausted.
  bool step() {
    if (exhausted_) return false;
    const std::size_t j = columns_.size();
    Element w = op_.apply(vectors_[j]);
    const double wnorm = norm(w);
    std::vector<Complex> h(j + 2, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= j; ++i) {
        const Complex c = inner(vectors_[i], w);
        h[i] += c;
        w.axpy(-c, vectors_[i]);
      }
    }
    const double hn = norm(w);
    h[j + 1] = hn;
    columns_.push_back(std::move(h));
    if (hn <= arnoldi_breakdown * std::max(wnorm, beta_)) {
      exhausted_ = true;
      return false;
    }
    vectors_.push_back((1.0 / hn) * w);
    return true;
  }

  long steps() const { return static_cast<long>(columns_.size()); }
  bool exhausted() const { return exhausted_; }
  double beta() const { return beta_; }
  const std::vector<Element>& vectors() const { return vectors_; }
  /// Entry H(i, j), 0-based.
  Complex h(long i, long j) const {
    const auto& c = columns_[static_cast<std::size_t>(j)];
    return static_cast<std::size_t>(i) < c.size() ? c[static_cast<std::size_t>(i)] : Complex{};
  }
  /// (m+1) x m Hessenberg matrix, or m x m once exhausted.
  DenseMatrix hessenberg() const {
    const long m = steps();
    const long rows = exhausted_ ? m : m + 1;
    DenseMatrix H = DenseMatrix::Zero(rows, m);
    for (long j = 0; j < m; ++j)
      for (long i = 0; i < rows && i <= j + 1; ++i) H(i, j) = h(i, j);
    return H;
  }

 private:
  BoundedOperator op_;
  std::vector<Element> vectors_;
  std::vector<std::vector<Complex>> columns_;
  double beta_ = 0.0;
  bool exhausted_ = false;
};

/// Arnoldi data for K_N(A, g).
struct Arnoldi {
  std::vector<Element> vectors;  // u_1 .. u_{m+1} (u_{m+1} absent after breakdown)
  DenseMatrix hessenberg;
  double beta = 0.0;  // ||g||
  long steps = 0;     // m
  bool exhausted = false;
};

inline Arnoldi arnoldi(const BoundedOperator& op, const Element& g, long N) {
  if (N < 1) throw InvalidArgument("Krylov dimension must be >= 1");
  ArnoldiProcess proc(op, g);
  while (proc.steps() < N && proc.step()) {
  }
  return {proc.vectors(), proc.hessenberg(), proc.beta(), proc.steps(), proc.exhausted()};
}

/// First N Arnoldi vectors of K(A, g); fewer if the space is exhausted.
inline OrthonormalBasis krylov_basis(const BoundedOperator& op, const Element& g, long N) {
  auto ar = std::make_shared<const Arnoldi>(arnoldi(op, g, N));
  const long m = ar->steps;
  return {g.space(), [ar](long n) -> Element { return ar->vectors[static_cast<std::size_t>(n - 1)]; }, "krylov", false,
          m};
}

/// Orthonormal basis of A K_N(A, g), ordered so that its first n elements span A K_n.
inline OrthonormalBasis krylov_image_basis(const BoundedOperator& op, const Element& g, long N) {
  const Arnoldi ar = arnoldi(op, g, N);
  const DenseMatrix& H = ar.hessenberg;
  Eigen::HouseholderQR<DenseMatrix> qr(H);
  const DenseMatrix Q = qr.householderQ() * DenseMatrix::Identity(H.rows(), H.cols());
  auto elems = std::make_shared<std::vector<Element>>();
  const long m = static_cast<long>(H.cols());
  for (long j = 0; j < m; ++j) {
    elems->push_back(linear_combination(ar.vectors, Q.col(j), g.space()));
  }
  return {g.space(), [elems](long n) -> Element { return (*elems)[static_cast<std::size_t>(n - 1)]; }, "krylov-image",
          false, m};
}

/// Trial = right singular family phi_n, test = left singular family psi_n.
inline std::pair<OrthonormalBasis, OrthonormalBasis> svd_bases(const BoundedOperator& op) {
  SvdTriple s = op.svd();
  return {OrthonormalBasis(op.space(), s.right, "svd-right", true),
          OrthonormalBasis(op.space(), s.left, "svd-left", true)};
}

/// Test basis v_1, v_2, ... with v_N orthogonal to A u_1, ..., A u_N and to v_1, ..., v_{N-1},
/// so every compression A_N against `trial` has a zero last row.
/// The v_N are sought in the span of the first `horizon` trial elements.
inline OrthonormalBasis adversarial_test_basis(const BoundedOperator& op, const OrthonormalBasis& trial, long N_max,
                                               long horizon = 0) {
  if (N_max < 1) throw InvalidArgument("N_max must be >= 1");
  if (horizon == 0) horizon = 4 * N_max;
  if (horizon < 2 * N_max) {
    throw InvalidArgument("horizon " + std::to_string(horizon) + " is smaller than 2*N_max = " +
                          std::to_string(2 * N_max));
  }
  if (!(trial.space() == op.space())) throw SpaceMismatch("trial basis does not live in the operator's space");
  const std::vector<Element> window = trial.first(horizon);
  // M(k, j) = <w_k, A u_j>
  DenseMatrix M(horizon, N_max);
  for (long j = 0; j < N_max; ++j) {
    const Element Au = op.apply(window[static_cast<std::size_t>(j)]);
    for (long k = 0; k < horizon; ++k) M(k, j) = inner(window[static_cast<std::size_t>(k)], Au);
  }
  // v = sum_k c_k w_k; <v, x> = sum_k conj(c_k) <w_k, x>, so conj(c) solves the constraint rows.
  DenseMatrix V(horizon, N_max);  // columns are coordinates c of v_1 .. v_{N_max}
  for (long N = 1; N <= N_max; ++N) {
    DenseMatrix C(2 * N - 1, horizon);
    C.topRows(N) = M.leftCols(N).transpose();
    if (N > 1) C.bottomRows(N - 1) = V.leftCols(N - 1).transpose();
    V.col(N - 1) = unit_null_vector(C).conjugate();
  }
  auto elems = std::make_shared<std::vector<Element>>();
  for (long N = 0; N < N_max; ++N) elems->push_back(linear_combination(window, V.col(N), trial.space()));
  return {trial.space(), [elems](long n) -> Element { return (*elems)[static_cast<std::size_t>(n - 1)]; },
          "adversarial", false, N_max};
}

}  // namespace infdim
