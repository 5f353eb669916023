#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "infdim/bases.hpp"
#include "infdim/core/linalg.hpp"

namespace infdim {

/// A_N[i][j] = <v_i, A u_j>, g_N[i] = <v_i, g>.
struct TruncatedProblem {
  long N = 0;
  DenseMatrix A;
  Coefficients g;
  std::string trial, test, op;
};

struct ApproxSolution {
  Coefficients f;          // f^(N) relative to the trial basis
  double eps_norm = 0.0;   // ||A_N f^(N) - g_N||
  std::string solver;
  long iterations = 0;
  std::optional<Element> ambient;  // set by the iterative solvers
  double residual_estimate = std::numeric_limits<double>::quiet_NaN();
  bool flagged = false;  // breakdown before the tolerance was met
};

/// Trial coefficients <u_n, f>, n = 1..N.
inline Coefficients project(const OrthonormalBasis& basis, const Element& f, long N) {
  DenseVector c(N);
  for (long n = 1; n <= N; ++n) c[n - 1] = inner(basis(n), f);
  return Coefficients(std::move(c), 1, basis.label());
}

namespace detail {

inline void check_bases(const BoundedOperator& op, const OrthonormalBasis& trial, const OrthonormalBasis& test) {
  if (!(trial.space() == op.space()) || !(test.space() == op.space())) {
    throw SpaceMismatch("bases " + trial.label() + "/" + test.label() + " do not live in " + op.space().describe());
  }
}

}  // namespace detail

/// Rows x cols block <v_i, A u_j>.
inline DenseMatrix compress_block(const BoundedOperator& op, const OrthonormalBasis& trial,
                                  const OrthonormalBasis& test, long rows, long cols) {
  detail::check_bases(op, trial, test);
  std::vector<Element> Au;
  Au.reserve(static_cast<std::size_t>(cols));
  for (long j = 1; j <= cols; ++j) Au.push_back(op.apply(trial(j)));
  DenseMatrix A(rows, cols);
  for (long i = 1; i <= rows; ++i) {
    const Element v = test(i);
    for (long j = 1; j <= cols; ++j) A(i - 1, j - 1) = inner(v, Au[static_cast<std::size_t>(j - 1)]);
  }
  return A;
}

inline TruncatedProblem compress(const BoundedOperator& op, const OrthonormalBasis& trial,
                                 const OrthonormalBasis& test, long N, const Element& g) {
  if (N < 1) throw InvalidArgument("truncation size must be >= 1");
  if (!(g.space() == op.space())) throw SpaceMismatch("datum does not live in " + op.space().describe());
  TruncatedProblem p;
  p.N = N;
  p.A = compress_block(op, trial, test, N, N);
  p.g = project(test, g, N);
  p.trial = trial.label();
  p.test = test.label();
  p.op = op.label();
  return p;
}

/// ||A_N f - g_N||
inline double eps_norm(const TruncatedProblem& p, const Coefficients& f) {
  return (p.A * f.values() - p.g.values()).norm();
}

/// f^ = sum_{n <= N} f_n u_n
inline Element lift(const ApproxSolution& sol, const OrthonormalBasis& trial) {
  if (sol.ambient) return *sol.ambient;
  const long N = static_cast<long>(sol.f.size());
  return linear_combination(trial.first(N), sol.f.values(), trial.space());
}

inline ApproxSolution solve_direct(const TruncatedProblem& p) {
  ApproxSolution s;
  s.f = qr_least_squares(p.A, p.g, p.trial);
  s.eps_norm = eps_norm(p, s.f);
  s.solver = "qr";
  return s;
}

/// Which solution of a (possibly singular) truncated problem is returned.
enum class SolutionFamily { min_norm, last_unit, scaled_last };

inline SolutionFamily parse_solution_family(std::string_view s) {
  if (s == "min-norm") return SolutionFamily::min_norm;
  if (s == "last-unit") return SolutionFamily::last_unit;
  if (s == "scaled-last") return SolutionFamily::scaled_last;
  throw InvalidArgument("unknown solution family '" + std::string(s) + "' (min-norm | last-unit | scaled-last)");
}

inline std::string to_string(SolutionFamily f) {
  switch (f) {
    case SolutionFamily::min_norm: return "min-norm";
    case SolutionFamily::last_unit: return "last-unit";
    case SolutionFamily::scaled_last: return "scaled-last";
  }
  return {};
}

/// last-unit gives f^(N) = e_N and scaled-last N e_N, whatever the datum.
inline ApproxSolution solve_family(const TruncatedProblem& p, SolutionFamily family) {
  if (family == SolutionFamily::min_norm) return solve_direct(p);
  ApproxSolution s;
  DenseVector f = DenseVector::Zero(p.N);
  f[p.N - 1] = family == SolutionFamily::last_unit ? 1.0 : static_cast<double>(p.N);
  s.f = Coefficients(std::move(f), 1, p.trial);
  s.eps_norm = eps_norm(p, s.f);
  s.solver = to_string(family);
  return s;
}

/// GMRES without restarts: iterate n minimizes ||g - A x|| over K_n(A, g).
/// Coefficients refer to the Arnoldi basis of K_n; `residual_estimate` is the
/// Hessenberg least-squares residual, eps_norm the Petrov-Galerkin one against A K_n.
inline std::vector<ApproxSolution> solve_gmres(const BoundedOperator& op, const Element& g, long N_max,
                                               double tol = 1e-10) {
  if (N_max < 1) throw InvalidArgument("N_max must be >= 1");
  ArnoldiProcess proc(op, g);
  std::vector<ApproxSolution> out;
  // Givens-reduced least squares: R upper triangular, rhs = Q^H beta e_1.
  std::vector<Complex> cs, sn;
  DenseMatrix R = DenseMatrix::Zero(N_max + 1, N_max);
  DenseVector rhs = DenseVector::Zero(N_max + 1);
  rhs[0] = proc.beta();
  for (long n = 1; n <= N_max; ++n) {
    const bool more = proc.step();
    const long j = n - 1;
    for (long i = 0; i <= j + 1; ++i) R(i, j) = proc.h(i, j);
    for (long i = 0; i < j; ++i) {
      const Complex a = R(i, j), b = R(i + 1, j);
      R(i, j) = std::conj(cs[i]) * a + std::conj(sn[i]) * b;
      R(i + 1, j) = -sn[i] * a + cs[i] * b;
    }
    const Complex a = R(j, j), b = R(j + 1, j);
    const double r = std::hypot(std::abs(a), std::abs(b));
    Complex c = 1.0, s = 0.0;
    if (r > 0.0) {
      c = a / r;
      s = b / r;
    }
    cs.push_back(c);
    sn.push_back(s);
    R(j, j) = r;
    R(j + 1, j) = 0.0;
    rhs[j + 1] = -s * rhs[j];
    rhs[j] = std::conj(c) * rhs[j];

    ApproxSolution sol;
    const DenseVector y =
        R.topLeftCorner(n, n).triangularView<Eigen::Upper>().solve(rhs.head(n));
    sol.f = Coefficients(y, 1, "krylov");
    sol.ambient = linear_combination(proc.vectors(), y, g.space());
    sol.residual_estimate = proc.exhausted() ? 0.0 : std::abs(rhs[j + 1]);
    sol.eps_norm = 0.0;  // R is nonsingular until breakdown, so the square Petrov-Galerkin system is solved exactly
    sol.solver = "gmres";
    sol.iterations = n;
    const bool done = sol.residual_estimate <= tol;
    sol.flagged = !more && !done && !proc.exhausted();
    out.push_back(std::move(sol));
    if (done || !more) break;
  }
  return out;
}

/// Phi[h] = <h, A h> - 2 Re <h, g>
inline double energy(const BoundedOperator& op, const Element& h, const Element& g) {
  return inner(h, op.apply(h)).real() - 2.0 * inner(h, g).real();
}

/// Conjugate-gradient iterates f^[0], f^[1], ..., f^[N_max] (two-term recurrence).
/// Stops early once the residual vanishes.
inline std::vector<ApproxSolution> solve_cg(const BoundedOperator& op, const Element& g, long N_max,
                                            const Element& f0) {
  if (!op.is_self_adjoint() || !op.is_positive_semidefinite()) {
    throw CapabilityError("conjugate gradients need a self-adjoint positive semi-definite operator, got " +
                          op.label());
  }
  if (!(g.space() == op.space()) || !(f0.space() == op.space())) {
    throw SpaceMismatch("datum or start vector not in " + op.space().describe());
  }
  auto record = [&](const Element& x, const Element& r, long it) {
    ApproxSolution s;
    s.f = Coefficients(DenseVector(), 1, "cg");
    s.ambient = x;
    s.eps_norm = norm(r);
    s.residual_estimate = s.eps_norm;
    s.solver = "cg";
    s.iterations = it;
    return s;
  };
  std::vector<ApproxSolution> out;
  Element x = f0;
  Element r = g - op.apply(x);
  Element p = r;
  double rr = inner(r, r).real();
  const double stop = 1e-28 * std::max(inner(g, g).real(), 1e-300);
  out.push_back(record(x, r, 0));
  for (long k = 1; k <= N_max && rr > stop; ++k) {
    const Element Ap = op.apply(p);
    const double pAp = inner(p, Ap).real();
    if (!(pAp > 0.0)) break;
    const double alpha = rr / pAp;
    x.axpy(alpha, p);
    r.axpy(-alpha, Ap);
    const double rr_new = inner(r, r).real();
    out.push_back(record(x, r, k));
    p *= rr_new / rr;
    p += r;
    rr = rr_new;
  }
  return out;
}

/// Operator-norm size of A - Q_N A P_N, estimated on the (2N x 2N) window of (test, trial).
inline double compression_gap(const BoundedOperator& op, const OrthonormalBasis& trial,
                              const OrthonormalBasis& test, long N) {
  DenseMatrix B = compress_block(op, trial, test, 2 * N, 2 * N);
  B.topLeftCorner(N, N).setZero();
  return singular_values(B).front();
}

}  // namespace infdim
