#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infdim/law.hpp"
#include "infdim/truncation.hpp"

namespace infdim {

struct TrackedComponent {
  long index = 0;
  Complex error = std::numeric_limits<double>::quiet_NaN();     // <u_n, f - f^>
  Complex residual = std::numeric_limits<double>::quiet_NaN();  // <v_n, g - A f^>
};

struct ConvergenceRecord {
  long N = 0;
  std::optional<double> err_norm;  // ||f - f^||, absent without an exact solution
  double res_norm = 0.0;           // ||g - A f^||
  double sol_norm = 0.0;           // ||f^||
  double eps_norm = 0.0;           // ||A_N f^(N) - g_N||
  std::vector<TrackedComponent> tracked;
};

inline const std::vector<long> default_tracked{1, 2, 3, 5, 10};

inline ConvergenceRecord evaluate(const BoundedOperator& op, const Element& g, const std::optional<Element>& f_exact,
                                  const ApproxSolution& sol, const OrthonormalBasis& trial,
                                  const OrthonormalBasis& test, const std::vector<long>& tracked = default_tracked) {
  ConvergenceRecord rec;
  rec.N = sol.ambient ? sol.iterations : static_cast<long>(sol.f.size());
  const Element fhat = lift(sol, trial);
  const Element R = g - op.apply(fhat);
  rec.res_norm = norm(R);
  rec.sol_norm = norm(fhat);
  rec.eps_norm = sol.eps_norm;
  std::optional<Element> E;
  if (f_exact) {
    E = *f_exact - fhat;
    rec.err_norm = norm(*E);
  }
  for (long k : tracked) {
    TrackedComponent c;
    c.index = k;
    if (trial.available(k) == k && E) c.error = inner(trial(k), *E);
    if (test.available(k) == k) c.residual = inner(test(k), R);
    rec.tracked.push_back(c);
  }
  return rec;
}

enum class ConvergenceKind { strong, weak_not_strong, componentwise_not_weak, none };

inline std::string to_string(ConvergenceKind k) {
  switch (k) {
    case ConvergenceKind::strong: return "strong";
    case ConvergenceKind::weak_not_strong: return "weak-not-strong";
    case ConvergenceKind::componentwise_not_weak: return "componentwise-not-weak";
    case ConvergenceKind::none: return "none";
  }
  return {};
}

enum class Indicator { error, residual };

struct Evidence {
  double last_norm = 0.0;
  double max_norm = 0.0;
  double loglog_slope = 0.0;      // fitted over the second half of the series
  double max_last_component = 0.0;  // largest tracked |component| at the last N
  bool components_vanish = false;
  bool bounded = false;
  bool diverging = false;
  bool strong = false;
};

struct Classification {
  ConvergenceKind kind = ConvergenceKind::none;
  Evidence evidence;
  bool advisory = true;  // finite data cannot decide weak convergence
};

inline constexpr double tol_strong = 1e-6;
inline constexpr double divergence_slope = 0.25;

/// Heuristic mode-of-convergence classifier over a sweep in N (at least 8 records).
inline Classification classify(const std::vector<ConvergenceRecord>& series, Indicator which) {
  if (series.size() < 8) {
    throw InvalidArgument("classification needs at least 8 values of N, got " + std::to_string(series.size()));
  }
  std::vector<double> x, y;
  for (const auto& r : series) {
    if (which == Indicator::error && !r.err_norm) throw InvalidArgument("error classification needs an exact solution");
    x.push_back(static_cast<double>(r.N));
    y.push_back(which == Indicator::error ? *r.err_norm : r.res_norm);
  }
  Evidence ev;
  ev.last_norm = y.back();
  ev.max_norm = *std::max_element(y.begin(), y.end());

  // least-squares slope of log ||.|| against log N over the second half
  const std::size_t start = y.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (std::size_t i = start; i < y.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    cnt += 1;
  }
  const double den = cnt * sxx - sx * sx;
  ev.loglog_slope = (cnt >= 2 && den > 0.0) ? (cnt * sxy - sx * sy) / den : 0.0;
  // growth of rounding noise below tol_strong is not divergence
  ev.diverging = ev.loglog_slope >= divergence_slope && ev.last_norm > tol_strong;
  ev.bounded = !ev.diverging;

  const auto& last = series.back().tracked;
  bool any = false;
  for (const auto& c : last) {
    const Complex v = which == Indicator::error ? c.error : c.residual;
    if (std::isnan(v.real())) continue;
    any = true;
    ev.max_last_component = std::max(ev.max_last_component, std::abs(v));
  }
  ev.components_vanish = any && ev.max_last_component <= tol_strong * std::max(1.0, ev.max_norm);

  const double first_half_max = *std::max_element(y.begin(), y.begin() + static_cast<long>(start));
  const double second_half_max = *std::max_element(y.begin() + static_cast<long>(start), y.end());
  ev.strong = ev.last_norm <= tol_strong && second_half_max <= std::max(first_half_max, tol_strong);

  Classification out;
  out.evidence = ev;
  if (ev.strong) out.kind = ConvergenceKind::strong;
  else if (ev.components_vanish && ev.diverging) out.kind = ConvergenceKind::componentwise_not_weak;
  else if (ev.components_vanish) out.kind = ConvergenceKind::weak_not_strong;
  return out;
}

// --- noise --------------------------------------------------------------------

/// Spectral noise model in the singular frame: sigma_n, g_n = <psi_n, g>, nu_n = <psi_n, nu>.
struct NoiseModel {
  SequenceLaw sigma, g, nu;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct NoisePoint {
  long N = 0;
  double alpha = 0.0;  // sum_{n<=N} nu_n^2 / sigma_n^2
  double beta = 0.0;   // sum_{n>N} (g_n / sigma_n)^2
  double res_sq = 0.0;
  double err_sq = 0.0;
};

struct NoiseSeries {
  std::vector<NoisePoint> points;  // N = 0 .. N_max
  long N0 = 0;                     // argmin of err_sq
};

inline NoiseSeries noise_series(const NoiseModel& m, long N_max) {
  if (N_max < 0) throw InvalidArgument("N_max must be >= 0");
  if (!m.nu.square_summable()) throw InvalidArgument("noise law " + m.nu.to_string() + " is not square-summable");
  const SequenceLaw f = m.g.divided_by(m.sigma);
  NoiseSeries s;
  s.points.resize(static_cast<std::size_t>(N_max + 1));
  double beta = f.square_summable() ? f.tail_sum_of_squares(N_max) : std::numeric_limits<double>::infinity();
  double gtail = m.g.tail_sum_of_squares(N_max);
  for (long N = N_max; N >= 0; --N) {
    auto& p = s.points[static_cast<std::size_t>(N)];
    p.N = N;
    p.beta = beta;
    p.res_sq = gtail;  // noise part added below
    if (N >= 1) {
      const double fn = f(N), gn = m.g(N);
      beta += fn * fn;
      gtail += gn * gn;
    }
  }
  double alpha = 0.0, nu2 = 0.0;
  for (long N = 0; N <= N_max; ++N) {
    if (N >= 1) {
      const double r = m.nu(N) / m.sigma(N);
      alpha += r * r;
      nu2 += m.nu(N) * m.nu(N);
    }
    auto& p = s.points[static_cast<std::size_t>(N)];
    p.alpha = alpha;
    p.res_sq += nu2;
    p.err_sq = alpha + p.beta;
    if (p.err_sq < s.points[static_cast<std::size_t>(s.N0)].err_sq) s.N0 = N;
  }
  return s;
}

/// Named noise models.
inline const std::map<std::string, NoiseModel>& noise_presets() {
  static const std::map<std::string, NoiseModel> presets{
      {"noise-example-6.2", {SequenceLaw::power(1.0), SequenceLaw::power(2.0), SequenceLaw::power(1.5)}},
      {"noise-fig1", {SequenceLaw::power(1.0), SequenceLaw::power(2.0), SequenceLaw::power(1.5, 0.4)}},
  };
  return presets;
}

inline const NoiseModel& noise_preset(const std::string& name) {
  const auto& p = noise_presets();
  auto it = p.find(name);
  if (it == p.end()) throw InvalidArgument("unknown noise preset '" + name + "'");
  return it->second;
}

struct PipelineCheck {
  double max_discrepancy = 0.0;
  std::vector<ConvergenceRecord> records;  // N = 1 .. N_max
  std::vector<NoisePoint> closed_form;     // N = 1 .. N_max, laws cut at the horizon
};

/// Runs compress / solve / evaluate in the singular bases with datum g + nu and compares
/// squared residual and error norms against the closed forms. Laws are cut at the horizon
/// M (default 4 N_max) so both sides describe the same finitely supported data.
inline PipelineCheck noisy_pipeline_check(const BoundedOperator& op, const NoiseModel& m, long N_max,
                                          long horizon = 0) {
  if (N_max < 1) throw InvalidArgument("N_max must be >= 1");
  if (horizon == 0) horizon = 4 * N_max;
  if (horizon < N_max) throw InvalidArgument("horizon must be >= N_max");
  const SvdTriple svd = op.svd();
  const SequenceLaw flaw = m.g.divided_by(m.sigma);
  for (long n = 1; n <= horizon; ++n) {
    if (std::abs(svd.sigma(n) - m.sigma(n)) > 1e-14 * m.sigma(n)) {
      throw InvalidArgument("noise model sigma law does not match the singular values of " + op.label());
    }
  }
  auto [trial, test] = svd_bases(op);
  Element g = Element::zero(op.space()), noisy = Element::zero(op.space()), f = Element::zero(op.space());
  for (long n = 1; n <= horizon; ++n) {
    const Element psi = test(n);
    g.axpy(m.g(n), psi);
    noisy.axpy(m.g(n) + m.nu(n), psi);
    f.axpy(flaw(n), trial(n));
  }
  PipelineCheck out;
  // closed forms cut at the horizon
  std::vector<double> gtail(static_cast<std::size_t>(horizon + 2), 0.0), ftail(gtail);
  for (long n = horizon; n >= 1; --n) {
    gtail[static_cast<std::size_t>(n)] = gtail[static_cast<std::size_t>(n + 1)] + m.g(n) * m.g(n);
    ftail[static_cast<std::size_t>(n)] = ftail[static_cast<std::size_t>(n + 1)] + flaw(n) * flaw(n);
  }
  double alpha = 0.0, nu2 = 0.0;
  for (long N = 1; N <= N_max; ++N) {
    alpha += std::pow(m.nu(N) / m.sigma(N), 2);
    nu2 += m.nu(N) * m.nu(N);
    NoisePoint p{N, alpha, ftail[static_cast<std::size_t>(N + 1)], nu2 + gtail[static_cast<std::size_t>(N + 1)], 0.0};
    p.err_sq = p.alpha + p.beta;

    const TruncatedProblem prob = compress(op, trial, test, N, noisy);
    const ApproxSolution sol = solve_direct(prob);
    ConvergenceRecord rec = evaluate(op, g, f, sol, trial, test);
    out.max_discrepancy = std::max({out.max_discrepancy, std::abs(rec.res_norm * rec.res_norm - p.res_sq),
                                    std::abs(*rec.err_norm * *rec.err_norm - p.err_sq)});
    out.records.push_back(std::move(rec));
    out.closed_form.push_back(p);
  }
  return out;
}

}  // namespace infdim
