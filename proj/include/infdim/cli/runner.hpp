#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infdim/cli/config.hpp"
#include "infdim/diagnostics.hpp"

namespace infdim::cli {

// --- datum specs --------------------------------------------------------------

/// poly:c0,c1,...  basis-e:k  func:<one|x|x2half|x2|sqrt|exp>  seq:M:<law>  zero
inline Element make_element(const std::string& spec, const Space& space) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  const bool fn = space.kind == Space::Kind::function;
  auto need = [&](bool function_space) {
    if (fn != function_space) {
      throw ConfigError("element '" + spec + "' does not live in " + space.describe());
    }
  };
  if (spec == "zero") return Element::zero(space);
  if (head == "poly") {
    need(true);
    std::vector<Complex> m;
    for (auto item : infdim::detail::split(arg, ',')) m.emplace_back(infdim::detail::parse_double(item));
    if (m.empty()) throw ConfigError("poly: needs coefficients");
    return Function::polynomial(space.interval, std::span<const Complex>(m));
  }
  if (head == "func") {
    need(true);
    const Interval& iv = space.interval;
    if (arg == "one") return Function::polynomial(iv, {1.0});
    if (arg == "x") return Function::polynomial(iv, {0.0, 1.0});
    if (arg == "x2half") return Function::polynomial(iv, {0.0, 0.0, 0.5});
    if (arg == "x2") return Function::polynomial(iv, {0.0, 0.0, 1.0});
    if (arg == "sqrt") {
      if (iv.a < 0.0) throw ConfigError("func:sqrt needs an interval inside [0, inf)");
      return Function::sampled(iv, [](double x) -> Complex { return std::sqrt(x); }, 96);
    }
    if (arg == "exp") return Function::sampled(iv, [](double x) -> Complex { return std::exp(x); }, 48);
    throw ConfigError("unknown function '" + arg + "' (one, x, x2half, x2, sqrt, exp)");
  }
  if (head == "basis-e") {
    need(false);
    const long k = static_cast<long>(infdim::detail::parse_double(arg));
    if (space.kind == Space::Kind::natural && k < 1) throw ConfigError("basis-e index must be >= 1 on l2(N)");
    return Sequence::unit(space.kind, k);
  }
  if (head == "seq") {
    need(false);
    const auto c2 = arg.find(':');
    if (c2 == std::string::npos) throw ConfigError("seq expects 'seq:M:<law>'");
    const long M = static_cast<long>(infdim::detail::parse_double(arg.substr(0, c2)));
    const SequenceLaw law = SequenceLaw::parse(arg.substr(c2 + 1));
    Sequence s(space.kind);
    for (long k = 1; k <= M; ++k) {
      const long n = space.kind == Space::Kind::natural ? k : symmetric_index(k);
      s.set(n, law(space.kind == Space::Kind::natural ? n : std::abs(n)));
    }
    return s;
  }
  throw ConfigError("unrecognized element spec '" + spec + "'");
}

// --- prepared experiment --------------------------------------------------------

struct Prepared {
  ExperimentConfig config;
  std::optional<BoundedOperator> op;
  std::optional<Element> g;
  std::optional<Element> exact;
  std::optional<NoiseModel> noise;
  SolutionFamily family = SolutionFamily::min_norm;
  std::string test_name;
};

/// Validates a configuration without computing anything heavy.
/// Throws ConfigError (exit 2) or CapabilityError (exit 3).
inline Prepared prepare(const ExperimentConfig& cfg) {
  Prepared p;
  p.config = cfg;
  if (cfg.n_list.empty()) throw ConfigError("truncation.n_list is required");
  for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
    if (cfg.n_list[i] <= cfg.n_list[i - 1]) throw ConfigError("N list must be strictly increasing");
  if (cfg.noise_mode()) {
    if (cfg.n_list.front() < 0) throw ConfigError("N list entries must be >= 0");
    if (!cfg.noise_preset.empty()) {
      if (!cfg.sigma.empty() || !cfg.g.empty() || !cfg.nu.empty())
        throw ConfigError("give either noise.preset or the sigma/g/nu laws, not both");
      try {
        p.noise = noise_preset(cfg.noise_preset);
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    } else {
      if (cfg.sigma.empty() || cfg.g.empty() || cfg.nu.empty())
        throw ConfigError("noise needs all of sigma, g and nu");
      try {
        p.noise = NoiseModel{SequenceLaw::parse(cfg.sigma), SequenceLaw::parse(cfg.g), SequenceLaw::parse(cfg.nu)};
        if (!p.noise->nu.square_summable()) throw ConfigError("noise law nu must be square-summable");
        p.noise->g.divided_by(p.noise->sigma);
      } catch (const ConfigError&) {
        throw;
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
    return p;
  }

  if (cfg.n_list.front() < 1) throw ConfigError("N list entries must be >= 1");
  try {
    p.op = make_operator(cfg.op);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("problem.operator: ") + e.what());
  }
  if (cfg.solver == "cg" && (!p.op->is_self_adjoint() || !p.op->is_positive_semidefinite()))
    throw CapabilityError("solver cg needs a self-adjoint positive semi-definite operator, " + p.op->label() +
                          " is not");
  const Space sp = p.op->space();
  if (cfg.interval) {
    if (sp.kind != Space::Kind::function || !(sp.interval == *cfg.interval))
      throw ConfigError("problem.interval does not match the operator's space " + sp.describe());
  }
  if (cfg.datum.empty()) throw ConfigError("problem.datum is required");
  try {
    p.g = make_element(cfg.datum, sp);
    if (!cfg.exact.empty()) p.exact = make_element(cfg.exact, sp);
    p.family = parse_solution_family(cfg.solution_family);
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.krylov_test != "image" && cfg.krylov_test != "galerkin")
    throw ConfigError("truncation.krylov_test must be image or galerkin");
  if (cfg.solver != "qr" && cfg.solver != "gmres" && cfg.solver != "cg")
    throw ConfigError("unknown solver '" + cfg.solver + "' (qr | gmres | cg)");
  if (cfg.solver != "qr" && p.family != SolutionFamily::min_norm)
    throw ConfigError("solution_family applies to the qr solver only");
  if (!(cfg.tol > 0.0)) throw ConfigError("truncation.tol must be positive");

  auto check_basis = [&](const std::string& name, bool as_test) {
    const bool seq = sp.is_sequence();
    if (name == "legendre" || name == "fourier") {
      if (seq) throw ConfigError("basis " + name + " needs a function space, operator acts on " + sp.describe());
    } else if (name == "canonical" || name.rfind("canonical+", 0) == 0) {
      if (!seq) throw ConfigError("canonical basis needs a sequence space");
    } else if (name == "svd") {
      if (!p.op->has_svd()) throw CapabilityError("operator " + p.op->label() + " has no exact SVD");
    } else if (name == "krylov") {
      if (norm(*p.g) == 0.0) throw ConfigError("Krylov basis of a zero datum");
    } else if (name == "adversarial") {
      if (!as_test) throw ConfigError("the adversarial family is a test basis only");
    } else {
      throw ConfigError("unknown basis '" + name + "' (legendre | fourier | krylov | svd | canonical | adversarial)");
    }
  };
  check_basis(cfg.trial, false);
  p.test_name = cfg.test.empty() ? cfg.trial : cfg.test;
  check_basis(p.test_name, true);
  if ((cfg.trial == "svd") != (p.test_name == "svd")) throw ConfigError("svd bases come as a trial/test pair");
  if (p.test_name == "krylov" && cfg.trial != "krylov") throw ConfigError("Krylov test basis needs a Krylov trial basis");
  return p;
}

struct Bases {
  OrthonormalBasis trial, test;
  std::string note;
};

inline Bases make_bases(const Prepared& p, long N_max) {
  const auto& cfg = p.config;
  const BoundedOperator& op = *p.op;
  const Space sp = op.space();
  auto simple = [&](const std::string& name) -> OrthonormalBasis {
    if (name == "legendre") return legendre_basis(sp.interval);
    if (name == "fourier") return fourier_basis(sp.interval);
    long offset = 0;
    if (name.size() > 10) offset = static_cast<long>(infdim::detail::parse_double(name.substr(10)));
    return canonical_basis(sp.kind, offset);
  };
  if (cfg.trial == "svd") {
    auto [t, s] = svd_bases(op);
    return {t, s, ""};
  }
  if (cfg.trial == "krylov") {
    OrthonormalBasis trial = krylov_basis(op, *p.g, N_max);
    std::string note;
    if (*trial.size() < N_max) note = "krylov_exhausted_at=" + std::to_string(*trial.size());
    if (p.test_name == "krylov") {
      if (cfg.krylov_test == "image") return {trial, krylov_image_basis(op, *p.g, N_max), note};
      return {trial, trial, note};
    }
    if (p.test_name == "adversarial") return {trial, adversarial_test_basis(op, trial, N_max), note};
    return {trial, simple(p.test_name), note};
  }
  OrthonormalBasis trial = simple(cfg.trial);
  if (p.test_name == "adversarial") return {trial, adversarial_test_basis(op, trial, N_max), ""};
  return {trial, simple(p.test_name), ""};
}

// --- output ------------------------------------------------------------------

struct RunOutput {
  std::string csv;
  std::vector<ConvergenceRecord> records;
  std::vector<NoisePoint> noise;
  std::optional<Classification> error_class, residual_class;
};

namespace detail {

inline std::string num(double x) { return std::isnan(x) ? "nan" : format_number(x); }

}  // namespace detail

inline RunOutput run(const ExperimentConfig& cfg) {
  const Prepared p = prepare(cfg);
  RunOutput out;
  std::ostringstream o;
  o << "# infdim experiment\n";
  const long N_max = cfg.n_list.back();

  if (p.noise) {
    const NoiseSeries s = noise_series(*p.noise, N_max);
    o << "# mode=noise\n";
    if (!cfg.noise_preset.empty()) o << "# preset=" << cfg.noise_preset << '\n';
    o << "# sigma=" << p.noise->sigma.to_string() << "\n# g=" << p.noise->g.to_string()
      << "\n# nu=" << p.noise->nu.to_string() << "\n# N0=" << s.N0 << '\n';
    o << "N,res_sq,err_sq,alpha,beta\n";
    for (long N : cfg.n_list) {
      const NoisePoint& q = s.points[static_cast<std::size_t>(N)];
      out.noise.push_back(q);
      o << N << ',' << detail::num(q.res_sq) << ',' << detail::num(q.err_sq) << ',' << detail::num(q.alpha) << ','
        << detail::num(q.beta) << '\n';
    }
    out.csv = o.str();
    return out;
  }

  const BoundedOperator& op = *p.op;
  const Bases b = make_bases(p, N_max);
  std::vector<ConvergenceRecord> recs;
  if (cfg.solver == "qr") {
    for (long N : cfg.n_list) {
      if (b.trial.available(N) < N || b.test.available(N) < N) break;
      const TruncatedProblem prob = compress(op, b.trial, b.test, N, *p.g);
      recs.push_back(evaluate(op, *p.g, p.exact, solve_family(prob, p.family), b.trial, b.test, cfg.track));
    }
  } else {
    std::vector<ApproxSolution> its;
    if (cfg.solver == "gmres") {
      its = solve_gmres(op, *p.g, N_max, cfg.tol);
    } else {
      its = solve_cg(op, *p.g, N_max, Element::zero(op.space()));
      its.erase(its.begin());  // f^[0] = 0
    }
    for (long N : cfg.n_list) {
      if (N > static_cast<long>(its.size())) break;
      recs.push_back(evaluate(op, *p.g, p.exact, its[static_cast<std::size_t>(N - 1)], b.trial, b.test, cfg.track));
    }
  }

  o << "# operator=" << op.label() << '\n';
  o << "# datum=" << cfg.datum << '\n';
  if (!cfg.exact.empty()) o << "# exact=" << cfg.exact << '\n';
  o << "# trial=" << b.trial.label() << "\n# test=" << b.test.label() << '\n';
  o << "# solver=" << cfg.solver << "\n# tol=" << format_number(cfg.tol) << '\n';
  o << "# solution_family=" << cfg.solution_family << '\n';
  o << "# krylov_test=" << cfg.krylov_test << '\n';
  if (!b.note.empty()) o << "# " << b.note << '\n';
  if (recs.size() >= 8) {
    if (p.exact) {
      out.error_class = classify(recs, Indicator::error);
      o << "# error_convergence=" << to_string(out.error_class->kind) << " (advisory)\n";
    }
    out.residual_class = classify(recs, Indicator::residual);
    o << "# residual_convergence=" << to_string(out.residual_class->kind) << " (advisory)\n";
  }
  o << "N,err_norm,res_norm,sol_norm,eps_norm";
  for (long k : cfg.track) o << ",err_" << k << ",res_" << k;
  o << '\n';
  for (const auto& r : recs) {
    o << r.N << ',' << detail::num(r.err_norm.value_or(std::nan(""))) << ',' << detail::num(r.res_norm) << ','
      << detail::num(r.sol_norm) << ',' << detail::num(r.eps_norm);
    for (const auto& c : r.tracked) o << ',' << detail::num(std::abs(c.error)) << ',' << detail::num(std::abs(c.residual));
    o << '\n';
  }
  out.records = std::move(recs);
  out.csv = o.str();
  return out;
}

inline std::string gnuplot_script(const std::string& csv_path, bool noise) {
  std::ostringstream o;
  o << "set datafile separator ','\nset key autotitle columnhead\nset logscale y\nset xlabel 'N'\n";
  if (noise) {
    o << "plot '" << csv_path << "' using 1:2 with lines, '' using 1:3 with lines\n";
  } else {
    o << "plot '" << csv_path << "' using 1:2 with linespoints, '' using 1:3 with linespoints\n";
  }
  return o.str();
}

// --- demos -------------------------------------------------------------------

struct DemoReport {
  std::string text;
  bool pass = false;
};

inline const std::vector<std::pair<std::string, std::string>>& demo_names() {
  static const std::vector<std::pair<std::string, std::string>> d{
      {"bad-truncation", "Volterra with Legendre trial and an adversarial test basis: every A_N singular"},
      {"pathological-family", "compact shift, f^(N) = N e_N for R f = 0: ||f^(N)|| diverges"},
      {"shift-weak-residual", "right shift, f^(N) = e_N for R f = 0: residual = -e_{N+1}, norm 1"},
  };
  return d;
}

inline DemoReport demo_bad_truncation(long N_max = 20, long horizon = 80) {
  const BoundedOperator V = make_operator("volterra");
  const OrthonormalBasis trial = legendre_basis(unit_interval);
  const OrthonormalBasis test = adversarial_test_basis(V, trial, N_max, horizon);
  std::ostringstream o;
  o << "demo bad-truncation: volterra, trial legendre, adversarial test, horizon " << horizon << '\n';
  o << "N,sigma_max,sigma_min\n";
  bool pass = true;
  for (long N = 1; N <= N_max; ++N) {
    const auto sv = singular_values(compress_block(V, trial, test, N, N));
    pass = pass && sv.back() <= 1e-10;
    o << N << ',' << format_number(sv.front()) << ',' << format_number(sv.back()) << '\n';
  }
  o << "check: sigma_min(A_N) <= 1e-10 for every N\n";
  o << "RESULT: " << (pass ? "PASS" : "FAIL") << '\n';
  return {o.str(), pass};
}

/// Shared sweep for the two family demos: trivial problem R f = 0 with canonical bases.
inline std::vector<ConvergenceRecord> family_sweep(const BoundedOperator& op, SolutionFamily family, long N_max) {
  const Element g = Element::zero(op.space());
  const OrthonormalBasis e = canonical_basis(Space::Kind::natural);
  std::vector<ConvergenceRecord> recs;
  for (long N = 1; N <= N_max; ++N) {
    const TruncatedProblem p = compress(op, e, e, N, g);
    recs.push_back(evaluate(op, g, g, solve_family(p, family), e, e));
  }
  return recs;
}

inline DemoReport demo_pathological_family(long N_max = 40) {
  const BoundedOperator R = make_operator("wshift:pow:1");
  const auto recs = family_sweep(R, SolutionFamily::scaled_last, N_max);
  const Classification ce = classify(recs, Indicator::error);
  const Classification cr = classify(recs, Indicator::residual);
  std::ostringstream o;
  o << "demo pathological-family: wshift:pow:1, g = 0, f^(N) = N e_N (canonical bases)\n";
  o << "N,err_norm,res_norm,sol_norm,eps_norm\n";
  bool grows = true;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    if (i > 0) grows = grows && r.sol_norm > recs[i - 1].sol_norm;
    o << r.N << ',' << format_number(*r.err_norm) << ',' << format_number(r.res_norm) << ','
      << format_number(r.sol_norm) << ',' << format_number(r.eps_norm) << '\n';
  }
  const bool pass = grows && ce.kind == ConvergenceKind::componentwise_not_weak;
  o << "error classification (advisory): " << to_string(ce.kind) << ", log-log slope "
    << format_number(ce.evidence.loglog_slope) << '\n';
  o << "residual classification (advisory): " << to_string(cr.kind) << '\n';
  o << "check: sol_norm strictly increasing and error componentwise-not-weak\n";
  o << "RESULT: " << (pass ? "PASS" : "FAIL") << '\n';
  return {o.str(), pass};
}

inline DemoReport demo_shift_weak_residual(long N_max = 100) {
  const BoundedOperator R = make_operator("right-shift");
  const auto recs = family_sweep(R, SolutionFamily::last_unit, N_max);
  const Classification cr = classify(recs, Indicator::residual);
  std::ostringstream o;
  o << "demo shift-weak-residual: right-shift, g = 0, f^(N) = e_N (canonical bases)\n";
  o << "N,res_norm,max_tracked_residual_component_past_index\n";
  bool pass = true;
  for (const auto& r : recs) {
    double worst = 0.0;
    for (const auto& c : r.tracked)
      if (r.N > c.index) worst = std::max(worst, std::abs(c.residual));
    pass = pass && r.res_norm == 1.0 && worst <= 1e-12;
    o << r.N << ',' << format_number(r.res_norm) << ',' << format_number(worst) << '\n';
  }
  pass = pass && cr.kind == ConvergenceKind::weak_not_strong;
  o << "residual classification (advisory): " << to_string(cr.kind) << '\n';
  o << "check: res_norm = 1 at every N, tracked components vanish past their index, weak-not-strong\n";
  o << "RESULT: " << (pass ? "PASS" : "FAIL") << '\n';
  return {o.str(), pass};
}

inline DemoReport run_demo(const std::string& name) {
  if (name == "bad-truncation") return demo_bad_truncation();
  if (name == "pathological-family") return demo_pathological_family();
  if (name == "shift-weak-residual") return demo_shift_weak_residual();
  throw ConfigError("unknown demo '" + name + "' (bad-truncation | pathological-family | shift-weak-residual)");
}

inline std::string list_presets() {
  std::ostringstream o;
  o << "experiment presets (run <name>):\n";
  for (const auto& p : run_presets()) o << "  " << p.name << "  " << p.description << '\n';
  o << "noise presets ([noise] preset = <name>):\n";
  for (const auto& [name, m] : noise_presets())
    o << "  " << name << "  sigma=" << m.sigma.to_string() << " g=" << m.g.to_string() << " nu=" << m.nu.to_string()
      << '\n';
  o << "operators: volterra | right-shift | mult-x:a,b | mult-seq:<law> | wshift:<law> | wshift-z:<law>\n";
  o << "bases: legendre | fourier | krylov | svd | canonical[+k] | adversarial (test only)\n";
  o << "data: poly:c0,c1,... | basis-e:k | seq:M:<law> | zero | func:one|x|x2half|x2|sqrt|exp\n";
  o << "laws: pow:p[:c[:s]] | geom:r[:c] | const:c | zero | law:c:r:p:s\n";
  o << "demos (demo <name>):\n";
  for (const auto& [name, d] : demo_names()) o << "  " << name << "  " << d << '\n';
  return o.str();
}

}  // namespace infdim::cli
