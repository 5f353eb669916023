#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace infdim;
using namespace testing_support;

namespace {

const Interval i01{0, 1};
const double zeta3 = 1.2020569031595942854;

Element poly01(std::initializer_list<Complex> m) { return Function::polynomial(i01, m); }

std::vector<ConvergenceRecord> family_records(const char* op, SolutionFamily fam, long N_max) {
  const auto A = make_operator(op);
  const auto e = canonical_basis(Space::Kind::natural);
  const Element zero = Element::zero(Space::naturals());
  std::vector<ConvergenceRecord> out;
  for (long N = 1; N <= N_max; ++N)
    out.push_back(evaluate(A, zero, zero, solve_family(compress(A, e, e, N, zero), fam), e, e));
  return out;
}

std::vector<ConvergenceRecord> volterra_legendre(long N_max) {
  const auto V = make_operator("volterra");
  const auto L = legendre_basis(i01);
  const Element g = poly01({0, 0, 0.5}), f = poly01({0, 1});
  std::vector<ConvergenceRecord> out;
  for (long N = 2; N <= N_max; ++N) out.push_back(evaluate(V, g, f, solve_direct(compress(V, L, L, N, g)), L, L));
  return out;
}

}  // namespace

TEST(Evaluate, FirstProblemLegendre) {
  const auto rec = volterra_legendre(10).back();
  EXPECT_EQ(rec.N, 10);
  ASSERT_TRUE(rec.err_norm);
  EXPECT_LE(*rec.err_norm, 1e-6);
  EXPECT_NEAR(rec.sol_norm, 0.5774, 1e-4);
  EXPECT_EQ(rec.tracked.size(), default_tracked.size());
}

TEST(Evaluate, RightShiftUnitFamily) {
  const auto recs = family_records("right-shift", SolutionFamily::last_unit, 30);
  for (const auto& r : recs) {
    EXPECT_EQ(r.res_norm, 1.0);
    for (const auto& c : r.tracked)
      if (r.N >= c.index) {
        EXPECT_EQ(std::abs(c.residual), 0.0);
      }
  }
}

TEST(Evaluate, ExactSolutionGivesZeroIndicators) {
  const auto V = make_operator("volterra");
  const auto L = legendre_basis(i01);
  const Element f = poly01({0, 1}), g = V.apply(f);
  ApproxSolution s;
  s.f = project(L, f, 4);
  const auto r = evaluate(V, g, f, s, L, L);
  EXPECT_LT(*r.err_norm, 1e-15);
  EXPECT_LT(r.res_norm, 1e-15);
}

TEST(Evaluate, ResidualOnlyWithoutExactSolution) {
  const auto V = make_operator("volterra");
  const auto L = legendre_basis(i01);
  const Element g = poly01({0, 0, 0.5});
  const auto r = evaluate(V, g, std::nullopt, solve_direct(compress(V, L, L, 3, g)), L, L);
  EXPECT_FALSE(r.err_norm.has_value());
  EXPECT_TRUE(std::isnan(r.tracked[0].error.real()));
}

TEST(Evaluate, ResidualDominatedByOperatorNormTimesError) {
  struct Case {
    const char* op;
    const char* basis;
  };
  for (const Case c : {Case{"volterra", "legendre"}, Case{"volterra", "fourier"}, Case{"mult-x:1,2", "fourier"},
                       Case{"wshift:pow:1", "canonical"}, Case{"right-shift", "canonical"}}) {
    const auto A = make_operator(c.op);
    const Space sp = A.space();
    const auto b = std::string(c.basis) == "legendre" ? legendre_basis(sp.interval)
                   : std::string(c.basis) == "fourier" ? fourier_basis(sp.interval)
                                                        : canonical_basis(sp.kind);
    for (int t = 0; t < 10; ++t) {
      const Element f = random_element(sp);
      const Element g = A.apply(f);
      const long N = 2 + t;
      const auto r = evaluate(A, g, f, solve_direct(compress(A, b, b, N, g)), b, b);
      EXPECT_LE(r.res_norm, *A.norm() * *r.err_norm * (1 + 1e-10) + 1e-14) << c.op;
    }
  }
}

TEST(Classify, UnitFamilyIsWeakNotStrong) {
  const auto recs = family_records("wshift:pow:1", SolutionFamily::last_unit, 30);
  for (const auto& r : recs) EXPECT_DOUBLE_EQ(*r.err_norm, 1.0);
  const auto c = classify(recs, Indicator::error);
  EXPECT_EQ(c.kind, ConvergenceKind::weak_not_strong);
  EXPECT_TRUE(c.advisory);
}

TEST(Classify, ScaledFamilyIsComponentwiseNotWeak) {
  const auto recs = family_records("wshift:pow:1", SolutionFamily::scaled_last, 30);
  EXPECT_EQ(classify(recs, Indicator::error).kind, ConvergenceKind::componentwise_not_weak);
  EXPECT_DOUBLE_EQ(recs.back().sol_norm, 30.0);
}

TEST(Classify, VolterraLegendreIsStrong) {
  const auto recs = volterra_legendre(40);
  const auto c = classify(recs, Indicator::error);
  EXPECT_EQ(c.kind, ConvergenceKind::strong);
  // strong implies the weak and componentwise predicates
  EXPECT_TRUE(c.evidence.components_vanish);
  EXPECT_TRUE(c.evidence.bounded);
  EXPECT_EQ(classify(recs, Indicator::residual).kind, ConvergenceKind::strong);
}

TEST(Classify, StrongImpliesWeakAndComponentwiseOnRandomDecays) {
  for (int t = 0; t < 30; ++t) {
    std::vector<ConvergenceRecord> recs;
    const double rate = uniform(1.5, 6.0);
    for (long N = 1; N <= 20; ++N) {
      ConvergenceRecord r;
      r.N = N;
      r.err_norm = std::pow(static_cast<double>(N), -rate) * 1e-3;
      r.res_norm = *r.err_norm;
      for (long k : default_tracked) r.tracked.push_back({k, *r.err_norm * uniform(0, 1), *r.err_norm * uniform(0, 1)});
      recs.push_back(r);
    }
    const auto c = classify(recs, Indicator::error);
    if (c.kind == ConvergenceKind::strong) {
      EXPECT_TRUE(c.evidence.components_vanish);
      EXPECT_TRUE(c.evidence.bounded);
    }
  }
}

TEST(Classify, NeedsEightRecords) {
  const auto recs = family_records("right-shift", SolutionFamily::last_unit, 7);
  EXPECT_THROW(classify(recs, Indicator::residual), InvalidArgument);
}

TEST(Noise, ExampleClosedForms) {
  const auto s = noise_series(noise_preset("noise-example-6.2"), 10000);
  EXPECT_NEAR(s.points[0].beta, pi * pi / 6, 1e-14);
  EXPECT_EQ(s.points[0].alpha, 0.0);
  long double H = 0, inv_sq = 0, inv_cube = 0, inv_four = 0;
  const long double z2 = 1.644934066848226436472L, z4 = 1.082323233711138191516L;
  for (long N = 1; N <= 10000; ++N) {
    H += 1.0L / N;
    inv_sq += 1.0L / (static_cast<long double>(N) * N);
    inv_cube += 1.0L / (static_cast<long double>(N) * N * N);
    inv_four += 1.0L / (static_cast<long double>(N) * N * N * N);
    if (N % 997 == 0 || N <= 5) {
      const auto& p = s.points[static_cast<std::size_t>(N)];
      EXPECT_NEAR(p.alpha, static_cast<double>(H), 1e-12 * H);
      EXPECT_NEAR(p.beta, static_cast<double>(z2 - inv_sq), 1e-10 * (z2 - inv_sq));
      EXPECT_NEAR(p.res_sq, static_cast<double>(inv_cube + z4 - inv_four), 1e-13);
      EXPECT_LE(p.beta, 1.0 / N);
      EXPECT_GE(p.beta, 1.0 / (N + 1));
    }
  }
  EXPECT_NEAR(s.points[10000].res_sq, zeta3, 1e-8);
  const double ratio = s.points[10000].alpha / std::log(10000.0);
  EXPECT_GT(ratio, 0.9);
  EXPECT_LT(ratio, 1.2);
}

TEST(Noise, WithoutNoiseErrorDecreasesToZero) {
  NoiseModel m{SequenceLaw::power(1), SequenceLaw::power(2), SequenceLaw::zero()};
  const auto s = noise_series(m, 500);
  for (std::size_t N = 1; N < s.points.size(); ++N) {
    EXPECT_LT(s.points[N].err_sq, s.points[N - 1].err_sq);
    EXPECT_NEAR(s.points[N].res_sq, SequenceLaw::power(2).tail_sum_of_squares(static_cast<long>(N)), 1e-16);
  }
  EXPECT_EQ(s.N0, 500);
}

TEST(Noise, SemiconvergenceShapes) {
  // nu_n = 0.4 n^{-3/2}: strict decrease to an interior minimum, strict increase afterwards
  const auto fig = noise_series(noise_preset("noise-fig1"), 2000);
  ASSERT_GE(fig.N0, 1);
  ASSERT_LT(fig.N0, 2000);
  for (long N = 1; N <= fig.N0; ++N) EXPECT_LT(fig.points[N].err_sq, fig.points[N - 1].err_sq);
  for (long N = fig.N0 + 1; N <= 2000; ++N) EXPECT_GT(fig.points[N].err_sq, fig.points[N - 1].err_sq);
  EXPECT_NEAR(fig.points[2000].res_sq, 0.16 * zeta3, 1e-6);
  // nu_n = n^{-3/2}: err_sq(1) = err_sq(0) (increment 1/N - 1/N^2 vanishes at N = 1), then strict increase
  const auto ex = noise_series(noise_preset("noise-example-6.2"), 2000);
  EXPECT_NEAR(ex.points[1].err_sq, ex.points[0].err_sq, 1e-15);
  for (long N = 2; N <= 2000; ++N) EXPECT_GT(ex.points[N].err_sq, ex.points[N - 1].err_sq);
}

TEST(Noise, RejectsNonSummableNoise) {
  NoiseModel m{SequenceLaw::power(1), SequenceLaw::power(2), SequenceLaw::power(0.5)};
  EXPECT_THROW(noise_series(m, 10), InvalidArgument);
}

TEST(Noise, PipelineMatchesClosedForms) {
  const auto W = make_operator("wshift:pow:1");
  const auto ex = noisy_pipeline_check(W, noise_preset("noise-example-6.2"), 60);
  EXPECT_LE(ex.max_discrepancy, 1e-10);
  NoiseModel clean{SequenceLaw::power(1), SequenceLaw::power(2), SequenceLaw::zero()};
  EXPECT_LE(noisy_pipeline_check(W, clean, 60).max_discrepancy, 1e-12);
  const auto fig = noisy_pipeline_check(W, noise_preset("noise-fig1"), 100);
  EXPECT_LE(fig.max_discrepancy, 1e-10);
  EXPECT_NEAR(std::pow(fig.records.back().res_norm, 2), 0.16 * zeta3, 1e-4);
  for (const auto& r : ex.records) EXPECT_LE(r.eps_norm, 1e-15);
}

TEST(Noise, PipelineOnVolterra) {
  const auto V = make_operator("volterra");
  NoiseModel m{SequenceLaw::power(1, 1 / pi, -0.5), SequenceLaw::power(2, 1, -0.5), SequenceLaw::power(1.5, 0.1)};
  EXPECT_LE(noisy_pipeline_check(V, m, 12, 40).max_discrepancy, 1e-10);
  EXPECT_THROW(noisy_pipeline_check(V, noise_preset("noise-example-6.2"), 5), InvalidArgument);
  EXPECT_THROW(noisy_pipeline_check(make_operator("mult-x:1,2"), noise_preset("noise-example-6.2"), 5),
               CapabilityError);
}
