#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace infdim;
using namespace testing_support;

namespace {

double distance(const Element& a, const Element& b) { return norm(a - b); }

Element poly01(std::initializer_list<Complex> m) { return Function::polynomial(unit_interval, m); }

const char* const all_specs[] = {"volterra",      "right-shift",    "mult-x:1,2",     "mult-x:-1,0.5",
                                 "mult-seq:pow:1", "wshift:pow:1",  "wshift:geom:0.5", "wshift-z:pow:1:1:1"};

}  // namespace

TEST(Operators, VolterraOnConstantAndLinear) {
  const auto V = make_operator("volterra");
  EXPECT_LT(distance(V.apply(poly01({1.0})), poly01({0.0, 1.0})), 1e-15);
  EXPECT_LT(distance(V.apply(poly01({0.0, 1.0})), poly01({0.0, 0.0, 0.5})), 1e-15);
  EXPECT_NEAR(*V.norm(), 2.0 / pi, 1e-16);
  EXPECT_FALSE(V.is_self_adjoint());
}

TEST(Operators, VolterraOnFourierModes) {
  // V e^{2 pi i k x} = (e^{2 pi i k x} - 1) / (2 pi i k)
  const auto V = make_operator("volterra");
  for (long k : {1, -2, 5, 31}) {
    const Function e = Function::fourier_mode(unit_interval, k);
    const Function v = V.apply(e).function();
    for (double x : {0.0, 0.17, 0.5, 0.9}) {
      const Complex ref = (std::polar(1.0, 2 * pi * k * x) - 1.0) / Complex(0.0, 2 * pi * k);
      EXPECT_NEAR(std::abs(v(x) - ref), 0.0, 1e-14);
    }
  }
}

TEST(Operators, ShiftsOnUnitVectors) {
  const auto R = make_operator("right-shift");
  const Element e1 = Sequence::unit(Space::Kind::natural, 1);
  EXPECT_EQ(distance(R.apply(e1), Sequence::unit(Space::Kind::natural, 2)), 0.0);
  EXPECT_EQ(distance(R.apply_adjoint(e1), Element::zero(Space::naturals())), 0.0);
  const auto W = make_operator("wshift:pow:1");
  for (long n : {1, 2, 7}) {
    const Element en = Sequence::unit(Space::Kind::natural, n);
    EXPECT_EQ(distance(W.apply(en), (1.0 / n) * Element(Sequence::unit(Space::Kind::natural, n + 1))), 0.0);
  }
  EXPECT_DOUBLE_EQ(*W.norm(), 1.0);
}

TEST(Operators, MultiplicationByX) {
  const auto M = make_operator("mult-x:1,2");
  EXPECT_DOUBLE_EQ(*M.norm(), 2.0);
  EXPECT_TRUE(M.is_self_adjoint());
  EXPECT_TRUE(M.is_positive_semidefinite());
  const Interval iv{1, 2};
  EXPECT_LT(distance(M.apply(Function::polynomial(iv, {0.0, 1.0})), Function::polynomial(iv, {0.0, 0.0, 1.0})), 1e-14);
  EXPECT_FALSE(make_operator("mult-x:-1,0.5").is_positive_semidefinite());
}

TEST(Operators, ConstructionErrors) {
  EXPECT_THROW(make_operator("wshift:const:1"), InvalidArgument);
  EXPECT_THROW(make_operator("wshift:pow:-1"), InvalidArgument);
  EXPECT_THROW(make_operator("wshift-z:geom:1.5"), InvalidArgument);
  EXPECT_THROW(make_operator("mult-seq:pow:-1"), InvalidArgument);
  EXPECT_THROW(make_operator("mult-x:2,1"), InvalidArgument);
  EXPECT_THROW(make_operator("mult-x:1,1"), InvalidArgument);
  EXPECT_THROW(make_operator("laplace"), InvalidArgument);
  EXPECT_THROW(make_operator("volterra:3"), InvalidArgument);
}

TEST(Operators, SpecRoundTrip) {
  for (const char* s : all_specs) EXPECT_EQ(OperatorSpec::parse(s).to_string(), s);
}

TEST(Operators, RepresentationMismatch) {
  const auto V = make_operator("volterra");
  EXPECT_THROW(V.apply(Sequence::unit(Space::Kind::natural, 1)), SpaceMismatch);
  EXPECT_THROW(make_operator("mult-x:1,2").apply(poly01({1.0})), SpaceMismatch);
  EXPECT_THROW(make_operator("wshift-z:pow:1:1:1").apply(Sequence::unit(Space::Kind::natural, 1)), SpaceMismatch);
}

TEST(Operators, VolterraPowers) {
  EXPECT_LT(distance(volterra_power_apply(1, poly01({1.0})), poly01({0.0, 1.0})), 1e-12);
  EXPECT_LT(distance(volterra_power_apply(2, poly01({1.0})), poly01({0.0, 0.0, 0.5})), 1e-12);
  EXPECT_LT(distance(volterra_power_apply(3, poly01({1.0})), poly01({0.0, 0.0, 0.0, 1.0 / 6})), 1e-12);
  EXPECT_THROW(volterra_power_apply(0, poly01({1.0})), InvalidArgument);
}

TEST(Operators, VolterraPowersMatchRepeatedApplication) {
  const auto V = make_operator("volterra");
  for (int t = 0; t < 6; ++t) {
    const Element f = random_function(unit_interval, 5);
    Element g = f;
    for (int n = 1; n <= 5; ++n) {
      g = V.apply(g);
      EXPECT_LT(distance(volterra_power_apply(n, f), g), 1e-10) << n;
    }
  }
}

TEST(Operators, VolterraSvd) {
  const auto s = exact_svd(make_operator("volterra"));
  EXPECT_NEAR(s.sigma(1), 2.0 / pi, 1e-16);
  const Function phi = s.right(1).function(), psi = s.left(1).function();
  for (double x : {0.0, 0.3, 0.8, 1.0}) {
    EXPECT_NEAR(std::abs(phi(x) - std::sqrt(2.0) * std::cos(pi * x / 2)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(psi(x) - std::sqrt(2.0) * std::sin(pi * x / 2)), 0.0, 1e-14);
  }
  const auto V = make_operator("volterra");
  for (long n = 1; n <= 50; ++n) {
    EXPECT_NEAR(s.sigma(n), 2.0 / ((2 * n - 1) * pi), 1e-16);
    // pointwise: a norm of a difference only resolves sqrt(eps) here
    const Function lhs = V.apply(s.right(n)).function(), rhs = (s.sigma(n) * s.left(n)).function();
    double sup = 0;
    for (int k = 0; k <= 400; ++k) sup = std::max(sup, std::abs(lhs(k / 400.0) - rhs(k / 400.0)));
    EXPECT_LT(sup, 1e-13) << n;
    if (n > 1) {
      EXPECT_LT(s.sigma(n), s.sigma(n - 1));
    }
  }
  for (long m = 1; m <= 30; ++m)
    for (long n = 1; n <= 30; ++n) {
      const double d = m == n ? 1.0 : 0.0;
      EXPECT_NEAR(std::abs(inner(s.right(m), s.right(n)) - d), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(inner(s.left(m), s.left(n)) - d), 0.0, 1e-12);
    }
}

TEST(Operators, WeightedShiftSvd) {
  const auto W = make_operator("wshift:geom:0.5");
  const auto s = exact_svd(W);
  for (long n = 1; n <= 50; ++n) {
    EXPECT_DOUBLE_EQ(s.sigma(n), std::pow(0.5, n));
    EXPECT_EQ(distance(s.right(n), Sequence::unit(Space::Kind::natural, n)), 0.0);
    EXPECT_EQ(distance(s.left(n), Sequence::unit(Space::Kind::natural, n + 1)), 0.0);
    EXPECT_LT(distance(W.apply(s.right(n)), s.sigma(n) * s.left(n)), 1e-15);
  }
  const auto Z = make_operator("wshift-z:pow:1:1:1");
  const auto sz = exact_svd(Z);
  EXPECT_FALSE(sz.strictly_decreasing);
  for (long n = 1; n <= 50; ++n) {
    EXPECT_LT(distance(Z.apply(sz.right(n)), sz.sigma(n) * sz.left(n)), 1e-15);
    if (n > 1) {
      EXPECT_LE(sz.sigma(n), sz.sigma(n - 1));
    }
  }
}

TEST(Operators, NoSvdForShiftOrMultiplication) {
  EXPECT_THROW(exact_svd(make_operator("right-shift")), CapabilityError);
  EXPECT_THROW(exact_svd(make_operator("mult-x:1,2")), CapabilityError);
  EXPECT_THROW(exact_svd(make_operator("mult-seq:pow:1")), CapabilityError);
}

TEST(Operators, VolterraPlusAdjointIsRankOneProjection) {
  const auto V = make_operator("volterra");
  const Element one = poly01({1.0});
  for (int t = 0; t < 20; ++t) {
    const Element f = random_function(unit_interval, 8);
    const Element lhs = V.apply(f) + V.apply_adjoint(f);
    EXPECT_LT(distance(lhs, inner(one, f) * one), 1e-12);
  }
}

TEST(Operators, AdjointConsistency) {
  for (const char* spec : all_specs) {
    const auto A = make_operator(spec);
    for (int t = 0; t < 100; ++t) {
      const Element u = random_element(A.space()), v = random_element(A.space());
      const Complex lhs = inner(v, A.apply(u)), rhs = inner(A.apply_adjoint(v), u);
      EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10 * (1 + std::abs(lhs))) << spec;
    }
  }
}

TEST(Operators, ReportedNormBoundsRandomRatios) {
  for (const char* spec : all_specs) {
    const auto A = make_operator(spec);
    ASSERT_TRUE(A.norm().has_value());
    for (int t = 0; t < 100; ++t) {
      const Element u = unit(random_element(A.space()));
      EXPECT_LE(norm(A.apply(u)), *A.norm() * (1 + 1e-12)) << spec;
    }
  }
}

TEST(Operators, RightShiftIsIsometry) {
  const auto R = make_operator("right-shift");
  for (int t = 0; t < 50; ++t) {
    const Element f = random_sequence(Space::Kind::natural, 1 + t);
    EXPECT_NEAR(norm(R.apply(f)), norm(f), 1e-14 * norm(f));
    EXPECT_LT(distance(R.apply_adjoint(R.apply(f)), f), 1e-15);
  }
}

TEST(Operators, WeightedShiftOnIntegers) {
  const SequenceLaw sigma = SequenceLaw::parse("pow:1:1:1");
  const auto R = make_operator("wshift-z:pow:1:1:1");
  bool literal_rl_fails = false;
  for (int t = 0; t < 20; ++t) {
    const Sequence f = random_sequence(Space::Kind::integer, 9 + t);
    Sequence m(Space::Kind::integer), shifted(Space::Kind::integer);
    for (long n = f.first_index(); n <= f.last_index(); ++n) {
      m.set(n, std::pow(sigma(std::abs(n)), 2) * f.at(n));
      shifted.set(n, std::pow(sigma(std::abs(n - 1)), 2) * f.at(n));
    }
    EXPECT_LT(distance(R.apply_adjoint(R.apply(f)), m), 1e-14);        // L R = M(sigma^2)
    EXPECT_LT(distance(R.apply(R.apply_adjoint(f)), shifted), 1e-14);  // R L multiplies by sigma_{|n-1|}^2
    literal_rl_fails = literal_rl_fails || distance(R.apply(R.apply_adjoint(f)), m) > 1e-3;
  }
  EXPECT_TRUE(literal_rl_fails);
}

TEST(Operators, WeightedShiftOnNaturals) {
  const SequenceLaw sigma = SequenceLaw::power(1.0);
  const auto R = make_operator("wshift:pow:1");
  for (int t = 0; t < 20; ++t) {
    const Sequence f = random_sequence(Space::Kind::natural, 5 + t);
    Sequence m(Space::Kind::natural), shifted(Space::Kind::natural);
    for (long n = 1; n <= f.last_index(); ++n) {
      m.set(n, std::pow(sigma(n), 2) * f.at(n));
      shifted.set(n, n == 1 ? Complex{} : std::pow(sigma(n - 1), 2) * f.at(n));
    }
    EXPECT_LT(distance(R.apply_adjoint(R.apply(f)), m), 1e-14);
    EXPECT_LT(distance(R.apply(R.apply_adjoint(f)), shifted), 1e-14);
  }
}

TEST(Operators, VolterraLegendreCompressionSingularValues) {
  const auto V = make_operator("volterra");
  const long N = 100;
  std::vector<Element> u;
  for (long n = 0; n < N; ++n) u.push_back(Function::legendre_polynomial(unit_interval, static_cast<int>(n)));
  DenseMatrix A(N, N);
  for (long j = 0; j < N; ++j) {
    const Element Au = V.apply(u[static_cast<std::size_t>(j)]);
    for (long i = 0; i < N; ++i) A(i, j) = inner(u[static_cast<std::size_t>(i)], Au);
  }
  const auto s = singular_values(A);
  for (int n = 0; n <= 5; ++n) EXPECT_NEAR(s[static_cast<std::size_t>(n)], 2.0 / ((2 * n + 1) * pi), 1e-3);
}
