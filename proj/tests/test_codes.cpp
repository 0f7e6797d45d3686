#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dtstc/codes.hpp"
#include "test_support.hpp"

using namespace dtstc;
using dtstc::testing::random_qam;

namespace {

std::vector<Complex> random_eisenstein(std::size_t n, std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> pick(-3, 3);
  std::vector<Complex> s(n);
  for (auto &v : s) v = static_cast<double>(pick(rng)) + kJ * static_cast<double>(pick(rng));
  return s;
}

}  // namespace

TEST(Registry, ThirteenCodes) {
  EXPECT_EQ(code_names().size(), 13u);
  for (const auto &name : code_names()) {
    const auto c = make_code(name);
    EXPECT_EQ(c.name, name);
    EXPECT_EQ(c.M, c.T);
    EXPECT_EQ(c.k, c.M * c.M);
    const std::vector<Complex> s(static_cast<std::size_t>(c.k), Complex{1, -1});
    const auto x = encode(c, s);
    EXPECT_EQ(x.matrix.rows(), static_cast<std::size_t>(c.M));
    EXPECT_TRUE(x.matrix.all_finite());
    const std::vector<Complex> short_s(static_cast<std::size_t>(c.k - 1));
    EXPECT_THROW(encode(c, short_s), std::invalid_argument);
  }
  EXPECT_THROW(make_code("nope"), std::invalid_argument);
}

TEST(Registry, LinearityMatchesFlag) {
  std::mt19937_64 rng(2);
  for (const auto &name : code_names()) {
    const auto c = make_code(name);
    const auto n = static_cast<std::size_t>(c.k);
    const auto a = random_qam(n, 4, rng), b = random_qam(n, 4, rng);
    std::vector<Complex> sum(n), rot(n);
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] = a[i] + 3.0 * b[i];
      rot[i] = kI * a[i];
    }
    // every code is real-linear
    EXPECT_LT(max_abs_diff(c.encoder(sum), c.encoder(a) + c.encoder(b) * Complex{3.0}), 1e-12) << name;
    const double complex_err = max_abs_diff(c.encoder(rot), c.encoder(a) * kI);
    if (c.complex_linear)
      EXPECT_LT(complex_err, 1e-12) << name;
    else
      EXPECT_GT(complex_err, 1e-3) << name;
  }
}

TEST(Gamma, HadamardStructure) {
  std::mt19937_64 rng(3);
  for (const char *name : {"gamma2", "gamma3", "gamma4", "alt2"}) {
    const auto c = make_code(name);
    ASSERT_TRUE(c.is_gamma_family());
    const auto s = random_qam(static_cast<std::size_t>(c.k), 4, rng);
    const auto x = matvec(c.generator->m, std::span<const Complex>(s));
    const auto cw = encode_gamma(c, s);
    const auto m = static_cast<std::size_t>(c.M);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t col = 0; col < m; ++col) {
        EXPECT_NEAR(std::abs((*c.phi)(r, col)), 1.0, 1e-15);
        EXPECT_LT(std::abs(cw(r, col) - (*c.phi)(r, col) * x[col * m + r]), 1e-12);
      }
  }
  EXPECT_THROW(encode_gamma(make_code("golden"), std::vector<Complex>(4)), std::invalid_argument);
}

TEST(Gamma, UnitEnergyForUnitaryGenerators) {
  std::mt19937_64 rng(4);
  for (const char *name : {"gamma2", "gamma3", "gamma4", "golden", "perfect3", "perfect4"}) {
    const auto c = make_code(name);
    const auto s = random_qam(static_cast<std::size_t>(c.k), 4, rng);
    double e = 0;
    for (auto v : s) e += std::norm(v);
    const double f = frobenius_norm(c.encoder(s));
    EXPECT_NEAR(f * f, e, 1e-10) << name;
  }
}

TEST(Gamma2, DeterminantEqualsGolden) {
  std::mt19937_64 rng(5);
  const auto g = make_code("gamma2");
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = random_qam(4, 4, rng);
    EXPECT_LT(std::abs(det(g.encoder(s)) - det(encode_golden(s))), 1e-9);
  }
}

TEST(Gamma, EqualsUnitaryTransformOfPerfectCode) {
  std::mt19937_64 rng(6);
  for (int m : {2, 3, 4}) {
    const auto c = make_code("gamma" + std::to_string(m));
    const auto u = code_unitary_u(m), v = code_unitary_v(m);
    EXPECT_TRUE(is_unitary(u, 1e-12));
    EXPECT_TRUE(is_unitary(v, 1e-12));
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = m == 3 ? random_eisenstein(9, rng) : random_qam(static_cast<std::size_t>(m * m), 4, rng);
      const auto z = m == 2 ? encode_golden(s) : encode_perfect(m, s);
      EXPECT_LT(max_abs_diff(c.encoder(s), matmul(matmul(u, z), v)), 1e-9) << m;
    }
  }
}

TEST(Golden, LayeredForm) {
  const std::vector<Complex> s{Complex{1, 1}, Complex{-1, 3}, Complex{3, -1}, Complex{1, -3}};
  const double theta = (1 + std::sqrt(5.0)) / 2, theta_bar = (1 - std::sqrt(5.0)) / 2;
  const Complex a = Complex{1, 1} - kI * theta, a_bar = Complex{1, 1} - kI * theta_bar;
  const double n = 1 / std::sqrt(5.0);
  const ComplexMatrix expect{{n * a * (s[0] + s[1] * theta), n * a * (s[2] + s[3] * theta)},
                             {n * kI * a_bar * (s[2] + s[3] * theta_bar), n * a_bar * (s[0] + s[1] * theta_bar)}};
  EXPECT_LT(max_abs_diff(encode_golden(s), expect), 1e-12);
}

TEST(GoldenC, NonzeroDeterminant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_qam(4, 2, rng);
    EXPECT_GT(std::abs(det(encode_golden_c(s))), 1e-6);
  }
}

TEST(Derived, UnitaryTwistsPreserveDeterminantModulus) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_qam(4, 4, rng);
    EXPECT_NEAR(std::abs(det(encode_derived(DerivedBase::silver, s))), std::abs(det(encode_silver(s))), 1e-9);
    EXPECT_NEAR(std::abs(det(encode_derived(DerivedBase::sezginer, s))), std::abs(det(encode_sezginer(s))), 1e-9);
  }
}

TEST(Silver, TwistIsUnitary) { EXPECT_TRUE(is_unitary(silver_w(), 1e-12)); }

TEST(Perfect, RejectsUnsupportedDimension) {
  EXPECT_THROW(encode_perfect(2, std::vector<Complex>(4)), std::invalid_argument);
  EXPECT_THROW(code_unitary_u(5), std::invalid_argument);
}
