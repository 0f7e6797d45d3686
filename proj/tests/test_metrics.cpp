#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dtstc/codes.hpp"
#include "dtstc/metrics.hpp"
#include "test_support.hpp"

using namespace dtstc;

namespace {

double product_distance(const ComplexMatrix &m, const std::vector<Complex> &s) {
  double p = 1;
  for (auto v : matvec(m, std::span<const Complex>(s))) p *= std::abs(v);
  return p;
}

SearchPolicy small(std::uint64_t samples) { return {samples, 10'000'000, 3, 1}; }

}  // namespace

TEST(ProductDistance, Gamma2ExhaustiveIsOneTwentieth) {
  const auto g = build_generators(golden_field_spec());
  const auto r = min_product_distance(g, unit_differences(BaseField::gaussian), SearchPolicy{});
  EXPECT_EQ(r.search.kind, SearchKind::exhaustive);
  EXPECT_NEAR(r.value, 1.0 / 20, 1e-9);
  EXPECT_NEAR(product_distance(g.m, r.argmin), r.value, 1e-12);
  EXPECT_NEAR(product_distance(g.m, {1.0, 0.0, 0.0, 0.0}), 1.0 / 20, 1e-9);
  EXPECT_GE(r.value, min_product_distance_bound(golden_field_spec()) - 1e-9);
}

TEST(ProductDistance, Gamma3PositiveOnSamples) {
  const auto g = build_generators(perfect3_field_spec());
  const auto r = min_product_distance(g, unit_differences(BaseField::eisenstein), small(20000));
  EXPECT_EQ(r.search.kind, SearchKind::sampled);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GE(r.value, min_product_distance_bound(perfect3_field_spec()) - 1e-12);
}

TEST(ProductDistance, ZeroAlphabetThrows) {
  const std::vector<Complex> zero{Complex{}};
  EXPECT_THROW(min_product_distance(build_generators(golden_field_spec()), zero, SearchPolicy{}),
               std::invalid_argument);
}

TEST(MinDeterminant, Gamma3EisensteinFloor) {
  const auto c = make_code("gamma3");
  const auto r = min_determinant(c, unit_differences(BaseField::eisenstein), small(20000));
  EXPECT_GE(r.value, 1.0 / 49 - 1e-9);
  EXPECT_NEAR(std::norm(det(c.encoder(r.argmin))), r.value, 1e-9);
}

TEST(MinDeterminant, Gamma4GaussianFloor) {
  const auto c = make_code("gamma4");
  const auto r = min_determinant(c, unit_differences(BaseField::gaussian), small(20000));
  EXPECT_GE(r.value, 1.0 / 1125 - 1e-9);
}

TEST(MinDeterminant, ScaleEquivariance) {
  const auto c = make_code("gamma2");
  const auto unit = unit_differences(BaseField::gaussian);
  std::vector<Complex> scaled(unit);
  for (auto &v : scaled) v *= 2.0;
  const auto a = min_determinant(c, unit, SearchPolicy{});
  const auto b = min_determinant(c, scaled, SearchPolicy{});
  EXPECT_NEAR(b.value, 16 * a.value, 1e-9);
}

TEST(MinDeterminant, Gamma2MatchesGolden) {
  const auto diffs = constellation_differences(make_code("golden"), 4);
  const auto g2 = min_determinant(make_code("gamma2"), diffs, SearchPolicy{});
  const auto gd = min_determinant(make_code("golden"), diffs, SearchPolicy{});
  EXPECT_EQ(g2.search.tested, 6560u);
  EXPECT_NEAR(g2.value, gd.value, 1e-9);
  // 4-QAM differences are 2 x Gaussian integers: 2^4 / 5
  EXPECT_NEAR(g2.value, 16.0 / 5, 1e-9);
}

TEST(MinDeterminant, LuMatchesCofactorExpansion) {
  std::mt19937_64 rng(1);
  for (const char *name : {"gamma2", "gamma3", "golden", "perfect3"}) {
    const auto c = make_code(name);
    for (int t = 0; t < 50; ++t) {
      const auto s = dtstc::testing::random_qam(static_cast<std::size_t>(c.k), 4, rng);
      const auto x = c.encoder(s);
      EXPECT_LT(std::abs(det(x) - dtstc::testing::det_cofactor(x)), 1e-10) << name;
    }
  }
}

TEST(MinDeterminant, RequiresNonzeroVector) {
  const std::vector<Complex> zero{Complex{}};
  EXPECT_THROW(min_determinant(make_code("gamma2"), zero, SearchPolicy{}), std::invalid_argument);
}

TEST(NvdSweep, Gamma2AndGoldenShareFloor) {
  const std::vector<int> sizes{4, 16};
  const SearchPolicy policy = small(50000);
  const auto g2 = nvd_sweep(make_code("gamma2"), sizes, policy);
  const auto gd = nvd_sweep(make_code("golden"), sizes, policy);
  ASSERT_EQ(g2.size(), 2u);
  EXPECT_EQ(g2[0].search.kind, SearchKind::exhaustive);
  // 49^4 difference vectors still fit the exhaustive limit
  EXPECT_EQ(g2[1].search.kind, SearchKind::exhaustive);
  EXPECT_NEAR(g2[0].value, g2[1].value, 1e-9);
  EXPECT_NEAR(g2[1].value, gd[1].value, 1e-9);
  EXPECT_TRUE(nvd_observed(g2));
  EXPECT_TRUE(nvd_sweep(make_code("gamma2"), std::span<const int>{}, policy).empty());
  const std::vector<int> descending{16, 4};
  EXPECT_THROW(nvd_sweep(make_code("gamma2"), descending, policy), std::invalid_argument);
}

TEST(Cofactor, Gamma3WeightOneNonzero) {
  // budget 0: exhaustive weight-1 and weight-2 vectors only
  const auto c = make_code("gamma3");
  const auto r = cofactor_nonzero_check(c, unit_differences(BaseField::eisenstein), small(0));
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GT(r.value, 1e-6);
  EXPECT_EQ(r.detail, "cofactor");
  EXPECT_THROW(cofactor_nonzero_check(make_code("gamma2"), unit_differences(BaseField::gaussian), small(0)),
               std::invalid_argument);
}

TEST(Minor2, Gamma4SingleImaginaryMinors) {
  const auto minors = single_imaginary_minors(fourier_phi(4));
  ASSERT_FALSE(minors.empty());
  // |x1 x5; x2 i x6|: rows 0,1 and columns 0,1 of the Fourier mask
  bool found = false;
  for (const auto &m : minors) found = found || (m.r1 == 0 && m.r2 == 1 && m.c1 == 0 && m.c2 == 1);
  EXPECT_TRUE(found);
  const auto r = minor2_check_gamma4(unit_differences(BaseField::gaussian), small(5000));
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GT(r.value, 0.0);
}

TEST(MetricReport, ReportLine) {
  const auto r = min_product_distance(build_generators(golden_field_spec()), unit_differences(BaseField::gaussian),
                                      SearchPolicy{}, "gamma2");
  std::ostringstream os;
  write_report(os, r);
  EXPECT_EQ(os.str().rfind("code=gamma2 metric=min_prod_dist value=", 0), 0u);
  EXPECT_NE(os.str().find(" search=exhaustive(6560) violations=0 argmin=["), std::string::npos);
}
