#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "dtstc/codes.hpp"
#include "dtstc/delay.hpp"
#include "dtstc/metrics.hpp"

using namespace dtstc;

TEST(DelayProfile, ParseAndDescribe) {
  const auto d = parse_delay_profile("1,0");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.d_max(), 1);
  EXPECT_EQ(d.describe(), "(1,0)");
  EXPECT_THROW(parse_delay_profile("1,1"), std::invalid_argument);
  EXPECT_THROW(parse_delay_profile("1,,0"), std::invalid_argument);
  EXPECT_THROW(parse_delay_profile("a,0"), std::invalid_argument);
  EXPECT_THROW(parse_delay_profile("-1,0"), std::invalid_argument);
  EXPECT_EQ(DelayProfile::synchronous(3).d_max(), 0);
}

TEST(ApplyDelay, ShiftsRowsAndPads) {
  const ComplexMatrix x{{1.0, 2.0}, {3.0, 4.0}};
  const auto y = apply_delay(x, DelayProfile({1, 0})).matrix;
  const ComplexMatrix expect{{0.0, 1.0, 2.0}, {3.0, 4.0, 0.0}};
  EXPECT_EQ(y, expect);
  EXPECT_EQ(apply_delay(x, DelayProfile::synchronous(2)).matrix, x);
  EXPECT_THROW(apply_delay(x, DelayProfile({0, 1, 2})), std::invalid_argument);
}

TEST(Profiles, EnumerationCounts) {
  // M-tuples over {0..d} containing a zero: (d+1)^M - d^M
  EXPECT_EQ(enumerate_profiles(2, 1).size(), 3u);
  EXPECT_EQ(enumerate_profiles(3, 2).size(), 19u);
  const auto p4 = enumerate_profiles(4, 3);
  EXPECT_EQ(p4.size(), 175u);
  EXPECT_TRUE(std::is_sorted(p4.begin(), p4.end()));
  std::map<ProfileType, int> seen;
  for (const auto &p : p4) ++seen[classify_profile(p)];
  for (auto t : {ProfileType::sync, ProfileType::type1, ProfileType::type2, ProfileType::type3I,
                 ProfileType::type3II, ProfileType::type4})
    EXPECT_GT(seen[t], 0) << to_string(t);
  EXPECT_EQ(seen[ProfileType::unclassified], 0);
}

TEST(Profiles, Classification) {
  EXPECT_EQ(classify_profile(DelayProfile({0, 1, 2, 3})), ProfileType::type1);
  EXPECT_EQ(classify_profile(DelayProfile({0, 0, 1, 2})), ProfileType::type2);
  EXPECT_EQ(classify_profile(DelayProfile({0, 0, 2, 2})), ProfileType::type3I);
  EXPECT_EQ(classify_profile(DelayProfile({0, 1, 0, 1})), ProfileType::type3II);
  EXPECT_EQ(classify_profile(DelayProfile({0, 0, 0, 3})), ProfileType::type4);
  EXPECT_EQ(classify_profile(DelayProfile({0, 0, 0, 0})), ProfileType::sync);
  EXPECT_EQ(classify_profile(DelayProfile({1, 0})), ProfileType::unclassified);
}

TEST(Certify, Gamma2PassesGoldenFails) {
  SearchPolicy policy;
  const auto g2 = make_code("gamma2");
  const auto diffs = constellation_differences(g2, 4);
  const auto ok = certify_delay_tolerance(g2, diffs, 1, policy);
  EXPECT_EQ(ok.search.kind, SearchKind::exhaustive);
  EXPECT_EQ(ok.search.tested, 6560u);
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.profiles.size(), 3u);

  const auto golden = make_code("golden");
  const std::vector<DelayProfile> d10{DelayProfile({1, 0})};
  const auto bad = certify_delay_tolerance(golden, diffs, d10, policy);
  EXPECT_FALSE(bad.passed());
  // rank 1 whenever s3 = s4 = 0: 9^2 - 1 vectors
  EXPECT_EQ(bad.total_violations(), 80u);
  ASSERT_FALSE(bad.profiles[0].examples.empty());
  const auto &ex = bad.profiles[0].examples.front();
  EXPECT_EQ(ex[2], Complex{});
  EXPECT_EQ(ex[3], Complex{});
  EXPECT_EQ(numerical_rank(apply_delay(golden.encoder(ex), d10[0]).matrix), 1u);
  EXPECT_EQ(bad.profiles[0].min_ratio, 0.0);
}

TEST(Certify, RejectsMismatchedProfile) {
  const auto g2 = make_code("gamma2");
  const auto diffs = constellation_differences(g2, 4);
  const std::vector<DelayProfile> bad{DelayProfile({0, 1, 2})};
  EXPECT_THROW(certify_delay_tolerance(g2, diffs, bad, SearchPolicy{}), std::invalid_argument);
}

TEST(Certify, ThreadCountDoesNotChangeReport) {
  const auto c = make_code("gamma3");
  const auto diffs = constellation_differences(c, 4);
  SearchPolicy p1{2000, 10'000'000, 5, 1}, p3{2000, 10'000'000, 5, 3};
  std::ostringstream a, b;
  write_report(a, certify_delay_tolerance(c, diffs, 1, p1));
  write_report(b, certify_delay_tolerance(c, diffs, 1, p3));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Certify, ReportFormat) {
  const auto g2 = make_code("gamma2");
  const auto diffs = constellation_differences(g2, 4);
  std::ostringstream os;
  write_report(os, certify_delay_tolerance(g2, diffs, 1, SearchPolicy{}));
  const auto text = os.str();
  EXPECT_NE(text.find("code=gamma2 profile=(0,0) type=sync search=exhaustive(6560)"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
