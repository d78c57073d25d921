#include <gtest/gtest.h>

#include <cmath>

#include "trimlab/conditions.hpp"
#include "trimlab/error.hpp"
#include "trimlab/functionals.hpp"

namespace trimlab {
namespace {

const auto kGrid = default_n_grid();

Verdict part(const ConditionReport& r, const std::string& name) {
  for (const auto& p : r.parts)
    if (p.condition == name) return p.verdict;
  ADD_FAILURE() << "no part " << name;
  return Verdict::Inconclusive;
}

TEST(Intermediate, LogPowerFourAtTen) {
  const auto r = check_intermediate(TrimmingSchedule::log_power(4.0), 10.0, kGrid);
  EXPECT_EQ(r.verdict, Verdict::Consistent) << r.note;
  EXPECT_EQ(part(r, "c_kn"), Verdict::Consistent);
  EXPECT_EQ(part(r, "c_an"), Verdict::Consistent);
  for (const auto& p : r.parts) {
    if (p.condition != "c_an") continue;
    EXPECT_NEAR(p.exponent, 4.0, 0.3);
    EXPECT_NEAR(p.threshold, 2.5, 1e-12);
  }
}

TEST(Intermediate, FixedFractionIsInconsistent) {
  const auto r = check_intermediate(TrimmingSchedule::fixed_fraction(0.25, 0.25), 10.0, kGrid);
  EXPECT_EQ(r.verdict, Verdict::Inconsistent);
  EXPECT_EQ(part(r, "c_an"), Verdict::Inconsistent);
}

TEST(Intermediate, PowerLawDecaysFasterThanLogPowers) {
  for (double p : {2.5, 4.0, 10.0, 100.0}) {
    const auto r = check_intermediate(TrimmingSchedule::power_law(0.5), p, kGrid);
    EXPECT_EQ(part(r, "c_an"), Verdict::Consistent) << p;
  }
}

TEST(Intermediate, WeakLogPowerFailsTheThreshold) {
  const auto r = check_intermediate(TrimmingSchedule::log_power(1.5), 10.0, kGrid);
  EXPECT_EQ(part(r, "c_an"), Verdict::Inconsistent);
}

TEST(Intermediate, NoTrimmingOnOneSideViolatesCkn) {
  const auto r = check_intermediate(TrimmingSchedule::power_law(0.4, 0.0), 10.0, kGrid);
  EXPECT_EQ(part(r, "c_kn"), Verdict::Inconsistent);
}

TEST(Intermediate, Preconditions) {
  EXPECT_THROW(check_intermediate(TrimmingSchedule::log_power(4.0), 2.0, kGrid), DomainError);
  EXPECT_THROW(check_intermediate(TrimmingSchedule::log_power(4.0), 10.0, {1000, 100}), DomainError);
}

TEST(Intermediate, ShortGridIsInconclusive) {
  const auto r = check_intermediate(TrimmingSchedule::log_power(4.0), 10.0, {1000, 2000, 3000});
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
}

TEST(CAn2, PowerLawExamples) {
  EXPECT_EQ(check_c_an2(TrimmingSchedule::power_law(0.4), 10.0, kGrid).verdict, Verdict::Consistent);
  EXPECT_EQ(check_c_an2(TrimmingSchedule::power_law(0.5), 2.5, kGrid).verdict, Verdict::Inconsistent);
}

TEST(CAn2, LogPowerAlwaysFails) {
  for (double g : {1.0, 3.0, 8.0})
    for (double p : {2.5, 10.0, 1000.0})
      EXPECT_EQ(check_c_an2(TrimmingSchedule::log_power(g), p, kGrid).verdict, Verdict::Inconsistent) << g << " " << p;
}

TEST(CAn2, ReportsTheRequiredRate) {
  const auto r = check_c_an2(TrimmingSchedule::power_law(0.4), 10.0, kGrid);
  EXPECT_NEAR(r.threshold, 10.0 / 18.0, 1e-12);
  EXPECT_NEAR(r.exponent, 0.6, 0.02);
  EXPECT_EQ(r.rows.size(), kGrid.size());
}

TEST(Heavy, Examples) {
  const auto r = check_heavy(TrimmingSchedule::fixed_fraction(0.25, 0.25), kGrid);
  EXPECT_EQ(r.verdict, Verdict::Consistent) << r.note;
  EXPECT_EQ(check_heavy(TrimmingSchedule::log_power(3.0), kGrid).verdict, Verdict::Inconsistent);
  EXPECT_EQ(check_heavy(TrimmingSchedule::power_law(0.4), kGrid).verdict, Verdict::Inconsistent);
  EXPECT_EQ(check_heavy(TrimmingSchedule::fixed_fraction(0.25, 0.0), kGrid).verdict, Verdict::Inconsistent);
}

TEST(SmoothnessGH, Examples) {
  const auto uni = DistributionSpec::uniform(0, 1);
  const auto s = TrimmingSchedule::fixed_fraction(0.25, 0.25);
  const std::int64_t n = 10000;
  const auto gh = smoothness_GH(uni, s, 1.5, n);
  EXPECT_NEAR(gh.g, 1.5 * std::sqrt(0.25 * std::log(double(n)) / n), 1e-15);
  EXPECT_NEAR(gh.h, gh.g, 1e-15);
  const auto zero = smoothness_GH(DistributionSpec::cauchy(0, 1), s, 0.0, n);
  EXPECT_EQ(zero.g, 0.0);
  EXPECT_EQ(zero.h, 0.0);
  const auto c = smoothness_GH(DistributionSpec::cauchy(0, 1), s, 1.0, n);
  EXPECT_TRUE(std::isfinite(c.g));
  EXPECT_GT(c.g, 0.0);
  EXPECT_THROW(smoothness_GH(uni, s, 1e6, 100), RangeError);
}

TEST(Cgh, UniformAndCauchyAreConsistent) {
  const auto s = TrimmingSchedule::fixed_fraction(0.25, 0.25);
  EXPECT_EQ(check_cgh(DistributionSpec::uniform(0, 1), s, {-1.0, 0.5, 1.0}, kGrid).verdict, Verdict::Consistent);
  EXPECT_EQ(check_cgh(DistributionSpec::cauchy(0, 1), s, {1.0}, kGrid).verdict, Verdict::Consistent);
  EXPECT_EQ(check_cgh(DistributionSpec::normal(0, 1), TrimmingSchedule::log_power(3.0), {1.0}, kGrid).verdict,
            Verdict::Consistent);
}

TEST(Cgh, QuantileJumpAtTheWindowIsInconsistent) {
  const auto mix = DistributionSpec::two_point(0.0, 1.0, 0.25);
  const auto r = check_cgh(mix, TrimmingSchedule::fixed_fraction(0.25, 0.25), {1.0}, kGrid);
  EXPECT_EQ(r.verdict, Verdict::Inconsistent) << r.note;
}

TEST(Cgh, ZeroShiftIsConsistent) {
  const auto mix = DistributionSpec::two_point(0.0, 1.0, 0.25);
  EXPECT_EQ(check_cgh(mix, TrimmingSchedule::fixed_fraction(0.25, 0.25), {0.0}, kGrid).verdict, Verdict::Consistent);
}

TEST(Psi, Examples) {
  const auto uni = DistributionSpec::uniform(0, 1);
  const auto s = TrimmingSchedule::power_law(0.5);
  const std::int64_t n = 10000;
  EXPECT_EQ(psi_1n(uni, s, 0.0, n), 0.0);
  const auto norm = normalizers(uni, s, n);
  const double a = norm.trim.a;
  EXPECT_NEAR(psi_1n(uni, s, 2.0, n), 2.0 * a / (norm.sigma_w * std::sqrt(double(n))), 1e-15);
  EXPECT_NEAR(psi_2n(uni, s, 2.0, n), psi_1n(uni, s, 2.0, n), 1e-15);
  const double clamp = 0.5 * std::sqrt(a * n);
  EXPECT_EQ(psi_1n(uni, s, clamp + 5.0, n), psi_1n(uni, s, clamp, n));
  EXPECT_EQ(psi_1n(uni, s, -clamp - 5.0, n), psi_1n(uni, s, -clamp, n));
}

TEST(Psi, NormalIsOddAtTheCentre) {
  const auto s = TrimmingSchedule::power_law(0.5);
  const auto norm = DistributionSpec::normal(0, 1);
  EXPECT_LT(psi_1n(norm, s, -1.0, 10000), 0.0);
  EXPECT_GT(psi_1n(norm, s, 1.0, 10000), 0.0);
  EXPECT_NEAR(psi_2n(norm, s, 1.0, 10000), -psi_1n(norm, s, -1.0, 10000), 1e-12);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::Consistent), "consistent");
  EXPECT_EQ(to_string(Verdict::Inconsistent), "inconsistent");
  EXPECT_EQ(to_string(Verdict::Inconclusive), "inconclusive");
}

}  // namespace
}  // namespace trimlab
