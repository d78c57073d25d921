#include <gtest/gtest.h>

#include <cmath>

#include "trimlab/error.hpp"
#include "trimlab/schedules.hpp"

namespace trimlab {
namespace {

TEST(Schedule, LogPower) {
  const auto n = static_cast<std::int64_t>(std::llround(std::exp(10.0)));
  const auto t = TrimmingSchedule::log_power(3.0).evaluate(n);
  EXPECT_EQ(t.k, (n + 999) / 1000);
  EXPECT_EQ(t.m, t.k);
  EXPECT_DOUBLE_EQ(t.a, static_cast<double>(t.k) / n);
}

TEST(Schedule, FixedFraction) {
  const auto t = TrimmingSchedule::fixed_fraction(0.25, 0.25).evaluate(100);
  EXPECT_EQ(t.n, 100);
  EXPECT_EQ(t.k, 25);
  EXPECT_EQ(t.m, 25);
  EXPECT_EQ(t.a, 0.25);
  EXPECT_EQ(t.b, 0.25);
  EXPECT_EQ(TrimmingSchedule::fixed_fraction(0.1, 0.0).evaluate(25).k, 3);
}

TEST(Schedule, PowerLaw) {
  const auto t = TrimmingSchedule::power_law(0.4).evaluate(100000);
  EXPECT_EQ(t.k, 100);
  EXPECT_DOUBLE_EQ(t.a, 1e-3);
  const auto u = TrimmingSchedule::power_law(0.5, 0.25).evaluate(10000);
  EXPECT_EQ(u.k, 100);
  EXPECT_EQ(u.m, 10);
}

TEST(Schedule, ExplicitTable) {
  const TrimmingSchedule s(Explicit{{{10, {1, 2}}, {20, {3, 0}}}});
  EXPECT_EQ(s.evaluate(10).m, 2);
  EXPECT_EQ(s.evaluate(20).k, 3);
  EXPECT_THROW(s.evaluate(15), ScheduleError);
  EXPECT_THROW(TrimmingSchedule(Explicit{{{10, {5, 5}}}}).evaluate(10), ScheduleError);
}

TEST(Schedule, ViolatedConstraintIsAnError) {
  EXPECT_THROW(TrimmingSchedule::fixed_fraction(0.6, 0.5).evaluate(100), ScheduleError);
  EXPECT_THROW(TrimmingSchedule::fixed_fraction(0.5, 0.5).evaluate(100), ScheduleError);
  EXPECT_THROW(TrimmingSchedule::fixed_fraction(-0.1, 0.5), ScheduleError);
  EXPECT_THROW(TrimmingSchedule::power_law(1.2), ScheduleError);
  EXPECT_THROW(TrimmingSchedule::log_power(-1.0), ScheduleError);
  EXPECT_THROW(TrimmingSchedule::untrimmed().evaluate(0), ScheduleError);
}

TEST(Schedule, CheckTrim) {
  EXPECT_NO_THROW(check_trim(5, 0, 4));
  EXPECT_THROW(check_trim(5, 1, 4), InvalidTrimError);
  EXPECT_THROW(check_trim(5, 0, -1), InvalidTrimError);
}

TEST(Schedule, CanonicalFormsDiffer) {
  EXPECT_NE(TrimmingSchedule::power_law(0.4).canonical(), TrimmingSchedule::power_law(0.5).canonical());
  EXPECT_NE(TrimmingSchedule::log_power(3).canonical(), TrimmingSchedule::power_law(3.0 / 10).canonical());
  EXPECT_EQ(TrimmingSchedule::log_power(3).name(), "log_power");
}

}  // namespace
}  // namespace trimlab
