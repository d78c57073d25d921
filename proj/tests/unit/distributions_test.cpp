#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "trimlab/distributions.hpp"
#include "trimlab/error.hpp"
#include "trimlab/montecarlo.hpp"

namespace trimlab {
namespace {

std::vector<DistributionSpec> continuous_specs() {
  return {DistributionSpec::uniform(0.0, 1.0), DistributionSpec::uniform(-2.0, 3.0),
          DistributionSpec::exponential(1.0),  DistributionSpec::exponential(2.5),
          DistributionSpec::normal(0.0, 1.0),  DistributionSpec::normal(1.5, 0.5),
          DistributionSpec::pareto(3.0, 1.0),  DistributionSpec::pareto(1.5, 2.0, -1.0),
          DistributionSpec::student_t(3.0),    DistributionSpec::student_t(0.7),
          DistributionSpec::cauchy(0.0, 1.0),  DistributionSpec::cauchy(2.0, 0.5)};
}

TEST(DistributionCdf, Examples) {
  EXPECT_EQ(DistributionSpec::normal(0, 1).cdf(0.0), 0.5);
  EXPECT_DOUBLE_EQ(DistributionSpec::uniform(0, 1).cdf(0.3), 0.3);
  EXPECT_DOUBLE_EQ(DistributionSpec::pareto(3, 1).cdf(2.0), 0.875);
  EXPECT_EQ(DistributionSpec::uniform(0, 1).cdf(-1.0), 0.0);
  EXPECT_EQ(DistributionSpec::uniform(0, 1).cdf(2.0), 1.0);
  EXPECT_EQ(DistributionSpec::pareto(3, 1).cdf(0.5), 0.0);
  EXPECT_DOUBLE_EQ(DistributionSpec::cauchy(0, 1).cdf(1.0), 0.75);
  EXPECT_NEAR(DistributionSpec::student_t(1.0).cdf(1.0), 0.75, 1e-14);
  EXPECT_THROW(DistributionSpec::normal(0, 1).cdf(std::nan("")), DomainError);
}

TEST(DistributionQuantile, Examples) {
  EXPECT_DOUBLE_EQ(DistributionSpec::uniform(0, 1).quantile(0.3), 0.3);
  EXPECT_DOUBLE_EQ(DistributionSpec::pareto(3, 1).quantile(0.875), 2.0);
  EXPECT_EQ(DistributionSpec::two_point(0, 1, 0.5).quantile(0.5), 0.0);
  EXPECT_EQ(DistributionSpec::two_point(0, 1, 0.5).quantile(0.5000001), 1.0);
  EXPECT_EQ(DistributionSpec::two_point(0, 1, 0.5).quantile(0.0), 0.0);
  EXPECT_EQ(DistributionSpec::two_point(0, 1, 0.5).quantile(1.0), 1.0);
}

TEST(DistributionQuantile, EndpointConventions) {
  EXPECT_EQ(DistributionSpec::uniform(0, 1).quantile(0.0), 0.0);
  EXPECT_EQ(DistributionSpec::uniform(0, 1).quantile(1.0), 1.0);
  EXPECT_EQ(DistributionSpec::exponential(1).quantile(0.0), 0.0);
  EXPECT_EQ(DistributionSpec::pareto(3, 2).quantile(0.0), 2.0);
  EXPECT_EQ(DistributionSpec::normal(0, 1).quantile(0.0), -INFINITY);
  EXPECT_THROW(DistributionSpec::normal(0, 1).quantile(1.0), UnboundedQuantileError);
  EXPECT_THROW(DistributionSpec::exponential(1).quantile(1.0), UnboundedQuantileError);
  EXPECT_THROW(DistributionSpec::normal(0, 1).quantile(-0.1), DomainError);
  EXPECT_THROW(DistributionSpec::normal(0, 1).quantile(1.1), DomainError);
}

TEST(DistributionQuantile, GaloisInequalities) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(1e-9, 1.0 - 1e-9);
  for (const auto& spec : continuous_specs()) {
    for (int i = 0; i < 1000; ++i) {
      const double u = unit(rng);
      const double x = spec.quantile(u);
      EXPECT_GE(spec.cdf(x), u * (1 - 1e-12) - 1e-12) << spec.canonical() << " u=" << u;
      const double y = spec.quantile(unit(rng));
      const double fy = std::min(spec.cdf(y) + 1e-12, 1.0 - 1e-16);
      EXPECT_GE(spec.quantile(fy), y - 1e-9 * (1 + std::fabs(y))) << spec.canonical() << " y=" << y;
    }
  }
}

TEST(DistributionQuantile, MixtureGaloisAtAtoms) {
  const auto mix = DistributionSpec::two_point(-1.0, 2.0, 0.3);
  for (double u : {0.01, 0.29, 0.3, 0.31, 0.99}) EXPECT_GE(mix.cdf(mix.quantile(u)), u);
  EXPECT_EQ(mix.cdf(-1.0), 0.3);
  EXPECT_EQ(mix.cdf(-1.5), 0.0);
  EXPECT_EQ(mix.cdf(2.0), 1.0);
}

TEST(DistributionMoments, Examples) {
  EXPECT_DOUBLE_EQ(DistributionSpec::pareto(3, 1).abs_moment(1), 1.5);
  EXPECT_EQ(DistributionSpec::cauchy(0, 1).abs_moment(1), INFINITY);
  EXPECT_NEAR(DistributionSpec::uniform(0, 1).abs_moment(2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(DistributionSpec::exponential(2).abs_moment(2), 0.5, 1e-15);
  EXPECT_NEAR(DistributionSpec::normal(0, 1).abs_moment(2), 1.0, 1e-14);
  EXPECT_NEAR(DistributionSpec::normal(0, 1).abs_moment(1), std::sqrt(2 / M_PI), 1e-14);
  EXPECT_NEAR(DistributionSpec::student_t(5).abs_moment(2), 5.0 / 3.0, 1e-12);
  EXPECT_EQ(DistributionSpec::student_t(3).abs_moment(3), INFINITY);
  EXPECT_EQ(DistributionSpec::pareto(3, 1).abs_moment(3), INFINITY);
  EXPECT_THROW(DistributionSpec::normal(0, 1).abs_moment(0), DomainError);
}

TEST(DistributionMoments, ClosedFormsMatchQuadrature) {
  for (const auto& spec : continuous_specs()) {
    for (double p : {0.5, 1.0, 2.0}) {
      const double closed = spec.abs_moment(p);
      if (!std::isfinite(closed)) continue;
      EXPECT_NEAR(spec.abs_moment_quadrature(p), closed, 1e-7 * closed) << spec.canonical() << " p=" << p;
    }
  }
}

TEST(DistributionMoments, MeanAndVariance) {
  EXPECT_DOUBLE_EQ(DistributionSpec::pareto(5, 1).mean(), 1.25);
  EXPECT_NEAR(DistributionSpec::pareto(5, 1).variance(), 5.0 / 48.0, 1e-14);
  EXPECT_DOUBLE_EQ(DistributionSpec::pareto(5, 1, -1.25).mean(), 0.0);
  EXPECT_THROW(DistributionSpec::cauchy(0, 1).mean(), MomentError);
  EXPECT_THROW(DistributionSpec::pareto(1.5, 1).variance(), MomentError);
}

TEST(DistributionSpec, RejectsInvalidParameters) {
  EXPECT_THROW(DistributionSpec::uniform(1, 1), DomainError);
  EXPECT_THROW(DistributionSpec::normal(0, 0), DomainError);
  EXPECT_THROW(DistributionSpec::normal(NAN, 1), DomainError);
  EXPECT_THROW(DistributionSpec::exponential(-1), DomainError);
  EXPECT_THROW(DistributionSpec::pareto(0, 1), DomainError);
  EXPECT_THROW(DistributionSpec::student_t(0), DomainError);
  EXPECT_THROW(DistributionSpec::cauchy(0, -1), DomainError);
  EXPECT_THROW(DistributionSpec::two_point(1, 0, 0.5), DomainError);
}

TEST(DistributionSpec, Properties) {
  EXPECT_TRUE(DistributionSpec::uniform(0, 1).bounded_above());
  EXPECT_FALSE(DistributionSpec::pareto(3, 1).bounded_above());
  EXPECT_TRUE(DistributionSpec::pareto(3, 1).bounded_below());
  EXPECT_FALSE(DistributionSpec::two_point(0, 1, 0.5).is_continuous());
  EXPECT_EQ(DistributionSpec::normal(2, 1).symmetry_center(), 2.0);
  EXPECT_EQ(DistributionSpec::uniform(0, 1).symmetry_center(), 0.5);
  EXPECT_FALSE(DistributionSpec::exponential(1).symmetry_center().has_value());
  EXPECT_EQ(DistributionSpec::normal(0, 1).canonical(), DistributionSpec::normal(0, 1).canonical());
  EXPECT_NE(DistributionSpec::normal(0, 1).canonical(), DistributionSpec::normal(0, 2).canonical());
}

TEST(DistributionSample, DeterministicForFixedSeed) {
  for (const auto& spec : continuous_specs()) EXPECT_EQ(spec.sample(17, 5), spec.sample(17, 5)) << spec.canonical();
  EXPECT_NE(DistributionSpec::normal(0, 1).sample(17, 5), DistributionSpec::normal(0, 1).sample(18, 5));
  EXPECT_THROW(DistributionSpec::normal(0, 1).sample(1, 0), EmptySampleError);
}

TEST(DistributionSample, IsInverseTransformOfTheSubstream) {
  for (const auto& spec : continuous_specs()) {
    const auto x = spec.sample(3, 301);
    const Substream s(3, SeedDomain::Experiment, 0);
    for (std::size_t i = 0; i < x.size(); ++i) ASSERT_EQ(x[i], spec.quantile(s.uniform(i))) << spec.canonical();
  }
}

TEST(DistributionSample, UniformMean) {
  const auto x = DistributionSpec::uniform(0, 1).sample(1, 100000);
  double s = 0;
  for (double v : x) s += v;
  EXPECT_NEAR(s / x.size(), 0.5, 0.01);
}

TEST(DistributionSample, NormalKolmogorovDistance) {
  const auto x = DistributionSpec::normal(0, 1).sample(1, 100000);
  EXPECT_LT(ks_distance_to_normal(x), 0.01);
}

TEST(DistributionSample, MixtureFrequencies) {
  const auto x = DistributionSpec::two_point(0, 1, 0.3).sample(5, 100000);
  double ones = 0;
  for (double v : x) ones += v;
  EXPECT_NEAR(ones / x.size(), 0.7, 0.006);
}

}  // namespace
}  // namespace trimlab
