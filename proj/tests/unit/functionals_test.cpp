#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "trimlab/error.hpp"
#include "trimlab/functionals.hpp"

namespace trimlab {
namespace {

const auto kUniform = DistributionSpec::uniform(0, 1);
const auto kNormal = DistributionSpec::normal(0, 1);
const auto kExp = DistributionSpec::exponential(1);

std::vector<DistributionSpec> continuous_specs() {
  return {kUniform,
          DistributionSpec::uniform(-1.0, 4.0),
          kExp,
          DistributionSpec::exponential(0.5),
          kNormal,
          DistributionSpec::normal(2.0, 3.0),
          DistributionSpec::pareto(3.0, 1.0),
          DistributionSpec::pareto(0.8, 1.0, 2.0),
          DistributionSpec::student_t(3.0),
          DistributionSpec::cauchy(0.0, 1.0)};
}

TEST(MuFunctional, Examples) {
  EXPECT_NEAR(mu_functional(kUniform, 0.1, 0.1), 0.4, 1e-15);
  EXPECT_NEAR(mu_functional(kExp, 0.0, 0.0), 1.0, 1e-14);
  for (double u : {0.0001, 0.1, 0.3, 0.49}) EXPECT_NEAR(mu_functional(kNormal, u, u), 0.0, 1e-15) << u;
}

TEST(MuFunctional, ClosedFormMatchesQuadrature) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 0.45);
  for (const auto& spec : continuous_specs()) {
    for (int i = 0; i < 20; ++i) {
      const double u = unit(rng), v = unit(rng);
      const double closed = mu_functional(spec, u, v);
      EXPECT_NEAR(mu_functional_quadrature(spec, u, v), closed, 1e-9 * (1 + std::fabs(closed)))
          << spec.canonical() << " " << u << " " << v;
    }
  }
}

TEST(MuFunctional, Errors) {
  EXPECT_THROW(mu_functional(kUniform, 0.6, 0.6), DomainError);
  EXPECT_THROW(mu_functional(kUniform, -0.1, 0.1), DomainError);
  EXPECT_THROW(mu_functional(DistributionSpec::cauchy(0, 1), 0.0, 0.1), MomentError);
  EXPECT_NO_THROW(mu_functional(DistributionSpec::cauchy(0, 1), 0.1, 0.1));
}

TEST(Sigma2Functional, Examples) {
  EXPECT_NEAR(sigma2_functional(kUniform, 0.0, 0.0), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(sigma2_functional(kUniform, 0.25, 0.25), 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(sigma2_functional(kNormal, 0.0, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(sigma2_functional(kExp, 0.0, 0.0), 1.0, 1e-12);
}

TEST(Sigma2Functional, UniformWindowIsAnalyticDoubleIntegral) {
  const double a = 0.25, b = 0.75;
  const double analytic = (b * b * b - a * a * a) / 3 - a * a * (b - a) - std::pow((b * b - a * a) / 2, 2);
  EXPECT_NEAR(analytic, 1.0 / 24.0, 1e-16);
  EXPECT_NEAR(sigma2_functional(kUniform, a, 1 - b), analytic, 1e-15);
}

TEST(Sigma2Functional, StepRouteAgreesWithClosedForm) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.001, 0.45);
  for (const auto& spec : continuous_specs()) {
    for (int i = 0; i < 10; ++i) {
      const double a = unit(rng), b = unit(rng);
      const double closed = sigma2_functional(spec, a, b);
      EXPECT_NEAR(sigma2_step_extrapolated(spec, a, b, 1000), closed, 1e-6 * std::max(1.0, closed))
          << spec.canonical() << " " << a << " " << b;
    }
  }
}

TEST(Sigma2Functional, ShrinksWithTheWindow) {
  double prev = INFINITY;
  for (double half : {0.4, 0.1, 0.01, 1e-3, 1e-5}) {
    const double s = sigma2_functional(kNormal, 0.5 - half, 0.5 - half);
    EXPECT_LT(s, prev);
    prev = s;
  }
  EXPECT_LT(prev, 1e-8);
}

TEST(Sigma2Functional, MixtureUsesHalfOpenConvention) {
  const auto mix = DistributionSpec::two_point(0.0, 1.0, 0.5);
  EXPECT_NEAR(sigma2_functional(mix, 0.0, 0.0), 0.25, 1e-15);
  // The jump of F^{-1} sits at 1/2: counted on [1/2, 1), not on [0, 1/2).
  EXPECT_NEAR(sigma2_functional(mix, 0.5, 0.0), 0.25, 1e-15);
  EXPECT_EQ(sigma2_functional(mix, 0.0, 0.5), 0.0);
  EXPECT_NEAR(sigma2_functional(mix, 0.2, 0.2), 0.25, 1e-15);
  const auto w = winsorized_moments(mix, 0.2, 0.2);
  EXPECT_NEAR(w.var, 0.25, 1e-15);
  EXPECT_NEAR(w.mean, 0.5, 1e-15);
}

TEST(StepQuantile, IsLeftContinuous) {
  const StepQuantile q({0.5}, {0.0, 1.0});
  EXPECT_EQ(q(0.25), 0.0);
  EXPECT_EQ(q(0.5), 0.0);
  EXPECT_EQ(q(0.5000001), 1.0);
  EXPECT_THROW(StepQuantile({0.5}, {1.0, 0.0}), DomainError);
  EXPECT_THROW(StepQuantile({0.5, 0.4}, {0.0, 1.0, 2.0}), DomainError);
}

TEST(StepQuantile, StieltjesSumOfThreeAtoms) {
  // Masses 1/4, 1/4, 1/2 at 0, 1, 2.
  const StepQuantile q({0.25, 0.5}, {0.0, 1.0, 2.0});
  const double mean = 0.25 * 1 + 0.5 * 2;
  const double var = 0.25 * 1 + 0.5 * 4 - mean * mean;
  EXPECT_NEAR(sigma2_stieltjes(q, 0.0, 0.0), var, 1e-15);
}

TEST(WinsorizedMoments, Examples) {
  const auto w = winsorized_moments(kUniform, 0.25, 0.25);
  EXPECT_NEAR(w.mean, 0.5, 1e-15);
  EXPECT_NEAR(w.var, 1.0 / 24.0, 1e-15);
  EXPECT_EQ(w.xi_lo, 0.25);
  EXPECT_EQ(w.xi_hi, 0.75);
  const auto full = winsorized_moments(kUniform, 0.0, 0.0);
  EXPECT_NEAR(full.mean, 0.5, 1e-15);
  EXPECT_NEAR(full.var, 1.0 / 12.0, 1e-15);
}

TEST(WinsorizedMoments, MeanIsCentreOfSymmetry) {
  for (const auto& spec : {kNormal, DistributionSpec::normal(3, 2), DistributionSpec::cauchy(-1, 2),
                           DistributionSpec::student_t(2.5), DistributionSpec::uniform(2, 6)}) {
    for (double a : {0.01, 0.1, 0.3}) {
      EXPECT_NEAR(winsorized_moments(spec, a, a).mean, *spec.symmetry_center(), 1e-9) << spec.canonical();
    }
  }
}

TEST(WinsorizedMoments, ClosedFormMatchesQuadrature) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.001, 0.45);
  for (const auto& spec : continuous_specs()) {
    for (int i = 0; i < 10; ++i) {
      const double a = unit(rng), b = unit(rng);
      const auto x = winsorized_moments(spec, a, b);
      const auto y = winsorized_moments_quadrature(spec, a, b);
      EXPECT_NEAR(x.mean, y.mean, 1e-8 * (1 + std::fabs(x.mean))) << spec.canonical();
      EXPECT_NEAR(x.var, y.var, 1e-8 * (1 + x.var)) << spec.canonical();
    }
  }
}

TEST(WinsorizedMoments, VarianceMatchesSigma2) {
  for (const auto& spec : continuous_specs()) {
    const auto w = winsorized_moments(spec, 0.05, 0.2);
    EXPECT_NEAR(w.var, sigma2_functional(spec, 0.05, 0.2), 1e-12 * (1 + w.var)) << spec.canonical();
    EXPECT_NEAR(w.mean, 0.05 * w.xi_lo + mu_functional(spec, 0.05, 0.2) + 0.2 * w.xi_hi, 1e-12 * (1 + std::fabs(w.mean)));
  }
}

TEST(WinsorizedMoments, DegenerateWindow) {
  const auto mix = DistributionSpec::two_point(0.0, 1.0, 0.5);
  EXPECT_THROW(winsorized_moments(mix, 0.1, 0.6), DegenerateWindowError);
}

TEST(Normalizers, Examples) {
  const auto u = normalizers(kUniform, TrimmingSchedule::fixed_fraction(0.25, 0.25), 100);
  EXPECT_EQ(u.trim.k, 25);
  EXPECT_NEAR(u.mu_n, 0.25, 1e-15);
  EXPECT_NEAR(u.winsor_mean, 0.5, 1e-15);
  EXPECT_NEAR(u.sigma_w, std::sqrt(1.0 / 24.0), 1e-15);
  EXPECT_NEAR(normalizers(kNormal, TrimmingSchedule::power_law(0.4), 10000).mu_n, 0.0, 1e-15);
  const auto e = normalizers(kExp, TrimmingSchedule::untrimmed(), 50);
  EXPECT_NEAR(e.mu_n, 1.0, 1e-14);
  EXPECT_NEAR(e.sigma_w, 1.0, 1e-12);
}

TEST(Normalizers, CachedValuesAreStable) {
  const auto s = TrimmingSchedule::log_power(3.0);
  const auto a = normalizers(DistributionSpec::student_t(4), s, 20000);
  const auto b = normalizers(DistributionSpec::student_t(4), s, 20000);
  EXPECT_EQ(a.sigma_w, b.sigma_w);
  EXPECT_EQ(a.mu_n, b.mu_n);
}

TEST(Normalizers, DegenerateSigma) {
  const auto mix = DistributionSpec::two_point(0.0, 1.0, 0.5);
  EXPECT_THROW(normalizers(mix, TrimmingSchedule::fixed_fraction(0.1, 0.55), 20), DegenerateWindowError);
}

TEST(PopulationFunctionals, Bundle) {
  const auto f = population_functionals(kUniform, 0.25, 0.25);
  EXPECT_NEAR(f.mu, 0.25, 1e-15);
  EXPECT_NEAR(f.sigma2, 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(f.winsor_mean, 0.5, 1e-15);
  EXPECT_NEAR(f.winsor_var, 1.0 / 24.0, 1e-15);
}

}  // namespace
}  // namespace trimlab
