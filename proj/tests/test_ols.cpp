#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tierlab/errors.hpp"
#include "tierlab/ols.hpp"
#include "tierlab/rng.hpp"
#include "tierlab/student_t.hpp"

using namespace tierlab;

TEST_CASE("gamma and incomplete beta basics") {
  CHECK(log_gamma(0.5) == doctest::Approx(std::log(std::sqrt(M_PI))).epsilon(1e-13));
  CHECK(std::fabs(log_gamma(1.0)) < 1e-14);
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  for (double x : {0.5, 2.5, 10.5, 100.0, 480.5})
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));

  CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
  // closed form: I_x(1, b) = 1 - (1-x)^b
  CHECK(incomplete_beta(1, 4, 0.3) ==
        doctest::Approx(1 - std::pow(0.7, 4)).epsilon(1e-14));
  // symmetry
  for (double x : {0.1, 0.37, 0.5, 0.82}) {
    CHECK(incomplete_beta(2.5, 3.5, x) + incomplete_beta(3.5, 2.5, 1 - x) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("student t tail probabilities, frozen reference values") {
  // reference values computed independently and pinned
  CHECK(std::fabs(student_t_two_sided_p(2.776, 4) - 0.0500227783199764) < 1e-12);
  CHECK(std::fabs(student_t_two_sided_p(1.0, 10) - 0.3408931323020601) < 1e-12);
  CHECK(std::fabs(student_t_two_sided_p(2.0, 5) - 0.10193947882985828) < 1e-12);
  CHECK(std::fabs(student_t_two_sided_p(0.5, 1) - 0.7048327646991336) < 1e-12);
  CHECK(std::fabs(student_t_two_sided_p(3.0, 30) - 0.005389964065651944) < 1e-12);
  CHECK(std::fabs(student_t_two_sided_p(1.96, 1000) - 0.05027318495574871) < 1e-12);
  CHECK(student_t_two_sided_p(0.0, 7) == 1.0);
  CHECK(student_t_two_sided_p(1e308, 7) == 0.0);
  // symmetry in t
  CHECK(student_t_two_sided_p(-2.3, 9) ==
        doctest::Approx(student_t_two_sided_p(2.3, 9)).epsilon(1e-15));
}

TEST_CASE("student t cdf and quantile invert each other") {
  CHECK(student_t_cdf(0, 11) == doctest::Approx(0.5).epsilon(1e-14));
  for (double t : {-3.0, -0.7, 0.4, 2.2}) {
    CHECK(student_t_cdf(t, 8) + student_t_cdf(-t, 8) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(std::fabs(student_t_quantile(0.975, 4) - 2.7764451051977987) < 1e-10);
  CHECK(std::fabs(student_t_quantile(0.975, 17) - 2.1098155778331806) < 1e-10);
  CHECK(std::fabs(student_t_quantile(0.975, 10) - 2.2281388519649385) < 1e-10);
  CHECK(std::fabs(student_t_quantile(0.975, 961) - 1.9624355881226758) < 1e-9);
  for (double p : {0.05, 0.3, 0.8, 0.975}) {
    CHECK(student_t_cdf(student_t_quantile(p, 6), 6) ==
          doctest::Approx(p).epsilon(1e-11));
  }
}

TEST_CASE("three point line fit, checked by hand") {
  DesignMatrix d;
  d.names = {DesignMatrix::kIntercept, "x"};
  d.add_row(0, {1, 0});
  d.add_row(1, {1, 1});
  d.add_row(3, {1, 2});
  const OlsFit fit = ols_fit(d);
  CHECK(fit.coef("x") == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(fit.coef(DesignMatrix::kIntercept) ==
        doctest::Approx(-1.0 / 6).epsilon(1e-13));
  CHECK(fit.n == 3);
  CHECK(fit.df_residual == 1);
  CHECK(fit.has_intercept);
  CHECK(fit.r2 == doctest::Approx(27.0 / 28).epsilon(1e-13));
  CHECK(fit.resid_se == doctest::Approx(std::sqrt(1.0 / 6)).epsilon(1e-13));
  CHECK(fit.f_stat == doctest::Approx(27.0).epsilon(1e-12));
  CHECK(fit.f_df1 == 1);
  CHECK(fit.f_df2 == 1);
  CHECK(fit.term("x").se == doctest::Approx(std::sqrt(1.0 / 12)).epsilon(1e-13));
  CHECK(fit.term("x").t_stat ==
        doctest::Approx(1.5 / std::sqrt(1.0 / 12)).epsilon(1e-13));
  CHECK(fit.residuals.size() == 3);
  CHECK(fit.fitted[0] == doctest::Approx(-1.0 / 6).epsilon(1e-13));
  CHECK_THROWS_AS(fit.coef("nope"), MissingRegressor);
}

TEST_CASE("prediction intervals from the hand-checked fit") {
  DesignMatrix d;
  d.names = {DesignMatrix::kIntercept, "x"};
  d.add_row(0, {1, 0});
  d.add_row(1, {1, 1});
  d.add_row(3, {1, 2});
  const OlsFit fit = ols_fit(d);
  // at x = 1: x' (X'X)^-1 x = 1/3, sigma^2 = 1/6
  const double mvar = mean_response_variance(fit, {1, 1});
  CHECK(mvar == doctest::Approx(1.0 / 18).epsilon(1e-12));
  const Prediction pr = predict(fit, std::vector<double>{1, 1});
  const double t975 = student_t_quantile(0.975, 1);
  CHECK(pr.point == doctest::Approx(4.0 / 3).epsilon(1e-13));
  CHECK(pr.ci_half == doctest::Approx(t975 * std::sqrt(1.0 / 18)).epsilon(1e-11));
  CHECK(pr.pi_half ==
        doctest::Approx(t975 * std::sqrt(1.0 / 18 + 1.0 / 6)).epsilon(1e-11));
  CHECK(pr.pi_half > pr.ci_half);

  const Prediction named =
      predict(fit, std::map<std::string, double>{{"x", 1.0}});
  CHECK(named.point == doctest::Approx(pr.point));
  CHECK_THROWS_AS(
      predict(fit, std::map<std::string, double>{{"y", 1.0}}),
      MissingRegressor);
}

TEST_CASE("agrees with the Gauss-Jordan oracle on random systems") {
  Rng rng(20201106);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 1 + static_cast<std::size_t>(rng.next() % 5);
    const std::size_t n = p + 8 + rng.next() % 40;
    DesignMatrix d;
    d.names.push_back(DesignMatrix::kIntercept);
    for (std::size_t j = 1; j < p; ++j)
      d.names.push_back("x" + std::to_string(j));
    std::vector<double> beta(p);
    for (auto& b : beta) b = -3 + 6 * rng.uniform01();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(p);
      row[0] = 1;
      for (std::size_t j = 1; j < p; ++j)
        row[j] = -5 + 10 * rng.uniform01();
      double y = 0;
      for (std::size_t j = 0; j < p; ++j) y += beta[j] * row[j];
      y += 0.5 * rng.gaussian();
      d.add_row(y, row);
    }
    const OlsFit fit = ols_fit(d);
    const oracle::Fit ref = oracle::ols(d);
    for (std::size_t j = 0; j < p; ++j) {
      CAPTURE(rep);
      CAPTURE(j);
      CHECK(std::fabs(fit.terms[j].coef - ref.coef[j]) <=
            1e-10 * std::max(1.0, std::fabs(ref.coef[j])));
      CHECK(std::fabs(fit.terms[j].se - ref.se[j]) <=
            1e-9 * std::max(1.0, ref.se[j]));
      CHECK(std::fabs(fit.terms[j].p_value - ref.p[j]) < 1e-9);
    }
  }
}

TEST_CASE("noiseless near-collinear quadratic is recovered exactly") {
  // the regressors {1, e, e^2} over a narrow range are badly conditioned;
  // equilibration plus iterative refinement must still nail the answer
  const double a0 = -92.089, a1 = 3.652, a2 = -0.017;
  DesignMatrix d;
  d.names = {DesignMatrix::kIntercept, "e", "e_sq"};
  for (int i = 0; i < 20; ++i) {
    const double e = 82.0 + 1.2 * i;
    d.add_row(a0 + a1 * e + a2 * e * e, {1, e, e * e});
  }
  const OlsFit fit = ols_fit(d);
  CHECK(std::fabs(fit.coef(DesignMatrix::kIntercept) - a0) < 1e-6);
  CHECK(std::fabs(fit.coef("e") - a1) < 1e-6);
  CHECK(std::fabs(fit.coef("e_sq") - a2) < 1e-6);
  CHECK(fit.r2 == 1.0);
}

TEST_CASE("rank problems are reported, not mangled") {
  DesignMatrix dup;
  dup.names = {DesignMatrix::kIntercept, "a", "a_again"};
  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    const double a = rng.uniform01();
    dup.add_row(a * 2, {1, a, a});
  }
  CHECK_THROWS_AS(ols_fit(dup), RankDeficient);

  DesignMatrix zero;
  zero.names = {DesignMatrix::kIntercept, "z"};
  for (int i = 0; i < 5; ++i) zero.add_row(1.0 * i, {1, 0});
  CHECK_THROWS_AS(ols_fit(zero), RankDeficient);

  DesignMatrix few;
  few.names = {DesignMatrix::kIntercept, "x"};
  few.add_row(1, {1, 0});
  few.add_row(2, {1, 1});
  CHECK_THROWS_AS(ols_fit(few), TooFewObservations);

  DesignMatrix none;
  CHECK_THROWS_AS(ols_fit(none), RankDeficient);
}

TEST_CASE("r2 is uncentered without an intercept") {
  DesignMatrix d;
  d.names = {"x"};
  d.add_row(2.0, {1.0});
  d.add_row(4.1, {2.0});
  d.add_row(5.9, {3.0});
  const OlsFit fit = ols_fit(d);
  CHECK_FALSE(fit.has_intercept);
  // slope = sum(xy)/sum(x^2) = (2 + 8.2 + 17.7)/14
  const double b = (2 + 8.2 + 17.7) / 14.0;
  CHECK(fit.coef("x") == doctest::Approx(b).epsilon(1e-13));
  double rss = 0, tss = 0;
  const double xs[] = {1, 2, 3}, ys[] = {2.0, 4.1, 5.9};
  for (int i = 0; i < 3; ++i) {
    rss += (ys[i] - b * xs[i]) * (ys[i] - b * xs[i]);
    tss += ys[i] * ys[i];  // uncentered
  }
  CHECK(fit.r2 == doctest::Approx(1 - rss / tss).epsilon(1e-12));

  // a constant column under any name counts as an intercept
  DesignMatrix c;
  c.names = {"k", "x"};
  c.add_row(2.0, {2.0, 1.0});
  c.add_row(4.1, {2.0, 2.0});
  c.add_row(5.9, {2.0, 3.0});
  CHECK(ols_fit(c).has_intercept);
}

TEST_CASE("length mismatches are rejected early") {
  DesignMatrix d;
  d.names = {DesignMatrix::kIntercept, "x"};
  CHECK_THROWS_AS(d.add_row(1.0, {1.0}), LengthMismatch);
}
