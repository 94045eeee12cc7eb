#pragma once

#include <map>
#include <string>
#include <vector>

namespace tierlab {

// Response plus named regressor columns, row-major.
struct DesignMatrix {
  static constexpr const char* kIntercept = "(Intercept)";

  std::vector<std::string> names;  // p column names
  std::vector<double> x;           // n*p values, row-major
  std::vector<double> y;           // n responses

  std::size_t rows() const { return y.size(); }
  std::size_t cols() const { return names.size(); }
  double at(std::size_t i, std::size_t j) const { return x[i * cols() + j]; }

  // Row layout must match `names`.
  void add_row(double response, const std::vector<double>& regressors);
};

struct OlsTerm {
  std::string name;
  double coef = 0;
  double se = 0;
  double t_stat = 0;
  double p_value = 0;
};

struct OlsFit {
  std::vector<OlsTerm> terms;
  std::size_t n = 0;
  int df_residual = 0;
  double r2 = 0;
  double adj_r2 = 0;
  double resid_se = 0;      // sqrt(RSS / df_residual)
  double f_stat = 0;
  int f_df1 = 0;
  int f_df2 = 0;
  bool has_intercept = false;
  std::vector<double> cov;  // p*p coefficient covariance, row-major
  std::vector<double> residuals;
  std::vector<double> fitted;

  double coef(const std::string& name) const;
  const OlsTerm& term(const std::string& name) const;
};

// Ordinary least squares through the normal equations: A = X'X is
// column-equilibrated, factored by Cholesky, and the solution polished with
// two iterative-refinement passes (long-double residuals) so near-collinear
// designs such as {1, e, e^2} still come out to full double accuracy.
// Inference: se_j = sqrt(sigma^2 (A^-1)_jj), two-sided t p-values, R^2
// against the centered total sum of squares when an intercept column is
// present (a constant column counts), F on (p-1, n-p) df then.
//
// Throws TooFewObservations (n < p+1) and RankDeficient (zero column, failed
// pivot, or equilibrated condition number above 1e12), naming the offending
// columns.
OlsFit ols_fit(const DesignMatrix& d);

struct Prediction {
  double point = 0;
  double ci_half = 0;  // 95% confidence half-width (mean response)
  double pi_half = 0;  // 95% prediction half-width (adds residual variance)
};

// `row` ordered like fit.terms. The named overload throws MissingRegressor
// when a term has no value.
Prediction predict(const OlsFit& fit, const std::vector<double>& row);
Prediction predict(const OlsFit& fit,
                   const std::map<std::string, double>& values);

// Mean-response variance x' cov x of one row (the ci_half before the t
// multiplier and square root); exposed for variance propagation downstream.
double mean_response_variance(const OlsFit& fit, const std::vector<double>& row);

}  // namespace tierlab
