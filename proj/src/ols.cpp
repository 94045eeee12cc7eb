#include "tierlab/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tierlab/errors.hpp"
#include "tierlab/student_t.hpp"

namespace tierlab {

void DesignMatrix::add_row(double response,
                           const std::vector<double>& regressors) {
  if (regressors.size() != names.size())
    throw LengthMismatch("row has " + std::to_string(regressors.size()) +
                         " values for " + std::to_string(names.size()) +
                         " columns");
  x.insert(x.end(), regressors.begin(), regressors.end());
  y.push_back(response);
}

double OlsFit::coef(const std::string& name) const {
  return term(name).coef;
}

const OlsTerm& OlsFit::term(const std::string& name) const {
  for (const auto& t : terms)
    if (t.name == name) return t;
  throw MissingRegressor("no term named " + name);
}

namespace {

// Cholesky of a symmetric p x p matrix in long double, lower triangle.
// Returns the index of the first non-positive pivot, or -1.
int cholesky(std::vector<long double>& a, std::size_t p) {
  for (std::size_t j = 0; j < p; ++j) {
    long double d = a[j * p + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * p + k] * a[j * p + k];
    if (!(d > 1e-13)) return static_cast<int>(j);
    const long double l = std::sqrt(d);
    a[j * p + j] = l;
    for (std::size_t i = j + 1; i < p; ++i) {
      long double s = a[i * p + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * p + k] * a[j * p + k];
      a[i * p + j] = s / l;
    }
  }
  return -1;
}

void chol_solve(const std::vector<long double>& l, std::size_t p,
                std::vector<long double>& b) {
  for (std::size_t i = 0; i < p; ++i) {
    long double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * p + k] * b[k];
    b[i] = s / l[i * p + i];
  }
  for (std::size_t i = p; i-- > 0;) {
    long double s = b[i];
    for (std::size_t k = i + 1; k < p; ++k) s -= l[k * p + i] * b[k];
    b[i] = s / l[i * p + i];
  }
}

}  // namespace

OlsFit ols_fit(const DesignMatrix& d) {
  const std::size_t n = d.rows();
  const std::size_t p = d.cols();
  if (p == 0) throw RankDeficient("design has no columns");
  if (n < p + 1)
    throw TooFewObservations("need at least " + std::to_string(p + 1) +
                             " observations for " + std::to_string(p) +
                             " columns, got " + std::to_string(n));

  // normal equations, long double accumulation
  std::vector<long double> a(p * p, 0.0L), b(p, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = d.x.data() + i * p;
    for (std::size_t j = 0; j < p; ++j) {
      b[j] += static_cast<long double>(row[j]) * d.y[i];
      for (std::size_t k = j; k < p; ++k)
        a[j * p + k] += static_cast<long double>(row[j]) * row[k];
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < j; ++k) a[j * p + k] = a[k * p + j];

  // equilibrate: scale to unit diagonal so the condition guard and pivots
  // are insensitive to column units
  std::vector<long double> scale(p);
  for (std::size_t j = 0; j < p; ++j) {
    const long double diag = a[j * p + j];
    if (!(diag > 0.0L))
      throw RankDeficient("column " + d.names[j] + " is identically zero");
    scale[j] = std::sqrt(diag);
  }
  std::vector<long double> eq(p * p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k)
      eq[j * p + k] = a[j * p + k] / (scale[j] * scale[k]);

  std::vector<long double> chol = eq;
  const int bad = cholesky(chol, p);
  if (bad >= 0)
    throw RankDeficient("column " + d.names[bad] +
                        " is linearly dependent on earlier columns");

  // inverse of the equilibrated matrix, for the condition guard and the
  // coefficient covariance
  std::vector<long double> inv(p * p, 0.0L);
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<long double> e(p, 0.0L);
    e[j] = 1.0L;
    chol_solve(chol, p, e);
    for (std::size_t i = 0; i < p; ++i) inv[i * p + j] = e[i];
  }
  long double norm_a = 0.0L, norm_inv = 0.0L;
  for (std::size_t k = 0; k < p; ++k) {
    long double ca = 0.0L, ci = 0.0L;
    for (std::size_t i = 0; i < p; ++i) {
      ca += std::fabs(static_cast<double>(eq[i * p + k]));
      ci += std::fabs(static_cast<double>(inv[i * p + k]));
    }
    norm_a = std::max(norm_a, ca);
    norm_inv = std::max(norm_inv, ci);
  }
  const double cond = static_cast<double>(norm_a * norm_inv);
  if (cond > 1e12) {
    // name the two most inflated columns
    std::size_t worst = 0, second = 0;
    for (std::size_t j = 0; j < p; ++j)
      if (inv[j * p + j] > inv[worst * p + worst]) worst = j;
    second = worst == 0 ? 1 : 0;
    for (std::size_t j = 0; j < p; ++j)
      if (j != worst && inv[j * p + j] > inv[second * p + second]) second = j;
    throw RankDeficient("near-dependent columns (condition " +
                        std::to_string(cond) + "): " + d.names[worst] +
                        ", " + d.names[std::min(second, p - 1)]);
  }

  // solve, then two refinement passes against the unequilibrated system
  std::vector<long double> z(p);
  for (std::size_t j = 0; j < p; ++j) z[j] = b[j] / scale[j];
  chol_solve(chol, p, z);
  std::vector<long double> coef(p);
  for (std::size_t j = 0; j < p; ++j) coef[j] = z[j] / scale[j];
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<long double> r(p, 0.0L);
    for (std::size_t j = 0; j < p; ++j) {
      long double s = b[j];
      for (std::size_t k = 0; k < p; ++k) s -= a[j * p + k] * coef[k];
      r[j] = s / scale[j];
    }
    chol_solve(chol, p, r);
    for (std::size_t j = 0; j < p; ++j) coef[j] += r[j] / scale[j];
  }

  OlsFit fit;
  fit.n = n;
  fit.df_residual = static_cast<int>(n - p);
  fit.fitted.resize(n);
  fit.residuals.resize(n);
  long double rss = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double yhat = 0.0L;
    const double* row = d.x.data() + i * p;
    for (std::size_t j = 0; j < p; ++j) yhat += coef[j] * row[j];
    fit.fitted[i] = static_cast<double>(yhat);
    fit.residuals[i] = d.y[i] - fit.fitted[i];
    rss += static_cast<long double>(fit.residuals[i]) * fit.residuals[i];
  }

  // intercept = any constant nonzero column
  for (std::size_t j = 0; j < p && !fit.has_intercept; ++j) {
    bool constant = true;
    for (std::size_t i = 1; i < n && constant; ++i)
      constant = d.at(i, j) == d.at(0, j);
    fit.has_intercept = constant && d.at(0, j) != 0.0;
  }

  long double tss = 0.0L;
  if (fit.has_intercept) {
    long double mean = 0.0L;
    for (double v : d.y) mean += v;
    mean /= n;
    for (double v : d.y) tss += (v - mean) * (v - mean);
  } else {
    for (double v : d.y) tss += static_cast<long double>(v) * v;
  }

  const double sigma2 = static_cast<double>(rss) / fit.df_residual;
  fit.resid_se = std::sqrt(sigma2);
  fit.r2 = tss > 0.0L ? static_cast<double>(1.0L - rss / tss)
                      : (rss == 0.0L ? 1.0 : 0.0);
  const int df1 = static_cast<int>(p) - (fit.has_intercept ? 1 : 0);
  const int df2 = fit.df_residual;
  const double denom_n = fit.has_intercept ? n - 1.0 : double(n);
  fit.adj_r2 = tss > 0.0L
                   ? 1.0 - (static_cast<double>(rss) / df2) /
                             (static_cast<double>(tss) / denom_n)
                   : fit.r2;
  fit.f_df1 = df1;
  fit.f_df2 = df2;
  fit.f_stat = df1 > 0 ? (static_cast<double>(tss - rss) / df1) /
                             (static_cast<double>(rss) / df2)
                       : std::numeric_limits<double>::quiet_NaN();

  fit.cov.resize(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      fit.cov[i * p + j] = sigma2 *
                           static_cast<double>(inv[i * p + j] /
                                               (scale[i] * scale[j]));

  fit.terms.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    OlsTerm& t = fit.terms[j];
    t.name = d.names[j];
    t.coef = static_cast<double>(coef[j]);
    t.se = std::sqrt(std::max(0.0, fit.cov[j * p + j]));
    if (t.se > 0.0) {
      t.t_stat = t.coef / t.se;
      t.p_value = student_t_two_sided_p(t.t_stat, fit.df_residual);
    } else {
      t.t_stat = t.coef == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      t.p_value = t.coef == 0.0 ? 1.0 : 0.0;
    }
  }
  return fit;
}

double mean_response_variance(const OlsFit& fit,
                              const std::vector<double>& row) {
  const std::size_t p = fit.terms.size();
  if (row.size() != p)
    throw LengthMismatch("prediction row has " + std::to_string(row.size()) +
                         " values for " + std::to_string(p) + " terms");
  double v = 0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      v += row[i] * fit.cov[i * p + j] * row[j];
  return std::max(0.0, v);
}

Prediction predict(const OlsFit& fit, const std::vector<double>& row) {
  const std::size_t p = fit.terms.size();
  if (row.size() != p)
    throw LengthMismatch("prediction row has " + std::to_string(row.size()) +
                         " values for " + std::to_string(p) + " terms");
  Prediction out;
  for (std::size_t j = 0; j < p; ++j) out.point += fit.terms[j].coef * row[j];
  const double mvar = mean_response_variance(fit, row);
  const double sigma2 = fit.resid_se * fit.resid_se;
  const double tq = student_t_quantile(0.975, fit.df_residual);
  out.ci_half = tq * std::sqrt(mvar);
  out.pi_half = tq * std::sqrt(mvar + sigma2);
  return out;
}

Prediction predict(const OlsFit& fit,
                   const std::map<std::string, double>& values) {
  std::vector<double> row;
  row.reserve(fit.terms.size());
  for (const auto& t : fit.terms) {
    if (t.name == DesignMatrix::kIntercept) {
      row.push_back(1.0);
      continue;
    }
    const auto it = values.find(t.name);
    if (it == values.end())
      throw MissingRegressor("no value for regressor " + t.name);
    row.push_back(it->second);
  }
  return predict(fit, row);
}

}  // namespace tierlab
