#include "oracles.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace oracle {
namespace {

// Gauss-Jordan inversion with partial pivoting, long double.
std::vector<std::vector<long double>> invert(
    std::vector<std::vector<long double>> a) {
  const std::size_t p = a.size();
  std::vector<std::vector<long double>> inv(
      p, std::vector<long double>(p, 0.0L));
  for (std::size_t i = 0; i < p; ++i) inv[i][i] = 1.0L;
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::fabs(static_cast<double>(a[r][col])) >
          std::fabs(static_cast<double>(a[piv][col])))
        piv = r;
    if (a[piv][col] == 0.0L) throw std::runtime_error("oracle: singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const long double d = a[col][col];
    for (std::size_t j = 0; j < p; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const long double f = a[r][col];
      if (f == 0.0L) continue;
      for (std::size_t j = 0; j < p; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

double t_density_log_c(int df) {
  const long double v = df;
  return static_cast<double>(lgammal((v + 1) / 2) - lgammal(v / 2) -
                             0.5L * logl(v * 3.14159265358979323846264338328L));
}

double t_density(double x, int df, double log_c) {
  const double v = df;
  return std::exp(log_c - (v + 1) / 2 * std::log1p(x * x / v));
}

double simpson(double (*f)(double, int, double), double a, double b, int df,
               double log_c, double fa, double fm, double fb, double whole,
               double tol, int depth) {
  const double m = (a + b) / 2;
  const double lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm, df, log_c), frm = f(rm, df, log_c);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, df, log_c, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, df, log_c, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(double a, double b, int df, double log_c) {
  const double fa = t_density(a, df, log_c);
  const double fb = t_density(b, df, log_c);
  const double m = (a + b) / 2;
  const double fm = t_density(m, df, log_c);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson(t_density, a, b, df, log_c, fa, fm, fb, whole, 1e-14, 40);
}

}  // namespace

Fit ols(const tierlab::DesignMatrix& d) {
  const std::size_t n = d.rows(), p = d.cols();
  if (n <= p) throw std::runtime_error("oracle: too few rows");
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p, 0.0L));
  std::vector<long double> b(p, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = j; k < p; ++k)
        a[j][k] += static_cast<long double>(d.at(i, j)) * d.at(i, k);
      b[j] += static_cast<long double>(d.at(i, j)) * d.y[i];
    }
  }
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < j; ++k) a[j][k] = a[k][j];

  const auto inv = invert(a);
  Fit fit;
  fit.coef.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    long double s = 0;
    for (std::size_t k = 0; k < p; ++k) s += inv[j][k] * b[k];
    fit.coef[j] = static_cast<double>(s);
  }
  long double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double yhat = 0;
    for (std::size_t j = 0; j < p; ++j) yhat += fit.coef[j] * d.at(i, j);
    const long double r = d.y[i] - yhat;
    rss += r * r;
  }
  fit.df = static_cast<int>(n - p);
  fit.sigma2 = static_cast<double>(rss / fit.df);
  fit.se.resize(p);
  fit.t.resize(p);
  fit.p.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    fit.se[j] = std::sqrt(fit.sigma2 * static_cast<double>(inv[j][j]));
    fit.t[j] = fit.se[j] > 0 ? fit.coef[j] / fit.se[j] : 0;
    fit.p[j] = t_two_sided_p(fit.t[j], fit.df);
  }
  return fit;
}

double t_two_sided_p(double t, int df) {
  const double at = std::fabs(t);
  if (at == 0) return 1;
  const double log_c = t_density_log_c(df);
  // central mass, then tails by symmetry; the density is smooth and even
  const double central = integrate(0, at, df, log_c);
  double p = 1 - 2 * central;
  // far tail: integrate |t| .. |t|+L until the remainder is negligible
  if (p < 1e-6) {
    double tail = 0, a = at, step = std::max(1.0, at);
    for (int i = 0; i < 60; ++i) {
      const double piece = integrate(a, a + step, df, log_c);
      tail += piece;
      a += step;
      step *= 2;
      if (piece < 1e-300 || piece < 1e-16 * tail) break;
    }
    p = 2 * tail;
  }
  return std::max(0.0, std::min(1.0, p));
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::runtime_error("oracle: bad spearman input");
  const std::size_t n = x.size();
  // O(n^2) average ranks: 1 + (#smaller) + (#equal - 1) / 2
  const auto ranks = [n](const std::vector<double>& v) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t smaller = 0, equal = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (v[j] < v[i]) ++smaller;
        if (v[j] == v[i]) ++equal;
      }
      r[i] = 1.0 + smaller + (equal - 1) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0)
    throw std::runtime_error("oracle: degenerate spearman input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
