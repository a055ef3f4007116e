#include "sparse.hpp"

#include <algorithm>
#include <cmath>

namespace tfgl::detail {

double CsrMatrix::diagonal(std::size_t r) const {
  for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
    if (col[k] == r) return val[k];
  return 0.0;
}

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> inverse_diagonal(const CsrMatrix& a) {
  std::vector<double> d(a.n, 1.0);
  for (std::size_t r = 0; r < a.n; ++r) {
    const double v = a.diagonal(r);
    if (v != 0.0) d[r] = 1.0 / v;
  }
  return d;
}

double true_residual(const CsrMatrix& a, const std::vector<double>& b,
                     const std::vector<double>& x, std::vector<double>& r) {
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return max_abs(r);
}

}  // namespace

KrylovResult bicgstab(const CsrMatrix& a, const std::vector<double>& b,
                      std::vector<double>& x, double tol, int max_iters) {
  const std::size_t n = a.n;
  x.resize(n, 0.0);
  const std::vector<double> dinv = inverse_diagonal(a);
  std::vector<double> r(n), rhat, p(n, 0.0), v(n, 0.0), y(n), s(n), z(n), t(n);
  KrylovResult res;
  res.residual_max = true_residual(a, b, x, r);
  if (res.residual_max <= tol) {
    res.converged = true;
    return res;
  }
  rhat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  while (res.iterations < max_iters) {
    ++res.iterations;
    const double rho_new = dot(rhat, r);
    if (std::abs(rho_new) < 1e-300 || omega == 0.0) {
      // Breakdown: restart from the current residual.
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) y[i] = dinv[i] * p[i];
    a.multiply(y, v);
    alpha = rho / dot(rhat, v);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
    if (max_abs(s) <= tol) {
      res.residual_max = true_residual(a, b, x, r);
      if (res.residual_max <= tol) {
        res.converged = true;
        return res;
      }
      rhat = r;
      rho = alpha = omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * s[i];
    a.multiply(z, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] += omega * z[i];
    for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    if (res.iterations % 50 == 0 || max_abs(r) <= tol) {
      res.residual_max = true_residual(a, b, x, r);
      if (res.residual_max <= tol) {
        res.converged = true;
        return res;
      }
    }
  }
  res.residual_max = true_residual(a, b, x, r);
  res.converged = res.residual_max <= tol;
  return res;
}

KrylovResult conjugate_gradient(const CsrMatrix& a, const std::vector<double>& b,
                                std::vector<double>& x, double tol, int max_iters) {
  const std::size_t n = a.n;
  x.resize(n, 0.0);
  const std::vector<double> dinv = inverse_diagonal(a);
  std::vector<double> r(n), z(n), p(n), q(n);
  KrylovResult res;
  res.residual_max = true_residual(a, b, x, r);
  if (res.residual_max <= tol) {
    res.converged = true;
    return res;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
  p = z;
  double rz = dot(r, z);
  while (res.iterations < max_iters) {
    ++res.iterations;
    a.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (max_abs(r) <= tol) {
      res.residual_max = true_residual(a, b, x, r);
      if (res.residual_max <= tol) {
        res.converged = true;
        return res;
      }
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.residual_max = true_residual(a, b, x, r);
  res.converged = res.residual_max <= tol;
  return res;
}

}  // namespace tfgl::detail
