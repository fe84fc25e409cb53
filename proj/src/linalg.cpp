#include "grapevine/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace grapevine {

Vec Mat::apply(const Vec& v) const {
  Vec out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += data_[i * cols_ + j] * v[j];
    out[i] = s;
  }
  return out;
}

Vec Mat::apply_transpose(const Vec& v) const {
  Vec out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[j] += data_[i * cols_ + j] * v[i];
  return out;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec scaled(const Vec& v, double alpha) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = alpha * v[i];
  return out;
}

Vec axpy(double alpha, const Vec& x, const Vec& y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + y[i];
  return out;
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const Mat& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j))) return false;
  return true;
}

std::optional<Vec> solve_dense(const Mat& a, const Vec& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) return std::nullopt;

  double amax = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) amax = std::max(amax, std::abs(a(i, j)));
  const double pivot_floor = 1e-12 * amax;

  Mat lu = a;
  Vec x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double pmax = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = std::abs(lu(i, k));
      if (m > pmax) {
        pmax = m;
        piv = i;
      }
    }
    if (pmax == 0.0 || pmax < pivot_floor || !std::isfinite(pmax)) return std::nullopt;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu(i, k) / lu(k, k);
      lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
      x[i] -= m * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= lu(k, j) * x[j];
    x[k] = s / lu(k, k);
  }
  return x;
}

CgResult cg_solve(const LinearOperator& op, const Vec& b, double tol, int maxiter) {
  CgResult res;
  res.x = Vec(b.size(), 0.0);
  const double thresh = tol * std::max(1.0, norm2(b));

  Vec r = b;
  double rr = dot(r, r);
  if (std::sqrt(rr) <= thresh) {
    res.converged = true;
    return res;
  }
  Vec p = r;
  for (int it = 0; it < maxiter; ++it) {
    const Vec q = op.apply(p);
    const double pq = dot(p, q);
    if (!(pq > 0.0) || !std::isfinite(pq)) {
      res.iterations = it;
      return res;  // breakdown: operator not SPD along this direction
    }
    const double alpha = rr / pq;
    for (std::size_t i = 0; i < b.size(); ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    const double rr_new = dot(r, r);
    res.iterations = it + 1;
    if (std::sqrt(rr_new) <= thresh) {
      const Vec t = op.apply(res.x);
      res.converged = norm2(sub(t, b)) <= thresh;
      if (res.converged) return res;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < b.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  return res;
}

namespace {

Mat fd_jacobian_steps(const std::function<Vec(const Vec&)>& f, const Vec& x, const Vec& steps) {
  const std::size_t n = x.size();
  Mat jac;
  for (std::size_t j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += steps[j];
    xm[j] -= steps[j];
    const Vec fp = f(xp);
    const Vec fm = f(xm);
    if (j == 0) jac = Mat(fp.size(), n);
    for (std::size_t i = 0; i < fp.size(); ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * steps[j]);
  }
  return jac;
}

}  // namespace

Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x) {
  Vec steps(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) steps[j] = 1e-6 * std::max(1.0, std::abs(x[j]));
  return fd_jacobian_steps(f, x, steps);
}

Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double eps) {
  return fd_jacobian_steps(f, x, Vec(x.size(), eps));
}

}  // namespace grapevine
