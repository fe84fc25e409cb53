#ifndef GRAPEVINE_LINALG_HPP
#define GRAPEVINE_LINALG_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace grapevine {

using Vec = std::vector<double>;

// Dense row-major matrix. Systems in this library are small (n <= ~10),
// so no effort is spent on blocking or sparsity.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Vec apply(const Vec& v) const;            // A v
  Vec apply_transpose(const Vec& v) const;  // A^T v
  Mat transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

// Matrix-free view of a linear map, for the conjugate-gradient path.
struct LinearOperator {
  std::function<Vec(const Vec&)> apply;
  std::size_t dim = 0;
};

struct CgResult {
  Vec x;
  bool converged = false;
  int iterations = 0;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double norm_inf(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& v, double alpha);
Vec axpy(double alpha, const Vec& x, const Vec& y);  // alpha x + y
bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

// LU with partial pivoting. Empty result when a pivot magnitude falls
// below 1e-12 * max|A| (the matrix is treated as singular).
std::optional<Vec> solve_dense(const Mat& a, const Vec& b);

// Unpreconditioned CG started from zero. Convergence means
// ||op(x) - b||_2 <= tol * max(1, ||b||_2); a non-positive p.Ap
// (operator not SPD on the Krylov space) stops with converged=false.
CgResult cg_solve(const LinearOperator& op, const Vec& b, double tol, int maxiter);

// Central differences: column j = (f(x + e_j h_j) - f(x - e_j h_j)) / (2 h_j).
// The two-argument form picks h_j = 1e-6 * max(1, |x_j|); the explicit-eps
// form uses the same eps for every column.
Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x);
Mat finite_diff_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double eps);

}  // namespace grapevine

#endif
