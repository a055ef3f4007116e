#pragma once

#include <cstddef>
#include <vector>

namespace tfgl::detail {

// Compressed sparse row matrix assembled row by row.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> val;

  void push(std::size_t c, double v) {
    col.push_back(c);
    val.push_back(v);
  }
  void end_row() {
    row_ptr.push_back(col.size());
    ++n;
  }
  double diagonal(std::size_t r) const;
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

struct KrylovResult {
  int iterations = 0;
  double residual_max = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned BiCGSTAB. Stops once the max-norm of the true
// residual b - Ax is at most tol. x holds the initial guess on entry.
KrylovResult bicgstab(const CsrMatrix& a, const std::vector<double>& b,
                      std::vector<double>& x, double tol, int max_iters);

// Jacobi-preconditioned conjugate gradient for symmetric positive
// (semi)definite systems, same stopping rule.
KrylovResult conjugate_gradient(const CsrMatrix& a, const std::vector<double>& b,
                                std::vector<double>& x, double tol, int max_iters);

double max_abs(const std::vector<double>& v);

}  // namespace tfgl::detail
