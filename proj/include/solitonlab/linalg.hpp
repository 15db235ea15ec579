#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace solitonlab {

// Dense square matrix, row-major, sized at runtime (n is small: 3..8).
class Matrix {
 public:
  explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double max_asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
  }

  // Gauss-Jordan with partial pivoting; throws when |det| falls below floor.
  Matrix inverse(double det_floor = 1e-30) const {
    Matrix a = *this;
    Matrix inv = identity(n_);
    double det = 1.0;
    for (int col = 0; col < n_; ++col) {
      int pivot = col;
      for (int row = col + 1; row < n_; ++row) {
        if (std::abs(a(row, col)) > std::abs(a(pivot, col))) pivot = row;
      }
      if (pivot != col) {
        for (int j = 0; j < n_; ++j) {
          std::swap(a(pivot, j), a(col, j));
          std::swap(inv(pivot, j), inv(col, j));
        }
        det = -det;
      }
      const double d = a(col, col);
      det *= d;
      if (d == 0.0 || !std::isfinite(d)) {
        throw SingularMetric("matrix inverse: zero or non-finite pivot");
      }
      const double dinv = 1.0 / d;
      for (int j = 0; j < n_; ++j) {
        a(col, j) *= dinv;
        inv(col, j) *= dinv;
      }
      for (int row = 0; row < n_; ++row) {
        if (row == col) continue;
        const double f = a(row, col);
        if (f == 0.0) continue;
        for (int j = 0; j < n_; ++j) {
          a(row, j) -= f * a(col, j);
          inv(row, j) -= f * inv(col, j);
        }
      }
    }
    if (!(std::abs(det) >= det_floor)) {
      throw SingularMetric("matrix determinant " + std::to_string(det) +
                           " below floor " + std::to_string(det_floor));
    }
    return inv;
  }

 private:
  int n_;
  std::vector<double> a_;
};

// Christoffel symbols indexed [upper][lower][lower]; writers keep the lower
// pair symmetric through set_sym.
class Christoffels {
 public:
  explicit Christoffels(int n) : n_(n), a_(static_cast<size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int k, int i, int j) {
    return a_[(static_cast<size_t>(k) * n_ + i) * n_ + j];
  }
  double operator()(int k, int i, int j) const {
    return a_[(static_cast<size_t>(k) * n_ + i) * n_ + j];
  }
  void set_sym(int k, int i, int j, double v) {
    (*this)(k, i, j) = v;
    (*this)(k, j, i) = v;
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_;
  std::vector<double> a_;
};

class Tensor4 {
 public:
  explicit Tensor4(int n)
      : n_(n), a_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) {
    return a_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return a_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_;
  std::vector<double> a_;
};

}  // namespace solitonlab
