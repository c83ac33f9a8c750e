#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace solstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense rank-3 array indexed (i, j, k), all indices 0-based and < n.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  [[nodiscard]] int dim() const noexcept { return n_; }

  double& operator()(int i, int j, int k) noexcept { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const noexcept { return data_[index(i, j, k)]; }

  [[nodiscard]] double max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  [[nodiscard]] std::size_t index(int i, int j, int k) const noexcept {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_);
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array indexed (i, j, k, l).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n)
      : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  [[nodiscard]] int dim() const noexcept { return n_; }

  double& operator()(int i, int j, int k, int l) noexcept { return data_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const noexcept {
    return data_[index(i, j, k, l)];
  }

  [[nodiscard]] double max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  [[nodiscard]] std::size_t index(int i, int j, int k, int l) const noexcept {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_ && l >= 0 && l < n_);
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// Largest absolute entry of a matrix; zero for empty matrices.
inline double max_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace solstab
