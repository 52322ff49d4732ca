#pragma once

// Dense square matrices over Rational or double. Small (4n <= 32), so no
// attempt at blocking or expression templates.

#include <stdexcept>
#include <vector>

namespace qkcomp {

template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int size) : n_(size), a_(static_cast<std::size_t>(size) * size, T(0)) {}

  static SquareMatrix identity(int size) {
    SquareMatrix m(size);
    for (int i = 0; i < size; ++i) m(i, i) = 1;
    return m;
  }

  [[nodiscard]] int size() const { return n_; }
  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& o) {
    check(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  SquareMatrix& operator*=(const T& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend SquareMatrix operator*(const T& s, SquareMatrix a) { return a *= s; }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    a.check(b);
    SquareMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        if (a(i, k) == 0) continue;
        for (int j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  [[nodiscard]] SquareMatrix transpose() const {
    SquareMatrix t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  [[nodiscard]] T trace() const {
    T s = 0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

  /// Frobenius pairing sum_ij a_ij b_ij.
  [[nodiscard]] T frobenius(const SquareMatrix& b) const {
    check(b);
    T s = 0;
    for (std::size_t k = 0; k < a_.size(); ++k) s += a_[k] * b.a_[k];
    return s;
  }

  [[nodiscard]] bool is_symmetric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& x : a_)
      if (!(x == 0)) return false;
    return true;
  }

 private:
  void check(const SquareMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("matrix sizes differ");
  }

  int n_ = 0;
  std::vector<T> a_;
};

}  // namespace qkcomp
