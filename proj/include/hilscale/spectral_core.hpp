#pragma once

// Diagonal functional calculus for a strictly positive generator L.
//
// Every operator handled by the library is diagonal in one fixed orthonormal
// basis, so an element of X is its coefficient sequence and f(L) acts by
// multiplying coefficient j with f(l_j). The Hilbert scale norms are
//   ||x||_t = ||L^t x|| = sqrt(sum_j l_j^{2t} x_j^2).

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hilscale {

/// Finite coefficient sequence in the shared basis. Non-empty, all finite.
class CoeffVector {
 public:
  explicit CoeffVector(std::vector<double> coeffs);
  CoeffVector(std::initializer_list<double> coeffs);

  static CoeffVector zeros(std::size_t n);
  /// Canonical basis vector e_j (0-based index).
  static CoeffVector unit(std::size_t n, std::size_t j);

  std::size_t size() const noexcept { return coeffs_.size(); }
  double operator[](std::size_t j) const { return coeffs_[j]; }
  std::span<const double> values() const noexcept { return coeffs_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  /// Euclidean norm (the t = 0 scale norm).
  double norm() const;

  CoeffVector& operator+=(const CoeffVector& other);
  CoeffVector& operator-=(const CoeffVector& other);
  CoeffVector& operator*=(double factor);

  friend CoeffVector operator+(CoeffVector lhs, const CoeffVector& rhs) { return lhs += rhs; }
  friend CoeffVector operator-(CoeffVector lhs, const CoeffVector& rhs) { return lhs -= rhs; }
  friend CoeffVector operator*(double factor, CoeffVector v) { return v *= factor; }
  friend bool operator==(const CoeffVector&, const CoeffVector&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Eigenvalues l_j of the generator L with a lower bound gamma > 0.
class ScaleOperator {
 public:
  /// gamma defaults to min_j l_j.
  explicit ScaleOperator(std::vector<double> eigs);
  ScaleOperator(std::vector<double> eigs, double gamma);

  std::size_t size() const noexcept { return eigs_.size(); }
  double eig(std::size_t j) const { return eigs_[j]; }
  std::span<const double> eigs() const noexcept { return eigs_; }
  double gamma() const noexcept { return gamma_; }

  friend bool operator==(const ScaleOperator&, const ScaleOperator&) = default;

 private:
  std::vector<double> eigs_;
  double gamma_;
};

/// l^t evaluated as exp(t ln l); t = 0 gives exactly 1.
double real_power(double l, double t);

/// Throws DimensionError unless both sizes agree.
void require_same_size(std::size_t lhs, std::size_t rhs, const char* where);

/// L^t x, coefficientwise l_j^t x_j.
CoeffVector apply_power(const ScaleOperator& L, double t, const CoeffVector& x);

/// ||x||_t.
double scale_norm(const ScaleOperator& L, double t, const CoeffVector& x);

/// <x, y>_t = <L^t x, L^t y>.
double scale_inner(const ScaleOperator& L, double t, const CoeffVector& x, const CoeffVector& y);

}  // namespace hilscale
