#include "hilscale/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hilscale/errors.hpp"

namespace hilscale {

namespace {

void check_finite(const std::vector<double>& v) {
  if (v.empty()) throw PreconditionError("CoeffVector: need at least one coefficient");
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j])) {
      throw PreconditionError("CoeffVector: coefficient " + std::to_string(j) + " is not finite");
    }
  }
}

}  // namespace

CoeffVector::CoeffVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  check_finite(coeffs_);
}

CoeffVector::CoeffVector(std::initializer_list<double> coeffs) : coeffs_(coeffs) {
  check_finite(coeffs_);
}

CoeffVector CoeffVector::zeros(std::size_t n) { return CoeffVector(std::vector<double>(n, 0.0)); }

CoeffVector CoeffVector::unit(std::size_t n, std::size_t j) {
  if (j >= n) throw PreconditionError("CoeffVector::unit: index out of range");
  std::vector<double> v(n, 0.0);
  v[j] = 1.0;
  return CoeffVector(std::move(v));
}

double CoeffVector::norm() const {
  double sum = 0.0;
  for (double c : coeffs_) sum += c * c;
  return std::sqrt(sum);
}

CoeffVector& CoeffVector::operator+=(const CoeffVector& other) {
  require_same_size(size(), other.size(), "CoeffVector::operator+=");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += other.coeffs_[j];
  return *this;
}

CoeffVector& CoeffVector::operator-=(const CoeffVector& other) {
  require_same_size(size(), other.size(), "CoeffVector::operator-=");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= other.coeffs_[j];
  return *this;
}

CoeffVector& CoeffVector::operator*=(double factor) {
  for (double& c : coeffs_) c *= factor;
  return *this;
}

ScaleOperator::ScaleOperator(std::vector<double> eigs)
    : ScaleOperator(eigs, eigs.empty() ? 1.0 : *std::min_element(eigs.begin(), eigs.end())) {}

ScaleOperator::ScaleOperator(std::vector<double> eigs, double gamma)
    : eigs_(std::move(eigs)), gamma_(gamma) {
  if (eigs_.empty()) throw PreconditionError("ScaleOperator: no eigenvalues");
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
    throw PreconditionError("ScaleOperator: gamma must be a finite positive bound");
  }
  for (std::size_t j = 0; j < eigs_.size(); ++j) {
    if (!std::isfinite(eigs_[j]) || eigs_[j] < gamma_) {
      throw PreconditionError("ScaleOperator: eigenvalue " + std::to_string(j) +
                              " violates l_j >= gamma > 0");
    }
  }
}

double real_power(double l, double t) { return t == 0.0 ? 1.0 : std::exp(t * std::log(l)); }

void require_same_size(std::size_t lhs, std::size_t rhs, const char* where) {
  if (lhs != rhs) {
    throw DimensionError(std::string(where) + ": length mismatch (" + std::to_string(lhs) +
                         " vs " + std::to_string(rhs) + ")");
  }
}

CoeffVector apply_power(const ScaleOperator& L, double t, const CoeffVector& x) {
  require_same_size(L.size(), x.size(), "apply_power");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = real_power(L.eig(j), t) * x[j];
  return CoeffVector(std::move(out));
}

double scale_norm(const ScaleOperator& L, double t, const CoeffVector& x) {
  require_same_size(L.size(), x.size(), "scale_norm");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double v = real_power(L.eig(j), t) * x[j];
    sum += v * v;
  }
  return std::sqrt(sum);
}

double scale_inner(const ScaleOperator& L, double t, const CoeffVector& x, const CoeffVector& y) {
  require_same_size(L.size(), x.size(), "scale_inner");
  require_same_size(x.size(), y.size(), "scale_inner");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double w = real_power(L.eig(j), t);
    sum += (w * x[j]) * (w * y[j]);
  }
  return sum;
}

}  // namespace hilscale
