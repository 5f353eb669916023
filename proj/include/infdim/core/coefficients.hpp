#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>

#include "infdim/core/types.hpp"

namespace infdim {

using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

/// Finite complex coefficient vector relative to a declared basis.
///
/// `origin` is the index carried by the first entry (1 for bases indexed by
/// the naturals, -K for a symmetric window of an integer-indexed basis).
/// Arithmetic is only defined between vectors sharing basis tag and origin.
class Coefficients {
 public:
  Coefficients() = default;
  Coefficients(DenseVector values, long origin, std::string basis_tag)
      : values_(std::move(values)), origin_(origin), tag_(std::move(basis_tag)) {}

  static Coefficients zeros(Eigen::Index n, long origin, std::string basis_tag) {
    return Coefficients(DenseVector::Zero(n), origin, std::move(basis_tag));
  }

  const DenseVector& values() const { return values_; }
  long origin() const { return origin_; }
  const std::string& basis_tag() const { return tag_; }
  Eigen::Index size() const { return values_.size(); }

  /// Entry carrying basis index `index` (so `at(origin())` is the first one).
  Complex at(long index) const {
    const long k = index - origin_;
    if (k < 0 || k >= static_cast<long>(values_.size())) {
      throw InvalidArgument("coefficient index " + std::to_string(index) + " out of range");
    }
    return values_[k];
  }

  double norm() const { return values_.norm(); }
  double squared_norm() const { return values_.squaredNorm(); }

  Coefficients& operator+=(const Coefficients& o) {
    check_compatible(o);
    values_ += o.values_;
    return *this;
  }
  Coefficients& operator-=(const Coefficients& o) {
    check_compatible(o);
    values_ -= o.values_;
    return *this;
  }
  Coefficients& operator*=(Complex s) {
    values_ *= s;
    return *this;
  }

  friend Coefficients operator+(Coefficients l, const Coefficients& r) { return l += r; }
  friend Coefficients operator-(Coefficients l, const Coefficients& r) { return l -= r; }
  friend Coefficients operator*(Complex s, Coefficients c) { return c *= s; }

  /// Sesquilinear product, conjugate-linear in the left argument.
  friend Complex dot(const Coefficients& l, const Coefficients& r) {
    l.check_compatible(r);
    return l.values_.dot(r.values_);
  }

 private:
  void check_compatible(const Coefficients& o) const {
    if (tag_ != o.tag_ || origin_ != o.origin_) {
      throw SpaceMismatch("coefficients refer to different bases ('" + tag_ + "'@" +
                          std::to_string(origin_) + " vs '" + o.tag_ + "'@" +
                          std::to_string(o.origin_) + ")");
    }
    if (values_.size() != o.values_.size()) {
      throw SpaceMismatch("coefficient vectors differ in length");
    }
  }

  DenseVector values_;
  long origin_ = 1;
  std::string tag_;
};

}  // namespace infdim
