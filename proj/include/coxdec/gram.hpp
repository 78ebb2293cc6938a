#pragma once

// Gram matrices of outward face normals and their inertia.  Signature (3,1)
// with the right vertex links is the realizability certificate used
// throughout.

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "coxdec/minkowski.hpp"

namespace coxdec {

struct Signature {
  int positives = 0;
  int negatives = 0;
  int zeros = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

template <typename Derived>
Signature signature(const Eigen::MatrixBase<Derived>& g,
                    double tol = kTolAlgebraic) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  Signature s;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (std::abs(l) <= tol)
      ++s.zeros;
    else if (l > 0)
      ++s.positives;
    else
      ++s.negatives;
  }
  return s;
}

// Rank-4 factorization of a symmetric n x n Gram matrix with inertia
// (3,1,n-4): rows of the result are vectors in R^{3,1} whose Minkowski
// Gram matrix reproduces g.  Fails when the inertia is wrong.
inline bool lorentz_factorize(const Eigen::MatrixXd& g,
                              Eigen::Matrix<double, Eigen::Dynamic, 4>& rows,
                              double tol = kTolAlgebraic) {
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const auto& ev = es.eigenvalues();  // ascending
  Signature s;
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev[i]) <= tol)
      ++s.zeros;
    else if (ev[i] > 0)
      ++s.positives;
    else
      ++s.negatives;
  }
  if (s.positives != 3 || s.negatives != 1) return false;
  rows.resize(n, 4);
  // Negative eigenvalue is ev[0]; the three largest are the positive ones.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k)
      rows(i, k) = std::sqrt(ev[n - 3 + k]) * es.eigenvectors()(i, n - 3 + k);
    rows(i, 3) = std::sqrt(-ev[0]) * es.eigenvectors()(i, 0);
  }
  return true;
}

}  // namespace coxdec
