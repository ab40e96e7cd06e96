#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>

#include "ptcfem/hilbert_problem.hpp"

// Small dense backends used to exercise the PTC machinery without any FEM
// machinery in the loop, plus dense linear-algebra oracles.
namespace ptcfem_tests {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// F(u) = b - M u with symmetric M, inner product (a,b)_X = a^T G b.
class DenseLinearProblem final : public ptcfem::HilbertProblem {
 public:
  DenseLinearProblem(MatrixXd m, VectorXd b,
                     std::optional<MatrixXd> gram = std::nullopt)
      : m_(std::move(m)),
        b_(std::move(b)),
        gram_(gram ? std::move(*gram)
                   : MatrixXd::Identity(m_.rows(), m_.cols())) {}

  Eigen::Index dimension() const override { return m_.rows(); }
  ptcfem::Vec residual(const ptcfem::Vec& u) const override {
    return b_ - m_ * u;
  }
  ptcfem::Vec jacobian_apply(const ptcfem::Vec& u,
                             const ptcfem::Vec& w) const override {
    (void)u;
    return -(m_ * w);
  }
  double inner_product(const ptcfem::Vec& a,
                       const ptcfem::Vec& b) const override {
    return a.dot(gram_ * b);
  }
  ptcfem::SpMat system_matrix(const ptcfem::Vec& u, double t) const override {
    (void)u;
    return MatrixXd(gram_ + t * m_).sparseView();
  }
  ptcfem::SpMat gram_matrix() const override { return gram_.sparseView(); }

  std::optional<double> coercivity_constant(
      const ptcfem::Vec& u0) const override {
    (void)u0;
    // Smallest generalized eigenvalue of M v = lambda G v.
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> eig(m_, gram_);
    const double lambda_min = eig.eigenvalues().minCoeff();
    if (!(lambda_min > 0.0)) return std::nullopt;
    return lambda_min;
  }
  std::optional<double> lipschitz_constant() const override { return 0.0; }

  const MatrixXd& m() const { return m_; }
  const MatrixXd& gram() const { return gram_; }

 private:
  MatrixXd m_;
  VectorXd b_;
  MatrixXd gram_;
};

/// F(u) = b - M u - c (u o u) under the Euclidean inner product.
class DenseQuadraticProblem final : public ptcfem::HilbertProblem {
 public:
  DenseQuadraticProblem(MatrixXd m, VectorXd b, double c)
      : m_(std::move(m)), b_(std::move(b)), c_(c) {}

  Eigen::Index dimension() const override { return m_.rows(); }
  ptcfem::Vec residual(const ptcfem::Vec& u) const override {
    return b_ - m_ * u - c_ * u.cwiseProduct(u);
  }
  ptcfem::Vec jacobian_apply(const ptcfem::Vec& u,
                             const ptcfem::Vec& w) const override {
    return -(m_ * w) - 2.0 * c_ * u.cwiseProduct(w);
  }
  double inner_product(const ptcfem::Vec& a,
                       const ptcfem::Vec& b) const override {
    return a.dot(b);
  }
  ptcfem::SpMat system_matrix(const ptcfem::Vec& u, double t) const override {
    MatrixXd a = MatrixXd::Identity(m_.rows(), m_.cols()) + t * m_;
    a.diagonal() += 2.0 * t * c_ * u;
    return a.sparseView();
  }
  ptcfem::SpMat gram_matrix() const override {
    return MatrixXd::Identity(m_.rows(), m_.cols()).sparseView();
  }

  std::optional<double> coercivity_constant(
      const ptcfem::Vec& u0) const override {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m_);
    const double mu = eig.eigenvalues().minCoeff() -
                      2.0 * c_ * u0.cwiseAbs().maxCoeff();
    if (!(mu > 0.0)) return std::nullopt;
    return mu;
  }
  std::optional<double> lipschitz_constant() const override {
    return 2.0 * c_;
  }

  MatrixXd dense_jacobian(const ptcfem::Vec& u) const {
    MatrixXd j = -m_;
    j.diagonal() -= 2.0 * c_ * u;
    return j;
  }

 private:
  MatrixXd m_;
  VectorXd b_;
  double c_;
};

/// Seeded SPD matrix with smallest eigenvalue >= floor.
inline MatrixXd random_spd(int n, std::mt19937& rng, double floor = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  const MatrixXd spd = a * a.transpose();
  return spd + floor * MatrixXd::Identity(n, n);
}

inline VectorXd random_vector(int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

/// Dense oracle: ||A^{-1}||_{L(X';X)} = 1 / sigma_min(G^{-1/2} A G^{-1/2}).
inline double inverse_operator_norm_x(const MatrixXd& a, const MatrixXd& gram) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  const MatrixXd gram_inv_sqrt =
      eig.eigenvectors() *
      eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  Eigen::JacobiSVD<MatrixXd> svd(gram_inv_sqrt * a * gram_inv_sqrt);
  return 1.0 / svd.singularValues().minCoeff();
}

}  // namespace ptcfem_tests
