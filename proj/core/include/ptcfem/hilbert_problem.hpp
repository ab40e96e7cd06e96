#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>

namespace ptcfem {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

/// A finite-dimensional realization of a problem F(u) = 0 posed in a real
/// Hilbert space X. Vectors hold coefficients in a fixed basis; residual and
/// Jacobian applications return dual coefficients <.,phi_i>.
///
/// Implementations must be pure: no internal mutation during calls, so a
/// problem can be shared read-only across threads.
class HilbertProblem {
 public:
  virtual ~HilbertProblem() = default;

  virtual Eigen::Index dimension() const = 0;

  /// Dual coefficients <F(u), phi_i>.
  virtual Vec residual(const Vec& u) const = 0;

  /// Dual coefficients <F'(u) w, phi_i>; linear in w.
  virtual Vec jacobian_apply(const Vec& u, const Vec& w) const = 0;

  /// The X-inner product (a, b)_X; symmetric positive definite.
  virtual double inner_product(const Vec& a, const Vec& b) const = 0;

  /// Matrix of A[t;u]: x -> (x,.)_X - t <F'(u)x, .>. The default builds it
  /// column by column, which is fine for small dense backends; large
  /// problems override with a sparse assembly.
  virtual SpMat system_matrix(const Vec& u, double t) const;

  /// Gram matrix of the X-inner product, used for dual norms in
  /// diagnostics. Same column-probe default as system_matrix.
  virtual SpMat gram_matrix() const;

  /// Known coercivity constant mu(u0) with <F'(u0)v,v> <= -mu ||v||_X^2,
  /// when the backend can certify one. Used by the theory checks only.
  virtual std::optional<double> coercivity_constant(const Vec& u0) const {
    (void)u0;
    return std::nullopt;
  }

  /// Known Lipschitz constant of F', when available.
  virtual std::optional<double> lipschitz_constant() const {
    return std::nullopt;
  }

  double x_norm(const Vec& v) const;
};

}  // namespace ptcfem
