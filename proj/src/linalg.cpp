#include "spikelab/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace spikelab {

namespace {

template <typename Matrix>
void check_hermitian(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermitian_eigs: matrix is not square");
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-10 * scale)
    throw std::invalid_argument("hermitian_eigs: matrix is not Hermitian");
}

template <typename Matrix>
EigenSample eigs_impl(const Matrix& a) {
  check_hermitian(a);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigs: eigensolver failed");
  EigenSample out;
  const auto& v = solver.eigenvalues();
  out.values.assign(v.data(), v.data() + v.size());
  std::reverse(out.values.begin(), out.values.end());
  return out;
}

}  // namespace

EigenSample hermitian_eigs(const Eigen::MatrixXd& a) { return eigs_impl(a); }
EigenSample hermitian_eigs(const Eigen::MatrixXcd& a) { return eigs_impl(a); }

EigenPairs hermitian_eigs_with_vectors(const Eigen::MatrixXd& a) {
  check_hermitian(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigs: eigensolver failed");
  EigenPairs out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ResolventStats resolvent_stats(const Eigen::MatrixXd& x2, double lambda) {
  const int p = static_cast<int>(x2.rows());
  const int n = static_cast<int>(x2.cols());

  Eigen::MatrixXd s22 = Eigen::MatrixXd::Zero(p, p);
  s22.selfadjointView<Eigen::Lower>().rankUpdate(x2);
  s22.triangularView<Eigen::StrictlyUpper>() =
      s22.triangularView<Eigen::StrictlyLower>().transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s22);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("resolvent_stats: eigensolver failed");
  const Eigen::VectorXd beta = solver.eigenvalues();
  if (lambda >= beta.minCoeff() && lambda <= beta.maxCoeff())
    throw std::invalid_argument(
        "resolvent_stats: lambda lies inside the spectrum of X2 X2^*");

  ResolventStats out{};
  for (int j = 0; j < p; ++j) {
    const double d = lambda - beta[j];
    out.tr_a_over_n += beta[j] / d;
    out.tr_aa_over_n += beta[j] * beta[j] / (d * d);
  }
  out.tr_a_over_n /= n;
  out.tr_aa_over_n /= n;

  // a_ii = eta_i^* (lambda I - X2 X2^*)^-1 eta_i / n with eta_i = sqrt(n) x2_i
  const Eigen::MatrixXd w = solver.eigenvectors().transpose() * x2;  // p x n
  const Eigen::VectorXd inv = (lambda - beta.array()).inverse().matrix();
  for (int i = 0; i < n; ++i) {
    const double aii = w.col(i).array().square().matrix().dot(inv);
    out.sum_aii_sq_over_n += aii * aii;
  }
  out.sum_aii_sq_over_n /= n;
  return out;
}

}  // namespace spikelab
