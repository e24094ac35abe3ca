#include "loewner/grunsky.hpp"

#include <Eigen/Eigenvalues>

namespace loewner {

namespace {

Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& Z) {
  Eigen::MatrixXcd gram = Z.adjoint() * Z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

} // namespace

double siegel_gap(const SiegelPoint& point) {
  if (point.Z.size() == 0) return 1.0;
  return 1.0 - gram_eigenvalues(point.Z).maxCoeff();
}

SiegelReport siegel_check(const SiegelPoint& point) {
  SiegelReport rep;
  const auto& Z = point.Z;
  double scale = std::max(1.0, Z.norm());
  rep.symmetric = (Z - Z.transpose()).norm() <= 1e-12 * scale;
  if (Z.size() == 0) {
    rep.spectral_gap = 1.0;
    return rep;
  }
  Eigen::VectorXd lambda = gram_eigenvalues(Z);
  rep.spectral_gap = 1.0 - lambda.maxCoeff();
  if (rep.spectral_gap <= 1e-12)
    fail(ErrorKind::NotInDisc, "operator norm of Z reaches 1 (gap " + std::to_string(rep.spectral_gap) + ")");
  for (int i = 0; i < lambda.size(); ++i) rep.kahler_potential -= std::log1p(-std::max(0.0, lambda(i)));
  return rep;
}

} // namespace loewner
