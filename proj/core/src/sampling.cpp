// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/sampling.hpp"

#include "coporeg/errors.hpp"

namespace coporeg {

CopositiveSampler::CopositiveSampler(int p, std::uint64_t seed) : p_(p), rng_(seed) {
  if (p < 1) throw InputError("sampler dimension must be positive");
}

SymMatrix CopositiveSampler::combine(Eigen::MatrixXd n, const Eigen::MatrixXd& g) {
  Eigen::MatrixXd d = g * g.transpose() + n;
  d = 0.5 * (d + d.transpose()).eval();
  const double s = d.cwiseAbs().maxCoeff();
  if (s > 0.0) d /= s;
  return SymMatrix(d);
}

SymMatrix CopositiveSampler::any() {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(p_, p_);
  const double density = u(rng_);
  for (int k = 0; k < p_; ++k) {
    for (int l = k; l < p_; ++l) {
      if (u(rng_) < density) n(k, l) = n(l, k) = u(rng_);
    }
  }
  const int r = std::uniform_int_distribution<int>(0, p_)(rng_);
  Eigen::MatrixXd g(p_, r);
  for (int a = 0; a < p_; ++a) {
    for (int b = 0; b < r; ++b) g(a, b) = z(rng_);
  }
  return combine(std::move(n), g);
}

SymMatrix CopositiveSampler::on_face(const std::vector<FaceConstraint>& face) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(p_, p_);
  const double density = 0.3 + 0.7 * u(rng_);
  for (int k = 0; k < p_; ++k) {
    for (int l = k; l < p_; ++l) {
      if (u(rng_) < density) n(k, l) = n(l, k) = u(rng_);
    }
  }
  Eigen::MatrixXd t(p_, static_cast<Eigen::Index>(face.size()));
  for (std::size_t j = 0; j < face.size(); ++j) {
    const auto& fc = face[j];
    if (fc.t.dim() != p_) throw InputError("face point dimension mismatch");
    t.col(static_cast<Eigen::Index>(j)) = fc.t.vec();
    const IndexSet pos = fc.t.positive_support();
    for (int k : fc.zero_rows.to_vector()) {
      for (int l : pos.to_vector()) n(k, l) = n(l, k) = 0.0;
    }
  }
  // Gram factor orthogonal to the span of the points.
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(p_, p_);
  if (t.cols() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullU);
    const auto rank = (svd.singularValues().array() > 1e-12).count();
    const Eigen::MatrixXd u1 = svd.matrixU().leftCols(rank);
    proj -= u1 * u1.transpose();
  }
  const int r = std::uniform_int_distribution<int>(0, p_)(rng_);
  Eigen::MatrixXd g(p_, r);
  for (int a = 0; a < p_; ++a) {
    for (int b = 0; b < r; ++b) g(a, b) = z(rng_);
  }
  g = proj * g;
  return combine(std::move(n), g);
}

}  // namespace coporeg
