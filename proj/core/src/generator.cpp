// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/generator.hpp"

#include <random>

#include "coporeg/errors.hpp"

namespace coporeg {

namespace {

Eigen::MatrixXd from_upper(const Eigen::VectorXd& u, int p) {
  Eigen::MatrixXd m(p, p);
  int idx = 0;
  for (int k = 0; k < p; ++k) {
    for (int l = k; l < p; ++l) {
      m(k, l) = u(idx);
      m(l, k) = u(idx);
      ++idx;
    }
  }
  return m;
}

Eigen::MatrixXd scaled(Eigen::MatrixXd m) {
  const double s = m.cwiseAbs().maxCoeff();
  if (s > 0.0) m /= s;
  return m;
}

}  // namespace

CopositiveProgram generate_instance(std::uint64_t seed, int p, int n,
                                    const std::vector<SimplexPoint>& planted, int p_max) {
  if (p < 2 || p > p_max) throw GeneratorError("p must lie in [2, p_max]");
  if (n < 1) throw GeneratorError("n must be at least 1");
  for (const auto& t : planted) {
    if (t.dim() != p) throw GeneratorError("planted point dimension differs from p");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  const int dim = p * (p + 1) / 2;

  // Linear conditions (Dt)_k = 0, k in P_+(t), on upper-triangle coordinates.
  std::vector<Eigen::RowVectorXd> cons;
  for (const auto& t : planted) {
    for (int k : t.positive_support().to_vector()) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(dim);
      int idx = 0;
      for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) {
          if (a == k) r(idx) += t[b];
          if (b == k && a != b) r(idx) += t[a];
          ++idx;
        }
      }
      cons.push_back(r);
    }
  }
  Eigen::MatrixXd basis;
  if (cons.empty()) {
    basis = Eigen::MatrixXd::Identity(dim, dim);
  } else {
    Eigen::MatrixXd C(static_cast<Eigen::Index>(cons.size()), dim);
    for (std::size_t r = 0; r < cons.size(); ++r) C.row(static_cast<Eigen::Index>(r)) = cons[r];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > 1e-10 * std::max(1.0, s(0))) ++rank;
    }
    if (rank >= dim) throw GeneratorError("planting subspace is {0}");
    basis = svd.matrixV().rightCols(dim - rank);
  }

  std::vector<SymMatrix> mats;
  // A_0.
  if (planted.empty()) {
    mats.push_back(SymMatrix::identity(p));
  } else {
    Eigen::MatrixXd T(p, static_cast<Eigen::Index>(planted.size()));
    for (std::size_t j = 0; j < planted.size(); ++j) T.col(static_cast<Eigen::Index>(j)) = planted[j].vec();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullU);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) > 1e-10) ++rank;
    }
    const Eigen::MatrixXd U = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(p, p) - U * U.transpose();
    Eigen::MatrixXd G(p, p);
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) G(a, b) = gauss(rng);
    }
    const Eigen::MatrixXd PG = proj * G;
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(p, p);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    for (int a = 0; a < p; ++a) {
      for (int b = a; b < p; ++b) {
        bool shared = false;
        for (const auto& t : planted) {
          const IndexSet sp = t.positive_support();
          if (sp.contains(a) && sp.contains(b)) shared = true;
        }
        const double v = shared ? 0.0 : pos(rng);
        N(a, b) = v;
        N(b, a) = v;
      }
    }
    Eigen::MatrixXd a0 = PG * PG.transpose() + N;
    a0 = scaled(0.5 * (a0 + a0.transpose()));
    mats.emplace_back(a0);
  }
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd g(basis.cols());
    for (Eigen::Index r = 0; r < g.size(); ++r) g(r) = gauss(rng);
    Eigen::MatrixXd ai = scaled(from_upper(basis * g, p));
    mats.emplace_back(0.5 * (ai + ai.transpose()));
  }
  std::vector<double> c(static_cast<std::size_t>(n));
  for (auto& v : c) v = uni(rng);
  return CopositiveProgram(std::move(c), std::move(mats));
}

}  // namespace coporeg
