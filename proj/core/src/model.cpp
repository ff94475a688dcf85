// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/model.hpp"

#include <cmath>
#include <numeric>

#include "coporeg/errors.hpp"

namespace coporeg {

SymMatrix::SymMatrix(int p) : m_(Eigen::MatrixXd::Zero(p, p)) {
  if (p < 1) throw InputError("matrix dimension must be positive");
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m, double sym_tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InputError("matrix must be square and nonempty");
  }
  const auto p = m.rows();
  for (Eigen::Index k = 0; k < p; ++k) {
    for (Eigen::Index l = k + 1; l < p; ++l) {
      if (!(std::abs(m(k, l) - m(l, k)) <= sym_tol)) {
        throw InputError("matrix not symmetric at (" + std::to_string(k) + ", " +
                         std::to_string(l) + ")");
      }
    }
  }
  m_ = m;
  for (Eigen::Index k = 0; k < p; ++k) {
    for (Eigen::Index l = k + 1; l < p; ++l) {
      if (m_(k, l) != m_(l, k)) {
        const double avg = 0.5 * (m_(k, l) + m_(l, k));
        m_(k, l) = avg;
        m_(l, k) = avg;
      }
    }
  }
}

SymMatrix SymMatrix::identity(int p) {
  if (p < 1) throw InputError("matrix dimension must be positive");
  return SymMatrix(Eigen::MatrixXd::Identity(p, p), Unchecked{});
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                               double sym_tol) {
  const auto p = static_cast<Eigen::Index>(rows.size());
  if (p == 0) throw InputError("matrix must be nonempty");
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(k)].size()) != p) {
      throw InputError("matrix row " + std::to_string(k) + " has wrong length");
    }
    for (Eigen::Index l = 0; l < p; ++l) {
      m(k, l) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
    }
  }
  return SymMatrix(m, sym_tol);
}

std::vector<std::vector<double>> SymMatrix::rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(dim()));
  for (int k = 0; k < dim(); ++k) {
    out[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(dim()));
    for (int l = 0; l < dim(); ++l) out[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = m_(k, l);
  }
  return out;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim() != dim()) throw InputError("matrix dimension mismatch");
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InputError("matrix dimension mismatch");
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

Eigen::VectorXd upper_triangle(const SymMatrix& d) {
  const int p = d.dim();
  Eigen::VectorXd v(p * (p + 1) / 2);
  Eigen::Index idx = 0;
  for (int k = 0; k < p; ++k) {
    for (int l = k; l < p; ++l) v(idx++) = d(k, l);
  }
  return v;
}

IndexSet IndexSet::all(int p) {
  if (p < 0 || p > 64) throw InputError("index set dimension must be in [0, 64]");
  return from_bits(p == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p) - 1);
}

IndexSet IndexSet::of(std::initializer_list<int> ks) {
  IndexSet s;
  for (int k : ks) s.insert(k);
  return s;
}

std::vector<int> IndexSet::to_vector() const {
  std::vector<int> out;
  for (int k = 0; k < 64; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

SimplexPoint::SimplexPoint(std::vector<double> coords, double tol_feas)
    : coords_(std::move(coords)) {
  if (coords_.empty()) throw InputError("simplex point must be nonempty");
  if (coords_.size() > 64) throw InputError("simplex dimension exceeds 64");
  double sum = 0.0;
  for (double v : coords_) {
    if (!std::isfinite(v) || v < -tol_feas) {
      throw InputError("simplex point has a negative or non-finite coordinate");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol_feas) {
    throw InputError("simplex point coordinates do not sum to 1");
  }
}

SimplexPoint SimplexPoint::vertex(int p, int k) {
  if (k < 0 || k >= p) throw InputError("vertex index out of range");
  std::vector<double> c(static_cast<std::size_t>(p), 0.0);
  c[static_cast<std::size_t>(k)] = 1.0;
  return SimplexPoint(std::move(c));
}

SimplexPoint SimplexPoint::barycenter(int p) {
  if (p < 1) throw InputError("simplex dimension must be positive");
  return SimplexPoint(std::vector<double>(static_cast<std::size_t>(p), 1.0 / p));
}

SimplexPoint SimplexPoint::project_rounded(const Eigen::VectorXd& v) {
  std::vector<double> c(static_cast<std::size_t>(v.size()));
  double sum = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    c[static_cast<std::size_t>(k)] = std::max(0.0, v(k));
    sum += c[static_cast<std::size_t>(k)];
  }
  if (!(sum > 0.0)) throw InputError("cannot normalize a nonpositive vector onto the simplex");
  for (double& x : c) x /= sum;
  return SimplexPoint(std::move(c));
}

IndexSet SimplexPoint::positive_support(double tol) const {
  IndexSet s;
  for (int k = 0; k < dim(); ++k) {
    if (coords_[static_cast<std::size_t>(k)] > tol) s.insert(k);
  }
  return s;
}

IndexSet SimplexPoint::zero_support(double tol) const {
  return positive_support(tol).complement(dim());
}

double SimplexPoint::linf_distance(const SimplexPoint& o) const {
  if (o.dim() != dim()) throw InputError("simplex point dimension mismatch");
  double d = 0.0;
  for (int k = 0; k < dim(); ++k) d = std::max(d, std::abs((*this)[k] - o[k]));
  return d;
}

double SimplexPoint::l1_distance(const SimplexPoint& o) const {
  if (o.dim() != dim()) throw InputError("simplex point dimension mismatch");
  double d = 0.0;
  for (int k = 0; k < dim(); ++k) d += std::abs((*this)[k] - o[k]);
  return d;
}

CopositiveProgram::CopositiveProgram(std::vector<double> c, std::vector<SymMatrix> matrices)
    : c_(std::move(c)), a_(std::move(matrices)) {
  if (c_.empty()) throw InputError("problem needs n >= 1 decision variables");
  if (a_.size() != c_.size() + 1) {
    throw InputError("expected " + std::to_string(c_.size() + 1) + " matrices A_0..A_n, got " +
                     std::to_string(a_.size()));
  }
  const int p = a_.front().dim();
  if (p < 2) throw InputError("problem needs matrix dimension p >= 2");
  for (std::size_t i = 1; i < a_.size(); ++i) {
    if (a_[i].dim() != p) {
      throw InputError("matrix A_" + std::to_string(i) + " has dimension " +
                       std::to_string(a_[i].dim()) + ", expected " + std::to_string(p));
    }
  }
}

SymMatrix eval_constraint(const CopositiveProgram& prog, std::span<const double> x) {
  if (static_cast<int>(x.size()) != prog.n()) {
    throw InputError("decision vector has length " + std::to_string(x.size()) +
                     ", expected " + std::to_string(prog.n()));
  }
  SymMatrix out = prog.A(0);
  for (int i = 0; i < prog.n(); ++i) {
    if (x[static_cast<std::size_t>(i)] != 0.0) out += x[static_cast<std::size_t>(i)] * prog.A(i + 1);
  }
  return out;
}

double quad_form(const SymMatrix& d, const SimplexPoint& t) {
  if (d.dim() != t.dim()) throw InputError("quad_form dimension mismatch");
  return t.vec().dot(d.matrix() * t.vec());
}

double row_action(const SymMatrix& d, const SimplexPoint& t, int k) {
  if (d.dim() != t.dim()) throw InputError("row_action dimension mismatch");
  if (k < 0 || k >= d.dim()) throw InputError("row index out of range");
  return d.matrix().row(k).dot(t.vec());
}

int numerical_rank(Eigen::MatrixXd m, double tol) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double s = m.row(r).cwiseAbs().maxCoeff();
    if (s > 0.0) m.row(r) /= s;
  }
  int rank = 0;
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  for (Eigen::Index step = 0; step < std::min(rows, cols); ++step) {
    Eigen::Index pr = step, pc = step;
    double best = 0.0;
    for (Eigen::Index r = step; r < rows; ++r) {
      for (Eigen::Index c = step; c < cols; ++c) {
        if (std::abs(m(r, c)) > best) {
          best = std::abs(m(r, c));
          pr = r;
          pc = c;
        }
      }
    }
    if (best <= tol) break;
    m.row(step).swap(m.row(pr));
    m.col(step).swap(m.col(pc));
    for (Eigen::Index r = step + 1; r < rows; ++r) {
      const double f = m(r, step) / m(step, step);
      if (f != 0.0) m.row(r).tail(cols - step) -= f * m.row(step).tail(cols - step);
    }
    ++rank;
  }
  return rank;
}

int ker_dimension(const CopositiveProgram& prog, double tol_rank) {
  const int p = prog.p();
  const int dim = p * (p + 1) / 2;
  // Functional D -> A_j . D in upper-triangle coordinates: off-diagonal
  // entries appear twice in the trace.
  Eigen::MatrixXd f(prog.n() + 1, dim);
  for (int j = 0; j <= prog.n(); ++j) {
    int idx = 0;
    for (int k = 0; k < p; ++k) {
      for (int l = k; l < p; ++l) {
        f(j, idx++) = (k == l ? 1.0 : 2.0) * prog.A(j)(k, l);
      }
    }
  }
  return dim - numerical_rank(std::move(f), tol_rank);
}

CopositiveProgram shift_problem(const CopositiveProgram& prog, std::span<const double> y) {
  std::vector<SymMatrix> a = prog.matrices();
  a[0] = eval_constraint(prog, y);
  return CopositiveProgram(prog.c(), std::move(a));
}

}  // namespace coporeg
