// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coporeg/tolerances.hpp"

namespace coporeg {

/// Dense symmetric p x p matrix. Symmetry is enforced when the matrix is
/// built; entries are averaged with their transpose, which leaves exactly
/// symmetric input bit-identical.
class SymMatrix {
 public:
  explicit SymMatrix(int p);
  explicit SymMatrix(const Eigen::MatrixXd& m, double sym_tol = 1e-12);

  static SymMatrix identity(int p);
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows,
                             double sym_tol = 1e-12);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  double operator()(int k, int l) const { return m_(k, l); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  std::vector<std::vector<double>> rows() const;

  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  struct Unchecked {};
  SymMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

/// Trace inner product A . B = trace(AB).
double inner(const SymMatrix& a, const SymMatrix& b);

/// Upper-triangle coordinates (k <= l, row-major) of a symmetric matrix.
Eigen::VectorXd upper_triangle(const SymMatrix& d);

/// Subset of P = {0, ..., p-1}; p <= 64.
class IndexSet {
 public:
  IndexSet() = default;
  static IndexSet from_bits(std::uint64_t bits) { IndexSet s; s.bits_ = bits; return s; }
  static IndexSet all(int p);
  static IndexSet of(std::initializer_list<int> ks);

  bool contains(int k) const { return (bits_ >> k) & 1u; }
  void insert(int k) { bits_ |= std::uint64_t{1} << k; }
  int size() const { return __builtin_popcountll(bits_); }
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }
  bool is_subset_of(const IndexSet& o) const { return (bits_ & ~o.bits_) == 0; }
  bool intersects(const IndexSet& o) const { return (bits_ & o.bits_) != 0; }
  IndexSet operator|(const IndexSet& o) const { return from_bits(bits_ | o.bits_); }
  IndexSet complement(int p) const { return from_bits(~bits_ & all(p).bits_); }
  std::vector<int> to_vector() const;
  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// A point of the standard simplex T = {t >= 0, e't = 1}.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> coords, double tol_feas = kDefaultTolFeas);

  static SimplexPoint vertex(int p, int k);
  static SimplexPoint barycenter(int p);
  /// Clamps tiny negative entries and renormalizes; for solver output that
  /// is on T up to rounding.
  static SimplexPoint project_rounded(const Eigen::VectorXd& v);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int k) const { return coords_[static_cast<std::size_t>(k)]; }
  std::span<const double> coords() const noexcept { return coords_; }
  Eigen::Map<const Eigen::VectorXd> vec() const {
    return {coords_.data(), static_cast<Eigen::Index>(coords_.size())};
  }

  /// P_+(t) = {k : t_k > tol}.
  IndexSet positive_support(double tol = kDefaultTolSupport) const;
  /// P_0(t), the complement of P_+(t).
  IndexSet zero_support(double tol = kDefaultTolSupport) const;

  double linf_distance(const SimplexPoint& o) const;
  double l1_distance(const SimplexPoint& o) const;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// Data (c, A_0, ..., A_n) of  min c'x  s.t.  A_0 + sum_i x_i A_i  copositive.
class CopositiveProgram {
 public:
  /// `matrices[0]` is A_0.
  CopositiveProgram(std::vector<double> c, std::vector<SymMatrix> matrices);

  int n() const noexcept { return static_cast<int>(c_.size()); }
  int p() const noexcept { return a_.front().dim(); }
  const std::vector<double>& c() const noexcept { return c_; }
  const SymMatrix& A(int i) const { return a_.at(static_cast<std::size_t>(i)); }
  const std::vector<SymMatrix>& matrices() const noexcept { return a_; }

  friend bool operator==(const CopositiveProgram&, const CopositiveProgram&) = default;

 private:
  std::vector<double> c_;
  std::vector<SymMatrix> a_;
};

/// Decision vector x, plus the SIP slack mu when one is attached.
struct DecisionPoint {
  std::vector<double> x;
  std::optional<double> mu;
};

/// A(x) = A_0 + sum_i x_i A_i.
SymMatrix eval_constraint(const CopositiveProgram& prog, std::span<const double> x);

/// t' D t.
double quad_form(const SymMatrix& d, const SimplexPoint& t);

/// e_k' D t, k zero-based.
double row_action(const SymMatrix& d, const SimplexPoint& t, int k);

/// dim Ker A, where Ker A = {D in S(p) : A_j . D = 0, j = 0..n}.
int ker_dimension(const CopositiveProgram& prog, double tol_rank = kDefaultTolRank);

/// Rank of the rows of `m` by Gaussian elimination with complete pivoting.
/// Each row is scaled to unit max-norm first, so the result does not depend
/// on row scaling.
int numerical_rank(Eigen::MatrixXd m, double tol = kDefaultTolRank);

/// Substitutes x = z + y: returns the program in z whose constant term is
/// A(y). The objective vector is unchanged.
CopositiveProgram shift_problem(const CopositiveProgram& prog, std::span<const double> y);

}  // namespace coporeg
