#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "szabo/expr.hpp"
#include "szabo/smallnum.hpp"

namespace szabo {

// Multi-index array of scalars at a point with declared index variances.
class TensorValues {
 public:
  enum class Variance { Up, Down };

  TensorValues(int dim, std::vector<Variance> variance);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const { return variance_; }

  template <class... I>
  double operator()(I... idx) const {
    return v_[flat(idx...)];
  }
  template <class... I>
  double& operator()(I... idx) {
    return v_[flat(idx...)];
  }

  double max_abs() const;

  /// max |T(..a..b..) + T(..b..a..)| over all indices, for slot pair (a,b).
  double antisymmetry_residual(int slot_a, int slot_b) const;

 private:
  template <class... I>
  std::size_t flat(I... idx) const {
    const int ix[] = {static_cast<int>(idx)...};
    std::size_t f = 0;
    for (int v : ix) f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(v);
    return f;
  }

  int dim_;
  std::vector<Variance> variance_;
  std::vector<double> v_;
};

/// Tangent vector X = sum_i a[i] d_i in chart coordinates.
struct Direction {
  std::vector<double> a;
  Direction() = default;
  Direction(std::initializer_list<double> c) : a(c) {}
  explicit Direction(std::vector<double> c) : a(std::move(c)) {}
  double norm() const;
  bool is_zero() const;
};

struct ChristoffelEntry {
  int k, i, j;  // Gamma^k_{ij}, 0-based
  Expression expr;
};

// Torsion-free affine connection on an n-chart, n in {2,3,4}. Christoffel
// symbols are expressions; the symbolic towers needed downstream
// (dGamma, curvature components, their derivatives, Ricci, dRicci) are
// built once at construction, so instances are immutable and cheap to
// evaluate at many points.
//
// Conventions (fixed so that the n = 2 component formulas reproduce the
// classical surface display; see convention_self_test):
//   curvature_at:  value (h,i,j,k) = coefficient of d_h in R(d_i,d_j)d_k,
//                  R^h_{.ijk} = d_i G^h_{jk} - d_j G^h_{ik}
//                             + G^l_{jk} G^h_{il} - G^l_{ik} G^h_{jl}
//   ricci_at:      rho_{ab} = sum_h (h,h,a,b)   [trace over the first slot]
//   nabla_curvature_at: value (m,h,i,j,k) = (nabla_m R)^h with R-slots (i,j,k)
//   szabo_operator: matrix entry (y,h) = coefficient of d_h in S(X) d_y
//                  (row = input basis vector), so for surfaces the matrix is
//                  exactly [[A,B],[C,D]] of the closed form.
class AffineConnection {
 public:
  AffineConnection(int n, Coords coords, std::vector<ChristoffelEntry> symbols);

  int dimension() const { return n_; }
  const Coords& coords() const { return coords_; }
  const Expression& christoffel(int k, int i, int j) const;
  std::vector<Expression> nonzero_symbols() const;

  TensorValues curvature_at(const Point& p) const;
  TensorValues ricci_at(const Point& p) const;
  TensorValues nabla_curvature_at(const Point& p) const;
  /// (i,j,k) -> (nabla_i rho)_{jk}
  TensorValues nabla_ricci_at(const Point& p) const;

  Matrix szabo_operator(const Point& p, const Direction& x) const;
  /// Surface closed form [[A,B],[C,D]] (n = 2 only); cubic in the direction.
  Matrix szabo_surface_closed_form(const Point& p, const Direction& x) const;

  const Expression& ricci_expr(int a, int b) const;
  const Expression& curvature_expr(int h, int i, int j, int k) const;

 private:
  std::size_t g3(int k, int i, int j) const;

  int n_;
  Coords coords_;
  std::vector<Expression> gamma_;   // [k][i][j]
  std::vector<Expression> dgamma_;  // [l][k][i][j] = d_l Gamma^k_{ij}
  std::vector<Expression> curv_;    // [h][i][j][k]
  std::vector<Expression> dcurv_;   // [m][h][i][j][k]
  std::vector<Expression> rho_;     // [a][b]
  std::vector<Expression> drho_;    // [i][a][b] = d_i rho_{ab}
};

/// Contracts an evaluated (1,4) tensor (layout of nabla_curvature_at) with
/// a direction: entry (y,h) = sum_{ijk} x_i x_j x_k NR(i,h,y,j,k).
Matrix szabo_contract(const TensorValues& nabla_r, const std::vector<double>& x);

// --- classification / verdicts -------------------------------------------

/// lambda^n criterion over sampled (point, unit direction) pairs.
Verdict is_affine_szabo(const AffineConnection& c, const SampleDomain& d);

struct RicciClassification {
  enum class Kind { Skew, Symmetric, Mixed };
  Kind kind = Kind::Mixed;
  bool nonzero_everywhere = false;
  double skew_residual = 0.0;       // max scaled over samples
  double symmetric_residual = 0.0;  // max scaled over samples
  int samples = 0;
};
std::string to_string(RicciClassification::Kind k);

RicciClassification ricci_symmetry_classify(const AffineConnection& c,
                                            const SampleDomain& d);

/// Cyclic symmetrization (nabla_i rho)_{jk} + (nabla_j rho)_{ki}
/// + (nabla_k rho)_{ij} tested over all triples at all samples.
Verdict is_cyclic_parallel(const AffineConnection& c, const SampleDomain& d);

/// Connection with exactly Gamma^1_{11} = -d_1 phi, Gamma^2_{22} = d_2 phi.
AffineConnection wong_connection(const Expression& phi);

enum class RecurrenceStatus { Recurrent, NotRecurrent, ZeroNablaRho };
std::string to_string(RecurrenceStatus s);

// Per-sample least-squares solve of (nabla_i rho)_{jk} = alpha_i rho_{jk}.
struct RecurrenceResult {
  RecurrenceStatus status = RecurrenceStatus::NotRecurrent;
  double residual = 0.0;          // max scaled consistency deviation
  std::vector<Point> points;      // accepted samples
  std::vector<std::vector<double>> alphas;  // covector per accepted sample
  int skipped_degenerate = 0;     // samples with rho ~ 0
  double tol = 0.0;
  std::uint64_t seed = 0;
};

RecurrenceResult recurrence_covector(const AffineConnection& c,
                                     const SampleDomain& d);

// Finite-difference curl of the recurrence covector field; the
// "not locally a gradient" claim is asserted only on samples with
// ||alpha|| >= tol, and requires |curl| >= 10 tol everywhere there.
struct ClosednessResult {
  double min_abs_curl = 0.0;
  double max_abs_curl = 0.0;
  int used = 0;      // samples entering the verdict
  int skipped = 0;   // degenerate or ||alpha|| < tol
  bool not_a_gradient = false;
};

ClosednessResult covector_closedness(const AffineConnection& c,
                                     const SampleDomain& d);

// The R^2 family nabla_{d1} d1 = f1(u1) d2, nabla_{d1} d2 = f2(u1) d2;
// affine Szabo exactly when b = d1 f2 + f2^2 is constant.
struct ExampleFamilySpec {
  Expression f1, f2;

  Expression b() const;
  AffineConnection connection() const;
  /// Samples d1 b and d2 b; true iff both vanish within d.tol.
  std::pair<bool, double> b_constant(const SampleDomain& d) const;
};

/// Asserts the fixed sign conventions against the classical n = 2 component
/// formulas on a generic polynomial connection. Returns max residual.
double convention_self_test();

}  // namespace szabo
