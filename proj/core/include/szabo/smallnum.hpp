#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "szabo/expr.hpp"

namespace szabo {

// Dense square matrix, n in {2,3,4}, row-major. For operator matrices the
// project-wide orientation is entry (i,j) = coefficient of d_j in T(d_i),
// i.e. row i holds the image of the i-th basis vector.
class Matrix {
 public:
  explicit Matrix(int n);
  static Matrix identity(int n);

  int dim() const { return n_; }
  double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r * n_ + c)]; }
  double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r * n_ + c)]; }

  Matrix operator*(const Matrix&) const;
  Matrix operator+(const Matrix&) const;
  Matrix operator-(const Matrix&) const;
  Matrix operator*(double) const;
  Matrix transpose() const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

 private:
  int n_;
  std::array<double, 16> a_{};
};

/// Monic characteristic polynomial lambda^n + c[0] lambda^(n-1) + ... + c[n-1].
struct CharPoly {
  int n = 0;
  std::array<double, 8> c{};

  double coeff(int k) const { return c[static_cast<std::size_t>(k - 1)]; }  // c_k, 1-based
};

/// Faddeev-LeVerrier recursion; for n = 2 the result is exactly
/// (-trace, determinant).
CharPoly char_poly(const Matrix& m);

/// Product of two monic polynomials (degree adds); used for the
/// P[S~] = P[S] . P[tS] coefficient check.
CharPoly char_poly_product(const CharPoly& p, const CharPoly& q);

struct NilpotencyResult {
  bool nilpotent = false;
  double residual = 0.0;  // max_k |c_k| / max(1, ||m||_F)^k
};

/// Nilpotency from characteristic-polynomial coefficients: true iff
/// |c_k| <= tol * max(1, ||m||_F)^k for every k.
NilpotencyResult is_nilpotent(const Matrix& m, double tol);

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations
/// (used for signature counting).
std::vector<double> symmetric_eigenvalues(const Matrix& m);

/// Signature (positive count, negative count) of a symmetric matrix.
std::pair<int, int> signature(const Matrix& m, double tol = 1e-10);

/// Gaussian-elimination inverse with partial pivoting. Test-oracle grade;
/// the extension metric uses its exact block inverse instead.
Matrix gauss_inverse(const Matrix& m);

/// Central finite difference with Richardson extrapolation (steps h, h/2),
/// accuracy O(h^4). order 1 -> d_i f, order 2 -> d_i^2 f.
double fd_partial(const std::function<double(const Point&)>& f, Point p,
                  int i, int order, double h = 1e-2);

/// Coordinate box with sampling parameters. `tol` is the relative tolerance
/// carried into every verdict derived from this domain.
struct SampleDomain {
  std::vector<std::pair<double, double>> box;
  int count = 200;
  std::uint64_t seed = 0xC0FFEE;
  double tol = 1e-8;
};

// Deterministic 64-bit stream: std::mt19937_64 with the explicit
// (x >> 11) * 2^-53 mapping to [0,1), so sequences are identical on every
// platform (std::uniform_real_distribution is not portable).
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::vector<double> unit_direction(int n);  // uniform on the unit sphere

 private:
  std::mt19937_64 gen_;
};

/// Deterministic uniform samples in the box; points where `finite_guard`
/// rejects (non-finite declared expressions, within margin 1e-6 of a
/// singular coordinate) are redrawn.
std::vector<Point> sample_points(const SampleDomain& d);
std::vector<Point> sample_points(const SampleDomain& d,
                                 const std::function<bool(const Point&)>& finite_guard);

/// One accepted draw from the box (rejection against the guard).
Point sample_one(SampleStream& rng,
                 const std::vector<std::pair<double, double>>& box,
                 const std::function<bool(const Point&)>& finite_guard);

/// Guard testing that every expression is finite at p and at the 2n nudged
/// points p +- 1e-6 e_i.
std::function<bool(const Point&)> finite_guard_for(std::vector<Expression> exprs);

/// Outcome of a sampled identity test. outcome == true implies
/// residual <= tol.
struct Verdict {
  bool outcome = false;
  double residual = 0.0;  // max scaled residual over all samples
  int samples = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  Point worst_point;
  std::vector<double> worst_direction;
};

}  // namespace szabo
