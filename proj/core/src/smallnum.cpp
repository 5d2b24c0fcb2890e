#include "szabo/smallnum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace szabo {

Matrix::Matrix(int n) : n_(n) {
  if (n < 2 || n > 4) throw std::invalid_argument("matrix dimension must be 2..4");
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  Matrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      double s = 0.0;
      for (int k = 0; k < n_; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r(n_);
  for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  Matrix r(n_);
  for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

Matrix Matrix::operator*(double k) const {
  Matrix r(n_);
  for (int i = 0; i < n_ * n_; ++i) r.a_[i] = a_[i] * k;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

double Matrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_ * n_; ++i) s += a_[i] * a_[i];
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double s = 0.0;
  for (int i = 0; i < n_ * n_; ++i) s = std::max(s, std::abs(a_[i]));
  return s;
}

CharPoly char_poly(const Matrix& m) {
  const int n = m.dim();
  CharPoly p;
  p.n = n;
  if (n == 2) {
    p.c[0] = -m.trace();
    p.c[1] = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return p;
  }
  // Faddeev-LeVerrier: M_1 = A, c_k = -tr(M_k)/k, M_{k+1} = A(M_k + c_k I)
  Matrix mk = m;
  for (int k = 1; k <= n; ++k) {
    double ck = -mk.trace() / k;
    p.c[static_cast<std::size_t>(k - 1)] = ck;
    if (k < n) {
      Matrix shifted = mk;
      for (int i = 0; i < n; ++i) shifted(i, i) += ck;
      mk = m * shifted;
    }
  }
  return p;
}

CharPoly char_poly_product(const CharPoly& p, const CharPoly& q) {
  CharPoly r;
  r.n = p.n + q.n;
  if (r.n > 8) throw std::invalid_argument("char_poly_product degree too large");
  // monic convolution: coefficients indexed by total degree drop
  auto pc = [&](int k) { return k == 0 ? 1.0 : p.c[static_cast<std::size_t>(k - 1)]; };
  auto qc = [&](int k) { return k == 0 ? 1.0 : q.c[static_cast<std::size_t>(k - 1)]; };
  for (int k = 1; k <= r.n; ++k) {
    double s = 0.0;
    for (int i = std::max(0, k - q.n); i <= std::min(k, p.n); ++i)
      s += pc(i) * qc(k - i);
    r.c[static_cast<std::size_t>(k - 1)] = s;
  }
  return r;
}

NilpotencyResult is_nilpotent(const Matrix& m, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  CharPoly p = char_poly(m);
  double scale = std::max(1.0, m.frobenius_norm());
  NilpotencyResult r;
  double sk = scale;
  for (int k = 1; k <= p.n; ++k) {
    r.residual = std::max(r.residual, std::abs(p.coeff(k)) / sk);
    sk *= scale;
  }
  r.nilpotent = r.residual <= tol;
  return r;
}

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  const int n = m.dim();
  Matrix a = m;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::pair<int, int> signature(const Matrix& m, double tol) {
  auto ev = symmetric_eigenvalues(m);
  int pos = 0, neg = 0;
  for (double v : ev) {
    if (v > tol) ++pos;
    else if (v < -tol) ++neg;
  }
  return {pos, neg};
}

Matrix gauss_inverse(const Matrix& m) {
  const int n = m.dim();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) throw std::invalid_argument("singular matrix");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    double d = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

double fd_partial(const std::function<double(const Point&)>& f, Point p,
                  int i, int order, double h) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("fd_partial supports order 1 or 2");
  const std::size_t idx = static_cast<std::size_t>(i);
  const double x0 = p[idx];
  auto at = [&](double dx) {
    p[idx] = x0 + dx;
    double v = f(p);
    p[idx] = x0;
    return v;
  };
  auto stencil = [&](double step) {
    if (order == 1) return (at(step) - at(-step)) / (2.0 * step);
    return (at(step) - 2.0 * at(0.0) + at(-step)) / (step * step);
  };
  double coarse = stencil(h);
  double fine = stencil(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> SampleStream::unit_direction(int n) {
  // Gaussian components via Box-Muller on the deterministic stream
  std::vector<double> v(static_cast<std::size_t>(n));
  for (;;) {
    for (int i = 0; i < n; i += 2) {
      double u = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
      double w = uniform01();
      double r = std::sqrt(-2.0 * std::log(u));
      v[static_cast<std::size_t>(i)] = r * std::cos(2.0 * M_PI * w);
      if (i + 1 < n) v[static_cast<std::size_t>(i + 1)] = r * std::sin(2.0 * M_PI * w);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 1e-6) {
      for (double& x : v) x /= norm;
      return v;
    }
  }
}

std::vector<Point> sample_points(const SampleDomain& d) {
  return sample_points(d, [](const Point&) { return true; });
}

std::vector<Point> sample_points(const SampleDomain& d,
                                 const std::function<bool(const Point&)>& finite_guard) {
  if (d.count < 1) throw std::invalid_argument("sample count must be >= 1");
  for (const auto& [lo, hi] : d.box)
    if (!(lo <= hi)) throw std::invalid_argument("empty sample interval");
  SampleStream rng(d.seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(d.count));
  while (static_cast<int>(pts.size()) < d.count)
    pts.push_back(sample_one(rng, d.box, finite_guard));
  return pts;
}

Point sample_one(SampleStream& rng,
                 const std::vector<std::pair<double, double>>& box,
                 const std::function<bool(const Point&)>& finite_guard) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Point p(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
      p[i] = rng.uniform(box[i].first, box[i].second);
    if (finite_guard(p)) return p;
  }
  throw std::runtime_error("sample domain rejects too many points");
}

std::function<bool(const Point&)> finite_guard_for(std::vector<Expression> exprs) {
  constexpr double kMargin = 1e-6;
  return [exprs = std::move(exprs), kMargin](const Point& p) {
    auto finite_at = [&](const Point& q) {
      for (const auto& e : exprs) {
        try {
          e.eval(q);
        } catch (const DomainError&) {
          return false;
        }
      }
      return true;
    };
    if (!finite_at(p)) return false;
    Point q = p;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (double s : {-kMargin, kMargin}) {
        q[i] = p[i] + s;
        if (!finite_at(q)) return false;
      }
      q[i] = p[i];
    }
    return true;
  };
}

}  // namespace szabo
