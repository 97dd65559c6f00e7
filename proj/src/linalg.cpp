#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace halfline {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::dimension_mismatch,
                "matrix dimensions differ: " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<cplx> entries)
    : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) {
    throw Error(ErrorKind::dimension_mismatch, "entry count does not match n*n");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : n_(rows.size()) {
  a_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw Error(ErrorKind::dimension_mismatch, "matrix literal is not square");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) { return scalar(n, 1.0); }

ComplexMatrix ComplexMatrix::scalar(std::size_t n, cplx s) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_dim(*this, o);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_dim(*this, o);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

CVector operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (v.size() != a.dim()) throw Error(ErrorKind::dimension_mismatch, "matrix-vector size mismatch");
  CVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    cplx s = 0;
    for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b);
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      const cplx ail = a(i, l);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += ail * b(l, j);
    }
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(j, i) = std::conj(a(i, j));
  return c;
}

double frobenius(const ComplexMatrix& a) {
  double s = 0;
  for (cplx z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
  double m = 0;
  for (cplx z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double hermiticity_defect(const ComplexMatrix& a) { return norm(a - adjoint(a)); }

ComplexMatrix inverse(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  const double scale = frobenius(a);
  ComplexMatrix w = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(w(r, col)) > std::abs(w(piv, col))) piv = r;
    const double pmag = std::abs(w(piv, col));
    if (!(pmag >= 1e-13 * scale) || scale == 0.0) {
      throw Error(ErrorKind::singular_matrix,
                  "matrix is singular to tolerance (pivot " + std::to_string(pmag) + ")", pmag);
    }
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w(piv, j), w(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const cplx p = 1.0 / w(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      w(col, j) *= p;
      inv(col, j) *= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = w(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        w(r, j) -= f * w(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

cplx det(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix w = a;
  cplx d = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(w(r, col)) > std::abs(w(piv, col))) piv = r;
    if (w(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w(piv, j), w(col, j));
      d = -d;
    }
    d *= w(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = w(r, col) / w(col, col);
      for (std::size_t j = col; j < n; ++j) w(r, j) -= f * w(col, j);
    }
  }
  return d;
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  const double nrm = frobenius(a);
  int squarings = 0;
  if (nrm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
  ComplexMatrix x = a * cplx(std::ldexp(1.0, -squarings));
  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 18; ++k) {
    term = matmul(term, x) * cplx(1.0 / k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

// One-sided Jacobi on the columns.
std::vector<double> singular_values(std::span<const cplx> a, std::size_t rows, std::size_t cols) {
  if (a.size() != rows * cols) throw Error(ErrorKind::dimension_mismatch, "bad matrix shape");
  std::size_t m = rows, n = cols;
  std::vector<CVector> c;
  if (rows >= cols) {
    c.assign(n, CVector(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) c[j][i] = a[i * cols + j];
  } else {
    std::swap(m, n);
    c.assign(n, CVector(m));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) c[i][j] = std::conj(a[i * cols + j]);
  }
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0, beta = 0;
        cplx gamma = 0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(c[p][i]);
          beta += std::norm(c[q][i]);
          gamma += std::conj(c[p][i]) * c[q][i];
        }
        const double g = std::abs(gamma);
        if (g <= 1e-15 * std::sqrt(alpha * beta) || g == 0.0) continue;
        rotated = true;
        const cplx phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < m; ++i) {
          const cplx xp = c[p][i];
          const cplx xq = c[q][i] * std::conj(phase);
          c[p][i] = cs * xp - sn * xq;
          c[q][i] = (sn * xp + cs * xq) * phase;
        }
      }
    if (!rotated) break;
  }
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = vector_norm(c[j]);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  return singular_values(a.data(), a.dim(), a.dim());
}

double smallest_singular_value(const ComplexMatrix& a) {
  if (a.dim() == 1) return std::abs(a(0, 0));
  return singular_values(a).back();
}

double norm(const ComplexMatrix& a) {
  if (a.dim() == 1) return std::abs(a(0, 0));
  return singular_values(a).front();
}

HermitianEigen eig_hermitian(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  const double scale = frobenius(a);
  const double defect = frobenius(a - adjoint(a));
  if (defect > 1e-10 * std::max(scale, 1e-300) && defect > 0) {
    throw Error(ErrorKind::hermiticity_violation,
                "eig_hermitian: matrix is not Hermitian, defect " + std::to_string(defect), defect);
  }
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(w(p, q));
    if (std::sqrt(off) <= 1e-16 * scale || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double b = std::abs(w(p, q));
        if (b == 0.0) continue;
        const cplx e = w(p, q) / b;  // e^{i phi}
        const double theta = 0.5 * std::atan2(2.0 * b, (w(q, q) - w(p, p)).real());
        const double c = std::cos(theta), s = std::sin(theta);
        const cplx g10 = -s * std::conj(e), g11 = c * std::conj(e);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx kp = w(k, p), kq = w(k, q);
          w(k, p) = c * kp + g10 * kq;
          w(k, q) = s * kp + g11 * kq;
          const cplx vp = v(k, p), vq = v(k, q);
          v(k, p) = c * vp + g10 * vq;
          v(k, q) = s * vp + g11 * vq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx pk = w(p, k), qk = w(q, k);
          w(p, k) = c * pk + std::conj(g10) * qk;
          w(q, k) = s * pk + std::conj(g11) * qk;
        }
        w(p, q) = 0;
        w(q, p) = 0;
      }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });
  HermitianEigen out;
  for (std::size_t idx : order) {
    out.values.push_back(w(idx, idx).real());
    CVector col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v(k, idx);
    out.vectors.push_back(std::move(col));
  }
  return out;
}

double vector_norm(std::span<const cplx> v) {
  double s = 0;
  for (cplx z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace halfline
