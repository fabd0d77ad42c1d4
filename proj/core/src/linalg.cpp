#include "kcontract/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "kcontract/tolerances.hpp"

namespace kcontract {

namespace {

void require_finite(std::span<const double> entries, const char* what) {
  for (double e : entries) {
    if (!std::isfinite(e)) {
      throw InvalidInput(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
  }
  return "?";
}

NormKind norm_from_string(const std::string& text) {
  if (text == "l1" || text == "L1") return NormKind::L1;
  if (text == "l2" || text == "L2") return NormKind::L2;
  if (text == "linf" || text == "Linf" || text == "LINF") return NormKind::Linf;
  throw InvalidInput("unknown norm '" + text + "' (expected l1, l2 or linf)");
}

Vector::Vector(std::initializer_list<double> entries) : entries_(entries) {
  require_finite(entries_, "Vector");
}

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  require_finite(entries_, "Vector");
}

Vector Vector::unchecked(std::vector<double> entries) {
  return Vector(unchecked_t{}, std::move(entries));
}

Vector& Vector::operator+=(const Vector& rhs) {
  if (rhs.dim() != dim()) throw InvalidInput("Vector +: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  if (rhs.dim() != dim()) throw InvalidInput("Vector -: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

Vector& Vector::operator*=(double c) noexcept {
  for (double& e : entries_) e *= c;
  return *this;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0 || entries_.size() != rows_ * cols_) {
    throw InvalidInput("Matrix: entry count does not match rows x cols");
  }
  require_finite(entries_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("Matrix: ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
  require_finite(entries_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::unchecked(std::size_t rows, std::size_t cols, std::vector<double> entries) {
  return Matrix(unchecked_t{}, rows, cols, std::move(entries));
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rhs.rows_ != rows_ || rhs.cols_ != cols_)
    throw InvalidInput("Matrix +: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rhs.rows_ != rows_ || rhs.cols_ != cols_)
    throw InvalidInput("Matrix -: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator*=(double c) noexcept {
  for (double& e : entries_) e *= c;
  return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw InvalidInput("Matrix *: shape mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector operator*(const Matrix& m, const Vector& v) {
  if (m.cols() != v.dim()) throw InvalidInput("Matrix * Vector: shape mismatch");
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return Vector::unchecked(std::move(out));
}

double vector_norm(const Vector& v, NormKind kind) {
  switch (kind) {
    case NormKind::L1: {
      double acc = 0.0;
      for (double e : v.entries()) acc += std::abs(e);
      return acc;
    }
    case NormKind::L2: {
      double acc = 0.0;
      for (double e : v.entries()) acc += e * e;
      return std::sqrt(acc);
    }
    case NormKind::Linf: {
      double acc = 0.0;
      for (double e : v.entries()) acc = std::max(acc, std::abs(e));
      return acc;
    }
  }
  return 0.0;
}

double max_abs(const Vector& v) {
  return vector_norm(v, NormKind::Linf);
}

double max_abs(const Matrix& m) {
  double acc = 0.0;
  for (double e : m.entries()) acc = std::max(acc, std::abs(e));
  return acc;
}

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double e : m.entries()) acc += e * e;
  return std::sqrt(acc);
}

SymEigen sym_eigen(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw InvalidInput("sym_eigen: matrix must be square");
  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > tols::sym_asymmetry_rel * scale)
        throw InvalidInput("sym_eigen: matrix is not symmetric");

  // Work on the symmetrized copy; rotations then preserve symmetry exactly.
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  const double stop = tols::jacobi_offdiag * std::max(frobenius_norm(w), 1e-300);
  for (int sweep = 0; sweep < tols::jacobi_max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * w(i, j) * w(i, j);
    if (std::sqrt(off) <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double wip = w(i, p), wiq = w(i, q);
          w(i, p) = c * wip - s * wiq;
          w(i, q) = s * wip + c * wiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double wpj = w(p, j), wqj = w(q, j);
          w(p, j) = c * wpj - s * wqj;
          w(q, j) = s * wpj + c * wqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return w(i, i) < w(j, j); });

  SymEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = w(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Vector sym_eigenvalues(const Matrix& a) {
  return sym_eigen(a).values;
}

double matrix_measure(const Matrix& a, NormKind kind) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw InvalidInput("matrix_measure: matrix must be square");
  switch (kind) {
    case NormKind::L1: {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        double col = a(j, j);
        for (std::size_t i = 0; i < n; ++i)
          if (i != j) col += std::abs(a(i, j));
        best = std::max(best, col);
      }
      return best;
    }
    case NormKind::Linf: {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        double row = a(i, i);
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) row += std::abs(a(i, j));
        best = std::max(best, row);
      }
      return best;
    }
    case NormKind::L2: {
      if (n == 1) return a(0, 0);
      Matrix sym(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (a(i, j) + a(j, i));
      const Vector ev = sym_eigenvalues(sym);
      return ev[ev.dim() - 1];
    }
  }
  return 0.0;
}

namespace {

// LU with row-scaled partial pivoting; factors stored in place, pivot rows in
// `perm`. Throws SingularMatrix when the scaled pivot falls under the floor.
struct Lu {
  Matrix lu;
  std::vector<std::size_t> perm;
};

Lu factorize(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw InvalidInput("solve_small: matrix must be square");
  Lu f{a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

  std::vector<double> scale(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale[i] = std::max(scale[i], std::abs(a(i, j)));
    if (scale[i] == 0.0) throw SingularMatrix("solve_small: zero row");
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_mag = -1.0;
    for (std::size_t r = col; r < n; ++r) {
      const double mag = std::abs(f.lu(f.perm[r], col)) / scale[f.perm[r]];
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
      }
    }
    if (best_mag <= tols::min_scaled_pivot) {
      throw SingularMatrix("solve_small: matrix numerically singular");
    }
    std::swap(f.perm[col], f.perm[best]);
    const std::size_t prow = f.perm[col];
    const double pivot = f.lu(prow, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::size_t row = f.perm[r];
      const double m = f.lu(row, col) / pivot;
      f.lu(row, col) = m;
      for (std::size_t j = col + 1; j < n; ++j) f.lu(row, j) -= m * f.lu(prow, j);
    }
  }
  return f;
}

Vector lu_solve(const Lu& f, const Vector& b) {
  const std::size_t n = f.perm.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= f.lu(f.perm[i], j) * y[j];
    y[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(f.perm[ii], j) * y[j];
    y[ii] = acc / f.lu(f.perm[ii], ii);
  }
  return Vector::unchecked(std::move(y));
}

}  // namespace

Vector solve_small(const Matrix& a, const Vector& b) {
  if (b.dim() != a.rows()) throw InvalidInput("solve_small: rhs dimension mismatch");
  return lu_solve(factorize(a), b);
}

Matrix inverse(const Matrix& a) {
  const Lu f = factorize(a);
  const std::size_t n = a.rows();
  Matrix out(n, n);
  Vector e(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector x = lu_solve(f, e);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = x[i];
    e[j] = 0.0;
  }
  return out;
}

}  // namespace kcontract
