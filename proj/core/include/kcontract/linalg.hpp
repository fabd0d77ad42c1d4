#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "kcontract/errors.hpp"

namespace kcontract {

/// The monotonic vector norms the library works with. Every tag denotes a
/// monotonic norm (|v_i| <= |w_i| componentwise implies |v| <= |w|), which is
/// a standing hypothesis of the wedge-decay results.
enum class NormKind { L1, L2, Linf };

const char* to_string(NormKind kind);
NormKind norm_from_string(const std::string& text);  // "l1" | "l2" | "linf"

/// Dense real vector with value semantics. Public constructors reject
/// non-finite entries; arithmetic on already-validated values is unchecked.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : entries_(dim, 0.0) {}
  Vector(std::initializer_list<double> entries);
  explicit Vector(std::vector<double> entries);

  std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  double& operator[](std::size_t i) noexcept { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(double c) noexcept;

  friend Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
  friend Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
  friend Vector operator*(double c, Vector v) { return v *= c; }
  friend Vector operator*(Vector v, double c) { return v *= c; }
  friend bool operator==(const Vector&, const Vector&) = default;

  /// Bypasses the finiteness check; for internal arithmetic results.
  static Vector unchecked(std::vector<double> entries);

 private:
  struct unchecked_t {};
  Vector(unchecked_t, std::vector<double> entries) : entries_(std::move(entries)) {}

  std::vector<double> entries_;
};

/// Dense row-major real matrix with value semantics; same validation policy
/// as Vector. Sizes here are tiny, so there is no view or slicing API.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return entries_[i * cols_ + j];
  }
  std::span<const double> entries() const noexcept { return entries_; }

  Matrix transposed() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double c) noexcept;

  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(double c, Matrix m) { return m *= c; }
  friend Matrix operator*(Matrix m, double c) { return m *= c; }
  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);
  friend Vector operator*(const Matrix& m, const Vector& v);
  friend bool operator==(const Matrix&, const Matrix&) = default;

  static Matrix unchecked(std::size_t rows, std::size_t cols, std::vector<double> entries);

 private:
  struct unchecked_t {};
  Matrix(unchecked_t, std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {}

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// |v| under the selected norm; zero iff v = 0.
double vector_norm(const Vector& v, NormKind kind);

double max_abs(const Vector& v);
double max_abs(const Matrix& m);
double frobenius_norm(const Matrix& m);

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // column j is the eigenvector of values[j]
};

/// Cyclic Jacobi rotations on the symmetrized input. Throws InvalidInput on
/// non-square or relatively asymmetric (> tols::sym_asymmetry_rel) matrices.
SymEigen sym_eigen(const Matrix& a);
Vector sym_eigenvalues(const Matrix& a);

/// Matrix measure (logarithmic norm) induced by the selected vector norm:
///   L1:   max_j ( a_jj + sum_{i != j} |a_ij| )
///   Linf: max_i ( a_ii + sum_{j != i} |a_ij| )
///   L2:   largest eigenvalue of (A + A^T)/2
double matrix_measure(const Matrix& a, NormKind kind);

/// Gaussian elimination with row-scaled partial pivoting. Throws
/// SingularMatrix when the best scaled pivot drops below
/// tols::min_scaled_pivot (roughly cond > 1e12).
Vector solve_small(const Matrix& a, const Vector& b);
Matrix inverse(const Matrix& a);

}  // namespace kcontract
