#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ssq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct FieldMismatch : Error {
  using Error::Error;
};
struct NotInvertible : Error {
  using Error::Error;
};

class Field {
 public:
  static Field rational() { return Field(0); }
  static Field prime(std::int64_t p);
  // SSQ_FIELD: "Q", "Fp:<p>" or "<p>"; unset means F_101.
  static Field default_field();
  static Field parse(const std::string& s);

  bool is_rational() const { return p_ == 0; }
  std::int64_t characteristic() const { return p_; }
  std::string name() const;

  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

 private:
  explicit Field(std::int64_t p) : p_(p) {}
  std::int64_t p_;
};

std::int64_t mod_inverse(std::int64_t a, std::int64_t p);

class Scalar {
 public:
  explicit Scalar(Field f = Field::default_field()) : f_(f) {}
  Scalar(Field f, long v);
  Scalar(Field f, const mpq_class& q);
  static Scalar parse(Field f, const std::string& s);

  const Field& field() const { return f_; }
  bool is_zero() const;
  std::int64_t residue() const { return r_; }
  const mpq_class& rational() const { return q_; }
  std::string str() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inverse() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

 private:
  void check(const Scalar& o) const;
  Field f_;
  std::int64_t r_ = 0;
  mpq_class q_;
};

class Matrix;

struct Echelon {
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

// Dense matrix; entry (i,j) is the coefficient of target basis vector i in
// the image of source basis vector j.
class Matrix {
 public:
  Matrix() : f_(Field::rational()) {}
  Matrix(Field f, std::size_t rows, std::size_t cols);
  static Matrix identity(Field f, std::size_t n);
  static Matrix from_ints(Field f, const std::vector<std::vector<long>>& rows);
  // Columns e_{idx[0]}, e_{idx[1]}, ... of the n x n identity.
  static Matrix selection_columns(Field f, std::size_t n, const std::vector<std::size_t>& idx);

  const Field& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Scalar& v);
  void set_int(std::size_t i, std::size_t j, long v);
  bool entry_is_zero(std::size_t i, std::size_t j) const;
  bool is_zero() const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(const Scalar& c) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const;
  Matrix hstack(const Matrix& o) const;
  Matrix vstack(const Matrix& o) const;
  Matrix block_diag(const Matrix& o) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  void add_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix select_cols(const std::vector<std::size_t>& idx) const;

  // Reduced row echelon form in place.
  Echelon rref_inplace();
  Matrix rref() const;
  std::size_t rank() const;
  // Basis of the null space, as columns.
  Matrix kernel() const;
  // Some x with (*this) x = b, if one exists. b may have several columns.
  std::optional<Matrix> solve(const Matrix& b) const;
  Matrix inverse() const;
  bool is_invertible() const;

  std::string str() const;

  // Raw storage, used by the elimination kernels.
  std::vector<std::int64_t>& fp_data() { return fp_; }
  std::vector<mpq_class>& q_data() { return q_; }
  const std::vector<std::int64_t>& fp_data() const { return fp_; }
  const std::vector<mpq_class>& q_data() const { return q_; }

 private:
  void check_same(const Matrix& o) const;
  Field f_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::int64_t> fp_;
  std::vector<mpq_class> q_;
};

// Subspace of k^n. The basis is canonical: its transpose is in reduced row
// echelon form, so equal subspaces have identical bases.
class Subspace {
 public:
  Subspace() : basis_(Field::rational(), 0, 0) {}
  static Subspace span(const Matrix& columns);
  static Subspace zero(Field f, std::size_t n);
  static Subspace full(Field f, std::size_t n);

  std::size_t ambient() const { return basis_.rows(); }
  std::size_t dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const Field& field() const { return basis_.field(); }

  bool contains(const Matrix& vectors) const;
  bool contains(const Subspace& o) const { return contains(o.basis()); }
  // Coordinates w.r.t. basis(); only meaningful for vectors in the subspace.
  Matrix coords(const Matrix& vectors) const { return vectors.select_rows(pivots_); }
  Matrix coord_map() const;
  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;
  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace image(const Matrix& m);
Subspace kernel_space(const Matrix& m);

struct RankKernelImage {
  std::size_t rank;
  Subspace kernel;
  Subspace image;
};
RankKernelImage rank_kernel_image(const Matrix& m);

// k^n / sub with the standard complement: proj * sub = 0, proj * section = 1.
struct Quotient {
  Matrix proj;
  Matrix section;
};
Quotient quotient_with_section(const Subspace& sub);

// {x : m x in target}
Subspace intersect_preimage(const Matrix& m, const Subspace& target);

namespace kernels {
// Serial reference and OpenMP versions of the two hot loops. Results are
// identical; the dispatching entry points pick one by problem size.
Matrix matmul_serial(const Matrix& a, const Matrix& b);
Matrix matmul_omp(const Matrix& a, const Matrix& b);
Echelon rref_serial(Matrix& m);
Echelon rref_omp(Matrix& m);
void set_parallel_threshold(std::size_t entries);
std::size_t parallel_threshold();
}  // namespace kernels

}  // namespace ssq
