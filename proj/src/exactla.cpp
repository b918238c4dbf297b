#include "ssq/exactla.hpp"
#include "field_ops.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>

namespace ssq {

Field Field::prime(std::int64_t p) {
  if (p < 2) throw Error("field characteristic must be a prime, got " + std::to_string(p));
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw Error("field characteristic must be a prime, got " + std::to_string(p));
  if (p >= (std::int64_t(1) << 62)) throw Error("prime too large");
  return Field(p);
}

Field Field::parse(const std::string& s) {
  if (s == "Q" || s == "q" || s == "QQ") return rational();
  std::string t = s;
  if (t.rfind("Fp:", 0) == 0 || t.rfind("fp:", 0) == 0) t = t.substr(3);
  else if (t.rfind("F", 0) == 0) t = t.substr(1);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw Error("cannot parse field '" + s + "'");
  return prime(std::stoll(t));
}

Field Field::default_field() {
  static const Field f = [] {
    const char* e = std::getenv("SSQ_FIELD");
    if (e && *e) return parse(e);
    return Field(101);
  }();
  return f;
}

std::string Field::name() const { return is_rational() ? "Q" : "F" + std::to_string(p_); }

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  if (nr == 0) throw NotInvertible("zero has no inverse");
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return t < 0 ? t + p : t;
}

namespace {
using detail::FpOps;
using detail::QOps;

std::int64_t reduce(long v, std::int64_t p) {
  std::int64_t r = static_cast<std::int64_t>(v % p);
  return r < 0 ? r + p : r;
}

std::int64_t reduce_mpz(const mpz_class& z, std::int64_t p) {
  mpz_class r = z % p;
  if (r < 0) r += p;
  return r.get_si();
}

std::atomic<std::size_t> g_threshold{1u << 14};

template <class Ops, class Vec>
Echelon rref_generic(Vec& a, std::size_t rows, std::size_t cols, std::size_t pivot_limit, Ops ops,
                     bool parallel) {
  using T = typename Ops::T;
  Echelon e;
  std::size_t row = 0;
  for (std::size_t c = 0; c < pivot_limit && row < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = row; i < rows; ++i)
      if (!ops.zero(a[i * cols + c])) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[row * cols + j]);
    T inv = ops.inv(a[row * cols + c]);
    for (std::size_t j = c; j < cols; ++j) a[row * cols + j] = ops.mul(a[row * cols + j], inv);
    const long nrows = static_cast<long>(rows);
#pragma omp parallel for schedule(static) if (parallel)
    for (long ii = 0; ii < nrows; ++ii) {
      std::size_t i = static_cast<std::size_t>(ii);
      if (i == row || ops.zero(a[i * cols + c])) continue;
      T factor = a[i * cols + c];
      for (std::size_t j = c; j < cols; ++j)
        if (!ops.zero(a[row * cols + j]))
          a[i * cols + j] = ops.sub(a[i * cols + j], ops.mul(factor, a[row * cols + j]));
    }
    e.pivots.push_back(c);
    ++row;
  }
  return e;
}

template <class Ops, class Vec>
void matmul_generic(const Vec& a, const Vec& b, Vec& c, std::size_t n, std::size_t k, std::size_t m,
                    Ops ops, bool parallel) {
  const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (long ii = 0; ii < nn; ++ii) {
    std::size_t i = static_cast<std::size_t>(ii);
    for (std::size_t t = 0; t < k; ++t) {
      const auto& x = a[i * k + t];
      if (ops.zero(x)) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!ops.zero(b[t * m + j])) c[i * m + j] = ops.add(c[i * m + j], ops.mul(x, b[t * m + j]));
    }
  }
}

Echelon rref_dispatch(Matrix& m, std::size_t pivot_limit, bool parallel) {
  if (m.field().is_rational())
    return rref_generic(m.q_data(), m.rows(), m.cols(), pivot_limit, QOps{}, parallel);
  return rref_generic(m.fp_data(), m.rows(), m.cols(), pivot_limit,
                      FpOps{m.field().characteristic()}, parallel);
}

bool use_parallel(std::size_t work) { return work >= g_threshold.load(); }

bool valid_number(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  std::size_t slash = s.find('/');
  auto digits = [&](std::size_t b, std::size_t e) {
    if (b >= e) return false;
    for (std::size_t k = b; k < e; ++k)
      if (s[k] < '0' || s[k] > '9') return false;
    return true;
  };
  if (slash == std::string::npos) return digits(i, s.size());
  return digits(i, slash) && digits(slash + 1, s.size());
}

}  // namespace

namespace kernels {
Matrix matmul_serial(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  if (a.field() != b.field()) throw FieldMismatch("matrix product over different fields");
  Matrix c(a.field(), a.rows(), b.cols());
  if (a.field().is_rational())
    matmul_generic(a.q_data(), b.q_data(), c.q_data(), a.rows(), a.cols(), b.cols(), QOps{}, false);
  else
    matmul_generic(a.fp_data(), b.fp_data(), c.fp_data(), a.rows(), a.cols(), b.cols(),
                   FpOps{a.field().characteristic()}, false);
  return c;
}
Matrix matmul_omp(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  if (a.field() != b.field()) throw FieldMismatch("matrix product over different fields");
  Matrix c(a.field(), a.rows(), b.cols());
  if (a.field().is_rational())
    matmul_generic(a.q_data(), b.q_data(), c.q_data(), a.rows(), a.cols(), b.cols(), QOps{}, true);
  else
    matmul_generic(a.fp_data(), b.fp_data(), c.fp_data(), a.rows(), a.cols(), b.cols(),
                   FpOps{a.field().characteristic()}, true);
  return c;
}
Echelon rref_serial(Matrix& m) { return rref_dispatch(m, m.cols(), false); }
Echelon rref_omp(Matrix& m) { return rref_dispatch(m, m.cols(), true); }
void set_parallel_threshold(std::size_t entries) { g_threshold = entries; }
std::size_t parallel_threshold() { return g_threshold.load(); }
}  // namespace kernels

// ---- Scalar

Scalar::Scalar(Field f, long v) : f_(f) {
  if (f.is_rational()) q_ = v;
  else r_ = reduce(v, f.characteristic());
}

Scalar::Scalar(Field f, const mpq_class& q) : f_(f) {
  if (f.is_rational()) {
    q_ = q;
    q_.canonicalize();
  } else {
    std::int64_t p = f.characteristic();
    std::int64_t den = reduce_mpz(q.get_den(), p);
    if (den == 0) throw NotInvertible("denominator vanishes mod " + std::to_string(p));
    r_ = FpOps{p}.mul(reduce_mpz(q.get_num(), p), mod_inverse(den, p));
  }
}

Scalar Scalar::parse(Field f, const std::string& s) {
  if (!valid_number(s)) throw Error("not a scalar: '" + s + "'");
  std::string t = s[0] == '+' ? s.substr(1) : s;
  mpq_class q;
  std::size_t slash = t.find('/');
  if (slash == std::string::npos) {
    q = mpq_class(mpz_class(t));
  } else {
    mpz_class den(t.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + s + "'");
    q = mpq_class(mpz_class(t.substr(0, slash)), den);
    q.canonicalize();
  }
  return Scalar(f, q);
}

bool Scalar::is_zero() const { return f_.is_rational() ? sgn(q_) == 0 : r_ == 0; }

std::string Scalar::str() const { return f_.is_rational() ? q_.get_str() : std::to_string(r_); }

void Scalar::check(const Scalar& o) const {
  if (f_ != o.f_) throw FieldMismatch("scalars over " + f_.name() + " and " + o.f_.name());
}

Scalar Scalar::operator+(const Scalar& o) const {
  check(o);
  Scalar s(f_);
  if (f_.is_rational()) s.q_ = q_ + o.q_;
  else s.r_ = FpOps{f_.characteristic()}.add(r_, o.r_);
  return s;
}
Scalar Scalar::operator-(const Scalar& o) const {
  check(o);
  Scalar s(f_);
  if (f_.is_rational()) s.q_ = q_ - o.q_;
  else s.r_ = FpOps{f_.characteristic()}.sub(r_, o.r_);
  return s;
}
Scalar Scalar::operator*(const Scalar& o) const {
  check(o);
  Scalar s(f_);
  if (f_.is_rational()) s.q_ = q_ * o.q_;
  else s.r_ = FpOps{f_.characteristic()}.mul(r_, o.r_);
  return s;
}
Scalar Scalar::inverse() const {
  if (is_zero()) throw NotInvertible("division by zero");
  Scalar s(f_);
  if (f_.is_rational()) s.q_ = 1 / q_;
  else s.r_ = mod_inverse(r_, f_.characteristic());
  return s;
}
Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }
Scalar Scalar::operator-() const { return Scalar(f_, 0L) - *this; }
bool Scalar::operator==(const Scalar& o) const {
  if (f_ != o.f_) return false;
  return f_.is_rational() ? q_ == o.q_ : r_ == o.r_;
}

// ---- Matrix

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols) : f_(f), rows_(rows), cols_(cols) {
  if (f.is_rational()) q_.assign(rows * cols, mpq_class(0));
  else fp_.assign(rows * cols, 0);
}

Matrix Matrix::identity(Field f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set_int(i, i, 1);
  return m;
}

Matrix Matrix::from_ints(Field f, const std::vector<std::vector<long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  Matrix m(f, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged rows");
    for (std::size_t j = 0; j < c; ++j) m.set_int(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::selection_columns(Field f, std::size_t n, const std::vector<std::size_t>& idx) {
  Matrix m(f, n, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) m.set_int(idx[j], j, 1);
  return m;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw DimensionMismatch("index out of range");
  return f_.is_rational() ? Scalar(f_, q_[i * cols_ + j]) : Scalar(f_, static_cast<long>(fp_[i * cols_ + j]));
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v) {
  if (v.field() != f_) throw FieldMismatch("entry over " + v.field().name() + " in matrix over " + f_.name());
  if (i >= rows_ || j >= cols_) throw DimensionMismatch("index out of range");
  if (f_.is_rational()) q_[i * cols_ + j] = v.rational();
  else fp_[i * cols_ + j] = v.residue();
}

void Matrix::set_int(std::size_t i, std::size_t j, long v) { set(i, j, Scalar(f_, v)); }

bool Matrix::entry_is_zero(std::size_t i, std::size_t j) const {
  return f_.is_rational() ? sgn(q_[i * cols_ + j]) == 0 : fp_[i * cols_ + j] == 0;
}

bool Matrix::is_zero() const {
  if (f_.is_rational()) return std::all_of(q_.begin(), q_.end(), [](const mpq_class& x) { return sgn(x) == 0; });
  return std::all_of(fp_.begin(), fp_.end(), [](std::int64_t x) { return x == 0; });
}

void Matrix::check_same(const Matrix& o) const {
  if (f_ != o.f_) throw FieldMismatch("matrices over " + f_.name() + " and " + o.f_.name());
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw DimensionMismatch("shapes " + std::to_string(rows_) + "x" + std::to_string(cols_) + " and " +
                            std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
}

Matrix Matrix::operator+(const Matrix& o) const {
  check_same(o);
  Matrix m = *this;
  if (f_.is_rational())
    for (std::size_t k = 0; k < q_.size(); ++k) m.q_[k] += o.q_[k];
  else {
    FpOps ops{f_.characteristic()};
    for (std::size_t k = 0; k < fp_.size(); ++k) m.fp_[k] = ops.add(m.fp_[k], o.fp_[k]);
  }
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  if (f_.is_rational())
    for (auto& x : m.q_) x = -x;
  else {
    FpOps ops{f_.characteristic()};
    for (auto& x : m.fp_) x = ops.neg(x);
  }
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator*(const Matrix& o) const {
  if (use_parallel(rows_ * cols_ * o.cols_ / 8)) return kernels::matmul_omp(*this, o);
  return kernels::matmul_serial(*this, o);
}

Matrix Matrix::scaled(const Scalar& c) const {
  if (c.field() != f_) throw FieldMismatch("scalar over wrong field");
  Matrix m = *this;
  if (f_.is_rational())
    for (auto& x : m.q_) x *= c.rational();
  else {
    FpOps ops{f_.characteristic()};
    for (auto& x : m.fp_) x = ops.mul(x, c.residue());
  }
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && fp_ == o.fp_ && q_ == o.q_;
}

Matrix Matrix::transpose() const {
  Matrix m(f_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      if (f_.is_rational()) m.q_[j * rows_ + i] = q_[i * cols_ + j];
      else m.fp_[j * rows_ + i] = fp_[i * cols_ + j];
    }
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
  Matrix m(f_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      if (f_.is_rational()) m.q_[i * nc + j] = q_[(r0 + i) * cols_ + c0 + j];
      else m.fp_[i * nc + j] = fp_[(r0 + i) * cols_ + c0 + j];
    }
  return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (b.f_ != f_) throw FieldMismatch("block over wrong field");
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      if (f_.is_rational()) q_[(r0 + i) * cols_ + c0 + j] = b.q_[i * b.cols_ + j];
      else fp_[(r0 + i) * cols_ + c0 + j] = b.fp_[i * b.cols_ + j];
    }
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (b.f_ != f_) throw FieldMismatch("block over wrong field");
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("block out of range");
  FpOps ops{f_.is_rational() ? 2 : f_.characteristic()};
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      if (f_.is_rational()) q_[(r0 + i) * cols_ + c0 + j] += b.q_[i * b.cols_ + j];
      else fp_[(r0 + i) * cols_ + c0 + j] = ops.add(fp_[(r0 + i) * cols_ + c0 + j], b.fp_[i * b.cols_ + j]);
    }
}

Matrix Matrix::hstack(const Matrix& o) const {
  if (rows_ != o.rows_) throw DimensionMismatch("hstack: row counts differ");
  if (f_ != o.f_) throw FieldMismatch("hstack over different fields");
  Matrix m(f_, rows_, cols_ + o.cols_);
  m.set_block(0, 0, *this);
  m.set_block(0, cols_, o);
  return m;
}

Matrix Matrix::vstack(const Matrix& o) const {
  if (cols_ != o.cols_) throw DimensionMismatch("vstack: column counts differ");
  if (f_ != o.f_) throw FieldMismatch("vstack over different fields");
  Matrix m(f_, rows_ + o.rows_, cols_);
  m.set_block(0, 0, *this);
  m.set_block(rows_, 0, o);
  return m;
}

Matrix Matrix::block_diag(const Matrix& o) const {
  if (f_ != o.f_) throw FieldMismatch("block_diag over different fields");
  Matrix m(f_, rows_ + o.rows_, cols_ + o.cols_);
  m.set_block(0, 0, *this);
  m.set_block(rows_, cols_, o);
  return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(f_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) m.set_block(i, 0, block(idx[i], 0, 1, cols_));
  return m;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
  Matrix m(f_, rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) m.set_block(0, j, block(0, idx[j], rows_, 1));
  return m;
}

Echelon Matrix::rref_inplace() { return rref_dispatch(*this, cols_, use_parallel(rows_ * cols_)); }

Matrix Matrix::rref() const {
  Matrix m = *this;
  m.rref_inplace();
  return m;
}

std::size_t Matrix::rank() const {
  Matrix m = *this;
  return m.rref_inplace().rank();
}

Matrix Matrix::kernel() const {
  Matrix r = *this;
  Echelon e = r.rref_inplace();
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < cols_; ++j)
    if (!is_pivot[j]) free.push_back(j);
  Matrix k(f_, cols_, free.size());
  for (std::size_t t = 0; t < free.size(); ++t) {
    k.set_int(free[t], t, 1);
    for (std::size_t row = 0; row < e.pivots.size(); ++row)
      if (!r.entry_is_zero(row, free[t])) k.set(e.pivots[row], t, -r.at(row, free[t]));
  }
  return k;
}

std::optional<Matrix> Matrix::solve(const Matrix& b) const {
  if (b.rows_ != rows_) throw DimensionMismatch("solve: right-hand side has wrong row count");
  Matrix aug = hstack(b);
  Echelon e = rref_dispatch(aug, cols_, use_parallel(aug.rows_ * aug.cols_));
  for (std::size_t row = e.rank(); row < rows_; ++row)
    for (std::size_t j = 0; j < b.cols_; ++j)
      if (!aug.entry_is_zero(row, cols_ + j)) return std::nullopt;
  Matrix x(f_, cols_, b.cols_);
  for (std::size_t row = 0; row < e.rank(); ++row)
    x.set_block(e.pivots[row], 0, aug.block(row, cols_, 1, b.cols_));
  return x;
}

bool Matrix::is_invertible() const { return rows_ == cols_ && rank() == rows_; }

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw NotInvertible("non-square matrix");
  auto x = solve(identity(f_, rows_));
  if (!x || rank() != rows_) throw NotInvertible("singular matrix");
  return *x;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).str();
  }
  os << "]";
  return os.str();
}

// ---- Subspace

Subspace Subspace::span(const Matrix& columns) {
  Matrix t = columns.transpose();
  Echelon e = t.rref_inplace();
  Subspace s;
  s.basis_ = t.block(0, 0, e.rank(), t.cols()).transpose();
  s.pivots_ = e.pivots;
  return s;
}

Subspace Subspace::zero(Field f, std::size_t n) { return span(Matrix(f, n, 0)); }
Subspace Subspace::full(Field f, std::size_t n) { return span(Matrix::identity(f, n)); }

bool Subspace::contains(const Matrix& v) const {
  if (v.rows() != ambient()) throw DimensionMismatch("vector has wrong ambient dimension");
  return (v - basis_ * coords(v)).is_zero();
}

Matrix Subspace::coord_map() const {
  return Matrix::selection_columns(field(), ambient(), pivots_).transpose();
}

Subspace Subspace::sum(const Subspace& o) const {
  if (o.ambient() != ambient()) throw DimensionMismatch("sum of subspaces of different spaces");
  return span(basis_.hstack(o.basis_));
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (o.ambient() != ambient()) throw DimensionMismatch("intersection of subspaces of different spaces");
  Matrix k = basis_.hstack(-o.basis_).kernel();
  return span(basis_ * k.block(0, 0, dim(), k.cols()));
}

Subspace image(const Matrix& m) { return Subspace::span(m); }
Subspace kernel_space(const Matrix& m) { return Subspace::span(m.kernel()); }

RankKernelImage rank_kernel_image(const Matrix& m) {
  Subspace im = image(m);
  return {im.dim(), kernel_space(m), im};
}

Quotient quotient_with_section(const Subspace& sub) {
  const Field f = sub.field();
  std::size_t n = sub.ambient();
  std::vector<bool> is_pivot(n, false);
  for (auto p : sub.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pivot[i]) rest.push_back(i);
  Matrix section = Matrix::selection_columns(f, n, rest);
  // v = B (v|pivots) + complement part
  Matrix residual = Matrix::identity(f, n) - sub.basis() * sub.coord_map();
  return {residual.select_rows(rest), section};
}

Subspace intersect_preimage(const Matrix& m, const Subspace& target) {
  if (m.rows() != target.ambient()) throw DimensionMismatch("preimage: target dimension mismatch");
  Quotient q = quotient_with_section(target);
  return kernel_space(q.proj * m);
}

}  // namespace ssq
