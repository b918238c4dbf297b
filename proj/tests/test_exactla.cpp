#include <random>

#include "doctest.h"
#include "ssq/exactla.hpp"

using namespace ssq;

namespace {

Matrix random_matrix(Field f, std::size_t r, std::size_t c, std::mt19937_64& rng, int density = 2) {
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng() % density == 0) m.set_int(i, j, static_cast<long>(rng() % 7) - 3);
  return m;
}

// Brute force over F_3: number of vectors killed by m.
std::size_t count_kernel_f3(const Matrix& m) {
  std::size_t n = m.cols(), total = 1, hits = 0;
  for (std::size_t k = 0; k < n; ++k) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    Matrix v(m.field(), n, 1);
    std::size_t c = code;
    for (std::size_t k = 0; k < n; ++k, c /= 3) v.set_int(k, 0, static_cast<long>(c % 3));
    if ((m * v).is_zero()) ++hits;
  }
  return hits;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_CASE("scalar parsing and arithmetic") {
  Field q = Field::rational(), f7 = Field::prime(7);
  CHECK(Scalar::parse(q, "-6/4").str() == "-3/2");
  CHECK(Scalar::parse(f7, "1/3").str() == "5");
  CHECK(Scalar::parse(f7, "-1").str() == "6");
  CHECK_THROWS_AS(Scalar::parse(f7, "1/7"), NotInvertible);
  CHECK_THROWS(Scalar::parse(q, "1/0"));
  CHECK_THROWS(Scalar::parse(q, "x"));
  CHECK_THROWS_AS(Scalar(q, 1L) + Scalar(f7, 1L), FieldMismatch);
  CHECK((Scalar(f7, 3L) / Scalar(f7, 5L)) * Scalar(f7, 5L) == Scalar(f7, 3L));
  CHECK_THROWS_AS(Field::prime(9), Error);
}

TEST_CASE("rank, kernel and solve on a fixed matrix") {
  Field q = Field::rational();
  Matrix a = Matrix::from_ints(q, {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  CHECK(a.rank() == 2);
  Matrix k = a.kernel();
  CHECK(k.cols() == 1);
  CHECK((a * k).is_zero());
  auto x = a.solve(Matrix::from_ints(q, {{6}, {12}, {2}}));
  REQUIRE(x);
  CHECK(a * *x == Matrix::from_ints(q, {{6}, {12}, {2}}));
  CHECK_FALSE(a.solve(Matrix::from_ints(q, {{1}, {0}, {0}})));
  Matrix inv = Matrix::from_ints(q, {{2, 1}, {1, 1}}).inverse();
  CHECK(inv == Matrix::from_ints(q, {{1, -1}, {-1, 2}}));
}

TEST_CASE("kernel dimension agrees with brute-force count over F3") {
  Field f3 = Field::prime(3);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    Matrix m = random_matrix(f3, r, c, rng);
    std::size_t kdim = m.kernel().cols();
    CHECK(ipow(3, kdim) == count_kernel_f3(m));
    CHECK(kdim + m.rank() == c);
  }
}

TEST_CASE("solve and inverse properties over Q and F101") {
  std::mt19937_64 rng(11);
  for (Field f : {Field::rational(), Field::prime(101)}) {
    for (int t = 0; t < 100; ++t) {
      std::size_t n = 1 + rng() % 6;
      Matrix a = random_matrix(f, n, n, rng);
      Matrix x = random_matrix(f, n, 2, rng);
      auto y = a.solve(a * x);
      REQUIRE(y);
      CHECK(a * *y == a * x);
      if (a.is_invertible()) CHECK(a * a.inverse() == Matrix::identity(f, n));
      else CHECK_THROWS_AS(a.inverse(), NotInvertible);
    }
  }
}

TEST_CASE("subspaces have canonical bases") {
  Field f = Field::prime(101);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + rng() % 5;
    Matrix gens = random_matrix(f, n, 1 + rng() % 4, rng);
    Matrix mix = random_matrix(f, gens.cols(), gens.cols(), rng);
    Subspace a = Subspace::span(gens);
    if (mix.is_invertible()) CHECK(Subspace::span(gens * mix) == a);
    Subspace b = Subspace::span(random_matrix(f, n, 1 + rng() % 3, rng));
    Subspace s = a.sum(b), i = a.intersect(b);
    CHECK(s.dim() + i.dim() == a.dim() + b.dim());
    CHECK(s.contains(a));
    CHECK(a.contains(i));
    CHECK(b.contains(i));
  }
}

TEST_CASE("quotient with section") {
  Field f = Field::rational();
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng() % 6;
    Subspace s = Subspace::span(random_matrix(f, n, rng() % 4, rng));
    Quotient q = quotient_with_section(s);
    CHECK(q.proj.rows() == n - s.dim());
    CHECK((q.proj * s.basis()).is_zero());
    CHECK(q.proj * q.section == Matrix::identity(f, n - s.dim()));
    // kernel of proj is exactly the subspace
    CHECK(kernel_space(q.proj) == s);
  }
}

TEST_CASE("preimage of a subspace") {
  Field f = Field::prime(101);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    Matrix m = random_matrix(f, 4, 3, rng);
    Subspace tgt = Subspace::span(random_matrix(f, 4, rng() % 3, rng));
    Subspace pre = intersect_preimage(m, tgt);
    CHECK(tgt.contains(m * pre.basis()));
    // anything mapping into tgt lies in pre
    Matrix k = m.hstack(-tgt.basis()).kernel();
    CHECK(pre.contains(k.block(0, 0, 3, k.cols())));
  }
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 rng(13);
  for (Field f : {Field::rational(), Field::prime(101)}) {
    for (int t = 0; t < 20; ++t) {
      Matrix a = random_matrix(f, 20 + rng() % 10, 25, rng), b = random_matrix(f, 25, 12, rng);
      CHECK(kernels::matmul_serial(a, b) == kernels::matmul_omp(a, b));
      Matrix x = a, y = a;
      Echelon ex = kernels::rref_serial(x), ey = kernels::rref_omp(y);
      CHECK(x == y);
      CHECK(ex.pivots == ey.pivots);
    }
  }
}

#include "ssq/linsys.hpp"

TEST_CASE("block linear systems: commutant of a matrix") {
  // {X : A X = X A} for A a single Jordan block has dimension n
  for (Field f : {Field::rational(), Field::prime(5)}) {
    for (std::size_t n = 1; n <= 5; ++n) {
      Matrix a(f, n, n);
      for (std::size_t i = 0; i + 1 < n; ++i) a.set_int(i, i + 1, 1);
      LinearSystem sys(f);
      auto x = sys.add_unknown(n, n);
      auto e = sys.add_equation(n, n);
      sys.add_term_left(e, a, x);
      sys.add_term_right(e, x, -a);
      CHECK(sys.kernel_dim() == n);
      for (auto& sol : sys.kernel_basis()) CHECK(a * sol[0] == sol[0] * a);
      std::mt19937_64 rng(n);
      auto r = sys.random_kernel_element(rng);
      CHECK(a * r[0] == r[0] * a);
    }
  }
}

TEST_CASE("block linear systems: inhomogeneous solve") {
  Field f = Field::prime(101);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    Matrix a = random_matrix(f, 3, 4, rng), b = random_matrix(f, 2, 3, rng), x0 = random_matrix(f, 4, 2, rng);
    LinearSystem sys(f);
    auto x = sys.add_unknown(4, 2);
    auto e = sys.add_equation(3, 3);
    sys.add_term(e, a, x, b);
    sys.add_constant(e, -(a * x0 * b));
    auto sol = sys.solve();
    REQUIRE(sol);
    CHECK(a * (*sol)[0] * b == a * x0 * b);
    // dense Kronecker oracle: vec(A X B) = (A (x) B^T) vec(X) for row-major vec
    Matrix kron(f, 9, 8);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t i = 0; i < 4; ++i)
          for (std::size_t j = 0; j < 2; ++j) kron.set(r * 3 + s, i * 2 + j, a.at(r, i) * b.at(j, s));
    CHECK(sys.rank() == kron.rank());
  }
  LinearSystem bad(f);
  auto x = bad.add_unknown(1, 1);
  auto e = bad.add_equation(1, 1);
  bad.add_term(e, Matrix(f, 1, 1), x, Matrix::identity(f, 1));
  bad.add_constant(e, Matrix::identity(f, 1));
  CHECK_FALSE(bad.solve());
}
