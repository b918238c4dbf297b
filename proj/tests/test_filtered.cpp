#include "doctest.h"
#include "ssq/filtered.hpp"

using namespace ssq;

namespace {

const Field F = Field::default_field();
const Field F5 = Field::prime(5);

Matrix mat(Field f, std::size_t rows, std::size_t cols, const std::vector<long>& entries = {}) {
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < entries.size(); ++i) m.set_int(i / cols, i % cols, entries[i]);
  return m;
}

// A^0 = <x>, A^1 = <y>, dx = y
std::vector<Matrix> pair_d(Field f) { return {mat(f, 1, 1, {1}), mat(f, 0, 1)}; }

bool spectral_and_stable(const ExtSpecSeq& x) { return is_spectral(x) && x.tail() == Tail::Stable; }

}  // namespace

TEST_CASE("validation") {
  FilteredComplex c = FilteredComplex::from_weights(F, 0, pair_d(F), {{0}, {0}});
  CHECK(c.validate().empty());
  // dx = y must not drop filtration: y in F_1 only, x in F_0
  CHECK_THROWS_AS(FilteredComplex::from_weights(F, 0, pair_d(F), {{0}, {1}}), ValidationError);
  // d^2 != 0
  std::vector<Matrix> bad{mat(F, 1, 1, {1}), mat(F, 1, 1, {1}), mat(F, 0, 1)};
  CHECK_THROWS_AS(FilteredComplex::trivial(F, 0, bad), ValidationError);
  // a filtration that never reaches A
  FilteredComplex::Degree g;
  g.dim = 1;
  g.d = mat(F, 0, 1);
  g.steps = {Subspace::zero(F, 1)};
  CHECK_THROWS_AS(FilteredComplex(F, 0, {g}), ValidationError);
}

TEST_CASE("one-step filtration") {
  // A^0 = <a, x>, A^1 = <y>, dx = y:  H = <a> in degree 0
  FilteredComplex c = FilteredComplex::trivial(F, 0, {mat(F, 1, 2, {0, 1}), mat(F, 0, 1)});
  ExtSpecSeq e = ss(c, 1);
  CHECK(spectral_and_stable(e));
  CHECK(e.page(0).dim({0, 0}) == 2);
  CHECK(e.page(0).dim({0, 1}) == 1);
  CHECK_FALSE(e.page(0).d().is_zero());
  CHECK(e.page(1).module() == BigradedModule(F, {{{0, 0}, 1}}));
  CHECK(e.page(5).module() == e.page(1).module());
}

TEST_CASE("two-step filtration of an acyclic pair") {
  // x in F_1 only, y = dx in F_0: E_0 = E_1 = <x> at (1,1) + <y> at (0,1), d_1 [x] = [y]
  FilteredComplex c = FilteredComplex::from_weights(F, 0, pair_d(F), {{1}, {0}});
  for (int r = 0; r <= 1; ++r) {
    // hand subquotients: Z_r^{1,1} = <x>, B_r^{1,1} = 0;  Z_r^{0,1} = <y>, B_r^{0,1} = 0
    CHECK(z_space(c, r, 1, 0) == Subspace::full(F, 1));
    CHECK(b_space(c, r, 1, 0).dim() == 0);
    CHECK(z_space(c, r, 0, 1) == Subspace::full(F, 1));
    CHECK(b_space(c, r, 0, 1).dim() == 0);
  }
  // page 2: Z_2^{1,1} = {x : dx in F_{-1}} = 0, B_2^{0,1} contains d Z_1^{1,1} = <y>
  CHECK(z_space(c, 2, 1, 0).dim() == 0);
  CHECK(b_space(c, 2, 0, 1) == Subspace::full(F, 1));

  ExtSpecSeq e = ss(c, 2);
  CHECK(spectral_and_stable(e));
  CHECK(e.page(0).d().is_zero());
  CHECK(e.page(1).dim({1, 1}) == 1);
  CHECK(e.page(1).dim({0, 1}) == 1);
  CHECK(e.page(1).d().block({1, 1}) == mat(F, 1, 1, {1}));
  CHECK(e.page(2).module().is_zero());

  // equal weights: the pair dies on page 0
  ExtSpecSeq flat = ss(FilteredComplex::from_weights(F, 0, pair_d(F), {{0}, {0}}), 1);
  CHECK(flat.page(0).d().block({0, 0}) == mat(F, 1, 1, {1}));
  CHECK(flat.page(1).module().is_zero());
}

TEST_CASE("random filtered complexes give spectral sequences") {
  Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    FilteredComplex c = random_filtered(F5, rng, {0, 4, 3, 5});
    CHECK(c.validate().empty());
    ExtSpecSeq e = ss(c, c.length() + 1);
    CHECK(e.validate().empty());
    CHECK(spectral_and_stable(e));
    CHECK(e.page(c.length() + 1).d().is_zero());
    // E_0 is the associated graded
    for (int k = c.kmin(); k <= c.kmax(); ++k)
      for (int p = c.pmin(); p <= c.pmax(); ++p)
        CHECK(e.page(0).dim({p, p + k}) == c.filt(k, p).dim() - c.filt(k, p - 1).dim());
  }
}

TEST_CASE("Deligne filtrations are valid") {
  Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    FilteredComplex c = random_filtered(t % 2 ? F5 : F, rng, {0, 3, 3, 5});
    CHECK(dec_filtration(c).validate().empty());
    CHECK(decstar_filtration(c).validate().empty());
    CHECK(shift_filtration(c).validate().empty());
  }
  // trivial filtration: Dec refines it by cycles, Dec* by boundaries
  FilteredComplex c = FilteredComplex::trivial(F, 0, {mat(F, 1, 2, {0, 1}), mat(F, 0, 1)});
  FilteredComplex dc = dec_filtration(c), ds = decstar_filtration(c);
  CHECK(dc.filt(0, -1).dim() == 0);
  CHECK(dc.filt(0, 0) == kernel_space(c.d(0)));
  CHECK(dc.filt(0, 1) == Subspace::full(F, 2));
  CHECK(dc.filt(1, 1) == Subspace::full(F, 1));
  CHECK(ds.filt(1, 0) == image(c.d(0)));
  CHECK(ds.filt(1, -1).dim() == 0);
  CHECK(ds.filt(0, 0) == Subspace::full(F, 2));
  CHECK(ds.filt(0, -1).dim() == 0);
}

TEST_CASE("E(SC) is the shift of E(C)") {
  Rng rng(33);
  CHECK(compat_shift(FilteredComplex::trivial(F, 0, pair_d(F)), 1).verified);
  for (int t = 0; t < 40; ++t) {
    FilteredComplex c = random_filtered(F5, rng, {0, 4, 3, 4});
    CompatReport rep = compat_shift(c, 1);
    CHECK_MESSAGE(rep.verified, rep.failure);
  }
}

TEST_CASE("E(Dec C) and Dec_1(E C)") {
  Rng rng(34);
  std::vector<FilteredComplex> cases{FilteredComplex::trivial(F, 0, {mat(F, 1, 2, {0, 1}), mat(F, 0, 1)}),
                                     FilteredComplex::from_weights(F, 0, pair_d(F), {{1}, {0}})};
  for (int t = 0; t < 30; ++t) cases.push_back(random_filtered(t % 3 ? F5 : F, rng, {0, 3, 3, 4}));
  for (const FilteredComplex& c : cases) {
    CompatDec rep = compat_dec(c, 1);
    CHECK_MESSAGE(rep.verified, rep.failure);
    if (!rep.verified) continue;
    // rho_1 u~_0 is Deligne's u_0
    CHECK(compose(rep.rho, rep.map.component(0)) == rep.u0);
    CHECK(rep.u0.is_surjective());
  }
}

TEST_CASE("E(Dec* C) and LDec_1(E C)") {
  Rng rng(35);
  std::vector<FilteredComplex> cases{FilteredComplex::trivial(F, 0, {mat(F, 1, 2, {0, 1}), mat(F, 0, 1)}),
                                     FilteredComplex::from_weights(F, 0, pair_d(F), {{1}, {0}})};
  for (int t = 0; t < 30; ++t) cases.push_back(random_filtered(t % 3 ? F5 : F, rng, {0, 3, 3, 4}));
  for (const FilteredComplex& c : cases) {
    CompatDecStar rep = compat_decstar(c, 1);
    CHECK_MESSAGE(rep.verified, rep.failure);
    if (!rep.verified) continue;
    // (a,b) -> [a + db] kills Im q_1 and induces page 0 of the inverse of v~
    CHECK(compose(rep.on_cone, rep.q).is_zero());
    CHECK(compose(rep.formula.component(0).translated(1), rep.coker_proj) == rep.on_cone);
    // page 0 of E(Dec* C) at T^{-1}(p, p+k) is B_1^{p+1} / B_1^{p}
    FilteredComplex ds = decstar_filtration(c);
    for (int k = c.kmin(); k <= c.kmax(); ++k)
      for (int p = c.pmin() - 1; p <= c.pmax(); ++p) {
        CHECK(ds.filt(k, p + k) == b_space(c, 1, p + 1, k));
        CHECK(ds.filt(k, p + k - 1) == b_space(c, 1, p, k));
      }
  }
}

TEST_CASE("page 0 of E(Dec C) is Z_1 / Z_1") {
  Rng rng(36);
  for (int t = 0; t < 20; ++t) {
    FilteredComplex c = random_filtered(F5, rng, {0, 3, 3, 4});
    FilteredComplex dc = dec_filtration(c);
    for (int k = c.kmin(); k <= c.kmax(); ++k)
      for (int p = c.pmin() - 1; p <= c.pmax() + 1; ++p) CHECK(dc.filt(k, p + k) == z_space(c, 1, p, k));
  }
}

TEST_CASE("induced maps") {
  // identity
  Rng rng(37);
  FilteredComplex c = random_filtered(F, rng, {0, 2, 2, 4});
  std::vector<Matrix> id;
  for (int k = c.kmin(); k <= c.kmax(); ++k) id.push_back(Matrix::identity(F, c.dim(k)));
  const int h = c.length() + 1;
  CHECK(ss_map({c, c, id}, h) == ESSMap::identity(ss(c, h)));

  // inclusion of F_0 into a complex with basis-aligned weights
  // A^0 = <x0, x1>, A^1 = <y0, y1>, d x_i = y_i, weights x: (0, 1), y: (0, 0)
  std::vector<Matrix> d{mat(F, 2, 2, {1, 0, 0, 1}), mat(F, 0, 2)};
  FilteredComplex big = FilteredComplex::from_weights(F, 0, d, {{0, 1}, {0, 0}});
  FilteredComplex sub = FilteredComplex::from_weights(F, 0, {mat(F, 2, 1, {1, 0}), mat(F, 0, 2)}, {{0}, {0, 0}});
  FilteredMap inc{sub, big, {mat(F, 2, 1, {1, 0}), Matrix::identity(F, 2)}};
  CHECK(inc.validate().empty());
  ESSMap e = ss_map(inc, 3);
  CHECK(e.validate().empty());
  for (int i = 0; i <= 3; ++i) CHECK(is_chain_map(e.component(i), e.source().page(i), e.target().page(i)));

  // projection killing an acyclic summand: E_1(f) iso
  FilteredComplex with = FilteredComplex::trivial(F, 0, {mat(F, 1, 2, {0, 1}), mat(F, 0, 1)});
  FilteredComplex point = FilteredComplex::trivial(F, 0, {mat(F, 0, 1), mat(F, 0, 0)});
  FilteredMap proj{with, point, {mat(F, 1, 2, {1, 0}), mat(F, 0, 1)}};
  ESSMap pe = ss_map(proj, 2);
  CHECK(pe.component(1).is_iso());
  CHECK(weq_strict(pe, 0));

  // a map that lowers filtration is rejected
  FilteredComplex low = FilteredComplex::from_weights(F, 0, pair_d(F), {{1}, {1}});
  FilteredComplex high = FilteredComplex::from_weights(F, 0, pair_d(F), {{0}, {0}});
  FilteredMap bad{high, low, {mat(F, 1, 1, {1}), mat(F, 1, 1, {1})}};
  CHECK_FALSE(bad.validate().empty());
  CHECK_THROWS_AS(ss_map(bad, 2), ValidationError);
}
