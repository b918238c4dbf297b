#include "doctest.h"
#include "ssq/decalage.hpp"

using namespace ssq;

namespace {

const Field F = Field::default_field();

EssShape small_shape(int horizon) {
  EssShape s;
  s.horizon = horizon;
  s.complex.window = 1;
  s.complex.max_pieces = 3;
  return s;
}

Bidegree T(Bidegree b, int k) {
  for (int i = 0; i < k; ++i) b = {2 * b.p - b.n, b.p};
  for (int i = 0; i > k; --i) b = {b.n, 2 * b.n - b.p};
  return b;
}

bool valid(const ExtSpecSeq& x) { return x.validate().empty(); }
bool valid(const ESSMap& f) { return f.validate().empty(); }

bool spectral(const ExtSpecSeq& x) {
  for (int i = 1; i <= x.horizon(); ++i)
    if (!x.phi(i).is_iso()) return false;
  return true;
}

}  // namespace

TEST_CASE("shift of the zero object and of a unit") {
  ExtSpecSeq z(F);
  for (int r = 0; r <= 3; ++r) CHECK(shift_r(z, r).is_zero());

  ExtSpecSeq u = unit(F, {1, 0}, 2);
  for (int r = 1; r <= 3; ++r) {
    ExtSpecSeq s = shift_r(u, r);
    CHECK(valid(s));
    CHECK(s.horizon() == u.horizon() + r);
    for (int i = 0; i <= s.horizon(); ++i) {
      const RComplex& src = u.page(std::max(0, i - r));
      for (auto& [b, d] : src.module().dims()) CHECK(s.page(i).dim(T(b, r)) == d);
      CHECK(s.page(i).module().total_dim() == src.module().total_dim());
    }
    // pages below r carry no differential
    for (int i = 0; i < r; ++i) CHECK(s.page(i).d().is_zero());
  }
}

TEST_CASE("translation bookkeeping") {
  for (int p = -3; p <= 3; ++p)
    for (int n = -3; n <= 3; ++n) {
      CHECK(T(T({p, n}, 2), -2) == Bidegree{p, n});
      CHECK(T({p, n}, 1) == Bidegree{2 * p - n, p});
    }
}

TEST_CASE("functors preserve validity and spectral objects") {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const int r = 1 + t % 2;
    ExtSpecSeq x = random_ess(F, rng, small_shape(r + 2));
    ExtSpecSeq s = random_spectral(F, rng, small_shape(r + 2));
    using Fn = ExtSpecSeq (*)(const ExtSpecSeq&, int);
    for (Fn g : {Fn(&shift_r), Fn(&dec_r), Fn(&ldec_r)}) {
      CHECK(valid(g(x, r)));
      ExtSpecSeq gs = g(s, r);
      CHECK(valid(gs));
      CHECK(spectral(gs));
    }
  }
}

TEST_CASE("functors on maps") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const int r = 1 + t % 2;
    ExtSpecSeq x = random_ess(F, rng, small_shape(r + 2));
    ExtSpecSeq y = random_ess(F, rng, small_shape(r + 2));
    ESSMap f = random_hom(x, y, rng);
    ESSMap g = random_hom(y, y, rng);
    CHECK(valid(shift_r(f, r)));
    CHECK(valid(dec_r(f, r)));
    CHECK(valid(ldec_r(f, r)));
    // functoriality
    CHECK(compose(dec_r(g, r), dec_r(f, r)) == dec_r(compose(g, f), r));
    CHECK(compose(ldec_r(g, r), ldec_r(f, r)) == ldec_r(compose(g, f), r));
    CHECK(compose(shift_r(g, r), shift_r(f, r)) == shift_r(compose(g, f), r));
    CHECK(dec_r(ESSMap::identity(x), r) == ESSMap::identity(dec_r(x, r)));
  }
}

TEST_CASE("decalage undoes the shift") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const int r = 1 + t % 3;
    ExtSpecSeq x = random_ess(F, rng, small_shape(2));
    ExtSpecSeq s = shift_r(x, r);
    CHECK(iso_check(dec_r(s, r), x).has_value());
    CHECK(iso_check(ldec_r(s, r), x).has_value());
    ESSMap eta = shift_dec_unit(x, r);
    CHECK(valid(eta));
    CHECK(is_iso(eta));
    ESSMap eps = ldec_shift_counit(x, r);
    CHECK(valid(eps));
    CHECK(is_iso(eps));
  }
}

TEST_CASE("remaining unit and counit are natural maps") {
  Rng rng(14);
  for (int t = 0; t < 40; ++t) {
    const int r = 1 + t % 2;
    ExtSpecSeq x = random_ess(F, rng, small_shape(r + 2));
    ESSMap eps = shift_dec_counit(x, r);
    CHECK(valid(eps));
    CHECK(weq_strict(eps, r));
    ESSMap eta = ldec_shift_unit(x, r);
    CHECK(valid(eta));
  }
}

TEST_CASE("triangle identities") {
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    const int r = 1 + t % 2;
    ExtSpecSeq x = random_ess(F, rng, small_shape(r + 1));
    // Shift -| Dec:  eps_{Shift x} . Shift(eta_x) = id
    ESSMap a = compose(shift_dec_counit(shift_r(x, r), r), shift_r(shift_dec_unit(x, r), r));
    CHECK(a == ESSMap::identity(shift_r(x, r)));
    // Dec(eps_y) . eta_{Dec y} = id
    ESSMap b = compose(dec_r(shift_dec_counit(x, r), r), shift_dec_unit(dec_r(x, r), r));
    CHECK(b == ESSMap::identity(dec_r(x, r)));
    // LDec -| Shift:  Shift(eps_y) . eta_{Shift y} = id
    ESSMap c = compose(shift_r(ldec_shift_counit(x, r), r), ldec_shift_unit(shift_r(x, r), r));
    CHECK(c == ESSMap::identity(shift_r(x, r)));
    // eps_{LDec x} . LDec(eta_x) = id
    ESSMap d = compose(ldec_shift_counit(ldec_r(x, r), r), ldec_r(ldec_shift_unit(x, r), r));
    CHECK(d == ESSMap::identity(ldec_r(x, r)));
  }
}

TEST_CASE("connecting map") {
  Rng rng(16);
  for (int t = 0; t < 40; ++t) {
    const int r = 1 + t % 3;
    ExtSpecSeq x = t % 2 ? random_ess(F, rng, small_shape(r + 1)) : random_spectral(F, rng, small_shape(r + 1));
    QrData d = qr_data(x, r);
    ConnectingMap c = connecting_map(d);
    CHECK(c.invertible);
    Rng prng(100 + t);
    for (int k = 0; k < 3; ++k) CHECK(connecting_map(d, &prng).matrix == c.matrix);
    // q anticommutes with the differentials
    CHECK(compose(d.cone.d(), d.q) + compose(d.q, d.nerve_page.d()) == BigradedMap(d.nerve_page.module(), d.cone.module(), diff_degree(r) + diff_degree(r)));
    // dims along 0 -> (N X)_r / Ker q -> Cone -> Cone / Im q -> 0, shifted by diff(r)
    for (auto& [b, dim] : d.cone.module().dims())
      CHECK(dim == d.coimage.complex.dim(b - diff_degree(r)) + d.coker.complex.dim(b));
  }
}

TEST_CASE("q is injective on spectral objects") {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    const int r = 1 + t % 3;
    ExtSpecSeq x = random_spectral(F, rng, small_shape(r + 1));
    QrData d = qr_data(x, r);
    for (auto& [b, dim] : d.nerve_page.module().dims()) CHECK(d.q.block(b).rank() == dim);
  }
}

TEST_CASE("presheaf routes agree with the direct formulas") {
  Rng rng(18);
  for (int t = 0; t < 30; ++t) {
    const int r = 1 + t % 2;
    ExtSpecSeq x = random_ess(F, rng, small_shape(r + 1));
    CHECK(iso_check(dec_r_presheaf(x, r), dec_r(x, r)).has_value());
    CHECK(iso_check(ldec_r_presheaf(x, r), ldec_r(x, r)).has_value());
  }
}

TEST_CASE("adjunction bijections") {
  Rng rng(19);
  for (int t = 0; t < 20; ++t) {
    const int r = 1 + t % 2;
    ExtSpecSeq x = random_ess(F, rng, small_shape(r + 1));
    ExtSpecSeq y = random_ess(F, rng, small_shape(r + 1));
    for (Pairing p : {Pairing::ShiftDec, Pairing::LDecShift}) {
      AdjunctionReport a = adjunction_witness(p, x, y, r);
      CHECK_MESSAGE(a.bijection, pairing_name(p), " ", a.left, " vs ", a.right);
      CHECK(a.left == a.right);
    }
  }
}

TEST_CASE("weak equivalence transfer") {
  for (int r = 1; r <= 2; ++r) {
    DwyerKanReport rep = dwyer_kan_check(r, 40, 20 + r);
    CHECK(rep.passed());
    CHECK(rep.samples == 40);
  }
  DwyerKanReport rep = dwyer_kan_check(1, 40, 7);
  REQUIRE(rep.ldec_counterexample.has_value());
  CHECK(weq_strict(*rep.ldec_counterexample, 1));
  CHECK_FALSE(weq_strict(ldec_r(*rep.ldec_counterexample, 1), 0));
}
