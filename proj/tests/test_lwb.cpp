#include "doctest.h"
#include "ssq/lwb.hpp"

using namespace ssq;

namespace {

const Field F = Field::default_field();
const RepKind kKinds[] = {RepKind::Y, RepKind::Z, RepKind::S, RepKind::W};

BigradedModule mod(std::map<Bidegree, std::size_t> dims) { return BigradedModule(F, dims); }

// Homology dimensions of the key objects, page by page, read off the table of key objects.
BigradedModule expected_homology(RepKind k, IndexObject x, int i) {
  const Bidegree a{x.p, x.n}, b{x.p - x.r, x.n + 1 - x.r};
  switch (k) {
    case RepKind::Y:
      if (i < x.r) return direct_sum(mod({{a, 1}}), mod({{b, 1}}));
      return mod({});
    case RepKind::Z:
    case RepKind::S:
      return i <= x.r ? mod({{a, 1}}) : mod({});
    case RepKind::W:
      return i < x.r ? mod({{b, 1}}) : mod({});
  }
  return mod({});
}

std::vector<IndexObject> objects(int rmax, int pn, int rmin = 0) {
  std::vector<IndexObject> out;
  for (int r = rmin; r <= rmax; ++r)
    for (int p = -pn; p <= pn; ++p)
      for (int n = -pn; n <= pn; ++n) out.push_back({r, p, n});
  return out;
}

bool same_stored(const WitnessBook& a, const WitnessBook& b, int top) {
  for (int i = 0; i <= top; ++i) {
    if (a.page(i) != b.page(i)) return false;
    if (i < top && (a.w(i + 1) != b.w(i + 1) || a.s(i) != b.s(i))) return false;
  }
  return true;
}

WitnessBook random_sum(const std::vector<WitnessBook>& parts, int h, Rng& rng) {
  return scrambled(direct_sum(parts, h, F), rng);
}

WitnessBook random_rep_sum(Rng& rng, int h) {
  std::vector<WitnessBook> parts;
  int count = 1 + static_cast<int>(rng() % 3);
  for (int c = 0; c < count; ++c) {
    RepKind k = kKinds[rng() % 4];
    IndexObject x{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3) - 1, static_cast<int>(rng() % 3) - 1};
    if (k == RepKind::W && x.r == 0) x.r = 1;
    parts.push_back(representable(k, x, F, h));
  }
  return random_sum(parts, h, rng);
}

}  // namespace

TEST_CASE("table of key objects") {
  for (auto x : objects(3, 2))
    for (auto k : kKinds) {
      if (k == RepKind::W && x.r == 0) continue;
      const int h = 2 * x.r + 3;
      WitnessBook l = representable(k, x, F, h);
      for (int i = 0; i <= h; ++i) {
        CAPTURE(rep_name(k) + x.str());
        CAPTURE(i);
        CHECK(homology(l.page(i)).module == expected_homology(k, x, i));
      }
    }
}

TEST_CASE("representables are valid and their tails match the presheaf") {
  for (auto x : objects(3, 1))
    for (auto k : kKinds) {
      if (k == RepKind::W && x.r == 0) continue;
      CAPTURE(rep_name(k) + x.str());
      WitnessBook l = representable(k, x, F, x.r);
      CHECK(l.validate().empty());
      const int top = x.r + 3;
      WitnessBook direct = representable_presheaf(k, x, F, top);
      CHECK(direct.validate().empty());
      CHECK(same_stored(l.extended(top), direct, top));
      CHECK(representable(k, x, F, top) == l.extended(top));
    }
  // the basis of Y(r,p,n): two classes on every page
  WitnessBook y = representable(RepKind::Y, {2, 0, 0}, F, 6);
  for (int i = 0; i <= 6; ++i) CHECK(y.page(i).module().total_dim() == 2);
  CHECK(y.page(4).module() == mod({{{2, 2}, 1}, {{-2, -1}, 1}}));
  CHECK(representable(RepKind::S, {1, 0, 0}, F, 5).page(2).module().is_zero());
  CHECK_THROWS_AS(representable(RepKind::W, {0, 0, 0}, F, 2), RangeError);
}

TEST_CASE("validation reports broken relations") {
  WitnessBook y = representable(RepKind::Y, {1, 0, 0}, F, 4);
  CHECK(y.validate().empty());
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  for (int i = 0; i <= 4; ++i) pages.push_back(y.page(i));
  for (int i = 0; i < 4; ++i) {
    w.push_back(y.w(i + 1));
    s.push_back(y.s(i));
  }
  // on page 0 both sides of d = w d s vanish, so break w_2
  w[1] = w[1].scaled(Scalar(F, -1L));
  auto report = WitnessBook(pages, w, s, BookTail::cone(1)).validate();
  REQUIRE_FALSE(report.empty());
  bool found = false;
  for (auto& line : report) found = found || line.find("d != w d s") != std::string::npos;
  CHECK(found);

  // stored pages above a cone tail must be the tail
  w[0] = y.w(1);
  std::vector<BigradedMap> s2 = s;
  s2[3] = s2[3].scaled(Scalar(F, 2L));
  report = WitnessBook(pages, w, s2, BookTail::cone(1)).validate();
  found = false;
  for (auto& line : report) found = found || line.find("cone tail") != std::string::npos;
  CHECK(found);
  CHECK_THROWS_AS(WitnessBook(pages, w, s, BookTail::cone(5)), RangeError);
  w.pop_back();
  CHECK_THROWS_AS(WitnessBook(pages, w, s, BookTail::zero()), InvalidBook);
}

TEST_CASE("tails extend and truncate consistently") {
  WitnessBook z = representable(RepKind::Z, {2, 1, 0}, F, 2);
  WitnessBook z6 = z.extended(6);
  CHECK(z6.validate().empty());
  CHECK(z6.truncated(2) == z);
  CHECK(z6.truncated(1).tail() == BookTail::unspecified());
  CHECK_THROWS_AS(z6.truncated(1).page(2), HorizonError);
  WitnessBook s = representable(RepKind::S, {1, 0, 0}, F, 4);
  CHECK(s.truncated(1).tail() == BookTail::zero());
  CHECK(s.truncated(0).tail() == BookTail::unspecified());
  CHECK(WitnessBook(F).is_zero());
  CHECK(WitnessBook(F).validate().empty());
}

TEST_CASE("membership predicates on key objects") {
  for (auto x : objects(2, 1)) {
    CAPTURE(x.str());
    WitnessBook sf = representable(RepKind::S, x, F, x.r + 2);
    WitnessBook z = representable(RepKind::Z, x, F, x.r + 2);
    WitnessBook y = representable(RepKind::Y, x, F, x.r + 2);
    Verdict vs = lwbe_verdict(sf), vz = lwbe_verdict(z);
    CHECK(vs.holds);
    CHECK(vs.exact);
    CHECK_FALSE(vz.holds);
    CHECK(vz.exact);
    CHECK(in_lwbs(y));
    CHECK_FALSE(in_lwbs(sf));
    if (x.r >= 1) CHECK(in_lwbe(representable(RepKind::W, x, F, x.r + 2)));
  }
  WitnessBook y = representable_presheaf(RepKind::Y, {1, 0, 0}, F, 3);
  Verdict v = lwbs_verdict(y);
  CHECK(v.holds);
  CHECK_FALSE(v.exact);
}

TEST_CASE("lifting families agree with the predicates") {
  const Family fams[] = {Family::Tau, Family::SigmaOmega, Family::OmegaSigma};
  WitnessBook zero(F);
  for (auto fam : fams) CHECK(rlp_family_check(zero, fam));

  auto agree = [&](const WitnessBook& l) {
    bool e = in_lwbe(l);
    CHECK(e == rlp_family_check(l, Family::Tau));
    if (!e) return;
    bool surj = true, inj = true;
    const int last = l.tail_known() ? l.horizon() : l.horizon() - 1;
    for (int i = 0; i <= last; ++i) {
      surj = surj && phi_surjective(l, i);
      inj = inj && phi_injective(l, i);
    }
    CHECK(surj == rlp_family_check(l, Family::OmegaSigma));
    CHECK(inj == rlp_family_check(l, Family::SigmaOmega));
    CHECK(in_lwbs(l) == (surj && inj));
  };
  for (auto x : objects(2, 0))
    for (auto k : kKinds) {
      if (k == RepKind::W && x.r == 0) continue;
      CAPTURE(rep_name(k) + x.str());
      agree(representable(k, x, F, x.r + 2));
    }
  for (auto fam : fams) CHECK(rlp_family_check(representable(RepKind::Y, {1, 0, 0}, F, 3), fam));
  CHECK_FALSE(rlp_family_check(representable(RepKind::Z, {1, 0, 0}, F, 3), Family::Tau));

  Rng rng(11);
  for (int t = 0; t < 25; ++t) agree(random_rep_sum(rng, 4));
}

TEST_CASE("hom spaces out of representables") {
  for (auto x : objects(2, 1)) {
    WitnessBook y = representable(RepKind::Y, x, F, x.r + 1);
    CHECK(hom_dim(y, y) == 1);
    auto id = hom_from_representable(RepKind::Y, x, y);
    REQUIRE(id.size() == 1);
    CHECK(id[0] == WBMap::identity(y));
  }
  // dim Hom(K(x), L) against the book hom system, on key objects and random sums
  Rng rng(5);
  std::vector<WitnessBook> targets;
  for (int t = 0; t < 8; ++t) targets.push_back(random_rep_sum(rng, 4));
  targets.push_back(representable(RepKind::Z, {1, 0, 0}, F, 4));
  targets.push_back(representable(RepKind::W, {2, 0, 0}, F, 4));
  for (auto& l : targets)
    for (auto x : objects(2, 1))
      for (auto k : kKinds) {
        if (k == RepKind::W && x.r == 0) continue;
        CAPTURE(rep_name(k) + x.str());
        auto maps = hom_from_representable(k, x, l);
        WitnessBook src = representable(k, x, F, l.horizon());
        CHECK(maps.size() == hom_dim(src, l));
        for (auto& m : maps) CHECK(m.validate().empty());
        const std::size_t full = l.page(x.r).dim(x.bidegree());
        if (k == RepKind::Y) CHECK(maps.size() == full);
        if (k == RepKind::Z) CHECK(maps.size() == full - l.d(x.r).block(x.bidegree()).rank());
      }
  CHECK(hom_from_representable(RepKind::Z, {1, 0, 0}, WitnessBook(F)).empty());
  CHECK_THROWS_AS(hom_from_representable(RepKind::Y, {3, 0, 0}, representable_presheaf(RepKind::Y, {0, 0, 0}, F, 2)),
                  HorizonError);
}

TEST_CASE("morphisms of D act on representables") {
  Scalar one(F, 1L);
  for (auto x : objects(2, 1)) {
    WBMap tau = representable_morphism(RepKind::Z, RepKind::S, NormalMorphism{NormalKind::Identity, x, x, 0, one}, 4);
    CHECK(tau.validate().empty());
    for (int i = 0; i <= 4; ++i) CHECK(tau.component(i).is_surjective());
    WBMap so = representable_morphism(RepKind::W, RepKind::Y, normalize(make_word({sigma(x.r, x.p, x.n)}, one)), 4);
    CHECK(so.validate().empty());
    WBMap os = representable_morphism(RepKind::S, RepKind::Y, normalize(make_word({omega(x.r + 1, x.p, x.n)}, one)), 4);
    CHECK(os.validate().empty());
    CHECK(yoneda_element(os, x) == Matrix::identity(F, 1));
  }
  // Z(r,p,n) is not a legal target for an element outside Ker d_r
  WitnessBook y = representable(RepKind::Y, {1, 0, 0}, F, 2);
  CHECK_THROWS_AS(yoneda_map(RepKind::Z, {1, 0, 0}, y, Matrix::identity(F, 1)), PreconditionError);
}

TEST_CASE("S_r") {
  for (auto x : objects(2, 1)) {
    WitnessBook y = representable(RepKind::Y, x, F, x.r + 3);
    for (int i = 1; i <= x.r + 3; ++i) {
      SubComplex s = s_sub(y, i);
      if (i <= x.r) CHECK(s.complex.module().is_zero());
      else CHECK(s.complex.module() == y.page(i).module());
    }
  }
  Rng rng(9);
  for (int t = 0; t < 15; ++t) {
    WitnessBook l = random_rep_sum(rng, 4);
    if (!in_lwbe(l)) continue;
    for (int i = 1; i <= 3; ++i) {
      SubComplex s = s_sub(l, i);
      CHECK(homology(s.complex).module.is_zero());
      // the sum s L + d s L is direct
      BigradedMap sm = l.s(i - 1);
      for (auto& [b, d] : s.complex.module().dims()) {
        std::size_t a = Subspace::span(sm.block(b - Bidegree{1, 1})).dim();
        Bidegree from = b - diff_degree(i);
        std::size_t c = Subspace::span(l.d(i).block(from) * sm.block(from - Bidegree{1, 1})).dim();
        CHECK(d == a + c);
      }
    }
  }
  // s = 0 gives S = 0
  WitnessBook sf = representable(RepKind::S, {2, 0, 0}, F, 3);
  CHECK(s_sub(sf, 1).complex.module().is_zero());
  CHECK_THROWS_AS(s_sub(sf, 0), RangeError);
}

TEST_CASE("left adjoint of truncation") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    WitnessBook l = random_rep_sum(rng, 5);
    for (int r = 0; r <= 2; ++r)
      for (int top = r; top <= 3; ++top) {
        TruncatedBook u = trunc_U(l, r, top);
        CHECK(u.validate().empty());
        WitnessBook fl = trunc_F(u, 5);
        CHECK(fl.validate().empty());
        // unit is the identity: U F U L = U L
        CHECK(trunc_U(fl, r, top) == u);
        WBMap eps = trunc_F_counit(l, r, top, 5);
        CHECK(eps.validate().empty());
        for (int i = r; i <= top; ++i) CHECK(eps.component(i) == BigradedMap::identity(l.page(i).module()));
      }
  }
}

TEST_CASE("homology of F on a single page") {
  Rng rng(4);
  for (int r = 0; r <= 3; ++r)
    for (int t = 0; t < 5; ++t) {
      RComplex c = random_complex(F, r, rng);
      WitnessBook fc = trunc_F(TruncatedBook{r, {c}, {}, {}}, r + 3);
      CHECK(fc.validate().empty());
      BigradedModule hc = homology(c).module;
      for (int m = 0; m <= r + 3; ++m) {
        BigradedModule h = homology(fc.page(m)).module;
        if (m < r) CHECK(h == c.module());
        else if (m == r) CHECK(h == hc);
        else CHECK(h.is_zero());
      }
    }
  // F_[r] of a single class is Z(r,p,n)
  for (auto x : objects(3, 1)) {
    RComplex c(x.r, mod({{x.bidegree(), 1}}));
    WitnessBook fc = trunc_F(TruncatedBook{x.r, {c}, {}, {}}, x.r + 2);
    CHECK(iso_check(fc, representable(RepKind::Z, x, F, x.r + 2)).has_value());
  }
}

TEST_CASE("right adjoint of truncation") {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    WitnessBook l = random_rep_sum(rng, 5);
    for (int r = 0; r <= 2; ++r)
      for (int top = r; top <= 3; ++top) {
        TruncatedBook u = trunc_U(l, r, top);
        WitnessBook rl = trunc_R(u, 5);
        CHECK(rl.validate().empty());
        CHECK(trunc_U(rl, r, top) == u);
        WBMap eta = trunc_R_unit(l, r, top, 5);
        CHECK(eta.validate().empty());
      }
  }
  // R_[r] does not preserve lwbe below r
  WitnessBook sf = representable(RepKind::S, {1, 0, 0}, F, 3);
  CHECK(in_lwbe(sf));
  CHECK_FALSE(in_lwbe(trunc_R(trunc_U(sf, 1, 2), 3).truncated(2)));
}

TEST_CASE("left Kan extension along W") {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    WitnessBook l = random_rep_sum(rng, 4);
    for (int r = 0; r <= 2; ++r) {
      TruncatedBook ws = w_shriek(l, r, 4);
      CHECK(ws.validate().empty());
      WBMap eta = w_shriek_unit(l, r, 4);
      CHECK(eta.validate().empty());
      if (r == 0) CHECK(is_iso(eta));
      WitnessBook ext = lower_extension(ws);
      if (in_lwbe(l)) CHECK(in_lwbe(ext.truncated(3)));
    }
  }
}

TEST_CASE("translating truncated books") {
  Rng rng(2);
  WitnessBook l = random_rep_sum(rng, 4);
  TruncatedBook u = trunc_U(l, 1, 3);
  TruncatedBook v = translate(u, 2);
  CHECK(v.r == 3);
  CHECK(v.validate().empty());
  CHECK(translate(v, -2) == u);
  CHECK_THROWS_AS(translate(u, -2), RangeError);
}

TEST_CASE("hom system exactness and iso_check") {
  WitnessBook y = representable(RepKind::Y, {1, 0, 0}, F, 2);
  BookHomSystem h(y, y);
  CHECK(h.exact());
  Rng rng(3);
  std::vector<WitnessBook> parts{representable(RepKind::Y, {1, 0, 0}, F, 3), representable(RepKind::S, {0, 1, 0}, F, 3)};
  WitnessBook a = random_sum(parts, 3, rng), b = random_sum(parts, 3, rng);
  auto iso = iso_check(a, b);
  REQUIRE(iso);
  CHECK(iso->validate().empty());
  CHECK_FALSE(iso_check(a, random_sum({parts[0]}, 3, rng)));
  for (auto& m : hom_basis(a, b)) CHECK(m.validate().empty());
  WBMap f = random_hom(a, b, rng);
  CHECK(compose(WBMap::identity(b), f) == f);
}
