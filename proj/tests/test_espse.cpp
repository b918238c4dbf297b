#include <functional>
#include <set>

#include "doctest.h"
#include "ssq/espse.hpp"

using namespace ssq;

namespace {

const Field F101 = Field::prime(101);

// Pagewise change of basis: returns y and the isomorphism x -> y.
std::pair<ExtSpecSeq, ESSMap> scramble(const ExtSpecSeq& x, Rng& rng) {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> g, phi;
  for (int i = 0; i <= x.horizon(); ++i) {
    const RComplex& p = x.stored_page(i);
    BigradedMap gi = BigradedMap::build(p.module(), p.module(), {0, 0},
                                        [&](Bidegree b) { return random_invertible(x.field(), p.dim(b), rng); });
    BigradedMap inv = BigradedMap::build(p.module(), p.module(), {0, 0},
                                         [&](Bidegree b) { return gi.block(b).inverse(); });
    pages.emplace_back(i, p.module(), compose(compose(gi, p.d()), inv));
    g.push_back(gi);
    if (i >= 1) {
      Homology hx = x.stored_homology(i - 1), hy = homology(pages[i - 1]);
      BigradedMap hg = homology_map(g[i - 1], hx, hy);
      phi.push_back(compose(compose(hg, x.phi(i)), inv));
    }
  }
  ExtSpecSeq y(pages, phi, x.tail());
  return {y, ESSMap(x, y, g)};
}

// Number of maps x -> y over a tiny prime field, by exhaustive enumeration.
std::size_t brute_force_maps(const ExtSpecSeq& x, const ExtSpecSeq& y) {
  const Field f = x.field();
  const long p = f.characteristic();
  int ext = common_extent(x, y);
  struct Slot {
    int page;
    Bidegree b;
    std::size_t i, j;
  };
  std::vector<Slot> slots;
  for (int k = 0; k <= ext; ++k) {
    RComplex xp = x.page(k), yp = y.page(k);
    for (auto& [b, d] : xp.module().dims())
      for (std::size_t i = 0; i < yp.dim(b); ++i)
        for (std::size_t j = 0; j < d; ++j) slots.push_back({k, b, i, j});
  }
  std::size_t total = 1;
  for (std::size_t s = 0; s < slots.size(); ++s) total *= static_cast<std::size_t>(p);
  std::size_t hits = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<BigradedMap> comps;
    for (int k = 0; k <= ext; ++k) comps.push_back(BigradedMap::zero(x.page(k).module(), y.page(k).module()));
    std::map<std::pair<int, Bidegree>, Matrix> blocks;
    std::size_t c = code;
    for (auto& s : slots) {
      auto key = std::make_pair(s.page, s.b);
      if (!blocks.count(key)) blocks.emplace(key, Matrix(f, y.page(s.page).dim(s.b), x.page(s.page).dim(s.b)));
      blocks.at(key).set_int(s.i, s.j, static_cast<long>(c % p));
      c /= p;
    }
    for (auto& [key, m] : blocks) comps[key.first].set_block(key.second, m);
    if (ESSMap(x, y, comps).validate().empty()) ++hits;
  }
  return hits;
}

std::size_t slot_count(const ExtSpecSeq& x, const ExtSpecSeq& y) {
  std::size_t n = 0;
  for (int k = 0; k <= common_extent(x, y); ++k) {
    RComplex xp = x.page(k), yp = y.page(k);
    for (auto& [b, d] : xp.module().dims()) n += d * yp.dim(b);
  }
  return n;
}

}  // namespace

TEST_CASE("discs and units") {
  ExtSpecSeq d = disc(F101, 1, {0, 0}, 3);
  CHECK(d.validate().empty());
  CHECK(is_spectral(d));
  CHECK(d.page(0).dim({0, 0}) == 1);
  CHECK(d.page(0).dim({-1, 0}) == 1);
  CHECK(d.page(0).d().is_zero());
  CHECK(d.page(1).d().block({0, 0}) == Matrix::identity(F101, 1));
  CHECK(d.page(2).module().is_zero());
  CHECK(d.page(7).module().is_zero());

  ExtSpecSeq u = unit(F101, {0, 0}, 2);
  CHECK(u.validate().empty());
  CHECK(is_spectral(u));
  for (int i = 0; i < 6; ++i) CHECK(u.page(i).dim({0, 0}) == 1);
  CHECK(u.phi(5).is_iso());

  ExtSpecSeq t0 = unit_trunc(F101, 0, {0, 0}, 0);
  CHECK(t0.horizon() == 0);
  CHECK(t0.page(1).module().is_zero());
  ExtSpecSeq t1 = unit_trunc(F101, 1, {0, 0}, 3);
  CHECK(t1.validate().empty());
  CHECK_FALSE(is_spectral(t1));
  CHECK(is_spectral(ExtSpecSeq(F101)));
}

TEST_CASE("validate reports a mistyped characteristic map") {
  ExtSpecSeq d = disc(F101, 1, {0, 0}, 2);
  std::vector<RComplex> pages{d.page(0), d.page(1), d.page(2)};
  BigradedModule wrong(F101, {{{5, 5}, 1}});
  std::vector<BigradedMap> phi{BigradedMap::zero(d.page(1).module(), wrong), d.phi(2)};
  ExtSpecSeq bad(pages, phi, Tail::Zero);
  auto rep = bad.validate();
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].find("phi_1") != std::string::npos);
}

TEST_CASE("model classes on standard maps") {
  for (int r = 0; r <= 2; ++r) {
    ExtSpecSeq d = disc(F101, r, {1, 0}, r + 2);
    ESSMap id = ESSMap::identity(d);
    CHECK(fib(id, r));
    CHECK(weq(id, r));
    CHECK(weq_strict(id, r));
    ESSMap to0 = ESSMap::zero(d, ExtSpecSeq(F101));
    CHECK(to0.validate().empty());
    CHECK(fib(to0, r));
    CHECK(weq(to0, r));
    CHECK(weq_strict(to0, r));

    // unit_trunc(r) -> unit: identity on pages <= r.  No nonzero map goes
    // the other way, since phi_{r+1} of the target vanishes.
    ExtSpecSeq u = unit(F101, {0, 0}, r + 3), t = unit_trunc(F101, r, {0, 0}, r + 3);
    CHECK(hom_dim(u, t) == 0);
    std::vector<BigradedMap> c;
    for (int i = 0; i <= r + 3; ++i)
      c.push_back(i <= r ? BigradedMap::identity(u.page(i).module())
                         : BigradedMap::zero(t.page(i).module(), u.page(i).module()));
    ESSMap f(t, u, c);
    CHECK(f.validate().empty());
    CHECK(fib(f, r));
    CHECK(weq(f, r));
    CHECK_FALSE(weq_strict(f, r));
  }
  Rng rng(1);
  ExtSpecSeq open = random_ess(F101, rng).truncated(1);
  CHECK_THROWS_AS(weq_strict(ESSMap::identity(open), 0), TailError);
  CHECK_THROWS_AS(fib(ESSMap::identity(open), 3), HorizonError);
}

TEST_CASE("hom space dimension matches exhaustive count over F2") {
  Rng rng(17);
  Field f2 = Field::prime(2);
  int tested = 0;
  EssShape shape{2, {1, 2}};
  for (int t = 0; t < 300 && tested < 25; ++t) {
    ExtSpecSeq x = random_ess(f2, rng, shape), y = random_ess(f2, rng, shape);
    if (slot_count(x, y) > 12 || slot_count(x, y) < 2) continue;
    ++tested;
    std::size_t n = hom_dim(x, y);
    CHECK(brute_force_maps(x, y) == (std::size_t(1) << n));
  }
  CHECK(tested >= 10);
}

TEST_CASE("tail squares are part of the hom space") {
  // a stable source into a zero-tailed target must kill H of the last page
  ExtSpecSeq u = unit(F101, {0, 0}, 1), t = unit_trunc(F101, 1, {0, 0}, 1);
  CHECK(hom_dim(u, t) == 0);
  CHECK(hom_dim(t, u) == 1);
  CHECK(hom_dim(u, u) == 1);
  CHECK(hom_dim(t, t) == 1);
}

TEST_CASE("random generators and iso_check") {
  Rng rng(3);
  for (Field f : {F101, Field::prime(5), Field::rational()}) {
    for (int t = 0; t < 20; ++t) {
      ExtSpecSeq x = random_ess(f, rng);
      CHECK(x.validate().empty());
      ExtSpecSeq s = random_spectral(f, rng);
      CHECK(s.validate().empty());
      CHECK(is_spectral(s));
      auto [y, g] = scramble(x, rng);
      CHECK(g.validate().empty());
      auto iso = iso_check(x, y, t);
      REQUIRE(iso.has_value());
      CHECK(iso->validate().empty());
      CHECK(is_iso(*iso));
      auto [s2, g2] = scramble(s, rng);
      CHECK(iso_check(s, s2, t).has_value());
    }
  }
  // same pages, different characteristic maps
  ExtSpecSeq u = unit(F101, {0, 0}, 2);
  std::vector<RComplex> pages{u.page(0), u.page(1), u.page(2)};
  std::vector<BigradedMap> zero{BigradedMap::zero(u.page(1).module(), u.page(0).module()), u.phi(2)};
  ExtSpecSeq v(pages, zero, Tail::Stable);
  CHECK_FALSE(iso_check(u, v).has_value());
}

TEST_CASE("pagewise colimits") {
  Rng rng(9);
  Field f = Field::prime(5);
  Colimit z = coproduct({ExtSpecSeq(f), ExtSpecSeq(f)}, f);
  CHECK(z.object.is_zero());
  CHECK(tensor(disc(f, 1, {0, 0}, 2), 3).page(0).dim({0, 0}) == 3);
  for (int t = 0; t < 30; ++t) {
    ExtSpecSeq a = disc(f, static_cast<int>(rng() % 3), {0, 0}, 2);
    ExtSpecSeq b = random_ess(f, rng, {2, {}}), c = random_ess(f, rng, {2, {}});
    ESSMap g1 = random_hom(a, b, rng), g2 = random_hom(a, c, rng);
    Colimit po = pushout(g1, g2);
    CHECK(po.object.validate().empty());
    for (auto& leg : po.cocone) CHECK(leg.validate().empty());
    CHECK(compose(po.cocone[0], g1) == compose(po.cocone[1], g2));
    for (int i = 0; i <= po.object.horizon(); ++i) {
      std::set<Bidegree> degs;
      for (auto& x : b.page(i).module().support()) degs.insert(x);
      for (auto& x : c.page(i).module().support()) degs.insert(x);
      for (auto& x : degs) {
        Matrix stacked = g1.component(i).block(x).vstack(-g2.component(i).block(x));
        CHECK(po.object.page(i).dim(x) == b.page(i).dim(x) + c.page(i).dim(x) - stacked.rank());
      }
    }
    // pushout along an identity
    Colimit along = pushout(ESSMap::identity(a), g1);
    CHECK(iso_check(along.object, b).has_value());

    // a cocone through the pushout factors through it uniquely
    ExtSpecSeq e = random_ess(f, rng, {2, {}});
    ESSMap m = random_hom(po.object, e, rng);
    EssHomSystem sys(po.object, e);
    for (int leg = 0; leg < 2; ++leg) {
      ESSMap u = compose(m, po.cocone[leg]);
      for (int i = 0; i <= sys.extent(); ++i) {
        BigradedMap l = po.cocone[leg].component(i);
        BigradedMap minus_u = -u.component(i);
        sys.equations().add({{nullptr, &sys.unknown(i), &l}}, &minus_u, l.source(), e.page(i).module());
      }
    }
    auto sol = sys.equations().system().solve();
    REQUIRE(sol.has_value());
    CHECK(sys.equations().system().kernel_dim() == 0);
    CHECK(sys.assemble(*sol) == m);
  }
}

TEST_CASE("stable tails propagate through colimits") {
  Field f = F101;
  ExtSpecSeq u = unit(f, {0, 0}, 1), d = disc(f, 2, {0, 0}, 2);
  Colimit c = coproduct({u, d}, f);
  CHECK(c.object.tail() == Tail::Stable);
  CHECK(c.object.validate().empty());
  CHECK(c.object.page(9).dim({0, 0}) == 1);
  for (auto& leg : c.cocone) CHECK(leg.validate().empty());
}
