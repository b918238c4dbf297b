#include <functional>

#include "doctest.h"
#include "ssq/dcat.hpp"

using namespace ssq;

namespace {

const Field F = Field::prime(101);

// Letters in application order leaving x.
std::vector<Letter> outgoing(IndexObject x) {
  std::vector<Letter> out{omega(x.r + 1, x.p, x.n), delta(x.r, x.p + x.r, x.n + x.r - 1)};
  if (x.r >= 1) out.push_back(sigma(x.r - 1, x.p - 1, x.n - 1));
  return out;
}

// All typed words of length 1..max_len starting at x, written order.
void for_each_word(IndexObject x, int max_len, const std::function<void(const std::vector<Letter>&)>& fn) {
  std::vector<Letter> applied;
  std::function<void(IndexObject)> go = [&](IndexObject at) {
    if (!applied.empty()) fn(std::vector<Letter>(applied.rbegin(), applied.rend()));
    if (static_cast<int>(applied.size()) == max_len) return;
    for (auto& l : outgoing(at)) {
      applied.push_back(l);
      go(l.target());
      applied.pop_back();
    }
  };
  go(x);
}

std::vector<IndexObject> objects(int rmax, int pn) {
  std::vector<IndexObject> out;
  for (int r = 0; r <= rmax; ++r)
    for (int p = -pn; p <= pn; ++p)
      for (int n = -pn; n <= pn; ++n) out.push_back({r, p, n});
  return out;
}

}  // namespace

TEST_CASE("parsing words") {
  MorphismWord w = parse_word("w_1^{0,0}", F);
  CHECK(w.source == IndexObject{0, 0, 0});
  CHECK(w.target == IndexObject{1, 0, 0});
  CHECK(w.letters.size() == 1);

  MorphismWord sdw = parse_word("s_0^{0,-1} . d_1^{1,0} . w_1^{0,0}", F);
  CHECK(sdw.source == IndexObject{0, 0, 0});
  CHECK(sdw.target == IndexObject{0, 0, -1});
  NormalMorphism m = normalize(sdw);
  CHECK(m.kind == NormalKind::Delta);
  CHECK(letters_of(m) == std::vector<Letter>{delta(0, 0, -1)});

  // d_1^{1,1} has source (1,0,1), which is not the target of w_1^{0,0}
  CHECK_THROWS_AS(parse_word("s_0^{0,0} . d_1^{1,1} . w_1^{0,0}", F), CompositionError);
  // undecorated generators are placed by their neighbours
  CHECK(normalize(parse_word("s_0 . d_1 . w_1", F)).kind == NormalKind::Delta);
  CHECK(parse_word("s_0 . d_1 . w_1^{2,3}", F).source == IndexObject{0, 2, 3});

  NormalMorphism dd = normalize(parse_word("d_1 . d_1", F));
  CHECK(dd.is_zero());
  CHECK(normalize(parse_word("s_0 . w_1", F)).is_zero());
  CHECK(normalize(parse_word("w_1 . s_0", F)).is_zero());

  CHECK(parse_word("3 w_2 . w_1", F).scalar == Scalar(F, 3L));
  CHECK(parse_word("-1/2 * d_0", Field::rational()).scalar.str() == "-1/2");

  CHECK_THROWS_AS(parse_word("w_1 . w_1", F), CompositionError);
  CHECK_THROWS_AS(parse_word("w_1^{0,0} . w_1^{0,0}", F), CompositionError);
  CHECK_THROWS_AS(parse_word("w_2^{0,0} . w_1^{0,1}", F), CompositionError);
  for (const char* bad : {"", "x_1", "w_0", "w_1^{0", "w_1 w_2", "w_1 .", "w_ 1", "1/0 w_1", "w_1^{a,b}"})
    CHECK_THROWS_AS(parse_word(bad, F), ParseError);
}

TEST_CASE("hom lemma rows") {
  auto h = hom_basis({0, 0, 0}, {2, 0, 0}, F);
  REQUIRE(h);
  CHECK(h->kind == NormalKind::OmegaPower);
  CHECK(h->power == 2);
  h = hom_basis({3, 2, 2}, {1, 0, 0}, F);
  REQUIRE(h);
  CHECK(h->kind == NormalKind::SigmaPower);
  CHECK(h->power == 2);
  CHECK_FALSE(hom_basis({0, 5, 5}, {0, 0, 0}, F));
  // delta_2 : (2,-2,-1) -> (2,0,0); delta_2 omega^2 from (0,-2,-1); sigma delta_3 from (3,-2,-1)
  CHECK(hom_basis({2, -2, -1}, {2, 0, 0}, F)->kind == NormalKind::Delta);
  CHECK(hom_basis({0, -2, -1}, {2, 0, 0}, F)->kind == NormalKind::DeltaOmega);
  CHECK(hom_basis({3, -2, -1}, {2, 0, 0}, F)->kind == NormalKind::SigmaDelta);
  CHECK(hom_basis({1, 1, 1}, {1, 1, 1}, F)->kind == NormalKind::Identity);

  // every basis element is a typed word that is already normal
  for (auto a : objects(3, 2))
    for (auto b : objects(3, 2)) {
      auto m = hom_basis(a, b, F);
      if (!m || m->kind == NormalKind::Identity) continue;
      MorphismWord w = make_word(letters_of(*m), m->scalar);
      CHECK(w.source == a);
      CHECK(w.target == b);
      CHECK(normalize(w) == *m);
      CHECK(redexes(w.letters).empty());
    }
}

TEST_CASE("rewriting is confluent and lands on the hom lemma") {
  std::size_t words = 0, zeros = 0;
  for (auto x : objects(3, 3))
    for_each_word(x, 6, [&](const std::vector<Letter>& letters) {
      MorphismWord w = make_word(letters, Scalar(F, 1L));
      auto forms = all_normal_forms(w);
      ++words;
      REQUIRE(forms.size() == 1);
      const NormalMorphism& m = forms[0];
      CHECK(m == normalize(w));
      if (m.is_zero()) {
        ++zeros;
        return;
      }
      auto h = hom_basis(w.source, w.target, F);
      REQUIRE(h);
      CHECK(*h == m);
    });
  CHECK(words > 100000);
  CHECK(zeros > 0);
  CHECK(zeros < words);
}

TEST_CASE("random rewrite orders agree") {
  std::mt19937_64 rng(17);
  for (auto x : objects(2, 1))
    for_each_word(x, 6, [&](const std::vector<Letter>& letters) {
      MorphismWord w = make_word(letters, Scalar(F, 5L));
      CHECK(normalize_random(w, rng) == normalize(w));
    });
}

TEST_CASE("duality") {
  Scalar one(F, 1L);
  NormalMorphism id{NormalKind::Identity, {1, 2, 3}, {1, 2, 3}, 0, one};
  CHECK(dualize(id) == NormalMorphism{NormalKind::Identity, {1, -1, -2}, {1, -1, -2}, 0, one});

  NormalMorphism d0 = normalize(make_word({delta(0, 0, 0)}, one));
  NormalMorphism dd0 = dualize(d0);
  CHECK(letters_of(dd0) == std::vector<Letter>{delta(0, 0, -1)});

  for (int r = 0; r <= 3; ++r)
    for (int p = -3; p <= 3; ++p)
      for (int n = -3; n <= 3; ++n) {
        std::vector<Letter> gens{delta(r, p, n), sigma(r, p, n)};
        if (r >= 1) gens.push_back(omega(r, p, n));
        for (auto& g : gens) {
          auto dl = dualize(std::vector<Letter>{g});
          REQUIRE(dl.size() == 1);
          CHECK(dl[0].source() == dual(g.target()));
          CHECK(dl[0].target() == dual(g.source()));
          CHECK(dualize(dl) == std::vector<Letter>{g});
        }
      }

  // a functor D -> D^op: duals of composites are composites of duals
  for (auto x : objects(2, 1))
    for_each_word(x, 5, [&](const std::vector<Letter>& letters) {
      MorphismWord w = make_word(letters, Scalar(F, 7L));
      NormalMorphism m = normalize(w);
      CHECK(dualize(m) == normalize(make_word(dualize(letters), w.scalar)));
      CHECK(dualize(dualize(m)) == m);
    });
}

TEST_CASE("disc realization") {
  Scalar one(F, 1L);
  ESSMap w = realize_letter(omega(2, 0, 0), F, 2);
  // e_{1,i} -> e_{2,i}, f -> 0
  for (int i = 0; i <= 1; ++i) {
    CHECK(w.component(i).block({0, 0}) == Matrix::identity(F, 1));
    CHECK(w.component(i).block({-1, 0}).is_zero());
  }
  CHECK(w.validate().empty());
  ESSMap d = realize_letter(delta(1, 1, 0), F, 1);
  CHECK(d.source() == disc(F, 1, {0, 0}, 1));
  CHECK(d.component(0).block({0, 0}) == Matrix::identity(F, 1));
  CHECK(d.component(1).block({0, 0}) == Matrix::identity(F, 1));
  CHECK(d.component(0).block({-1, 0}).is_zero());

  // sigma_r delta_{r+1} omega_{r+1} = delta_r as matrices
  for (int r = 0; r <= 2; ++r) {
    MorphismWord sdw = make_word({sigma(r, r, r - 1), delta(r + 1, r + 1, r), omega(r + 1, 0, 0)}, one);
    ESSMap lhs = realize_word(sdw, r + 1);
    ESSMap rhs = realize_disc(normalize(sdw), r + 1);
    CHECK(lhs == rhs);
    CHECK(lhs.validate().empty());
  }

  NormalMorphism z = normalize(parse_word("d_1 . d_1", F));
  CHECK_THROWS_AS(realize_disc(z), ZeroMorphism);

  // random words of length 6 against their normal forms
  std::mt19937_64 rng(3);
  int nonzero = 0;
  for (int t = 0; t < 300; ++t) {
    IndexObject at{static_cast<int>(rng() % 4), static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2};
    std::vector<Letter> applied;
    for (int k = 0; k < 6; ++k) {
      auto opts = outgoing(at);
      applied.push_back(opts[rng() % opts.size()]);
      at = applied.back().target();
    }
    MorphismWord word = make_word(std::vector<Letter>(applied.rbegin(), applied.rend()), Scalar(F, 3L));
    int h = 0;
    for (auto& l : word.letters) h = std::max(h, l.source().r);
    ESSMap direct = realize_word(word, h);
    CHECK(direct.validate().empty());
    NormalMorphism m = normalize(word);
    if (m.is_zero()) {
      CHECK(direct == ESSMap::zero(direct.source(), direct.target()));
    } else {
      ++nonzero;
      CHECK(direct == realize_disc(m, h));
    }
  }
  CHECK(nonzero > 0);
}

TEST_CASE("hom dimensions between discs match the hom lemma") {
  for (auto a : objects(2, 2))
    for (auto b : objects(2, 2)) {
      int h = std::max(a.r, b.r);
      std::size_t dim = hom_dim(disc(F, a.r, a.bidegree(), h), disc(F, b.r, b.bidegree(), h));
      auto m = hom_basis(a, b, F);
      CHECK(dim == (m ? 1u : 0u));
      if (m) {
        ESSMap f = realize_disc(*m, h);
        CHECK(f.validate().empty());
        CHECK_FALSE(f == ESSMap::zero(f.source(), f.target()));
      }
    }
}
