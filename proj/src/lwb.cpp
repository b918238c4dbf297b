#include "ssq/lwb.hpp"

#include <algorithm>
#include <climits>
#include <set>

namespace ssq {

namespace {

Bidegree neg(Bidegree b) { return {-b.p, -b.n}; }

// The identity of `base` between two relabelings src^b = base^{b+from}, tgt^b = base^{b+to}.
BigradedMap relabel(const BigradedModule& base, const BigradedModule& src, Bidegree from, const BigradedModule& tgt,
                    Bidegree to) {
  return BigradedMap::identity(base).reindexed(src, tgt, neg(from), from - to);
}

// Page i > t of a cone tail built on Q = L_t / B_t: A_i + B.
struct ConeParts {
  DirectSum sum;
  BigradedModule a, b;
};

ConeParts cone_parts(const BigradedModule& q, int t, int i) {
  BigradedModule a = q.shifted({t - i, t - i}), b = q.shifted({t, t - 1});
  return {direct_sum(std::vector<BigradedModule>{a, b}), a, b};
}

RComplex cone_page(const BigradedModule& q, int t, int i) {
  ConeParts c = cone_parts(q, t, i);
  BigradedMap j = relabel(q, c.a, {t - i, t - i}, c.b, {t, t - 1});
  return RComplex(i, c.sum.module, compose(c.sum.inclusions[1], compose(j, c.sum.projections[0])));
}

// s_i : page i -> page i+1, i > t
BigradedMap cone_s(const BigradedModule& q, int t, int i) {
  ConeParts x = cone_parts(q, t, i), y = cone_parts(q, t, i + 1);
  BigradedMap k = relabel(q, x.a, {t - i, t - i}, y.a, {t - i - 1, t - i - 1});
  return compose(y.sum.inclusions[0], compose(k, x.sum.projections[0]));
}

// w_i : page i -> page i-1, i > t+1
BigradedMap cone_w(const BigradedModule& q, int t, int i) {
  ConeParts x = cone_parts(q, t, i), y = cone_parts(q, t, i - 1);
  return compose(y.sum.inclusions[1], x.sum.projections[1]);
}

bool subspace_le(const BigradedSubspace& a, const BigradedSubspace& b, const BigradedModule& m, Bidegree* where) {
  for (auto& [deg, d] : m.dims())
    if (!component(b, deg, d, m.field()).contains(component(a, deg, d, m.field()))) {
      if (where) *where = deg;
      return false;
    }
  return true;
}

bool subspace_eq(const BigradedSubspace& a, const BigradedSubspace& b, const BigradedModule& m, Bidegree* where) {
  return subspace_le(a, b, m, where) && subspace_le(b, a, m, where);
}

BigradedSubspace sum(const BigradedSubspace& a, const BigradedSubspace& b, const BigradedModule& m) {
  BigradedSubspace out;
  for (auto& [deg, d] : m.dims())
    out[deg] = component(a, deg, d, m.field()).sum(component(b, deg, d, m.field()));
  return out;
}

// w_{i+1} ... w_j : L_j -> L_i
BigradedMap w_power(const WitnessBook& l, int i, int j) {
  BigradedMap out = BigradedMap::identity(l.page(j).module());
  for (int k = j; k > i; --k) out = compose(l.w(k), out);
  return out;
}

// s_{j-1} ... s_i : L_i -> L_j
BigradedMap s_power(const WitnessBook& l, int i, int j) {
  BigradedMap out = BigradedMap::identity(l.page(i).module());
  for (int k = i; k < j; ++k) out = compose(l.s(k), out);
  return out;
}

int book_extent(const WitnessBook& k, const WitnessBook& l) {
  int bound = INT_MAX;
  if (!k.tail_known()) bound = std::min(bound, k.horizon());
  if (!l.tail_known()) bound = std::min(bound, l.horizon());
  return bound == INT_MAX ? std::max(k.horizon(), l.horizon()) : bound;
}

}  // namespace

std::string BookTail::str() const {
  switch (kind) {
    case BookTailKind::Zero:
      return "zero";
    case BookTailKind::Cone:
      return "cone(" + std::to_string(t) + ")";
    case BookTailKind::Unspecified:
      break;
  }
  return "unspecified";
}

// ---- books

struct WitnessBook::Data {
  Field field;
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  BookTail tail;
  QuotientComplex q;  // L_t / Im d_t for a cone tail
};

WitnessBook::WitnessBook(Field f) {
  auto d = std::make_shared<Data>(Data{f, {RComplex::zero(0, f)}, {}, {}, BookTail::zero(), {}});
  d_ = d;
}

WitnessBook::WitnessBook(std::vector<RComplex> pages, std::vector<BigradedMap> w, std::vector<BigradedMap> s,
                         BookTail tail) {
  if (pages.empty()) throw InvalidBook("a witness book needs at least page 0");
  const Field f = pages[0].field();
  const std::size_t R = pages.size() - 1;
  if (w.size() != R || s.size() != R) throw InvalidBook("need one w and one s between consecutive pages");
  for (std::size_t i = 0; i <= R; ++i) {
    if (pages[i].r() != static_cast<int>(i)) throw InvalidBook("page " + std::to_string(i) + " has the wrong index");
    if (pages[i].field() != f) throw FieldMismatch("pages over different fields");
  }
  for (std::size_t i = 0; i < R; ++i) {
    if (w[i].source() != pages[i + 1].module() || w[i].target() != pages[i].module() || w[i].shift() != Bidegree{0, 0})
      throw InvalidBook("w_" + std::to_string(i + 1) + " does not map page " + std::to_string(i + 1) + " to page " +
                        std::to_string(i) + " in bidegree (0,0)");
    if (s[i].source() != pages[i].module() || s[i].target() != pages[i + 1].module() || s[i].shift() != Bidegree{1, 1})
      throw InvalidBook("s_" + std::to_string(i) + " does not map page " + std::to_string(i) + " to page " +
                        std::to_string(i + 1) + " in bidegree (1,1)");
  }
  QuotientComplex q;
  if (tail.kind == BookTailKind::Cone) {
    if (tail.t < 0 || tail.t > static_cast<int>(R)) throw RangeError("cone tail index must lie in 0..horizon");
    q = quotient(pages[tail.t], image(pages[tail.t].d()));
  }
  if (tail.kind != BookTailKind::Cone) tail.t = 0;
  d_ = std::make_shared<Data>(Data{f, std::move(pages), std::move(w), std::move(s), tail, std::move(q)});
}

const Field& WitnessBook::field() const { return d_->field; }
int WitnessBook::horizon() const { return static_cast<int>(d_->pages.size()) - 1; }
const BookTail& WitnessBook::tail() const { return d_->tail; }

RComplex WitnessBook::page(int i) const {
  if (i < 0) throw RangeError("negative page index");
  if (i <= horizon()) return d_->pages[i];
  switch (d_->tail.kind) {
    case BookTailKind::Zero:
      return RComplex::zero(i, field());
    case BookTailKind::Cone:
      return cone_page(d_->q.complex.module(), d_->tail.t, i);
    case BookTailKind::Unspecified:
      break;
  }
  throw HorizonError("page " + std::to_string(i) + " lies past horizon " + std::to_string(horizon()));
}

BigradedMap WitnessBook::w(int i) const {
  if (i < 1) throw RangeError("w_i needs i >= 1");
  if (i <= horizon()) return d_->w[i - 1];
  const int t = d_->tail.t;
  switch (d_->tail.kind) {
    case BookTailKind::Zero:
      return BigradedMap::zero(page(i).module(), page(i - 1).module());
    case BookTailKind::Cone: {
      if (i > t + 1) return cone_w(d_->q.complex.module(), t, i);
      // (a,b) -> d_t b
      ConeParts c = cone_parts(d_->q.complex.module(), t, t + 1);
      const RComplex& lt = d_->pages[t];
      BigradedMap lift = d_->q.section.reindexed(c.b, lt.module(), neg({t, t - 1}), {t, t - 1});
      return compose(lt.d(), compose(lift, c.sum.projections[1]));
    }
    case BookTailKind::Unspecified:
      break;
  }
  throw HorizonError("w_" + std::to_string(i) + " lies past horizon " + std::to_string(horizon()));
}

BigradedMap WitnessBook::s(int i) const {
  if (i < 0) throw RangeError("negative page index");
  if (i < horizon()) return d_->s[i];
  const int t = d_->tail.t;
  switch (d_->tail.kind) {
    case BookTailKind::Zero:
      return BigradedMap::zero(page(i).module(), page(i + 1).module(), {1, 1});
    case BookTailKind::Cone: {
      if (i > t) return cone_s(d_->q.complex.module(), t, i);
      // x -> ([x], 0)
      ConeParts c = cone_parts(d_->q.complex.module(), t, t + 1);
      return compose(c.sum.inclusions[0], d_->q.proj.reindexed(d_->pages[t].module(), c.a, {0, 0}, {1, 1}));
    }
    case BookTailKind::Unspecified:
      break;
  }
  throw HorizonError("s_" + std::to_string(i) + " lies past horizon " + std::to_string(horizon()));
}

std::pair<BigradedMap, BigradedMap> WitnessBook::cone_lifts(int i) const {
  const int t = d_->tail.t;
  if (d_->tail.kind != BookTailKind::Cone || i <= t) throw RangeError("cone lifts exist only above a cone tail");
  ConeParts c = cone_parts(d_->q.complex.module(), t, i);
  const BigradedModule& lt = d_->pages[t].module();
  BigradedMap la = d_->q.section.reindexed(c.a, lt, {i - t, i - t}, {t - i, t - i});
  BigradedMap lb = d_->q.section.reindexed(c.b, lt, neg({t, t - 1}), {t, t - 1});
  return {compose(la, c.sum.projections[0]), compose(lb, c.sum.projections[1])};
}

WitnessBook WitnessBook::extended(int h) const {
  if (h <= horizon()) return *this;
  if (!tail_known()) throw HorizonError("cannot extend a book with unspecified tail");
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  for (int i = 0; i <= h; ++i) {
    pages.push_back(page(i));
    if (i > 0) {
      w.push_back(this->w(i));
      s.push_back(this->s(i - 1));
    }
  }
  return WitnessBook(pages, w, s, tail());
}

WitnessBook WitnessBook::truncated(int h) const {
  if (h < 0) throw RangeError("negative horizon");
  if (h >= horizon()) return extended(h);
  std::vector<RComplex> pages(d_->pages.begin(), d_->pages.begin() + h + 1);
  std::vector<BigradedMap> w(d_->w.begin(), d_->w.begin() + h), s(d_->s.begin(), d_->s.begin() + h);
  BookTail tail = BookTail::unspecified();
  if (d_->tail.kind == BookTailKind::Cone && d_->tail.t <= h) tail = d_->tail;
  if (d_->tail.kind == BookTailKind::Zero) {
    bool rest_zero = true;
    for (int i = h + 1; i <= horizon(); ++i) rest_zero = rest_zero && d_->pages[i].module().is_zero();
    if (rest_zero) tail = BookTail::zero();
  }
  return WitnessBook(pages, w, s, tail);
}

std::vector<std::string> WitnessBook::validate() const {
  std::vector<std::string> out;
  const int last = tail_known() ? horizon() + 1 : horizon();
  for (int i = 0; i <= last; ++i) {
    try {
      page(i).validate();
    } catch (const Error& e) {
      out.push_back("page " + std::to_string(i) + ": " + e.what());
    }
  }
  for (int i = 0; i < last; ++i) {
    const std::string at = " at page " + std::to_string(i);
    BigradedMap wi = w(i + 1), si = s(i), di = d(i), dn = d(i + 1);
    const BigradedModule m = page(i).module();
    const BigradedModule mn = page(i + 1).module();
    if (!compose(wi, si).is_zero()) out.push_back("w s != 0" + at);
    if (!compose(si, wi).is_zero()) out.push_back("s w != 0" + at);
    if (compose(wi, compose(dn, si)) != di) out.push_back("d != w d s" + at);
    Bidegree b;
    if (!subspace_le(image(di), image(wi), m, &b)) out.push_back("Im d not in Im w" + at + " " + b.str());
    if (!subspace_le(image(wi), kernel(si), m, &b)) out.push_back("Im w not in Ker s" + at + " " + b.str());
    if (!subspace_le(kernel(si), kernel(di), m, &b)) out.push_back("Ker s not in Ker d" + at + " " + b.str());
    if (!subspace_le(image(si), kernel(wi), mn, &b)) out.push_back("Im s not in Ker w" + at + " " + b.str());
  }
  if (d_->tail.kind == BookTailKind::Cone) {
    const int t = d_->tail.t;
    const BigradedModule& q = d_->q.complex.module();
    for (int i = t + 1; i <= horizon(); ++i)
      if (d_->pages[i] != cone_page(q, t, i)) out.push_back("stored page " + std::to_string(i) + " is not the cone tail");
    for (int i = t + 2; i <= horizon(); ++i)
      if (d_->w[i - 1] != cone_w(q, t, i)) out.push_back("stored w_" + std::to_string(i) + " is not the cone tail");
    for (int i = t + 1; i < horizon(); ++i)
      if (d_->s[i] != cone_s(q, t, i)) out.push_back("stored s_" + std::to_string(i) + " is not the cone tail");
  }
  return out;
}

bool WitnessBook::is_zero() const {
  if (!tail_known()) return false;
  for (auto& p : d_->pages)
    if (!p.module().is_zero()) return false;
  return true;
}

bool WitnessBook::operator==(const WitnessBook& o) const {
  return field() == o.field() && d_->tail == o.d_->tail && d_->pages == o.d_->pages && d_->w == o.d_->w &&
         d_->s == o.d_->s;
}

// ---- maps

WBMap::WBMap(WitnessBook source, WitnessBook target, std::vector<BigradedMap> components)
    : src_(std::move(source)), tgt_(std::move(target)), comps_(std::move(components)) {
  if (src_.field() != tgt_.field()) throw FieldMismatch("map between books over different fields");
  if (comps_.empty()) throw InvalidBook("a book map needs at least component 0");
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    if (c.source() != src_.page(i).module() || c.target() != tgt_.page(i).module() || c.shift() != Bidegree{0, 0})
      throw DimensionMismatch("component " + std::to_string(i) + " does not match the pages");
  }
}

WBMap WBMap::identity(const WitnessBook& l, int extent) {
  if (extent < 0) extent = l.horizon();
  std::vector<BigradedMap> c;
  for (int i = 0; i <= extent; ++i) c.push_back(BigradedMap::identity(l.page(i).module()));
  return WBMap(l, l, c);
}

WBMap WBMap::zero(const WitnessBook& k, const WitnessBook& l, int extent) {
  if (extent < 0) extent = book_extent(k, l);
  std::vector<BigradedMap> c;
  for (int i = 0; i <= extent; ++i) c.push_back(BigradedMap::zero(k.page(i).module(), l.page(i).module()));
  return WBMap(k, l, c);
}

BigradedMap WBMap::component(int i) const {
  if (i < 0) throw RangeError("negative page index");
  if (i <= extent()) return comps_[i];
  const bool src_zero = src_.knows(i) && src_.page(i).module().is_zero();
  const bool tgt_zero = tgt_.knows(i) && tgt_.page(i).module().is_zero();
  if ((src_zero || tgt_zero) && src_.knows(i) && tgt_.knows(i))
    return BigradedMap::zero(src_.page(i).module(), tgt_.page(i).module());
  const BookTail& tail = src_.tail();
  if (tail.kind == BookTailKind::Cone && tail.t <= extent() && tgt_.knows(i)) {
    // a -> s^{i-t} f_t(a~),  b -> d_i s^{i-t} f_t(b~)
    const int t = tail.t;
    auto [la, lb] = src_.cone_lifts(i);
    BigradedMap sp = BigradedMap::identity(tgt_.page(t).module());
    for (int j = t; j < i; ++j) sp = compose(tgt_.s(j), sp);
    BigradedMap head = compose(sp, comps_[t]);
    return compose(head, la) + compose(tgt_.d(i), compose(head, lb));
  }
  throw HorizonError("component " + std::to_string(i) + " lies past the known range " + std::to_string(extent()));
}

WBMap WBMap::extended(int e) const {
  std::vector<BigradedMap> c;
  for (int i = 0; i <= std::max(e, extent()); ++i) c.push_back(component(i));
  return WBMap(src_, tgt_, c);
}

std::vector<std::string> WBMap::validate() const {
  std::vector<std::string> out;
  int last = extent();
  try {
    component(last + 1);
    ++last;
  } catch (const HorizonError&) {
  }
  for (int i = 0; i <= last; ++i) {
    BigradedMap f = component(i);
    if (compose(tgt_.d(i), f) != compose(f, src_.d(i))) out.push_back("d square fails at page " + std::to_string(i));
    if (i == last) break;
    BigradedMap g = component(i + 1);
    if (compose(tgt_.w(i + 1), g) != compose(f, src_.w(i + 1)))
      out.push_back("w square fails at page " + std::to_string(i + 1));
    if (compose(tgt_.s(i), f) != compose(g, src_.s(i))) out.push_back("s square fails at page " + std::to_string(i));
  }
  return out;
}

namespace {

// Largest n such that both maps have computable components on 0..n.
int joint_extent(const WBMap& a, const WBMap& b) {
  int n = std::min(a.extent(), b.extent());
  for (int i = n + 1; i <= std::max(a.extent(), b.extent()); ++i) {
    try {
      a.component(i);
      b.component(i);
    } catch (const HorizonError&) {
      break;
    }
    n = i;
  }
  return n;
}

}  // namespace

bool WBMap::operator==(const WBMap& o) const {
  if (src_ != o.src_ || tgt_ != o.tgt_) return false;
  for (int i = 0; i <= joint_extent(*this, o); ++i)
    if (component(i) != o.component(i)) return false;
  return true;
}

WBMap WBMap::operator+(const WBMap& o) const {
  if (src_ != o.src_ || tgt_ != o.tgt_) throw DimensionMismatch("adding maps between different books");
  std::vector<BigradedMap> c;
  for (int i = 0; i <= joint_extent(*this, o); ++i) c.push_back(component(i) + o.component(i));
  return WBMap(src_, tgt_, c);
}

WBMap WBMap::scaled(const Scalar& c) const {
  std::vector<BigradedMap> out;
  for (auto& m : comps_) out.push_back(m.scaled(c));
  return WBMap(src_, tgt_, out);
}

WBMap compose(const WBMap& g, const WBMap& f) {
  if (f.target() != g.source()) throw DimensionMismatch("composing book maps with mismatched books");
  std::vector<BigradedMap> c;
  for (int i = 0; i <= std::max(f.extent(), g.extent()); ++i) {
    try {
      c.push_back(compose(g.component(i), f.component(i)));
    } catch (const HorizonError&) {
      if (i <= std::min(f.extent(), g.extent())) throw;
      break;
    }
  }
  return WBMap(f.source(), g.target(), c);
}

bool is_iso(const WBMap& f) {
  const int last = std::max({f.extent(), f.source().horizon(), f.target().horizon()}) + 1;
  for (int i = 0; i <= last; ++i) {
    BigradedMap c;
    try {
      c = f.component(i);
    } catch (const HorizonError&) {
      break;
    }
    if (!c.is_iso()) return false;
  }
  return true;
}

// ---- truncations

std::vector<std::string> TruncatedBook::validate() const {
  std::vector<std::string> out;
  if (pages.empty()) return {"no pages"};
  if (w.size() + 1 != pages.size() || s.size() + 1 != pages.size()) return {"need one w and one s between pages"};
  for (int i = r; i <= t(); ++i) {
    if (page(i).r() != i) out.push_back("page " + std::to_string(i) + " has the wrong index");
    try {
      page(i).validate();
    } catch (const Error& e) {
      out.push_back("page " + std::to_string(i) + ": " + e.what());
    }
  }
  for (int i = r; i < t(); ++i) {
    const BigradedMap &wi = w[i - r], &si = s[i - r];
    const std::string at = " at page " + std::to_string(i);
    if (!compose(wi, si).is_zero()) out.push_back("w s != 0" + at);
    if (!compose(si, wi).is_zero()) out.push_back("s w != 0" + at);
    if (compose(wi, compose(page(i + 1).d(), si)) != page(i).d()) out.push_back("d != w d s" + at);
  }
  return out;
}

TruncatedBook trunc_U(const WitnessBook& l, int r, int t) {
  if (r < 0 || t < r) throw RangeError("truncation needs 0 <= r <= t");
  TruncatedBook out;
  out.r = r;
  for (int i = r; i <= t; ++i) {
    out.pages.push_back(l.page(i));
    if (i < t) {
      out.w.push_back(l.w(i + 1));
      out.s.push_back(l.s(i));
    }
  }
  return out;
}

WitnessBook as_book(const TruncatedBook& tb) {
  if (tb.r != 0) throw RangeError("only a truncation starting at page 0 is a book");
  return WitnessBook(tb.pages, tb.w, tb.s, BookTail::unspecified());
}

namespace {

struct Parts {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
};

Parts lower_parts(const TruncatedBook& tb) {
  Parts p;
  const BigradedModule& m = tb.pages.at(0).module();
  for (int i = 0; i < tb.r; ++i) {
    p.pages.emplace_back(i, m);
    p.w.push_back(BigradedMap::identity(m));
    p.s.push_back(BigradedMap::zero(m, m, {1, 1}));
  }
  p.pages.insert(p.pages.end(), tb.pages.begin(), tb.pages.end());
  p.w.insert(p.w.end(), tb.w.begin(), tb.w.end());
  p.s.insert(p.s.end(), tb.s.begin(), tb.s.end());
  return p;
}

}  // namespace

WitnessBook lower_extension(const TruncatedBook& tb) {
  Parts p = lower_parts(tb);
  return WitnessBook(p.pages, p.w, p.s, BookTail::unspecified());
}

WitnessBook trunc_F(const TruncatedBook& tb, int horizon) {
  Parts p = lower_parts(tb);
  return WitnessBook(p.pages, p.w, p.s, BookTail::cone(tb.t())).extended(horizon);
}

WitnessBook trunc_R(const TruncatedBook& tb, int horizon) {
  const int r = tb.r, t = tb.t();
  const Field f = tb.field();
  const BigradedModule& lr = tb.page(r).module();
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  for (int i = 0; i < r; ++i) pages.emplace_back(i, lr.shifted({r - i, r - i}));
  for (int i = 0; i < r; ++i) {
    const BigradedModule& next = i + 1 < r ? pages[i + 1].module() : lr;
    w.push_back(BigradedMap::zero(next, pages[i].module()));
    s.push_back(relabel(lr, pages[i].module(), {r - i, r - i}, next, {r - i - 1, r - i - 1}));
  }
  pages.insert(pages.end(), tb.pages.begin(), tb.pages.end());
  w.insert(w.end(), tb.w.begin(), tb.w.end());
  s.insert(s.end(), tb.s.begin(), tb.s.end());

  // pages i > t: Z_t shifted by the page-i differential, then Z_t
  const RComplex& lt = tb.page(t);
  BigradedSubspace zsub = kernel(lt.d());
  SubComplex z = subcomplex(lt, zsub);
  const BigradedModule& zm = z.complex.module();
  auto parts = [&](int i) { return direct_sum(std::vector<BigradedModule>{zm.shifted(diff_degree(i)), zm}); };
  std::vector<DirectSum> sums;
  for (int i = t + 1; i <= std::max(horizon, t); ++i) {
    DirectSum ds = parts(i);
    BigradedMap j = relabel(zm, zm.shifted(diff_degree(i)), diff_degree(i), zm, {0, 0});
    pages.emplace_back(i, ds.module, compose(ds.inclusions[1], compose(j, ds.projections[0])));
    if (i == t + 1) {
      w.push_back(compose(z.inclusion, ds.projections[1]));
      BigradedMap dz = BigradedMap::build(lt.module(), zm.shifted(diff_degree(i)), {1, 1}, [&](Bidegree c) {
        Bidegree target = c + diff_degree(t);
        return component(zsub, target, lt.dim(target), f).coords(lt.d().block(c));
      });
      s.push_back(compose(ds.inclusions[0], dz));
    } else {
      const DirectSum& prev = sums.back();
      w.push_back(compose(prev.inclusions[1], ds.projections[1]));
      BigradedMap k =
          relabel(zm, zm.shifted(diff_degree(i - 1)), diff_degree(i - 1), zm.shifted(diff_degree(i)), diff_degree(i));
      s.push_back(compose(ds.inclusions[0], compose(k, prev.projections[0])));
    }
    sums.push_back(ds);
  }
  return WitnessBook(pages, w, s, BookTail::unspecified());
}

WBMap trunc_F_counit(const WitnessBook& l, int r, int t, int horizon) {
  WitnessBook fl = trunc_F(trunc_U(l, r, t), horizon);
  std::vector<BigradedMap> c;
  for (int i = 0; i < r; ++i) c.push_back(w_power(l, i, r));
  for (int i = r; i <= t; ++i) c.push_back(BigradedMap::identity(l.page(i).module()));
  return WBMap(fl, l, c).extended(horizon);
}

WBMap trunc_R_unit(const WitnessBook& l, int r, int t, int horizon) {
  const Field f = l.field();
  WitnessBook rl = trunc_R(trunc_U(l, r, t), horizon);
  std::vector<BigradedMap> c;
  for (int i = 0; i < r; ++i) c.push_back(s_power(l, i, r).reindexed(l.page(i).module(), rl.page(i).module(), {0, 0}, {0, 0}));
  for (int i = r; i <= t; ++i) c.push_back(BigradedMap::identity(l.page(i).module()));
  const RComplex lt = l.page(t);
  BigradedSubspace zsub = kernel(lt.d());
  for (int i = t + 1; i <= std::max(horizon, t); ++i) {
    // x -> (w^{i-t} d_i x, w^{i-t} x)
    RComplex li = l.page(i);
    BigradedMap wp = w_power(l, t, i);
    BigradedModule zm = subcomplex(lt, zsub).complex.module();
    DirectSum ds = direct_sum(std::vector<BigradedModule>{zm.shifted(diff_degree(i)), zm});
    BigradedMap xa = BigradedMap::build(li.module(), ds.module, {0, 0}, [&](Bidegree b) {
      Bidegree u = b + diff_degree(i);
      Matrix top = component(zsub, u, lt.dim(u), f).coords(wp.block(u) * li.d().block(b));
      Matrix bottom = component(zsub, b, lt.dim(b), f).coords(wp.block(b));
      Matrix out(f, ds.module.dim(b), li.dim(b));
      out.set_block(0, 0, top);
      out.set_block(top.rows(), 0, bottom);
      return out;
    });
    c.push_back(xa);
  }
  return WBMap(l, rl, c);
}

namespace {

struct Shriek {
  int r;
  std::vector<DirectSum> sums;  // sums[k] for page r+k
  std::vector<QuotientComplex> q;
  TruncatedBook book;
};

Shriek build_shriek(const WitnessBook& l, int r, int top) {
  if (r < 0 || top < r) throw RangeError("(W_{>=r})_! needs 0 <= r <= top");
  Shriek out;
  out.r = r;
  out.book.r = r;
  const BigradedModule l0 = l.page(0).module();
  const RComplex lr = l.page(r);
  BigradedMap wr = w_power(l, 0, r);
  for (int i = r; i <= top; ++i) {
    RComplex li = l.page(i);
    BigradedModule p0 = l0.shifted({r - i, r - i}), p1 = l0.shifted({r, r - 1});
    DirectSum ds = direct_sum(std::vector<BigradedModule>{p0, p1, li.module()});
    BigradedMap j = relabel(l0, p0, {r - i, r - i}, p1, {r, r - 1});
    BigradedMap d = compose(ds.inclusions[1], compose(j, ds.projections[0])) +
                    compose(ds.inclusions[2], compose(li.d(), ds.projections[2]));
    RComplex raw(i, ds.module, d);
    // (-w^r x, 0, s^{i-r} x) and (0, -w^r x, d_i s^{i-r} x)
    BigradedMap sp = s_power(l, r, i);
    BigradedMap g1 = compose(ds.inclusions[0], (-wr).reindexed(lr.module(), p0, {0, 0}, {i - r, i - r})) +
                     compose(ds.inclusions[2], sp);
    BigradedMap g2 = compose(ds.inclusions[1], (-wr).reindexed(lr.module(), p1, {0, 0}, {-r, 1 - r})) +
                     compose(ds.inclusions[2], compose(li.d(), sp));
    out.q.push_back(quotient(raw, sum(image(g1), image(g2), ds.module)));
    out.sums.push_back(ds);
    out.book.pages.push_back(out.q.back().complex);
  }
  for (int i = r; i < top; ++i) {
    const DirectSum &a = out.sums[i - r], &b = out.sums[i + 1 - r];
    BigradedMap w = compose(a.inclusions[1], b.projections[1]) +
                    compose(a.inclusions[2], compose(l.w(i + 1), b.projections[2]));
    BigradedMap k =
        relabel(l0, l0.shifted({r - i, r - i}), {r - i, r - i}, l0.shifted({r - i - 1, r - i - 1}), {r - i - 1, r - i - 1});
    BigradedMap s = compose(b.inclusions[0], compose(k, a.projections[0])) +
                    compose(b.inclusions[2], compose(l.s(i), a.projections[2]));
    out.book.w.push_back(compose(out.q[i - r].proj, compose(w, out.q[i + 1 - r].section)));
    out.book.s.push_back(compose(out.q[i + 1 - r].proj, compose(s, out.q[i - r].section)));
  }
  return out;
}

}  // namespace

TruncatedBook w_shriek(const WitnessBook& l, int r, int top) { return build_shriek(l, r, top).book; }

WBMap w_shriek_unit(const WitnessBook& l, int r, int top) {
  Shriek sh = build_shriek(l, r, top);
  WitnessBook target = lower_extension(sh.book);
  std::vector<BigradedMap> c;
  // x -> class of (w^i x, 0, 0) in page r
  for (int i = 0; i < r; ++i) {
    BigradedMap wi = w_power(l, 0, i).reindexed(l.page(i).module(), sh.sums[0].inclusions[0].source(), {0, 0}, {0, 0});
    c.push_back(compose(sh.q[0].proj, compose(sh.sums[0].inclusions[0], wi)));
  }
  for (int i = r; i <= top; ++i) c.push_back(compose(sh.q[i - r].proj, sh.sums[i - r].inclusions[2]));
  return WBMap(l, target, c);
}

TruncatedBook translate(const TruncatedBook& tb, int k) {
  if (tb.r + k < 0) throw RangeError("translation would move page " + std::to_string(tb.r) + " below 0");
  TruncatedBook out;
  out.r = tb.r + k;
  for (auto& p : tb.pages) out.pages.push_back(translate(p, k));
  for (auto& m : tb.w) out.w.push_back(m.translated(k));
  for (auto& m : tb.s) out.s.push_back(m.translated(k));
  return out;
}

// ---- S_r

BigradedSubspace s_subspace(const WitnessBook& l, int r) {
  if (r < 1) throw RangeError("S_r needs r >= 1");
  BigradedMap s = l.s(r - 1);
  RComplex p = l.page(r);
  return sum(image(s), image(compose(p.d(), s)), p.module());
}

SubComplex s_sub(const WitnessBook& l, int r) { return subcomplex(l.page(r), s_subspace(l, r)); }

// ---- representables

std::string rep_name(RepKind k) {
  switch (k) {
    case RepKind::Y:
      return "Y";
    case RepKind::Z:
      return "Z";
    case RepKind::S:
      return "S";
    case RepKind::W:
      return "W";
  }
  return "?";
}

namespace {

struct Presheaf {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  std::vector<std::map<Bidegree, NormalMorphism>> labels;
};

std::optional<Letter> killer(RepKind k, IndexObject x) {
  switch (k) {
    case RepKind::Z:
      return delta(x.r, x.p, x.n);
    case RepKind::S:
      return sigma(x.r, x.p, x.n);
    case RepKind::W:
      return omega(x.r, x.p, x.n);
    case RepKind::Y:
      break;
  }
  return std::nullopt;
}

// m lies in the image of g o (-).
bool killed(const NormalMorphism& m, const std::optional<Letter>& g, const Field& f) {
  if (!g) return false;
  auto mp = hom_basis(m.source, g->source(), f);
  if (!mp) return false;
  std::vector<Letter> ls{*g};
  auto rest = letters_of(*mp);
  ls.insert(ls.end(), rest.begin(), rest.end());
  return !normalize(make_word(ls, Scalar(f, 1L))).is_zero();
}

// Coefficient of m o g on the basis element of `page` at its source.
Matrix precompose(const NormalMorphism& m, const Letter& g, const std::map<Bidegree, NormalMorphism>& page,
                  const Field& f) {
  auto ls = letters_of(m);
  ls.push_back(g);
  NormalMorphism c = normalize(make_word(ls, m.scalar));
  Matrix out(f, 1, 1);
  if (c.is_zero()) return out;
  const NormalMorphism& label = page.at(c.source.bidegree());
  if (label.kind != c.kind || label.source != c.source)
    throw std::logic_error("composite " + c.str() + " does not match basis " + label.str());
  out.set(0, 0, c.scalar / label.scalar);
  return out;
}

Presheaf build_presheaf(RepKind k, IndexObject x, const Field& f, int top) {
  if (k == RepKind::W && x.r < 1) throw RangeError("W(r,p,n) needs r >= 1");
  const auto g = killer(k, x);
  Presheaf ps;
  ps.labels.resize(top + 1);
  for (int i = 0; i <= top; ++i) {
    std::set<Bidegree> cands{{x.p, x.n}, {x.p + i - x.r, x.n + i - x.r}, {x.p - x.r, x.n + 1 - x.r}};
    BigradedModule mod(f);
    for (auto c : cands) {
      auto m = hom_basis({i, c.p, c.n}, x, f);
      if (m && !killed(*m, g, f)) {
        ps.labels[i].emplace(c, *m);
        mod.set_dim(c, 1);
      }
    }
    const auto& lab = ps.labels[i];
    ps.pages.emplace_back(i, mod, BigradedMap::build(mod, mod, diff_degree(i), [&](Bidegree c) {
                            return precompose(lab.at(c), delta(i, c.p, c.n), lab, f);
                          }));
  }
  for (int i = 0; i < top; ++i) {
    const auto &lo = ps.labels[i], &hi = ps.labels[i + 1];
    ps.w.push_back(BigradedMap::build(ps.pages[i + 1].module(), ps.pages[i].module(), {0, 0}, [&](Bidegree c) {
      return precompose(hi.at(c), omega(i + 1, c.p, c.n), lo, f);
    }));
    ps.s.push_back(BigradedMap::build(ps.pages[i].module(), ps.pages[i + 1].module(), {1, 1}, [&](Bidegree c) {
      return precompose(lo.at(c), sigma(i, c.p, c.n), hi, f);
    }));
  }
  return ps;
}

// L(m) v: the letters of m act left to right through w, d, s.
Matrix act(const NormalMorphism& m, const WitnessBook& l, Matrix v) {
  for (const Letter& g : letters_of(m)) {
    IndexObject t = g.target();
    switch (g.gen) {
      case Gen::Omega:
        v = l.w(t.r).block(t.bidegree()) * v;
        break;
      case Gen::Delta:
        v = l.d(t.r).block(t.bidegree()) * v;
        break;
      case Gen::Sigma:
        v = l.s(t.r).block(t.bidegree()) * v;
        break;
    }
  }
  return v.scaled(m.scalar);
}

}  // namespace

WitnessBook representable(RepKind k, IndexObject x, Field f, int horizon) {
  Presheaf ps = build_presheaf(k, x, f, std::max(horizon, x.r));
  BookTail tail = k == RepKind::S ? BookTail::zero() : BookTail::cone(x.r);
  return WitnessBook(ps.pages, ps.w, ps.s, tail);
}

WitnessBook representable_presheaf(RepKind k, IndexObject x, Field f, int top) {
  Presheaf ps = build_presheaf(k, x, f, top);
  return WitnessBook(ps.pages, ps.w, ps.s, BookTail::unspecified());
}

WBMap yoneda_map(RepKind k, IndexObject x, const WitnessBook& l, const Matrix& v) {
  const Field& f = l.field();
  const Bidegree b = x.bidegree();
  if (v.cols() != 1 || v.rows() != l.page(x.r).dim(b))
    throw DimensionMismatch("generator image must be a column in page " + std::to_string(x.r) + " at " + b.str());
  BigradedMap rel;
  switch (k) {
    case RepKind::Z:
      rel = l.d(x.r);
      break;
    case RepKind::S:
      rel = l.s(x.r);
      break;
    case RepKind::W:
      if (x.r < 1) throw RangeError("W(r,p,n) needs r >= 1");
      rel = l.w(x.r);
      break;
    case RepKind::Y:
      break;
  }
  if (k != RepKind::Y && !(rel.block(b) * v).is_zero())
    throw PreconditionError("element does not satisfy the relation of " + rep_name(k) + x.str());
  const int h = std::max(x.r, l.horizon());
  Presheaf ps = build_presheaf(k, x, f, h);
  WitnessBook src(ps.pages, ps.w, ps.s, k == RepKind::S ? BookTail::zero() : BookTail::cone(x.r));
  std::vector<BigradedMap> c;
  for (int i = 0; i <= x.r; ++i) {
    const auto& lab = ps.labels[i];
    c.push_back(BigradedMap::build(ps.pages[i].module(), l.page(i).module(), {0, 0},
                                   [&](Bidegree u) { return act(lab.at(u), l, v); }));
  }
  return WBMap(src, l, c);
}

Matrix yoneda_element(const WBMap& f, IndexObject x) {
  Matrix m = f.component(x.r).block(x.bidegree());
  return m.block(0, 0, m.rows(), 1);
}

WBMap representable_morphism(RepKind from, RepKind to, const NormalMorphism& m, int horizon) {
  if (m.is_zero()) throw ZeroMorphism("zero morphism induces the zero map");
  const Field f = m.scalar.field();
  const IndexObject a = m.source, b = m.target;
  const int h = std::max({horizon, a.r, b.r});
  Presheaf ps = build_presheaf(to, b, f, h);
  WitnessBook tgt(ps.pages, ps.w, ps.s, to == RepKind::S ? BookTail::zero() : BookTail::cone(b.r));
  Matrix v(f, tgt.page(a.r).dim(a.bidegree()), 1);
  auto it = ps.labels[a.r].find(a.bidegree());
  if (it != ps.labels[a.r].end()) {
    if (it->second.kind != m.kind) throw std::logic_error("basis element " + it->second.str() + " vs " + m.str());
    v.set(0, 0, m.scalar / it->second.scalar);
  }
  return yoneda_map(from, a, tgt, v);
}

// ---- hom spaces

BookHomSystem::BookHomSystem(const WitnessBook& k, const WitnessBook& l)
    : k_(k), l_(l), ext_(book_extent(k, l)), exact_(false), eq_(k.field()) {
  if (k.field() != l.field()) throw FieldMismatch("hom space between books over different fields");
  std::vector<RComplex> kp, lp;
  for (int i = 0; i <= ext_; ++i) {
    kp.push_back(k.page(i));
    lp.push_back(l.page(i));
    comps_.push_back(eq_.unknown(kp[i].module(), lp[i].module()));
  }
  for (int i = 0; i <= ext_; ++i) {
    BigradedMap minus_dk = -kp[i].d();
    eq_.add({{&lp[i].d(), &comps_[i], nullptr}, {nullptr, &comps_[i], &minus_dk}}, nullptr, kp[i].module(),
            lp[i].module(), diff_degree(i));
    if (i == ext_) break;
    BigradedMap wl = l.w(i + 1), minus_wk = -k.w(i + 1);
    eq_.add({{&wl, &comps_[i + 1], nullptr}, {nullptr, &comps_[i], &minus_wk}}, nullptr, kp[i + 1].module(),
            lp[i].module());
    BigradedMap sl = l.s(i), minus_sk = -k.s(i);
    eq_.add({{&sl, &comps_[i], nullptr}, {nullptr, &comps_[i + 1], &minus_sk}}, nullptr, kp[i].module(),
            lp[i + 1].module(), {1, 1});
  }
  // squares into a vanishing next page
  const int n = ext_ + 1;
  const bool next_zero = (k.knows(n) && k.page(n).module().is_zero()) || (l.knows(n) && l.page(n).module().is_zero());
  if (next_zero) {
    if (l.knows(n)) {
      BigradedMap sl = l.s(ext_);
      eq_.add({{&sl, &comps_[ext_], nullptr}}, nullptr, kp[ext_].module(), l.page(n).module(), {1, 1});
    }
    if (k.knows(n)) {
      BigradedMap wk = k.w(n);
      eq_.add({{nullptr, &comps_[ext_], &wk}}, nullptr, k.page(n).module(), lp[ext_].module());
    }
  }
  const BookTail& kt = k.tail();
  exact_ = (k.tail_known() && l.tail_known()) || (kt.kind == BookTailKind::Cone && kt.t <= ext_) ||
           (kt.kind == BookTailKind::Zero && ext_ >= k.horizon() && l.knows(k.horizon() + 1));
}

WBMap BookHomSystem::assemble(const LinearSystem::Assignment& a) const {
  std::vector<BigradedMap> c;
  for (auto& u : comps_) c.push_back(MapEquations::assemble(u, a));
  return WBMap(k_, l_, c);
}

std::vector<WBMap> hom_basis(const WitnessBook& k, const WitnessBook& l) {
  BookHomSystem h(k, l);
  std::vector<WBMap> out;
  for (auto& a : h.equations().system().kernel_basis()) out.push_back(h.assemble(a));
  return out;
}

std::size_t hom_dim(const WitnessBook& k, const WitnessBook& l) {
  BookHomSystem h(k, l);
  return h.equations().system().kernel_dim();
}

WBMap random_hom(const WitnessBook& k, const WitnessBook& l, Rng& rng) {
  BookHomSystem h(k, l);
  return h.assemble(h.equations().system().random_kernel_element(rng));
}

std::optional<WBMap> iso_check(const WitnessBook& k, const WitnessBook& l, std::uint64_t seed) {
  const int ext = book_extent(k, l);
  const int last = ext + (k.tail_known() && l.tail_known() ? 1 : 0);
  for (int i = 0; i <= last; ++i)
    if (k.page(i).module() != l.page(i).module()) return std::nullopt;
  BookHomSystem h(k, l);
  std::size_t target = 0;
  for (int i = 0; i <= ext; ++i) target += k.page(i).module().total_dim();
  if (target == 0) return WBMap::zero(k, l);
  auto a = full_rank_point(h.equations().system().kernel_basis(), target, k.field(), seed);
  if (!a) return std::nullopt;
  WBMap f = h.assemble(*a);
  if (!is_iso(f)) return std::nullopt;
  return f;
}

std::vector<WBMap> hom_from_representable(RepKind k, IndexObject x, const WitnessBook& l) {
  const Field& f = l.field();
  const Bidegree b = x.bidegree();
  if (!l.knows(x.r) || (k == RepKind::S && !l.knows(x.r + 1)))
    throw HorizonError("page " + std::to_string(x.r) + " of the target is not known");
  const std::size_t dim = l.page(x.r).dim(b);
  Subspace v = Subspace::full(f, dim);
  switch (k) {
    case RepKind::Z:
      v = kernel_space(l.d(x.r).block(b));
      break;
    case RepKind::S:
      v = kernel_space(l.s(x.r).block(b));
      break;
    case RepKind::W:
      if (x.r < 1) throw RangeError("W(r,p,n) needs r >= 1");
      v = kernel_space(l.w(x.r).block(b));
      break;
    case RepKind::Y:
      break;
  }
  std::vector<WBMap> out;
  for (std::size_t j = 0; j < v.dim(); ++j) out.push_back(yoneda_map(k, x, l, v.basis().block(0, j, dim, 1)));
  return out;
}

// ---- lifting

namespace {

std::vector<Scalar> flatten(const std::vector<BigradedMap>& comps) {
  std::vector<Scalar> out;
  for (auto& c : comps)
    for (auto& [b, d] : c.source().dims()) {
      Matrix m = c.block(b);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.at(i, j));
    }
  return out;
}

// g o f on pages 0..e
std::vector<Scalar> flat_composite(const WBMap& g, const WBMap& f, int e) {
  std::vector<BigradedMap> c;
  for (int i = 0; i <= e; ++i) c.push_back(compose(g.component(i), f.component(i)));
  return flatten(c);
}

std::size_t column_rank(const Field& f, const std::vector<std::vector<Scalar>>& cols) {
  if (cols.empty() || cols[0].empty()) return 0;
  Matrix m(f, cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) m.set(i, j, cols[j][i]);
  return m.rank();
}

struct HomSpace {
  std::vector<WBMap> basis;
  int extent;
};

HomSpace hom_space(const WitnessBook& k, const WitnessBook& l) {
  BookHomSystem h(k, l);
  HomSpace out{{}, h.extent()};
  for (auto& a : h.equations().system().kernel_basis()) out.basis.push_back(h.assemble(a));
  return out;
}

}  // namespace

bool has_rlp(const WBMap& j, const WBMap& f) {
  const WitnessBook &a = j.source(), &b = j.target(), &k = f.source(), &l = f.target();
  HomSpace ak = hom_space(a, k), bl = hom_space(b, l), bk = hom_space(b, k);
  const int e_al = BookHomSystem(a, l).extent();
  // dim of the commutative squares {(u, v) : f u = v j}
  std::vector<std::vector<Scalar>> cols;
  for (auto& u : ak.basis) cols.push_back(flat_composite(f, u, e_al));
  for (auto& v : bl.basis) cols.push_back(flat_composite(v.scaled(Scalar(a.field(), -1L)), j, e_al));
  const std::size_t squares = ak.basis.size() + bl.basis.size() - column_rank(a.field(), cols);
  // squares hit by h |-> (h j, f h)
  std::vector<std::vector<Scalar>> hit;
  for (auto& h : bk.basis) {
    auto x = flat_composite(h, j, ak.extent);
    auto y = flat_composite(f, h, bl.extent);
    x.insert(x.end(), y.begin(), y.end());
    hit.push_back(x);
  }
  return column_rank(a.field(), hit) == squares;
}

bool has_rlp_to_zero(const WBMap& j, const WitnessBook& l) {
  HomSpace al = hom_space(j.source(), l);
  if (al.basis.empty()) return true;
  std::vector<std::vector<Scalar>> cols;
  for (auto& h : hom_space(j.target(), l).basis) cols.push_back(flat_composite(h, j, al.extent));
  return column_rank(l.field(), cols) == al.basis.size();
}

// ---- predicates

namespace {

int checked_last(const WitnessBook& l) { return l.tail_known() ? l.horizon() : l.horizon() - 1; }

std::string where(const std::string& what, int i, Bidegree b) {
  return what + " at page " + std::to_string(i) + " bidegree " + b.str();
}

}  // namespace

Verdict lwbe_verdict(const WitnessBook& l) {
  Verdict v;
  v.exact = l.tail_known();
  for (int i = 0; i <= checked_last(l); ++i) {
    Bidegree b;
    if (!subspace_eq(kernel(l.d(i)), kernel(l.s(i)), l.page(i).module(), &b)) {
      v.holds = false;
      v.reason = where("Ker d != Ker s", i, b);
      return v;
    }
  }
  if (!v.exact) v.reason = "checked pages 0.." + std::to_string(checked_last(l)) + " only";
  return v;
}

Verdict lwbs_verdict(const WitnessBook& l) {
  Verdict v = lwbe_verdict(l);
  if (!v.holds) return v;
  for (int i = 0; i <= checked_last(l); ++i) {
    Bidegree b;
    if (!subspace_eq(image(l.w(i + 1)), kernel(l.d(i)), l.page(i).module(), &b)) {
      v.holds = false;
      v.reason = where("Im w != Ker d", i, b);
      return v;
    }
    if (!subspace_eq(kernel(l.w(i + 1)), image(l.s(i)), l.page(i + 1).module(), &b)) {
      v.holds = false;
      v.reason = where("Ker w != Im s", i + 1, b);
      return v;
    }
  }
  return v;
}

bool in_lwbe(const WitnessBook& l) { return lwbe_verdict(l).holds; }
bool in_lwbs(const WitnessBook& l) { return lwbs_verdict(l).holds; }

bool phi_surjective(const WitnessBook& l, int i) {
  const BigradedModule m = l.page(i).module();
  return subspace_eq(image(l.w(i + 1)), kernel(l.d(i)), m, nullptr) &&
         subspace_eq(kernel(l.d(i)), kernel(l.s(i)), m, nullptr);
}

bool phi_injective(const WitnessBook& l, int i) {
  return subspace_eq(kernel(l.w(i + 1)), image(l.s(i)), l.page(i + 1).module(), nullptr);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Tau:
      return "M^tau";
    case Family::SigmaOmega:
      return "M^{sigma,omega}";
    case Family::OmegaSigma:
      return "M^{omega,sigma}";
  }
  return "?";
}

Verdict rlp_family_verdict(const WitnessBook& l, Family fam) {
  const Field& f = l.field();
  const Scalar one(f, 1L);
  Verdict v;
  v.exact = l.tail_known();
  for (int r = 0; r <= checked_last(l); ++r) {
    std::vector<Bidegree> where_;
    if (fam == Family::SigmaOmega) {
      for (auto b : l.page(r + 1).module().support()) where_.push_back(b - Bidegree{1, 1});
    } else {
      where_ = l.page(r).module().support();
    }
    for (auto b : where_) {
      IndexObject x{r, b.p, b.n};
      WBMap j;
      switch (fam) {
        case Family::Tau:
          j = representable_morphism(RepKind::Z, RepKind::S, NormalMorphism{NormalKind::Identity, x, x, 0, one},
                                     l.horizon());
          break;
        case Family::SigmaOmega:
          j = representable_morphism(RepKind::W, RepKind::Y, normalize(make_word({sigma(r, b.p, b.n)}, one)),
                                     l.horizon());
          break;
        case Family::OmegaSigma:
          j = representable_morphism(RepKind::S, RepKind::Y, normalize(make_word({omega(r + 1, b.p, b.n)}, one)),
                                     l.horizon());
          break;
      }
      if (!has_rlp_to_zero(j, l)) {
        v.holds = false;
        v.reason = "no lift against " + family_name(fam) + " at " + x.str();
        return v;
      }
    }
  }
  if (!v.exact) v.reason = "checked pages 0.." + std::to_string(checked_last(l)) + " only";
  return v;
}

bool rlp_family_check(const WitnessBook& l, Family fam) { return rlp_family_verdict(l, fam).holds; }

// ---- sums, random books, colimits

WitnessBook direct_sum(const std::vector<WitnessBook>& parts, int h, Field f) {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  std::vector<DirectSum> sums;
  bool all_zero = true;
  for (auto& p : parts) all_zero = all_zero && p.tail().kind == BookTailKind::Zero;
  for (int i = 0; i <= h; ++i) {
    std::vector<BigradedModule> mods;
    for (auto& p : parts) mods.push_back(p.page(i).module());
    DirectSum ds = parts.empty() ? DirectSum{BigradedModule(f), {}, {}} : direct_sum(mods);
    BigradedMap d = BigradedMap::zero(ds.module, ds.module, diff_degree(i));
    for (std::size_t k = 0; k < parts.size(); ++k)
      d = d + compose(ds.inclusions[k], compose(parts[k].d(i), ds.projections[k]));
    pages.emplace_back(i, ds.module, d);
    sums.push_back(std::move(ds));
  }
  for (int i = 0; i < h; ++i) {
    BigradedMap wi = BigradedMap::zero(sums[i + 1].module, sums[i].module);
    BigradedMap si = BigradedMap::zero(sums[i].module, sums[i + 1].module, {1, 1});
    for (std::size_t k = 0; k < parts.size(); ++k) {
      wi = wi + compose(sums[i].inclusions[k], compose(parts[k].w(i + 1), sums[i + 1].projections[k]));
      si = si + compose(sums[i + 1].inclusions[k], compose(parts[k].s(i), sums[i].projections[k]));
    }
    w.push_back(wi);
    s.push_back(si);
  }
  return WitnessBook(pages, w, s, all_zero ? BookTail::zero() : BookTail::unspecified());
}

WitnessBook scrambled(const WitnessBook& l, Rng& rng) {
  const int h = l.horizon();
  std::vector<BigradedMap> g, ginv;
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  for (int i = 0; i <= h; ++i) {
    RComplex p = l.page(i);
    const BigradedModule& m = p.module();
    BigradedMap gi =
        BigradedMap::build(m, m, {0, 0}, [&](Bidegree b) { return random_invertible(l.field(), m.dim(b), rng); });
    BigradedMap inv = BigradedMap::build(m, m, {0, 0}, [&](Bidegree b) { return gi.block(b).inverse(); });
    pages.emplace_back(i, m, compose(gi, compose(p.d(), inv)));
    g.push_back(gi);
    ginv.push_back(inv);
  }
  for (int i = 0; i < h; ++i) {
    w.push_back(compose(g[i], compose(l.w(i + 1), ginv[i + 1])));
    s.push_back(compose(g[i + 1], compose(l.s(i), ginv[i])));
  }
  // a cone tail is tied to the stored coordinates, so it is not kept
  BookTail tail = l.tail().kind == BookTailKind::Zero ? BookTail::zero() : BookTail::unspecified();
  return WitnessBook(pages, w, s, tail);
}

WitnessBook random_book(Field f, Rng& rng, BookShape shape) {
  static const RepKind kinds[] = {RepKind::Y, RepKind::Z, RepKind::S, RepKind::W};
  const int span = 2 * shape.window + 1;
  std::vector<WitnessBook> parts;
  const int count = 1 + static_cast<int>(rng() % static_cast<unsigned>(shape.max_parts));
  for (int c = 0; c < count; ++c) {
    RepKind k = kinds[rng() % 4];
    IndexObject x{static_cast<int>(rng() % static_cast<unsigned>(shape.rmax + 1)),
                  static_cast<int>(rng() % static_cast<unsigned>(span)) - shape.window,
                  static_cast<int>(rng() % static_cast<unsigned>(span)) - shape.window};
    if (k == RepKind::W && x.r == 0) x.r = 1;
    parts.push_back(representable(k, x, f, shape.horizon));
  }
  return scrambled(direct_sum(parts, shape.horizon, f), rng);
}

BookColimit colimit(const BookDiagram& dg) {
  if (dg.objects.empty()) throw PreconditionError("colimit of an empty diagram");
  int h = INT_MAX;
  bool all_zero = true;
  for (auto& o : dg.objects) {
    h = std::min(h, o.horizon());
    all_zero = all_zero && o.tail().kind == BookTailKind::Zero;
  }
  for (auto& a : dg.arrows)
    if (a.from >= dg.objects.size() || a.to >= dg.objects.size())
      throw PreconditionError("diagram arrow refers to a missing object");
  std::vector<DirectSum> sums;
  std::vector<QuotientComplex> qs;
  for (int i = 0; i <= h; ++i) {
    std::vector<BigradedModule> mods;
    for (auto& o : dg.objects) mods.push_back(o.page(i).module());
    DirectSum ds = direct_sum(mods);
    BigradedMap d = BigradedMap::zero(ds.module, ds.module, diff_degree(i));
    for (std::size_t k = 0; k < dg.objects.size(); ++k)
      d = d + compose(ds.inclusions[k], compose(dg.objects[k].d(i), ds.projections[k]));
    BigradedSubspace rel;
    for (auto& a : dg.arrows) {
      BigradedMap m = compose(ds.inclusions[a.to], a.map.component(i)) - ds.inclusions[a.from];
      rel = sum(rel, image(m), ds.module);
    }
    qs.push_back(quotient(RComplex(i, ds.module, d), rel));
    sums.push_back(std::move(ds));
  }
  std::vector<RComplex> pages;
  std::vector<BigradedMap> w, s;
  for (int i = 0; i <= h; ++i) pages.push_back(qs[i].complex);
  for (int i = 0; i < h; ++i) {
    BigradedMap wi = BigradedMap::zero(sums[i + 1].module, sums[i].module);
    BigradedMap si = BigradedMap::zero(sums[i].module, sums[i + 1].module, {1, 1});
    for (std::size_t k = 0; k < dg.objects.size(); ++k) {
      wi = wi + compose(sums[i].inclusions[k], compose(dg.objects[k].w(i + 1), sums[i + 1].projections[k]));
      si = si + compose(sums[i + 1].inclusions[k], compose(dg.objects[k].s(i), sums[i].projections[k]));
    }
    w.push_back(compose(qs[i].proj, compose(wi, qs[i + 1].section)));
    s.push_back(compose(qs[i + 1].proj, compose(si, qs[i].section)));
  }
  BookColimit out{WitnessBook(pages, w, s, all_zero ? BookTail::zero() : BookTail::unspecified()), {}};
  for (std::size_t k = 0; k < dg.objects.size(); ++k) {
    std::vector<BigradedMap> c;
    for (int i = 0; i <= h; ++i) c.push_back(compose(qs[i].proj, sums[i].inclusions[k]));
    out.cocone.emplace_back(dg.objects[k], out.object, c);
  }
  return out;
}

}  // namespace ssq
