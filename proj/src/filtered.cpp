#include "ssq/filtered.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

namespace ssq {

namespace {

// Per-degree pieces (basis matrix, weights) to a filtration: F_p = span of the
// columns of g whose weight is <= p.
FilteredComplex::Degree weighted_degree(const Matrix& d, const Matrix& g, const std::vector<int>& w) {
  FilteredComplex::Degree out;
  const Field f = g.field();
  out.dim = w.size();
  out.d = d;
  if (w.empty()) {
    out.steps.push_back(Subspace::zero(f, 0));
    return out;
  }
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  out.lo = *lo;
  for (int p = *lo; p <= *hi; ++p) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (w[j] <= p) cols.push_back(j);
    out.steps.push_back(Subspace::span(g.select_cols(cols)));
  }
  return out;
}

// Degree k filtration given by fn on [qlo, qhi]; fn(qhi) must be all of A^k.
FilteredComplex::Degree degree_from(const FilteredComplex& c, int k, int lo, int hi,
                                    const std::function<Subspace(int)>& fn) {
  FilteredComplex::Degree out;
  out.dim = c.dim(k);
  out.d = c.d(k);
  out.lo = lo;
  for (int p = lo; p <= hi; ++p) out.steps.push_back(fn(p));
  return out;
}

struct Subquotient {
  Subspace num, den;
  Matrix proj, sec;  // in the coordinates of num.basis()
  std::size_t dim() const { return proj.rows(); }
  Matrix cls(const Matrix& v) const { return proj * num.coords(v); }
  Matrix rep() const { return num.basis() * sec; }
};

Subquotient subquotient(const Subspace& num, const Subspace& den) {
  Subquotient s;
  s.num = num;
  s.den = den;
  Quotient q = quotient_with_section(Subspace::span(num.coords(den.basis())));
  s.proj = q.proj;
  s.sec = q.section;
  return s;
}

// E_r^{p,p+k} of one filtered complex, memoized.
class Pages {
 public:
  explicit Pages(const FilteredComplex& c) : c_(c) {}

  const Subquotient& at(int r, int p, int k) {
    std::array<int, 3> key{r, p, k};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(key, subquotient(z_space(c_, r, p, k), b_space(c_, r, p, k))).first->second;
  }
  const Subquotient& at(int r, Bidegree b) { return at(r, b.p, b.n - b.p); }

  BigradedModule module(int r) {
    BigradedModule m(c_.field());
    for (int k = c_.kmin(); k <= c_.kmax(); ++k)
      for (int p = c_.pmin(); p <= c_.pmax(); ++p) m.set_dim({p, p + k}, at(r, p, k).dim());
    return m;
  }

  RComplex page(int r) {
    BigradedModule m = module(r);
    BigradedMap d = BigradedMap::build(m, m, diff_degree(r), [&](Bidegree b) {
      const int k = b.n - b.p;
      return at(r, b + diff_degree(r)).cls(c_.d(k) * at(r, b).rep());
    });
    return RComplex(r, m, d);
  }

  // E_r -> E_{r-1}, [x] -> [x]
  BigradedMap into_prev(int r) {
    return BigradedMap::build(module(r), module(r - 1), {0, 0},
                              [&](Bidegree b) { return at(r - 1, b).cls(at(r, b).rep()); });
  }

 private:
  FilteredComplex c_;
  std::map<std::array<int, 3>, Subquotient> memo_;
};

ESSMap assemble(const ExtSpecSeq& s, const ExtSpecSeq& t, const std::function<Matrix(int, Bidegree)>& block) {
  std::vector<BigradedMap> comps;
  for (int i = 0; i <= common_extent(s, t); ++i) {
    const BigradedModule ms = s.page(i).module(), mt = t.page(i).module();
    comps.push_back(BigradedMap::build(ms, mt, {0, 0}, [&](Bidegree b) { return block(i, b); }));
  }
  return ESSMap(s, t, comps);
}

ESSMap inverse(const ESSMap& f) {
  std::vector<BigradedMap> comps;
  for (const BigradedMap& c : f.components())
    comps.push_back(BigradedMap::build(c.target(), c.source(), {0, 0}, [&](Bidegree b) { return c.block(b).inverse(); }));
  return ESSMap(f.target(), f.source(), comps);
}

void verify(CompatReport& rep) {
  std::vector<std::string> v = rep.map.validate();
  if (!v.empty()) {
    rep.failure = v.front();
  } else if (!is_iso(rep.map)) {
    rep.failure = "not an isomorphism";
  } else {
    rep.verified = true;
  }
}

// Large enough that every spectral sequence involved has a stable tail.
int stable_horizon(const FilteredComplex& c, int horizon) {
  const int spread = c.kmax() - c.kmin() + 2;
  return std::max({horizon, 1, c.length() + spread + 1});
}

}  // namespace

FilteredComplex::FilteredComplex(Field f, int kmin, std::vector<Degree> degrees)
    : f_(f), kmin_(kmin), deg_(std::move(degrees)) {
  std::vector<std::string> v = validate();
  if (!v.empty()) throw ValidationError(v.front());
}

FilteredComplex FilteredComplex::trivial(Field f, int kmin, const std::vector<Matrix>& d) {
  std::vector<std::vector<int>> w;
  for (const Matrix& m : d) w.push_back(std::vector<int>(m.cols(), 0));
  return from_weights(f, kmin, d, w);
}

FilteredComplex FilteredComplex::from_weights(Field f, int kmin, const std::vector<Matrix>& d,
                                              const std::vector<std::vector<int>>& weights) {
  if (d.size() != weights.size()) throw ValidationError("one weight list per degree is required");
  std::vector<Degree> deg;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (weights[i].size() != d[i].cols())
      throw ValidationError("degree " + std::to_string(kmin + static_cast<int>(i)) + ": weight count differs from dim");
    deg.push_back(weighted_degree(d[i], Matrix::identity(f, weights[i].size()), weights[i]));
  }
  return FilteredComplex(f, kmin, deg);
}

std::size_t FilteredComplex::dim(int k) const {
  if (k < kmin() || k > kmax()) return 0;
  return deg_[k - kmin_].dim;
}

Matrix FilteredComplex::d(int k) const {
  if (k < kmin() || k > kmax()) return Matrix(f_, dim(k + 1), dim(k));
  return deg_[k - kmin_].d;
}

Subspace FilteredComplex::filt(int k, int p) const {
  if (k < kmin() || k > kmax()) return Subspace::zero(f_, 0);
  const Degree& g = deg_[k - kmin_];
  if (p < g.lo) return Subspace::zero(f_, g.dim);
  const std::size_t j = static_cast<std::size_t>(p - g.lo);
  return j < g.steps.size() ? g.steps[j] : Subspace::full(f_, g.dim);
}

int FilteredComplex::pmin() const {
  int out = 0;
  bool any = false;
  for (const Degree& g : deg_)
    if (g.dim > 0) {
      out = any ? std::min(out, g.lo) : g.lo;
      any = true;
    }
  return out;
}

int FilteredComplex::pmax() const {
  int out = 0;
  bool any = false;
  for (const Degree& g : deg_)
    if (g.dim > 0) {
      const int top = g.lo + static_cast<int>(g.steps.size()) - 1;
      out = any ? std::max(out, top) : top;
      any = true;
    }
  return out;
}

std::vector<std::string> FilteredComplex::validate() const {
  std::vector<std::string> out;
  for (int k = kmin(); k <= kmax(); ++k) {
    const Degree& g = deg_[k - kmin_];
    const std::string at = "degree " + std::to_string(k) + ": ";
    if (g.d.field() != f_ && g.d.rows() + g.d.cols() > 0) out.push_back(at + "differential over another field");
    if (g.d.rows() != dim(k + 1) || g.d.cols() != g.dim) {
      out.push_back(at + "differential has shape " + std::to_string(g.d.rows()) + "x" + std::to_string(g.d.cols()));
      continue;
    }
    if (g.steps.empty()) {
      out.push_back(at + "filtration has no steps");
      continue;
    }
    for (std::size_t j = 0; j < g.steps.size(); ++j) {
      if (g.steps[j].ambient() != g.dim) out.push_back(at + "filtration step in the wrong space");
      else if (j > 0 && !g.steps[j].contains(g.steps[j - 1])) out.push_back(at + "filtration is not increasing");
    }
    if (!out.empty()) continue;
    if (g.steps.back().dim() != g.dim) out.push_back(at + "filtration is not exhaustive");
  }
  if (!out.empty()) return out;
  for (int k = kmin(); k < kmax(); ++k)
    if (!(d(k + 1) * d(k)).is_zero()) out.push_back("d^2 != 0 at degree " + std::to_string(k));
  for (int k = kmin(); k <= kmax(); ++k)
    for (int p = pmin() - 1; p <= pmax(); ++p)
      if (!filt(k + 1, p).contains(d(k) * filt(k, p).basis()))
        out.push_back("d does not preserve F_" + std::to_string(p) + " in degree " + std::to_string(k));
  return out;
}

bool FilteredComplex::operator==(const FilteredComplex& o) const {
  if (f_ != o.f_ || kmin_ != o.kmin_ || deg_.size() != o.deg_.size()) return false;
  for (std::size_t i = 0; i < deg_.size(); ++i) {
    const Degree &a = deg_[i], &b = o.deg_[i];
    if (a.dim != b.dim || a.d != b.d || a.lo != b.lo || a.steps != b.steps) return false;
  }
  return true;
}

Matrix FilteredMap::at(int k) const {
  const int i = k - source.kmin();
  if (i < 0 || i >= static_cast<int>(maps.size())) return Matrix(source.field(), target.dim(k), source.dim(k));
  return maps[i];
}

std::vector<std::string> FilteredMap::validate() const {
  std::vector<std::string> out;
  if (source.field() != target.field()) return {"source and target over different fields"};
  if (maps.size() != source.degrees().size()) return {"one matrix per source degree is required"};
  for (int k = source.kmin(); k <= source.kmax(); ++k) {
    Matrix m = at(k);
    if (m.rows() != target.dim(k) || m.cols() != source.dim(k)) {
      out.push_back("degree " + std::to_string(k) + ": map has the wrong shape");
      continue;
    }
  }
  if (!out.empty()) return out;
  for (int k = source.kmin(); k <= source.kmax(); ++k) {
    if (target.d(k) * at(k) != at(k + 1) * source.d(k)) out.push_back("not a chain map at degree " + std::to_string(k));
    for (int p = std::min(source.pmin(), target.pmin()) - 1; p <= std::max(source.pmax(), target.pmax()); ++p)
      if (!target.filt(k, p).contains(at(k) * source.filt(k, p).basis()))
        out.push_back("F_" + std::to_string(p) + " not preserved in degree " + std::to_string(k));
  }
  return out;
}

Subspace z_space(const FilteredComplex& c, int r, int p, int k) {
  return c.filt(k, p).intersect(intersect_preimage(c.d(k), c.filt(k + 1, p - r)));
}

Subspace b_space(const FilteredComplex& c, int r, int p, int k) {
  Subspace lower = z_space(c, r - 1, p - 1, k);
  Subspace from = z_space(c, r - 1, p + r - 1, k - 1);
  return lower.sum(Subspace::span(c.d(k - 1) * from.basis()));
}

ExtSpecSeq ss(const FilteredComplex& c, int horizon) {
  if (horizon < 0) throw RangeError("negative horizon");
  Pages pg(c);
  std::vector<RComplex> pages{pg.page(0)};
  std::vector<BigradedMap> phi;
  for (int r = 1; r <= horizon; ++r) {
    pages.push_back(pg.page(r));
    const RComplex& prev = pages[r - 1];
    phi.push_back(compose(homology_proj(prev, homology(prev)), pg.into_prev(r)));
  }
  // Pages r > length agree as subquotients and carry d_r = 0.
  const Tail tail = horizon > c.length() ? Tail::Stable : Tail::Unspecified;
  return ExtSpecSeq(pages, phi, tail);
}

ESSMap ss_map(const FilteredMap& f, int horizon) {
  std::vector<std::string> v = f.validate();
  if (!v.empty()) throw ValidationError(v.front());
  Pages ps(f.source), pt(f.target);
  return assemble(ss(f.source, horizon), ss(f.target, horizon), [&](int i, Bidegree b) {
    return pt.at(i, b).cls(f.at(b.n - b.p) * ps.at(i, b).rep());
  });
}

FilteredComplex dec_filtration(const FilteredComplex& c) {
  std::vector<FilteredComplex::Degree> deg;
  for (int k = c.kmin(); k <= c.kmax(); ++k) {
    // index q = p - k runs until F_q A^k and F_{q-1} A^{k+1} are both everything
    const int lo = c.pmin(), hi = c.pmax() + 1;
    deg.push_back(degree_from(c, k, lo + k, hi + k, [&](int p) { return z_space(c, 1, p - k, k); }));
  }
  return FilteredComplex(c.field(), c.kmin(), deg);
}

FilteredComplex decstar_filtration(const FilteredComplex& c) {
  std::vector<FilteredComplex::Degree> deg;
  for (int k = c.kmin(); k <= c.kmax(); ++k) {
    const int lo = c.pmin() - 1, hi = c.pmax();
    deg.push_back(degree_from(c, k, lo + k, hi + k, [&](int p) {
      const int q = p - k;
      return c.filt(k, q).sum(Subspace::span(c.d(k - 1) * c.filt(k - 1, q + 1).basis()));
    }));
  }
  return FilteredComplex(c.field(), c.kmin(), deg);
}

FilteredComplex shift_filtration(const FilteredComplex& c) {
  std::vector<FilteredComplex::Degree> deg = c.degrees();
  for (std::size_t i = 0; i < deg.size(); ++i) deg[i].lo -= c.kmin() + static_cast<int>(i);
  return FilteredComplex(c.field(), c.kmin(), deg);
}

CompatReport compat_shift(const FilteredComplex& c, int horizon) {
  const FilteredComplex s = shift_filtration(c);
  const int h = stable_horizon(c, horizon);
  Pages pc(c), ps(s);
  CompatReport rep;
  try {
    rep.map = assemble(ss(s, h + 1), shift_r(ss(c, h), 1), [&](int i, Bidegree b) {
      const Bidegree down = translate(b, -1);
      return pc.at(std::max(0, i - 1), down).cls(ps.at(i, b).rep());
    });
    verify(rep);
  } catch (const Error& e) {
    rep.failure = e.what();
  }
  return rep;
}

CompatDec compat_dec(const FilteredComplex& c, int horizon) {
  const FilteredComplex dc = dec_filtration(c);
  const int h = stable_horizon(c, horizon);
  Pages pc(c), pd(dc);
  CompatDec rep;
  try {
    const ExtSpecSeq x = ss(c, h + 1);
    const ExtSpecSeq src = ss(dc, h);
    const ExtSpecSeq tgt = dec_r(x, 1);
    QrData qd = qr_data(x, 1);
    NervePresentation np = nerve_presentation(x, 1);
    rep.rho = qd.rho.translated(-1);
    const BigradedModule s0 = src.page(0).module();
    rep.u0 = BigradedMap::build(s0, x.page(1).module().translated(-1), {0, 0}, [&](Bidegree s) {
      return pc.at(1, translate(s, 1)).cls(pd.at(0, s).rep());
    });
    rep.map = assemble(src, tgt, [&](int i, Bidegree s) {
      const Bidegree b = translate(s, 1);
      const Matrix xs = pd.at(i, s).rep();
      if (i > 0) return pc.at(i + 1, b).cls(xs);
      auto it = np.pages[1].find(b);
      if (it == np.pages[1].end()) throw Error("no compatible pairs at " + b.str());
      const CompatibleSequencePresentation& cs = it->second;
      const int k = b.n - b.p;
      const Matrix dx = c.d(k) * xs;
      const Bidegree y = b + diff_degree(1);
      Matrix v(c.field(), cs.ambient(), xs.cols());
      v.set_block(cs.x_offset(0), 0, pc.at(0, b).cls(xs));
      v.set_block(cs.x_offset(1), 0, pc.at(1, b).cls(xs));
      v.set_block(cs.y_offset(0), 0, pc.at(0, y).cls(dx));
      v.set_block(cs.y_offset(1), 0, pc.at(1, y).cls(dx));
      if (!cs.pairs.contains(v)) throw Error("([x]_0,[x]_1;[dx]_0,[dx]_1) is not a compatible pair at " + b.str());
      return cs.pairs.coords(v);
    });
    verify(rep);
  } catch (const Error& e) {
    rep.failure = e.what();
  }
  return rep;
}

CompatDecStar compat_decstar(const FilteredComplex& c, int horizon) {
  const FilteredComplex ds = decstar_filtration(c);
  const int h = stable_horizon(c, horizon);
  Pages pc(c), pd(ds);
  CompatDecStar rep;
  try {
    const ExtSpecSeq x = ss(c, h + 1);
    const ExtSpecSeq star = ss(ds, h);
    const ExtSpecSeq ld = ldec_r(x, 1);
    QrData qd = qr_data(x, 1);
    rep.q = qd.q;
    rep.coker_proj = qd.coker.proj;
    const Bidegree up{1, 0};
    rep.on_cone = BigradedMap::build(qd.cone.module(), star.page(0).module().translated(1), {0, 0}, [&](Bidegree b) {
      const int k = b.n - b.p;
      const std::size_t na = x.page(0).dim(b), nb = x.page(0).dim(b + up);
      Matrix a = pc.at(0, b).rep(), bb = c.d(k - 1) * pc.at(0, b + up).rep();
      Matrix v = a.hstack(bb);
      if (v.cols() != na + nb) throw Error("cone block has the wrong size at " + b.str());
      return pd.at(0, translate(b, -1)).cls(v);
    });
    rep.formula = assemble(ld, star, [&](int i, Bidegree s) {
      const Bidegree b = translate(s, 1);
      if (i > 0) return pd.at(i, s).cls(pc.at(i + 1, b).rep());
      return rep.on_cone.block(b) * qd.coker.section.block(b);
    });
    CompatReport fwd{rep.formula, false, {}};
    verify(fwd);
    if (!fwd.verified) {
      rep.failure = fwd.failure;
      return rep;
    }
    rep.map = inverse(rep.formula);
    verify(rep);
  } catch (const Error& e) {
    rep.failure = e.what();
  }
  return rep;
}

FilteredComplex random_filtered(Field f, Rng& rng, FilteredShape shape) {
  const int nk = shape.kmax - shape.kmin + 1;
  std::vector<std::vector<int>> w(nk);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(nk);  // (source, target) indices
  std::uniform_int_distribution<int> pieces(1, shape.max_pieces), deg(0, nk - 1), coin(0, 1),
      weight(0, shape.length);
  for (int t = pieces(rng); t > 0; --t) {
    const int i = deg(rng);
    const int a = weight(rng);
    if (i + 1 < nk && coin(rng)) {
      // x -> dx with dx at the same or a lower filtration index
      std::uniform_int_distribution<int> lower(0, a);
      pairs[i].push_back({w[i].size(), w[i + 1].size()});
      w[i].push_back(a);
      w[i + 1].push_back(lower(rng));
    } else {
      w[i].push_back(a);
    }
  }
  std::vector<Matrix> g;
  for (int i = 0; i < nk; ++i) g.push_back(random_invertible(f, w[i].size(), rng));
  std::vector<FilteredComplex::Degree> out;
  for (int i = 0; i < nk; ++i) {
    const std::size_t next = i + 1 < nk ? w[i + 1].size() : 0;
    Matrix d(f, next, w[i].size());
    for (auto [s, t] : pairs[i]) d.set_int(t, s, 1);
    if (i + 1 < nk) d = g[i + 1] * d * g[i].inverse();
    out.push_back(weighted_degree(d, g[i], w[i]));
  }
  return FilteredComplex(f, shape.kmin, out);
}

}  // namespace ssq
