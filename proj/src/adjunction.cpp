#include "ssq/adjunction.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <set>

namespace ssq {

namespace {

std::size_t total(const std::vector<std::size_t>& v, int upto) {
  std::size_t s = 0;
  for (int i = 0; i < upto; ++i) s += v[i];
  return s;
}

using PagePres = std::map<Bidegree, CompatibleSequencePresentation>;

// Block of a map between nerve pages, given its effect on ambient coordinates.
BigradedMap nerve_block_map(const BigradedModule& src, const BigradedModule& tgt, Bidegree shift, const PagePres& sp,
                            const PagePres& tp,
                            const std::function<Matrix(const CompatibleSequencePresentation&,
                                                       const CompatibleSequencePresentation&)>& ambient) {
  BigradedMap out(src, tgt, shift);
  for (auto& [b, dim] : src.dims()) {
    auto it = tp.find(b + shift);
    if (it == tp.end()) continue;
    const auto& s = sp.at(b);
    const auto& t = it->second;
    out.set_block(b, t.pairs.coords(ambient(s, t) * s.pairs.basis()));
  }
  return out;
}

// w_{i+1} ... w_j : L_j -> L_i
BigradedMap w_power(const WitnessBook& l, int i, int j) {
  BigradedMap out = BigradedMap::identity(l.page(j).module());
  for (int k = j; k > i; --k) out = compose(l.w(k), out);
  return out;
}

int chosen(int horizon, int fallback) { return horizon < 0 ? fallback : horizon; }

}  // namespace

std::size_t CompatibleSequencePresentation::ambient() const { return total(x_dims, r + 1) + total(y_dims, r + 1); }
std::size_t CompatibleSequencePresentation::x_offset(int i) const { return total(x_dims, i); }
std::size_t CompatibleSequencePresentation::y_offset(int i) const { return total(x_dims, r + 1) + total(y_dims, i); }

CompatibleSequencePresentation compatible_sequences(const ExtSpecSeq& x, int r, Bidegree b) {
  const Field& f = x.field();
  CompatibleSequencePresentation c;
  c.r = r;
  c.x_degree = b;
  c.y_degree = b + diff_degree(r);
  for (int i = 0; i <= r; ++i) {
    c.x_dims.push_back(x.page(i).dim(c.x_degree));
    c.y_dims.push_back(x.page(i).dim(c.y_degree));
  }
  const std::size_t amb = c.ambient();
  Matrix cond(f, 0, amb);
  auto row_block = [&](std::size_t rows) { return Matrix(f, rows, amb); };
  for (int which = 0; which < 2; ++which) {
    const Bidegree deg = which == 0 ? c.x_degree : c.y_degree;
    auto off = [&](int i) { return which == 0 ? c.x_offset(i) : c.y_offset(i); };
    const auto& dims = which == 0 ? c.x_dims : c.y_dims;
    for (int i = 0; i < r; ++i) {
      RComplex p = x.page(i);
      Matrix d = p.d().block(deg);
      Matrix rows = row_block(d.rows());
      rows.set_block(0, off(i), d);
      cond = cond.vstack(rows);
      Matrix phi = x.phi(i + 1).block(deg);
      Matrix cls = x.homology(i).proj(deg, dims[i]);
      Matrix eq = row_block(phi.rows());
      eq.set_block(0, off(i + 1), phi);
      eq.set_block(0, off(i), -cls);
      cond = cond.vstack(eq);
    }
  }
  Matrix last = row_block(c.y_dims[r]);
  last.set_block(0, c.y_offset(r), Matrix::identity(f, c.y_dims[r]));
  last.set_block(0, c.x_offset(r), -x.page(r).d().block(c.x_degree));
  cond = cond.vstack(last);
  c.pairs = kernel_space(cond);
  return c;
}

NervePresentation nerve_presentation(const ExtSpecSeq& x, int horizon) {
  const int h = chosen(horizon, x.horizon());
  const Field& f = x.field();
  NervePresentation out;
  std::vector<RComplex> pages;
  std::vector<BigradedModule> mods;
  for (int r = 0; r <= h; ++r) {
    std::set<Bidegree> cand;
    for (int i = 0; i <= r; ++i)
      for (auto b : x.page(i).module().support()) {
        cand.insert(b);
        cand.insert(b - diff_degree(r));
      }
    PagePres pres;
    BigradedModule m(f);
    for (auto b : cand) {
      CompatibleSequencePresentation c = compatible_sequences(x, r, b);
      if (c.pairs.dim() == 0) continue;
      m.set_dim(b, c.pairs.dim());
      pres.emplace(b, std::move(c));
    }
    out.pages.push_back(std::move(pres));
    mods.push_back(m);
  }
  for (int r = 0; r <= h; ++r) {
    const PagePres& pr = out.pages[r];
    // d(x; y) = (y; 0)
    BigradedMap d = nerve_block_map(mods[r], mods[r], diff_degree(r), pr, pr, [&](const auto& s, const auto& t) {
      Matrix e(f, t.ambient(), s.ambient());
      for (int i = 0; i <= r; ++i) e.set_block(t.x_offset(i), s.y_offset(i), Matrix::identity(f, s.y_dims[i]));
      return e;
    });
    pages.emplace_back(r, mods[r], d);
  }
  std::vector<BigradedMap> w, s;
  for (int r = 0; r < h; ++r) {
    // w_{r+1}(x; y) = ((x_0..x_r); 0)
    w.push_back(nerve_block_map(mods[r + 1], mods[r], {0, 0}, out.pages[r + 1], out.pages[r],
                                [&](const auto& a, const auto& t) {
                                  Matrix e(f, t.ambient(), a.ambient());
                                  for (int i = 0; i <= r; ++i)
                                    e.set_block(t.x_offset(i), a.x_offset(i), Matrix::identity(f, a.x_dims[i]));
                                  return e;
                                }));
    // s_r(x; y) = (0; (y_0..y_r, 0))
    s.push_back(nerve_block_map(mods[r], mods[r + 1], {1, 1}, out.pages[r], out.pages[r + 1],
                                [&](const auto& a, const auto& t) {
                                  Matrix e(f, t.ambient(), a.ambient());
                                  for (int i = 0; i <= r; ++i)
                                    e.set_block(t.y_offset(i), a.y_offset(i), Matrix::identity(f, a.y_dims[i]));
                                  return e;
                                }));
  }
  out.book = WitnessBook(pages, w, s, BookTail::unspecified());
  return out;
}

WitnessBook nerve(const ExtSpecSeq& x, int horizon) { return nerve_presentation(x, horizon).book; }

WBMap nerve_map(const ESSMap& f, int horizon) {
  const int h = chosen(horizon, std::min(f.source().horizon(), f.target().horizon()));
  NervePresentation a = nerve_presentation(f.source(), h), b = nerve_presentation(f.target(), h);
  const Field& k = f.source().field();
  std::vector<BigradedMap> comps;
  for (int r = 0; r <= h; ++r) {
    std::vector<BigradedMap> fi;
    for (int i = 0; i <= r; ++i) fi.push_back(f.component(i));
    comps.push_back(nerve_block_map(a.book.page(r).module(), b.book.page(r).module(), {0, 0}, a.pages[r], b.pages[r],
                                    [&](const auto& s, const auto& t) {
                                      Matrix e(k, t.ambient(), s.ambient());
                                      for (int i = 0; i <= r; ++i) {
                                        e.set_block(t.x_offset(i), s.x_offset(i), fi[i].block(s.x_degree));
                                        e.set_block(t.y_offset(i), s.y_offset(i), fi[i].block(s.y_degree));
                                      }
                                      return e;
                                    }));
  }
  return WBMap(a.book, b.book, comps);
}

Realization realization(const WitnessBook& l) {
  const int h = l.horizon();
  Realization out;
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int r = 0; r <= h; ++r) {
    RComplex p = l.page(r);
    if (r == 0) {
      pages.push_back(p);
      out.proj.push_back(BigradedMap::identity(p.module()));
      out.section.push_back(BigradedMap::identity(p.module()));
      continue;
    }
    QuotientComplex q = quotient(p, s_subspace(l, r));
    const RComplex& prev = pages[r - 1];
    Homology hp = homology(prev);
    phi.push_back(compose(homology_proj(prev, hp), compose(out.proj[r - 1], compose(l.w(r), q.section))));
    pages.push_back(q.complex);
    out.proj.push_back(q.proj);
    out.section.push_back(q.section);
  }
  // past a cone tail at t <= h every page is swallowed by S_i
  Tail tail = l.tail_known() ? Tail::Zero : Tail::Unspecified;
  out.object = ExtSpecSeq(pages, phi, tail);
  return out;
}

ExtSpecSeq realize(const WitnessBook& l) { return realization(l).object; }

ESSMap realize_map(const WBMap& f) {
  Realization a = realization(f.source()), b = realization(f.target());
  const int e = std::min({f.extent(), f.source().horizon(), f.target().horizon()});
  std::vector<BigradedMap> comps;
  for (int r = 0; r <= e; ++r) comps.push_back(compose(b.proj[r], compose(f.component(r), a.section[r])));
  return ESSMap(a.object, b.object, comps);
}

WBMap unit(const WitnessBook& l) {
  Realization q = realization(l);
  const int h = l.horizon();
  NervePresentation n = nerve_presentation(q.object, h);
  std::vector<BigradedMap> comps;
  for (int r = 0; r <= h; ++r) {
    std::vector<BigradedMap> xs, ys;
    BigradedMap dr = l.d(r);
    for (int i = 0; i <= r; ++i) {
      xs.push_back(compose(q.proj[i], w_power(l, i, r)));
      ys.push_back(compose(xs.back(), dr));
    }
    const BigradedModule src = l.page(r).module();
    BigradedMap c(src, n.book.page(r).module(), {0, 0});
    for (auto& [b, dim] : src.dims()) {
      auto it = n.pages[r].find(b);
      if (it == n.pages[r].end()) continue;
      const auto& t = it->second;
      Matrix amb(l.field(), t.ambient(), dim);
      for (int i = 0; i <= r; ++i) {
        amb.set_block(t.x_offset(i), 0, xs[i].block(b));
        amb.set_block(t.y_offset(i), 0, ys[i].block(b));
      }
      c.set_block(b, t.pairs.coords(amb));
    }
    comps.push_back(c);
  }
  return WBMap(l, n.book, comps);
}

ESSMap counit(const ExtSpecSeq& x) {
  NervePresentation n = nerve_presentation(x);
  Realization q = realization(n.book);
  std::vector<BigradedMap> comps;
  for (int r = 0; r <= x.horizon(); ++r) {
    // (x; y) -> x_r on N(X)_r, then through the section of the quotient
    BigradedMap pr(n.book.page(r).module(), x.page(r).module(), {0, 0});
    for (auto& [b, c] : n.pages[r])
      pr.set_block(b, c.pairs.basis().block(c.x_offset(r), 0, c.x_dims[r], c.pairs.dim()));
    comps.push_back(compose(pr, q.section[r]));
  }
  return ESSMap(q.object, x, comps);
}

ExtSpecSeq forget(const WitnessBook& l) {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int r = 0; r <= l.horizon(); ++r) {
    pages.push_back(l.page(r));
    if (r > 0) phi.push_back(compose(homology_proj(pages[r - 1], homology(pages[r - 1])), l.w(r)));
  }
  return ExtSpecSeq(pages, phi, l.tail().kind == BookTailKind::Zero ? Tail::Zero : Tail::Unspecified);
}

ESSMap projection_to_realize(const WitnessBook& l) {
  Realization q = realization(l);
  return ESSMap(forget(l), q.object, q.proj);
}

bool projection_is_quasi_iso(const WitnessBook& l) {
  Realization q = realization(l);
  for (int r = 0; r <= l.horizon(); ++r)
    if (!is_quasi_iso(q.proj[r], l.page(r), q.object.page(r))) return false;
  return true;
}

WBMap adjunct(const WitnessBook& l, const ESSMap& g) { return compose(nerve_map(g, l.horizon()), unit(l)); }

ESSMap adjunct(const WBMap& h, const ExtSpecSeq& x) { return compose(counit(x), realize_map(h)); }

std::pair<bool, bool> nsurj_transfer_check(const ESSMap& f, int r) {
  WBMap nf = nerve_map(f, r);
  bool all = true;
  for (int i = 0; i <= r; ++i) all = all && nf.component(i).is_surjective();
  return {fib(f, r), all};
}

const char* verdict_name(ColimitVerdict v) {
  switch (v) {
    case ColimitVerdict::Holds:
      return "holds";
    case ColimitVerdict::Fails:
      return "fails";
    case ColimitVerdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

ColimitVerdict filtered_colimit_nerve_check(const std::vector<ESSMap>& chain) {
  if (chain.empty()) throw PreconditionError("a chain needs at least one map");
  for (std::size_t j = 0; j + 1 < chain.size(); ++j)
    if (chain[j].target() != chain[j + 1].source()) throw PreconditionError("chain maps do not compose");
  if (!is_iso(chain.back())) return ColimitVerdict::Inconclusive;

  Diagram dg;
  dg.objects.push_back(chain[0].source());
  for (std::size_t j = 0; j < chain.size(); ++j) {
    dg.objects.push_back(chain[j].target());
    dg.arrows.push_back({j, j + 1, chain[j]});
  }
  int h = INT_MAX;
  for (auto& o : dg.objects) h = std::min(h, o.horizon());
  Colimit cx = colimit(dg);

  BookDiagram bd;
  for (auto& o : dg.objects) bd.objects.push_back(nerve(o, h));
  for (auto& a : dg.arrows) bd.arrows.push_back({a.from, a.to, nerve_map(a.map, h)});
  BookColimit cn = colimit(bd);
  WitnessBook target = nerve(cx.object, h);
  std::vector<WBMap> legs;
  for (auto& c : cx.cocone) legs.push_back(nerve_map(c, h));

  // the canonical map colim N(X_j) -> N(colim X_j), from kappa . cocone_j = N(c_j)
  std::vector<BigradedMap> kappa;
  for (int i = 0; i <= h; ++i) {
    const BigradedModule src = cn.object.page(i).module(), tgt = target.page(i).module();
    BigradedMap k(src, tgt, {0, 0});
    for (auto& [b, dim] : src.dims()) {
      Matrix m(src.field(), dim, 0), t(src.field(), tgt.dim(b), 0);
      for (std::size_t j = 0; j < legs.size(); ++j) {
        m = m.hstack(cn.cocone[j].component(i).block(b));
        t = t.hstack(legs[j].component(i).block(b));
      }
      auto sol = m.transpose().solve(t.transpose());
      if (!sol) return ColimitVerdict::Fails;
      k.set_block(b, sol->transpose());
    }
    kappa.push_back(k);
  }
  WBMap map(cn.object, target, kappa);
  if (!map.validate().empty()) return ColimitVerdict::Fails;
  return is_iso(map) ? ColimitVerdict::Holds : ColimitVerdict::Fails;
}

}  // namespace ssq
