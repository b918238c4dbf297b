#include "ssq/model.hpp"

#include <algorithm>

namespace ssq {

namespace {

BigradedMap invert(const BigradedMap& f) {
  if (f.source().dims() != f.target().dims()) throw NotInvertible("map between modules of different shape");
  return BigradedMap::build(f.target(), f.source(), {0, 0}, [&](Bidegree b) { return f.block(b).inverse(); });
}

// The map out of a coproduct with components g0 on the first summand and g1 on the second.
BigradedMap copair(const BigradedMap& c0, const BigradedMap& c1, const BigradedMap& g0, const BigradedMap& g1) {
  return BigradedMap::build(c0.target(), g0.target(), {0, 0}, [&](Bidegree b) {
    Matrix c = c0.block(b).hstack(c1.block(b));
    return g0.block(b).hstack(g1.block(b)) * c.inverse();
  });
}

ESSMap copair(const Colimit& s, const ESSMap& g0, const ESSMap& g1) {
  const ExtSpecSeq& y = g0.target();
  std::vector<BigradedMap> comps;
  for (int m = 0; m <= common_extent(s.object, y); ++m)
    comps.push_back(copair(s.cocone[0].component(m), s.cocone[1].component(m), g0.component(m), g1.component(m)));
  return ESSMap(s.object, y, comps);
}

// g restricted to subobjects, given their inclusions; g must preserve them.
BigradedMap restrict_map(const BigradedMap& g, const BigradedMap& in_src, const BigradedMap& in_tgt) {
  return BigradedMap::build(in_src.source(), in_tgt.source(), g.shift(), [&](Bidegree b) {
    Matrix img = g.block(b) * in_src.block(b);
    auto x = in_tgt.block(b + g.shift()).solve(img);
    if (!x) throw Error("map does not preserve the subobject at " + b.str());
    return *x;
  });
}

// f(Ker g) inside f(Ker h), bidegreewise; f, g, h share the source.
bool image_of_kernel_inside(const BigradedMap& f, const BigradedMap& g, const BigradedMap& h) {
  const Field& k = f.field();
  BigradedSubspace kg = kernel(g), kh = kernel(h);
  for (auto& [b, d] : f.source().dims()) {
    Matrix big = f.block(b) * component(kg, b, d, k).basis();
    Matrix small = f.block(b) * component(kh, b, d, k).basis();
    if (!Subspace::span(small).contains(big)) return false;
  }
  return true;
}

WitnessBook zero_book(Field f) { return WitnessBook(f); }

ExtSpecSeq lower_pages(const RComplex& a, int r) {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int m = 0; m <= r; ++m) {
    pages.push_back(m < r ? RComplex(m, a.module()) : a);
    if (m > 0) phi.push_back(compose(homology_proj(pages[m - 1], homology(pages[m - 1])), BigradedMap::identity(a.module())));
  }
  return ExtSpecSeq(pages, phi, Tail::Zero);
}

}  // namespace

bool fib_r(const WBMap& f, int r) {
  for (int i = 0; i <= r; ++i)
    if (!f.component(i).is_surjective()) return false;
  return true;
}

bool weq_r(const WBMap& f, int r) {
  Homology a = homology(f.source().page(r)), b = homology(f.target().page(r));
  if (a.module != b.module) return false;
  return homology_map(f.component(r), a, b).is_iso();
}

std::string gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::I: return "I_r";
    case GenKind::J: return "J_r";
    case GenKind::ILe: return "I_<=r";
    case GenKind::JLe: return "J_<=r";
  }
  return "?";
}

namespace {

Generator j_member(int k, Bidegree b, Field f, int horizon) {
  WitnessBook y = representable(RepKind::Y, {k, b.p, b.n}, f, horizon);
  return {{k, b.p, b.n}, false, WBMap::zero(zero_book(f), y)};
}

Bidegree delta_target(int r, Bidegree b) { return {b.p + r, b.n + r - 1}; }

Generator i_member(int r, Bidegree b, Field f, int horizon) {
  const Bidegree t = delta_target(r, b);
  const Scalar one(f, 1L);
  NormalMorphism d = normalize(make_word({delta(r, t.p, t.n)}, one));
  return {{r, b.p, b.n}, true, representable_morphism(RepKind::Z, RepKind::Y, d, horizon)};
}

}  // namespace

GeneratingSet generating_set(GenKind kind, int r, const std::set<Bidegree>& window, Field f, int horizon) {
  GeneratingSet g;
  g.r = r;
  g.kind = kind;
  auto add_j = [&](int k) {
    for (Bidegree b : window) g.members.push_back(j_member(k, b, f, horizon));
  };
  switch (kind) {
    case GenKind::J: add_j(r); break;
    case GenKind::JLe:
      for (int k = 0; k <= r; ++k) add_j(k);
      break;
    case GenKind::ILe:
      for (int k = 0; k < r; ++k) add_j(k);
      [[fallthrough]];
    case GenKind::I:
      for (Bidegree b : window) g.members.push_back(i_member(r, b, f, horizon));
      break;
  }
  return g;
}

std::set<Bidegree> support_window(const WBMap& f, int margin) {
  std::set<Bidegree> supp, out;
  for (const WitnessBook* l : {&f.source(), &f.target()})
    for (int i = 0; i <= l->horizon(); ++i) {
      const RComplex c = l->page(i);
      for (auto& [b, d] : c.module().dims()) supp.insert(b);
    }
  for (Bidegree b : supp)
    for (int a = -margin; a <= margin; ++a)
      for (int c = -margin; c <= margin; ++c) out.insert({b.p + a, b.n + c});
  return out;
}

bool commutes(const BookSquare& s) {
  return compose(s.p, s.top) == compose(s.bottom, s.i);
}

bool commutes(const EssSquare& s) {
  return compose(s.p, s.top) == compose(s.bottom, s.i);
}

std::optional<WBMap> solve_lift(const BookSquare& s) {
  if (!commutes(s)) throw PreconditionError("lifting square does not commute");
  BookHomSystem sys(s.i.target(), s.top.target());
  MapEquations& eq = sys.equations();
  const WitnessBook &a = s.i.source(), &b = s.i.target(), &k = s.p.source(), &l = s.p.target();
  std::vector<BigradedMap> keep;
  keep.reserve(4 * (sys.extent() + 1));
  for (int m = 0; m <= sys.extent(); ++m) {
    const BigradedMap& im = keep.emplace_back(s.i.component(m));
    const BigradedMap& pm = keep.emplace_back(s.p.component(m));
    const BigradedMap& tm = keep.emplace_back(-s.top.component(m));
    const BigradedMap& bm = keep.emplace_back(-s.bottom.component(m));
    eq.add({{nullptr, &sys.unknown(m), &im}}, &tm, a.page(m).module(), k.page(m).module());
    eq.add({{&pm, &sys.unknown(m), nullptr}}, &bm, b.page(m).module(), l.page(m).module());
  }
  auto sol = eq.system().solve();
  if (!sol) return std::nullopt;
  WBMap h = sys.assemble(*sol);
  if (!h.validate().empty() || compose(h, s.i) != s.top || compose(s.p, h) != s.bottom)
    throw Error("lift failed verification");
  return h;
}

std::optional<ESSMap> solve_lift(const EssSquare& s) {
  if (!commutes(s)) throw PreconditionError("lifting square does not commute");
  EssHomSystem sys(s.i.target(), s.top.target());
  MapEquations& eq = sys.equations();
  const ExtSpecSeq &a = s.i.source(), &b = s.i.target(), &k = s.p.source(), &l = s.p.target();
  std::vector<BigradedMap> keep;
  keep.reserve(4 * (sys.extent() + 1));
  for (int m = 0; m <= sys.extent(); ++m) {
    const BigradedMap& im = keep.emplace_back(s.i.component(m));
    const BigradedMap& pm = keep.emplace_back(s.p.component(m));
    const BigradedMap& tm = keep.emplace_back(-s.top.component(m));
    const BigradedMap& bm = keep.emplace_back(-s.bottom.component(m));
    eq.add({{nullptr, &sys.unknown(m), &im}}, &tm, a.page(m).module(), k.page(m).module());
    eq.add({{&pm, &sys.unknown(m), nullptr}}, &bm, b.page(m).module(), l.page(m).module());
  }
  auto sol = eq.system().solve();
  if (!sol) return std::nullopt;
  ESSMap h = sys.assemble(*sol);
  if (!h.validate().empty() || compose(h, s.i) != s.top || compose(s.p, h) != s.bottom)
    throw Error("lift failed verification");
  return h;
}

RlpReport rlp_generators(const WBMap& f, int r, GenKind flavor) {
  if (flavor != GenKind::ILe && flavor != GenKind::JLe) throw PreconditionError("flavor must be I_<=r or J_<=r");
  const WitnessBook &k = f.source(), &l = f.target();
  const Field& fld = k.field();
  const int h = std::max({k.horizon(), l.horizon(), r});
  RlpReport rep;
  // delta_r moves bidegrees by (r, r-1), which is nonzero even for r = 0
  const std::set<Bidegree> window = support_window(f, std::max(r, 1));
  const int jmax = flavor == GenKind::JLe ? r : r - 1;
  for (int j = 0; j <= jmax && rep.holds; ++j)
    for (Bidegree b : window) {
      // squares are (0, v) with v in L_j^b
      if (l.page(j).dim(b) == 0) {
        ++rep.vacuous;
        continue;
      }
      ++rep.checked;
      Generator g = j_member(j, b, fld, h);
      if (!has_rlp(g.map, f)) {
        rep.holds = false;
        rep.failure = "0 -> Y" + g.index.str();
        break;
      }
    }
  if (flavor == GenKind::ILe && rep.holds)
    for (Bidegree b : window) {
      // squares (u, v) with u in Hom(Z, K) inside K_r^b and v in L_r^{b'}
      if (k.page(r).dim(b) == 0 && l.page(r).dim(delta_target(r, b)) == 0) {
        ++rep.vacuous;
        continue;
      }
      ++rep.checked;
      Generator g = i_member(r, b, fld, h);
      if (!has_rlp(g.map, f)) {
        rep.holds = false;
        rep.failure = "delta : Z" + g.index.str() + " -> Y";
        break;
      }
    }
  return rep;
}

ESSMap lift_iso_vs_strict(const EssSquare& s, int r) {
  if (!commutes(s)) throw PreconditionError("lifting square does not commute");
  if (!iso_below(s.i, r)) throw PreconditionError("left leg is not an isomorphism on pages <= r");
  if (!weq_strict(s.p, r)) throw PreconditionError("right leg is not in E'_r");
  const ExtSpecSeq &z = s.i.target(), &y = s.p.source();
  std::vector<BigradedMap> comps;
  for (int m = 0; m <= common_extent(z, y); ++m)
    comps.push_back(m <= r ? compose(s.top.component(m), invert(s.i.component(m)))
                           : compose(invert(s.p.component(m)), s.bottom.component(m)));
  return ESSMap(z, y, comps);
}

ESSMap lift_strict_vs_iso(const EssSquare& s, int r) {
  if (!commutes(s)) throw PreconditionError("lifting square does not commute");
  if (!weq_strict(s.i, r)) throw PreconditionError("left leg is not in E'_r");
  if (!iso_below(s.p, r)) throw PreconditionError("right leg is not an isomorphism on pages <= r");
  const ExtSpecSeq &z = s.i.target(), &y = s.p.source();
  std::vector<BigradedMap> comps;
  for (int m = 0; m <= common_extent(z, y); ++m)
    comps.push_back(m <= r ? compose(invert(s.p.component(m)), s.bottom.component(m))
                           : compose(s.top.component(m), invert(s.i.component(m))));
  return ESSMap(z, y, comps);
}

Factorization factor_iso_strict(const ESSMap& f, int r) {
  const ExtSpecSeq &x = f.source(), &y = f.target();
  if (!weq(f, r)) throw PreconditionError("H(f_r) is not invertible");
  const int top = std::max(r + 1, y.horizon());
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int m = 0; m <= top; ++m) {
    pages.push_back(m <= r ? x.page(m) : y.page(m));
    if (m == 0) continue;
    if (m <= r) phi.push_back(x.phi(m));
    else if (m == r + 1) phi.push_back(compose(invert(homology_map(f.component(r), x.homology(r), y.homology(r))), y.phi(m)));
    else phi.push_back(y.phi(m));
  }
  ExtSpecSeq yp(pages, phi, y.tail());
  std::vector<BigradedMap> u, ft;
  for (int m = 0; m <= common_extent(x, yp); ++m)
    u.push_back(m <= r ? BigradedMap::identity(x.page(m).module()) : f.component(m));
  for (int m = 0; m <= common_extent(yp, y); ++m)
    ft.push_back(m <= r ? f.component(m) : BigradedMap::identity(y.page(m).module()));
  Factorization out{ESSMap(x, yp, u), ESSMap(yp, y, ft)};
  if (!out.first.validate().empty() || !out.second.validate().empty() || !iso_below(out.first, r))
    throw Error("factorization failed its postconditions");
  if (yp.tail_known() && !weq_strict(out.second, r)) throw Error("second leg is not in E'_r");
  if (fib(f, r) && !fib(out.second, r)) throw Error("second leg lost the fibration property");
  return out;
}

Factorization factor_cone_fib(const ESSMap& f, int r) {
  const ExtSpecSeq &x = f.source(), &y = f.target();
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  const RComplex yr = y.page(r);
  for (int m = 0; m <= r; ++m) {
    pages.push_back(m < r ? y.page(m) : cone(yr.module(), r));
    if (m == 0) continue;
    phi.push_back(m < r ? y.phi(m) : compose(y.phi(r), cone_projection(yr)));
  }
  ExtSpecSeq yp(pages, phi, Tail::Zero);
  std::vector<BigradedMap> pc;
  for (int m = 0; m <= common_extent(yp, y); ++m) {
    if (m < r) pc.push_back(BigradedMap::identity(y.page(m).module()));
    else if (m == r) pc.push_back(cone_projection(yr));
    else pc.push_back(BigradedMap::zero(yp.page(m).module(), y.page(m).module()));
  }
  ESSMap p(yp, y, pc);
  Colimit s = coproduct({x, yp}, x.field());
  ESSMap q = copair(s, f, p);
  Factorization out{s.cocone[0], q};
  if (!q.validate().empty() || !fib(q, r) || compose(q, out.first) != f)
    throw Error("cone factorization failed its postconditions");
  return out;
}

Factorization factor_main(const ESSMap& f, int r) {
  if (!weq(f, r))
    throw NotImplemented("the first leg needs the small object argument when f is not in E_r");
  Factorization a = factor_cone_fib(f, r);
  Factorization b = factor_iso_strict(a.second, r);
  return {compose(b.first, a.first), b.second};
}

bool cof0_check(const ESSMap& f) { return f.component(0).is_injective(); }

Cof0Sampling cof0_sample(const ESSMap& f, std::size_t samples, Rng& rng) {
  const ExtSpecSeq &x = f.source(), &z = f.target();
  const Field& k = x.field();
  const RComplex x0 = x.page(0), z0 = z.page(0);
  // Cone_0 of X_0 moved by the differential degree, so that x -> (dx, x) has degree 0
  const RComplex cx = cone(x0.module().shifted(diff_degree(0)), 0);
  const BigradedMap into_cone = BigradedMap::build(x0.module(), cx.module(), {0, 0}, [&](Bidegree b) {
    return x0.d().block(b).vstack(Matrix::identity(k, x0.dim(b)));
  });
  Cof0Sampling out;
  ComplexShape shape;
  shape.window = 1;
  shape.max_pieces = 3;
  for (std::size_t t = 0; t < samples; ++t) {
    RComplex w = random_complex(k, 0, rng, shape);
    RComplex y = direct_sum(w, cx);
    DirectSum ds = direct_sum(std::vector<BigradedModule>{w.module(), cx.module()});
    BigradedMap p = ds.projections[0];
    BigradedMap beta = random_chain_map(z0, w, rng);
    BigradedMap kpart = into_cone.scaled(random_scalar(k, rng)) + random_chain_map(x0, cx, rng);
    BigradedMap alpha = compose(ds.inclusions[0], compose(beta, f.component(0))) + compose(ds.inclusions[1], kpart);

    // the square on page 0, carried to extended spectral sequences
    std::vector<RComplex> yp{y}, wp{w};
    std::vector<BigradedMap> yphi, wphi;
    for (int m = 1; m <= x.horizon(); ++m) {
      yp.push_back(x.page(m));
      yphi.push_back(m == 1 ? compose(homology_map(alpha, homology(x0), homology(y)), x.phi(1)) : x.phi(m));
    }
    for (int m = 1; m <= z.horizon(); ++m) {
      wp.push_back(z.page(m));
      wphi.push_back(m == 1 ? compose(homology_map(beta, homology(z0), homology(w)), z.phi(1)) : z.phi(m));
    }
    ExtSpecSeq ybar(yp, yphi, x.tail()), wbar(wp, wphi, z.tail());
    std::vector<BigradedMap> ac, bc, pc;
    for (int m = 0; m <= common_extent(x, ybar); ++m) ac.push_back(m == 0 ? alpha : BigradedMap::identity(x.page(m).module()));
    for (int m = 0; m <= common_extent(z, wbar); ++m) bc.push_back(m == 0 ? beta : BigradedMap::identity(z.page(m).module()));
    for (int m = 0; m <= common_extent(ybar, wbar); ++m) pc.push_back(m == 0 ? p : f.component(m));
    ESSMap abar(x, ybar, ac), bbar(z, wbar, bc), pbar(ybar, wbar, pc);
    Factorization pf = factor_iso_strict(pbar, 0);
    EssSquare sq{f, pf.second, compose(pf.first, abar), bbar};
    ++out.samples;
    if (solve_lift(sq)) ++out.solvable;
    else if (!out.unsolvable) out.unsolvable = sq;
  }
  return out;
}

KernelBook kernel_book(const WBMap& p) {
  const WitnessBook& k = p.source();
  const int h = k.tail_known() ? p.extent() : std::min(p.extent(), k.horizon());
  KernelBook out;
  std::vector<RComplex> pages;
  for (int m = 0; m <= h; ++m) {
    SubComplex sc = subcomplex(k.page(m), kernel(p.component(m)));
    pages.push_back(sc.complex);
    out.inclusion.push_back(sc.inclusion);
  }
  std::vector<BigradedMap> w, s;
  for (int m = 0; m < h; ++m) {
    w.push_back(restrict_map(k.w(m + 1), out.inclusion[m + 1], out.inclusion[m]));
    s.push_back(restrict_map(k.s(m), out.inclusion[m], out.inclusion[m + 1]));
  }
  out.book = WitnessBook(pages, w, s, BookTail::unspecified());
  return out;
}

AppCReport appc_conditions(const WBMap& p) {
  const WitnessBook &l = p.source(), &m = p.target();
  if (!in_lwbs(l) || !in_lwbs(m)) throw PreconditionError("source and target must lie in lwbs");
  KernelBook kb = kernel_book(p);
  AppCReport rep;
  rep.last = kb.book.horizon() - 1;
  for (int i = 0; i <= rep.last; ++i) {
    const BigradedMap pi = p.component(i), pn = p.component(i + 1);
    bool cs = image_of_kernel_inside(pi, compose(m.s(i), pi), l.s(i));
    bool cw = image_of_kernel_inside(pn, compose(m.w(i + 1), pn), l.w(i + 1));
    rep.c_sigma.push_back(cs);
    rep.c_omega.push_back(cw);
    rep.conditions = rep.conditions && cs && cw;
  }
  rep.ker_in_lwbs = in_lwbs(kb.book);
  return rep;
}

WBMap appc_fixture(int r, Field f, int horizon) {
  ExtSpecSeq d = disc(f, r, {0, 0}, horizon), u = unit(f, {0, 0}, horizon);
  std::vector<ESSMap> basis = hom_basis(d, u);
  if (basis.size() != 1) throw Error("expected a one-dimensional Hom(D_r(0,0), R(0,0))");
  return nerve_map(basis[0], horizon);
}

ExtSpecSeq localization_witness(int r, Field f) {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int m = 0; m < r; ++m) pages.push_back(RComplex::zero(m, f));
  BigradedModule a(f, {{{0, 0}, 1}, {diff_degree(r), 1}});
  BigradedMap d(a, a, diff_degree(r));
  d.set_block({0, 0}, Matrix::identity(f, 1));
  pages.emplace_back(r, a, d);
  pages.emplace_back(r + 1, BigradedModule(f, {{{0, 0}, 1}}));
  for (int m = 1; m <= r + 1; ++m)
    phi.push_back(BigradedMap::zero(pages[m].module(), homology(pages[m - 1]).module));
  return ExtSpecSeq(pages, phi, Tail::Zero);
}

ESSMap strict_projection(const ExtSpecSeq& y, int r, Rng& rng) {
  ComplexShape shape;
  shape.window = 1;
  shape.max_pieces = 2;
  ExtSpecSeq a = lower_pages(random_acyclic(y.field(), r, rng, shape), r);
  Colimit s = coproduct({y, a}, y.field());
  return copair(s, ESSMap::identity(y), ESSMap::zero(a, y));
}

LocalizationReport localization_check(int r, std::uint64_t seed) {
  const Field f = Field::default_field();
  LocalizationReport rep;
  rep.witness = localization_witness(r, f);
  ESSMap w = ESSMap::zero(rep.witness, ExtSpecSeq(f));
  rep.witness_in_e = fib(w, r) && weq(w, r);
  rep.witness_in_eprime = weq_strict(w, r);
  Rng rng(seed);
  EssShape shape;
  shape.horizon = r + 2;
  shape.complex.window = 1;
  shape.complex.max_pieces = 3;
  ExtSpecSeq y = random_ess(f, rng, shape);
  ESSMap id = ESSMap::identity(y);
  rep.identity_in_both = weq(id, r) && weq_strict(id, r);
  ESSMap s = strict_projection(y, r, rng);
  rep.strict_in_both = s.validate().empty() && weq(s, r) && weq_strict(s, r) && fib(s, r);
  return rep;
}

}  // namespace ssq
