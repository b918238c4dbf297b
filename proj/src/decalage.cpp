#include "ssq/decalage.hpp"

#include <algorithm>

namespace ssq {

namespace {

BigradedMap invert(const BigradedMap& f) {
  if (f.source() != f.target() && f.source().dims().size() != f.target().dims().size())
    throw NotInvertible("map between modules of different shape");
  return BigradedMap::build(f.target(), f.source(), {0, 0}, [&](Bidegree b) { return f.block(b).inverse(); });
}

// Enough stored pages that page r+1 is known whenever the tail says what it is.
ExtSpecSeq prepared(const ExtSpecSeq& x, int r) {
  if (x.tail_known() && x.horizon() < r + 1) return x.extended(r + 1);
  if (x.horizon() < r) throw HorizonError("page " + std::to_string(r) + " lies past the horizon");
  return x;
}

Bidegree up(int r) { return {r, r - 1}; }

// Cone_r(A) -> Cone_r(B) induced by g : A -> B of bidegree 0.
BigradedMap cone_map(const BigradedMap& g, const RComplex& ca, const RComplex& cb, int r) {
  return BigradedMap::build(ca.module(), cb.module(), {0, 0}, [&](Bidegree b) {
    return g.block(b).block_diag(g.block(b + up(r)));
  });
}

// a -> (a, 0) into the first summand of Cone_r(A).
BigradedMap cone_first(const BigradedModule& a, const RComplex& c) {
  return BigradedMap::build(a, c.module(), {0, 0}, [&](Bidegree b) {
    Matrix m(a.field(), c.dim(b), a.dim(b));
    m.set_block(0, 0, Matrix::identity(a.field(), a.dim(b)));
    return m;
  });
}

BigradedMap phi_from(const RComplex& prev, const BigradedMap& into_prev_module) {
  return compose(homology_proj(prev, homology(prev)), into_prev_module);
}

Matrix flatten(const ESSMap& f, int last) {
  const Field& k = f.source().field();
  Matrix out(k, 0, 1);
  for (int i = 0; i <= last; ++i) {
    BigradedMap c = f.component(i);
    const BigradedModule m = f.source().page(i).module();
    for (auto& [b, d] : m.dims()) {
      Matrix blk = c.block(b);
      for (std::size_t col = 0; col < blk.cols(); ++col) out = out.vstack(blk.block(0, col, blk.rows(), 1));
    }
  }
  return out;
}

}  // namespace

QrData qr_data(const ExtSpecSeq& x, int r) {
  const Field& f = x.field();
  NervePresentation n = nerve_presentation(x, r);
  QrData d;
  d.r = r;
  d.nerve_page = n.book.page(r);
  const BigradedModule x0 = x.page(0).module();
  d.cone = cone(x0, r);
  d.q = BigradedMap(d.nerve_page.module(), d.cone.module(), diff_degree(r));
  d.rho = BigradedMap(d.nerve_page.module(), x.page(r).module(), {0, 0});
  for (auto& [b, c] : n.pages[r]) {
    const Bidegree t = b + diff_degree(r);
    const std::size_t first = x0.dim(t);
    Matrix e(f, d.cone.dim(t), c.ambient());
    e.set_block(0, c.y_offset(0), -Matrix::identity(f, c.y_dims[0]));
    e.set_block(first, c.x_offset(0), Matrix::identity(f, c.x_dims[0]));
    d.q.set_block(b, e * c.pairs.basis());
    d.rho.set_block(b, c.pairs.basis().block(c.x_offset(r), 0, c.x_dims[r], c.pairs.dim()));
  }
  d.coker = quotient(d.cone, image(d.q));
  d.coimage = quotient(d.nerve_page, kernel(d.q));
  return d;
}

ConnectingMap connecting_map(const QrData& d, Rng* perturb) {
  const Field& f = d.cone.field();
  const Bidegree dd = diff_degree(d.r);
  Homology hc = homology(d.coker.complex), hm = homology(d.coimage.complex);
  ConnectingMap out;
  out.matrix = BigradedMap(hc.module, hm.module, {0, 0});
  for (auto& [b, h] : hc.module.dims()) {
    const std::size_t dim_c = d.coker.complex.dim(b);
    // cycle representatives in Cone/Im q, then in Cone
    Matrix rep = hc.lift(b, dim_c);
    if (perturb) rep = rep + d.coker.complex.d().block(b - dd) * random_matrix(f, d.coker.complex.dim(b - dd), h, *perturb);
    Matrix lifted = d.coker.section.block(b) * rep;
    if (perturb) lifted = lifted + d.q.block(b - dd) * random_matrix(f, d.nerve_page.dim(b - dd), h, *perturb);
    // its boundary lies in Im q; pull back along q
    Matrix z = d.cone.d().block(b) * lifted;
    Matrix qb = d.q.block(b);
    auto k = qb.solve(z);
    if (!k) throw Error("boundary of a cycle lift is not in Im q at " + b.str());
    Matrix pre = *k;
    if (perturb) {
      Matrix ker = qb.kernel();
      if (ker.cols() > 0) pre = pre + ker * random_matrix(f, ker.cols(), h, *perturb);
    }
    Matrix cls = hm.proj(b, d.coimage.complex.dim(b)) * (d.coimage.proj.block(b) * pre);
    out.matrix.set_block(b, cls);
  }
  out.invertible = out.matrix.is_iso();
  return out;
}

ExtSpecSeq shift_r(const ExtSpecSeq& x, int r) {
  if (r == 0) return x;
  const int R = x.horizon();
  const BigradedModule bottom = x.page(0).module().translated(r);
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int i = 0; i <= R + r; ++i) {
    pages.push_back(i < r ? RComplex(i, bottom) : translate(x.page(i - r), r));
    if (i == 0) continue;
    if (i <= r) phi.push_back(phi_from(pages[i - 1], BigradedMap::identity(bottom)));
    else phi.push_back(x.phi(i - r).translated(r));
  }
  return ExtSpecSeq(pages, phi, x.tail());
}

ExtSpecSeq dec_r(const ExtSpecSeq& x0, int r) {
  if (r == 0) return x0;
  ExtSpecSeq x = prepared(x0, r);
  QrData d = qr_data(x, r);
  const int R = x.horizon();
  std::vector<RComplex> pages{translate(d.nerve_page, -r)};
  std::vector<BigradedMap> phi;
  for (int j = 1; j <= R - r; ++j) {
    pages.push_back(translate(x.page(j + r), -r));
    if (j == 1) {
      BigradedMap hrho = homology_map(d.rho, homology(d.nerve_page), homology(x.page(r)));
      phi.push_back(compose(invert(hrho), x.phi(r + 1)).translated(-r));
    } else {
      phi.push_back(x.phi(j + r).translated(-r));
    }
  }
  return ExtSpecSeq(pages, phi, x.tail());
}

ExtSpecSeq ldec_r(const ExtSpecSeq& x0, int r) {
  if (r == 0) return x0;
  ExtSpecSeq x = prepared(x0, r);
  QrData d = qr_data(x, r);
  const int R = x.horizon();
  std::vector<RComplex> pages{translate(d.coker.complex, -r)};
  std::vector<BigradedMap> phi;
  for (int j = 1; j <= R - r; ++j) {
    pages.push_back(translate(x.page(j + r), -r));
    if (j == 1) {
      Homology hk = homology(d.nerve_page);
      BigradedMap hrho = homology_map(d.rho, hk, homology(x.page(r)));
      BigradedMap hproj = homology_map(d.coimage.proj, hk, homology(d.coimage.complex));
      ConnectingMap del = connecting_map(d);
      BigradedMap c = compose(invert(del.matrix), compose(hproj, compose(invert(hrho), x.phi(r + 1))));
      phi.push_back(c.translated(-r));
    } else {
      phi.push_back(x.phi(j + r).translated(-r));
    }
  }
  return ExtSpecSeq(pages, phi, x.tail());
}

ESSMap shift_r(const ESSMap& f, int r) {
  if (r == 0) return f;
  ExtSpecSeq s = shift_r(f.source(), r), t = shift_r(f.target(), r);
  std::vector<BigradedMap> comps;
  for (int i = 0; i <= common_extent(s, t); ++i) comps.push_back(f.component(std::max(0, i - r)).translated(r));
  return ESSMap(s, t, comps);
}

ESSMap dec_r(const ESSMap& f, int r) {
  if (r == 0) return f;
  ExtSpecSeq s = dec_r(f.source(), r), t = dec_r(f.target(), r);
  WBMap nf = nerve_map(f, r);
  std::vector<BigradedMap> comps{nf.component(r).translated(-r)};
  for (int j = 1; j <= common_extent(s, t); ++j) comps.push_back(f.component(j + r).translated(-r));
  return ESSMap(s, t, comps);
}

ESSMap ldec_r(const ESSMap& f, int r) {
  if (r == 0) return f;
  ExtSpecSeq s = ldec_r(f.source(), r), t = ldec_r(f.target(), r);
  QrData a = qr_data(f.source(), r), b = qr_data(f.target(), r);
  BigradedMap c = cone_map(f.component(0), a.cone, b.cone, r);
  std::vector<BigradedMap> comps{compose(b.coker.proj, compose(c, a.coker.section)).translated(-r)};
  for (int j = 1; j <= common_extent(s, t); ++j) comps.push_back(f.component(j + r).translated(-r));
  return ESSMap(s, t, comps);
}

ESSMap shift_dec_unit(const ExtSpecSeq& x, int r) {
  if (r == 0) return ESSMap::identity(x);
  ExtSpecSeq s = shift_r(x, r);
  ExtSpecSeq d = dec_r(s, r);
  QrData q = qr_data(s, r);
  std::vector<BigradedMap> comps{invert(q.rho).translated(-r)};
  for (int j = 1; j <= common_extent(x, d); ++j) comps.push_back(BigradedMap::identity(x.page(j).module()));
  return ESSMap(x, d, comps);
}

ESSMap shift_dec_counit(const ExtSpecSeq& y, int r) {
  if (r == 0) return ESSMap::identity(y);
  ExtSpecSeq d = dec_r(y, r);
  ExtSpecSeq s = shift_r(d, r);
  NervePresentation n = nerve_presentation(y, r);
  const BigradedModule k = n.book.page(r).module();
  std::vector<BigradedMap> comps;
  const int last = common_extent(s, y);
  for (int i = 0; i <= last; ++i) {
    if (i > r) {
      comps.push_back(BigradedMap::identity(y.page(i).module()));
      continue;
    }
    // (x; y) -> x_i
    BigradedMap m(k, y.page(i).module(), {0, 0});
    for (auto& [b, c] : n.pages[r]) m.set_block(b, c.pairs.basis().block(c.x_offset(i), 0, c.x_dims[i], c.pairs.dim()));
    comps.push_back(m);
  }
  return ESSMap(s, y, comps);
}

ESSMap ldec_shift_unit(const ExtSpecSeq& x, int r) {
  if (r == 0) return ESSMap::identity(x);
  ExtSpecSeq l = ldec_r(x, r);
  ExtSpecSeq s = shift_r(l, r);
  QrData q = qr_data(prepared(x, r), r);
  const BigradedModule x0 = x.page(0).module();
  // x_i -> x_0 of some compatible sequence (x_0, ..., x_i), then to (x_0, 0)
  BigradedMap down = BigradedMap::identity(x0);
  BigradedMap into = compose(q.coker.proj, cone_first(x0, q.cone));
  std::vector<BigradedMap> comps;
  const int last = common_extent(x, s);
  for (int i = 0; i <= last; ++i) {
    if (i > r) {
      comps.push_back(BigradedMap::identity(x.page(i).module()));
      continue;
    }
    if (i > 0) {
      RComplex prev = x.page(i - 1);
      Homology h = homology(prev);
      down = compose(down, compose(homology_lift(prev, h), x.phi(i)));
    }
    comps.push_back(compose(into, down));
  }
  return ESSMap(x, s, comps);
}

ESSMap ldec_shift_counit(const ExtSpecSeq& y, int r) {
  if (r == 0) return ESSMap::identity(y);
  ExtSpecSeq s = shift_r(y, r);
  ExtSpecSeq l = ldec_r(s, r);
  QrData q = qr_data(prepared(s, r), r);
  // (a, b) -> a + d b on Cone_r(S_r), S_r = T^r Y_0
  BigradedMap pi = cone_projection(s.page(r));
  std::vector<BigradedMap> comps{compose(pi, q.coker.section).translated(-r)};
  for (int j = 1; j <= common_extent(l, y); ++j)
    comps.push_back(BigradedMap::identity(y.page(j).module()));
  return ESSMap(l, y, comps);
}

ExtSpecSeq dec_r_presheaf(const ExtSpecSeq& x0, int r) {
  ExtSpecSeq x = prepared(x0, r);
  TruncatedBook tb = trunc_U(nerve(x), r, x.horizon());
  return realize(as_book(translate(tb, -r)));
}

ExtSpecSeq ldec_r_presheaf(const ExtSpecSeq& x0, int r) {
  ExtSpecSeq x = prepared(x0, r);
  TruncatedBook tb = w_shriek(nerve(x), r, x.horizon());
  return realize(as_book(translate(tb, -r)));
}

std::string pairing_name(Pairing p) { return p == Pairing::LDecShift ? "ldec-shift" : "shift-dec"; }

AdjunctionReport adjunction_witness(Pairing p, const ExtSpecSeq& x, const ExtSpecSeq& y, int r) {
  AdjunctionReport rep;
  std::vector<ESSMap> transposes;
  ExtSpecSeq gy(x.field());
  if (p == Pairing::ShiftDec) {
    ExtSpecSeq fx = shift_r(x, r);
    gy = dec_r(y, r);
    rep.left = hom_dim(fx, y);
    rep.right = hom_dim(x, gy);
    ESSMap eta = shift_dec_unit(x, r);
    for (auto& g : hom_basis(fx, y)) transposes.push_back(compose(dec_r(g, r), eta));
  } else {
    ExtSpecSeq fx = ldec_r(x, r);
    gy = shift_r(y, r);
    rep.left = hom_dim(fx, y);
    rep.right = hom_dim(x, gy);
    ESSMap eta = ldec_shift_unit(x, r);
    for (auto& g : hom_basis(fx, y)) transposes.push_back(compose(shift_r(g, r), eta));
  }
  const int last = common_extent(x, gy);
  Matrix cols(x.field(), 0, 0);
  bool valid = true;
  for (auto& t : transposes) {
    valid = valid && t.validate().empty();
    Matrix v = flatten(t, last);
    cols = cols.cols() == 0 ? v : cols.hstack(v);
  }
  const std::size_t rank = transposes.empty() ? 0 : cols.rank();
  rep.bijection = valid && rank == rep.left && rep.left == rep.right;
  return rep;
}

DwyerKanReport dwyer_kan_check(int r, std::size_t samples, std::uint64_t seed) {
  const Field f = Field::default_field();
  Rng rng(seed);
  DwyerKanReport rep;
  rep.r = r;
  EssShape shape;
  shape.horizon = r + 2;
  shape.complex.window = 1;
  shape.complex.max_pieces = 3;
  for (std::size_t s = 0; s < samples; ++s) {
    ExtSpecSeq y = random_ess(f, rng, shape);
    ++rep.samples;
    if (weq_strict(shift_dec_counit(y, r), r)) ++rep.counit_in_eprime;
    ExtSpecSeq x = random_spectral(f, rng, shape);
    ++rep.spectral_samples;
    if (weq_strict(ldec_shift_unit(x, r), r)) ++rep.ldec_unit_ok;

    if (rep.ldec_counterexample) continue;
    // f : X -> Y in E'_1 that only changes page 0: X_0 = Y_0 + A, phi_1 = (phi_1^Y, psi)
    RComplex a = random_complex(f, 0, rng, shape.complex);
    RComplex y0 = y.page(0);
    RComplex x0 = direct_sum(y0, a);
    DirectSum ds = direct_sum(std::vector<BigradedModule>{y0.module(), a.module()});
    Homology ha = homology(a), hy = homology(y0);
    BigradedMap psi = random_map(y.page(1).module(), ha.module, {0, 0}, rng);
    BigradedMap rep1 = compose(ds.inclusions[0], compose(homology_lift(y0, hy), y.phi(1))) +
                       compose(ds.inclusions[1], compose(homology_lift(a, ha), psi));
    std::vector<RComplex> pages{x0};
    std::vector<BigradedMap> phi{compose(homology_proj(x0, homology(x0)), rep1)};
    for (int i = 1; i <= y.horizon(); ++i) {
      pages.push_back(y.page(i));
      if (i >= 2) phi.push_back(y.phi(i));
    }
    ExtSpecSeq xx(pages, phi, y.tail());
    std::vector<BigradedMap> comps{ds.projections[0]};
    for (int i = 1; i <= y.horizon(); ++i) comps.push_back(BigradedMap::identity(y.page(i).module()));
    ESSMap fm(xx, y, comps);
    if (!fm.validate().empty() || !weq_strict(fm, 1)) continue;
    ESSMap lf = ldec_r(fm, 1);
    if (!weq_strict(lf, 0)) rep.ldec_counterexample = fm;
  }
  return rep;
}

}  // namespace ssq
