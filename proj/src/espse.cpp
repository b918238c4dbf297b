#include "ssq/espse.hpp"

#include <algorithm>

namespace ssq {

std::string tail_name(Tail t) {
  switch (t) {
    case Tail::Zero:
      return "zero";
    case Tail::Stable:
      return "stable";
    default:
      return "unspecified";
  }
}

// ---- objects

ExtSpecSeq::ExtSpecSeq(Field f)
    : d_(std::make_shared<Data>(Data{f, {RComplex::zero(0, f)}, {}, {ssq::homology(RComplex::zero(0, f))}, Tail::Zero})) {}

ExtSpecSeq::ExtSpecSeq(std::vector<RComplex> pages, std::vector<BigradedMap> phi, Tail tail) {
  if (pages.empty()) throw Error("an extended spectral sequence needs page 0");
  if (phi.size() + 1 != pages.size())
    throw DimensionMismatch(std::to_string(pages.size()) + " pages need " + std::to_string(pages.size() - 1) +
                            " characteristic maps");
  for (std::size_t i = 0; i < pages.size(); ++i)
    if (pages[i].r() != static_cast<int>(i))
      throw DimensionMismatch("page " + std::to_string(i) + " is a " + std::to_string(pages[i].r()) + "-complex");
  auto data = std::make_shared<Data>(Data{pages[0].field(), {}, {}, {}, tail});
  for (auto& p : pages) data->homs.push_back(ssq::homology(p));
  data->pages = std::move(pages);
  data->phi = std::move(phi);
  d_ = std::move(data);
}

RComplex ExtSpecSeq::page(int i) const {
  if (i < 0) throw RangeError("negative page index");
  if (i <= horizon()) return d_->pages[i];
  switch (d_->tail) {
    case Tail::Zero:
      return RComplex::zero(i, field());
    case Tail::Stable:
      return RComplex(i, d_->pages.back().module());
    default:
      throw HorizonError("page " + std::to_string(i) + " lies past horizon " + std::to_string(horizon()) +
                         " of an object with unspecified tail");
  }
}

Homology ExtSpecSeq::homology(int i) const {
  if (i >= 0 && i <= horizon()) return d_->homs[i];
  return ssq::homology(page(i));
}

BigradedMap ExtSpecSeq::phi(int i) const {
  if (i < 1) throw RangeError("phi_i needs i >= 1");
  if (i <= horizon()) return d_->phi[i - 1];
  RComplex p = page(i);
  Homology h = homology(i - 1);
  if (d_->tail == Tail::Zero) return BigradedMap::zero(p.module(), h.module);
  if (h.module != p.module()) throw Error("stable tail over a last page with nonzero differential");
  return BigradedMap::identity(p.module());
}

ExtSpecSeq ExtSpecSeq::extended(int h) const {
  if (h <= horizon()) return *this;
  std::vector<RComplex> pages = d_->pages;
  std::vector<BigradedMap> phis = d_->phi;
  for (int i = horizon() + 1; i <= h; ++i) {
    pages.push_back(page(i));
    phis.push_back(phi(i));
  }
  return ExtSpecSeq(std::move(pages), std::move(phis), d_->tail);
}

ExtSpecSeq ExtSpecSeq::truncated(int h) const {
  if (h >= horizon()) return *this;
  if (h < 0) throw RangeError("negative horizon");
  std::vector<RComplex> pages(d_->pages.begin(), d_->pages.begin() + h + 1);
  std::vector<BigradedMap> phis(d_->phi.begin(), d_->phi.begin() + h);
  return ExtSpecSeq(std::move(pages), std::move(phis), Tail::Unspecified);
}

std::vector<std::string> ExtSpecSeq::validate() const {
  std::vector<std::string> out;
  for (int i = 0; i <= horizon(); ++i) {
    const RComplex& p = d_->pages[i];
    if (!compose(p.d(), p.d()).is_zero()) out.push_back("page " + std::to_string(i) + ": d o d != 0");
    if (p.field() != field()) out.push_back("page " + std::to_string(i) + ": field mismatch");
  }
  for (int i = 1; i <= horizon(); ++i) {
    const BigradedMap& f = d_->phi[i - 1];
    if (f.source() != d_->pages[i].module())
      out.push_back("phi_" + std::to_string(i) + ": source is not page " + std::to_string(i));
    if (f.target() != d_->homs[i - 1].module)
      out.push_back("phi_" + std::to_string(i) + ": target is not H(page " + std::to_string(i - 1) + ")");
    if (f.shift() != Bidegree{0, 0}) out.push_back("phi_" + std::to_string(i) + ": nonzero bidegree");
  }
  if (d_->tail == Tail::Stable && !d_->pages.back().d().is_zero())
    out.push_back("stable tail needs d_" + std::to_string(horizon()) + " = 0");
  return out;
}

bool ExtSpecSeq::is_zero() const {
  for (auto& p : d_->pages)
    if (!p.module().is_zero()) return false;
  return true;
}

bool ExtSpecSeq::operator==(const ExtSpecSeq& o) const {
  if (d_ == o.d_) return true;
  return field() == o.field() && tail() == o.tail() && d_->pages == o.d_->pages && d_->phi == o.d_->phi;
}

bool is_spectral(const ExtSpecSeq& x) {
  for (int i = 1; i <= x.horizon(); ++i)
    if (!x.phi(i).is_iso()) return false;
  if (x.tail() == Tail::Zero) return x.stored_homology(x.horizon()).module.is_zero();
  return true;
}

int common_extent(const ExtSpecSeq& x, const ExtSpecSeq& y) {
  int e = std::max(x.horizon(), y.horizon());
  if (!x.tail_known()) e = std::min(e, x.horizon());
  if (!y.tail_known()) e = std::min(e, y.horizon());
  return e;
}

// ---- maps

ESSMap::ESSMap(ExtSpecSeq source, ExtSpecSeq target, std::vector<BigradedMap> components)
    : src_(std::move(source)), tgt_(std::move(target)), comps_(std::move(components)) {
  int e = common_extent(src_, tgt_);
  if (static_cast<int>(comps_.size()) != e + 1)
    throw DimensionMismatch("map needs components on pages 0.." + std::to_string(e) + ", got " +
                            std::to_string(comps_.size()));
  for (int i = 0; i <= e; ++i) {
    if (comps_[i].source() != src_.page(i).module() || comps_[i].target() != tgt_.page(i).module() ||
        comps_[i].shift() != Bidegree{0, 0})
      throw DimensionMismatch("component " + std::to_string(i) + " does not match the pages");
  }
}

ESSMap ESSMap::identity(const ExtSpecSeq& x) {
  std::vector<BigradedMap> c;
  for (int i = 0; i <= x.horizon(); ++i) c.push_back(BigradedMap::identity(x.page(i).module()));
  return ESSMap(x, x, c);
}

ESSMap ESSMap::zero(const ExtSpecSeq& x, const ExtSpecSeq& y) {
  std::vector<BigradedMap> c;
  for (int i = 0; i <= common_extent(x, y); ++i) c.push_back(BigradedMap::zero(x.page(i).module(), y.page(i).module()));
  return ESSMap(x, y, c);
}

BigradedMap ESSMap::component(int i) const {
  if (i < 0) throw RangeError("negative page index");
  if (i <= extent()) return comps_[i];
  if (!src_.tail_known() || !tgt_.tail_known())
    throw HorizonError("component " + std::to_string(i) + " lies past the known range " + std::to_string(extent()));
  RComplex a = src_.page(i), b = tgt_.page(i);
  if (src_.tail() == Tail::Stable && tgt_.tail() == Tail::Stable) return comps_.back();
  return BigradedMap::zero(a.module(), b.module());
}

std::vector<std::string> ESSMap::validate() const {
  std::vector<std::string> out;
  int last = extent() + (src_.tail_known() && tgt_.tail_known() ? 1 : 0);
  for (int i = 0; i <= extent(); ++i)
    if (!is_chain_map(comps_[i], src_.page(i), tgt_.page(i)))
      out.push_back("component " + std::to_string(i) + " is not a chain map");
  for (int i = 1; i <= last; ++i) {
    BigradedMap hf = homology_map(component(i - 1), src_.homology(i - 1), tgt_.homology(i - 1));
    if (compose(hf, src_.phi(i)) != compose(tgt_.phi(i), component(i)))
      out.push_back("phi_" + std::to_string(i) + " square does not commute");
  }
  return out;
}

bool ESSMap::operator==(const ESSMap& o) const { return src_ == o.src_ && tgt_ == o.tgt_ && comps_ == o.comps_; }

ESSMap ESSMap::operator+(const ESSMap& o) const {
  std::vector<BigradedMap> c;
  for (std::size_t i = 0; i < comps_.size(); ++i) c.push_back(comps_[i] + o.comps_.at(i));
  return ESSMap(src_, tgt_, c);
}

ESSMap ESSMap::scaled(const Scalar& s) const {
  std::vector<BigradedMap> c;
  for (auto& m : comps_) c.push_back(m.scaled(s));
  return ESSMap(src_, tgt_, c);
}

ESSMap compose(const ESSMap& g, const ESSMap& f) {
  const ExtSpecSeq& x = f.source();
  const ExtSpecSeq& z = g.target();
  std::vector<BigradedMap> c;
  for (int i = 0; i <= common_extent(x, z); ++i) c.push_back(compose(g.component(i), f.component(i)));
  return ESSMap(x, z, c);
}

namespace {

int classes_extent(const ESSMap& f) {
  return f.extent() + (f.source().tail_known() && f.target().tail_known() ? 1 : 0);
}

}  // namespace

bool fib(const ESSMap& f, int r) {
  for (int i = 0; i <= r; ++i)
    if (!f.component(i).is_surjective()) return false;
  return true;
}

bool weq(const ESSMap& f, int r) {
  Homology a = f.source().homology(r), b = f.target().homology(r);
  if (a.module != b.module) return false;
  return homology_map(f.component(r), a, b).is_iso();
}

bool weq_strict(const ESSMap& f, int r) {
  if (!f.source().tail_known() || !f.target().tail_known())
    throw TailError("strict weak equivalence needs known tails on both objects");
  if (!weq(f, r)) return false;
  for (int i = r + 1; i <= std::max(classes_extent(f), r + 1); ++i)
    if (!f.component(i).is_iso()) return false;
  return true;
}

bool iso_below(const ESSMap& f, int r) {
  for (int i = 0; i <= r; ++i)
    if (!f.component(i).is_iso()) return false;
  return true;
}

bool is_iso(const ESSMap& f) {
  for (int i = 0; i <= classes_extent(f); ++i)
    if (!f.component(i).is_iso()) return false;
  return true;
}

// ---- standard objects

ExtSpecSeq disc(Field f, int r, Bidegree b, int horizon) {
  const int R = std::max(horizon, r);
  const Bidegree t = b + diff_degree(r);
  BigradedModule m(f, {{b, 1}, {t, 1}});
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int i = 0; i <= R; ++i) {
    if (i < r) pages.emplace_back(i, m);
    else if (i == r) {
      BigradedMap d(m, m, diff_degree(r));
      d.set_block(b, Matrix::identity(f, 1));
      pages.emplace_back(i, m, d);
    } else pages.push_back(RComplex::zero(i, f));
    if (i >= 1) {
      Homology h = homology(pages[i - 1]);
      if (i <= r) phi.push_back(BigradedMap::identity(m));
      else phi.push_back(BigradedMap::zero(pages[i].module(), h.module));
    }
  }
  return ExtSpecSeq(pages, phi, Tail::Zero);
}

ExtSpecSeq unit(Field f, Bidegree b, int horizon) {
  BigradedModule m(f, {{b, 1}});
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int i = 0; i <= horizon; ++i) {
    pages.emplace_back(i, m);
    if (i >= 1) phi.push_back(BigradedMap::identity(m));
  }
  return ExtSpecSeq(pages, phi, Tail::Stable);
}

ExtSpecSeq unit_trunc(Field f, int r, Bidegree b, int horizon) {
  const int R = std::max(horizon, r);
  BigradedModule m(f, {{b, 1}});
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int i = 0; i <= R; ++i) {
    pages.push_back(i <= r ? RComplex(i, m) : RComplex::zero(i, f));
    if (i >= 1)
      phi.push_back(i <= r ? BigradedMap::identity(m)
                           : BigradedMap::zero(pages[i].module(), homology(pages[i - 1]).module));
  }
  return ExtSpecSeq(pages, phi, Tail::Zero);
}

// ---- hom spaces

EssHomSystem::EssHomSystem(const ExtSpecSeq& x, const ExtSpecSeq& y)
    : x_(x), y_(y), ext_(common_extent(x, y)), eq_(x.field()) {
  if (x.field() != y.field()) throw FieldMismatch("hom space between objects over different fields");
  std::vector<RComplex> xp, yp;
  for (int i = 0; i <= ext_; ++i) {
    xp.push_back(x.page(i));
    yp.push_back(y.page(i));
    comps_.push_back(eq_.unknown(xp[i].module(), yp[i].module()));
  }
  for (int i = 0; i <= ext_; ++i) {
    BigradedMap minus_dx = -xp[i].d();
    eq_.add({{&yp[i].d(), &comps_[i], nullptr}, {nullptr, &comps_[i], &minus_dx}}, nullptr, xp[i].module(),
            yp[i].module(), diff_degree(i));
  }
  auto square = [&](int i, bool next_is_zero) {
    Homology hx = x.homology(i - 1), hy = y.homology(i - 1);
    BigradedMap left = homology_proj(yp[i - 1], hy);
    BigradedMap right = compose(homology_lift(xp[i - 1], hx), x.phi(i));
    if (next_is_zero) {
      eq_.add({{&left, &comps_[i - 1], &right}}, nullptr, right.source(), hy.module);
    } else {
      BigradedMap minus_phiy = -y.phi(i);
      eq_.add({{&left, &comps_[i - 1], &right}, {&minus_phiy, &comps_[i], nullptr}}, nullptr, right.source(),
              hy.module);
    }
  };
  for (int i = 1; i <= ext_; ++i) square(i, false);
  // past the stored range a stable source meets a zero target
  if (x.tail() == Tail::Stable && y.tail() == Tail::Zero) square(ext_ + 1, true);
}

ESSMap EssHomSystem::assemble(const LinearSystem::Assignment& a) const {
  std::vector<BigradedMap> c;
  for (auto& u : comps_) c.push_back(MapEquations::assemble(u, a));
  return ESSMap(x_, y_, c);
}

std::vector<ESSMap> hom_basis(const ExtSpecSeq& x, const ExtSpecSeq& y) {
  EssHomSystem h(x, y);
  std::vector<ESSMap> out;
  for (auto& a : h.equations().system().kernel_basis()) out.push_back(h.assemble(a));
  return out;
}

std::size_t hom_dim(const ExtSpecSeq& x, const ExtSpecSeq& y) {
  EssHomSystem h(x, y);
  return h.equations().system().kernel_dim();
}

ESSMap random_hom(const ExtSpecSeq& x, const ExtSpecSeq& y, Rng& rng) {
  EssHomSystem h(x, y);
  return h.assemble(h.equations().system().random_kernel_element(rng));
}


std::optional<ESSMap> iso_check(const ExtSpecSeq& x, const ExtSpecSeq& y, std::uint64_t seed) {
  int ext = common_extent(x, y);
  int last = ext + (x.tail_known() && y.tail_known() ? 1 : 0);
  for (int i = 0; i <= last; ++i)
    if (x.page(i).module() != y.page(i).module()) return std::nullopt;
  EssHomSystem h(x, y);
  std::size_t target = 0;
  for (int i = 0; i <= ext; ++i) target += x.page(i).module().total_dim();
  if (target == 0) return ESSMap::zero(x, y);
  auto basis = h.equations().system().kernel_basis();
  auto a = full_rank_point(basis, target, x.field(), seed);
  if (!a) return std::nullopt;
  ESSMap f = h.assemble(*a);
  if (!is_iso(f)) return std::nullopt;
  return f;
}

// ---- colimits

Colimit colimit(const Diagram& dg) {
  if (dg.objects.empty()) throw DiagramError("colimit of an empty diagram needs a field; use coproduct");
  const Field f = dg.objects[0].field();
  bool all_known = true, any_stable = false, all_zero = true;
  int ext = 0, bound = 1 << 30;
  for (auto& x : dg.objects) {
    if (x.field() != f) throw DiagramError("diagram mixes fields");
    ext = std::max(ext, x.horizon());
    if (!x.tail_known()) {
      all_known = false;
      bound = std::min(bound, x.horizon());
    }
    if (x.tail() == Tail::Stable) any_stable = true;
    if (x.tail() != Tail::Zero) all_zero = false;
  }
  for (auto& a : dg.arrows) {
    if (a.from >= dg.objects.size() || a.to >= dg.objects.size()) throw DiagramError("arrow index out of range");
    if (a.map.source() != dg.objects[a.from] || a.map.target() != dg.objects[a.to])
      throw DiagramError("arrow endpoints do not match the diagram objects");
  }
  Tail tail = Tail::Unspecified;
  if (all_known) {
    if (any_stable) {
      ++ext;
      tail = Tail::Stable;
    } else if (all_zero) tail = Tail::Zero;
  } else ext = std::min(ext, bound);

  const std::size_t k = dg.objects.size();
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phis;
  std::vector<std::vector<BigradedMap>> legs(k);
  std::vector<Homology> homs;
  for (int i = 0; i <= ext; ++i) {
    std::vector<RComplex> parts;
    std::vector<BigradedModule> mods;
    for (auto& x : dg.objects) {
      parts.push_back(x.page(i));
      mods.push_back(parts.back().module());
    }
    DirectSum s = direct_sum(mods);
    BigradedMap d = BigradedMap::zero(s.module, s.module, diff_degree(i));
    for (std::size_t j = 0; j < k; ++j) d = d + compose(compose(s.inclusions[j], parts[j].d()), s.projections[j]);
    RComplex total(i, s.module, d);
    BigradedSubspace rel;
    for (auto& [b, dim] : s.module.dims()) rel[b] = Subspace::zero(f, dim);
    for (auto& a : dg.arrows) {
      BigradedMap g = compose(s.inclusions[a.to], a.map.component(i)) - s.inclusions[a.from];
      for (auto& [b, sub] : image(g)) rel[b] = rel[b].sum(sub);
    }
    QuotientComplex q = quotient(total, rel);
    pages.push_back(q.complex);
    homs.push_back(homology(q.complex));
    for (std::size_t j = 0; j < k; ++j) legs[j].push_back(compose(q.proj, s.inclusions[j]));
    if (i >= 1) {
      BigradedMap psi = BigradedMap::zero(s.module, homs[i - 1].module);
      for (std::size_t j = 0; j < k; ++j) {
        const ExtSpecSeq& x = dg.objects[j];
        BigradedMap h_leg = homology_map(legs[j][i - 1], x.homology(i - 1), homs[i - 1]);
        psi = psi + compose(compose(h_leg, x.phi(i)), s.projections[j]);
      }
      phis.push_back(compose(psi, q.section));
    }
  }
  ExtSpecSeq obj(pages, phis, tail);
  Colimit out{obj, {}};
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<BigradedMap> c;
    for (int i = 0; i <= common_extent(dg.objects[j], obj); ++i)
      c.push_back(i < static_cast<int>(legs[j].size()) ? legs[j][i]
                                                       : BigradedMap::zero(dg.objects[j].page(i).module(),
                                                                           obj.page(i).module()));
    out.cocone.emplace_back(dg.objects[j], obj, c);
  }
  return out;
}

Colimit coproduct(const std::vector<ExtSpecSeq>& xs, Field f) {
  if (xs.empty()) return {ExtSpecSeq(f), {}};
  return colimit(Diagram{xs, {}});
}

Colimit pushout(const ESSMap& f, const ESSMap& g) {
  if (f.source() != g.source()) throw DiagramError("pushout legs need a common source");
  Colimit c = colimit(Diagram{{f.source(), f.target(), g.target()}, {{0, 1, f}, {0, 2, g}}});
  return {c.object, {c.cocone[1], c.cocone[2]}};
}

ExtSpecSeq tensor(const ExtSpecSeq& x, std::size_t k) {
  return coproduct(std::vector<ExtSpecSeq>(k, x), x.field()).object;
}

// ---- generators

ExtSpecSeq random_ess(Field f, Rng& rng, EssShape shape) {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  for (int i = 0; i <= shape.horizon; ++i) {
    pages.push_back(random_complex(f, i, rng, shape.complex));
    if (i >= 1) phi.push_back(random_map(pages[i].module(), homology(pages[i - 1]).module, {0, 0}, rng));
  }
  return ExtSpecSeq(pages, phi, Tail::Zero);
}

ExtSpecSeq random_spectral(Field f, Rng& rng, EssShape shape) {
  std::vector<RComplex> pages;
  std::vector<BigradedMap> phi;
  pages.push_back(random_complex(f, 0, rng, shape.complex));
  for (int i = 1; i <= shape.horizon; ++i) {
    BigradedModule h = homology(pages[i - 1]).module;
    pages.push_back(i < shape.horizon ? random_differential(h, i, rng) : RComplex(i, h));
    phi.push_back(BigradedMap::build(h, h, {0, 0}, [&](Bidegree b) { return random_invertible(f, h.dim(b), rng); }));
  }
  return ExtSpecSeq(pages, phi, Tail::Stable);
}

}  // namespace ssq
