#include "ssq/bigraded.hpp"

#include <initializer_list>

namespace ssq {

Bidegree translate(Bidegree b, int k) {
  for (; k > 0; --k) b = {2 * b.p - b.n, b.p};
  for (; k < 0; ++k) b = {b.n, 2 * b.n - b.p};
  return b;
}

// ---- modules

BigradedModule::BigradedModule(Field f, std::map<Bidegree, std::size_t> dims) : f_(f) {
  for (auto& [b, d] : dims) set_dim(b, d);
}

std::size_t BigradedModule::dim(Bidegree b) const {
  auto it = dims_.find(b);
  return it == dims_.end() ? 0 : it->second;
}

void BigradedModule::set_dim(Bidegree b, std::size_t d) {
  if (d == 0) dims_.erase(b);
  else dims_[b] = d;
}

std::vector<Bidegree> BigradedModule::support() const {
  std::vector<Bidegree> s;
  for (auto& [b, d] : dims_) s.push_back(b);
  return s;
}

std::size_t BigradedModule::total_dim() const {
  std::size_t t = 0;
  for (auto& [b, d] : dims_) t += d;
  return t;
}

BigradedModule BigradedModule::shifted(Bidegree delta) const {
  BigradedModule m(f_);
  for (auto& [b, d] : dims_) m.set_dim(b - delta, d);
  return m;
}

BigradedModule BigradedModule::translated(int k) const {
  BigradedModule m(f_);
  for (auto& [b, d] : dims_) m.set_dim(translate(b, k), d);
  return m;
}

BigradedModule direct_sum(const BigradedModule& a, const BigradedModule& b) {
  if (a.field() != b.field()) throw FieldMismatch("direct sum over different fields");
  BigradedModule m = a;
  for (auto& [deg, d] : b.dims()) m.set_dim(deg, m.dim(deg) + d);
  return m;
}

DirectSum direct_sum(const std::vector<BigradedModule>& parts) {
  if (parts.empty()) throw Error("direct sum of no modules needs a field");
  DirectSum out{BigradedModule(parts[0].field()), {}, {}};
  for (auto& p : parts) out.module = direct_sum(out.module, p);
  std::map<Bidegree, std::size_t> offset;
  for (auto& p : parts) {
    BigradedMap inc(p, out.module, {0, 0}), pr(out.module, p, {0, 0});
    for (auto& [b, d] : p.dims()) {
      std::size_t off = offset[b];
      Matrix i(p.field(), out.module.dim(b), d);
      i.set_block(off, 0, Matrix::identity(p.field(), d));
      inc.set_block(b, i);
      pr.set_block(b, i.transpose());
      offset[b] = off + d;
    }
    out.inclusions.push_back(inc);
    out.projections.push_back(pr);
  }
  return out;
}

// ---- maps

BigradedMap::BigradedMap(BigradedModule source, BigradedModule target, Bidegree shift)
    : src_(std::move(source)), tgt_(std::move(target)), shift_(shift) {
  if (src_.field() != tgt_.field()) throw FieldMismatch("map between modules over different fields");
}

BigradedMap BigradedMap::zero(const BigradedModule& s, const BigradedModule& t, Bidegree shift) {
  return BigradedMap(s, t, shift);
}

BigradedMap BigradedMap::identity(const BigradedModule& m) {
  BigradedMap f(m, m, {0, 0});
  for (auto& [b, d] : m.dims()) f.set_block(b, Matrix::identity(m.field(), d));
  return f;
}

BigradedMap BigradedMap::build(const BigradedModule& s, const BigradedModule& t, Bidegree shift,
                               const std::function<Matrix(Bidegree)>& fn) {
  BigradedMap f(s, t, shift);
  for (auto& [b, d] : s.dims())
    if (t.dim(b + shift) > 0) f.set_block(b, fn(b));
  return f;
}

Matrix BigradedMap::block(Bidegree b) const {
  auto it = blocks_.find(b);
  if (it != blocks_.end()) return it->second;
  return Matrix(field(), tgt_.dim(b + shift_), src_.dim(b));
}

void BigradedMap::set_block(Bidegree b, const Matrix& m) {
  if (m.rows() != tgt_.dim(b + shift_) || m.cols() != src_.dim(b))
    throw DimensionMismatch("block at " + b.str() + " has shape " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " + std::to_string(tgt_.dim(b + shift_)) +
                            "x" + std::to_string(src_.dim(b)));
  if (m.field() != field()) throw FieldMismatch("block over " + m.field().name());
  if (m.is_zero()) blocks_.erase(b);
  else blocks_[b] = m;
}

BigradedMap BigradedMap::operator+(const BigradedMap& o) const {
  if (src_ != o.src_ || tgt_ != o.tgt_ || shift_ != o.shift_) throw DimensionMismatch("adding unlike maps");
  BigradedMap r = *this;
  for (auto& [b, m] : o.blocks_) r.set_block(b, r.block(b) + m);
  return r;
}

BigradedMap BigradedMap::operator-() const {
  BigradedMap r = *this;
  for (auto& [b, m] : r.blocks_) m = -m;
  return r;
}

BigradedMap BigradedMap::operator-(const BigradedMap& o) const { return *this + (-o); }

BigradedMap BigradedMap::scaled(const Scalar& c) const {
  BigradedMap r(src_, tgt_, shift_);
  for (auto& [b, m] : blocks_) r.set_block(b, m.scaled(c));
  return r;
}

bool BigradedMap::operator==(const BigradedMap& o) const {
  return src_ == o.src_ && tgt_ == o.tgt_ && shift_ == o.shift_ && blocks_ == o.blocks_;
}

BigradedMap BigradedMap::translated(int k) const {
  BigradedMap r(src_.translated(k), tgt_.translated(k), translate(shift_, k));
  for (auto& [b, m] : blocks_) r.set_block(translate(b, k), m);
  return r;
}

BigradedMap BigradedMap::reindexed(const BigradedModule& s, const BigradedModule& t, Bidegree source_offset,
                                   Bidegree new_shift) const {
  BigradedMap r(s, t, new_shift);
  for (auto& [b, m] : blocks_) r.set_block(b + source_offset, m);
  return r;
}

bool BigradedMap::is_injective() const {
  for (auto& [b, d] : src_.dims())
    if (block(b).rank() != d) return false;
  return true;
}

bool BigradedMap::is_surjective() const {
  for (auto& [b, d] : tgt_.dims())
    if (block(b - shift_).rank() != d) return false;
  return true;
}

bool BigradedMap::is_iso() const {
  if (shift_ != Bidegree{0, 0} || src_ != tgt_) return false;
  return is_injective();
}

BigradedMap compose(const BigradedMap& g, const BigradedMap& f) {
  if (f.target() != g.source()) throw DimensionMismatch("composing maps with mismatched modules");
  BigradedMap r(f.source(), g.target(), f.shift() + g.shift());
  for (auto& [b, m] : f.blocks()) {
    Bidegree mid = b + f.shift();
    auto it = g.blocks().find(mid);
    if (it != g.blocks().end()) r.set_block(b, it->second * m);
  }
  return r;
}

// ---- complexes

RComplex::RComplex(int r, BigradedModule module)
    : r_(r), mod_(module), d_(BigradedMap::zero(module, module, diff_degree(r))) {}

RComplex::RComplex(int r, BigradedModule module, BigradedMap d) : r_(r), mod_(std::move(module)), d_(std::move(d)) {
  if (d_.source() != mod_ || d_.target() != mod_ || d_.shift() != diff_degree(r_))
    throw DimensionMismatch("differential of a " + std::to_string(r) + "-complex must have bidegree " +
                            diff_degree(r).str());
}

RComplex RComplex::zero(int r, Field f) { return RComplex(r, BigradedModule(f)); }

void RComplex::validate() const {
  if (!compose(d_, d_).is_zero()) throw InvalidComplex("d o d != 0 in a " + std::to_string(r_) + "-complex");
}

const HomologyBlock* Homology::at(Bidegree b) const {
  auto it = blocks.find(b);
  return it == blocks.end() ? nullptr : &it->second;
}

Matrix Homology::proj(Bidegree b, std::size_t ambient) const {
  auto* h = at(b);
  if (h) return h->proj;
  return Matrix(module.field(), 0, ambient);
}

Matrix Homology::lift(Bidegree b, std::size_t ambient) const {
  auto* h = at(b);
  if (h) return h->lift;
  return Matrix(module.field(), ambient, 0);
}

Subspace Homology::cycles(Bidegree b, std::size_t ambient, Field f) const {
  auto* h = at(b);
  return h ? h->cycles : Subspace::zero(f, ambient);
}

Subspace Homology::boundaries(Bidegree b, std::size_t ambient, Field f) const {
  auto* h = at(b);
  return h ? h->boundaries : Subspace::zero(f, ambient);
}

Homology homology(const RComplex& c) {
  Homology h{BigradedModule(c.field()), {}};
  const Bidegree s = c.d().shift();
  for (auto& [b, n] : c.module().dims()) {
    HomologyBlock hb;
    hb.cycles = kernel_space(c.d().block(b));
    hb.boundaries = image(c.d().block(b - s));
    Quotient q = quotient_with_section(Subspace::span(hb.cycles.coords(hb.boundaries.basis())));
    hb.proj = q.proj * hb.cycles.coord_map();
    hb.lift = hb.cycles.basis() * q.section;
    h.module.set_dim(b, hb.proj.rows());
    h.blocks.emplace(b, std::move(hb));
  }
  return h;
}

RComplex homology_complex(const RComplex& c, int r_next) { return RComplex(r_next, homology(c).module); }

BigradedMap homology_proj(const RComplex& c, const Homology& h) {
  return BigradedMap::build(c.module(), h.module, {0, 0}, [&](Bidegree b) { return h.proj(b, c.dim(b)); });
}

BigradedMap homology_lift(const RComplex& c, const Homology& h) {
  return BigradedMap::build(h.module, c.module(), {0, 0}, [&](Bidegree b) { return h.lift(b, c.dim(b)); });
}

BigradedMap homology_map(const BigradedMap& f, const Homology& ha, const Homology& hb) {
  return BigradedMap::build(ha.module, hb.module, f.shift(), [&](Bidegree b) {
    return hb.proj(b + f.shift(), f.target().dim(b + f.shift())) * f.block(b) * ha.lift(b, f.source().dim(b));
  });
}

bool is_chain_map(const BigradedMap& f, const RComplex& a, const RComplex& b) {
  return compose(b.d(), f) == compose(f, a.d());
}

bool is_quasi_iso(const BigradedMap& f, const RComplex& a, const RComplex& b) {
  if (!is_chain_map(f, a, b)) throw NotChainMap("is_quasi_iso: map does not commute with d");
  Homology ha = homology(a), hb = homology(b);
  if (ha.module != hb.module) return false;
  return homology_map(f, ha, hb).is_iso();
}

RComplex translate(const RComplex& c, int k) {
  return RComplex(c.r() + k, c.module().translated(k), c.d().translated(k));
}

RComplex translate_inv(const RComplex& c) {
  if (c.r() == 0) throw RangeError("T^{-1} is undefined on a 0-complex");
  return translate(c, -1);
}

RComplex direct_sum(const RComplex& a, const RComplex& b) {
  if (a.r() != b.r()) throw DimensionMismatch("direct sum of complexes on different pages");
  DirectSum s = direct_sum(std::vector<BigradedModule>{a.module(), b.module()});
  BigradedMap d = compose(compose(s.inclusions[0], a.d()), s.projections[0]) +
                  compose(compose(s.inclusions[1], b.d()), s.projections[1]);
  return RComplex(a.r(), s.module, d);
}

RComplex cone(const BigradedModule& a, int r) {
  const Bidegree up{r, r - 1};
  BigradedModule m = direct_sum(a, a.shifted(up));
  BigradedMap d = BigradedMap::build(m, m, diff_degree(r), [&](Bidegree b) {
    Bidegree t = b + diff_degree(r);
    std::size_t x = a.dim(b), y = a.dim(b + up);
    Matrix blk(a.field(), m.dim(t), x + y);
    // second summand of the target is a^{t+up} = a^b
    blk.set_block(a.dim(t), 0, Matrix::identity(a.field(), x));
    return blk;
  });
  return RComplex(r, m, d);
}

BigradedMap cone_projection(const RComplex& a) {
  const int r = a.r();
  const Bidegree up{r, r - 1};
  RComplex c = cone(a.module(), r);
  return BigradedMap::build(c.module(), a.module(), {0, 0}, [&](Bidegree b) {
    std::size_t x = a.dim(b);
    return Matrix::identity(a.field(), x).hstack(a.d().block(b + up));
  });
}

RComplex suspension(const RComplex& a) {
  const int r = a.r();
  const Bidegree up{r, r - 1};
  BigradedModule m = a.module().shifted(up);
  BigradedMap d = BigradedMap::build(m, m, diff_degree(r), [&](Bidegree b) { return -a.d().block(b + up); });
  return RComplex(r, m, d);
}

Subspace component(const BigradedSubspace& s, Bidegree b, std::size_t ambient, Field f) {
  auto it = s.find(b);
  if (it == s.end()) return Subspace::zero(f, ambient);
  if (it->second.ambient() != ambient) throw DimensionMismatch("subspace at " + b.str() + " has wrong ambient");
  return it->second;
}

BigradedMap quotient_map(const BigradedModule& m, const BigradedSubspace& sub, BigradedModule* out,
                         BigradedMap* section) {
  BigradedModule q(m.field());
  std::map<Bidegree, Quotient> qs;
  for (auto& [b, d] : m.dims()) {
    qs.emplace(b, quotient_with_section(component(sub, b, d, m.field())));
    q.set_dim(b, qs.at(b).proj.rows());
  }
  BigradedMap proj(m, q, {0, 0}), sec(q, m, {0, 0});
  for (auto& [b, qq] : qs) {
    if (q.dim(b) == 0) continue;
    proj.set_block(b, qq.proj);
    sec.set_block(b, qq.section);
  }
  if (out) *out = q;
  if (section) *section = sec;
  return proj;
}

QuotientComplex quotient(const RComplex& c, const BigradedSubspace& sub) {
  BigradedModule q(c.field());
  BigradedMap sec;
  BigradedMap proj = quotient_map(c.module(), sub, &q, &sec);
  BigradedMap d = compose(compose(proj, c.d()), sec);
  return {RComplex(c.r(), q, d), proj, sec};
}

SubComplex subcomplex(const RComplex& c, const BigradedSubspace& sub) {
  BigradedModule m(c.field());
  for (auto& [b, d] : c.module().dims()) m.set_dim(b, component(sub, b, d, c.field()).dim());
  BigradedMap inc = BigradedMap::build(m, c.module(), {0, 0}, [&](Bidegree b) { return sub.at(b).basis(); });
  BigradedMap d = BigradedMap::build(m, m, c.d().shift(), [&](Bidegree b) {
    Bidegree t = b + c.d().shift();
    return sub.at(t).coords(c.d().block(b) * sub.at(b).basis());
  });
  return {RComplex(c.r(), m, d), inc};
}

BigradedSubspace image(const BigradedMap& f) {
  BigradedSubspace s;
  for (auto& [b, d] : f.target().dims()) s[b] = Subspace::span(f.block(b - f.shift()));
  return s;
}

BigradedSubspace kernel(const BigradedMap& f) {
  BigradedSubspace s;
  for (auto& [b, d] : f.source().dims()) s[b] = kernel_space(f.block(b));
  return s;
}

namespace {

void check_pages(std::initializer_list<const RComplex*> cs) {
  int r = (*cs.begin())->r();
  for (auto* c : cs)
    if (c->r() != r) throw PageMismatch("complexes on pages " + std::to_string(r) + " and " + std::to_string(c->r()));
}

}  // namespace

Pushout pushout(const BigradedMap& f, const BigradedMap& g, const RComplex& a, const RComplex& b,
                const RComplex& c) {
  check_pages({&a, &b, &c});
  RComplex bc = direct_sum(b, c);
  DirectSum s = direct_sum(std::vector<BigradedModule>{b.module(), c.module()});
  BigradedMap rel = compose(s.inclusions[0], f) - compose(s.inclusions[1], g);
  QuotientComplex q = quotient(bc, image(rel));
  return {q.complex, compose(q.proj, s.inclusions[0]), compose(q.proj, s.inclusions[1])};
}

Pullback pullback(const BigradedMap& f, const BigradedMap& g, const RComplex& b, const RComplex& c,
                  const RComplex& d) {
  check_pages({&b, &c, &d});
  RComplex bc = direct_sum(b, c);
  DirectSum s = direct_sum(std::vector<BigradedModule>{b.module(), c.module()});
  BigradedMap diff = compose(f, s.projections[0]) - compose(g, s.projections[1]);
  SubComplex k = subcomplex(bc, kernel(diff));
  return {k.complex, compose(s.projections[0], k.inclusion), compose(s.projections[1], k.inclusion)};
}

MapUnknown MapEquations::unknown(const BigradedModule& s, const BigradedModule& t, Bidegree shift) {
  MapUnknown u{s, t, shift, {}};
  for (auto& [b, d] : s.dims()) {
    std::size_t rows = t.dim(b + shift);
    if (rows > 0) u.var[b] = sys_.add_unknown(rows, d);
  }
  return u;
}

void MapEquations::add(const std::vector<Term>& terms, const BigradedMap* constant, const BigradedModule& p,
                       const BigradedModule& q, Bidegree shift) {
  const Field f = p.field();
  for (auto& [b, pd] : p.dims()) {
    std::size_t qd = q.dim(b + shift);
    if (qd == 0) continue;
    std::optional<std::size_t> eq;
    auto equation = [&] {
      if (!eq) eq = sys_.add_equation(qd, pd);
      return *eq;
    };
    for (auto& t : terms) {
      Bidegree mid = t.right ? b + t.right->shift() : b;
      auto it = t.x->var.find(mid);
      if (it == t.x->var.end()) continue;
      Matrix r = t.right ? t.right->block(b) : Matrix::identity(f, pd);
      if (r.is_zero()) continue;
      Bidegree top = mid + t.x->shift;
      Matrix l = t.left ? t.left->block(top) : Matrix::identity(f, qd);
      if (l.is_zero()) continue;
      sys_.add_term(equation(), l, it->second, r);
    }
    if (constant) {
      Matrix c = constant->block(b);
      if (!c.is_zero()) sys_.add_constant(equation(), c);
    }
  }
}

BigradedMap MapEquations::assemble(const MapUnknown& u, const LinearSystem::Assignment& a) {
  BigradedMap m(u.source, u.target, u.shift);
  for (auto& [b, v] : u.var) m.set_block(b, a.at(v));
  return m;
}

std::vector<BigradedMap> chain_map_basis(const RComplex& a, const RComplex& b) {
  MapEquations eq(a.field());
  MapUnknown x = eq.unknown(a.module(), b.module());
  BigradedMap minus_da = -a.d();
  eq.add({{&b.d(), &x, nullptr}, {nullptr, &x, &minus_da}}, nullptr, a.module(), b.module(), a.d().shift());
  std::vector<BigradedMap> out;
  for (auto& sol : eq.system().kernel_basis()) out.push_back(MapEquations::assemble(x, sol));
  return out;
}

}  // namespace ssq
