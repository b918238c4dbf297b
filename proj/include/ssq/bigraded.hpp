#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ssq/exactla.hpp"
#include "ssq/linsys.hpp"

namespace ssq {

struct InvalidComplex : Error {
  using Error::Error;
};
struct NotChainMap : Error {
  using Error::Error;
};
struct PageMismatch : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};

struct Bidegree {
  int p = 0, n = 0;
  auto operator<=>(const Bidegree&) const = default;
  Bidegree operator+(const Bidegree& o) const { return {p + o.p, n + o.n}; }
  Bidegree operator-(const Bidegree& o) const { return {p - o.p, n - o.n}; }
  std::string str() const { return "(" + std::to_string(p) + "," + std::to_string(n) + ")"; }
};

// Bidegree of the page-r differential.
inline Bidegree diff_degree(int r) { return {-r, 1 - r}; }

// Translation T on bidegrees, iterated k times (k may be negative).
Bidegree translate(Bidegree b, int k);

class BigradedModule {
 public:
  explicit BigradedModule(Field f = Field::default_field()) : f_(f) {}
  BigradedModule(Field f, std::map<Bidegree, std::size_t> dims);

  const Field& field() const { return f_; }
  std::size_t dim(Bidegree b) const;
  void set_dim(Bidegree b, std::size_t d);
  const std::map<Bidegree, std::size_t>& dims() const { return dims_; }
  std::vector<Bidegree> support() const;
  std::size_t total_dim() const;
  bool is_zero() const { return dims_.empty(); }
  // N^b = M^{b + delta}
  BigradedModule shifted(Bidegree delta) const;
  BigradedModule translated(int k) const;
  bool operator==(const BigradedModule& o) const { return f_ == o.f_ && dims_ == o.dims_; }
  bool operator!=(const BigradedModule& o) const { return !(*this == o); }

 private:
  Field f_;
  std::map<Bidegree, std::size_t> dims_;
};

BigradedModule direct_sum(const BigradedModule& a, const BigradedModule& b);

// Homogeneous map; blocks keyed by source bidegree, zero blocks omitted.
class BigradedMap {
 public:
  BigradedMap() = default;
  BigradedMap(BigradedModule source, BigradedModule target, Bidegree shift);
  static BigradedMap zero(const BigradedModule& s, const BigradedModule& t, Bidegree shift = {0, 0});
  static BigradedMap identity(const BigradedModule& m);
  // Block at each source bidegree given by fn(source bidegree).
  static BigradedMap build(const BigradedModule& s, const BigradedModule& t, Bidegree shift,
                           const std::function<Matrix(Bidegree)>& fn);

  const BigradedModule& source() const { return src_; }
  const BigradedModule& target() const { return tgt_; }
  Bidegree shift() const { return shift_; }
  const Field& field() const { return src_.field(); }

  Matrix block(Bidegree source_degree) const;
  void set_block(Bidegree source_degree, const Matrix& m);
  const std::map<Bidegree, Matrix>& blocks() const { return blocks_; }

  bool is_zero() const { return blocks_.empty(); }
  BigradedMap operator+(const BigradedMap& o) const;
  BigradedMap operator-(const BigradedMap& o) const;
  BigradedMap operator-() const;
  BigradedMap scaled(const Scalar& c) const;
  bool operator==(const BigradedMap& o) const;
  bool operator!=(const BigradedMap& o) const { return !(*this == o); }
  BigradedMap translated(int k) const;
  // Same blocks, reinterpreted between modules whose bidegrees are offset.
  BigradedMap reindexed(const BigradedModule& s, const BigradedModule& t, Bidegree source_offset,
                        Bidegree new_shift) const;

  bool is_injective() const;
  bool is_surjective() const;
  bool is_iso() const;

 private:
  BigradedModule src_, tgt_;
  Bidegree shift_{0, 0};
  std::map<Bidegree, Matrix> blocks_;
};

// g after f
BigradedMap compose(const BigradedMap& g, const BigradedMap& f);

struct DirectSum {
  BigradedModule module;
  std::vector<BigradedMap> inclusions, projections;
};
DirectSum direct_sum(const std::vector<BigradedModule>& parts);

class RComplex {
 public:
  RComplex() = default;
  RComplex(int r, BigradedModule module);
  RComplex(int r, BigradedModule module, BigradedMap d);
  static RComplex zero(int r, Field f);

  int r() const { return r_; }
  const BigradedModule& module() const { return mod_; }
  const BigradedMap& d() const { return d_; }
  const Field& field() const { return mod_.field(); }
  std::size_t dim(Bidegree b) const { return mod_.dim(b); }
  // Throws if d has the wrong bidegree or d o d != 0.
  void validate() const;
  bool operator==(const RComplex& o) const { return r_ == o.r_ && mod_ == o.mod_ && d_ == o.d_; }
  bool operator!=(const RComplex& o) const { return !(*this == o); }

 private:
  int r_ = 0;
  BigradedModule mod_;
  BigradedMap d_;
};

struct HomologyBlock {
  Subspace cycles, boundaries;
  Matrix proj;  // h x dim; class of a cycle
  Matrix lift;  // dim x h; chosen representatives
};

struct Homology {
  BigradedModule module;
  std::map<Bidegree, HomologyBlock> blocks;
  const HomologyBlock* at(Bidegree b) const;
  Matrix proj(Bidegree b, std::size_t ambient) const;
  Matrix lift(Bidegree b, std::size_t ambient) const;
  Subspace cycles(Bidegree b, std::size_t ambient, Field f) const;
  Subspace boundaries(Bidegree b, std::size_t ambient, Field f) const;
};

Homology homology(const RComplex& c);
RComplex homology_complex(const RComplex& c, int r_next);  // H(c) with zero differential
// Cycles -> H and the chosen section H -> cycles, as maps of bigraded modules.
BigradedMap homology_proj(const RComplex& c, const Homology& h);
BigradedMap homology_lift(const RComplex& c, const Homology& h);
// H(f) for a chain map f : a -> b of bidegree 0.
BigradedMap homology_map(const BigradedMap& f, const Homology& ha, const Homology& hb);
bool is_chain_map(const BigradedMap& f, const RComplex& a, const RComplex& b);
// Throws NotChainMap if f does not commute with the differentials.
bool is_quasi_iso(const BigradedMap& f, const RComplex& a, const RComplex& b);

RComplex translate(const RComplex& c, int k);
// T^{-1}; a 0-complex has no preimage.
RComplex translate_inv(const RComplex& c);
RComplex direct_sum(const RComplex& a, const RComplex& b);

// Cone_r(A)^{p,n} = A^{p,n} + A^{p+r,n+r-1}, d(a,b) = (0,a); acyclic.
RComplex cone(const BigradedModule& a, int r);
// pi(a,b) = a + d^A b
BigradedMap cone_projection(const RComplex& a);
// (Sigma A)^{p,n} = A^{p+r,n+r-1}, d = -d
RComplex suspension(const RComplex& a);

using BigradedSubspace = std::map<Bidegree, Subspace>;

struct QuotientComplex {
  RComplex complex;
  BigradedMap proj, section;
};
// c / sub; sub must be closed under d.
QuotientComplex quotient(const RComplex& c, const BigradedSubspace& sub);
BigradedMap quotient_map(const BigradedModule& m, const BigradedSubspace& sub, BigradedModule* out,
                         BigradedMap* section);

struct SubComplex {
  RComplex complex;
  BigradedMap inclusion;
};
// sub must be closed under d.
SubComplex subcomplex(const RComplex& c, const BigradedSubspace& sub);

// Pushout of b <-f- a -g-> c, computed as (b + c) / {(f x, -g x)}.
struct Pushout {
  RComplex object;
  BigradedMap from_b, from_c;
};
Pushout pushout(const BigradedMap& f, const BigradedMap& g, const RComplex& a, const RComplex& b,
                const RComplex& c);

// Pullback of b -f-> d <-g- c, the subcomplex {(x, y) : f x = g y} of b + c.
struct Pullback {
  RComplex object;
  BigradedMap to_b, to_c;
};
Pullback pullback(const BigradedMap& f, const BigradedMap& g, const RComplex& b, const RComplex& c,
                  const RComplex& d);

BigradedSubspace image(const BigradedMap& f);
BigradedSubspace kernel(const BigradedMap& f);
Subspace component(const BigradedSubspace& s, Bidegree b, std::size_t ambient, Field f);

// Unknown bigraded maps inside a LinearSystem, and equations between
// composites of known and unknown maps.
struct MapUnknown {
  BigradedModule source, target;
  Bidegree shift{0, 0};
  std::map<Bidegree, std::size_t> var;  // source bidegree -> unknown index
};

class MapEquations {
 public:
  explicit MapEquations(Field f) : sys_(f) {}
  MapUnknown unknown(const BigradedModule& s, const BigradedModule& t, Bidegree shift = {0, 0});
  // left * x * right; a null side means identity.
  struct Term {
    const BigradedMap* left;
    const MapUnknown* x;
    const BigradedMap* right;
  };
  // sum(terms) + constant = 0 as maps p -> q of the given bidegree.
  void add(const std::vector<Term>& terms, const BigradedMap* constant, const BigradedModule& p,
           const BigradedModule& q, Bidegree shift = {0, 0});

  LinearSystem& system() { return sys_; }
  const LinearSystem& system() const { return sys_; }
  static BigradedMap assemble(const MapUnknown& u, const LinearSystem::Assignment& a);

 private:
  LinearSystem sys_;
};

// Chain maps a -> b (bidegree 0).
std::vector<BigradedMap> chain_map_basis(const RComplex& a, const RComplex& b);

}  // namespace ssq
