#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssq/bigraded.hpp"
#include "ssq/sample.hpp"

namespace ssq {

struct HorizonError : Error {
  using Error::Error;
};
struct TailError : Error {
  using Error::Error;
};
struct DiagramError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};

// What the pages past the horizon are.  Stable: copies of the last page
// (which must have zero differential) with identity characteristic maps.
enum class Tail { Zero, Stable, Unspecified };
std::string tail_name(Tail t);

// Extended spectral sequence truncated at a finite horizon R.  phi(i) is
// phi_i : X_i -> H(X_{i-1}), in the coordinates of homology(i-1).
class ExtSpecSeq {
 public:
  explicit ExtSpecSeq(Field f = Field::default_field());
  ExtSpecSeq(std::vector<RComplex> pages, std::vector<BigradedMap> phi, Tail tail);
  static ExtSpecSeq zero(Field f) { return ExtSpecSeq(f); }

  const Field& field() const { return d_->field; }
  int horizon() const { return static_cast<int>(d_->pages.size()) - 1; }
  Tail tail() const { return d_->tail; }
  bool tail_known() const { return d_->tail != Tail::Unspecified; }

  // Past the horizon these follow the tail; Unspecified raises HorizonError.
  RComplex page(int i) const;
  Homology homology(int i) const;
  BigradedMap phi(int i) const;
  const RComplex& stored_page(int i) const { return d_->pages.at(i); }
  const Homology& stored_homology(int i) const { return d_->homs.at(i); }

  // Same object with tail pages materialized up to the new horizon.
  ExtSpecSeq extended(int horizon) const;
  // Pages 0..horizon only; the tail becomes Unspecified unless nothing is cut.
  ExtSpecSeq truncated(int horizon) const;

  std::vector<std::string> validate() const;
  bool is_zero() const;
  bool operator==(const ExtSpecSeq& o) const;
  bool operator!=(const ExtSpecSeq& o) const { return !(*this == o); }

 private:
  struct Data {
    Field field;
    std::vector<RComplex> pages;
    std::vector<BigradedMap> phi;  // phi[i] = phi_{i+1}
    std::vector<Homology> homs;
    Tail tail;
  };
  std::shared_ptr<const Data> d_;
};

// True iff every characteristic map is an isomorphism, including the first
// one past the horizon when the tail is known.
bool is_spectral(const ExtSpecSeq& x);

// Largest page index on which maps x -> y are determined by stored data.
int common_extent(const ExtSpecSeq& x, const ExtSpecSeq& y);

class ESSMap {
 public:
  ESSMap() = default;
  ESSMap(ExtSpecSeq source, ExtSpecSeq target, std::vector<BigradedMap> components);
  static ESSMap identity(const ExtSpecSeq& x);
  static ESSMap zero(const ExtSpecSeq& x, const ExtSpecSeq& y);

  const ExtSpecSeq& source() const { return src_; }
  const ExtSpecSeq& target() const { return tgt_; }
  int extent() const { return static_cast<int>(comps_.size()) - 1; }
  // Extended past extent() through the tails when both are known.
  BigradedMap component(int i) const;
  const std::vector<BigradedMap>& components() const { return comps_; }

  std::vector<std::string> validate() const;
  bool operator==(const ESSMap& o) const;
  ESSMap operator+(const ESSMap& o) const;
  ESSMap scaled(const Scalar& c) const;

 private:
  ExtSpecSeq src_, tgt_;
  std::vector<BigradedMap> comps_;
};

ESSMap compose(const ESSMap& g, const ESSMap& f);

// Model-structure classes.  Indices past the stored range use the tails.
bool fib(const ESSMap& f, int r);          // f_i surjective, i <= r
bool weq(const ESSMap& f, int r);          // H(f_r) iso
bool weq_strict(const ESSMap& f, int r);   // weq and f_i iso for i > r; tails must be known
bool iso_below(const ESSMap& f, int r);    // f_i iso, i <= r
bool is_iso(const ESSMap& f);

// Standard objects.
ExtSpecSeq disc(Field f, int r, Bidegree b, int horizon);
ExtSpecSeq unit(Field f, Bidegree b, int horizon);
ExtSpecSeq unit_trunc(Field f, int r, Bidegree b, int horizon);

// Linear system whose solutions are the maps x -> y.
class EssHomSystem {
 public:
  EssHomSystem(const ExtSpecSeq& x, const ExtSpecSeq& y);
  MapEquations& equations() { return eq_; }
  const MapUnknown& unknown(int i) const { return comps_.at(i); }
  int extent() const { return ext_; }
  ESSMap assemble(const LinearSystem::Assignment& a) const;

 private:
  ExtSpecSeq x_, y_;
  int ext_;
  MapEquations eq_;
  std::vector<MapUnknown> comps_;
};

std::vector<ESSMap> hom_basis(const ExtSpecSeq& x, const ExtSpecSeq& y);
std::size_t hom_dim(const ExtSpecSeq& x, const ExtSpecSeq& y);
ESSMap random_hom(const ExtSpecSeq& x, const ExtSpecSeq& y, Rng& rng);
// An isomorphism x -> y if one is found.  Over large fields random points
// of the hom space suffice; over small ones a coordinate search is added.
std::optional<ESSMap> iso_check(const ExtSpecSeq& x, const ExtSpecSeq& y, std::uint64_t seed = 1);

// Finite colimits, computed pagewise.
struct Diagram {
  struct Arrow {
    std::size_t from, to;
    ESSMap map;
  };
  std::vector<ExtSpecSeq> objects;
  std::vector<Arrow> arrows;
};
struct Colimit {
  ExtSpecSeq object;
  std::vector<ESSMap> cocone;
};
Colimit colimit(const Diagram& d);
Colimit coproduct(const std::vector<ExtSpecSeq>& xs, Field f);
Colimit pushout(const ESSMap& f, const ESSMap& g);
// X tensored with a vector space of dimension k.
ExtSpecSeq tensor(const ExtSpecSeq& x, std::size_t k);

// Generators for tests.
struct EssShape {
  int horizon = 3;
  ComplexShape complex{};
};
ExtSpecSeq random_ess(Field f, Rng& rng, EssShape shape = {});
// Each page is the homology of the previous one; the last page has d = 0.
ExtSpecSeq random_spectral(Field f, Rng& rng, EssShape shape = {});

}  // namespace ssq
