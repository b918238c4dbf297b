#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssq/dcat.hpp"
#include "ssq/espse.hpp"

namespace ssq {

struct InvalidBook : Error {
  using Error::Error;
};

// What a book does past its horizon R.
//  Zero: all pages vanish (forces d_R = 0).
//  Cone: pages i > t are Cone_i(L_t / B_t) placed as in the left adjoint of
//        truncation: A_i + B with A_i^{p,n} = Q^{p+t-i,n+t-i}, B^{p,n} = Q^{p+t,n+t-1},
//        d = (a,b) -> (0,a), s = (a,b) -> (a,0), w = (a,b) -> (0,b),
//        s_t = x -> ([x],0), w_{t+1} = (a,b) -> d_t b.  Requires t <= R.
//  Unspecified: unknown; anything past R raises HorizonError.
enum class BookTailKind { Zero, Cone, Unspecified };
struct BookTail {
  BookTailKind kind = BookTailKind::Zero;
  int t = 0;
  static BookTail zero() { return {BookTailKind::Zero, 0}; }
  static BookTail cone(int t) { return {BookTailKind::Cone, t}; }
  static BookTail unspecified() { return {BookTailKind::Unspecified, 0}; }
  bool operator==(const BookTail&) const = default;
  std::string str() const;
};

class WitnessBook {
 public:
  explicit WitnessBook(Field f = Field::default_field());
  // w[i] = w_{i+1} : pages[i+1] -> pages[i];  s[i] = s_i : pages[i] -> pages[i+1].
  WitnessBook(std::vector<RComplex> pages, std::vector<BigradedMap> w, std::vector<BigradedMap> s, BookTail tail);

  const Field& field() const;
  int horizon() const;
  const BookTail& tail() const;
  bool tail_known() const { return tail().kind != BookTailKind::Unspecified; }
  bool knows(int i) const { return i >= 0 && (i <= horizon() || tail_known()); }

  RComplex page(int i) const;
  BigradedMap w(int i) const;  // w_i : L_i -> L_{i-1}, i >= 1
  BigradedMap s(int i) const;  // s_i : L_i -> L_{i+1}
  BigradedMap d(int i) const { return page(i).d(); }

  // For a cone tail at t and i > t: lifts of the two summands of page i to
  // page t, of bidegrees (t-i,t-i) and (t,t-1).
  std::pair<BigradedMap, BigradedMap> cone_lifts(int i) const;

  WitnessBook extended(int horizon) const;
  WitnessBook truncated(int horizon) const;

  std::vector<std::string> validate() const;
  bool is_zero() const;
  bool operator==(const WitnessBook& o) const;
  bool operator!=(const WitnessBook& o) const { return !(*this == o); }

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

class WBMap {
 public:
  WBMap() = default;
  WBMap(WitnessBook source, WitnessBook target, std::vector<BigradedMap> components);
  static WBMap identity(const WitnessBook& l, int extent = -1);
  static WBMap zero(const WitnessBook& k, const WitnessBook& l, int extent = -1);

  const WitnessBook& source() const { return src_; }
  const WitnessBook& target() const { return tgt_; }
  int extent() const { return static_cast<int>(comps_.size()) - 1; }
  // Past extent(): zero when either page vanishes, and determined by page t
  // when the source has a cone tail at t <= extent().  Otherwise HorizonError.
  BigradedMap component(int i) const;
  const std::vector<BigradedMap>& components() const { return comps_; }
  WBMap extended(int extent) const;

  std::vector<std::string> validate() const;
  bool operator==(const WBMap& o) const;
  WBMap operator+(const WBMap& o) const;
  WBMap operator-(const WBMap& o) const { return *this + o.scaled(Scalar(o.src_.field(), -1L)); }
  WBMap scaled(const Scalar& c) const;

 private:
  WitnessBook src_, tgt_;
  std::vector<BigradedMap> comps_;
};

WBMap compose(const WBMap& g, const WBMap& f);
bool is_iso(const WBMap& f);

// Pages r..t of a book.
struct TruncatedBook {
  int r = 0;
  std::vector<RComplex> pages;   // pages[k] is page r+k
  std::vector<BigradedMap> w;    // w[k] = w_{r+k+1}
  std::vector<BigradedMap> s;    // s[k] = s_{r+k}
  int t() const { return r + static_cast<int>(pages.size()) - 1; }
  const RComplex& page(int i) const { return pages.at(i - r); }
  const Field& field() const { return pages.at(0).field(); }
  std::vector<std::string> validate() const;
  bool operator==(const TruncatedBook&) const = default;
};

TruncatedBook trunc_U(const WitnessBook& l, int r, int t);
// A truncated book starting at page 0 as a book with unspecified tail.
WitnessBook as_book(const TruncatedBook& tb);
// Pages below r filled in by the left adjoint (copies of page r, d = 0, w = 1, s = 0); tail Unspecified.
WitnessBook lower_extension(const TruncatedBook& tb);
// Left adjoint of U_[r,t]: lower extension plus the cone tail at t.
WitnessBook trunc_F(const TruncatedBook& tb, int horizon);
// Right adjoint of U_[r,t], on pages 0..horizon; tail Unspecified.
WitnessBook trunc_R(const TruncatedBook& tb, int horizon);
// Counit F U L -> L and unit L -> R U L, on pages 0..horizon.
WBMap trunc_F_counit(const WitnessBook& l, int r, int t, int horizon);
WBMap trunc_R_unit(const WitnessBook& l, int r, int t, int horizon);
// (W_{>=r})_! L on pages r..top.
TruncatedBook w_shriek(const WitnessBook& l, int r, int top);
// Unit L -> F_{>=r} (W_{>=r})_! L on pages 0..top; the target is lower_extension(w_shriek(l, r, top)).
WBMap w_shriek_unit(const WitnessBook& l, int r, int top);
// T^k on every page; k may be negative while pages stay >= 0.
TruncatedBook translate(const TruncatedBook& tb, int k);

// S_r(L) = s_{r-1} L_{r-1} + d_r s_{r-1} L_{r-1} inside L_r, r >= 1.
SubComplex s_sub(const WitnessBook& l, int r);
BigradedSubspace s_subspace(const WitnessBook& l, int r);

// Representable books Y(r,p,n) = Hom_D(-, (r,p,n)) and the quotients
// Z (by delta_r), Sfrak (by sigma_r) and W (by omega_r, r >= 1).
enum class RepKind { Y, Z, S, W };
std::string rep_name(RepKind k);
WitnessBook representable(RepKind k, IndexObject x, Field f, int horizon);
// The same object computed directly from normal forms on pages 0..top, with unspecified tail.
WitnessBook representable_presheaf(RepKind k, IndexObject x, Field f, int top);
// The map representable(k, x) -> L sending the generator to the column vector v in L_r^{p,n}.
WBMap yoneda_map(RepKind k, IndexObject x, const WitnessBook& l, const Matrix& v);
// Image of the generator under a map out of a representable.
Matrix yoneda_element(const WBMap& f, IndexObject x);
// The map of representables induced by a morphism m : a -> b of D, for kinds
// where it descends (the relations of D make tau, sigma and omega below well defined).
WBMap representable_morphism(RepKind from, RepKind to, const NormalMorphism& m, int horizon);

// Hom spaces between books.  Exact when both tails are known, or when the
// source has a cone tail inside the computed range, or a zero tail below the
// target's horizon; otherwise relative to the stored pages.
class BookHomSystem {
 public:
  BookHomSystem(const WitnessBook& k, const WitnessBook& l);
  MapEquations& equations() { return eq_; }
  int extent() const { return ext_; }
  bool exact() const { return exact_; }
  const MapUnknown& unknown(int i) const { return comps_.at(i); }
  WBMap assemble(const LinearSystem::Assignment& a) const;

 private:
  WitnessBook k_, l_;
  int ext_;
  bool exact_;
  MapEquations eq_;
  std::vector<MapUnknown> comps_;
};

std::vector<WBMap> hom_basis(const WitnessBook& k, const WitnessBook& l);
std::size_t hom_dim(const WitnessBook& k, const WitnessBook& l);
WBMap random_hom(const WitnessBook& k, const WitnessBook& l, Rng& rng);
std::optional<WBMap> iso_check(const WitnessBook& k, const WitnessBook& l, std::uint64_t seed = 1);
std::vector<WBMap> hom_from_representable(RepKind k, IndexObject x, const WitnessBook& l);

// Lifting: f : K -> L has the right lifting property against j : A -> B.
// Maps out of A and B are compared on pages 0..pages.
bool has_rlp(const WBMap& j, const WBMap& f);
bool has_rlp_to_zero(const WBMap& j, const WitnessBook& l);

struct Verdict {
  bool holds = true;
  bool exact = true;  // false when only the stored pages could be checked
  std::string reason;
  explicit operator bool() const { return holds; }
};
Verdict lwbe_verdict(const WitnessBook& l);
Verdict lwbs_verdict(const WitnessBook& l);
bool in_lwbe(const WitnessBook& l);
bool in_lwbs(const WitnessBook& l);
// Im w_{i+1} = Ker d_i = Ker s_i, and Ker w_{i+1} = Im s_i.
bool phi_surjective(const WitnessBook& l, int i);
bool phi_injective(const WitnessBook& l, int i);

enum class Family { Tau, SigmaOmega, OmegaSigma };
std::string family_name(Family f);
// L -> 0 against every member of the family meeting the support of L.
Verdict rlp_family_verdict(const WitnessBook& l, Family fam);
bool rlp_family_check(const WitnessBook& l, Family fam);

// Pagewise direct sum on pages 0..h; zero tail when every summand has one.
WitnessBook direct_sum(const std::vector<WitnessBook>& parts, int h, Field f);
// The same book after a random change of basis in every page and bidegree.
WitnessBook scrambled(const WitnessBook& l, Rng& rng);

struct BookShape {
  int horizon = 4;
  int max_parts = 3;
  int rmax = 2;
  int window = 1;  // representables at (r,p,n) with |p|,|n| <= window
};
// A scrambled sum of representables Y, Z, Sfrak, W.
WitnessBook random_book(Field f, Rng& rng, BookShape shape = {});

// Colimits in lwb are pagewise, on pages 0..min horizon.
struct BookDiagram {
  struct Arrow {
    std::size_t from, to;
    WBMap map;
  };
  std::vector<WitnessBook> objects;
  std::vector<Arrow> arrows;
};
struct BookColimit {
  WitnessBook object;
  std::vector<WBMap> cocone;
};
BookColimit colimit(const BookDiagram& d);

}  // namespace ssq
