#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssq/adjunction.hpp"

namespace ssq {

struct NotImplemented : Error {
  using Error::Error;
};

// Classes of book maps: f_i surjective for i <= r, and H(f_r) iso.
bool fib_r(const WBMap& f, int r);
bool weq_r(const WBMap& f, int r);

// I_r = {delta_r : Z(r,p,n) -> Y(r,p+r,n+r-1)},  J_r = {0 -> Y(r,p,n)},
// I_{<=r} = I_r + J_0 + ... + J_{r-1},  J_{<=r} = J_0 + ... + J_r.
enum class GenKind { I, J, ILe, JLe };
std::string gen_kind_name(GenKind k);

struct Generator {
  IndexObject index;  // (r,p,n) of the source Z(r,p,n), or of Y(r,p,n) for J
  bool is_delta = false;
  WBMap map;
};
struct GeneratingSet {
  int r = 0;
  GenKind kind = GenKind::J;
  std::vector<Generator> members;
};
// Members at (p,n) in the window; books are built with the given horizon.
GeneratingSet generating_set(GenKind kind, int r, const std::set<Bidegree>& window, Field f, int horizon);
// supp(K) + supp(L) on pages 0..horizon, inflated by margin in each coordinate.
std::set<Bidegree> support_window(const WBMap& f, int margin);

// Squares  A --top--> K
//          |i         |p
//          B --bot--> L
struct BookSquare {
  WBMap i, p, top, bottom;
};
struct EssSquare {
  ESSMap i, p, top, bottom;
};
bool commutes(const BookSquare& s);
bool commutes(const EssSquare& s);
// A diagonal h : B -> K with h i = top and p h = bottom, re-verified before returning.
std::optional<WBMap> solve_lift(const BookSquare& s);
std::optional<ESSMap> solve_lift(const EssSquare& s);

struct RlpReport {
  bool holds = true;
  std::size_t checked = 0, vacuous = 0;
  std::string failure;  // first generator without the property
};
// f against every member of I_{<=r} (kind ILe) or J_{<=r} (kind JLe) meeting the window.
RlpReport rlp_generators(const WBMap& f, int r, GenKind flavor);

// Closed-form lifts.  lift_iso_vs_strict: i in Iso_{<=r}, p in E'_r.
// lift_strict_vs_iso: i in E'_r, p in Iso_{<=r}.
ESSMap lift_iso_vs_strict(const EssSquare& s, int r);
ESSMap lift_strict_vs_iso(const EssSquare& s, int r);

// f = second . first
struct Factorization {
  ESSMap first, second;
};
// f in E_r  ->  (u in Iso_{<=r}, f~ in E'_r).
Factorization factor_iso_strict(const ESSMap& f, int r);
// Any f  ->  (i = (1,0) : X -> X + Y', q = (f,p) in Fib_r), Y'_r = Cone_r(Y_r), Y'_m = 0 for m > r.
Factorization factor_cone_fib(const ESSMap& f, int r);
// Cof'_r followed by Fib_r and E'_r; only when factor_cone_fib already gives
// q in E_r, otherwise NotImplemented.
Factorization factor_main(const ESSMap& f, int r);

// f_0 bidegreewise injective.
bool cof0_check(const ESSMap& f);
// Lifting problems against sampled surjective quasi-isomorphisms p : Y -> W of
// 0-complexes, each transported to extended spectral sequences and solved there.
struct Cof0Sampling {
  std::size_t samples = 0, solvable = 0;
  std::optional<EssSquare> unsolvable;
};
Cof0Sampling cof0_sample(const ESSMap& f, std::size_t samples, Rng& rng);

// Kernel of a book map, pagewise, on pages 0..horizon.
struct KernelBook {
  WitnessBook book;
  std::vector<BigradedMap> inclusion;
};
KernelBook kernel_book(const WBMap& p);

struct AppCReport {
  int last = 0;                    // conditions checked for i = 0..last
  std::vector<bool> c_sigma;       // C_sigma^i
  std::vector<bool> c_omega;       // C_omega^{i+1}
  bool conditions = true;
  bool ker_in_lwbs = true;
  bool agree() const { return conditions == ker_in_lwbs; }
};
AppCReport appc_conditions(const WBMap& p);
// N(pi) for the projection pi : D_r(0,0) -> R(0,0).
WBMap appc_fixture(int r, Field f, int horizon);

struct LocalizationReport {
  ExtSpecSeq witness;        // H(X_r) = 0, X_{r+1} != 0
  bool witness_in_e = false;
  bool witness_in_eprime = true;
  bool identity_in_both = false;
  bool strict_in_both = false;  // a sampled map in E'_r
  bool passed() const { return witness_in_e && !witness_in_eprime && identity_in_both && strict_in_both; }
};
LocalizationReport localization_check(int r, std::uint64_t seed = 1);
ExtSpecSeq localization_witness(int r, Field f);

// The projection y + A -> y for a complex A at page r, acyclic at r and zero above: in Fib_r and E'_r.
ESSMap strict_projection(const ExtSpecSeq& y, int r, Rng& rng);

}  // namespace ssq
