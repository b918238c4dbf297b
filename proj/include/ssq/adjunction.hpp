#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ssq/espse.hpp"
#include "ssq/lwb.hpp"

namespace ssq {

// N(X)_r^{p,n} inside X_0^{p,n} + ... + X_r^{p,n} + X_0^{b'} + ... + X_r^{b'},
// b' = (p-r, n+1-r): the pairs (x; y) of compatible sequences with y_r = d_r x_r.
struct CompatibleSequencePresentation {
  int r = 0;
  Bidegree x_degree, y_degree;
  std::vector<std::size_t> x_dims, y_dims;  // dim X_i at x_degree, y_degree
  Subspace pairs;

  std::size_t ambient() const;
  std::size_t x_offset(int i) const;
  std::size_t y_offset(int i) const;
};

CompatibleSequencePresentation compatible_sequences(const ExtSpecSeq& x, int r, Bidegree b);

struct NervePresentation {
  WitnessBook book;
  std::vector<std::map<Bidegree, CompatibleSequencePresentation>> pages;
};

// Pages 0..horizon (default: the horizon of x); the tail is unspecified.
NervePresentation nerve_presentation(const ExtSpecSeq& x, int horizon = -1);
WitnessBook nerve(const ExtSpecSeq& x, int horizon = -1);
WBMap nerve_map(const ESSMap& f, int horizon = -1);

// Q(L)_0 = L_0, Q(L)_r = L_r / S_r, phi_r(a) = [w_r a].
struct Realization {
  ExtSpecSeq object;
  std::vector<BigradedMap> proj, section;  // L_r -> Q(L)_r and a section
};
Realization realization(const WitnessBook& l);
ExtSpecSeq realize(const WitnessBook& l);
ESSMap realize_map(const WBMap& f);

WBMap unit(const WitnessBook& l);       // L -> N Q L
ESSMap counit(const ExtSpecSeq& x);     // Q N X -> X

// U(L): the pages of L with phi_r(a) = [w_r a].
ExtSpecSeq forget(const WitnessBook& l);
ESSMap projection_to_realize(const WitnessBook& l);  // U(L) -> Q(L)
// Every component of U(L) -> Q(L) on the stored pages is a quasi-isomorphism.
bool projection_is_quasi_iso(const WitnessBook& l);

// The transpose of g : Q L -> X, namely N(g) o eta_L : L -> N X.
WBMap adjunct(const WitnessBook& l, const ESSMap& g);
// The transpose of h : L -> N X, namely eps_X o Q(h) : Q L -> X.
ESSMap adjunct(const WBMap& h, const ExtSpecSeq& x);

// (fib_r(f), N(f)_i surjective for i <= r).
std::pair<bool, bool> nsurj_transfer_check(const ESSMap& f, int r);

enum class ColimitVerdict { Holds, Fails, Inconclusive };
const char* verdict_name(ColimitVerdict v);
// For a chain X_0 -> ... -> X_k whose last map is an isomorphism, compares
// colim N(X_j) with N(colim X_j) through the canonical map.  A chain that has
// not visibly stabilized is Inconclusive: finite data cannot witness the colimit.
ColimitVerdict filtered_colimit_nerve_check(const std::vector<ESSMap>& chain);

}  // namespace ssq
