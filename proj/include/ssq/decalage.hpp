#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssq/adjunction.hpp"

namespace ssq {

// (Sigma A)^{p,n} = A^{p+r,n+r-1} with d = -d, for an r-complex A.
inline RComplex sigma_complex(const RComplex& a) { return suspension(a); }

// q_r : Sigma (N X)_r -> Cone_r(X_0), (x; y) -> (-y_0, x_0), and the pieces of
// the short exact sequence  0 -> Sigma(N X)_r / Ker q -> Cone_r(X_0) -> Cone_r(X_0)/Im q -> 0.
// q is stored as a map out of (N X)_r of bidegree diff_degree(r).
struct QrData {
  int r = 0;
  RComplex nerve_page;        // (N X)_r
  RComplex cone;              // Cone_r(X_0)
  BigradedMap q;
  QuotientComplex coker;      // Cone_r(X_0) / Im q
  QuotientComplex coimage;    // (N X)_r / Ker q
  BigradedMap rho;            // (N X)_r -> X_r, (x; y) -> x_r
};
QrData qr_data(const ExtSpecSeq& x, int r);

// The connecting isomorphism H(Cone_r(X_0)/Im q_r) -> H((N X)_r / Ker q_r),
// one matrix per bidegree in homology coordinates.
struct ConnectingMap {
  BigradedMap matrix;
  bool invertible = false;
};
// With rng set, every zig-zag preimage is moved by a random element of the
// relevant kernel; the result must not change.
ConnectingMap connecting_map(const QrData& d, Rng* perturb = nullptr);

// r-fold shift and decalages.  Objects with a known tail are first extended
// so that at least one page of X above r is stored.
ExtSpecSeq shift_r(const ExtSpecSeq& x, int r);
ExtSpecSeq dec_r(const ExtSpecSeq& x, int r);
ExtSpecSeq ldec_r(const ExtSpecSeq& x, int r);
ESSMap shift_r(const ESSMap& f, int r);
ESSMap dec_r(const ESSMap& f, int r);
ESSMap ldec_r(const ESSMap& f, int r);

// Shift^r -| Dec^r
ESSMap shift_dec_unit(const ExtSpecSeq& x, int r);    // x -> Dec Shift x, an isomorphism
ESSMap shift_dec_counit(const ExtSpecSeq& y, int r);  // Shift Dec y -> y
// LDec^r -| Shift^r
ESSMap ldec_shift_unit(const ExtSpecSeq& x, int r);    // x -> Shift LDec x
ESSMap ldec_shift_counit(const ExtSpecSeq& y, int r);  // LDec Shift y -> y, an isomorphism

// The same functors through witness books:
//   Dec^r = T^{-r} Q U_{>=r} N,  LDec^r = T^{-r} Q (W_{>=r})_! N.
ExtSpecSeq dec_r_presheaf(const ExtSpecSeq& x, int r);
ExtSpecSeq ldec_r_presheaf(const ExtSpecSeq& x, int r);

enum class Pairing { LDecShift, ShiftDec };
std::string pairing_name(Pairing p);
struct AdjunctionReport {
  std::size_t left = 0, right = 0;  // dim Hom(F x, y), dim Hom(x, G y)
  bool bijection = false;           // transposes of a basis are independent and the dims agree
};
AdjunctionReport adjunction_witness(Pairing p, const ExtSpecSeq& x, const ExtSpecSeq& y, int r);

struct DwyerKanReport {
  int r = 0;
  std::size_t samples = 0;
  std::size_t counit_in_eprime = 0;   // Shift Dec y -> y in E'_r
  std::size_t spectral_samples = 0;
  std::size_t ldec_unit_ok = 0;       // on spectral x: quasi-iso at page r, iso above
  // f in E'_1 whose LDec (r = 0) is not in E'_0, if sampling found one
  std::optional<ESSMap> ldec_counterexample;
  bool passed() const { return counit_in_eprime == samples && ldec_unit_ok == spectral_samples; }
};
DwyerKanReport dwyer_kan_check(int r, std::size_t samples, std::uint64_t seed);

}  // namespace ssq
