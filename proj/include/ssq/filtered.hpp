#pragma once

#include <string>
#include <vector>

#include "ssq/decalage.hpp"

namespace ssq {

struct ValidationError : Error {
  using Error::Error;
};

// Bounded cochain complex A^kmin -> ... -> A^kmax with an increasing
// filtration F_p A^k preserved by d.  In degree k the filtration is stored as
// steps F_lo, F_lo+1, ..., F_top with F_p = 0 below lo and F_top = A^k.
class FilteredComplex {
 public:
  struct Degree {
    std::size_t dim = 0;
    Matrix d;                   // A^k -> A^{k+1}; 0 x dim in the top degree
    int lo = 0;
    std::vector<Subspace> steps;
  };

  explicit FilteredComplex(Field f = Field::default_field()) : f_(f) {}
  // Throws ValidationError unless the result is valid.
  FilteredComplex(Field f, int kmin, std::vector<Degree> degrees);
  // One-step filtration F_0 = A.
  static FilteredComplex trivial(Field f, int kmin, const std::vector<Matrix>& d);
  // Basis vector j of A^k lies in F_p iff weights[k - kmin][j] <= p.
  static FilteredComplex from_weights(Field f, int kmin, const std::vector<Matrix>& d,
                                      const std::vector<std::vector<int>>& weights);

  const Field& field() const { return f_; }
  int kmin() const { return kmin_; }
  int kmax() const { return kmin_ + static_cast<int>(deg_.size()) - 1; }
  const std::vector<Degree>& degrees() const { return deg_; }
  std::size_t dim(int k) const;
  Matrix d(int k) const;  // dim(k+1) x dim(k), zero outside the range
  Subspace filt(int k, int p) const;
  // Gr_p = 0 outside [pmin, pmax]
  int pmin() const;
  int pmax() const;
  int length() const { return deg_.empty() ? 0 : pmax() - pmin(); }

  std::vector<std::string> validate() const;
  bool operator==(const FilteredComplex& o) const;

 private:
  Field f_;
  int kmin_ = 0;
  std::vector<Degree> deg_;
};

// Filtration- and d-preserving map; maps[i] acts on degree source.kmin() + i.
struct FilteredMap {
  FilteredComplex source, target;
  std::vector<Matrix> maps;
  Matrix at(int k) const;
  std::vector<std::string> validate() const;
};

// Z_r^{p,m} = {x in F_p A^k : dx in F_{p-r}},  k = m - p, r >= -1
// B_r^{p,m} = Z_{r-1}^{p-1,m-1} + d Z_{r-1}^{p+r-1,m+r-2}
Subspace z_space(const FilteredComplex& c, int r, int p, int k);
Subspace b_space(const FilteredComplex& c, int r, int p, int k);

// E_r^{p,m} = Z_r / B_r on pages 0..horizon.  The tail is Stable once page
// horizon + 1 coincides with page horizon, otherwise Unspecified.
ExtSpecSeq ss(const FilteredComplex& c, int horizon);
ESSMap ss_map(const FilteredMap& f, int horizon);

// Dec(F)_p A^k  = {x in F_{p-k} : dx in F_{p-k-1}}
// Dec*(F)_p A^k = F_{p-k} A^k + d F_{p-k+1} A^{k-1}
// S(F)_p A^k    = F_{p+k} A^k
FilteredComplex dec_filtration(const FilteredComplex& c);
FilteredComplex decstar_filtration(const FilteredComplex& c);
FilteredComplex shift_filtration(const FilteredComplex& c);

struct CompatReport {
  ESSMap map;
  bool verified = false;
  std::string failure;
};

// E(S C) -> Shift_1(E C), identity on representatives.  Source horizon is horizon + 1.
CompatReport compat_shift(const FilteredComplex& c, int horizon);

// u~ : E(Dec C) -> Dec_1(E C), page 0 [x] -> ([x]_0, [x]_1; [dx]_0, [dx]_1),
// then [x] -> [x] on the pages above.
struct CompatDec : CompatReport {
  BigradedMap u0;   // Deligne's u_0 : E(Dec C)_0 -> T^{-1} E(C)_1, [x] -> [x]_1
  BigradedMap rho;  // T^{-1} rho_1 : Dec_1(E C)_0 -> T^{-1} E(C)_1
};
CompatDec compat_dec(const FilteredComplex& c, int horizon);

// v~ : E(Dec* C) -> LDec_1(E C), the inverse of the map `formula` whose page 0
// sends the class of (a,b) in Cone_1(E(C)_0)/Im q_1 to [a + db].
struct CompatDecStar : CompatReport {
  ESSMap formula;       // LDec_1(E C) -> E(Dec* C)
  BigradedMap on_cone;  // (a,b) -> [a + db] : Cone_1(E(C)_0) -> T E(Dec* C)_0
  BigradedMap q;        // q_1 : (N E C)_1 -> Cone_1(E(C)_0)
  BigradedMap coker_proj;
};
CompatDecStar compat_decstar(const FilteredComplex& c, int horizon);

struct FilteredShape {
  int kmin = 0, kmax = 4;
  int length = 4;        // weights drawn from [0, length]
  int max_pieces = 5;    // intervals: cycles and pairs x -> dx
};
// A direct sum of filtered cycles and pairs, scrambled degreewise.
FilteredComplex random_filtered(Field f, Rng& rng, FilteredShape shape = {});

}  // namespace ssq
