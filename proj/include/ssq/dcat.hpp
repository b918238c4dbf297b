#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssq/espse.hpp"

namespace ssq {

struct ParseError : Error {
  using Error::Error;
};
struct CompositionError : Error {
  using Error::Error;
};
struct ZeroMorphism : Error {
  using Error::Error;
};

struct IndexObject {
  int r = 0, p = 0, n = 0;
  auto operator<=>(const IndexObject&) const = default;
  std::string str() const;
  Bidegree bidegree() const { return {p, n}; }
};

enum class Gen { Omega, Delta, Sigma };

// One generator, indexed as written: w_{r+1}^{p,n}, d_r^{p,n}, s_r^{p,n}.
struct Letter {
  Gen gen;
  int index;
  int p, n;
  IndexObject source() const;
  IndexObject target() const;
  std::string str() const;
  bool operator==(const Letter&) const = default;
};

Letter omega(int r_plus_1, int p, int n);
Letter delta(int r, int p, int n);
Letter sigma(int r, int p, int n);

// letters[0] is applied last, as in the written composite.
struct MorphismWord {
  IndexObject source, target;
  std::vector<Letter> letters;
  Scalar scalar;
  std::string str() const;
};

// Builds a word from letters, checking composability.
MorphismWord make_word(std::vector<Letter> letters, Scalar scalar);
MorphismWord identity_word(IndexObject x, Scalar scalar);

// Grammar:  term := scalar? gen ("." gen)* ;  gen := (w|d|s) "_" int ["^{" int "," int "}"]
// Undecorated generators take the bidegree forced by their neighbours; if no
// generator is decorated, the rightmost one gets ^{0,0}.
MorphismWord parse_word(const std::string& text, Field f = Field::default_field());

enum class NormalKind { Zero, Identity, OmegaPower, SigmaPower, Delta, DeltaOmega, SigmaDelta };
std::string kind_name(NormalKind k);

struct NormalMorphism {
  NormalKind kind = NormalKind::Zero;
  IndexObject source, target;
  int power = 0;  // i or j; 0 for Zero, Identity, Delta
  Scalar scalar;
  bool is_zero() const { return kind == NormalKind::Zero; }
  std::string str() const;
  bool operator==(const NormalMorphism& o) const;
};

// The canonical word of a normal form (empty for Identity and Zero).
std::vector<Letter> letters_of(const NormalMorphism& m);

// Rewrite rules on words: a redex is a position where one of the zero rules
// (sw, ws, dd, ds, wd) or the three-letter rule sdw -> d applies.
struct Redex {
  std::size_t pos;
  bool to_zero;
};
std::vector<Redex> redexes(const std::vector<Letter>& letters);
// nullopt means the word became zero.
std::optional<std::vector<Letter>> rewrite(const std::vector<Letter>& letters, const Redex& at);

NormalMorphism normalize(const MorphismWord& w);
// Same rules, applying a uniformly random redex at each step.
NormalMorphism normalize_random(const MorphismWord& w, std::mt19937_64& rng);
// Every normal form reachable through some rewrite order.
std::vector<NormalMorphism> all_normal_forms(const MorphismWord& w);

// Nonzero morphisms a -> b: either nothing or one generator of a rank 1 module.
std::optional<NormalMorphism> hom_basis(IndexObject a, IndexObject b, Field f = Field::default_field());

IndexObject dual(IndexObject x);
// The morphism dual(b) -> dual(a) corresponding to m : a -> b.
NormalMorphism dualize(const NormalMorphism& m);
std::vector<Letter> dualize(const std::vector<Letter>& letters);

// Maps between disc objects, all built with the given horizon (at least the
// largest page index involved).
ESSMap realize_letter(const Letter& l, Field f, int horizon);
ESSMap realize_word(const MorphismWord& w, int horizon);
// Throws ZeroMorphism on Zero.
ESSMap realize_disc(const NormalMorphism& m, int horizon = -1);

}  // namespace ssq
