#pragma once

#include <random>

#include "ssq/bigraded.hpp"

namespace ssq {

using Rng = std::mt19937_64;

// Uniform over F_p; small integers over Q to keep entries readable.
Scalar random_scalar(Field f, Rng& rng);
Matrix random_matrix(Field f, std::size_t rows, std::size_t cols, Rng& rng);
Matrix random_invertible(Field f, std::size_t n, Rng& rng);

struct ComplexShape {
  int window = 2;       // bidegrees drawn from [-window, window]^2
  int max_pieces = 4;   // number of discs and spheres
};

// Discs and spheres scrambled by a change of basis in every bidegree.
RComplex random_complex(Field f, int r, Rng& rng, ComplexShape shape = {});
// Acyclic: discs only.
RComplex random_acyclic(Field f, int r, Rng& rng, ComplexShape shape = {});
// A random differential of page r on a fixed module, scrambled.
RComplex random_differential(const BigradedModule& m, int r, Rng& rng, double density = 0.5);
// Random element of the space of chain maps a -> b.
BigradedMap random_chain_map(const RComplex& a, const RComplex& b, Rng& rng);
// Random bidegree-shift map with arbitrary blocks.
BigradedMap random_map(const BigradedModule& s, const BigradedModule& t, Bidegree shift, Rng& rng);

}  // namespace ssq
