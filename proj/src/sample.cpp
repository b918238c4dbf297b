#include "ssq/sample.hpp"

namespace ssq {

Scalar random_scalar(Field f, Rng& rng) {
  if (f.is_rational()) return Scalar(f, static_cast<long>(rng() % 5) - 2);
  return Scalar(f, static_cast<long>(rng() % static_cast<std::uint64_t>(f.characteristic())));
}

Matrix random_matrix(Field f, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, random_scalar(f, rng));
  return m;
}

Matrix random_invertible(Field f, std::size_t n, Rng& rng) {
  for (;;) {
    Matrix m = random_matrix(f, n, n, rng);
    if (m.is_invertible()) return m;
  }
}

namespace {

RComplex scrambled(int r, const BigradedModule& m, const std::vector<std::pair<Bidegree, Bidegree>>& discs,
                   Rng& rng) {
  const Field f = m.field();
  const Bidegree s = diff_degree(r);
  std::map<Bidegree, std::size_t> next;
  std::map<Bidegree, Matrix> blocks;
  for (auto& [b, dim] : m.dims()) blocks.emplace(b, Matrix(f, m.dim(b + s), dim));
  for (auto& [a, b] : discs) {
    std::size_t ia = next[a]++, ib = next[b]++;
    blocks.at(a).set_int(ib, ia, 1);
  }
  BigradedMap d(m, m, s);
  for (auto& [b, mat] : blocks)
    if (mat.rows() > 0) d.set_block(b, mat);
  std::map<Bidegree, Matrix> g;
  for (auto& [b, dim] : m.dims()) g.emplace(b, random_invertible(f, dim, rng));
  BigradedMap gm = BigradedMap::build(m, m, {0, 0}, [&](Bidegree b) { return g.at(b); });
  BigradedMap gi = BigradedMap::build(m, m, {0, 0}, [&](Bidegree b) { return g.at(b).inverse(); });
  return RComplex(r, m, compose(compose(gm, d), gi));
}

RComplex assemble(Field f, int r, Rng& rng, ComplexShape shape, bool spheres) {
  BigradedModule m(f);
  std::vector<std::pair<Bidegree, Bidegree>> discs;
  int w = shape.window;
  int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(shape.max_pieces));
  for (int i = 0; i < k; ++i) {
    Bidegree b{static_cast<int>(rng() % (2 * w + 1)) - w, static_cast<int>(rng() % (2 * w + 1)) - w};
    if (!spheres || rng() % 2) {
      discs.push_back({b, b + diff_degree(r)});
      m.set_dim(b, m.dim(b) + 1);
      m.set_dim(b + diff_degree(r), m.dim(b + diff_degree(r)) + 1);
    } else {
      m.set_dim(b, m.dim(b) + 1);
    }
  }
  return scrambled(r, m, discs, rng);
}

}  // namespace

RComplex random_complex(Field f, int r, Rng& rng, ComplexShape shape) { return assemble(f, r, rng, shape, true); }

RComplex random_acyclic(Field f, int r, Rng& rng, ComplexShape shape) { return assemble(f, r, rng, shape, false); }

RComplex random_differential(const BigradedModule& m, int r, Rng& rng, double density) {
  const Bidegree s = diff_degree(r);
  std::map<Bidegree, std::size_t> free;
  for (auto& [b, d] : m.dims()) free[b] = d;
  std::vector<std::pair<Bidegree, Bidegree>> discs;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (auto& [b, d] : m.dims()) {
    auto it = free.find(b + s);
    if (it == free.end() || b + s == b) continue;
    while (free[b] > 0 && it->second > 0 && coin(rng) < density) {
      discs.push_back({b, b + s});
      --free[b];
      --it->second;
    }
  }
  return scrambled(r, m, discs, rng);
}

BigradedMap random_chain_map(const RComplex& a, const RComplex& b, Rng& rng) {
  MapEquations eq(a.field());
  MapUnknown x = eq.unknown(a.module(), b.module());
  BigradedMap minus_da = -a.d();
  eq.add({{&b.d(), &x, nullptr}, {nullptr, &x, &minus_da}}, nullptr, a.module(), b.module(), a.d().shift());
  return MapEquations::assemble(x, eq.system().random_kernel_element(rng));
}

BigradedMap random_map(const BigradedModule& s, const BigradedModule& t, Bidegree shift, Rng& rng) {
  return BigradedMap::build(s, t, shift,
                            [&](Bidegree b) { return random_matrix(s.field(), t.dim(b + shift), s.dim(b), rng); });
}

}  // namespace ssq
