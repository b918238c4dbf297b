#include "ssq/linsys.hpp"

#include <algorithm>
#include <variant>

#include "field_ops.hpp"

namespace ssq {

namespace {

using detail::FpOps;
using detail::QOps;

template <class Ops>
const std::vector<typename Ops::T>& raw(const Matrix& m);
template <>
const std::vector<std::int64_t>& raw<FpOps>(const Matrix& m) {
  return m.fp_data();
}
template <>
const std::vector<mpq_class>& raw<QOps>(const Matrix& m) {
  return m.q_data();
}

template <class Ops>
struct Core {
  using T = typename Ops::T;
  using Row = std::vector<std::pair<std::size_t, T>>;
  Ops ops;
  Field field;
  std::vector<Row> rows;
  std::vector<T> rhs;

  bool reduced = false;
  bool inconsistent = false;
  std::vector<Row> ech;
  std::vector<T> ech_rhs;
  std::vector<std::size_t> ech_piv;
  std::vector<long> piv_of_col;  // -1 if free

  Core(Ops o, Field f) : ops(o), field(f) {}

  void grow(std::size_t n) {
    rows.resize(n);
    rhs.resize(n, T(0));
  }

  static Row axpy(const Row& x, const T& c, const Row& y, const Ops& ops) {
    // x - c*y, both sorted
    Row out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        out.push_back(x[i++]);
      } else if (i == x.size() || y[j].first < x[i].first) {
        out.push_back({y[j].first, ops.neg(ops.mul(c, y[j].second))});
        ++j;
      } else {
        T v = ops.sub(x[i].second, ops.mul(c, y[j].second));
        if (!ops.zero(v)) out.push_back({x[i].first, v});
        ++i;
        ++j;
      }
    }
    return out;
  }

  void normalize(Row& r) {
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Row out;
    for (auto& e : r) {
      if (!out.empty() && out.back().first == e.first) out.back().second = ops.add(out.back().second, e.second);
      else out.push_back(e);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [&](const auto& e) { return ops.zero(e.second); }), out.end());
    r.swap(out);
  }

  T coef(const Row& r, std::size_t col) const {
    auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
    if (it != r.end() && it->first == col) return it->second;
    return T(0);
  }

  void eliminate(std::size_t ncols) {
    if (reduced) return;
    reduced = true;
    piv_of_col.assign(ncols, -1);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      Row r = rows[k];
      normalize(r);
      T b = rhs[k];
      Row orig = r;
      for (auto& [c, v] : orig) {
        long pr = piv_of_col[c];
        if (pr < 0) continue;
        T f = coef(r, c);
        if (ops.zero(f)) continue;
        r = axpy(r, f, ech[pr], ops);
        b = ops.sub(b, ops.mul(f, ech_rhs[pr]));
      }
      if (r.empty()) {
        if (!ops.zero(b)) inconsistent = true;
        continue;
      }
      std::size_t pc = r.front().first;
      T inv = ops.inv(r.front().second);
      for (auto& e : r) e.second = ops.mul(e.second, inv);
      b = ops.mul(b, inv);
      for (std::size_t q = 0; q < ech.size(); ++q) {
        T f = coef(ech[q], pc);
        if (ops.zero(f)) continue;
        ech[q] = axpy(ech[q], f, r, ops);
        ech_rhs[q] = ops.sub(ech_rhs[q], ops.mul(f, b));
      }
      piv_of_col[pc] = static_cast<long>(ech.size());
      ech.push_back(std::move(r));
      ech_rhs.push_back(b);
      ech_piv.push_back(pc);
    }
  }

  // x_pivot = rhs_scale*rhs - sum row[free] x_free
  std::vector<T> back_substitute(const std::vector<T>& free_vals, bool with_rhs) const {
    std::vector<T> x = free_vals;
    for (std::size_t q = 0; q < ech.size(); ++q) {
      T v = with_rhs ? ech_rhs[q] : T(0);
      for (auto& [c, a] : ech[q])
        if (c != ech_piv[q]) v = ops.sub(v, ops.mul(a, free_vals[c]));
      x[ech_piv[q]] = v;
    }
    return x;
  }
};

template <class T>
Scalar to_scalar(Field f, const T& v);
template <>
Scalar to_scalar<std::int64_t>(Field f, const std::int64_t& v) {
  return Scalar(f, static_cast<long>(v));
}
template <>
Scalar to_scalar<mpq_class>(Field f, const mpq_class& v) {
  return Scalar(f, v);
}

}  // namespace

struct LinearSystem::Impl {
  Field field;
  struct Block {
    std::size_t offset, rows, cols;
  };
  std::vector<Block> vars, eqs;
  std::size_t nvars = 0, neqs = 0;
  std::variant<Core<FpOps>, Core<QOps>> core;

  explicit Impl(Field f)
      : field(f),
        core(f.is_rational() ? std::variant<Core<FpOps>, Core<QOps>>(Core<QOps>(QOps{}, f))
                             : std::variant<Core<FpOps>, Core<QOps>>(Core<FpOps>(FpOps{f.characteristic()}, f))) {}

  template <class C>
  Assignment unpack(const C& c, const std::vector<typename std::decay_t<C>::T>& x) const {
    Assignment out;
    for (auto& v : vars) {
      Matrix m(field, v.rows, v.cols);
      for (std::size_t i = 0; i < v.rows; ++i)
        for (std::size_t j = 0; j < v.cols; ++j) {
          const auto& e = x[v.offset + i * v.cols + j];
          if (!c.ops.zero(e)) m.set(i, j, to_scalar(field, e));
        }
      out.push_back(std::move(m));
    }
    return out;
  }
};

LinearSystem::LinearSystem(Field f) : impl_(std::make_unique<Impl>(f)) {}
LinearSystem::~LinearSystem() = default;
LinearSystem::LinearSystem(LinearSystem&&) noexcept = default;
LinearSystem& LinearSystem::operator=(LinearSystem&&) noexcept = default;

std::size_t LinearSystem::add_unknown(std::size_t rows, std::size_t cols) {
  impl_->vars.push_back({impl_->nvars, rows, cols});
  impl_->nvars += rows * cols;
  return impl_->vars.size() - 1;
}

std::size_t LinearSystem::add_equation(std::size_t rows, std::size_t cols) {
  impl_->eqs.push_back({impl_->neqs, rows, cols});
  impl_->neqs += rows * cols;
  std::visit([&](auto& c) { c.grow(impl_->neqs); }, impl_->core);
  return impl_->eqs.size() - 1;
}

void LinearSystem::add_term(std::size_t eq, const Matrix& a, std::size_t var, const Matrix& b) {
  auto& E = impl_->eqs.at(eq);
  auto& V = impl_->vars.at(var);
  if (a.rows() != E.rows || a.cols() != V.rows || b.rows() != V.cols || b.cols() != E.cols)
    throw DimensionMismatch("linear system term has inconsistent shape");
  if (a.field() != impl_->field || b.field() != impl_->field) throw FieldMismatch("linear system term");
  std::visit(
      [&](auto& c) {
        using C = std::decay_t<decltype(c)>;
        using Ops = decltype(c.ops);
        const auto& A = raw<Ops>(a);
        const auto& B = raw<Ops>(b);
        for (std::size_t r = 0; r < a.rows(); ++r)
          for (std::size_t i = 0; i < a.cols(); ++i) {
            const auto& ari = A[r * a.cols() + i];
            if (c.ops.zero(ari)) continue;
            for (std::size_t j = 0; j < b.rows(); ++j)
              for (std::size_t s = 0; s < b.cols(); ++s) {
                const auto& bjs = B[j * b.cols() + s];
                if (c.ops.zero(bjs)) continue;
                c.rows[E.offset + r * E.cols + s].push_back(
                    {V.offset + i * V.cols + j, typename C::T(c.ops.mul(ari, bjs))});
              }
          }
        c.reduced = false;
        c.ech.clear();
        c.ech_rhs.clear();
        c.ech_piv.clear();
        c.inconsistent = false;
      },
      impl_->core);
}

void LinearSystem::add_term_left(std::size_t eq, const Matrix& a, std::size_t var) {
  add_term(eq, a, var, Matrix::identity(impl_->field, impl_->vars.at(var).cols));
}

void LinearSystem::add_term_right(std::size_t eq, std::size_t var, const Matrix& b) {
  add_term(eq, Matrix::identity(impl_->field, impl_->vars.at(var).rows), var, b);
}

void LinearSystem::add_constant(std::size_t eq, const Matrix& m) {
  auto& E = impl_->eqs.at(eq);
  if (m.rows() != E.rows || m.cols() != E.cols) throw DimensionMismatch("constant has wrong shape");
  std::visit(
      [&](auto& c) {
        using Ops = decltype(c.ops);
        const auto& M = raw<Ops>(m);
        for (std::size_t k = 0; k < M.size(); ++k) c.rhs[E.offset + k] = c.ops.sub(c.rhs[E.offset + k], M[k]);
        c.reduced = false;
        c.ech.clear();
        c.ech_rhs.clear();
        c.ech_piv.clear();
        c.inconsistent = false;
      },
      impl_->core);
}

std::size_t LinearSystem::num_unknowns() const { return impl_->nvars; }

std::size_t LinearSystem::rank() const {
  return std::visit(
      [&](auto& c) {
        c.eliminate(impl_->nvars);
        return c.ech.size();
      },
      const_cast<Impl&>(*impl_).core);
}

bool LinearSystem::consistent() const {
  return std::visit(
      [&](auto& c) {
        c.eliminate(impl_->nvars);
        return !c.inconsistent;
      },
      const_cast<Impl&>(*impl_).core);
}

std::vector<LinearSystem::Assignment> LinearSystem::kernel_basis() const {
  return std::visit(
      [&](auto& c) {
        using T = typename std::decay_t<decltype(c)>::T;
        c.eliminate(impl_->nvars);
        std::vector<Assignment> out;
        for (std::size_t f = 0; f < impl_->nvars; ++f) {
          if (c.piv_of_col[f] >= 0) continue;
          std::vector<T> free(impl_->nvars, T(0));
          free[f] = T(1);
          out.push_back(impl_->unpack(c, c.back_substitute(free, false)));
        }
        return out;
      },
      const_cast<Impl&>(*impl_).core);
}

LinearSystem::Assignment LinearSystem::random_kernel_element(std::mt19937_64& rng) const {
  return std::visit(
      [&](auto& c) {
        using T = typename std::decay_t<decltype(c)>::T;
        c.eliminate(impl_->nvars);
        std::vector<T> free(impl_->nvars, T(0));
        for (std::size_t f = 0; f < impl_->nvars; ++f) {
          if (c.piv_of_col[f] >= 0) continue;
          if (impl_->field.is_rational()) free[f] = T(static_cast<long>(rng() % 2001) - 1000);
          else free[f] = T(static_cast<long>(rng() % static_cast<std::uint64_t>(impl_->field.characteristic())));
        }
        return impl_->unpack(c, c.back_substitute(free, false));
      },
      const_cast<Impl&>(*impl_).core);
}

std::optional<LinearSystem::Assignment> LinearSystem::solve() const {
  return std::visit(
      [&](auto& c) -> std::optional<Assignment> {
        using T = typename std::decay_t<decltype(c)>::T;
        c.eliminate(impl_->nvars);
        if (c.inconsistent) return std::nullopt;
        std::vector<T> free(impl_->nvars, T(0));
        return impl_->unpack(c, c.back_substitute(free, true));
      },
      const_cast<Impl&>(*impl_).core);
}

std::size_t total_rank(const LinearSystem::Assignment& a) {
  std::size_t s = 0;
  for (auto& m : a) s += m.rank();
  return s;
}

LinearSystem::Assignment combine(const std::vector<LinearSystem::Assignment>& basis, const std::vector<Scalar>& c) {
  LinearSystem::Assignment a = basis[0];
  for (auto& m : a) m = m.scaled(c[0]);
  for (std::size_t j = 1; j < basis.size(); ++j)
    for (std::size_t v = 0; v < a.size(); ++v)
      if (!c[j].is_zero()) a[v] = a[v] + basis[j][v].scaled(c[j]);
  return a;
}

std::optional<LinearSystem::Assignment> full_rank_point(const std::vector<LinearSystem::Assignment>& basis, std::size_t target, Field f,
                                          std::uint64_t seed) {
  if (basis.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  auto draw = [&] {
    std::vector<Scalar> c;
    for (std::size_t j = 0; j < basis.size(); ++j)
      c.push_back(f.is_rational() ? Scalar(f, static_cast<long>(rng() % 2001) - 1000)
                                  : Scalar(f, static_cast<long>(rng() % static_cast<std::uint64_t>(f.characteristic()))));
    return c;
  };
  for (int t = 0; t < 8; ++t) {
    LinearSystem::Assignment a = combine(basis, draw());
    if (total_rank(a) == target) return a;
  }
  if (f.is_rational() || f.characteristic() > 50) return std::nullopt;
  const long p = static_cast<long>(f.characteristic());
  for (int restart = 0; restart < 12; ++restart) {
    std::vector<Scalar> c = draw();
    std::size_t best = total_rank(combine(basis, c));
    bool improved = true;
    while (improved && best < target) {
      improved = false;
      for (std::size_t j = 0; j < basis.size() && best < target; ++j) {
        Scalar keep = c[j];
        for (long v = 0; v < p; ++v) {
          c[j] = Scalar(f, v);
          std::size_t s = total_rank(combine(basis, c));
          if (s > best) {
            best = s;
            keep = c[j];
            improved = true;
          }
        }
        c[j] = keep;
      }
    }
    if (best == target) return combine(basis, c);
  }
  return std::nullopt;
}

}  // namespace ssq
