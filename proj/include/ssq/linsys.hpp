#pragma once

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "ssq/exactla.hpp"

namespace ssq {

// Linear equations whose unknowns are matrices X_v and whose equations are
// matrix identities  sum_k A_k X_{v_k} B_k + C = 0.  Solved by sparse
// elimination; used for hom spaces and lifting problems.
class LinearSystem {
 public:
  explicit LinearSystem(Field f);
  ~LinearSystem();
  LinearSystem(LinearSystem&&) noexcept;
  LinearSystem& operator=(LinearSystem&&) noexcept;

  std::size_t add_unknown(std::size_t rows, std::size_t cols);
  std::size_t add_equation(std::size_t rows, std::size_t cols);
  void add_term(std::size_t eq, const Matrix& a, std::size_t var, const Matrix& b);
  void add_term_left(std::size_t eq, const Matrix& a, std::size_t var);
  void add_term_right(std::size_t eq, std::size_t var, const Matrix& b);
  void add_constant(std::size_t eq, const Matrix& c);

  std::size_t num_unknowns() const;  // scalar unknowns
  std::size_t rank() const;
  std::size_t kernel_dim() const { return num_unknowns() - rank(); }
  bool consistent() const;

  using Assignment = std::vector<Matrix>;  // one matrix per unknown
  std::vector<Assignment> kernel_basis() const;
  Assignment random_kernel_element(std::mt19937_64& rng) const;
  std::optional<Assignment> solve() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::size_t total_rank(const LinearSystem::Assignment& a);
// sum_j c_j basis_j
LinearSystem::Assignment combine(const std::vector<LinearSystem::Assignment>& basis, const std::vector<Scalar>& c);
// A combination of the basis whose blocks have total rank `target`, found by
// random points, plus a coordinate search over small prime fields.  nullopt
// does not prove that none exists.
std::optional<LinearSystem::Assignment> full_rank_point(const std::vector<LinearSystem::Assignment>& basis,
                                                        std::size_t target, Field f, std::uint64_t seed);

}  // namespace ssq
