#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ssq/bigraded.hpp"

namespace ssq {

// Nonzero components of one page and the nonzero blocks of its differential.
struct Chart {
  int r = 0;
  std::vector<std::pair<Bidegree, std::size_t>> nodes;
  std::vector<std::pair<Bidegree, Bidegree>> arrows;
};
Chart chart(const RComplex& page);

// Rows are n (descending), columns p (ascending); arrows listed below the grid.
std::string render_text(const Chart& c);
std::string render_svg(const Chart& c);

}  // namespace ssq
