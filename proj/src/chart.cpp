#include "ssq/chart.hpp"

#include <algorithm>
#include <sstream>

namespace ssq {

Chart chart(const RComplex& page) {
  Chart c;
  c.r = page.r();
  for (auto& [b, d] : page.module().dims()) c.nodes.push_back({b, d});
  for (auto& [b, m] : page.d().blocks())
    if (!m.is_zero()) c.arrows.push_back({b, b + diff_degree(page.r())});
  return c;
}

namespace {

struct Box {
  int p0 = 0, p1 = -1, n0 = 0, n1 = -1;
};

Box bounds(const Chart& c) {
  Box b;
  if (c.nodes.empty()) return b;
  b.p0 = b.p1 = c.nodes.front().first.p;
  b.n0 = b.n1 = c.nodes.front().first.n;
  for (auto& [d, dim] : c.nodes) {
    b.p0 = std::min(b.p0, d.p);
    b.p1 = std::max(b.p1, d.p);
    b.n0 = std::min(b.n0, d.n);
    b.n1 = std::max(b.n1, d.n);
  }
  return b;
}

std::size_t dim_at(const Chart& c, Bidegree b) {
  for (auto& [d, dim] : c.nodes)
    if (d == b) return dim;
  return 0;
}

std::string pad(const std::string& s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; }

}  // namespace

std::string render_text(const Chart& c) {
  std::ostringstream out;
  out << "page " << c.r << "\n";
  const Box b = bounds(c);
  if (c.nodes.empty()) {
    out << "(empty)\n";
    return out.str();
  }
  const std::size_t w = 4;
  for (int n = b.n1; n >= b.n0; --n) {
    out << pad(std::to_string(n), w) << " |";
    for (int p = b.p0; p <= b.p1; ++p) {
      const std::size_t d = dim_at(c, {p, n});
      out << pad(d ? std::to_string(d) : ".", w);
    }
    out << "\n";
  }
  out << pad("", w) << " +" << std::string(w * (b.p1 - b.p0 + 1), '-') << "\n" << pad("", w) << "  ";
  for (int p = b.p0; p <= b.p1; ++p) out << pad(std::to_string(p), w);
  out << "\n";
  for (auto& [s, t] : c.arrows) out << "d_" << c.r << ": " << s.str() << " -> " << t.str() << "\n";
  return out.str();
}

std::string render_svg(const Chart& c) {
  const Box b = bounds(c);
  const int cell = 48, margin = 32;
  const int cols = b.p1 - b.p0 + 1, rows = b.n1 - b.n0 + 1;
  const int width = 2 * margin + cell * std::max(cols, 0), height = 2 * margin + cell * std::max(rows, 0);
  auto x = [&](int p) { return margin + cell * (p - b.p0) + cell / 2; };
  auto y = [&](int n) { return margin + cell * (b.n1 - n) + cell / 2; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
         "<path d=\"M0,0 L8,4 L0,8 z\"/></marker></defs>\n";
  for (int p = b.p0; p <= b.p1; ++p)
    out << "<text x=\"" << x(p) << "\" y=\"" << height - margin / 3 << "\" font-size=\"10\" text-anchor=\"middle\">" << p
        << "</text>\n";
  for (int n = b.n0; n <= b.n1; ++n)
    out << "<text x=\"" << margin / 2 << "\" y=\"" << y(n) + 3 << "\" font-size=\"10\" text-anchor=\"middle\">" << n
        << "</text>\n";
  for (auto& [s, t] : c.arrows)
    out << "<line x1=\"" << x(s.p) << "\" y1=\"" << y(s.n) << "\" x2=\"" << x(t.p) << "\" y2=\"" << y(t.n)
        << "\" stroke=\"black\" marker-end=\"url(#head)\"/>\n";
  for (auto& [d, dim] : c.nodes)
    out << "<circle cx=\"" << x(d.p) << "\" cy=\"" << y(d.n) << "\" r=\"10\" fill=\"white\" stroke=\"black\"/>"
        << "<text x=\"" << x(d.p) << "\" y=\"" << y(d.n) + 4 << "\" font-size=\"11\" text-anchor=\"middle\">" << dim
        << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace ssq
