#include "ssq/io.hpp"

#include <fstream>
#include <sstream>

namespace ssq {

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(at(path, key), "missing");
  return *it;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0))
    throw SchemaError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

Bidegree bidegree(const Json& j, const std::string& path) {
  return {integer(member(j, "p", path), at(path, "p")), integer(member(j, "n", path), at(path, "n"))};
}

Json module_json(const BigradedModule& m) {
  Json out = Json::array();
  for (auto& [b, d] : m.dims()) out.push_back({{"p", b.p}, {"n", b.n}, {"dim", d}});
  return out;
}

BigradedModule parse_module(const Json& j, Field f, const std::string& path) {
  BigradedModule m(f);
  const Json& a = array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string pi = at(path, i);
    Bidegree b = bidegree(a[i], pi);
    if (m.dim(b) > 0) throw SchemaError(pi, "bidegree " + b.str() + " listed twice");
    m.set_dim(b, count(member(a[i], "dim", pi), at(pi, "dim")));
  }
  return m;
}

Json map_json(const BigradedMap& f) {
  Json out = Json::array();
  for (auto& [b, m] : f.blocks()) out.push_back({{"p", b.p}, {"n", b.n}, {"matrix", matrix_json(m)}});
  return out;
}

BigradedMap parse_map(const Json& j, const BigradedModule& s, const BigradedModule& t, Bidegree shift,
                      const std::string& path) {
  BigradedMap f(s, t, shift);
  const Json& a = array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string pi = at(path, i);
    Bidegree b = bidegree(a[i], pi);
    if (s.dim(b) == 0 || t.dim(b + shift) == 0) throw SchemaError(pi, "block at " + b.str() + " between zero spaces");
    f.set_block(b, parse_matrix(member(a[i], "matrix", pi), s.field(), t.dim(b + shift), s.dim(b), at(pi, "matrix")));
  }
  return f;
}

Json page_json(const RComplex& c) {
  return {{"r", c.r()}, {"components", module_json(c.module())}, {"d", map_json(c.d())}};
}

RComplex parse_page(const Json& j, Field f, const std::string& path) {
  const int r = integer(member(j, "r", path), at(path, "r"));
  BigradedModule m = parse_module(member(j, "components", path), f, at(path, "components"));
  BigradedMap d = j.contains("d") ? parse_map(j["d"], m, m, diff_degree(r), at(path, "d"))
                                  : BigradedMap(m, m, diff_degree(r));
  return RComplex(r, m, d);
}

std::vector<RComplex> parse_pages(const Json& j, Field f, const std::string& path) {
  const Json& a = array(member(j, "pages", path), at(path, "pages"));
  if (a.empty()) throw SchemaError(at(path, "pages"), "at least page 0 is required");
  std::vector<RComplex> pages;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pages.push_back(parse_page(a[i], f, at(at(path, "pages"), i)));
    if (pages.back().r() != static_cast<int>(i)) throw SchemaError(at(at(path, "pages"), i), "pages must be listed as r = 0, 1, ...");
  }
  if (j.contains("horizon") && integer(j["horizon"], at(path, "horizon")) != static_cast<int>(a.size()) - 1)
    throw SchemaError(at(path, "horizon"), "does not match the number of pages");
  return pages;
}

// [{"page": i, "blocks": [...]}] for i = first, first + 1, ...
Json indexed_maps(const std::vector<BigradedMap>& maps, int first) {
  Json out = Json::array();
  for (std::size_t i = 0; i < maps.size(); ++i)
    out.push_back({{"page", first + static_cast<int>(i)}, {"blocks", map_json(maps[i])}});
  return out;
}

const Json& indexed(const Json& a, std::size_t i, int first, const std::string& path) {
  const std::string pi = at(path, i);
  if (integer(member(a[i], "page", pi), at(pi, "page")) != first + static_cast<int>(i))
    throw SchemaError(at(pi, "page"), "expected page " + std::to_string(first + static_cast<int>(i)));
  return member(a[i], "blocks", pi);
}

std::string tail_json(Tail t) {
  switch (t) {
    case Tail::Zero: return "zero";
    case Tail::Stable: return "stable";
    default: return "unspecified";
  }
}

Json book_tail_json(const BookTail& t) {
  switch (t.kind) {
    case BookTailKind::Zero: return "zero";
    case BookTailKind::Cone: return Json{{"cone", t.t}};
    default: return "unspecified";
  }
}

Json ess_payload(const ExtSpecSeq& x) {
  Json pages = Json::array(), phi = Json::array();
  for (int i = 0; i <= x.horizon(); ++i) pages.push_back(page_json(x.stored_page(i)));
  for (int i = 1; i <= x.horizon(); ++i) phi.push_back({{"page", i}, {"blocks", map_json(x.phi(i))}});
  return {{"horizon", x.horizon()}, {"pages", pages}, {"phi", phi}, {"tail", tail_json(x.tail())}};
}

ExtSpecSeq parse_ess(const Json& j, Field f, const std::string& path) {
  std::vector<RComplex> pages = parse_pages(j, f, path);
  std::vector<BigradedMap> phi;
  const Json& a = array(member(j, "phi", path), at(path, "phi"));
  if (a.size() + 1 != pages.size()) throw SchemaError(at(path, "phi"), "need one entry per page above 0");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const BigradedModule h = homology(pages[i]).module;
    phi.push_back(parse_map(indexed(a, i, 1, at(path, "phi")), pages[i + 1].module(), h, {0, 0},
                            at(at(at(path, "phi"), i), "blocks")));
  }
  const Json& t = member(j, "tail", path);
  Tail tail;
  if (t == "zero") tail = Tail::Zero;
  else if (t == "stable") tail = Tail::Stable;
  else if (t == "unspecified") tail = Tail::Unspecified;
  else throw SchemaError(at(path, "tail"), "expected zero, stable or unspecified");
  return ExtSpecSeq(pages, phi, tail);
}

Json book_payload(const WitnessBook& l) {
  Json pages = Json::array();
  std::vector<BigradedMap> w, s;
  for (int i = 0; i <= l.horizon(); ++i) pages.push_back(page_json(l.page(i)));
  for (int i = 1; i <= l.horizon(); ++i) w.push_back(l.w(i));
  for (int i = 0; i < l.horizon(); ++i) s.push_back(l.s(i));
  return {{"horizon", l.horizon()}, {"pages", pages}, {"w", indexed_maps(w, 1)}, {"s", indexed_maps(s, 0)},
          {"tail", book_tail_json(l.tail())}};
}

WitnessBook parse_book(const Json& j, Field f, const std::string& path) {
  std::vector<RComplex> pages = parse_pages(j, f, path);
  const std::size_t R = pages.size() - 1;
  const Json& wa = array(member(j, "w", path), at(path, "w"));
  const Json& sa = array(member(j, "s", path), at(path, "s"));
  if (wa.size() != R) throw SchemaError(at(path, "w"), "need w_1 .. w_horizon");
  if (sa.size() != R) throw SchemaError(at(path, "s"), "need s_0 .. s_{horizon-1}");
  std::vector<BigradedMap> w, s;
  for (std::size_t i = 0; i < R; ++i) {
    w.push_back(parse_map(indexed(wa, i, 1, at(path, "w")), pages[i + 1].module(),
                          pages[i].module(), {0, 0}, at(at(at(path, "w"), i), "blocks")));
    s.push_back(parse_map(indexed(sa, i, 0, at(path, "s")), pages[i].module(), pages[i + 1].module(),
                          {1, 1}, at(at(at(path, "s"), i), "blocks")));
  }
  const Json& t = member(j, "tail", path);
  BookTail tail;
  if (t == "zero") tail = BookTail::zero();
  else if (t == "unspecified") tail = BookTail::unspecified();
  else if (t.is_object() && t.contains("cone")) tail = BookTail::cone(integer(t["cone"], at(at(path, "tail"), "cone")));
  else throw SchemaError(at(path, "tail"), "expected zero, unspecified or {\"cone\": t}");
  return WitnessBook(pages, w, s, tail);
}

Json filtered_payload(const FilteredComplex& c) {
  Json deg = Json::array();
  for (std::size_t i = 0; i < c.degrees().size(); ++i) {
    const FilteredComplex::Degree& g = c.degrees()[i];
    Json steps = Json::array();
    for (const Subspace& s : g.steps) steps.push_back({{"dim", s.dim()}, {"basis", matrix_json(s.basis())}});
    deg.push_back({{"k", c.kmin() + static_cast<int>(i)}, {"dim", g.dim}, {"d", matrix_json(g.d)}, {"lo", g.lo},
                   {"steps", steps}});
  }
  return {{"kmin", c.kmin()}, {"degrees", deg}};
}

FilteredComplex parse_filtered(const Json& j, Field f, const std::string& path) {
  const int kmin = integer(member(j, "kmin", path), at(path, "kmin"));
  const Json& a = array(member(j, "degrees", path), at(path, "degrees"));
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string pi = at(at(path, "degrees"), i);
    if (integer(member(a[i], "k", pi), at(pi, "k")) != kmin + static_cast<int>(i))
      throw SchemaError(at(pi, "k"), "degrees must be consecutive from kmin");
    dims.push_back(count(member(a[i], "dim", pi), at(pi, "dim")));
  }
  std::vector<FilteredComplex::Degree> deg;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string pi = at(at(path, "degrees"), i);
    FilteredComplex::Degree g;
    g.dim = dims[i];
    const std::size_t next = i + 1 < a.size() ? dims[i + 1] : 0;
    g.d = parse_matrix(member(a[i], "d", pi), f, next, g.dim, at(pi, "d"));
    g.lo = integer(member(a[i], "lo", pi), at(pi, "lo"));
    const Json& st = array(member(a[i], "steps", pi), at(pi, "steps"));
    for (std::size_t s = 0; s < st.size(); ++s) {
      const std::string ps = at(at(pi, "steps"), s);
      const std::size_t sd = count(member(st[s], "dim", ps), at(ps, "dim"));
      Matrix basis = parse_matrix(member(st[s], "basis", ps), f, g.dim, sd, at(ps, "basis"));
      Subspace sub = Subspace::span(basis);
      if (sub.dim() != sd) throw SchemaError(at(ps, "basis"), "columns are not independent");
      g.steps.push_back(sub);
    }
    deg.push_back(g);
  }
  try {
    return FilteredComplex(f, kmin, deg);
  } catch (const ValidationError& e) {
    throw SchemaError(path, e.what());
  }
}

Json components_json(const std::vector<BigradedMap>& comps) { return indexed_maps(comps, 0); }

template <class Src, class F>
std::vector<BigradedMap> parse_components(const Json& j, const Src& src, const Src& tgt, F page_module,
                                          const std::string& path) {
  const Json& a = array(member(j, "components", path), at(path, "components"));
  std::vector<BigradedMap> comps;
  for (std::size_t i = 0; i < a.size(); ++i)
    comps.push_back(parse_map(indexed(a, i, 0, at(path, "components")), page_module(src, static_cast<int>(i)),
                              page_module(tgt, static_cast<int>(i)), {0, 0},
                              at(at(at(path, "components"), i), "blocks")));
  return comps;
}

}  // namespace

Json field_json(Field f) {
  if (f.is_rational()) return {{"kind", "Q"}};
  return {{"kind", "Fp"}, {"p", f.characteristic()}};
}

Field parse_field(const Json& j, const std::string& path) {
  const Json& k = member(j, "kind", path);
  if (k == "Q") return Field::rational();
  if (k != "Fp") throw SchemaError(at(path, "kind"), "expected Q or Fp");
  const Json& p = member(j, "p", path);
  if (!p.is_number_integer()) throw SchemaError(at(path, "p"), "expected an integer");
  try {
    return Field::prime(p.get<std::int64_t>());
  } catch (const Error& e) {
    throw SchemaError(at(path, "p"), e.what());
  }
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

Matrix parse_matrix(const Json& j, Field f, std::size_t rows, std::size_t cols, const std::string& path) {
  const std::string shape = std::to_string(rows) + "x" + std::to_string(cols);
  if (!j.is_array() || j.size() != rows) throw SchemaError(path, "expected a " + shape + " matrix");
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError(at(path, i), "expected a row of length " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = j[i][c];
      const std::string pe = at(at(path, i), c);
      if (!e.is_string()) throw SchemaError(pe, "scalars are decimal strings");
      try {
        m.set(i, c, Scalar::parse(f, e.get<std::string>()));
      } catch (const Error& ex) {
        throw SchemaError(pe, ex.what());
      }
    }
  }
  return m;
}

std::string kind_of(const Object& o) {
  static const char* names[] = {"rcomplex", "espse", "witness_book", "filtered", "morphism", "morphism"};
  return names[o.index()];
}

Field field_of(const Object& o) {
  return std::visit(
      [](const auto& x) -> Field {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ESSMap> || std::is_same_v<T, WBMap>) return x.source().field();
        else return x.field();
      },
      o);
}

Json serialize(const Object& o) {
  Json out = std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RComplex>) return page_json(x);
        else if constexpr (std::is_same_v<T, ExtSpecSeq>) return ess_payload(x);
        else if constexpr (std::is_same_v<T, WitnessBook>) return book_payload(x);
        else if constexpr (std::is_same_v<T, FilteredComplex>) return filtered_payload(x);
        else if constexpr (std::is_same_v<T, ESSMap>)
          return {{"category", "espse"}, {"source", ess_payload(x.source())}, {"target", ess_payload(x.target())},
                  {"components", components_json(x.components())}};
        else
          return {{"category", "witness_book"}, {"source", book_payload(x.source())},
                  {"target", book_payload(x.target())}, {"components", components_json(x.components())}};
      },
      o);
  out["field"] = field_json(field_of(o));
  out["kind"] = kind_of(o);
  return out;
}

Object parse(const Json& j) {
  const std::string root = "$";
  const Field f = parse_field(member(j, "field", root), "$.field");
  const Json& k = member(j, "kind", root);
  try {
    if (k == "rcomplex") return parse_page(j, f, root);
    if (k == "espse") return parse_ess(j, f, root);
    if (k == "witness_book") return parse_book(j, f, root);
    if (k == "filtered") return parse_filtered(j, f, root);
    if (k == "morphism") {
      const Json& cat = member(j, "category", root);
      if (cat == "espse") {
        ExtSpecSeq s = parse_ess(member(j, "source", root), f, "$.source");
        ExtSpecSeq t = parse_ess(member(j, "target", root), f, "$.target");
        auto mod = [](const ExtSpecSeq& x, int i) { return x.page(i).module(); };
        return ESSMap(s, t, parse_components(j, s, t, mod, root));
      }
      if (cat == "witness_book") {
        WitnessBook s = parse_book(member(j, "source", root), f, "$.source");
        WitnessBook t = parse_book(member(j, "target", root), f, "$.target");
        auto mod = [](const WitnessBook& x, int i) { return x.page(i).module(); };
        return WBMap(s, t, parse_components(j, s, t, mod, root));
      }
      throw SchemaError("$.category", "expected espse or witness_book");
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(root, e.what());
  }
  throw SchemaError("$.kind", "expected rcomplex, espse, witness_book, filtered or morphism");
}

Object read_object(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", std::string("not JSON: ") + e.what());
  }
  return parse(j);
}

void write_object(const std::string& path, const Object& o) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << serialize(o).dump(1) << "\n";
}

}  // namespace ssq
