#include "ssq/dcat.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ssq {

std::string IndexObject::str() const {
  return "(" + std::to_string(r) + "," + std::to_string(p) + "," + std::to_string(n) + ")";
}

IndexObject Letter::source() const {
  switch (gen) {
    case Gen::Omega: return {index - 1, p, n};
    case Gen::Delta: return {index, p - index, n - index + 1};
    case Gen::Sigma: return {index + 1, p + 1, n + 1};
  }
  return {};
}

IndexObject Letter::target() const { return {index, p, n}; }

std::string Letter::str() const {
  const char c = gen == Gen::Omega ? 'w' : gen == Gen::Delta ? 'd' : 's';
  return std::string(1, c) + "_" + std::to_string(index) + "^{" + std::to_string(p) + "," + std::to_string(n) + "}";
}

Letter omega(int r_plus_1, int p, int n) {
  if (r_plus_1 < 1) throw RangeError("w_" + std::to_string(r_plus_1) + " does not exist");
  return {Gen::Omega, r_plus_1, p, n};
}
Letter delta(int r, int p, int n) {
  if (r < 0) throw RangeError("d_" + std::to_string(r) + " does not exist");
  return {Gen::Delta, r, p, n};
}
Letter sigma(int r, int p, int n) {
  if (r < 0) throw RangeError("s_" + std::to_string(r) + " does not exist");
  return {Gen::Sigma, r, p, n};
}

std::string MorphismWord::str() const {
  std::string out = scalar.str() + " ";
  if (letters.empty()) return out + "id" + source.str();
  for (std::size_t i = 0; i < letters.size(); ++i) out += (i ? " . " : "") + letters[i].str();
  return out;
}

MorphismWord make_word(std::vector<Letter> letters, Scalar scalar) {
  if (letters.empty()) throw CompositionError("empty word needs an object; use identity_word");
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i].source() != letters[i + 1].target())
      throw CompositionError("cannot compose " + letters[i].str() + " with " + letters[i + 1].str() + ": " +
                             letters[i + 1].target().str() + " != " + letters[i].source().str());
  IndexObject s = letters.back().source(), t = letters.front().target();
  return {s, t, std::move(letters), std::move(scalar)};
}

MorphismWord identity_word(IndexObject x, Scalar scalar) { return {x, x, {}, std::move(scalar)}; }

// ---- parsing

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip();
    return i >= s.size();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(i) + " in \"" + s + "\"");
  }
  void expect(char c) {
    skip();
    if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'");
    ++i;
  }
  int integer() {
    skip();
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    std::size_t digits = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == digits) fail("expected an integer");
    try {
      return std::stoi(s.substr(start, i - start));
    } catch (const std::out_of_range&) {
      fail("integer out of range");
    }
  }
};

struct RawGen {
  char c;
  int index;
  std::optional<std::pair<int, int>> deg;
};

bool at_generator(const std::string& s, std::size_t i) {
  return i + 1 < s.size() && (s[i] == 'w' || s[i] == 'd' || s[i] == 's') && s[i + 1] == '_';
}

}  // namespace

MorphismWord parse_word(const std::string& text, Field f) {
  Cursor cur{text};
  Scalar scalar(f, 1L);
  cur.skip();
  if (cur.i < text.size() && !at_generator(text, cur.i)) {
    std::size_t start = cur.i;
    while (cur.i < text.size() && !std::isspace(static_cast<unsigned char>(text[cur.i])) && text[cur.i] != '*') ++cur.i;
    std::string tok = text.substr(start, cur.i - start);
    try {
      scalar = Scalar::parse(f, tok);
    } catch (const Error& e) {
      cur.i = start;
      cur.fail("bad scalar \"" + tok + "\" (" + e.what() + ")");
    }
    cur.skip();
    if (cur.i < text.size() && text[cur.i] == '*') ++cur.i;
  }
  std::vector<RawGen> gens;
  for (;;) {
    cur.skip();
    if (!at_generator(text, cur.i)) cur.fail("expected a generator w_k, d_k or s_k");
    RawGen g{text[cur.i], 0, std::nullopt};
    cur.i += 2;
    if (cur.i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[cur.i]))) cur.fail("expected a page index");
    g.index = cur.integer();
    cur.skip();
    if (cur.i < text.size() && text[cur.i] == '^') {
      ++cur.i;
      cur.expect('{');
      int p = cur.integer();
      cur.expect(',');
      int n = cur.integer();
      cur.expect('}');
      g.deg = {p, n};
    }
    if (g.index < (g.c == 'w' ? 1 : 0)) cur.fail(std::string(1, g.c) + "_" + std::to_string(g.index) + " does not exist");
    gens.push_back(g);
    if (cur.done()) break;
    cur.expect('.');
  }

  // Generator types are translations in (p,n), so one decorated generator
  // fixes all the others.
  auto make = [](const RawGen& g, int p, int n) {
    return g.c == 'w' ? omega(g.index, p, n) : g.c == 'd' ? delta(g.index, p, n) : sigma(g.index, p, n);
  };
  const std::size_t k = gens.size();
  std::size_t anchor = k - 1;
  for (std::size_t i = 0; i < k; ++i)
    if (gens[i].deg) {
      anchor = i;
      break;
    }
  std::vector<Letter> letters(k, Letter{Gen::Omega, 1, 0, 0});
  auto d0 = gens[anchor].deg.value_or(std::pair<int, int>{0, 0});
  letters[anchor] = make(gens[anchor], d0.first, d0.second);
  auto place = [&](std::size_t i, IndexObject want_target, bool match_target) {
    // find (p,n) making the required end of letter i equal want_target
    Letter probe = make(gens[i], 0, 0);
    IndexObject end = match_target ? probe.target() : probe.source();
    if (end.r != want_target.r)
      throw CompositionError("page mismatch next to " + std::string(1, gens[i].c) + "_" + std::to_string(gens[i].index) +
                             ": needs page " + std::to_string(want_target.r) + ", has " + std::to_string(end.r));
    int p = want_target.p - end.p, n = want_target.n - end.n;
    if (gens[i].deg && *gens[i].deg != std::pair<int, int>{p, n}) {
      Letter given = make(gens[i], gens[i].deg->first, gens[i].deg->second);
      throw CompositionError("cannot compose at " + given.str() + ": expected ^{" + std::to_string(p) + "," +
                             std::to_string(n) + "}");
    }
    letters[i] = make(gens[i], p, n);
  };
  for (std::size_t i = anchor; i-- > 0;) place(i, letters[i + 1].target(), false);
  for (std::size_t i = anchor + 1; i < k; ++i) place(i, letters[i - 1].source(), true);
  return make_word(std::move(letters), scalar);
}

// ---- normal forms

std::string kind_name(NormalKind k) {
  switch (k) {
    case NormalKind::Zero: return "zero";
    case NormalKind::Identity: return "identity";
    case NormalKind::OmegaPower: return "omega^i";
    case NormalKind::SigmaPower: return "sigma^j";
    case NormalKind::Delta: return "delta";
    case NormalKind::DeltaOmega: return "delta omega^i";
    case NormalKind::SigmaDelta: return "sigma^j delta";
  }
  return "?";
}

std::string NormalMorphism::str() const {
  std::ostringstream os;
  os << source.str() << " -> " << target.str() << ": ";
  if (kind == NormalKind::Zero) return os.str() + "0";
  if (kind == NormalKind::Identity) return os.str() + scalar.str() + " id";
  os << scalar.str();
  for (auto& l : letters_of(*this)) os << " " << l.str();
  return os.str();
}

bool NormalMorphism::operator==(const NormalMorphism& o) const {
  if (source != o.source || target != o.target || kind != o.kind) return false;
  return kind == NormalKind::Zero || (power == o.power && scalar == o.scalar);
}

std::vector<Letter> letters_of(const NormalMorphism& m) {
  const IndexObject s = m.source, t = m.target;
  std::vector<Letter> out;
  switch (m.kind) {
    case NormalKind::Zero:
    case NormalKind::Identity: break;
    case NormalKind::OmegaPower:
      for (int k = 0; k < m.power; ++k) out.push_back(omega(t.r - k, t.p, t.n));
      break;
    case NormalKind::SigmaPower:
      for (int k = 0; k < m.power; ++k) out.push_back(sigma(t.r + k, t.p + k, t.n + k));
      break;
    case NormalKind::Delta: out.push_back(delta(t.r, t.p, t.n)); break;
    case NormalKind::DeltaOmega:
      out.push_back(delta(t.r, t.p, t.n));
      for (int k = 0; k < m.power; ++k) out.push_back(omega(t.r - k, s.p, s.n));
      break;
    case NormalKind::SigmaDelta:
      for (int k = 0; k < m.power; ++k) out.push_back(sigma(t.r + k, t.p + k, t.n + k));
      out.push_back(delta(t.r + m.power, t.p + m.power, t.n + m.power));
      break;
  }
  return out;
}

std::vector<Redex> redexes(const std::vector<Letter>& w) {
  static const std::set<std::pair<Gen, Gen>> zero_pairs = {{Gen::Sigma, Gen::Omega},
                                                           {Gen::Omega, Gen::Sigma},
                                                           {Gen::Delta, Gen::Delta},
                                                           {Gen::Delta, Gen::Sigma},
                                                           {Gen::Omega, Gen::Delta}};
  std::vector<Redex> out;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (zero_pairs.count({w[i].gen, w[i + 1].gen})) out.push_back({i, true});
    if (i + 2 < w.size() && w[i].gen == Gen::Sigma && w[i + 1].gen == Gen::Delta && w[i + 2].gen == Gen::Omega)
      out.push_back({i, false});
  }
  return out;
}

std::optional<std::vector<Letter>> rewrite(const std::vector<Letter>& w, const Redex& at) {
  if (at.to_zero) return std::nullopt;
  std::vector<Letter> out(w.begin(), w.begin() + static_cast<long>(at.pos));
  const Letter& s = w[at.pos];
  out.push_back(delta(s.index, s.p, s.n));
  out.insert(out.end(), w.begin() + static_cast<long>(at.pos) + 3, w.end());
  return out;
}

namespace {

NormalMorphism zero_morphism(IndexObject s, IndexObject t, const Scalar& like) {
  return {NormalKind::Zero, s, t, 0, Scalar(like.field(), 0L)};
}

// Reads off the normal form of an irreducible word.
NormalMorphism classify(const std::vector<Letter>& w, IndexObject s, IndexObject t, const Scalar& c) {
  if (c.is_zero()) return zero_morphism(s, t, c);
  if (w.empty()) return {NormalKind::Identity, s, t, 0, c};
  int nw = 0, ns = 0, nd = 0;
  for (auto& l : w) (l.gen == Gen::Omega ? nw : l.gen == Gen::Sigma ? ns : nd)++;
  NormalMorphism m{NormalKind::Zero, s, t, 0, c};
  if (nd == 0 && ns == 0) m = {NormalKind::OmegaPower, s, t, nw, c};
  else if (nd == 0 && nw == 0) m = {NormalKind::SigmaPower, s, t, ns, c};
  else if (nd == 1 && nw == 0 && ns == 0) m = {NormalKind::Delta, s, t, 0, c};
  else if (nd == 1 && ns == 0) m = {NormalKind::DeltaOmega, s, t, nw, c};
  else if (nd == 1 && nw == 0) m = {NormalKind::SigmaDelta, s, t, ns, c};
  else throw Error("irreducible word outside the normal forms: rewriting is incomplete");
  if (letters_of(m) != w) throw Error("irreducible word is not in canonical order");
  return m;
}

template <class Pick>
NormalMorphism run(const MorphismWord& word, Pick pick) {
  std::vector<Letter> w = word.letters;
  for (;;) {
    auto rs = redexes(w);
    if (rs.empty()) return classify(w, word.source, word.target, word.scalar);
    auto next = rewrite(w, rs[pick(rs.size())]);
    if (!next) return zero_morphism(word.source, word.target, word.scalar);
    w = std::move(*next);
  }
}

}  // namespace

NormalMorphism normalize(const MorphismWord& w) {
  return run(w, [](std::size_t) { return std::size_t{0}; });
}

NormalMorphism normalize_random(const MorphismWord& w, std::mt19937_64& rng) {
  return run(w, [&](std::size_t k) { return static_cast<std::size_t>(rng() % k); });
}

std::vector<NormalMorphism> all_normal_forms(const MorphismWord& word) {
  std::vector<NormalMorphism> out;
  std::set<std::string> seen_words, seen_forms;
  auto key = [](const std::vector<Letter>& w) {
    std::string k;
    for (auto& l : w) k += l.str() + ";";
    return k;
  };
  auto record = [&](const NormalMorphism& m) {
    if (seen_forms.insert(m.str()).second) out.push_back(m);
  };
  std::function<void(const std::vector<Letter>&)> dfs = [&](const std::vector<Letter>& w) {
    if (!seen_words.insert(key(w)).second) return;
    auto rs = redexes(w);
    if (rs.empty()) record(classify(w, word.source, word.target, word.scalar));
    for (auto& r : rs) {
      auto next = rewrite(w, r);
      if (next) dfs(*next);
      else record(zero_morphism(word.source, word.target, word.scalar));
    }
  };
  dfs(word.letters);
  return out;
}

std::optional<NormalMorphism> hom_basis(IndexObject a, IndexObject b, Field f) {
  const Scalar one(f, 1L);
  const int r = b.r;
  if (a == b) return NormalMorphism{NormalKind::Identity, a, b, 0, one};
  if (a.p == b.p && a.n == b.n && a.r < r) return NormalMorphism{NormalKind::OmegaPower, a, b, r - a.r, one};
  if (a.r > r && a.p - b.p == a.r - r && a.n - b.n == a.r - r)
    return NormalMorphism{NormalKind::SigmaPower, a, b, a.r - r, one};
  // the remaining rows have source bidegree b - (r, r-1)
  if (a.p != b.p - r || a.n != b.n - r + 1) return std::nullopt;
  if (a.r == r) return NormalMorphism{NormalKind::Delta, a, b, 0, one};
  if (a.r < r) return NormalMorphism{NormalKind::DeltaOmega, a, b, r - a.r, one};
  return NormalMorphism{NormalKind::SigmaDelta, a, b, a.r - r, one};
}

// ---- duality

IndexObject dual(IndexObject x) { return {x.r, x.r - x.p, x.r - x.n}; }

std::vector<Letter> dualize(const std::vector<Letter>& letters) {
  std::vector<Letter> out;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    const Letter& l = *it;
    switch (l.gen) {
      case Gen::Delta: out.push_back(delta(l.index, 2 * l.index - l.p, 2 * l.index - l.n - 1)); break;
      case Gen::Sigma: out.push_back(omega(l.index + 1, l.index - l.p, l.index - l.n)); break;
      case Gen::Omega: {
        int r = l.index - 1;
        out.push_back(sigma(r, r - l.p, r - l.n));
        break;
      }
    }
  }
  return out;
}

NormalMorphism dualize(const NormalMorphism& m) {
  IndexObject s = dual(m.target), t = dual(m.source);
  if (m.kind == NormalKind::Zero) return zero_morphism(s, t, m.scalar);
  if (m.kind == NormalKind::Identity) return {NormalKind::Identity, s, t, 0, m.scalar};
  MorphismWord w = make_word(dualize(letters_of(m)), m.scalar);
  if (w.source != s || w.target != t) throw Error("duality does not respect the object map");
  return normalize(w);
}

// ---- realization on discs

ESSMap realize_letter(const Letter& l, Field f, int horizon) {
  const IndexObject s = l.source(), t = l.target();
  ExtSpecSeq src = disc(f, s.r, s.bidegree(), horizon), tgt = disc(f, t.r, t.bidegree(), horizon);
  const int ext = common_extent(src, tgt);
  std::vector<BigradedMap> comps;
  for (int i = 0; i <= ext; ++i) {
    RComplex a = src.page(i), b = tgt.page(i);
    BigradedMap m(a.module(), b.module(), {0, 0});
    Matrix one = Matrix::identity(f, 1);
    switch (l.gen) {
      case Gen::Omega:  // e -> e on pages 0..r
        if (i <= s.r) m.set_block(s.bidegree(), one);
        break;
      case Gen::Delta:  // e -> f on pages 0..r
        if (i <= s.r) m.set_block(s.bidegree(), one);
        break;
      case Gen::Sigma:  // f -> f below the top page of the source
        if (i < s.r) m.set_block(s.bidegree() + diff_degree(s.r), one);
        break;
    }
    comps.push_back(std::move(m));
  }
  return ESSMap(src, tgt, std::move(comps));
}

ESSMap realize_word(const MorphismWord& w, int horizon) {
  const Field f = w.scalar.field();
  horizon = std::max({horizon, w.source.r, w.target.r});
  for (auto& l : w.letters) horizon = std::max(horizon, l.source().r);
  if (w.letters.empty()) return ESSMap::identity(disc(f, w.source.r, w.source.bidegree(), horizon)).scaled(w.scalar);
  ESSMap out = realize_letter(w.letters.back(), f, horizon);
  for (std::size_t k = w.letters.size() - 1; k-- > 0;) out = compose(realize_letter(w.letters[k], f, horizon), out);
  return out.scaled(w.scalar);
}

ESSMap realize_disc(const NormalMorphism& m, int horizon) {
  if (m.is_zero()) throw ZeroMorphism("the zero morphism " + m.str() + " has no disc realization as a generator");
  if (horizon < 0) horizon = std::max(m.source.r, m.target.r);
  if (m.kind == NormalKind::Identity) return realize_word(identity_word(m.source, m.scalar), horizon);
  return realize_word(make_word(letters_of(m), m.scalar), horizon);
}

}  // namespace ssq
