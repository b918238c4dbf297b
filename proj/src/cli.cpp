#include "ssq/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ssq/chart.hpp"
#include "ssq/io.hpp"
#include "ssq/model.hpp"

namespace ssq {

namespace {

struct Failure {
  int code;
  std::string message;
};

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(1) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << j.dump(1) << "\n";
}

void emit_text(const std::string& s, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << s;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << s;
}

IndexObject parse_index(const std::string& s) {
  IndexObject x;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> x.r >> c1 >> x.p >> c2 >> x.n) || c1 != ',' || c2 != ',' || x.r < 0)
    throw Error("expected r,p,n with r >= 0, got '" + s + "'");
  return x;
}

RepKind parse_rep(const std::string& s) {
  if (s == "Y") return RepKind::Y;
  if (s == "Z") return RepKind::Z;
  if (s == "S") return RepKind::S;
  if (s == "W") return RepKind::W;
  throw Error("representable kind must be Y, Z, S or W");
}

template <class T>
const T& as(const Object& o, const std::string& what) {
  if (const T* p = std::get_if<T>(&o)) return *p;
  throw Error(what + " does not apply to a " + kind_of(o) + " (category mismatch)");
}

std::vector<std::string> problems(const Object& o) {
  return std::visit(
      [](const auto& x) -> std::vector<std::string> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RComplex>) {
          try {
            x.validate();
          } catch (const Error& e) {
            return {e.what()};
          }
          return {};
        } else {
          return x.validate();
        }
      },
      o);
}

// ---- subcommands

int cmd_validate(const std::string& in, std::ostream& out) {
  Object o = read_object(in);
  std::vector<std::string> p = problems(o);
  if (!p.empty()) throw Failure{2, "invalid " + kind_of(o) + ": " + p.front()};
  out << "valid " << kind_of(o) << "\n";
  return 0;
}

int cmd_check(const std::string& pred, const std::string& in, int r, const std::string& other,
              std::optional<std::uint64_t> seed, std::ostream& out) {
  Object o = read_object(in);
  bool holds = false;
  std::string reason;
  auto need_r = [&] {
    if (r < 0) throw Error("--r is required for " + pred);
  };
  if (pred == "spectral") {
    holds = is_spectral(as<ExtSpecSeq>(o, pred));
  } else if (pred == "lwbe" || pred == "lwbs") {
    const WitnessBook& l = as<WitnessBook>(o, pred);
    Verdict v = pred == "lwbe" ? lwbe_verdict(l) : lwbs_verdict(l);
    holds = v.holds;
    reason = v.reason;
  } else if (pred == "isomorphic") {
    if (!seed) throw Error("isomorphic samples the hom space: --seed is required");
    if (other.empty()) throw Error("isomorphic needs --other");
    Object p = read_object(other);
    if (const ExtSpecSeq* x = std::get_if<ExtSpecSeq>(&o)) holds = iso_check(*x, as<ExtSpecSeq>(p, pred), *seed).has_value();
    else holds = iso_check(as<WitnessBook>(o, pred), as<WitnessBook>(p, pred), *seed).has_value();
    if (!holds) reason = "no isomorphism found";
  } else if (const WBMap* g = std::get_if<WBMap>(&o)) {
    need_r();
    if (pred == "fib") holds = fib_r(*g, r);
    else if (pred == "weq") holds = weq_r(*g, r);
    else throw Error("unknown predicate for book maps: " + pred);
  } else {
    const ESSMap& f = as<ESSMap>(o, pred);
    if (pred == "iso") holds = is_iso(f);
    else if (pred == "cof0") holds = cof0_check(f);
    else {
      need_r();
      if (pred == "fib") holds = fib(f, r);
      else if (pred == "weq") holds = weq(f, r);
      else if (pred == "weq-strict") holds = weq_strict(f, r);
      else if (pred == "iso-below") holds = iso_below(f, r);
      else throw Error("unknown predicate: " + pred);
    }
  }
  out << pred << ": " << (holds ? "true" : "false") << "\n";
  if (!reason.empty()) out << "reason: " << reason << "\n";
  return holds ? 0 : 1;
}

int cmd_functor(const std::string& fn, const std::string& in, const std::string& outp, int r, int horizon, int k,
                std::ostream& out) {
  Object o = read_object(in);
  auto need_r = [&] {
    if (r < 0) throw Error("--r is required for " + fn);
  };
  Object res;
  if (fn == "shift" || fn == "dec" || fn == "ldec") {
    need_r();
    if (const ExtSpecSeq* x = std::get_if<ExtSpecSeq>(&o)) {
      res = fn == "shift" ? shift_r(*x, r) : fn == "dec" ? dec_r(*x, r) : ldec_r(*x, r);
    } else {
      const ESSMap& f = as<ESSMap>(o, fn);
      res = fn == "shift" ? shift_r(f, r) : fn == "dec" ? dec_r(f, r) : ldec_r(f, r);
    }
  } else if (fn == "nerve") {
    if (const ExtSpecSeq* x = std::get_if<ExtSpecSeq>(&o)) res = nerve(*x, horizon);
    else res = nerve_map(as<ESSMap>(o, fn), horizon);
  } else if (fn == "realize") {
    if (const WitnessBook* l = std::get_if<WitnessBook>(&o)) res = realize(*l);
    else res = realize_map(as<WBMap>(o, fn));
  } else if (fn == "translate") {
    res = translate(as<RComplex>(o, fn), k);
  } else if (fn == "homology") {
    const RComplex& c = as<RComplex>(o, fn);
    res = homology_complex(c, c.r());
  } else {
    throw Error("unknown functor: " + fn);
  }
  emit(serialize(res), outp, out);
  return 0;
}

int cmd_factor(const std::string& kind, const std::string& in, int r, const std::string& first,
               const std::string& second, std::ostream& out) {
  const ESSMap f = as<ESSMap>(read_object(in), "factor");
  Factorization fz;
  if (kind == "iso-strict") fz = factor_iso_strict(f, r);
  else if (kind == "cone-fib") fz = factor_cone_fib(f, r);
  else if (kind == "main") fz = factor_main(f, r);
  else throw Error("unknown factorization: " + kind);
  if (first.empty() && second.empty()) {
    emit(Json{{"first", serialize(fz.first)}, {"second", serialize(fz.second)}}, "", out);
  } else {
    emit(serialize(fz.first), first, out);
    emit(serialize(fz.second), second, out);
  }
  return 0;
}

int cmd_lift(const std::string& i, const std::string& p, const std::string& top, const std::string& bottom,
             const std::string& outp, std::ostream& out) {
  Object oi = read_object(i), op = read_object(p), ot = read_object(top), ob = read_object(bottom);
  if (std::holds_alternative<ESSMap>(oi)) {
    EssSquare s{as<ESSMap>(oi, "lift"), as<ESSMap>(op, "lift"), as<ESSMap>(ot, "lift"), as<ESSMap>(ob, "lift")};
    if (!commutes(s)) throw Error("the square does not commute");
    auto h = solve_lift(s);
    if (!h) {
      out << "no lift\n";
      return 1;
    }
    emit(serialize(*h), outp, out);
  } else {
    BookSquare s{as<WBMap>(oi, "lift"), as<WBMap>(op, "lift"), as<WBMap>(ot, "lift"), as<WBMap>(ob, "lift")};
    if (!commutes(s)) throw Error("the square does not commute");
    auto h = solve_lift(s);
    if (!h) {
      out << "no lift\n";
      return 1;
    }
    emit(serialize(*h), outp, out);
  }
  return 0;
}

int cmd_dcat(const std::string& from, const std::string& to, const std::string& word, const std::string& rep,
             const std::string& disc_at, int horizon, const std::string& outp, Field f, std::ostream& out) {
  if (!word.empty()) {
    NormalMorphism m = normalize(parse_word(word, f));
    out << m.str() << "\n";
    return 0;
  }
  if (!from.empty() || !to.empty()) {
    if (from.empty() || to.empty()) throw Error("--from and --to go together");
    auto h = hom_basis(parse_index(from), parse_index(to), f);
    out << (h ? h->str() : "0") << "\n";
    return 0;
  }
  if (!rep.empty()) {
    if (disc_at.empty()) throw Error("--representable needs --object r,p,n");
    IndexObject x = parse_index(disc_at);
    emit(serialize(representable(parse_rep(rep), x, f, std::max(horizon, x.r + 1))), outp, out);
    return 0;
  }
  if (!disc_at.empty()) {
    IndexObject x = parse_index(disc_at);
    emit(serialize(disc(f, x.r, x.bidegree(), std::max(horizon, x.r))), outp, out);
    return 0;
  }
  throw Error("dcat needs --word, --from/--to, --representable or --object");
}

int cmd_filtered(const std::string& op, const std::string& in, int horizon, bool random, std::optional<std::uint64_t> seed,
                 FilteredShape shape, const std::string& outp, Field f, std::ostream& out) {
  if (random) {
    if (!seed) throw Error("--random needs --seed");
    Rng rng(*seed);
    emit(serialize(random_filtered(f, rng, shape)), outp, out);
    return 0;
  }
  const FilteredComplex c = as<FilteredComplex>(read_object(in), "filtered");
  const int h = horizon >= 0 ? horizon : c.length() + 1;
  if (op == "ss") emit(serialize(ss(c, h)), outp, out);
  else if (op == "dec") emit(serialize(dec_filtration(c)), outp, out);
  else if (op == "decstar") emit(serialize(decstar_filtration(c)), outp, out);
  else if (op == "shift") emit(serialize(shift_filtration(c)), outp, out);
  else if (op == "compat-shift" || op == "compat-dec" || op == "compat-decstar") {
    CompatReport rep = op == "compat-shift" ? compat_shift(c, h)
                       : op == "compat-dec" ? static_cast<CompatReport>(compat_dec(c, h))
                                            : static_cast<CompatReport>(compat_decstar(c, h));
    out << op << ": " << (rep.verified ? "isomorphism verified" : "failed: " + rep.failure) << "\n";
    if (rep.verified && !outp.empty()) emit(serialize(rep.map), outp, out);
    return rep.verified ? 0 : 1;
  } else {
    throw Error("unknown filtered operation: " + op);
  }
  return 0;
}

int cmd_chart(const std::string& in, int page, const std::string& format, const std::string& outp, std::ostream& out) {
  Object o = read_object(in);
  RComplex c;
  if (const RComplex* x = std::get_if<RComplex>(&o)) {
    c = *x;
  } else if (const ExtSpecSeq* x = std::get_if<ExtSpecSeq>(&o)) {
    if (page < 0 || page > x->horizon()) throw RangeError("page " + std::to_string(page) + " out of range 0.." + std::to_string(x->horizon()));
    c = x->stored_page(page);
  } else {
    const WitnessBook& l = as<WitnessBook>(o, "chart");
    if (page < 0 || page > l.horizon()) throw RangeError("page " + std::to_string(page) + " out of range 0.." + std::to_string(l.horizon()));
    c = l.page(page);
  }
  Chart ch = chart(c);
  if (format == "text") emit_text(render_text(ch), outp, out);
  else if (format == "svg") emit_text(render_svg(ch), outp, out);
  else throw Error("format must be text or svg");
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ssq: extended spectral sequences, witness books and filtered complexes"};
  app.require_subcommand(1);
  std::string in, outp, pred, other, fn, kind, first, second, i, p, top, bottom, from, to, word, rep, object, op,
      format = "text", field;
  int r = -1, horizon = -1, k = 1, page = 0;
  std::optional<std::uint64_t> seed;
  bool random = false;
  FilteredShape shape;
  app.add_option("--field", field, "Q, Fp:<p> or <p>; default from SSQ_FIELD");

  auto* v = app.add_subcommand("validate", "parse and check invariants");
  v->add_option("--in", in)->required();

  auto* c = app.add_subcommand("check", "evaluate a predicate; exit 1 when false");
  c->add_option("--pred", pred, "spectral lwbe lwbs fib weq weq-strict iso-below iso cof0 isomorphic")->required();
  c->add_option("--in", in)->required();
  c->add_option("--r", r);
  c->add_option("--other", other);
  c->add_option("--seed", seed);

  auto* fu = app.add_subcommand("functor", "apply a functor");
  fu->add_option("--apply", fn, "shift dec ldec nerve realize translate homology")->required();
  fu->add_option("--in", in)->required();
  fu->add_option("--out", outp);
  fu->add_option("--r", r);
  fu->add_option("--horizon", horizon);
  fu->add_option("--k", k);

  auto* fa = app.add_subcommand("factor", "factor a map of extended spectral sequences");
  fa->add_option("--kind", kind, "iso-strict cone-fib main")->required();
  fa->add_option("--in", in)->required();
  fa->add_option("--r", r)->required();
  fa->add_option("--first", first);
  fa->add_option("--second", second);

  auto* li = app.add_subcommand("lift", "solve a lifting square; exit 1 when none exists");
  li->add_option("--i", i)->required();
  li->add_option("--p", p)->required();
  li->add_option("--top", top)->required();
  li->add_option("--bottom", bottom)->required();
  li->add_option("--out", outp);

  auto* dc = app.add_subcommand("dcat", "normal forms, hom sets, representables and discs");
  dc->add_option("--word", word);
  dc->add_option("--from", from);
  dc->add_option("--to", to);
  dc->add_option("--representable", rep, "Y Z S W");
  dc->add_option("--object", object, "r,p,n");
  dc->add_option("--horizon", horizon);
  dc->add_option("--out", outp);

  auto* fi = app.add_subcommand("filtered", "filtered complexes");
  fi->add_option("--op", op, "ss dec decstar shift compat-shift compat-dec compat-decstar");
  fi->add_option("--in", in);
  fi->add_option("--horizon", horizon);
  fi->add_flag("--random", random);
  fi->add_option("--seed", seed);
  fi->add_option("--kmin", shape.kmin);
  fi->add_option("--kmax", shape.kmax);
  fi->add_option("--length", shape.length);
  fi->add_option("--pieces", shape.max_pieces);
  fi->add_option("--out", outp);

  auto* ch = app.add_subcommand("chart", "draw one page");
  ch->add_option("--in", in)->required();
  ch->add_option("--page", page);
  ch->add_option("--format", format, "text or svg");
  ch->add_option("--out", outp);

  for (CLI::App* sub : {v, c, fu, fa, li, dc, fi, ch}) sub->fallthrough();
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    const Field f = field.empty() ? Field::default_field() : Field::parse(field);
    if (v->parsed()) return cmd_validate(in, out);
    if (c->parsed()) return cmd_check(pred, in, r, other, seed, out);
    if (fu->parsed()) return cmd_functor(fn, in, outp, r, horizon, k, out);
    if (fa->parsed()) return cmd_factor(kind, in, r, first, second, out);
    if (li->parsed()) return cmd_lift(i, p, top, bottom, outp, out);
    if (dc->parsed()) return cmd_dcat(from, to, word, rep, object, horizon, outp, f, out);
    if (fi->parsed()) {
      if (!random && (in.empty() || op.empty())) throw Error("filtered needs --in and --op, or --random");
      return cmd_filtered(op, in, horizon, random, seed, shape, outp, f, out);
    }
    if (ch->parsed()) return cmd_chart(in, page, format, outp, out);
  } catch (const Failure& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const SchemaError& e) {
    err << "schema error at " << e.what() << "\n";
    return 2;
  } catch (const NotImplemented& e) {
    err << "not implemented: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ssq
