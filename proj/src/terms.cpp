#include "neatgames/terms.hpp"

#include <random>
#include <sstream>

namespace neatgames::terms {

using core::Atom;
using core::AtomSet;

// --- builders ----------------------------------------------------------------

namespace {
TermPtr mk(Term t) { return std::make_shared<Term>(std::move(t)); }
}

TermPtr Term::zero() { return mk({Kind::Zero, -1, -1, "", nullptr, nullptr}); }
TermPtr Term::one() { return mk({Kind::One, -1, -1, "", nullptr, nullptr}); }
TermPtr Term::diag(int i, int j) { return mk({Kind::Diag, i, j, "", nullptr, nullptr}); }
TermPtr Term::var(std::string name) { return mk({Kind::Var, -1, -1, std::move(name), nullptr, nullptr}); }
TermPtr Term::negate(TermPtr t) { return mk({Kind::Not, -1, -1, "", std::move(t), nullptr}); }
TermPtr Term::cyl(int i, TermPtr t) { return mk({Kind::Cyl, i, -1, "", std::move(t), nullptr}); }
TermPtr Term::subst(int i, int j, TermPtr t) { return mk({Kind::Subst, i, j, "", std::move(t), nullptr}); }
TermPtr Term::transp(int i, int j, TermPtr t) { return mk({Kind::Transp, i, j, "", std::move(t), nullptr}); }
TermPtr Term::conj(TermPtr l, TermPtr r) { return mk({Kind::And, -1, -1, "", std::move(l), std::move(r)}); }
TermPtr Term::disj(TermPtr l, TermPtr r) { return mk({Kind::Or, -1, -1, "", std::move(l), std::move(r)}); }

// --- parser --------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& src;
  std::size_t pos = 0;

  explicit Parser(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) { throw TermError(msg, pos); }

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' ||
                                src[pos] == '\r'))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  // the product dot: '*' or UTF-8 U+00B7
  bool eat_dot() {
    skip_ws();
    if (pos < src.size() && src[pos] == '*') {
      ++pos;
      return true;
    }
    if (pos + 1 < src.size() && static_cast<unsigned char>(src[pos]) == 0xC2 &&
        static_cast<unsigned char>(src[pos + 1]) == 0xB7) {
      pos += 2;
      return true;
    }
    return false;
  }

  int parse_index() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() && isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == start) fail("expected an index");
    return std::stoi(src.substr(start, pos - start));
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos < src.size() && (isalpha(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    while (pos < src.size() &&
           (isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    return src.substr(start, pos - start);
  }

  TermPtr parse_sum() {
    TermPtr t = parse_product();
    while (eat('+')) t = Term::disj(t, parse_product());
    return t;
  }

  TermPtr parse_product() {
    TermPtr t = parse_unary();
    while (eat_dot()) t = Term::conj(t, parse_unary());
    return t;
  }

  TermPtr parse_unary() {
    skip_ws();
    if (eat('-')) return Term::negate(parse_unary());
    return parse_atom();
  }

  TermPtr parse_atom() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    char c = src[pos];
    if (c == '(') {
      ++pos;
      TermPtr t = parse_sum();
      expect(')');
      return t;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      int v = parse_index();
      if (v == 0) return Term::zero();
      if (v == 1) return Term::one();
      pos = start;
      fail("only the constants 0 and 1 are allowed");
    }
    std::string name = parse_ident();
    if (name.empty()) fail("expected a term");
    skip_ws();
    bool call = pos < src.size() && src[pos] == '(';
    if (call && (name == "d" || name == "c" || name == "s" || name == "sT")) {
      expect('(');
      if (name == "c") {
        int i = parse_index();
        expect(',');
        TermPtr t = parse_sum();
        expect(')');
        return Term::cyl(i, t);
      }
      int i = parse_index();
      expect(',');
      int j = parse_index();
      if (name == "d") {
        expect(')');
        return Term::diag(i, j);
      }
      expect(',');
      TermPtr t = parse_sum();
      expect(')');
      return name == "s" ? Term::subst(i, j, t) : Term::transp(i, j, t);
    }
    return Term::var(name);
  }
};

}  // namespace

TermPtr parse_term(const std::string& src) {
  Parser p(src);
  TermPtr t = p.parse_sum();
  p.skip_ws();
  if (p.pos != src.size()) p.fail("trailing input");
  return t;
}

// --- printer -----------------------------------------------------------------

namespace {

// precedence: sum 1, product 2, unary 3, primary 4
int level(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Or:
      return 1;
    case Term::Kind::And:
      return 2;
    case Term::Kind::Not:
      return 3;
    default:
      return 4;
  }
}

void print_rec(const Term& t, int need, std::ostream& os) {
  int lv = level(t);
  bool paren = lv < need;
  if (paren) os << "(";
  switch (t.kind) {
    case Term::Kind::Zero:
      os << "0";
      break;
    case Term::Kind::One:
      os << "1";
      break;
    case Term::Kind::Diag:
      os << "d(" << t.i << "," << t.j << ")";
      break;
    case Term::Kind::Var:
      os << t.var;
      break;
    case Term::Kind::Not:
      os << "-";
      print_rec(*t.a, 3, os);
      break;
    case Term::Kind::Cyl:
      os << "c(" << t.i << ", ";
      print_rec(*t.a, 1, os);
      os << ")";
      break;
    case Term::Kind::Subst:
      os << "s(" << t.i << "," << t.j << ", ";
      print_rec(*t.a, 1, os);
      os << ")";
      break;
    case Term::Kind::Transp:
      os << "sT(" << t.i << "," << t.j << ", ";
      print_rec(*t.a, 1, os);
      os << ")";
      break;
    case Term::Kind::And:
      print_rec(*t.a, 2, os);
      os << " \xC2\xB7 ";
      print_rec(*t.b, 3, os);
      break;
    case Term::Kind::Or:
      print_rec(*t.a, 1, os);
      os << " + ";
      print_rec(*t.b, 2, os);
      break;
  }
  if (paren) os << ")";
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  print_rec(*t, 1, os);
  return os.str();
}

// --- analysis ------------------------------------------------------------------

namespace {
void vars_rec(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.var);
  if (t.a) vars_rec(*t.a, out);
  if (t.b) vars_rec(*t.b, out);
}
}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  vars_rec(*t, out);
  return out;
}

bool is_monotone(const TermPtr& t) {
  if (t->kind == Term::Kind::Not) return false;
  if (t->a && !is_monotone(t->a)) return false;
  if (t->b && !is_monotone(t->b)) return false;
  return true;
}

// --- evaluation ----------------------------------------------------------------

core::AtomSet eval_term(const TermPtr& t, const Env& env, const core::CaAtomStructure& s) {
  const std::size_t n = s.atom_count();
  auto check_index = [&](int i) {
    if (i < 0 || i >= s.dim) throw EvalError("index " + std::to_string(i) + " out of dimension");
  };
  switch (t->kind) {
    case Term::Kind::Zero:
      return AtomSet(n);
    case Term::Kind::One: {
      AtomSet all(n);
      all.set();
      return all;
    }
    case Term::Kind::Diag:
      check_index(t->i);
      check_index(t->j);
      return diag_element(s, t->i, t->j);
    case Term::Kind::Var: {
      auto it = env.find(t->var);
      if (it == env.end()) throw EvalError("unbound variable '" + t->var + "'");
      if (it->second.size() != n) throw EvalError("variable '" + t->var + "' has wrong universe");
      return it->second;
    }
    case Term::Kind::Not: {
      AtomSet v = eval_term(t->a, env, s);
      v.flip();
      return v;
    }
    case Term::Kind::Cyl:
      check_index(t->i);
      return cylindrify(s, t->i, eval_term(t->a, env, s));
    case Term::Kind::Subst:
      check_index(t->i);
      check_index(t->j);
      return replace_coord(s, t->i, t->j, eval_term(t->a, env, s));
    case Term::Kind::Transp:
      check_index(t->i);
      check_index(t->j);
      if (t->i != t->j && !s.has_transp)
        throw EvalError("sT used on a structure without transpositions");
      return apply_transp(s, t->i, t->j, eval_term(t->a, env, s));
    case Term::Kind::And: {
      AtomSet v = eval_term(t->a, env, s);
      v &= eval_term(t->b, env, s);
      return v;
    }
    case Term::Kind::Or: {
      AtomSet v = eval_term(t->a, env, s);
      v |= eval_term(t->b, env, s);
      return v;
    }
  }
  throw EvalError("unreachable term kind");
}

// --- inequality check ------------------------------------------------------------

LeqResult check_inequality(const core::CaAtomStructure& s, const TermPtr& lhs,
                           const TermPtr& rhs, LeqMode mode, uint64_t seed, int samples) {
  LeqResult res;
  std::set<std::string> vars = free_vars(lhs);
  for (const auto& v : free_vars(rhs)) vars.insert(v);
  std::vector<std::string> vlist(vars.begin(), vars.end());
  const std::size_t n = s.atom_count();
  if (n == 0) {
    res.holds = true;
    return res;
  }

  if (mode == LeqMode::AtomsOnly) {
    if (!is_monotone(lhs) || !is_monotone(rhs)) {
      res.applicable = false;
      res.why = "atoms-only mode requires complement-free terms on both sides";
      return res;
    }
    // every operation here is completely additive, so a monotone term maps a
    // set argument to the union of its values on the atoms below it; checking
    // all atom assignments is therefore a complete decision procedure
    std::vector<std::size_t> assign(vlist.size(), 0);
    while (true) {
      Env env;
      for (std::size_t k = 0; k < vlist.size(); ++k) {
        AtomSet one(n);
        one.set(assign[k]);
        env[vlist[k]] = one;
      }
      AtomSet l = eval_term(lhs, env, s);
      if (!l.is_subset_of(eval_term(rhs, env, s))) {
        res.holds = false;
        res.counterexample = env;
        return res;
      }
      std::size_t k = 0;
      while (k < vlist.size() && ++assign[k] == n) assign[k++] = 0;
      if (k == vlist.size() && !vlist.empty()) break;
      if (vlist.empty()) break;
    }
    res.holds = true;
    return res;
  }

  std::mt19937_64 rng(seed);
  for (int it = 0; it < samples; ++it) {
    Env env;
    for (const auto& v : vlist) {
      AtomSet x(n);
      for (std::size_t a = 0; a < n; ++a)
        if (rng() & 1) x.set(a);
      env[v] = x;
    }
    AtomSet l = eval_term(lhs, env, s);
    if (!l.is_subset_of(eval_term(rhs, env, s))) {
      res.holds = false;
      res.counterexample = env;
      return res;
    }
  }
  res.holds = true;  // sampled evidence only; callers report the mode
  return res;
}

}  // namespace neatgames::terms
