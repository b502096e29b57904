#pragma once
// Term language over cylindric/polyadic signatures: parser, printer and
// evaluator over the complex algebra of a finite atom structure.
//
// Grammar (operators by loosening precedence; all binary ops left-assoc):
//   term := '0' | '1' | 'd(i,j)' | identifier
//         | '-' term | 'c(i,' term ')' | 's(i,j,' term ')' | 'sT(i,j,' term ')'
//         | term '·' term | term '+' term | '(' term ')'
// The middle dot U+00B7 is the canonical product; '*' is accepted on input.
// Unary minus binds tightest, then product, then sum.

#include "neatgames/core.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace neatgames::terms {

struct TermError : std::runtime_error {
  std::size_t offset;
  TermError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg), offset(off) {}
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Zero, One, Diag, Var, Not, Cyl, Subst, Transp, And, Or };
  Kind kind;
  int i = -1, j = -1;      // Diag, Cyl (i only), Subst, Transp
  std::string var;         // Var
  TermPtr a, b;            // operands

  static TermPtr zero();
  static TermPtr one();
  static TermPtr diag(int i, int j);
  static TermPtr var(std::string name);
  static TermPtr negate(TermPtr t);
  static TermPtr cyl(int i, TermPtr t);
  static TermPtr subst(int i, int j, TermPtr t);
  static TermPtr transp(int i, int j, TermPtr t);
  static TermPtr conj(TermPtr l, TermPtr r);
  static TermPtr disj(TermPtr l, TermPtr r);
};

TermPtr parse_term(const std::string& src);
std::string print_term(const TermPtr& t);  // canonical: '·', minimal parens

std::set<std::string> free_vars(const TermPtr& t);
bool is_monotone(const TermPtr& t);  // no complement anywhere

using Env = std::map<std::string, core::AtomSet>;

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluates over the complex algebra of `s`.  Index pairs must lie below
// s.dim; unbound variables and sT on a structure without transpositions
// raise EvalError.  s(i,j,t) always evaluates as the term c_i(d_ij · t).
core::AtomSet eval_term(const TermPtr& t, const Env& env, const core::CaAtomStructure& s);

enum class LeqMode { AtomsOnly, RandomSets };

struct LeqResult {
  bool holds = false;
  bool applicable = true;      // false: AtomsOnly requested on non-monotone terms
  std::string why;             // explanation when !applicable
  std::optional<Env> counterexample;
};

// Checks lhs <= rhs over s.  AtomsOnly assigns singleton atoms to every free
// variable (exhaustively over the shared variable set) and is a complete
// check when both terms are monotone; RandomSets samples `samples` random
// subset assignments from `seed`.
LeqResult check_inequality(const core::CaAtomStructure& s, const TermPtr& lhs,
                           const TermPtr& rhs, LeqMode mode,
                           uint64_t seed = 0, int samples = 64);

}  // namespace neatgames::terms
