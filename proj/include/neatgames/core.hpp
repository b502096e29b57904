#pragma once
// Core finite atom structures (cylindric/polyadic frames and relation-algebra
// frames), their validation against the frame correspondents of the algebraic
// axioms, and the complex-algebra operations on atom sets.
//
// All algebras here are finite and atomic, so every operator is determined by
// its action on atoms; validation therefore checks relational conditions on
// atoms rather than equations on arbitrary sets.

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace neatgames::core {

using Atom = int32_t;
using AtomSet = boost::dynamic_bitset<>;

AtomSet make_atom_set(std::size_t universe, std::initializer_list<Atom> members);
std::vector<Atom> atoms_of(const AtomSet& s);

// One failed check.  `check` is a short stable identifier (useful for tests
// and for the CLI report), `detail` a human-readable elaboration.
struct ValidationIssue {
  std::string check;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool structural_error = false;  // ill-formed data (bad ids, size mismatch)
  bool ok() const { return issues.empty() && !structural_error; }
  void add(std::string check, std::string detail);
  bool mentions(const std::string& needle) const;  // substring over checks
  std::string to_string() const;
};

// ---------------------------------------------------------------------------
// Cylindric-style atom structure of dimension n >= 2.
//
//   cyl[i]   : binary relation T_i on atoms (adjacency bitsets; arbitrary
//              relations are representable so the validator can reject
//              non-equivalences rather than being unable to express them)
//   diag     : E_ij subsets for i < j;  E_ii is implicitly the full set
//   transp   : optional S_ij involutions for i < j (polyadic part)
//
// A structure that passes validate_ca_frame has every T_i an equivalence
// relation, and then `cyl_class_members` gives the block decomposition used
// heavily by the network and game code.
// ---------------------------------------------------------------------------
class CaAtomStructure {
 public:
  int dim = 0;
  std::vector<std::string> names;            // atom id -> display name
  std::vector<std::vector<AtomSet>> cyl;     // [i][a] -> neighbours of a
  std::vector<AtomSet> diag;                 // [pair_index(i,j)] for i < j
  std::vector<std::vector<Atom>> transp;     // [pair_index(i,j)], may be empty
  bool has_transp = false;

  std::size_t atom_count() const { return names.size(); }
  int pair_index(int i, int j) const;        // i != j, normalised to i < j

  bool cyl_related(int i, Atom a, Atom b) const { return cyl[i][a].test(b); }
  bool in_diag(Atom a, int i, int j) const;  // E_ii == everything
  const AtomSet& diag_set(int i, int j) const;  // requires i != j
  Atom transpose(int i, int j, Atom a) const;   // identity when i == j

  // Equivalence-class view of T_i; only valid once validate_ca_frame passes.
  // cyl_class_of(i, a) is a dense class id, cyl_class_members(i, a) the
  // sorted members of a's class.
  void build_cyl_classes();                      // throws if some T_i is not
                                                 // an equivalence relation
  bool classes_built() const { return !cls_of_.empty(); }
  int cyl_class_of(int i, Atom a) const { return cls_of_[i][a]; }
  const std::vector<Atom>& cyl_class_members(int i, Atom a) const {
    return cls_members_[i][cls_of_[i][a]];
  }

  // Convenience used by builders: declare a T_i as a partition (list of
  // classes); fills cyl[i] with the induced equivalence relation.
  void set_cyl_from_classes(int i, const std::vector<std::vector<Atom>>& classes);

  uint64_t structure_hash() const;  // stable over the exported byte form

 private:
  std::vector<std::vector<int>> cls_of_;
  std::vector<std::vector<std::vector<Atom>>> cls_members_;
};

// Checks the first-order frame conditions corresponding, one for one, to the
// cylindric (and, when transpositions are present, polyadic) axioms.  Since
// the complex algebra's operators are completely additive, each equational
// axiom holds in the complex algebra iff its atom-level condition holds here;
// each check below is named after the algebraic law it mirrors.
ValidationReport validate_ca_frame(const CaAtomStructure& s);

// Complex-algebra operations (all act on subsets of atoms).
AtomSet cylindrify(const CaAtomStructure& s, int i, const AtomSet& x);
AtomSet diag_element(const CaAtomStructure& s, int i, int j);
AtomSet apply_transp(const CaAtomStructure& s, int i, int j, const AtomSet& x);
// Substitution s(i,j) as the derived term c_i(d_ij * x) for i != j; identity
// for i == j.  This is always the term operation, independent of whether the
// structure carries primitive transpositions.
AtomSet replace_coord(const CaAtomStructure& s, int i, int j, const AtomSet& x);

// ---------------------------------------------------------------------------
// Relation-algebra style atom structure: atoms, identity subset, converse
// involution and a ternary consistency predicate.  The predicate is either
// an explicit triple list or one of the rule-backed families (kept symbolic
// so large structures serialize compactly and evaluate lazily).
//
// Convention: consistent(a, b, c) says the triangle with sides a, b, c is
// allowed, i.e. c is below the composition a;b in the complex algebra.
// ---------------------------------------------------------------------------
class RaAtomStructure {
 public:
  enum class TripleKind { Explicit, Monk, Blur };

  struct MonkParams {
    int vertices = 0;
    int colours = 0;
    std::vector<std::pair<int, int>> edges;  // undirected, u < v
    bool adjacent(int u, int v) const;
  };
  struct BlurParams {
    int subset_size = 0;   // l : size of each blur W
    int index_count = 0;   // |I| : blurs are l-subsets of {0..|I|-1}
    int copies = 0;        // T : colour copies
    bool points_outside_blur = false;  // variant: P ranges over I, not W
  };

  std::vector<std::string> names;
  AtomSet identity;
  std::vector<Atom> converse;

  TripleKind kind = TripleKind::Explicit;
  std::vector<uint64_t> triples;  // Explicit: sorted packed (a,b,c)
  std::optional<MonkParams> monk;
  std::optional<BlurParams> blur;

  // Decoded atom data for the rule-backed kinds (filled by the builders).
  // Monk: per atom (vertex, colour), (-1,-1) for identity atoms.
  std::vector<std::pair<int, int>> monk_atom;
  // Blur: per atom (copy index i, point P, blur W as bitmask), copy=-1 for Id.
  struct BlurAtom {
    int copy = -1;
    int point = -1;
    uint32_t blur_mask = 0;
  };
  std::vector<BlurAtom> blur_atom;

  std::size_t atom_count() const { return names.size(); }
  bool is_identity(Atom a) const { return identity.test(a); }
  bool consistent(Atom a, Atom b, Atom c) const;
  uint64_t pack_triple(Atom a, Atom b, Atom c) const;
  void sort_triples();

  uint64_t structure_hash() const;
};

// Frame-level validation: structural sanity, converse an involution that
// fixes identity atoms when they are self-paired, the cycle law (the six
// Peircean transforms of a consistent triple are consistent) and the
// identity law (triangles through identity atoms force equality).
ValidationReport validate_ra_frame(const RaAtomStructure& s);

// ---------------------------------------------------------------------------
// Plain finite graphs (used by the Monk construction, colouring and the
// pebble game).
// ---------------------------------------------------------------------------
struct SimpleGraph {
  int order = 0;
  std::vector<std::pair<int, int>> edges;  // u < v, deduplicated
  std::vector<AtomSet> adj;                // built by finalize()

  void finalize();
  bool adjacent(int u, int v) const { return adj[u].test(v); }
  static SimpleGraph complete(int k);
  static SimpleGraph cycle(int k);
  static SimpleGraph empty(int k);
};

uint64_t fnv1a64(const void* data, std::size_t len, uint64_t seed = 14695981039346656037ULL);

// The copy-index rule of the blur structures: true iff some arrangement of
// (i,j,k) is an arithmetic progression.  Lives here because the rule-backed
// consistency predicate needs it.
bool index_blur_rule(long i, long j, long k);

}  // namespace neatgames::core
