#pragma once
// Builders for the concrete atom structures the tool ships with:
//
//  * rainbow-style polyadic structures over two parameter orders (greens
//    indexed by A, reds by pairs from B), with optional red-copy splitting
//    and the order rule used by the integer/naturals variant;
//  * Monk-style relation algebras over a graph, their basic-matrix
//    cylindric structures;
//  * arithmetic blur structures;
//  * full set-algebra frames (all n-tuples over a finite base);
//  * exact graph chromatic number (used to steer Monk parameters).

#include "neatgames/core.hpp"
#include "neatgames/networks.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace neatgames::cons {

// ---------------------------------------------------------------------------
// Rainbow structures.
//
// Atoms of dimension n are coloured graphs: a partition of the n coordinates
// into blocks, an edge colour on every block pair, and a shade on every
// green-free (n-1)-subset of blocks.  Edge colours:
//   tinted greens  g0^a for a in A (A a finite list of integers, in order)
//   plain greens   g_i, 1 <= i <= n-2
//   whites         w_i, 0 <= i <= n-2
//   reds           r_{pq} for p < q in B, directed: an edge seen from one
//                  end as (p,q) is seen from the other as (q,p), and carries
//                  a copy index < copies.
// Forbidden triangles: three greens; (g_i, g_i, w_i); (g0^j, g0^k, w0); red
// triangles whose endpoint data is not induced by a single map from the
// corners into B; and, when order_rule is set, a triangle with greens g0^i,
// g0^j from a common corner and a red (k,l) opposite it unless
// {(i,k),(j,l)} is an order-preserving partial function from A to B.
// Shades: subsets of A; every green-free (n-1)-set of blocks carries one,
// and a shade S on the base of a cone with tint t must contain t.  The
// default family keeps only the full shade A (always consistent); the
// exhaustive powerset family is available for small A.
// ---------------------------------------------------------------------------
struct RainbowSignature {
  int dim = 3;
  std::vector<int> greens;  // the order A (ascending)
  std::vector<int> reds;    // the order B (ascending)
  int copies = 1;           // red superscript count T
  bool order_rule = false;
  enum class ShadeFamily { FullOnly, Powerset } shades = ShadeFamily::FullOnly;

  static RainbowSignature basic(int n_greens, int n_reds);  // A=0..g-1, B=0..r-1
  static RainbowSignature interval(int a_lo, int a_hi, int b_lo, int b_hi);  // order rule on
};

struct RainbowStructure {
  core::CaAtomStructure frame;
  RainbowSignature sig;
  std::vector<nets::ColouredGraph> atom_graph;       // atom id -> presentation
  std::map<std::string, core::Atom> graph_index;     // encoded graph -> atom

  std::size_t atom_count() const { return frame.atom_count(); }
  core::Atom atom_of_graph(const nets::ColouredGraph& g) const;  // -1 if absent
  // number of shades in the signature's family
  std::vector<std::vector<int>> shade_sets() const;  // each a subset of A
};

RainbowStructure build_rainbow(const RainbowSignature& sig);

// A network over a rainbow structure is the same thing as one edge-coloured,
// shaded graph on its node set: every n-tuple's label is the induced
// sub-pattern.  These convert between the views (the graph must have at most
// dim blocks... graph_to_network takes a graph whose blocks become nodes).
nets::Network graph_to_network(const RainbowStructure& rs, const nets::ColouredGraph& g);
nets::ColouredGraph network_to_graph(const RainbowStructure& rs, const nets::Network& n,
                                     const std::vector<int>& node_tuple);

// Red-copy splitting: the same signature with `copies` copies of every red.
// theta maps each base atom to the set of its copies (atoms that forget to
// it); checks that the copy sets partition the split structure's red atoms,
// have size copies^(number of red edges), and that consistency transfers:
// a triple is consistent in the split structure iff its forgetful image is
// consistent in the base (red copy indices never matter).
struct ThetaReport {
  bool injective = false;   // distinct atoms get disjoint copy sets
  bool partition = false;   // copy sets cover the split structure
  bool counts = false;      // |theta(a)| == copies^(red edge count of a)
  bool lifting = false;     // consistency transfers both ways on all triples
  std::string detail;
  bool ok() const { return injective && partition && counts && lifting; }
};
ThetaReport theta_check(const RainbowStructure& base, const RainbowStructure& split,
                        int jobs = 1);

// ---------------------------------------------------------------------------
// Monk-style relation algebra over a graph: atoms are an identity atom plus
// a (vertex, colour) pair for every vertex of g and colour < colours; all
// atoms self-converse.  A triangle of non-identity atoms is consistent iff
// its colours are not all equal, or they are all equal and some two of its
// vertices are adjacent in g.  Identity triangles need the other two atoms
// equal.
// ---------------------------------------------------------------------------
core::RaAtomStructure build_monk_ra(const core::SimpleGraph& g, int colours);

// All m-by-m basic matrices over `ra`: entries are atoms, diagonal entries
// identity atoms, b_ij = converse(b_ji), and every triangle (b_ik, b_kj,
// b_ij) consistent.  The result is a cylindric-style structure of dimension
// m: T_i = agreement off row/column i, E_ij = {b : b_ij identity},
// S_ij = simultaneous row and column swap.  `cylindric_basis` receives
// whether the result passes the full frame validation.
core::CaAtomStructure basic_matrices(const core::RaAtomStructure& ra, int m,
                                     bool* cylindric_basis = nullptr,
                                     core::ValidationReport* report = nullptr);

// ---------------------------------------------------------------------------
// Blur structures: atoms are an identity atom plus a_i^{P,W} for every copy
// i < copies, blur W (an l-subset of {0..index_count-1}) and point P in W.
// A triangle of non-identity atoms with blurs W,V,U, points P,Q,R and copies
// i,j,k is consistent iff W * V * U is empty (no common index) or the copy
// triple is blurred (some arrangement of (i,j,k) is an arithmetic
// progression) and the points are not all equal.
// ---------------------------------------------------------------------------
bool index_blur(long i, long j, long k);
core::RaAtomStructure build_blur_structure(int subset_size, int index_count, int copies,
                                           bool points_outside_blur = false);

// ---------------------------------------------------------------------------
// Full set-algebra frame on base^dim: atoms are the n-tuples over
// {0..base-1}; u T_i v iff they agree off i; u in E_ij iff u_i == u_j;
// S_ij swaps coordinates.  This is the atom structure of the full relational
// algebra on the base set and passes every validation check.
// ---------------------------------------------------------------------------
core::CaAtomStructure build_full_set_structure(int dim, int base);
// tuple <-> atom id (mixed radix, first coordinate most significant)
core::Atom full_set_atom(int dim, int base, const std::vector<int>& tuple);
std::vector<int> full_set_tuple(int dim, int base, core::Atom a);

// ---------------------------------------------------------------------------
// Exact chromatic number by branch and bound (greedy clique lower bound,
// saturation-ordered branching).
// ---------------------------------------------------------------------------
int chromatic_number(const core::SimpleGraph& g);

}  // namespace neatgames::cons
