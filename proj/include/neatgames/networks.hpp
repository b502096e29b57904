#pragma once
// Atomic networks over a cylindric-style atom structure: total labelings of
// n-tuples of nodes by atoms, subject to the local coherence laws
//
//   (diagonal)  N(x) is below d_ij  iff  x_i == x_j
//   (cylinder)  x == y off position i  implies  N(x) T_i N(y)
//   (transp.)   N(x o [i,j]) == S_ij(N(x))          (when present)
//
// plus hypernetworks (networks with hyperedge labels) and the coloured-graph
// presentation used by the rainbow constructions.

#include "neatgames/core.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace neatgames::nets {

// A network with node set `nodes` (sorted, values < 256) and a label for
// every tuple in nodes^dim.  Labels are stored in mixed-radix order over
// node *positions*: tuple (p_0..p_{n-1}) of positions has index
// sum p_k * s^(n-1-k), s = nodes.size().
class Network {
 public:
  int dim = 0;
  std::vector<int> nodes;         // sorted ascending
  std::vector<core::Atom> labels; // size nodes.size()^dim

  Network() = default;
  Network(int dim, std::vector<int> nodes);

  std::size_t size() const { return nodes.size(); }
  bool has_node(int v) const;
  int pos_of(int v) const;        // -1 when absent

  std::size_t tuple_count() const { return labels.size(); }
  std::size_t index_of_positions(const std::vector<int>& pos) const;
  void positions_at(std::size_t index, std::vector<int>& out) const;

  core::Atom label_by_positions(const std::vector<int>& pos) const;
  core::Atom label(const std::vector<int>& node_tuple) const;
  void set_label_by_positions(const std::vector<int>& pos, core::Atom a);
  void set_label(const std::vector<int>& node_tuple, core::Atom a);

  bool operator==(const Network& o) const {
    return dim == o.dim && nodes == o.nodes && labels == o.labels;
  }

  uint64_t content_hash() const;
  std::string to_string(const core::CaAtomStructure& s) const;
};

// Full validity check of the three coherence laws above.
bool is_valid_network(const core::CaAtomStructure& s, const Network& n, std::string* why = nullptr);

// Networks agree at every tuple drawn from nodes(N) \ S on both sides
// ("M == N off S"); both must contain all nodes of the other outside S.
bool agree_off(const Network& m, const Network& n, const std::vector<int>& off);

// Node-map action: theta maps fresh node names to nodes of `n`; the result
// has node set dom(theta) (those mapped into nodes(n)) and labels
// (N theta)(x) = N(theta(x)).  Surjectivity is not required, repeats allowed.
Network apply_node_map(const Network& n, const std::map<int, int>& theta);

// Restriction to a node subset (must be contained in nodes(n)).
Network restrict_to(const Network& n, const std::vector<int>& keep);

// Backtracking completion: find labelings of `nodes` consistent with the
// already-fixed entries of `partial` (labels < 0 mean unset).  Enumerates
// completions in a fixed deterministic order; the callback returns false to
// stop.  Returns the number of completions visited.
std::size_t enumerate_completions(const core::CaAtomStructure& s, Network partial,
                                  const std::function<bool(const Network&)>& sink);

// First `limit` completions (limit 0 = all).
std::vector<Network> complete_network(const core::CaAtomStructure& s, const Network& partial,
                                      std::size_t limit = 0);

// The canonical one-point start of play for atom `a`: node names from
// {0..dim-1} merged by a's diagonal profile (i ~ j when a is below d_ij),
// labels on the merged tuple forced to a's transposition orbit, remaining
// tuples completed.  Returns every valid completion (deterministic order).
std::vector<Network> initial_networks(const core::CaAtomStructure& s, core::Atom a);

// ---------------------------------------------------------------------------
// Hypernetworks: a network on exactly the node set {0..m-1} plus labels for
// every tuple over those nodes of length <= m, length != dim, drawn from a
// separate hyperlabel alphabet (ids 0..lambda-1).
// ---------------------------------------------------------------------------
class Hypernetwork {
 public:
  Network net;  // node set must be exactly {0..m-1}
  int lambda = 1;
  // hyperlabels, one per entry of short_tuples(m, dim) in that order
  std::vector<int> hyper;

  int m() const { return static_cast<int>(net.nodes.size()); }
  bool operator==(const Hypernetwork& o) const {
    return net == o.net && lambda == o.lambda && hyper == o.hyper;
  }
};

// All tuples over {0..m-1} of length <= m with length != dim (the empty
// tuple included), in length-then-lex order.
std::vector<std::vector<int>> short_tuples(int m, int dim);

// Hypernetwork validity: the underlying network is valid on {0..m-1}, all
// short tuples are labelled, and the hyperedge congruence holds: tuples
// x, y of equal length are forced equal when some shared tuple z makes every
// (x_k, y_k, z) land inside the diagonal d_01 region pointwise.
bool is_valid_hypernetwork(const core::CaAtomStructure& s, const Hypernetwork& h,
                           std::string* why = nullptr);

// True when relabelling x to y is forced by the congruence: there is a tuple
// z over the nodes with net(x_k, y_k, z...) below d_01 for all k (padding z
// to dimension).  Exposed for tests.
bool congruence_forces(const core::CaAtomStructure& s, const Network& net,
                       const std::vector<int>& x, const std::vector<int>& y);

// ---------------------------------------------------------------------------
// Coloured graphs: the presentation of rainbow atoms.  A graph is a
// partition of the dim coordinates into blocks plus an edge colour for every
// block pair and a shade ("yellow") for every green-free (dim-1)-subset of
// blocks.  Colour symbols are plain data here; which triangles are allowed
// is the rainbow signature's business.
// ---------------------------------------------------------------------------
struct EdgeColour {
  enum class Kind : uint8_t { GreenTint, Green, White, Red };
  Kind kind = Kind::White;
  int index = 0;      // GreenTint: tint value; Green/White: subscript i;
                      // Red: unused (endpoints carry the data)
  int from = 0, to = 0;  // Red: ordered endpoint pair as seen from (lo,hi)
  int copy = 0;          // Red: superscript copy index
  bool operator==(const EdgeColour&) const = default;
  auto operator<=>(const EdgeColour&) const = default;
  bool is_green() const { return kind == Kind::GreenTint || kind == Kind::Green; }
  std::string to_string() const;
};

struct ColouredGraph {
  int dim = 0;
  std::vector<int> block_of;            // coordinate -> block id; blocks are
                                        // numbered 0.. in order of least member
  std::vector<EdgeColour> edge;         // indexed by pair_rank over blocks
  std::vector<int> shade;               // per (dim-1)-subset of blocks, as a
                                        // sorted-subset rank; -1 where a green
                                        // edge lies inside the subset
  int block_count() const;
  static int pair_rank(int b1, int b2, int blocks);  // b1 < b2
  const EdgeColour& colour(int b1, int b2) const;    // b1 != b2
  std::string to_string() const;
  bool operator==(const ColouredGraph&) const = default;
  auto operator<=>(const ColouredGraph&) const = default;
};

}  // namespace neatgames::nets
