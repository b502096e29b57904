#pragma once
// Exact solvers for the two network-building games over a finite atom
// structure, strategy certificates and their independent verification, plus
// the graph pebble game.
//
// Both games are played on at most m node names {0..m-1}.  Round 0: the
// challenger picks an atom a; the builder must answer with an initial
// network: node names {0..n-1} merged according to a's diagonal profile
// (i ~ j iff a lies below d_ij), the merged tuple labelled a, the rest
// completed coherently.  If no completion exists the challenger wins.
//
// Variant G (cylindrifier game): a round is a demand (N, x, i, a) with
// N(x) T_i a.  The builder either points at an existing witness z with
// N(x[i:=z]) = a (the position is unchanged) or extends N by one fresh node
// z — the smallest unused name — with M(x[i:=z]) = a.  Nodes are never
// renamed or deleted; on a full board an unsatisfied demand loses.
//
// Variant F (bounded relabelling game): a round is a move
// (N, f, k, b, l) with f a (dim-1)-tuple of existing nodes, k < m a name not
// occurring in f (fresh or in use), l < dim, and b T_l-compatible with the
// labels N gives the tuples f[insert x at l].  The builder answers with M on
// nodes(N) u {k}, agreeing with N everywhere off k, with M(f[insert k at l])
// = b: reusing k means relabelling that node in place.
//
// rounds == nullopt plays the unbounded game (win = survive forever); a
// finite round count plays exactly that many demand rounds after round 0.

#include "neatgames/core.hpp"
#include "neatgames/networks.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace neatgames::games {

enum class Variant { G, F };
enum class Verdict { Exists, Forall, Inconclusive };
const char* verdict_name(Verdict v);

// How the builder's response set is generated when a demand is already
// satisfied at an existing node: Union offers both the unchanged position and
// every fresh extension; PreferExisting answers with the unchanged position
// only.  Game values coincide (skipping a satisfied demand never hurts the
// builder); solvers explore Union and certificates verify against Union.
enum class WitnessPolicy { Union, PreferExisting };

struct GameSpec {
  Variant variant = Variant::G;
  int m = 0;
  std::optional<long> rounds;  // nullopt = unbounded
  WitnessPolicy policy = WitnessPolicy::Union;
  std::string to_string() const;
};

struct Budget {
  bool limited = false;
  std::chrono::steady_clock::time_point deadline{};
  static Budget unlimited();
  static Budget from_ms(long ms);
  static Budget from_env();  // NEATGAMES_BUDGET_MS, else unlimited
  bool expired() const;
};

// A challenger demand in G.
struct GDemand {
  std::vector<int> x;  // node tuple, length dim
  int i = 0;           // cylinder index
  core::Atom a = 0;    // demanded atom, N(x) T_i a
};

// A challenger move in F.
struct FMove {
  std::vector<int> face;  // dim-1 existing nodes, repeats allowed
  int k = 0;              // node name to (re)use, k not in face
  core::Atom b = 0;
  int l = 0;              // slot where k is inserted into face
};

// --- canonicalization ------------------------------------------------------
// Renames nodes to {0..size-1} so that the label vector is lexicographically
// least among all renamings.  Two positions are game-equivalent iff their
// canonical label vectors agree (node names carry no information beyond
// their labelling).
struct CanonicalForm {
  nets::Network net;           // nodes {0..size-1}
  std::vector<int> node_to_pos;  // original node -> canonical position
};
CanonicalForm canonicalize(const nets::Network& n);
std::vector<core::Atom> canonical_key(const nets::Network& n);  // labels of the canonical form

// --- move generation (shared with the basis code and the verifier) ---------
// All legal demands at N (cylinder-legality only; includes satisfiable and
// unsatisfiable ones), in the fixed order: tuple index, then i, then atom.
std::vector<GDemand> g_demands(const core::CaAtomStructure& s, const nets::Network& n);
bool g_self_satisfied(const nets::Network& n, const GDemand& d);
// Responses per policy; fresh extensions use the smallest unused name < m.
std::vector<nets::Network> g_responses(const core::CaAtomStructure& s, const nets::Network& n,
                                       const GDemand& d, int m, WitnessPolicy policy);

std::vector<FMove> f_moves(const core::CaAtomStructure& s, const nets::Network& n, int m);
bool f_self_satisfied(const nets::Network& n, const FMove& mv);
std::vector<nets::Network> f_responses(const core::CaAtomStructure& s, const nets::Network& n,
                                       const FMove& mv);

// --- certificates ----------------------------------------------------------
// Builder certificate: a table of canonical positions.  For the unbounded
// game every rank is LONG_MAX-like (use rank = -1 to mean "safe forever"):
// each atom's entry points at an initial response inside the table, and
// every table position answers every demand inside the table.  For the
// k-round game rank r >= 0 means "survives at least r further rounds".
//
// Challenger certificate: a forcing dag.  Each node fixes a position and the
// move played there; children cover every legal response (by canonical key).
// A node with no children asserts the move has no legal response.  depth
// strictly decreases along edges, bounding the number of rounds to the kill.
struct ForcingNode {
  nets::Network pos;                 // canonical
  std::optional<GDemand> g;
  std::optional<FMove> f;
  std::vector<std::pair<std::vector<core::Atom>, int>> children;  // key -> node
  int depth = 0;
};

struct StrategyCert {
  Verdict winner = Verdict::Inconclusive;
  GameSpec spec;
  // builder side
  std::vector<nets::Network> safe;
  std::vector<long> rank;          // parallel to safe; -1 = forever
  std::vector<int> atom_response;  // atom -> index into safe
  // challenger side
  core::Atom root_atom = -1;
  std::vector<std::pair<std::vector<core::Atom>, int>> root_children;
  std::vector<ForcingNode> nodes;
  bool empty() const { return safe.empty() && nodes.empty() && root_atom < 0; }
};

struct SolveStats {
  uint64_t positions = 0;
  uint64_t memo_hits = 0;
  uint64_t responses_enumerated = 0;
  double seconds = 0.0;
};

struct GameOutcome {
  Verdict verdict = Verdict::Inconclusive;
  StrategyCert cert;
  SolveStats stats;
  std::string note;
};

// Exact solver.  Finite rounds: memoized and-or search over canonical
// positions.  Unbounded rounds: on small structures, the greatest-fixpoint
// safe-set computation over the reachable arena (exact in both directions);
// on large structures, an iterative-deepening challenger-forcing search
// (sound for challenger wins; returns Inconclusive when no forced win is
// found within the budget).  `s` must pass validate_ca_frame and have its
// cylinder classes built.
GameOutcome solve_game(const core::CaAtomStructure& s, const GameSpec& spec,
                       const Budget& budget = Budget::from_env());

struct VerifyResult {
  bool ok = false;
  std::string reason;
};
// Re-derives every move and response for the certificate with no caps and
// checks the closure/coverage (builder) or the legality, response
// completeness and strictly decreasing depth (challenger) conditions.
VerifyResult verify_strategy(const core::CaAtomStructure& s, const StrategyCert& cert);

// --- pebble game on plain graphs -------------------------------------------
// The spoiler places or moves one of `pebbles` pebbles on a vertex of g1,
// the duplicator answers on g2; the pebbled partial map must remain a
// partial isomorphism (respecting equality and adjacency both ways).  The
// spoiler wins iff he can break the map within `rounds` rounds.
enum class Winner { Exists, Forall };
Winner ef_pebble_game(const core::SimpleGraph& g1, const core::SimpleGraph& g2,
                      int pebbles, long rounds);

}  // namespace neatgames::games
