#pragma once
// Basis and hyperbasis search by greatest-fixpoint elimination.
//
// An m-basis is a set B of networks on node sets within {0..m-1} such that
// (coverage) every atom labels the merged initial tuple of some member, and
// (cylindrifier) every demand N(x) T_i a against a member is either already
// satisfied at an existing witness or satisfied in a member extending N by
// one fresh node.  Bases are exactly the builder's winning positions of the
// unbounded G game, which find_basis exploits on structures too large to
// catalogue.
//
// An m-hyperbasis (at hyperlabel arity lambda) is a set of hypernetworks on
// exactly {0..m-1} closed under the relabelling cylindrifier and under
// amalgamation: M == N off {x,y} implies some member agrees with M off x and
// with N off y.  Removing hyperlabels from a hyperbasis and restricting
// members yields a basis, so "no basis" certifies "no hyperbasis".

#include "neatgames/core.hpp"
#include "neatgames/games.hpp"
#include "neatgames/networks.hpp"

#include <optional>
#include <string>
#include <vector>

namespace neatgames::bases {

struct BasisResult {
  games::Verdict verdict = games::Verdict::Inconclusive;  // Exists = basis found
  int m = 0;
  std::vector<nets::Network> networks;  // canonical members when found
  std::vector<int> atom_initial;        // atom -> index of an initial member
  std::string note;
  bool found() const { return verdict == games::Verdict::Exists; }
};

// Exact on structures whose full network catalogue fits (enumerate all
// canonical valid networks on at most m nodes, repeatedly eliminate members
// with an unanswerable demand, then check coverage); otherwise decides via
// the unbounded G game.
BasisResult find_basis(const core::CaAtomStructure& s, int m,
                       const games::Budget& budget = games::Budget::from_env());

// Independent check that `networks` is a basis: coverage over all atoms and
// the cylindrifier property with witnesses inside the set.
bool verify_basis(const core::CaAtomStructure& s, int m,
                  const std::vector<nets::Network>& networks, std::string* why = nullptr);

// Complete m-square representability = existence of an m-basis.
BasisResult decide_m_square(const core::CaAtomStructure& s, int m,
                            const games::Budget& budget = games::Budget::from_env());

struct HyperbasisResult {
  enum class Status { Found, None, Inconclusive } status = Status::Inconclusive;
  int m = 0;
  int lambda = 0;  // arity at which it was found / up to which it was refuted
  std::vector<nets::Hypernetwork> members;
  std::string note;
};

// Tries lambda = 1..lambda_max.  "None" is only reported on the sound path
// (no m-basis exists, hence no hyperbasis at any arity); a failed
// constructive search at every arity within bounds reports Inconclusive.
// Any Found result has been re-verified against verify_hyperbasis.
HyperbasisResult find_hyperbasis(const core::CaAtomStructure& s, int m, int lambda_max,
                                 const games::Budget& budget = games::Budget::from_env());

bool verify_hyperbasis(const core::CaAtomStructure& s,
                       const std::vector<nets::Hypernetwork>& members,
                       std::string* why = nullptr);

}  // namespace neatgames::bases
