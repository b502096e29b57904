#include "neatgames/networks.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace neatgames::nets {

using core::Atom;
using core::AtomSet;
using core::CaAtomStructure;

// --- Network -----------------------------------------------------------------

Network::Network(int dim_, std::vector<int> nodes_) : dim(dim_), nodes(std::move(nodes_)) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::size_t count = 1;
  for (int k = 0; k < dim; ++k) count *= nodes.size();
  labels.assign(count, -1);
}

bool Network::has_node(int v) const {
  return std::binary_search(nodes.begin(), nodes.end(), v);
}

int Network::pos_of(int v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  if (it == nodes.end() || *it != v) return -1;
  return static_cast<int>(it - nodes.begin());
}

std::size_t Network::index_of_positions(const std::vector<int>& pos) const {
  std::size_t idx = 0;
  for (int k = 0; k < dim; ++k) idx = idx * nodes.size() + pos[k];
  return idx;
}

void Network::positions_at(std::size_t index, std::vector<int>& out) const {
  out.assign(dim, 0);
  for (int k = dim - 1; k >= 0; --k) {
    out[k] = static_cast<int>(index % nodes.size());
    index /= nodes.size();
  }
}

Atom Network::label_by_positions(const std::vector<int>& pos) const {
  return labels[index_of_positions(pos)];
}

Atom Network::label(const std::vector<int>& node_tuple) const {
  std::size_t idx = 0;
  for (int k = 0; k < dim; ++k) {
    int p = pos_of(node_tuple[k]);
    if (p < 0) throw std::out_of_range("label: node not in network");
    idx = idx * nodes.size() + p;
  }
  return labels[idx];
}

void Network::set_label_by_positions(const std::vector<int>& pos, Atom a) {
  labels[index_of_positions(pos)] = a;
}

void Network::set_label(const std::vector<int>& node_tuple, Atom a) {
  std::size_t idx = 0;
  for (int k = 0; k < dim; ++k) {
    int p = pos_of(node_tuple[k]);
    if (p < 0) throw std::out_of_range("set_label: node not in network");
    idx = idx * nodes.size() + p;
  }
  labels[idx] = a;
}

uint64_t Network::content_hash() const {
  uint64_t h = core::fnv1a64("net", 3);
  auto mix = [&h](uint64_t v) { h = core::fnv1a64(&v, sizeof v, h); };
  mix(dim);
  mix(nodes.size());
  for (int v : nodes) mix(static_cast<uint64_t>(v));
  for (Atom a : labels) mix(static_cast<uint64_t>(a));
  return h;
}

std::string Network::to_string(const CaAtomStructure& s) const {
  std::ostringstream os;
  os << "nodes {";
  for (std::size_t k = 0; k < nodes.size(); ++k) os << (k ? "," : "") << nodes[k];
  os << "}";
  std::vector<int> pos;
  for (std::size_t idx = 0; idx < labels.size(); ++idx) {
    positions_at(idx, pos);
    os << " (";
    for (int k = 0; k < dim; ++k) os << (k ? "," : "") << nodes[pos[k]];
    os << ")=" << (labels[idx] >= 0 ? s.names[labels[idx]] : std::string("?"));
  }
  return os.str();
}

// --- validity ----------------------------------------------------------------

bool is_valid_network(const CaAtomStructure& s, const Network& n, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (n.dim != s.dim) return fail("dimension mismatch");
  if (n.nodes.empty()) return fail("empty node set");
  std::size_t want = 1;
  for (int k = 0; k < n.dim; ++k) want *= n.nodes.size();
  if (n.labels.size() != want) return fail("label table has wrong size");
  for (Atom a : n.labels)
    if (a < 0 || static_cast<std::size_t>(a) >= s.atom_count()) return fail("label out of range");

  std::vector<int> pos;
  for (std::size_t idx = 0; idx < n.labels.size(); ++idx) {
    n.positions_at(idx, pos);
    Atom a = n.labels[idx];
    // diagonal law both ways
    for (int i = 0; i < n.dim; ++i)
      for (int j = i + 1; j < n.dim; ++j) {
        bool same = pos[i] == pos[j];
        if (same != s.in_diag(a, i, j))
          return fail("diagonal law fails at tuple index " + std::to_string(idx));
      }
    // cylinder law against every tuple differing at exactly one coordinate
    std::vector<int> other = pos;
    for (int i = 0; i < n.dim; ++i) {
      for (int q = 0; q < static_cast<int>(n.nodes.size()); ++q) {
        if (q == pos[i]) continue;
        other[i] = q;
        Atom b = n.label_by_positions(other);
        if (!s.cyl_related(i, a, b))
          return fail("cylinder law fails between tuple " + std::to_string(idx) +
                      " and a coordinate-" + std::to_string(i) + " variant");
      }
      other[i] = pos[i];
    }
    // transposition law
    if (s.has_transp) {
      std::vector<int> swapped = pos;
      for (int i = 0; i < n.dim; ++i)
        for (int j = i + 1; j < n.dim; ++j) {
          swapped = pos;
          std::swap(swapped[i], swapped[j]);
          if (n.label_by_positions(swapped) != s.transpose(i, j, a))
            return fail("transposition law fails at tuple index " + std::to_string(idx));
        }
    }
  }
  return true;
}

bool agree_off(const Network& m, const Network& n, const std::vector<int>& off) {
  if (m.dim != n.dim) return false;
  auto keep = [&](const std::vector<int>& nodes) {
    std::vector<int> out;
    for (int v : nodes)
      if (std::find(off.begin(), off.end(), v) == off.end()) out.push_back(v);
    return out;
  };
  std::vector<int> am = keep(m.nodes), an = keep(n.nodes);
  if (am != an) return false;
  if (am.empty()) return true;
  // every tuple over the shared off-nodes must agree
  std::vector<int> tuple(m.dim, 0);
  std::size_t total = 1;
  for (int k = 0; k < m.dim; ++k) total *= am.size();
  std::vector<int> node_tuple(m.dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t t = idx;
    for (int k = m.dim - 1; k >= 0; --k) {
      node_tuple[k] = am[t % am.size()];
      t /= am.size();
    }
    if (m.label(node_tuple) != n.label(node_tuple)) return false;
  }
  return true;
}

Network apply_node_map(const Network& n, const std::map<int, int>& theta) {
  std::vector<int> newnodes;
  for (const auto& [x, tx] : theta)
    if (n.has_node(tx)) newnodes.push_back(x);
  Network out(n.dim, newnodes);
  std::vector<int> pos, node_tuple(n.dim);
  for (std::size_t idx = 0; idx < out.labels.size(); ++idx) {
    out.positions_at(idx, pos);
    for (int k = 0; k < n.dim; ++k) node_tuple[k] = theta.at(out.nodes[pos[k]]);
    out.labels[idx] = n.label(node_tuple);
  }
  return out;
}

Network restrict_to(const Network& n, const std::vector<int>& keep) {
  std::map<int, int> theta;
  for (int v : keep) theta[v] = v;
  return apply_node_map(n, theta);
}

// --- completion --------------------------------------------------------------

namespace {

struct Completer {
  const CaAtomStructure& s;
  Network net;
  int size;
  std::size_t total;
  std::vector<AtomSet> cand;
  std::vector<std::vector<int>> positions;         // per index
  std::vector<std::vector<std::size_t>> swap_idx;  // per index, per pair rank
  int npairs;
  const std::function<bool(const Network&)>& sink;
  std::size_t emitted = 0;
  bool stopped = false;

  Completer(const CaAtomStructure& s_, Network start,
            const std::function<bool(const Network&)>& sink_)
      : s(s_), net(std::move(start)), sink(sink_) {
    size = static_cast<int>(net.nodes.size());
    total = net.labels.size();
    npairs = s.dim * (s.dim - 1) / 2;
    positions.resize(total);
    swap_idx.assign(total, std::vector<std::size_t>(npairs));
    std::vector<int> pos;
    for (std::size_t idx = 0; idx < total; ++idx) {
      net.positions_at(idx, pos);
      positions[idx] = pos;
      int pr = 0;
      for (int i = 0; i < s.dim; ++i)
        for (int j = i + 1; j < s.dim; ++j, ++pr) {
          std::vector<int> sw = pos;
          std::swap(sw[i], sw[j]);
          swap_idx[idx][pr] = net.index_of_positions(sw);
        }
    }
  }

  // candidate initialisation from the diagonal profile and fixed labels;
  // false when the partial labelling is already incoherent
  bool init() {
    const std::size_t atoms = s.atom_count();
    cand.assign(total, AtomSet(atoms));
    AtomSet full(atoms);
    full.set();
    std::vector<AtomSet> ndiag;  // complements, by pair rank
    {
      int pr = 0;
      for (int i = 0; i < s.dim; ++i)
        for (int j = i + 1; j < s.dim; ++j, ++pr) {
          AtomSet c = s.diag_set(i, j);
          c.flip();
          ndiag.push_back(std::move(c));
        }
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
      cand[idx] = full;
      const auto& pos = positions[idx];
      int pr = 0;
      for (int i = 0; i < s.dim; ++i)
        for (int j = i + 1; j < s.dim; ++j, ++pr) {
          if (pos[i] == pos[j])
            cand[idx] &= s.diag_set(i, j);
          else
            cand[idx] &= ndiag[pr];
        }
      if (net.labels[idx] >= 0) {
        if (!cand[idx].test(net.labels[idx])) return false;
        cand[idx].reset();
        cand[idx].set(net.labels[idx]);
      }
      if (cand[idx].none()) return false;
    }
    // propagate every fixed label once
    for (std::size_t idx = 0; idx < total; ++idx)
      if (net.labels[idx] >= 0 && !push_constraints(idx, net.labels[idx], nullptr)) return false;
    return true;
  }

  // intersect neighbours' candidates with the cylinder rows of `a`, force
  // transposition partners; trail records overwritten candidate sets
  bool push_constraints(std::size_t idx, Atom a,
                        std::vector<std::pair<std::size_t, AtomSet>>* trail) {
    const auto& pos = positions[idx];
    std::vector<int> other;
    for (int i = 0; i < s.dim; ++i) {
      other = pos;
      for (int q = 0; q < size; ++q) {
        if (q == pos[i]) continue;
        other[i] = q;
        std::size_t idx2 = net.index_of_positions(other);
        const AtomSet& row = s.cyl[i][a];
        if (cand[idx2].is_subset_of(row)) continue;
        if (trail) trail->push_back({idx2, cand[idx2]});
        cand[idx2] &= row;
        if (cand[idx2].none()) return false;
      }
    }
    if (s.has_transp) {
      int pr = 0;
      for (int i = 0; i < s.dim; ++i)
        for (int j = i + 1; j < s.dim; ++j, ++pr) {
          std::size_t idx2 = swap_idx[idx][pr];
          Atom forced = s.transpose(i, j, a);
          if (idx2 == idx) {
            if (forced != a) return false;
            continue;
          }
          if (!cand[idx2].test(forced)) return false;
          if (cand[idx2].count() > 1) {
            if (trail) trail->push_back({idx2, cand[idx2]});
            cand[idx2].reset();
            cand[idx2].set(forced);
          }
        }
    }
    return true;
  }

  void dfs() {
    if (stopped) return;
    // pick the unset tuple with fewest candidates
    std::size_t best = total;
    std::size_t best_count = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (net.labels[idx] >= 0) continue;
      std::size_t c = cand[idx].count();
      if (best == total || c < best_count) {
        best = idx;
        best_count = c;
        if (c <= 1) break;
      }
    }
    if (best == total) {
      ++emitted;
      if (!sink(net)) stopped = true;
      return;
    }
    std::vector<Atom> options = core::atoms_of(cand[best]);
    for (Atom a : options) {
      net.labels[best] = a;
      std::vector<std::pair<std::size_t, AtomSet>> trail;
      trail.push_back({best, cand[best]});
      cand[best].reset();
      cand[best].set(a);
      if (push_constraints(best, a, &trail)) dfs();
      for (auto it = trail.rbegin(); it != trail.rend(); ++it) cand[it->first] = it->second;
      net.labels[best] = -1;
      if (stopped) return;
    }
  }
};

}  // namespace

std::size_t enumerate_completions(const CaAtomStructure& s, Network partial,
                                  const std::function<bool(const Network&)>& sink) {
  if (partial.nodes.empty()) return 0;
  Completer c(s, std::move(partial), sink);
  if (!c.init()) return 0;
  c.dfs();
  return c.emitted;
}

std::vector<Network> complete_network(const CaAtomStructure& s, const Network& partial,
                                      std::size_t limit) {
  std::vector<Network> out;
  enumerate_completions(s, partial, [&](const Network& n) {
    out.push_back(n);
    return limit == 0 || out.size() < limit;
  });
  return out;
}

std::vector<Network> initial_networks(const CaAtomStructure& s, Atom a) {
  // merge the starting node names by the atom's diagonal profile
  std::vector<int> rep(s.dim);
  std::iota(rep.begin(), rep.end(), 0);
  auto find = [&](int v) {
    while (rep[v] != v) v = rep[v];
    return v;
  };
  for (int i = 0; i < s.dim; ++i)
    for (int j = i + 1; j < s.dim; ++j)
      if (s.in_diag(a, i, j)) {
        int ri = find(i), rj = find(j);
        if (ri != rj) rep[std::max(ri, rj)] = std::min(ri, rj);
      }
  std::vector<int> tuple(s.dim), nodes;
  for (int i = 0; i < s.dim; ++i) {
    tuple[i] = find(i);
    nodes.push_back(tuple[i]);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  Network start(s.dim, nodes);
  // the merged tuple may still violate the diagonal law (profile not
  // transitive at this atom); init() rejects that and we return no response
  std::vector<int> pos(s.dim);
  for (int i = 0; i < s.dim; ++i) pos[i] = start.pos_of(tuple[i]);
  start.set_label_by_positions(pos, a);
  return complete_network(s, start);
}

// --- hypernetworks -------------------------------------------------------------

std::vector<std::vector<int>> short_tuples(int m, int dim) {
  std::vector<std::vector<int>> out;
  for (int len = 0; len <= m; ++len) {
    if (len == dim) continue;
    std::vector<int> t(len, 0);
    while (true) {
      out.push_back(t);
      int k = len - 1;
      while (k >= 0 && t[k] == m - 1) {
        t[k] = 0;
        --k;
      }
      if (k < 0) break;
      ++t[k];
    }
  }
  return out;
}

bool congruence_forces(const CaAtomStructure& s, const Network& net,
                       const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) return false;
  if (x == y) return true;
  if (x.empty()) return true;
  const int extra = s.dim - 2;
  const int m = static_cast<int>(net.nodes.size());
  std::vector<int> z(extra, 0);
  std::vector<int> tuple(s.dim);
  std::size_t count = 1;
  for (int k = 0; k < extra; ++k) count *= m;
  for (std::size_t zi = 0; zi < count; ++zi) {
    std::size_t t = zi;
    for (int k = extra - 1; k >= 0; --k) {
      z[k] = net.nodes[t % m];
      t /= m;
    }
    bool all = true;
    for (std::size_t k = 0; k < x.size() && all; ++k) {
      tuple[0] = x[k];
      tuple[1] = y[k];
      for (int e = 0; e < extra; ++e) tuple[2 + e] = z[e];
      if (!s.in_diag(net.label(tuple), 0, 1)) all = false;
    }
    if (all) return true;
  }
  return false;
}

bool is_valid_hypernetwork(const CaAtomStructure& s, const Hypernetwork& h, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int m = h.m();
  for (int k = 0; k < m; ++k)
    if (h.net.nodes[k] != k) return fail("node set is not 0..m-1");
  std::string sub;
  if (!is_valid_network(s, h.net, &sub)) return fail("underlying network: " + sub);
  auto tuples = short_tuples(m, s.dim);
  if (h.hyper.size() != tuples.size()) return fail("hyperedge table has wrong size");
  for (int v : h.hyper)
    if (v < 0 || v >= h.lambda) return fail("hyperlabel out of range");
  bool constant = true;
  for (int v : h.hyper)
    if (v != h.hyper.front()) {
      constant = false;
      break;
    }
  if (constant) return true;  // the congruence can never distinguish anything
  // group by length, check forced pairs
  for (std::size_t i = 0; i < tuples.size(); ++i)
    for (std::size_t j = i + 1; j < tuples.size(); ++j) {
      if (tuples[i].size() != tuples[j].size()) continue;
      if (h.hyper[i] == h.hyper[j]) continue;
      if (congruence_forces(s, h.net, tuples[i], tuples[j]))
        return fail("congruence forces equal hyperlabels on two tuples of length " +
                    std::to_string(tuples[i].size()));
    }
  return true;
}

// --- coloured graphs -------------------------------------------------------------

std::string EdgeColour::to_string() const {
  switch (kind) {
    case Kind::GreenTint:
      return "g0^" + std::to_string(index);
    case Kind::Green:
      return "g" + std::to_string(index);
    case Kind::White:
      return "w" + std::to_string(index);
    case Kind::Red: {
      std::string s = "r(" + std::to_string(from) + "," + std::to_string(to) + ")";
      if (copy != 0) s += "^" + std::to_string(copy);
      return s;
    }
  }
  return "?";
}

int ColouredGraph::block_count() const {
  int b = 0;
  for (int v : block_of) b = std::max(b, v + 1);
  return b;
}

int ColouredGraph::pair_rank(int b1, int b2, int blocks) {
  if (b1 > b2) std::swap(b1, b2);
  return b1 * blocks - b1 * (b1 + 1) / 2 + (b2 - b1 - 1);
}

const EdgeColour& ColouredGraph::colour(int b1, int b2) const {
  return edge[pair_rank(b1, b2, block_count())];
}

std::string ColouredGraph::to_string() const {
  std::ostringstream os;
  int blocks = block_count();
  os << "blocks[";
  for (std::size_t i = 0; i < block_of.size(); ++i) os << (i ? "," : "") << block_of[i];
  os << "]";
  for (int b1 = 0; b1 < blocks; ++b1)
    for (int b2 = b1 + 1; b2 < blocks; ++b2) {
      os << " (" << b1 << "," << b2 << ")=" << edge[pair_rank(b1, b2, blocks)].to_string();
    }
  if (!shade.empty()) {
    os << " shades[";
    for (std::size_t i = 0; i < shade.size(); ++i) os << (i ? "," : "") << shade[i];
    os << "]";
  }
  return os.str();
}

}  // namespace neatgames::nets
