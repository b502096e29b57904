#include "neatgames/constructions.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace neatgames::cons {

using core::Atom;
using core::AtomSet;
using core::CaAtomStructure;
using core::RaAtomStructure;
using core::SimpleGraph;
using nets::ColouredGraph;
using nets::EdgeColour;

// --- rainbow signatures ---------------------------------------------------------

RainbowSignature RainbowSignature::basic(int n_greens, int n_reds) {
  RainbowSignature sig;
  sig.dim = 3;
  sig.greens.resize(n_greens);
  std::iota(sig.greens.begin(), sig.greens.end(), 0);
  sig.reds.resize(n_reds);
  std::iota(sig.reds.begin(), sig.reds.end(), 0);
  return sig;
}

RainbowSignature RainbowSignature::interval(int a_lo, int a_hi, int b_lo, int b_hi) {
  RainbowSignature sig;
  sig.dim = 3;
  for (int a = a_lo; a <= a_hi; ++a) sig.greens.push_back(a);
  for (int b = b_lo; b <= b_hi; ++b) sig.reds.push_back(b);
  sig.order_rule = true;
  return sig;
}

std::vector<std::vector<int>> RainbowStructure::shade_sets() const {
  std::vector<std::vector<int>> out;
  if (sig.shades == RainbowSignature::ShadeFamily::FullOnly) {
    out.push_back(sig.greens);
    return out;
  }
  // powerset, subsets ordered by bitmask over the ascending green list
  const std::size_t g = sig.greens.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << g); ++mask) {
    std::vector<int> s;
    for (std::size_t k = 0; k < g; ++k)
      if (mask & (std::size_t(1) << k)) s.push_back(sig.greens[k]);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

// deterministic byte encoding of a coloured graph, used as the lookup key
std::string encode_graph(const ColouredGraph& g) {
  std::ostringstream os;
  for (int b : g.block_of) os << b << '.';
  os << '|';
  for (const auto& e : g.edge)
    os << static_cast<int>(e.kind) << ',' << e.index << ',' << e.from << ',' << e.to << ','
       << e.copy << ';';
  os << '|';
  for (int s : g.shade) os << s << '.';
  return os.str();
}

struct RainbowBuilder {
  const RainbowSignature& sig;
  int n;                                 // dimension
  std::vector<EdgeColour> colours;       // every legal edge colour, in order
  std::vector<std::vector<int>> shades;  // the shade family

  std::vector<ColouredGraph> atoms;
  std::map<std::string, Atom> index;

  explicit RainbowBuilder(const RainbowSignature& sig_) : sig(sig_), n(sig_.dim) {
    if (sig.shades == RainbowSignature::ShadeFamily::FullOnly) {
      shades.push_back(sig.greens);
    } else {
      const std::size_t g = sig.greens.size();
      for (std::size_t mask = 0; mask < (std::size_t(1) << g); ++mask) {
        std::vector<int> set;
        for (std::size_t k = 0; k < g; ++k)
          if (mask & (std::size_t(1) << k)) set.push_back(sig.greens[k]);
        shades.push_back(std::move(set));
      }
    }
    for (int a : sig.greens) {
      EdgeColour c;
      c.kind = EdgeColour::Kind::GreenTint;
      c.index = a;
      colours.push_back(c);
    }
    for (int i = 1; i <= n - 2; ++i) {
      EdgeColour c;
      c.kind = EdgeColour::Kind::Green;
      c.index = i;
      colours.push_back(c);
    }
    for (int i = 0; i <= n - 2; ++i) {
      EdgeColour c;
      c.kind = EdgeColour::Kind::White;
      c.index = i;
      colours.push_back(c);
    }
    for (int p : sig.reds)
      for (int q : sig.reds) {
        if (p == q) continue;
        for (int t = 0; t < sig.copies; ++t) {
          EdgeColour c;
          c.kind = EdgeColour::Kind::Red;
          c.from = p;
          c.to = q;
          c.copy = t;
          colours.push_back(c);
        }
      }
  }

  // is the order constraint {(i,k),(j,l)} an order-preserving partial
  // function from the green order to the red order?
  static bool order_ok(int i, int k, int j, int l) {
    if (i == j) return k == l;
    if (i < j) return k < l;
    return k > l;
  }

  // triangle consistency for the colours on pairs (x,y), (x,z), (y,z) of
  // three distinct blocks x < y < z (red orientation: from = lower block)
  bool triangle_ok(const EdgeColour& xy, const EdgeColour& xz, const EdgeColour& yz) const {
    int greens = xy.is_green() + xz.is_green() + yz.is_green();
    if (greens == 3) return false;
    if (greens == 2) {
      // two greens and a white may be forbidden
      const EdgeColour* g1;
      const EdgeColour* g2;
      const EdgeColour* o;
      if (!xy.is_green()) {
        g1 = &xz;
        g2 = &yz;
        o = &xy;
      } else if (!xz.is_green()) {
        g1 = &xy;
        g2 = &yz;
        o = &xz;
      } else {
        g1 = &xy;
        g2 = &xz;
        o = &yz;
      }
      if (o->kind == EdgeColour::Kind::White) {
        if (g1->kind == EdgeColour::Kind::GreenTint && g2->kind == EdgeColour::Kind::GreenTint &&
            o->index == 0)
          return false;
        if (g1->kind == EdgeColour::Kind::Green && g2->kind == EdgeColour::Kind::Green &&
            g1->index == g2->index && o->index == g1->index)
          return false;
        return true;
      }
      if (o->kind == EdgeColour::Kind::Red && sig.order_rule &&
          g1->kind == EdgeColour::Kind::GreenTint && g2->kind == EdgeColour::Kind::GreenTint) {
        // the two green edges share a corner; the red edge joins the other
        // two.  Which tint goes with which red endpoint depends on where the
        // shared corner sits.
        int tint_u, tint_v, red_u, red_v;
        if (o == &yz) {  // shared corner x; red endpoints y (from) and z (to)
          tint_u = xy.index;
          tint_v = xz.index;
        } else if (o == &xz) {  // shared corner y; red endpoints x, z
          tint_u = xy.index;
          tint_v = yz.index;
        } else {  // o == &xy: shared corner z; red endpoints x, y
          tint_u = xz.index;
          tint_v = yz.index;
        }
        red_u = o->from;
        red_v = o->to;
        return order_ok(tint_u, red_u, tint_v, red_v);
      }
      return true;
    }
    // all red: the endpoint data must come from one assignment of red-order
    // values to the three corners
    if (xy.kind == EdgeColour::Kind::Red && xz.kind == EdgeColour::Kind::Red &&
        yz.kind == EdgeColour::Kind::Red) {
      return xy.from == xz.from && xy.to == yz.from && xz.to == yz.to;
    }
    return true;
  }

  // all (n-1)-subsets of {0..blocks-1} in lex order
  static std::vector<std::vector<int>> subsets_of_size(int blocks, int size) {
    std::vector<std::vector<int>> out;
    if (size > blocks || size <= 0) return out;
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      out.push_back(idx);
      int k = size - 1;
      while (k >= 0 && idx[k] == blocks - size + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int t = k + 1; t < size; ++t) idx[t] = idx[t - 1] + 1;
    }
    return out;
  }

  void build() {
    // restricted growth strings = set partitions of the coordinates
    std::vector<int> rgs(n, 0);
    while (true) {
      emit_partition(rgs);
      // next rgs
      int k = n - 1;
      while (k > 0) {
        int maxv = 0;
        for (int t = 0; t < k; ++t) maxv = std::max(maxv, rgs[t]);
        if (rgs[k] <= maxv) {
          ++rgs[k];
          for (int t = k + 1; t < n; ++t) rgs[t] = 0;
          break;
        }
        --k;
      }
      if (k == 0) break;
    }
  }

  void emit_partition(const std::vector<int>& rgs) {
    int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    int pairs = blocks * (blocks - 1) / 2;
    std::vector<EdgeColour> edge(pairs);
    dfs_edges(rgs, blocks, edge, 0);
  }

  void dfs_edges(const std::vector<int>& rgs, int blocks, std::vector<EdgeColour>& edge,
                 int rank) {
    int pairs = blocks * (blocks - 1) / 2;
    if (rank == pairs) {
      emit_shades(rgs, blocks, edge);
      return;
    }
    // pair_rank order is lex over (i, j); recover (i, j) from rank
    int i = 0, j = 1, r = rank;
    for (i = 0; i < blocks; ++i) {
      int row = blocks - i - 1;
      if (r < row) {
        j = i + 1 + r;
        break;
      }
      r -= row;
    }
    for (const auto& col : colours) {
      edge[rank] = col;
      bool ok = true;
      // check the triangles {u, i, j} for u < i: their last pair is (i, j)
      for (int u = 0; u < i && ok; ++u) {
        const EdgeColour& ui = edge[ColouredGraph::pair_rank(u, i, blocks)];
        const EdgeColour& uj = edge[ColouredGraph::pair_rank(u, j, blocks)];
        ok = triangle_ok(ui, uj, edge[rank]);
      }
      if (ok) dfs_edges(rgs, blocks, edge, rank + 1);
    }
  }

  void emit_shades(const std::vector<int>& rgs, int blocks, const std::vector<EdgeColour>& edge) {
    auto subs = subsets_of_size(blocks, n - 1);
    std::vector<int> slot(subs.size(), -1);
    // which slots are green-free, and which tints their shades must contain
    std::vector<std::vector<int>> required(subs.size());
    std::vector<int> open;
    for (std::size_t t = 0; t < subs.size(); ++t) {
      bool greenfree = true;
      for (std::size_t p = 0; p < subs[t].size() && greenfree; ++p)
        for (std::size_t q = p + 1; q < subs[t].size(); ++q)
          if (edge[ColouredGraph::pair_rank(subs[t][p], subs[t][q], blocks)].is_green()) {
            greenfree = false;
            break;
          }
      if (!greenfree) continue;
      open.push_back(static_cast<int>(t));
      // cone rule: an apex z outside the subset whose edges to it are one
      // tinted green plus each plain green exactly once forces the tint in
      for (int z = 0; z < blocks; ++z) {
        if (std::find(subs[t].begin(), subs[t].end(), z) != subs[t].end()) continue;
        int tinted = 0, tint = 0;
        std::vector<int> plain;
        bool conelike = true;
        for (int y : subs[t]) {
          const EdgeColour& c = edge[ColouredGraph::pair_rank(y, z, blocks)];
          if (c.kind == EdgeColour::Kind::GreenTint) {
            ++tinted;
            tint = c.index;
          } else if (c.kind == EdgeColour::Kind::Green) {
            plain.push_back(c.index);
          } else {
            conelike = false;
            break;
          }
        }
        if (!conelike || tinted != 1) continue;
        std::sort(plain.begin(), plain.end());
        std::vector<int> want;
        for (int ii = 1; ii <= n - 2; ++ii) want.push_back(ii);
        if (plain == want) required[t].push_back(tint);
      }
    }
    // assign shades to the open slots
    dfs_shades(rgs, edge, required, open, 0, slot);
  }

  void dfs_shades(const std::vector<int>& rgs, const std::vector<EdgeColour>& edge,
                  const std::vector<std::vector<int>>& required, const std::vector<int>& open,
                  std::size_t at, std::vector<int>& slot) {
    if (at == open.size()) {
      ColouredGraph g;
      g.dim = n;
      g.block_of = rgs;
      g.edge = edge;
      g.shade = slot;
      Atom id = static_cast<Atom>(atoms.size());
      atoms.push_back(g);
      index[encode_graph(g)] = id;
      return;
    }
    int t = open[at];
    for (std::size_t f = 0; f < shades.size(); ++f) {
      bool ok = true;
      for (int tint : required[t])
        if (std::find(shades[f].begin(), shades[f].end(), tint) == shades[f].end()) {
          ok = false;
          break;
        }
      if (!ok) continue;
      slot[t] = static_cast<int>(f);
      dfs_shades(rgs, edge, required, open, at + 1, slot);
    }
    slot[t] = -1;
  }
};

// face of a coloured graph off one coordinate: the induced pattern on the
// other coordinates, encoded as a string for class grouping
std::string face_key(const ColouredGraph& g, int coord, int n) {
  int blocks = g.block_count();
  // surviving blocks in order of first occurrence among remaining coordinates
  std::vector<int> newid(blocks, -1);
  std::vector<int> order;
  std::ostringstream os;
  for (int c = 0; c < n; ++c) {
    if (c == coord) continue;
    int b = g.block_of[c];
    if (newid[b] < 0) {
      newid[b] = static_cast<int>(order.size());
      order.push_back(b);
    }
    os << newid[b] << '.';
  }
  os << '|';
  int k = static_cast<int>(order.size());
  for (int b1 = 0; b1 < k; ++b1)
    for (int b2 = b1 + 1; b2 < k; ++b2) {
      int o1 = order[b1], o2 = order[b2];
      bool flip = o1 > o2;
      const EdgeColour& e = g.edge[ColouredGraph::pair_rank(std::min(o1, o2), std::max(o1, o2),
                                                            blocks)];
      os << static_cast<int>(e.kind) << ',' << e.index << ',' << (flip ? e.to : e.from) << ','
         << (flip ? e.from : e.to) << ',' << e.copy << ';';
    }
  os << '|';
  // shades on (n-1)-subsets made of surviving blocks
  auto subs = RainbowBuilder::subsets_of_size(blocks, n - 1);
  std::vector<std::pair<std::vector<int>, int>> kept;
  for (std::size_t t = 0; t < subs.size(); ++t) {
    std::vector<int> mapped;
    bool all = true;
    for (int b : subs[t]) {
      if (newid[b] < 0) {
        all = false;
        break;
      }
      mapped.push_back(newid[b]);
    }
    if (!all) continue;
    std::sort(mapped.begin(), mapped.end());
    kept.push_back({mapped, g.shade[t]});
  }
  std::sort(kept.begin(), kept.end());
  for (const auto& [sub, sh] : kept) {
    for (int b : sub) os << b << ',';
    os << '=' << sh << ';';
  }
  return os.str();
}

// the graph with coordinates i and j swapped, blocks renumbered canonically
ColouredGraph transpose_graph(const ColouredGraph& g, int i, int j, int n) {
  std::vector<int> perm_block(g.block_of);
  std::swap(perm_block[i], perm_block[j]);
  // renumber by first occurrence
  int blocks = g.block_count();
  std::vector<int> newid(blocks, -1);
  ColouredGraph out;
  out.dim = n;
  out.block_of.resize(n);
  int next = 0;
  for (int c = 0; c < n; ++c) {
    int b = perm_block[c];
    if (newid[b] < 0) newid[b] = next++;
    out.block_of[c] = newid[b];
  }
  out.edge.resize(g.edge.size());
  for (int b1 = 0; b1 < blocks; ++b1)
    for (int b2 = b1 + 1; b2 < blocks; ++b2) {
      EdgeColour e = g.edge[ColouredGraph::pair_rank(b1, b2, blocks)];
      int n1 = newid[b1], n2 = newid[b2];
      if (n1 > n2) std::swap(e.from, e.to);
      out.edge[ColouredGraph::pair_rank(std::min(n1, n2), std::max(n1, n2), blocks)] = e;
    }
  auto subs = RainbowBuilder::subsets_of_size(blocks, n - 1);
  out.shade.assign(subs.size(), -1);
  for (std::size_t t = 0; t < subs.size(); ++t) {
    std::vector<int> mapped;
    for (int b : subs[t]) mapped.push_back(newid[b]);
    std::sort(mapped.begin(), mapped.end());
    // find the rank of `mapped` among the subsets
    for (std::size_t u = 0; u < subs.size(); ++u)
      if (subs[u] == mapped) {
        out.shade[u] = g.shade[t];
        break;
      }
  }
  return out;
}

}  // namespace

core::Atom RainbowStructure::atom_of_graph(const ColouredGraph& g) const {
  auto it = graph_index.find(encode_graph(g));
  return it == graph_index.end() ? -1 : it->second;
}

RainbowStructure build_rainbow(const RainbowSignature& sig) {
  if (sig.dim < 3) throw std::invalid_argument("rainbow structures need dimension >= 3");
  if (sig.greens.empty() || sig.reds.size() < 2)
    throw std::invalid_argument("rainbow structures need greens and at least two reds");
  RainbowBuilder b(sig);
  b.build();

  RainbowStructure rs;
  rs.sig = sig;
  rs.atom_graph = std::move(b.atoms);
  for (const auto& [key, id] : b.index) rs.graph_index[key] = id;

  const std::size_t count = rs.atom_graph.size();
  CaAtomStructure& s = rs.frame;
  s.dim = sig.dim;
  s.names.reserve(count);
  for (const auto& g : rs.atom_graph) s.names.push_back(g.to_string());

  // cylinder classes by face key
  for (int i = 0; i < s.dim; ++i) {
    std::map<std::string, std::vector<Atom>> groups;
    for (Atom a = 0; a < static_cast<Atom>(count); ++a)
      groups[face_key(rs.atom_graph[a], i, s.dim)].push_back(a);
    std::vector<std::vector<Atom>> classes;
    classes.reserve(groups.size());
    for (auto& [k, v] : groups) classes.push_back(std::move(v));
    s.set_cyl_from_classes(i, classes);
  }

  // diagonals
  int pairs = s.dim * (s.dim - 1) / 2;
  s.diag.assign(pairs, AtomSet(count));
  for (int i = 0; i < s.dim; ++i)
    for (int j = i + 1; j < s.dim; ++j)
      for (Atom a = 0; a < static_cast<Atom>(count); ++a)
        if (rs.atom_graph[a].block_of[i] == rs.atom_graph[a].block_of[j])
          s.diag[s.pair_index(i, j)].set(a);

  // transpositions
  s.has_transp = true;
  s.transp.assign(pairs, std::vector<Atom>(count));
  for (int i = 0; i < s.dim; ++i)
    for (int j = i + 1; j < s.dim; ++j)
      for (Atom a = 0; a < static_cast<Atom>(count); ++a) {
        ColouredGraph t = transpose_graph(rs.atom_graph[a], i, j, s.dim);
        Atom target = rs.atom_of_graph(t);
        if (target < 0) throw std::logic_error("transposition left the atom set");
        s.transp[s.pair_index(i, j)][a] = target;
      }

  return rs;
}

// --- conversions -----------------------------------------------------------------

nets::Network graph_to_network(const RainbowStructure& rs, const ColouredGraph& g) {
  const int n = rs.sig.dim;
  int blocks = g.block_count();
  std::vector<int> nodes(blocks);
  std::iota(nodes.begin(), nodes.end(), 0);
  nets::Network out(n, nodes);
  std::vector<int> pos(n);
  auto subs_all = RainbowBuilder::subsets_of_size(blocks, n - 1);
  for (std::size_t idx = 0; idx < out.labels.size(); ++idx) {
    out.positions_at(idx, pos);
    // induced pattern on the tuple of blocks pos[0..n-1]
    ColouredGraph at;
    at.dim = n;
    at.block_of.resize(n);
    std::vector<int> newid(blocks, -1);
    std::vector<int> order;
    for (int c = 0; c < n; ++c) {
      int b = pos[c];
      if (newid[b] < 0) {
        newid[b] = static_cast<int>(order.size());
        order.push_back(b);
      }
      at.block_of[c] = newid[b];
    }
    int k = static_cast<int>(order.size());
    at.edge.resize(k * (k - 1) / 2);
    for (int b1 = 0; b1 < k; ++b1)
      for (int b2 = b1 + 1; b2 < k; ++b2) {
        int o1 = order[b1], o2 = order[b2];
        EdgeColour e = g.edge[ColouredGraph::pair_rank(std::min(o1, o2), std::max(o1, o2), blocks)];
        if (o1 > o2) std::swap(e.from, e.to);
        at.edge[ColouredGraph::pair_rank(b1, b2, k)] = e;
      }
    auto subs_at = RainbowBuilder::subsets_of_size(k, n - 1);
    at.shade.assign(subs_at.size(), -1);
    for (std::size_t t = 0; t < subs_at.size(); ++t) {
      // translate to a subset of g's blocks and copy its shade
      std::vector<int> orig;
      for (int b : subs_at[t]) orig.push_back(order[b]);
      std::sort(orig.begin(), orig.end());
      bool greenfree = true;
      for (std::size_t p = 0; p < orig.size() && greenfree; ++p)
        for (std::size_t q = p + 1; q < orig.size(); ++q)
          if (g.edge[ColouredGraph::pair_rank(orig[p], orig[q], blocks)].is_green()) {
            greenfree = false;
            break;
          }
      if (!greenfree) continue;
      for (std::size_t u = 0; u < subs_all.size(); ++u)
        if (subs_all[u] == orig) {
          at.shade[t] = g.shade[u];
          break;
        }
    }
    Atom a = rs.atom_of_graph(at);
    if (a < 0)
      throw std::invalid_argument("graph is not consistent with the signature (tuple " +
                                  std::to_string(idx) + ")");
    out.labels[idx] = a;
  }
  return out;
}

nets::ColouredGraph network_to_graph(const RainbowStructure& rs, const nets::Network& n,
                                     const std::vector<int>& node_tuple) {
  return rs.atom_graph[n.label(node_tuple)];
}

// --- red splitting ----------------------------------------------------------------

RainbowStructure split_reds(const RainbowStructure& s, int copies) {
  RainbowSignature sig = s.sig;
  sig.copies = copies;
  return build_rainbow(sig);
}

namespace {
ColouredGraph forget_copies(const ColouredGraph& g) {
  ColouredGraph out = g;
  for (auto& e : out.edge)
    if (e.kind == EdgeColour::Kind::Red) e.copy = 0;
  return out;
}
int red_edge_count(const ColouredGraph& g) {
  int r = 0;
  for (const auto& e : g.edge)
    if (e.kind == EdgeColour::Kind::Red) ++r;
  return r;
}
}  // namespace

ThetaReport theta_check(const RainbowStructure& base, const RainbowStructure& split, int jobs) {
  ThetaReport rep;
  (void)jobs;
  const int copies = split.sig.copies;
  const std::size_t nb = base.atom_count();
  const std::size_t ns = split.atom_count();

  std::vector<std::vector<Atom>> theta(nb);
  std::vector<char> hit(ns, 0);
  bool fail = false;
  for (Atom a = 0; a < static_cast<Atom>(ns) && !fail; ++a) {
    Atom b = base.atom_of_graph(forget_copies(split.atom_graph[a]));
    if (b < 0) {
      rep.detail = "a split atom forgets to no base atom";
      fail = true;
      break;
    }
    theta[b].push_back(a);
    hit[a] = 1;
  }
  if (fail) return rep;
  rep.injective = true;  // theta is a function split->base, so the copy sets
                         // of distinct base atoms are disjoint by definition;
                         // record that every base atom is reached
  for (Atom b = 0; b < static_cast<Atom>(nb); ++b)
    if (theta[b].empty()) {
      rep.injective = false;
      rep.detail = "base atom with no copies: " + base.frame.names[b];
      return rep;
    }
  rep.partition = std::all_of(hit.begin(), hit.end(), [](char c) { return c == 1; });

  rep.counts = true;
  for (Atom b = 0; b < static_cast<Atom>(nb); ++b) {
    std::size_t want = 1;
    for (int r = red_edge_count(base.atom_graph[b]); r > 0; --r) want *= copies;
    if (theta[b].size() != want) {
      rep.counts = false;
      rep.detail = "copy count mismatch at " + base.frame.names[b];
      break;
    }
  }

  // lifting at the structural level: graph validity is a conjunction of
  // per-triangle conditions and copy indices never occur in any of them, so
  // exhaustively checking all colour triples both ways transfers consistency
  // between base and split on every graph
  RainbowBuilder bb(base.sig), sb(split.sig);
  rep.lifting = true;
  for (const auto& c1 : sb.colours)
    for (const auto& c2 : sb.colours)
      for (const auto& c3 : sb.colours) {
        auto f = [](EdgeColour e) {
          if (e.kind == EdgeColour::Kind::Red) e.copy = 0;
          return e;
        };
        if (sb.triangle_ok(c1, c2, c3) != bb.triangle_ok(f(c1), f(c2), f(c3))) {
          rep.lifting = false;
          rep.detail = "triangle consistency differs after forgetting copies";
          return rep;
        }
      }
  return rep;
}

// --- Monk algebras ----------------------------------------------------------------

RaAtomStructure build_monk_ra(const SimpleGraph& g, int colours) {
  RaAtomStructure ra;
  ra.kind = RaAtomStructure::TripleKind::Monk;
  RaAtomStructure::MonkParams mp;
  mp.vertices = g.order;
  mp.colours = colours;
  mp.edges = g.edges;
  ra.monk = mp;
  ra.names.push_back("id");
  ra.monk_atom.push_back({-1, -1});
  for (int v = 0; v < g.order; ++v)
    for (int c = 0; c < colours; ++c) {
      ra.names.push_back("a(" + std::to_string(v) + "," + std::to_string(c) + ")");
      ra.monk_atom.push_back({v, c});
    }
  const std::size_t n = ra.names.size();
  ra.identity = AtomSet(n);
  ra.identity.set(0);
  ra.converse.resize(n);
  std::iota(ra.converse.begin(), ra.converse.end(), 0);
  return ra;
}

// --- basic matrices ----------------------------------------------------------------

CaAtomStructure basic_matrices(const RaAtomStructure& ra, int m, bool* cylindric_basis,
                               core::ValidationReport* report) {
  if (m < 2) throw std::invalid_argument("matrices need m >= 2");
  const Atom atoms = static_cast<Atom>(ra.atom_count());
  std::vector<Atom> ids = core::atoms_of(ra.identity);

  // upper-triangle pairs in lex order
  std::vector<std::pair<int, int>> prs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) prs.push_back({i, j});

  std::vector<std::vector<Atom>> mats;  // flattened m*m entry tables
  std::vector<Atom> entry(m * m, -1);
  // diagonal choices then edges, depth-first, deterministic
  std::function<void(std::size_t)> dfs_edge = [&](std::size_t at) {
    if (at == prs.size()) {
      mats.push_back(entry);
      return;
    }
    auto [i, j] = prs[at];
    for (Atom a = 0; a < atoms; ++a) {
      if (ra.is_identity(a)) continue;  // off-diagonal entries are diversity atoms
      bool ok = true;
      // triangles through every third row already fixed
      for (int k = 0; k < m && ok; ++k) {
        if (k == i || k == j) continue;
        Atom ik = entry[i * m + k], kj = entry[k * m + j];
        if (ik < 0 || kj < 0) continue;
        ok = ra.consistent(ik, kj, a);
      }
      // degenerate triangles: b_ii through (b_ij, b_ji)
      if (ok) ok = ra.consistent(a, ra.converse[a], entry[i * m + i]);
      if (ok) ok = ra.consistent(ra.converse[a], a, entry[j * m + j]);
      if (!ok) continue;
      entry[i * m + j] = a;
      entry[j * m + i] = ra.converse[a];
      dfs_edge(at + 1);
      entry[i * m + j] = entry[j * m + i] = -1;
    }
  };
  std::function<void(int)> dfs_diag = [&](int i) {
    if (i == m) {
      dfs_edge(0);
      return;
    }
    for (Atom e : ids) {
      entry[i * m + i] = e;
      dfs_diag(i + 1);
      entry[i * m + i] = -1;
    }
  };
  dfs_diag(0);

  CaAtomStructure s;
  s.dim = m;
  const std::size_t count = mats.size();
  std::map<std::vector<Atom>, Atom> lookup;
  for (std::size_t t = 0; t < count; ++t) {
    std::ostringstream nm;
    nm << "[";
    for (std::size_t p = 0; p < prs.size(); ++p)
      nm << (p ? " " : "") << ra.names[mats[t][prs[p].first * m + prs[p].second]];
    nm << "]";
    s.names.push_back(nm.str());
    lookup[mats[t]] = static_cast<Atom>(t);
  }

  // cylinders: agreement off row/column i
  for (int i = 0; i < m; ++i) {
    std::map<std::vector<Atom>, std::vector<Atom>> groups;
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<Atom> key;
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          if (r != i && c != i) key.push_back(mats[t][r * m + c]);
      groups[key].push_back(static_cast<Atom>(t));
    }
    std::vector<std::vector<Atom>> classes;
    for (auto& [k, v] : groups) classes.push_back(std::move(v));
    s.set_cyl_from_classes(i, classes);
  }

  int pairs = m * (m - 1) / 2;
  s.diag.assign(pairs, AtomSet(count));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (std::size_t t = 0; t < count; ++t)
        if (ra.is_identity(mats[t][i * m + j])) s.diag[s.pair_index(i, j)].set(t);

  s.has_transp = true;
  s.transp.assign(pairs, std::vector<Atom>(count));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (std::size_t t = 0; t < count; ++t) {
        std::vector<Atom> sw = mats[t];
        for (int c = 0; c < m; ++c) std::swap(sw[i * m + c], sw[j * m + c]);
        for (int r = 0; r < m; ++r) std::swap(sw[r * m + i], sw[r * m + j]);
        auto it = lookup.find(sw);
        if (it == lookup.end()) throw std::logic_error("matrix transposition left the set");
        s.transp[s.pair_index(i, j)][t] = it->second;
      }

  core::ValidationReport rep = validate_ca_frame(s);
  if (report) *report = rep;
  if (cylindric_basis) *cylindric_basis = rep.ok();
  return s;
}

// --- blur structures ---------------------------------------------------------------

bool index_blur(long i, long j, long k) { return core::index_blur_rule(i, j, k); }

RaAtomStructure build_blur_structure(int subset_size, int index_count, int copies,
                                     bool points_outside_blur) {
  if (subset_size <= 0 || subset_size > index_count)
    throw std::invalid_argument("blur subsets must fit the index set");
  RaAtomStructure ra;
  ra.kind = RaAtomStructure::TripleKind::Blur;
  RaAtomStructure::BlurParams bp;
  bp.subset_size = subset_size;
  bp.index_count = index_count;
  bp.copies = copies;
  bp.points_outside_blur = points_outside_blur;
  ra.blur = bp;
  ra.names.push_back("id");
  ra.blur_atom.push_back({});

  // l-subsets of {0..index_count-1} in lex order
  std::vector<int> idx(subset_size);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<uint32_t> masks;
  std::vector<std::vector<int>> sets;
  while (true) {
    uint32_t mask = 0;
    for (int v : idx) mask |= (1u << v);
    masks.push_back(mask);
    sets.push_back(idx);
    int k = subset_size - 1;
    while (k >= 0 && idx[k] == index_count - subset_size + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int t = k + 1; t < subset_size; ++t) idx[t] = idx[t - 1] + 1;
  }

  for (int copy = 0; copy < copies; ++copy)
    for (std::size_t w = 0; w < masks.size(); ++w) {
      std::vector<int> points;
      if (points_outside_blur) {
        points.resize(index_count);
        std::iota(points.begin(), points.end(), 0);
      } else {
        points = sets[w];
      }
      for (int p : points) {
        std::ostringstream nm;
        nm << "a" << copy << "[" << p << "|{";
        for (std::size_t t = 0; t < sets[w].size(); ++t) nm << (t ? "," : "") << sets[w][t];
        nm << "}]";
        ra.names.push_back(nm.str());
        ra.blur_atom.push_back({copy, p, masks[w]});
      }
    }

  const std::size_t n = ra.names.size();
  ra.identity = AtomSet(n);
  ra.identity.set(0);
  ra.converse.resize(n);
  std::iota(ra.converse.begin(), ra.converse.end(), 0);
  return ra;
}

// --- full set frames ----------------------------------------------------------------

core::Atom full_set_atom(int dim, int base, const std::vector<int>& tuple) {
  Atom a = 0;
  for (int k = 0; k < dim; ++k) a = a * base + tuple[k];
  return a;
}

std::vector<int> full_set_tuple(int dim, int base, core::Atom a) {
  std::vector<int> t(dim);
  for (int k = dim - 1; k >= 0; --k) {
    t[k] = a % base;
    a /= base;
  }
  return t;
}

CaAtomStructure build_full_set_structure(int dim, int base) {
  if (dim < 2 || base < 1) throw std::invalid_argument("need dim >= 2 and base >= 1");
  CaAtomStructure s;
  s.dim = dim;
  std::size_t count = 1;
  for (int k = 0; k < dim; ++k) count *= base;
  s.names.reserve(count);
  for (std::size_t a = 0; a < count; ++a) {
    auto t = full_set_tuple(dim, base, static_cast<Atom>(a));
    std::ostringstream nm;
    nm << "(";
    for (int k = 0; k < dim; ++k) nm << (k ? "," : "") << t[k];
    nm << ")";
    s.names.push_back(nm.str());
  }

  for (int i = 0; i < dim; ++i) {
    std::map<std::vector<int>, std::vector<Atom>> groups;
    for (std::size_t a = 0; a < count; ++a) {
      auto t = full_set_tuple(dim, base, static_cast<Atom>(a));
      t.erase(t.begin() + i);
      groups[t].push_back(static_cast<Atom>(a));
    }
    std::vector<std::vector<Atom>> classes;
    for (auto& [k, v] : groups) classes.push_back(std::move(v));
    s.set_cyl_from_classes(i, classes);
  }

  int pairs = dim * (dim - 1) / 2;
  s.diag.assign(pairs, AtomSet(count));
  s.has_transp = true;
  s.transp.assign(pairs, std::vector<Atom>(count));
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      for (std::size_t a = 0; a < count; ++a) {
        auto t = full_set_tuple(dim, base, static_cast<Atom>(a));
        if (t[i] == t[j]) s.diag[s.pair_index(i, j)].set(a);
        std::swap(t[i], t[j]);
        s.transp[s.pair_index(i, j)][a] = full_set_atom(dim, base, t);
      }
    }
  return s;
}

// --- chromatic number ----------------------------------------------------------------

namespace {

bool k_colourable(const SimpleGraph& g, int k, std::vector<int>& colour) {
  // DSATUR-style: branch on the uncoloured vertex with the largest number of
  // distinct neighbour colours, allow colours 0..min(k, used+1)-1
  int n = g.order;
  int pick = -1;
  int best_sat = -1, best_deg = -1;
  for (int v = 0; v < n; ++v) {
    if (colour[v] >= 0) continue;
    std::vector<char> seen(k, 0);
    int sat = 0;
    for (auto u = g.adj[v].find_first(); u != AtomSet::npos; u = g.adj[v].find_next(u))
      if (colour[u] >= 0 && !seen[colour[u]]) {
        seen[colour[u]] = 1;
        ++sat;
      }
    int deg = static_cast<int>(g.adj[v].count());
    if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
      best_sat = sat;
      best_deg = deg;
      pick = v;
    }
  }
  if (pick < 0) return true;
  int used = 0;
  for (int v = 0; v < n; ++v) used = std::max(used, colour[v] + 1);
  int limit = std::min(k, used + 1);
  for (int c = 0; c < limit; ++c) {
    bool ok = true;
    for (auto u = g.adj[pick].find_first(); u != AtomSet::npos; u = g.adj[pick].find_next(u))
      if (colour[u] == c) {
        ok = false;
        break;
      }
    if (!ok) continue;
    colour[pick] = c;
    if (k_colourable(g, k, colour)) return true;
    colour[pick] = -1;
  }
  return false;
}

}  // namespace

int chromatic_number(const SimpleGraph& g) {
  if (g.order == 0) return 0;
  if (g.edges.empty()) return 1;
  // greedy clique lower bound, highest degree first
  std::vector<int> by_deg(g.order);
  std::iota(by_deg.begin(), by_deg.end(), 0);
  std::sort(by_deg.begin(), by_deg.end(), [&](int a, int b) {
    return g.adj[a].count() > g.adj[b].count();
  });
  std::vector<int> clique;
  for (int v : by_deg) {
    bool ok = true;
    for (int u : clique)
      if (!g.adjacent(u, v)) {
        ok = false;
        break;
      }
    if (ok) clique.push_back(v);
  }
  int lb = static_cast<int>(clique.size());
  for (int k = lb; k <= g.order; ++k) {
    std::vector<int> colour(g.order, -1);
    if (k_colourable(g, k, colour)) return k;
  }
  return g.order;
}

}  // namespace neatgames::cons
