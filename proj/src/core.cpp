#include "neatgames/core.hpp"

#include <algorithm>
#include <sstream>

namespace neatgames::core {

uint64_t fnv1a64(const void* data, std::size_t len, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {
void hash_u64(uint64_t& h, uint64_t v) { h = fnv1a64(&v, sizeof v, h); }
void hash_str(uint64_t& h, const std::string& s) {
  h = fnv1a64(s.data(), s.size(), h);
  hash_u64(h, 0xff);  // delimiter
}
void hash_bits(uint64_t& h, const AtomSet& bs) {
  std::vector<AtomSet::block_type> blocks(bs.num_blocks());
  boost::to_block_range(bs, blocks.begin());
  for (auto b : blocks) hash_u64(h, b);
}
}  // namespace

AtomSet make_atom_set(std::size_t universe, std::initializer_list<Atom> members) {
  AtomSet s(universe);
  for (Atom a : members) s.set(a);
  return s;
}

std::vector<Atom> atoms_of(const AtomSet& s) {
  std::vector<Atom> out;
  for (auto i = s.find_first(); i != AtomSet::npos; i = s.find_next(i))
    out.push_back(static_cast<Atom>(i));
  return out;
}

void ValidationReport::add(std::string check, std::string detail) {
  issues.push_back({std::move(check), std::move(detail)});
}

bool ValidationReport::mentions(const std::string& needle) const {
  for (const auto& is : issues)
    if (is.check.find(needle) != std::string::npos) return true;
  return false;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  if (structural_error) os << "structural error\n";
  for (const auto& is : issues) os << is.check << ": " << is.detail << "\n";
  return os.str();
}

// --- CaAtomStructure --------------------------------------------------------

int CaAtomStructure::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // pairs (0,1),(0,2)..(0,n-1),(1,2).. in lex order
  return i * dim - i * (i + 1) / 2 + (j - i - 1);
}

bool CaAtomStructure::in_diag(Atom a, int i, int j) const {
  if (i == j) return true;
  return diag[pair_index(i, j)].test(a);
}

const AtomSet& CaAtomStructure::diag_set(int i, int j) const {
  return diag[pair_index(i, j)];
}

Atom CaAtomStructure::transpose(int i, int j, Atom a) const {
  if (i == j) return a;
  return transp[pair_index(i, j)][a];
}

void CaAtomStructure::set_cyl_from_classes(int i, const std::vector<std::vector<Atom>>& classes) {
  const std::size_t n = atom_count();
  if (cyl.size() != static_cast<std::size_t>(dim)) cyl.resize(dim);
  if (cls_of_.size() != static_cast<std::size_t>(dim)) {
    cls_of_.resize(dim);
    cls_members_.resize(dim);
  }
  cyl[i].assign(n, AtomSet(n));
  cls_of_[i].assign(n, -1);
  cls_members_[i].clear();
  for (const auto& cls : classes) {
    AtomSet bits(n);
    for (Atom a : cls) bits.set(a);
    std::vector<Atom> sorted = cls;
    std::sort(sorted.begin(), sorted.end());
    int id = static_cast<int>(cls_members_[i].size());
    cls_members_[i].push_back(std::move(sorted));
    for (Atom a : cls) {
      cyl[i][a] = bits;
      cls_of_[i][a] = id;
    }
  }
}

void CaAtomStructure::build_cyl_classes() {
  const std::size_t n = atom_count();
  cls_of_.assign(dim, std::vector<int>(n, -1));
  cls_members_.assign(dim, {});
  for (int i = 0; i < dim; ++i) {
    for (Atom a = 0; a < static_cast<Atom>(n); ++a) {
      if (cls_of_[i][a] >= 0) continue;
      const AtomSet& cls = cyl[i][a];
      if (!cls.test(a)) throw std::runtime_error("cyl relation not reflexive");
      std::vector<Atom> members = atoms_of(cls);
      for (Atom b : members) {
        if (cyl[i][b] != cls) throw std::runtime_error("cyl relation not an equivalence");
      }
      int id = static_cast<int>(cls_members_[i].size());
      for (Atom b : members) cls_of_[i][b] = id;
      cls_members_[i].push_back(std::move(members));
    }
  }
}

uint64_t CaAtomStructure::structure_hash() const {
  uint64_t h = fnv1a64("ca", 2);
  hash_u64(h, dim);
  hash_u64(h, atom_count());
  for (const auto& nm : names) hash_str(h, nm);
  for (const auto& rel : cyl)
    for (const auto& row : rel) hash_bits(h, row);
  for (const auto& d : diag) hash_bits(h, d);
  hash_u64(h, has_transp);
  if (has_transp)
    for (const auto& perm : transp)
      for (Atom a : perm) hash_u64(h, static_cast<uint64_t>(a));
  return h;
}

// --- validation -------------------------------------------------------------

ValidationReport validate_ca_frame(const CaAtomStructure& s) {
  ValidationReport rep;
  const std::size_t n = s.atom_count();
  const std::size_t pairs = static_cast<std::size_t>(s.dim) * (s.dim - 1) / 2;

  if (s.dim < 2) {
    rep.structural_error = true;
    rep.add("structure", "dimension must be at least 2");
    return rep;
  }
  if (s.cyl.size() != static_cast<std::size_t>(s.dim) || s.diag.size() != pairs) {
    rep.structural_error = true;
    rep.add("structure", "relation tables do not match the dimension");
    return rep;
  }
  for (int i = 0; i < s.dim; ++i) {
    if (s.cyl[i].size() != n) {
      rep.structural_error = true;
      rep.add("structure", "cyl " + std::to_string(i) + " has wrong size");
      return rep;
    }
    for (const auto& row : s.cyl[i])
      if (row.size() != n) {
        rep.structural_error = true;
        rep.add("structure", "cyl " + std::to_string(i) + " row has wrong universe");
        return rep;
      }
  }
  for (const auto& d : s.diag)
    if (d.size() != n) {
      rep.structural_error = true;
      rep.add("structure", "diagonal set has wrong universe");
      return rep;
    }
  if (s.has_transp) {
    if (s.transp.size() != pairs) {
      rep.structural_error = true;
      rep.add("structure", "transposition table does not match the dimension");
      return rep;
    }
    for (const auto& perm : s.transp) {
      if (perm.size() != n) {
        rep.structural_error = true;
        rep.add("structure", "transposition has wrong size");
        return rep;
      }
      for (Atom a : perm)
        if (a < 0 || static_cast<std::size_t>(a) >= n) {
          rep.structural_error = true;
          rep.add("structure", "transposition maps outside the atom set");
          return rep;
        }
    }
  }

  // Every operator on the complex algebra is completely additive, so each
  // equational axiom reduces to the atom-level condition checked here.
  auto num = [](int i) { return std::to_string(i); };

  for (int i = 0; i < s.dim; ++i) {
    // x <= c_i x  <=>  T_i reflexive
    for (Atom a = 0; a < static_cast<Atom>(n); ++a)
      if (!s.cyl[i][a].test(a)) {
        rep.add("c" + num(i) + " reflexivity", "atom " + s.names[a] + " not related to itself");
        break;
      }
    // c_i self-conjugate (x . c_i y = 0 iff y . c_i x = 0)  <=>  T_i symmetric
    for (Atom a = 0; a < static_cast<Atom>(n); ++a) {
      bool bad = false;
      for (auto b = s.cyl[i][a].find_first(); b != AtomSet::npos; b = s.cyl[i][a].find_next(b))
        if (!s.cyl[i][b].test(a)) {
          rep.add("c" + num(i) + " symmetry",
                  s.names[a] + " relates to " + s.names[b] + " but not conversely");
          bad = true;
          break;
        }
      if (bad) break;
    }
    // c_i c_i x = c_i x  <=>  T_i transitive
    bool done = false;
    for (Atom a = 0; a < static_cast<Atom>(n) && !done; ++a) {
      AtomSet reach(n);
      for (auto b = s.cyl[i][a].find_first(); b != AtomSet::npos; b = s.cyl[i][a].find_next(b))
        reach |= s.cyl[i][b];
      if (!reach.is_subset_of(s.cyl[i][a])) {
        rep.add("c" + num(i) + " idempotence/transitivity",
                "two steps from " + s.names[a] + " leave its neighbourhood");
        done = true;
      }
    }
  }

  // c_i c_j = c_j c_i  <=>  the relations commute as compositions
  for (int i = 0; i < s.dim; ++i)
    for (int j = i + 1; j < s.dim; ++j) {
      bool bad = false;
      for (Atom a = 0; a < static_cast<Atom>(n) && !bad; ++a) {
        AtomSet ij(n), ji(n);
        for (auto b = s.cyl[i][a].find_first(); b != AtomSet::npos; b = s.cyl[i][a].find_next(b))
          ij |= s.cyl[j][b];
        for (auto b = s.cyl[j][a].find_first(); b != AtomSet::npos; b = s.cyl[j][a].find_next(b))
          ji |= s.cyl[i][b];
        if (ij != ji) {
          rep.add("c" + num(i) + "c" + num(j) + " commutativity",
                  "compositions differ at " + s.names[a]);
          bad = true;
        }
      }
    }

  // d_ij = c_k(d_ik . d_kj) for k outside {i,j}
  for (int i = 0; i < s.dim; ++i)
    for (int j = i + 1; j < s.dim; ++j)
      for (int k = 0; k < s.dim; ++k) {
        if (k == i || k == j) continue;
        const AtomSet& eij = s.diag_set(i, j);
        AtomSet mid = s.diag_set(i, k);
        mid &= s.diag_set(k, j);
        AtomSet expand(n);
        for (auto b = mid.find_first(); b != AtomSet::npos; b = mid.find_next(b))
          expand |= s.cyl[k][b];
        if (expand != eij) {
          rep.add("d" + num(i) + num(j) + " via c" + num(k),
                  "diagonal not the cylinder of the witness intersection");
          break;
        }
      }

  // d_ij . c_i(d_ij . x) <= x : two distinct atoms under d_ij are never
  // T_i-related (and by the mirrored axiom never T_j-related)
  for (int i = 0; i < s.dim; ++i)
    for (int j = i + 1; j < s.dim; ++j) {
      const AtomSet& eij = s.diag_set(i, j);
      for (int t : {i, j}) {
        bool bad = false;
        for (auto a = eij.find_first(); a != AtomSet::npos && !bad; a = eij.find_next(a)) {
          AtomSet others = s.cyl[t][a];
          others &= eij;
          others.reset(a);
          if (others.any()) {
            rep.add("d" + num(i) + num(j) + " functional (c" + num(t) + ")",
                    "distinct diagonal atoms are c" + num(t) + "-related near " + s.names[a]);
            bad = true;
          }
        }
      }
    }

  if (s.has_transp) {
    auto sigma = [&](int i, int j, int k) { return k == i ? j : (k == j ? i : k); };
    for (int i = 0; i < s.dim; ++i)
      for (int j = i + 1; j < s.dim; ++j) {
        const auto& perm = s.transp[s.pair_index(i, j)];
        std::string sname = "s[" + num(i) + "," + num(j) + "]";
        for (Atom a = 0; a < static_cast<Atom>(n); ++a)
          if (perm[perm[a]] != a) {
            rep.add(sname + " involution", "double transposition moves " + s.names[a]);
            break;
          }
        // action on diagonals: S_ij(E_kl) = E_{sigma k, sigma l}
        for (int k = 0; k < s.dim; ++k)
          for (int l = k + 1; l < s.dim; ++l) {
            const AtomSet& src = s.diag_set(k, l);
            int k2 = sigma(i, j, k), l2 = sigma(i, j, l);
            const AtomSet& dst = s.diag_set(k2, l2);
            AtomSet image(n);
            for (auto a = src.find_first(); a != AtomSet::npos; a = src.find_next(a))
              image.set(perm[a]);
            if (image != dst) {
              rep.add(sname + " diagonal action",
                      "image of d" + num(k) + num(l) + " is not d" + num(k2) + num(l2));
            }
          }
        // action on cylinders: a T_k b iff S(a) T_{sigma k} S(b)
        for (int k = 0; k < s.dim; ++k) {
          int k2 = sigma(i, j, k);
          bool bad = false;
          for (Atom a = 0; a < static_cast<Atom>(n) && !bad; ++a)
            for (auto b = s.cyl[k][a].find_first(); b != AtomSet::npos;
                 b = s.cyl[k][a].find_next(b))
              if (!s.cyl[k2][perm[a]].test(perm[b])) {
                rep.add(sname + " cylinder action",
                        "transposition breaks c" + num(k) + " at " + s.names[a]);
                bad = true;
                break;
              }
        }
      }
    // composition law: S_ij S_jk S_ij = S_ik on atoms
    for (int i = 0; i < s.dim; ++i)
      for (int j = i + 1; j < s.dim; ++j)
        for (int k = j + 1; k < s.dim; ++k) {
          const auto& pij = s.transp[s.pair_index(i, j)];
          const auto& pjk = s.transp[s.pair_index(j, k)];
          const auto& pik = s.transp[s.pair_index(i, k)];
          for (Atom a = 0; a < static_cast<Atom>(n); ++a)
            if (pij[pjk[pij[a]]] != pik[a]) {
              rep.add("s[" + num(i) + "," + num(j) + "] composition",
                      "conjugation law fails at " + s.names[a]);
              break;
            }
        }
    // disjoint transpositions commute
    for (int i = 0; i < s.dim; ++i)
      for (int j = i + 1; j < s.dim; ++j)
        for (int k = 0; k < s.dim; ++k)
          for (int l = k + 1; l < s.dim; ++l) {
            if (k < i || (k == i && l <= j)) continue;
            if (k == i || k == j || l == i || l == j) continue;
            const auto& pij = s.transp[s.pair_index(i, j)];
            const auto& pkl = s.transp[s.pair_index(k, l)];
            for (Atom a = 0; a < static_cast<Atom>(n); ++a)
              if (pij[pkl[a]] != pkl[pij[a]]) {
                rep.add("s[" + num(i) + "," + num(j) + "] commutation",
                        "disjoint transpositions fail to commute at " + s.names[a]);
                break;
              }
          }
  }

  return rep;
}

// --- complex algebra operations ----------------------------------------------

AtomSet cylindrify(const CaAtomStructure& s, int i, const AtomSet& x) {
  AtomSet out(s.atom_count());
  for (auto a = x.find_first(); a != AtomSet::npos; a = x.find_next(a)) out |= s.cyl[i][a];
  return out;
}

AtomSet diag_element(const CaAtomStructure& s, int i, int j) {
  if (i == j) {
    AtomSet all(s.atom_count());
    all.set();
    return all;
  }
  return s.diag_set(i, j);
}

AtomSet apply_transp(const CaAtomStructure& s, int i, int j, const AtomSet& x) {
  if (i == j) return x;
  const auto& perm = s.transp[s.pair_index(i, j)];
  AtomSet out(s.atom_count());
  for (auto a = x.find_first(); a != AtomSet::npos; a = x.find_next(a)) out.set(perm[a]);
  return out;
}

AtomSet replace_coord(const CaAtomStructure& s, int i, int j, const AtomSet& x) {
  if (i == j) return x;
  AtomSet tmp = x;
  tmp &= s.diag_set(i, j);
  return cylindrify(s, i, tmp);
}

// --- RaAtomStructure ----------------------------------------------------------

bool RaAtomStructure::MonkParams::adjacent(int u, int v) const {
  if (u > v) std::swap(u, v);
  for (auto [a, b] : edges)
    if (a == u && b == v) return true;
  return false;
}

uint64_t RaAtomStructure::pack_triple(Atom a, Atom b, Atom c) const {
  return (static_cast<uint64_t>(a) << 42) | (static_cast<uint64_t>(b) << 21) |
         static_cast<uint64_t>(c);
}

void RaAtomStructure::sort_triples() { std::sort(triples.begin(), triples.end()); }

bool RaAtomStructure::consistent(Atom a, Atom b, Atom c) const {
  // identity rules are shared by every kind: a triangle through an identity
  // atom identifies its two other sides
  if (is_identity(a)) return b == c;
  if (is_identity(b)) return a == c;
  if (is_identity(c)) return a == b;
  switch (kind) {
    case TripleKind::Explicit:
      return std::binary_search(triples.begin(), triples.end(), pack_triple(a, b, c));
    case TripleKind::Monk: {
      const auto& [va, ca] = monk_atom[a];
      const auto& [vb, cb] = monk_atom[b];
      const auto& [vc, cc] = monk_atom[c];
      if (!(ca == cb && cb == cc)) return true;
      return monk->adjacent(va, vb) || monk->adjacent(va, vc) || monk->adjacent(vb, vc);
    }
    case TripleKind::Blur: {
      const auto& x = blur_atom[a];
      const auto& y = blur_atom[b];
      const auto& z = blur_atom[c];
      if ((x.blur_mask & y.blur_mask & z.blur_mask) == 0) return true;
      if (!index_blur_rule(x.copy, y.copy, z.copy)) return false;
      return !(x.point == y.point && y.point == z.point);
    }
  }
  return false;
}

bool index_blur_rule(long i, long j, long k) {
  return i + j == 2 * k || i + k == 2 * j || j + k == 2 * i;
}

uint64_t RaAtomStructure::structure_hash() const {
  uint64_t h = fnv1a64("ra", 2);
  hash_u64(h, atom_count());
  for (const auto& nm : names) hash_str(h, nm);
  hash_bits(h, identity);
  for (Atom a : converse) hash_u64(h, static_cast<uint64_t>(a));
  hash_u64(h, static_cast<uint64_t>(kind));
  if (kind == TripleKind::Explicit) {
    for (uint64_t t : triples) hash_u64(h, t);
  } else if (kind == TripleKind::Monk) {
    hash_u64(h, monk->vertices);
    hash_u64(h, monk->colours);
    for (auto [u, v] : monk->edges) {
      hash_u64(h, u);
      hash_u64(h, v);
    }
  } else {
    hash_u64(h, blur->subset_size);
    hash_u64(h, blur->index_count);
    hash_u64(h, blur->copies);
    hash_u64(h, blur->points_outside_blur);
  }
  return h;
}

ValidationReport validate_ra_frame(const RaAtomStructure& s) {
  ValidationReport rep;
  const std::size_t n = s.atom_count();
  if (s.converse.size() != n || s.identity.size() != n) {
    rep.structural_error = true;
    rep.add("structure", "table sizes do not match the atom count");
    return rep;
  }
  for (Atom a : s.converse)
    if (a < 0 || static_cast<std::size_t>(a) >= n) {
      rep.structural_error = true;
      rep.add("structure", "converse maps outside the atom set");
      return rep;
    }
  if (s.kind == RaAtomStructure::TripleKind::Monk && s.monk_atom.size() != n) {
    rep.structural_error = true;
    rep.add("structure", "missing vertex/colour data");
    return rep;
  }
  if (s.kind == RaAtomStructure::TripleKind::Blur && s.blur_atom.size() != n) {
    rep.structural_error = true;
    rep.add("structure", "missing blur data");
    return rep;
  }

  for (Atom a = 0; a < static_cast<Atom>(n); ++a)
    if (s.converse[s.converse[a]] != a) {
      rep.add("converse involution", "double converse moves " + s.names[a]);
      break;
    }
  for (auto a = s.identity.find_first(); a != AtomSet::npos; a = s.identity.find_next(a))
    if (s.converse[a] != static_cast<Atom>(a)) {
      rep.add("identity self-converse", s.names[a] + " is not its own converse");
      break;
    }

  // cycle law: consistency is invariant under the two Peircean generators
  // (a,b,c) -> (conv a, c, b) and (a,b,c) -> (b, conv c, conv a); these
  // generate all six triangle readings.
  bool cycle_ok = true;
  for (Atom a = 0; a < static_cast<Atom>(n) && cycle_ok; ++a)
    for (Atom b = 0; b < static_cast<Atom>(n) && cycle_ok; ++b)
      for (Atom c = 0; c < static_cast<Atom>(n); ++c) {
        bool v = s.consistent(a, b, c);
        if (v != s.consistent(s.converse[a], c, b) ||
            v != s.consistent(b, s.converse[c], s.converse[a])) {
          rep.add("cycle law", "triangle (" + s.names[a] + "," + s.names[b] + "," + s.names[c] +
                                   ") breaks a Peircean transform");
          cycle_ok = false;
          break;
        }
      }

  // identity law: triangles through identity atoms pin the other two sides
  bool id_ok = true;
  for (auto e = s.identity.find_first(); e != AtomSet::npos && id_ok;
       e = s.identity.find_next(e))
    for (Atom b = 0; b < static_cast<Atom>(n) && id_ok; ++b)
      for (Atom c = 0; c < static_cast<Atom>(n); ++c) {
        bool v = s.consistent(static_cast<Atom>(e), b, c);
        if (v != (b == c)) {
          rep.add("identity law", "triangle (" + s.names[e] + "," + s.names[b] + "," +
                                      s.names[c] + ") violates the identity rule");
          id_ok = false;
          break;
        }
      }

  return rep;
}

// --- SimpleGraph ---------------------------------------------------------------

void SimpleGraph::finalize() {
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  adj.assign(order, AtomSet(order));
  for (auto [u, v] : edges) {
    adj[u].set(v);
    adj[v].set(u);
  }
}

SimpleGraph SimpleGraph::complete(int k) {
  SimpleGraph g;
  g.order = k;
  for (int u = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) g.edges.push_back({u, v});
  g.finalize();
  return g;
}

SimpleGraph SimpleGraph::cycle(int k) {
  SimpleGraph g;
  g.order = k;
  for (int u = 0; u < k; ++u) g.edges.push_back({u, (u + 1) % k});
  g.finalize();
  return g;
}

SimpleGraph SimpleGraph::empty(int k) {
  SimpleGraph g;
  g.order = k;
  g.finalize();
  return g;
}

}  // namespace neatgames::core
