#include "neatgames/serialize.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace neatgames::serialize {

using core::Atom;
using core::AtomSet;

namespace {

std::string hex64(uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

uint64_t unhex64(const std::string& s) { return std::stoull(s, nullptr, 16); }

json ids_of(const AtomSet& set) {
  json out = json::array();
  for (Atom a : core::atoms_of(set)) out.push_back(a);
  return out;
}

AtomSet set_of(const json& j, std::size_t n) {
  AtomSet s(n);
  for (const auto& v : j) s.set(v.get<Atom>());
  return s;
}

json net_body(const nets::Network& n) {
  json out;
  out["dim"] = n.dim;
  out["nodes"] = n.nodes;
  out["labels"] = n.labels;
  return out;
}

nets::Network net_from_body(const json& j) {
  nets::Network n(j.at("dim").get<int>(), j.at("nodes").get<std::vector<int>>());
  auto labels = j.at("labels").get<std::vector<Atom>>();
  if (labels.size() != n.labels.size())
    throw std::runtime_error("network label table has the wrong size");
  n.labels = std::move(labels);
  return n;
}

}  // namespace

json ca_to_json(const core::CaAtomStructure& s) {
  json j;
  j["kind"] = "ca-structure";
  j["version"] = 1;
  j["dim"] = s.dim;
  j["atoms"] = s.names;
  json cyl = json::array();
  for (int i = 0; i < s.dim; ++i) {
    json rows = json::array();
    for (std::size_t a = 0; a < s.atom_count(); ++a) rows.push_back(ids_of(s.cyl[i][a]));
    cyl.push_back(std::move(rows));
  }
  j["cyl"] = std::move(cyl);
  json diag;
  for (int i = 0; i < s.dim; ++i)
    for (int k = i + 1; k < s.dim; ++k)
      diag[std::to_string(i) + "," + std::to_string(k)] = ids_of(s.diag[s.pair_index(i, k)]);
  j["diag"] = std::move(diag);
  if (s.has_transp) {
    json tr = json::array();
    for (const auto& perm : s.transp) tr.push_back(perm);
    j["transp"] = std::move(tr);
  } else {
    j["transp"] = nullptr;
  }
  return j;
}

core::CaAtomStructure ca_from_json(const json& j) {
  if (j.at("kind").get<std::string>() != "ca-structure")
    throw std::runtime_error("not a ca-structure document");
  core::CaAtomStructure s;
  s.dim = j.at("dim").get<int>();
  s.names = j.at("atoms").get<std::vector<std::string>>();
  const std::size_t n = s.names.size();
  s.cyl.assign(s.dim, std::vector<AtomSet>(n, AtomSet(n)));
  const json& cyl = j.at("cyl");
  for (int i = 0; i < s.dim; ++i)
    for (std::size_t a = 0; a < n; ++a) s.cyl[i][a] = set_of(cyl.at(i).at(a), n);
  int pairs = s.dim * (s.dim - 1) / 2;
  s.diag.assign(pairs, AtomSet(n));
  for (int i = 0; i < s.dim; ++i)
    for (int k = i + 1; k < s.dim; ++k)
      s.diag[s.pair_index(i, k)] =
          set_of(j.at("diag").at(std::to_string(i) + "," + std::to_string(k)), n);
  if (j.contains("transp") && !j.at("transp").is_null()) {
    s.has_transp = true;
    s.transp.clear();
    for (const auto& perm : j.at("transp")) s.transp.push_back(perm.get<std::vector<Atom>>());
  }
  try {
    s.build_cyl_classes();
  } catch (const std::exception&) {
    // leave the class view unbuilt; validation will report the failure
  }
  return s;
}

json ra_to_json(const core::RaAtomStructure& s) {
  json j;
  j["kind"] = "ra-structure";
  j["version"] = 1;
  j["atoms"] = s.names;
  j["identity"] = ids_of(s.identity);
  j["converse"] = s.converse;
  json t;
  switch (s.kind) {
    case core::RaAtomStructure::TripleKind::Explicit: {
      t["rule"] = "explicit";
      json list = json::array();
      for (uint64_t p : s.triples) {
        Atom a = static_cast<Atom>(p >> 42);
        Atom b = static_cast<Atom>((p >> 21) & ((1u << 21) - 1));
        Atom c = static_cast<Atom>(p & ((1u << 21) - 1));
        list.push_back(json::array({a, b, c}));
      }
      t["list"] = std::move(list);
      break;
    }
    case core::RaAtomStructure::TripleKind::Monk: {
      t["rule"] = "monk";
      t["vertices"] = s.monk->vertices;
      t["colours"] = s.monk->colours;
      json e = json::array();
      for (auto [u, v] : s.monk->edges) e.push_back(json::array({u, v}));
      t["edges"] = std::move(e);
      json at = json::array();
      for (auto [v, c] : s.monk_atom) at.push_back(json::array({v, c}));
      t["atom-data"] = std::move(at);
      break;
    }
    case core::RaAtomStructure::TripleKind::Blur: {
      t["rule"] = "blur";
      t["subset-size"] = s.blur->subset_size;
      t["index-count"] = s.blur->index_count;
      t["copies"] = s.blur->copies;
      t["points-outside-blur"] = s.blur->points_outside_blur;
      json at = json::array();
      for (const auto& b : s.blur_atom)
        at.push_back(json::array({b.copy, b.point, static_cast<int64_t>(b.blur_mask)}));
      t["atom-data"] = std::move(at);
      break;
    }
  }
  j["triples"] = std::move(t);
  return j;
}

core::RaAtomStructure ra_from_json(const json& j) {
  if (j.at("kind").get<std::string>() != "ra-structure")
    throw std::runtime_error("not a ra-structure document");
  core::RaAtomStructure s;
  s.names = j.at("atoms").get<std::vector<std::string>>();
  const std::size_t n = s.names.size();
  s.identity = set_of(j.at("identity"), n);
  s.converse = j.at("converse").get<std::vector<Atom>>();
  const json& t = j.at("triples");
  std::string rule = t.at("rule").get<std::string>();
  if (rule == "explicit") {
    s.kind = core::RaAtomStructure::TripleKind::Explicit;
    for (const auto& trip : t.at("list"))
      s.triples.push_back(s.pack_triple(trip.at(0).get<Atom>(), trip.at(1).get<Atom>(),
                                        trip.at(2).get<Atom>()));
    s.sort_triples();
  } else if (rule == "monk") {
    s.kind = core::RaAtomStructure::TripleKind::Monk;
    core::RaAtomStructure::MonkParams mp;
    mp.vertices = t.at("vertices").get<int>();
    mp.colours = t.at("colours").get<int>();
    for (const auto& e : t.at("edges")) mp.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    s.monk = mp;
    for (const auto& a : t.at("atom-data"))
      s.monk_atom.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
  } else if (rule == "blur") {
    s.kind = core::RaAtomStructure::TripleKind::Blur;
    core::RaAtomStructure::BlurParams bp;
    bp.subset_size = t.at("subset-size").get<int>();
    bp.index_count = t.at("index-count").get<int>();
    bp.copies = t.at("copies").get<int>();
    bp.points_outside_blur = t.at("points-outside-blur").get<bool>();
    s.blur = bp;
    for (const auto& a : t.at("atom-data")) {
      core::RaAtomStructure::BlurAtom b;
      b.copy = a.at(0).get<int>();
      b.point = a.at(1).get<int>();
      b.blur_mask = static_cast<uint32_t>(a.at(2).get<int64_t>());
      s.blur_atom.push_back(b);
    }
  } else {
    throw std::runtime_error("unknown triple rule: " + rule);
  }
  return s;
}

json network_to_json(const nets::Network& n, uint64_t structure_hash) {
  json j;
  j["kind"] = "network";
  j["version"] = 1;
  j["structure-hash"] = hex64(structure_hash);
  j["net"] = net_body(n);
  return j;
}

nets::Network network_from_json(const json& j, uint64_t expect_hash) {
  if (j.at("kind").get<std::string>() != "network")
    throw std::runtime_error("not a network document");
  if (unhex64(j.at("structure-hash").get<std::string>()) != expect_hash)
    throw std::runtime_error("network belongs to a different structure");
  return net_from_body(j.at("net"));
}

namespace {

json spec_json(const games::GameSpec& spec) {
  json j;
  j["variant"] = spec.variant == games::Variant::G ? "G" : "F";
  j["m"] = spec.m;
  if (spec.rounds)
    j["rounds"] = *spec.rounds;
  else
    j["rounds"] = nullptr;
  j["policy"] = spec.policy == games::WitnessPolicy::Union ? "union" : "prefer-existing";
  return j;
}

games::GameSpec spec_from(const json& j) {
  games::GameSpec spec;
  spec.variant = j.at("variant").get<std::string>() == "F" ? games::Variant::F : games::Variant::G;
  spec.m = j.at("m").get<int>();
  if (!j.at("rounds").is_null()) spec.rounds = j.at("rounds").get<long>();
  spec.policy = j.at("policy").get<std::string>() == "prefer-existing"
                    ? games::WitnessPolicy::PreferExisting
                    : games::WitnessPolicy::Union;
  return spec;
}

json children_json(const std::vector<std::pair<std::vector<Atom>, int>>& ch) {
  json out = json::array();
  for (const auto& [key, id] : ch) out.push_back(json::array({json(key), id}));
  return out;
}

std::vector<std::pair<std::vector<Atom>, int>> children_from(const json& j) {
  std::vector<std::pair<std::vector<Atom>, int>> out;
  for (const auto& e : j) out.push_back({e.at(0).get<std::vector<Atom>>(), e.at(1).get<int>()});
  return out;
}

}  // namespace

json cert_to_json(const games::StrategyCert& c, uint64_t structure_hash) {
  json j;
  j["kind"] = "strategy";
  j["version"] = 1;
  j["structure-hash"] = hex64(structure_hash);
  j["winner"] = games::verdict_name(c.winner);
  j["spec"] = spec_json(c.spec);
  if (!c.safe.empty()) {
    json safes = json::array();
    for (const auto& n : c.safe) safes.push_back(net_body(n));
    j["safe"] = std::move(safes);
    j["rank"] = c.rank;
    j["atom-response"] = c.atom_response;
  }
  if (c.root_atom >= 0) {
    j["root-atom"] = c.root_atom;
    j["root-children"] = children_json(c.root_children);
    json nodes = json::array();
    for (const auto& fn : c.nodes) {
      json nj;
      nj["pos"] = net_body(fn.pos);
      if (fn.g) {
        json g;
        g["x"] = fn.g->x;
        g["i"] = fn.g->i;
        g["a"] = fn.g->a;
        nj["g"] = std::move(g);
      }
      if (fn.f) {
        json f;
        f["face"] = fn.f->face;
        f["k"] = fn.f->k;
        f["b"] = fn.f->b;
        f["l"] = fn.f->l;
        nj["f"] = std::move(f);
      }
      nj["children"] = children_json(fn.children);
      nj["depth"] = fn.depth;
      nodes.push_back(std::move(nj));
    }
    j["nodes"] = std::move(nodes);
  }
  return j;
}

games::StrategyCert cert_from_json(const json& j, uint64_t expect_hash) {
  if (j.at("kind").get<std::string>() != "strategy")
    throw std::runtime_error("not a strategy document");
  if (unhex64(j.at("structure-hash").get<std::string>()) != expect_hash)
    throw std::runtime_error("strategy belongs to a different structure");
  games::StrategyCert c;
  std::string w = j.at("winner").get<std::string>();
  c.winner = w == "Exists"  ? games::Verdict::Exists
             : w == "Forall" ? games::Verdict::Forall
                             : games::Verdict::Inconclusive;
  c.spec = spec_from(j.at("spec"));
  if (j.contains("safe")) {
    for (const auto& nb : j.at("safe")) c.safe.push_back(net_from_body(nb));
    c.rank = j.at("rank").get<std::vector<long>>();
    c.atom_response = j.at("atom-response").get<std::vector<int>>();
  }
  if (j.contains("root-atom")) {
    c.root_atom = j.at("root-atom").get<Atom>();
    c.root_children = children_from(j.at("root-children"));
    for (const auto& nj : j.at("nodes")) {
      games::ForcingNode fn;
      fn.pos = net_from_body(nj.at("pos"));
      if (nj.contains("g")) {
        games::GDemand d;
        d.x = nj.at("g").at("x").get<std::vector<int>>();
        d.i = nj.at("g").at("i").get<int>();
        d.a = nj.at("g").at("a").get<Atom>();
        fn.g = d;
      }
      if (nj.contains("f")) {
        games::FMove mv;
        mv.face = nj.at("f").at("face").get<std::vector<int>>();
        mv.k = nj.at("f").at("k").get<int>();
        mv.b = nj.at("f").at("b").get<Atom>();
        mv.l = nj.at("f").at("l").get<int>();
        fn.f = mv;
      }
      fn.children = children_from(nj.at("children"));
      fn.depth = nj.at("depth").get<int>();
      c.nodes.push_back(std::move(fn));
    }
  }
  return c;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump(j);
}

// the same hash the structures compute themselves, re-exported here so every
// serializer user pins documents to one canonical value
uint64_t hash_of_ca(const core::CaAtomStructure& s) { return s.structure_hash(); }

uint64_t hash_of_ra(const core::RaAtomStructure& s) { return s.structure_hash(); }

}  // namespace neatgames::serialize
