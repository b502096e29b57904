#pragma once
// JSON interchange for structures, networks and strategy certificates.
// Serialization is deterministic: object keys are emitted in a fixed order
// and all lists are sorted, so equal values produce identical bytes and the
// structure hash (FNV-1a over the exported bytes) is reproducible.

#include "neatgames/core.hpp"
#include "neatgames/games.hpp"
#include "neatgames/networks.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace neatgames::serialize {

using json = nlohmann::ordered_json;

json ca_to_json(const core::CaAtomStructure& s);
core::CaAtomStructure ca_from_json(const json& j);

json ra_to_json(const core::RaAtomStructure& s);
core::RaAtomStructure ra_from_json(const json& j);

json network_to_json(const nets::Network& n, uint64_t structure_hash);
nets::Network network_from_json(const json& j, uint64_t expect_hash);

json cert_to_json(const games::StrategyCert& c, uint64_t structure_hash);
games::StrategyCert cert_from_json(const json& j, uint64_t expect_hash);

std::string dump(const json& j);                  // 2-space indent, '\n' end
json parse_file(const std::string& path);         // throws std::runtime_error
void write_file(const std::string& path, const json& j);

// FNV-1a over the deterministic byte form; this is the hash networks and
// certificates embed to pin the structure they belong to.
uint64_t hash_of_ca(const core::CaAtomStructure& s);
uint64_t hash_of_ra(const core::RaAtomStructure& s);

}  // namespace neatgames::serialize
