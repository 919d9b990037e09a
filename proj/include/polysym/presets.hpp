#pragma once

#include <cstddef>
#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polysym/fpgroup.hpp"
#include "polysym/graphsym.hpp"
#include "polysym/polytope.hpp"

namespace polysym::presets {

enum class Kind { rotation, reflection, family };

struct Expectation {
  std::string key;
  std::string value;
  std::string provenance;
  bool deep_only = false;
};

// Catalog entry, read from a `.preset` file:
//   name <id>
//   kind rotation|reflection        with a `presentation` ... `end` block
//   kind family <six-q-six|four-q-four> <param>
//   kind external <file>            presentation kept outside the catalog
//   schlafli p q r
//   option medial-px p r s          compare the medial graph to C(p,r,s)
//   option cayley-px p r s
//   option scan-normal <order>
//   expect[-deep] <key> <value> <provenance>
struct Preset {
  std::string name;
  Kind kind = Kind::rotation;
  std::string presentation;
  std::string family;
  long long parameter = 0;
  std::filesystem::path external;  // resolved against the catalog file
  std::vector<long long> schlafli;
  std::optional<std::array<std::size_t, 3>> medial_px, cayley_px;
  std::optional<std::size_t> scan_normal;
  std::vector<Expectation> expectations;
};

Preset parse_preset(std::istream& is, const std::filesystem::path& origin = {});
Preset load_preset(const std::filesystem::path& file);
// Presets of a directory, sorted by name.
std::vector<Preset> load_catalog(const std::filesystem::path& dir);
const Preset& find_preset(const std::vector<Preset>& catalog, const std::string& name);

struct RunOptions {
  std::size_t coset_limit = fp::kDefaultCosetLimit;
  graph::SearchOptions search;
  // Full automorphism search of the medial graph only up to this order
  // (unbounded with `deep`).
  std::size_t aut_budget = 2000;
  bool deep = false;
  // Stage id after which the pipeline stops (empty: run every stage).
  std::string stop_after;
};

struct Deviation {
  std::string key;
  std::string expected;
  std::string observed;  // "missing" when the key was never produced
  std::string provenance;
};

struct PresetReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::string> stages;  // completed stage ids
  std::optional<std::string> failed_stage;
  std::string failure;
  bool skipped = false;  // external presentation absent
  std::vector<Deviation> deviations;
  // Kept for writing graph files.
  std::optional<graph::SymGraph> medial_graph, cayley_graph;
  std::vector<int> medial_parts;
  std::vector<std::uint32_t> cayley_fibres;

  bool ok() const { return !failed_stage && deviations.empty(); }
  const std::string* value(const std::string& key) const;
  void write(std::ostream& os) const;
};

// Stage ids in order.
const std::vector<std::string>& stage_ids();

PresetReport run_preset(const Preset& preset, const RunOptions& options = {});

// A normal subgroup of the given order found as the normal closure of one
// element, scanning elements in chain order; nullopt if none is found
// within the scan budget.
struct NormalSubgroup {
  std::vector<perm::Perm> generators;
  std::size_t order = 0;
};
std::optional<NormalSubgroup> scan_normal_subgroup(const poly::RotationSystem& sys, std::size_t order,
                                                   std::size_t scan_budget = 50'000);
// Rotation system of sys / K, acting on the cosets of K.
poly::RotationSystem quotient_system(const poly::RotationSystem& sys, const NormalSubgroup& k);

}  // namespace polysym::presets
