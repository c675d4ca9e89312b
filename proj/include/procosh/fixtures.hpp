#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procosh/json_io.hpp"

// Shipped fixture descriptors plus the directory override (the PROCOSH_FIXTURE_DIR
// environment variable or an explicit path): each *.json file in the
// directory adds or replaces one named descriptor.

namespace procosh {

struct FixtureEntry {
  std::string name;
  std::string kind;  // space | cosheaf | bundle | precosheaf | fam-mor | thread
  Json descriptor;
  bool corrupt = false;  // shipped negative control
};

class FixtureRegistry {
 public:
  static FixtureRegistry builtin();
  // builtin() plus overrides from the directory (ignored when empty/missing)
  static FixtureRegistry with_overrides(const std::string& dir);

  const FixtureEntry& entry(const std::string& name) const;
  bool has(const std::string& name) const { return entries_.count(name) > 0; }
  std::vector<std::string> names() const;

  ProSpace space(const std::string& name) const;
  Cosheaf cosheaf(const std::string& name) const;
  ProBundle bundle(const std::string& name) const;
  PrecosheafFinite precosheaf(const std::string& name) const;

  // metadata carried by the descriptor
  int gc_level_cap(const std::string& name, int fallback) const;
  std::vector<long long> expected_gc_orders(const std::string& name) const;

  void add(FixtureEntry e) { entries_[e.name] = std::move(e); }

 private:
  std::map<std::string, FixtureEntry> entries_;
};

// the directory named by PROCOSH_FIXTURE_DIR, if set
std::optional<std::string> fixture_dir_from_env();

}  // namespace procosh
