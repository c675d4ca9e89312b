#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "procosh/cosheaf.hpp"

// The cosheaf/bundle correspondence: set-valued cosheaves are levelwise
// total spaces over the base, group-valued cosheaves are group objects in
// the slice. Conversions both ways with round-trip witnesses and an
// exhaustive levelwise axiom checker.

namespace procosh {

class ProBundle {
 public:
  ProBundle() = default;
  // proj(n): E_n -> X_n must commute with both transition chains
  ProBundle(ProSpace total, ProSpace base, std::function<FinMor(int)> proj);

  const ProSpace& total() const { return total_; }
  const ProSpace& base() const { return base_; }
  FinMor proj(int n) const;
  // nullopt when every square commutes for levels 0..upto-1
  std::optional<int> first_noncommuting_level(int upto) const;

 private:
  ProSpace total_, base_;
  std::function<FinMor(int)> proj_;
};

// total space = levelwise disjoint union of the fibres, projection by cell.
ProBundle to_bundle(const Cosheaf& a);  // Set instance
// fibre at x = p_n^{-1}(x) with transitions restricted fibrewise.
Cosheaf from_bundle(const ProBundle& p);

struct GroupObjectData {
  ProBundle underlying;
  // mult(n) is defined on the fincat pullback E_n x_{X_n} E_n
  std::function<PullbackResult(int)> fibre_pairs;
  std::function<FinMor(int)> mult;  // fibre_pairs(n).obj -> E_n
  std::function<FinMor(int)> unit;  // X_n -> E_n, a section
  std::function<FinMor(int)> inv;   // E_n -> E_n, fibre-preserving
};

GroupObjectData to_group_object(const Cosheaf& g);  // Ab or Grp instance
// Rebuilds the group cosheaf; unit is relabeled to label 0 in each fibre.
Cosheaf from_group_object(const GroupObjectData& d, Instance tag = Instance::Grp);

struct AxiomFailure {
  int level = 0;
  std::string axiom;
  std::vector<int> witness;  // element tuple exhibiting the failure
};
struct GroupObjectReport {
  bool ok = true;
  int window = 0;
  std::vector<AxiomFailure> failures;
};
// Per-level associativity, unit, inverse, fibre-preservation, section, and
// transition-compatibility checks; failures carry the first witness tuple.
GroupObjectReport check_group_object(const GroupObjectData& d, int window);

}  // namespace procosh
