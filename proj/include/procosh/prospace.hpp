#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "procosh/prosys.hpp"

// Profinite spaces as FinSet-valued chains with surjective transitions,
// clopen-set algebra, finite clopen partitions, and points as threads.
// A clopen is stored saturated: (level n, subset S) denotes f_n^{-1}(S).

namespace procosh {

class ProSpace {
 public:
  ProSpace() = default;
  ProSpace(DChain chain, bool surjective);

  const DChain& chain() const { return chain_; }
  bool surjective() const { return surjective_; }
  FinObj level(int n) const { return chain_.level(n); }
  FinMor step(int n) const { return chain_.step(n); }
  FinMor transition(int m, int n) const { return chain_.transition(m, n); }
  bool same_impl(const ProSpace& other) const { return chain_.same_impl(other.chain_); }

 private:
  DChain chain_;
  bool surjective_ = false;
};

// named generators
ProSpace cantor_space();                    // levels {0,1}^n, drop-last-bit
ProSpace one_point_compactification();      // of a countable enumeration of points
ProSpace finite_space(int size);            // constant chain
ProSpace point_space();

struct ClopenSet {
  int level = 0;
  std::vector<int> subset;  // sorted distinct labels of the level-n carrier

  bool operator==(const ClopenSet&) const = default;
};

ClopenSet clopen(const ProSpace& X, int level, std::vector<int> subset);
ClopenSet whole_space(const ProSpace& X, int level = 0);
ClopenSet empty_clopen(int level = 0);

// same denoted set represented at level m >= level(U)
ClopenSet clopen_lift(const ProSpace& X, const ClopenSet& u, int m);
// forward image f_m(U) at level m <= level(U); needs surjective transitions
std::vector<int> clopen_image(const ProSpace& X, const ClopenSet& u, int m);

ClopenSet clopen_meet(const ProSpace& X, const ClopenSet& u, const ClopenSet& v);
ClopenSet clopen_join(const ProSpace& X, const ClopenSet& u, const ClopenSet& v);
ClopenSet clopen_complement(const ProSpace& X, const ClopenSet& u);
bool clopen_is_disjoint(const ProSpace& X, const ClopenSet& u, const ClopenSet& v);
bool clopen_equal(const ProSpace& X, const ClopenSet& u, const ClopenSet& v);
bool clopen_is_empty(const ClopenSet& u);

// all set partitions of the subset at its own level, each block a ClopenSet;
// includes the trivial and the singleton partitions
std::vector<std::vector<ClopenSet>> partitions(const ClopenSet& u);

class PointThread {
 public:
  // prefix must be transition-compatible; the extender, when present,
  // produces the label at any level
  PointThread(ProSpace space, std::vector<int> prefix,
              std::function<int(int)> extender = nullptr);

  const ProSpace& space() const { return space_; }
  int recorded_levels() const { return static_cast<int>(prefix_.size()); }
  // label at level n, extending through the oracle when needed
  int at(int n) const;

 private:
  ProSpace space_;
  mutable std::vector<int> prefix_;
  std::function<int(int)> extender_;
};

// the thread of a fixed point index in a one-point compactification,
// or of a bit stream in the Cantor space
PointThread one_point_thread(const ProSpace& X, int point);     // point < 0 means infinity
PointThread cantor_thread(const ProSpace& X, std::function<int(int)> bit);
PointThread cantor_thread_bits(const ProSpace& X, unsigned long long bits);

bool is_in_clopen(const PointThread& x, const ClopenSet& u);

}  // namespace procosh
