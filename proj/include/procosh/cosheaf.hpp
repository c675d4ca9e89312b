#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "procosh/fam.hpp"
#include "procosh/prospace.hpp"
#include "procosh/prosys.hpp"

// Profinite cosheaves as Fam(D)-valued chains over the natural-number
// chain. The pro-presentation is the object: cosections, costalks, global
// cosections, and the bundle views are derived, levelwise-finite
// computations. Cosection values on a clopen U at chain level k are the
// finite coproducts of the fibres over the lift of U to level k.

namespace procosh {

class Cosheaf {
 public:
  Cosheaf() = default;
  Cosheaf(FamChain chain, ProSpace base, Instance tag);

  const FamChain& chain() const { return chain_; }
  const ProSpace& base() const { return base_; }
  Instance tag() const { return tag_; }
  FamObj level(int n) const { return chain_.level(n); }
  FamMor step(int n) const { return chain_.step(n); }

  // Base transitions must be the FamMor base tables; throws on mismatch.
  void check_alignment(int upto) const;

 private:
  FamChain chain_;
  ProSpace base_;
  Instance tag_;
};

// Wraps a chain as a cosheaf; the base space is the chain of index sets.
Cosheaf limit_of_chain(const FamChain& chain, bool base_surjective = true);

Cosheaf constant_cosheaf(const FinObj& c, const ProSpace& x);
// Fibre c along the thread, initial object elsewhere (empty set for the
// set instance, trivial group for group instances).
Cosheaf skyscraper(const PointThread& x, const FinObj& c, const ProSpace& space);
Cosheaf terminal_cosheaf(Instance tag, const ProSpace& x);

// The family restricted to the cells of U at a chain level, with the cell
// labels that survived.
struct RestrictedLevel {
  FamObj family;
  std::vector<int> cells;
};
RestrictedLevel restrict_over(const Cosheaf& a, const ClopenSet& u, int chain_level);
// The restriction of A's step to the cells over U (levels chain_level+1 -> chain_level).
FamMor restricted_step(const Cosheaf& a, const ClopenSet& u, int chain_level);

// A(U) as a D-chain: output level j is computed at chain level u.level + j.
// Coproduct-capable instances only.
DChain cosections(const Cosheaf& a, const ClopenSet& u);
DChain global_cosections_chain(const Cosheaf& a);
// Costalk at a thread: the chain of fibres along the thread.
DChain costalk(const Cosheaf& a, const PointThread& x);

// colim_j Hom(A_j(U_j), d) truncated: classes are tuples of fibre maps over
// the cells of U at the truncation level. Works for all instances.
struct HomOutClasses {
  int level = 0;
  std::vector<int> cells;                   // cells of U at the truncation level
  std::vector<std::vector<FinMor>> reps;    // one tuple per class
  std::vector<int> birth;
  Flag flag = Flag::Truncated;
};
HomOutClasses hom_out_of_cosections(const Cosheaf& a, const ClopenSet& u, const FinObj& d,
                                    int truncation);

// A precosheaf on a finite space: one value per subset, connecting maps for
// inclusions, functorial.
class PrecosheafFinite {
 public:
  // values key: subset bitmask over base points 0..base_size-1
  PrecosheafFinite(Instance tag, int base_size, std::map<unsigned, FinObj> values,
                   std::map<std::pair<unsigned, unsigned>, FinMor> connecting, bool validate = true);

  Instance tag() const { return tag_; }
  int base_size() const { return base_size_; }
  const FinObj& value(unsigned mask) const;
  const FinMor& connect(unsigned sub, unsigned super) const;
  std::optional<std::string> check_functorial() const;

 private:
  Instance tag_;
  int base_size_;
  std::map<unsigned, FinObj> values_;
  std::map<std::pair<unsigned, unsigned>, FinMor> connecting_;
};

struct CosheafifyResult {
  FamObj family;  // fibre at x = P({x})
  // counit component per subset mask: coproduct of the singleton values
  // over U, mapped into P(U)
  std::map<unsigned, GlobalCosectionsResult> cosh_value;
  std::map<unsigned, FinMor> counit;
};
CosheafifyResult cosheafify_finite(const PrecosheafFinite& p);

// Direct image along compatible level maps g_n: X_n -> Y_n; Set/Ab only.
Cosheaf direct_image(const Cosheaf& a, std::function<FinMor(int)> g, const ProSpace& y);
// The plain-group route: per target cell, the grouped subfamily (the formal
// coproduct) at one level.
struct FormalDirectImageLevel {
  FamObj source;                        // A's family at the level
  std::vector<std::vector<int>> cells;  // for each y: the source cells over y
};
FormalDirectImageLevel direct_image_formal(const Cosheaf& a, const FinMor& g_level, int level);

// Inverse image along a map of finite index sets: fibre at x is B_{g(x)}.
FamObj inverse_image_finite_level(const FamObj& b, const std::vector<int>& g_table);

class CosheafMor {
 public:
  CosheafMor() = default;
  CosheafMor(Cosheaf dom, Cosheaf cod, std::function<FamMor(int)> level_fn);
  const Cosheaf& dom() const { return dom_; }
  const Cosheaf& cod() const { return cod_; }
  FamMor at(int n) const { return mor_.at(n); }
  std::optional<int> first_noncommuting_level(int upto) const {
    return mor_.first_noncommuting_level(upto);
  }

 private:
  Cosheaf dom_, cod_;
  FamChainMor mor_;
};

CosheafMor cosheaf_identity(const Cosheaf& a);

struct CosheafProductResult {
  Cosheaf obj;
  CosheafMor proj1, proj2;
};
CosheafProductResult cosheaf_product(const Cosheaf& a, const Cosheaf& b);

struct CosheafEqualizerResult {
  Cosheaf obj;
  CosheafMor mono;
};
CosheafEqualizerResult cosheaf_equalizer(const CosheafMor& f, const CosheafMor& g);

// Hom classes per the lim-colim formula, truncated at (colim_level,
// lim_level). Representatives are family maps A_{colim_level} -> B_{lim_level};
// EXACT only when both chains are declared eventually constant within the
// truncation.
struct HomCosheafResult {
  int colim_level = 0;
  int lim_level = 0;
  std::vector<FamMor> reps;
  std::vector<int> birth;  // colimit birth level per rep
  Flag flag = Flag::Truncated;
};
HomCosheafResult hom_cosheaf(const Cosheaf& a, const Cosheaf& b, int colim_level, int lim_level);

struct LevelEpiReport {
  int level = 0;
  bool base_surjective = false;
  std::vector<int> joint_image_sizes;  // per cod cell
  std::vector<int> cod_fibre_sizes;
  bool epi = false;
};
struct EpiCertificate {
  bool epi = false;
  int window = 0;
  std::vector<LevelEpiReport> levels;
};
EpiCertificate is_epi_cosheaf(const CosheafMor& m, int window);

// The data of Lemma-style inverse-limit decomposition: cosection chains of
// the level cells, their maps into the global cosections chain, and the
// global chain itself.
class CosectionOracle {
 public:
  CosectionOracle(ProSpace base, Instance tag, DChain global,
                  std::function<FinObj(int, int, int)> cell_level,
                  std::function<FinMor(int, int, int)> cell_step,
                  std::function<FinMor(int, int, int)> cell_to_global);

  const ProSpace& base() const { return base_; }
  Instance tag() const { return tag_; }
  const DChain& global() const { return global_; }
  // chain of A(f_n^{-1}(x)) for the cell x at space level n, evaluated at
  // chain levels k >= n
  FinObj cell_level(int n, int x, int k) const;
  FinMor cell_step(int n, int x, int k) const;     // level k+1 -> level k
  FinMor cell_to_global(int n, int x, int k) const;  // C_k -> d_k

 private:
  ProSpace base_;
  Instance tag_;
  DChain global_;
  std::function<FinObj(int, int, int)> cell_level_;
  std::function<FinMor(int, int, int)> cell_step_;
  std::function<FinMor(int, int, int)> cell_to_global_;
};

// Oracle of a cosheaf: cell chains are its cosections chains, the global
// chain its global cosections. Coproduct-capable instances only.
CosectionOracle derive_oracle(const Cosheaf& a);

// Rebuilds a cosheaf from the oracle: level-n fibre at x is the image of
// C^{n,x}_{n+window} -> d_{n+window} -> d_n, the eventual image within the
// window. For a cosheaf-derived oracle this is levelwise isomorphic to the
// eventual-image normalization of the original chain.
Cosheaf inv_decompose(const CosectionOracle& o, int window);

}  // namespace procosh
