#pragma once

#include <optional>
#include <vector>

#include "procosh/fincat.hpp"

// Fam(D): finite families of D-objects indexed by a finite set of labels,
// with fibrewise finite limits, image factorization via joint images,
// coequalizers of kernel pairs, coproducts, and hom enumeration. This is
// the category of cosheaves over finite spaces with fibres in D.

namespace procosh {

struct FamObj {
  Instance tag = Instance::Set;
  std::vector<FinObj> fibres;  // index labels 0..n-1; empty index permitted

  int index_size() const { return static_cast<int>(fibres.size()); }
  const FinObj& fibre(int x) const { return fibres[static_cast<size_t>(x)]; }
  std::optional<std::string> validate() const;
  bool operator==(const FamObj&) const = default;
};

FamObj fam_obj(Instance tag, std::vector<FinObj> fibres);
FamObj fam_terminal(Instance tag);  // one index, terminal fibre
FamObj fam_initial(Instance tag);   // empty index

struct FamMor {
  FamObj dom, cod;
  std::vector<int> base;              // index map, length = dom.index_size()
  std::vector<FinMor> fibre_maps;     // fibre_maps[x]: dom.fibre(x) -> cod.fibre(base[x])

  int base_at(int x) const { return base[static_cast<size_t>(x)]; }
  const FinMor& fibre_map(int x) const { return fibre_maps[static_cast<size_t>(x)]; }
  std::optional<std::string> validate() const;
  bool operator==(const FamMor&) const = default;
};

FamMor fam_mor(FamObj dom, FamObj cod, std::vector<int> base, std::vector<FinMor> fibre_maps);
FamMor fam_identity(const FamObj& a);
FamMor fam_mor_unchecked(FamObj dom, FamObj cod, std::vector<int> base,
                         std::vector<FinMor> fibre_maps);

FamMor compose(const FamMor& g, const FamMor& f);

struct FamProductResult {
  FamObj obj;  // index pairs (x,y) row-major over dom indices
  FamMor proj1, proj2;
};
FamProductResult product(const FamObj& a, const FamObj& b);
FamMor pair_into_product(const FamProductResult& p, const FamMor& f, const FamMor& g);

struct FamEqualizerResult {
  FamObj obj;
  FamMor mono;
  std::vector<int> index_labels;  // dom indices kept
};
FamEqualizerResult equalizer(const FamMor& f, const FamMor& g);

struct FamPullbackResult {
  FamObj obj;
  FamMor p1, p2;
};
FamPullbackResult pullback(const FamMor& f, const FamMor& g);

// Unique map to the terminal family.
FamMor to_terminal(const FamObj& a);

struct FamImageFactorization {
  FamMor repi;  // epic by the fam epi test
  FamMor mono;  // monic: injective base, monic fibre maps
};
// Image indexed by the base image; fibre at y is the joint image of the
// fibre maps over the preimage of y.
FamImageFactorization image_factor(const FamMor& m);

struct FamCoequalizerResult {
  FamObj obj;
  FamMor quotient;
};
// Coequalizer of the kernel pair of m: the image object with its repi leg.
FamCoequalizerResult coeq_kernel_pair(const FamMor& m);

// Epi iff the base is surjective and the fibre maps into each cod fibre
// jointly generate it; mono iff the base is injective and fibre maps monic.
bool is_epi(const FamMor& m);
bool is_mono(const FamMor& m);

struct FamCoproductResult {
  FamObj obj;
  FamMor inj1, inj2;
};
// Disjoint union of indices; works for all instances (no fibre coproducts).
FamCoproductResult coproduct(const FamObj& a, const FamObj& b);

struct GlobalCosectionsResult {
  FinObj total;
  std::vector<FinMor> coprojections;  // per index label
};
// Iterated fincat coproduct of the fibres; coproduct-capable instances only.
GlobalCosectionsResult global_cosections(const FamObj& a);
// The unique map out of the coproduct restricting to the given legs.
FinMor assemble_out_of_coproduct(const GlobalCosectionsResult& gc,
                                 const std::vector<FinMor>& legs, const FinObj& cod);
// Functorial action of global cosections on a family map.
FinMor global_cosections_map(const FamMor& m, const GlobalCosectionsResult& gc_dom,
                             const GlobalCosectionsResult& gc_cod);

// Hom_C(A(X), d) as tuples of fibre maps A_x -> d, one entry per index.
std::vector<std::vector<FinMor>> hom_out(const FamObj& a, const FinObj& d);

// All family morphisms A -> B, enumerated base-first.
std::vector<FamMor> hom_set(const FamObj& a, const FamObj& b);

// Isomorphism witness up to index relabeling, or nullopt.
std::optional<FamMor> find_iso(const FamObj& a, const FamObj& b);
bool is_iso(const FamMor& m);

// Subfamily on the given index labels (sorted ascending).
FamObj restrict_family(const FamObj& a, const std::vector<int>& labels);

}  // namespace procosh
