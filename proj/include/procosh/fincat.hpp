#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Effective finite regular base categories: finite sets, finite abelian
// groups, finite groups. Objects carry canonical element labels 0..n-1;
// groups carry a full multiplication table with the identity at label 0.
// All values are immutable after construction and all operations are pure.

namespace procosh {

enum class Instance { Set, Ab, Grp };

const char* instance_name(Instance tag);
std::optional<Instance> instance_from_name(const std::string& name);

// Set and Ab have finite coproducts with monic coprojections; plain finite
// groups do not (free products of nontrivial finite groups are infinite).
bool coproduct_capable(Instance tag);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// An operation the instance does not support (e.g. coproducts in Grp).
struct CapabilityError : Error {
  using Error::Error;
};
// Domain/codomain or instance-tag mismatch, malformed tables, etc.
struct ShapeError : Error {
  using Error::Error;
};

// Desk-scale ceilings. Atomic groups (hand- or JSON-constructed) and
// brute-force hom/iso enumeration stay within atom_cap; composite
// constructions (products, direct sums) may grow up to composite_cap.
struct Config {
  static int atom_group_order_cap();
  static int composite_group_order_cap();
  static void set_atom_group_order_cap(int cap);
  static void set_composite_group_order_cap(int cap);
};

class FinObj {
 public:
  FinObj() : tag_(Instance::Set), size_(0) {}

  static FinObj set(int size);
  // table is row-major size*size with identity at label 0; validated.
  static FinObj group(Instance tag, std::vector<int> table);
  static FinObj trivial_group(Instance tag);
  static FinObj cyclic(int n, Instance tag = Instance::Ab);
  static FinObj symmetric3();
  static FinObj klein_four();
  static FinObj initial(Instance tag);   // Set: empty set; Ab/Grp: trivial group
  static FinObj terminal(Instance tag);  // Set: singleton; Ab/Grp: trivial group

  // Escape hatch for negative-control fixtures: skips axiom validation.
  static FinObj unchecked_group(Instance tag, std::vector<int> table);

  Instance tag() const { return tag_; }
  int size() const { return size_; }
  bool is_group() const { return tag_ != Instance::Set; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * size_ + b]; }
  int unit() const { return 0; }
  int inverse(int a) const;
  int element_order(int a) const;
  const std::vector<int>& table() const { return table_; }

  // nullopt when the object satisfies its instance axioms, else a message.
  std::optional<std::string> validate() const;

  bool operator==(const FinObj&) const = default;

 private:
  FinObj(Instance tag, int size, std::vector<int> table)
      : tag_(tag), size_(size), table_(std::move(table)) {}
  Instance tag_;
  int size_;
  std::vector<int> table_;  // empty for Set
};

class FinMor {
 public:
  FinMor() = default;
  // Validates ranges and, for group instances, structure preservation.
  FinMor(FinObj dom, FinObj cod, std::vector<int> table);
  static FinMor identity(const FinObj& a);
  static FinMor unchecked(FinObj dom, FinObj cod, std::vector<int> table);
  // Group instances: the map sending everything to the unit.
  static FinMor zero(const FinObj& dom, const FinObj& cod);
  static FinMor constant(const FinObj& dom, const FinObj& cod, int value);

  const FinObj& dom() const { return dom_; }
  const FinObj& cod() const { return cod_; }
  int operator()(int x) const { return table_[static_cast<size_t>(x)]; }
  const std::vector<int>& table() const { return table_; }
  std::optional<std::string> validate() const;

  bool operator==(const FinMor&) const = default;

 private:
  FinObj dom_, cod_;
  std::vector<int> table_;
};

// A monic inclusion into an ambient object. For group instances the image
// of the inclusion is closed under the ambient table.
struct Subobject {
  FinObj ambient;
  FinMor inclusion;  // sub -> ambient, injective
  const FinObj& sub() const { return inclusion.dom(); }
};

// Builds the subobject on the given ambient labels (sorted, distinct).
// Group instances require label 0 present and closure under the table.
Subobject sub_from_labels(const FinObj& ambient, std::vector<int> labels);

FinMor compose(const FinMor& g, const FinMor& f);  // g after f

struct ProductResult {
  FinObj obj;  // labels are pairs (i,j) row-major: i*|b|+j
  FinMor proj1, proj2;
};
ProductResult product(const FinObj& a, const FinObj& b);
// Mediating map <f,g>: c -> a x b for f: c->a, g: c->b.
FinMor pair_into_product(const ProductResult& p, const FinMor& f, const FinMor& g);

struct EqualizerResult {
  FinObj obj;
  FinMor mono;  // obj -> dom(f)
};
EqualizerResult equalizer(const FinMor& f, const FinMor& g);

struct PullbackResult {
  FinObj obj;
  FinMor p1, p2;          // obj -> dom(f), obj -> dom(g)
  FinMor into_product;    // obj -> dom(f) x dom(g)
};
PullbackResult pullback(const FinMor& f, const FinMor& g);

struct ImageFactorization {
  FinMor repi;  // dom(f) ->> image, surjective
  FinMor mono;  // image -> cod(f), injective
};
ImageFactorization image_factor(const FinMor& f);

// Smallest subobject of the common codomain through which every fs[k]
// factors: union of images for sets, generated subgroup for groups.
Subobject joint_image(const std::vector<FinMor>& fs);

struct CoproductResult {
  FinObj obj;
  FinMor inj1, inj2;  // monic coprojections
};
// Capability: Set (disjoint union) and Ab (direct sum) only.
CoproductResult coproduct(const FinObj& a, const FinObj& b);
// Mediating map [f,g]: a+b -> c for f: a->c, g: b->c.
FinMor copair(const CoproductResult& c, const FinMor& f, const FinMor& g);

bool is_mono(const FinMor& f);
bool is_epi(const FinMor& f);
bool is_iso(const FinMor& f);

// Complete duplicate-free enumeration of structure-preserving maps.
std::vector<FinMor> hom_set(const FinObj& a, const FinObj& b);

// Canonical-form comparison for sets, brute-force bijection search for
// groups; returns a witness when the objects are isomorphic.
std::optional<FinMor> find_iso(const FinObj& a, const FinObj& b);

// f = mono . result when the image of f lies inside the mono; throws otherwise.
FinMor factor_through_mono(const FinMor& f, const FinMor& mono);
FinMor factor_through_sub(const Subobject& s, const FinMor& f);

}  // namespace procosh
