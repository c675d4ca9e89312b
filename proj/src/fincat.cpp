#include "procosh/fincat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace procosh {

namespace {

int g_atom_cap = 24;
int g_composite_cap = 1024;

std::string shape_msg(const std::string& op, const std::string& why) {
  return op + ": " + why;
}

}  // namespace

const char* instance_name(Instance tag) {
  switch (tag) {
    case Instance::Set: return "set";
    case Instance::Ab: return "ab";
    case Instance::Grp: return "grp";
  }
  return "?";
}

std::optional<Instance> instance_from_name(const std::string& name) {
  if (name == "set") return Instance::Set;
  if (name == "ab") return Instance::Ab;
  if (name == "grp") return Instance::Grp;
  return std::nullopt;
}

bool coproduct_capable(Instance tag) { return tag != Instance::Grp; }

int Config::atom_group_order_cap() { return g_atom_cap; }
int Config::composite_group_order_cap() { return g_composite_cap; }
void Config::set_atom_group_order_cap(int cap) { g_atom_cap = cap; }
void Config::set_composite_group_order_cap(int cap) { g_composite_cap = cap; }

// ---------------------------------------------------------------------------
// FinObj

FinObj FinObj::set(int size) {
  if (size < 0) throw ShapeError("FinObj::set: negative size");
  return FinObj(Instance::Set, size, {});
}

FinObj FinObj::group(Instance tag, std::vector<int> table) {
  if (tag == Instance::Set) throw ShapeError("FinObj::group: set tag");
  size_t n = 0;
  while (n * n < table.size()) ++n;
  if (n * n != table.size() || n == 0)
    throw ShapeError("FinObj::group: table is not a nonempty square");
  FinObj g(tag, static_cast<int>(n), std::move(table));
  if (auto err = g.validate()) throw ShapeError("FinObj::group: " + *err);
  return g;
}

FinObj FinObj::unchecked_group(Instance tag, std::vector<int> table) {
  size_t n = 0;
  while (n * n < table.size()) ++n;
  return FinObj(tag, static_cast<int>(n), std::move(table));
}

FinObj FinObj::trivial_group(Instance tag) {
  return FinObj(tag, 1, {0});
}

FinObj FinObj::cyclic(int n, Instance tag) {
  if (n < 1) throw ShapeError("FinObj::cyclic: order must be >= 1");
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[static_cast<size_t>(i) * n + j] = (i + j) % n;
  return group(tag, std::move(t));
}

FinObj FinObj::symmetric3() {
  // permutations of {0,1,2}, identity first, composition (p*q)(x) = p(q(x))
  std::vector<std::vector<int>> perms = {
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  int n = 6;
  auto index_of = [&](const std::vector<int>& p) {
    for (int i = 0; i < n; ++i)
      if (perms[static_cast<size_t>(i)] == p) return i;
    return -1;
  };
  std::vector<int> t(36);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> c(3);
      for (int x = 0; x < 3; ++x)
        c[static_cast<size_t>(x)] =
            perms[static_cast<size_t>(i)][static_cast<size_t>(
                perms[static_cast<size_t>(j)][static_cast<size_t>(x)])];
      t[static_cast<size_t>(i) * n + j] = index_of(c);
    }
  return group(Instance::Grp, std::move(t));
}

FinObj FinObj::klein_four() {
  // Z/2 x Z/2 via xor on labels 0..3
  std::vector<int> t(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[static_cast<size_t>(i) * 4 + j] = i ^ j;
  return group(Instance::Ab, std::move(t));
}

FinObj FinObj::initial(Instance tag) {
  return tag == Instance::Set ? set(0) : trivial_group(tag);
}

FinObj FinObj::terminal(Instance tag) {
  return tag == Instance::Set ? set(1) : trivial_group(tag);
}

int FinObj::inverse(int a) const {
  for (int b = 0; b < size_; ++b)
    if (mul(a, b) == 0) return b;
  throw ShapeError("FinObj::inverse: no inverse (invalid table)");
}

int FinObj::element_order(int a) const {
  int x = a, k = 1;
  while (x != 0) {
    x = mul(x, a);
    ++k;
    if (k > size_) throw ShapeError("FinObj::element_order: invalid table");
  }
  return k;
}

std::optional<std::string> FinObj::validate() const {
  if (tag_ == Instance::Set) {
    if (!table_.empty()) return "set with a table";
    return std::nullopt;
  }
  int n = size_;
  if (n < 1) return "group must be nonempty";
  if (table_.size() != static_cast<size_t>(n) * n) return "table size mismatch";
  for (int v : table_)
    if (v < 0 || v >= n) return "table entry out of range";
  for (int a = 0; a < n; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a)
      return "label 0 is not an identity at element " + std::to_string(a);
  }
  // rows and columns must be permutations (gives inverses, with associativity)
  for (int a = 0; a < n; ++a) {
    std::vector<char> seen_r(static_cast<size_t>(n), 0), seen_c(static_cast<size_t>(n), 0);
    for (int b = 0; b < n; ++b) {
      seen_r[static_cast<size_t>(mul(a, b))] = 1;
      seen_c[static_cast<size_t>(mul(b, a))] = 1;
    }
    for (int b = 0; b < n; ++b)
      if (!seen_r[static_cast<size_t>(b)] || !seen_c[static_cast<size_t>(b)])
        return "row/column " + std::to_string(a) + " is not a permutation";
  }
  if (n <= 256) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            return "associativity fails at (" + std::to_string(a) + "," +
                   std::to_string(b) + "," + std::to_string(c) + ")";
  } else {
    // sampled check for large composite tables
    uint64_t s = 0x9e3779b97f4a7c15ull;
    for (int k = 0; k < 200000; ++k) {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      int a = static_cast<int>((s >> 33) % static_cast<uint64_t>(n));
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      int b = static_cast<int>((s >> 33) % static_cast<uint64_t>(n));
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      int c = static_cast<int>((s >> 33) % static_cast<uint64_t>(n));
      if (mul(mul(a, b), c) != mul(a, mul(b, c))) return "associativity fails (sampled)";
    }
  }
  if (tag_ == Instance::Ab) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (mul(a, b) != mul(b, a))
          return "commutativity fails at (" + std::to_string(a) + "," +
                 std::to_string(b) + ")";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// FinMor

FinMor::FinMor(FinObj dom, FinObj cod, std::vector<int> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  if (auto err = validate()) throw ShapeError("FinMor: " + *err);
}

FinMor FinMor::identity(const FinObj& a) {
  std::vector<int> t(static_cast<size_t>(a.size()));
  std::iota(t.begin(), t.end(), 0);
  return unchecked(a, a, std::move(t));
}

FinMor FinMor::unchecked(FinObj dom, FinObj cod, std::vector<int> table) {
  FinMor m;
  m.dom_ = std::move(dom);
  m.cod_ = std::move(cod);
  m.table_ = std::move(table);
  return m;
}

FinMor FinMor::zero(const FinObj& dom, const FinObj& cod) {
  if (!dom.is_group() || !cod.is_group())
    throw ShapeError("FinMor::zero: group instances only");
  return unchecked(dom, cod, std::vector<int>(static_cast<size_t>(dom.size()), 0));
}

FinMor FinMor::constant(const FinObj& dom, const FinObj& cod, int value) {
  if (value < 0 || value >= cod.size()) throw ShapeError("FinMor::constant: value out of range");
  if (dom.is_group() && value != 0)
    throw ShapeError("FinMor::constant: nonzero constant is not a homomorphism");
  return unchecked(dom, cod, std::vector<int>(static_cast<size_t>(dom.size()), value));
}

std::optional<std::string> FinMor::validate() const {
  if (dom_.tag() != cod_.tag()) return "instance tags differ";
  if (table_.size() != static_cast<size_t>(dom_.size())) return "table length mismatch";
  for (int v : table_)
    if (v < 0 || v >= cod_.size()) return "value out of range";
  if (dom_.is_group()) {
    int n = dom_.size();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if ((*this)(dom_.mul(a, b)) != cod_.mul((*this)(a), (*this)(b)))
          return "not structure-preserving at (" + std::to_string(a) + "," +
                 std::to_string(b) + ")";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Operations

FinMor compose(const FinMor& g, const FinMor& f) {
  if (!(f.cod() == g.dom())) throw ShapeError(shape_msg("compose", "cod(f) != dom(g)"));
  std::vector<int> t(static_cast<size_t>(f.dom().size()));
  for (int x = 0; x < f.dom().size(); ++x) t[static_cast<size_t>(x)] = g(f(x));
  return FinMor::unchecked(f.dom(), g.cod(), std::move(t));
}

Subobject sub_from_labels(const FinObj& ambient, std::vector<int> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  for (int v : labels)
    if (v < 0 || v >= ambient.size())
      throw ShapeError("sub_from_labels: label out of range");
  int k = static_cast<int>(labels.size());
  FinObj sub;
  if (!ambient.is_group()) {
    sub = FinObj::set(k);
  } else {
    if (labels.empty() || labels[0] != 0)
      throw ShapeError("sub_from_labels: group subobject must contain the unit");
    std::vector<int> pos(static_cast<size_t>(ambient.size()), -1);
    for (int i = 0; i < k; ++i) pos[static_cast<size_t>(labels[static_cast<size_t>(i)])] = i;
    std::vector<int> t(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        int prod = ambient.mul(labels[static_cast<size_t>(i)], labels[static_cast<size_t>(j)]);
        int p = pos[static_cast<size_t>(prod)];
        if (p < 0) throw ShapeError("sub_from_labels: labels are not closed under the table");
        t[static_cast<size_t>(i) * k + j] = p;
      }
    sub = FinObj::unchecked_group(ambient.tag(), std::move(t));
  }
  return Subobject{ambient, FinMor::unchecked(sub, ambient, std::move(labels))};
}

ProductResult product(const FinObj& a, const FinObj& b) {
  if (a.tag() != b.tag()) throw ShapeError(shape_msg("product", "mixed instance tags"));
  int na = a.size(), nb = b.size(), n = na * nb;
  FinObj obj;
  if (!a.is_group()) {
    obj = FinObj::set(n);
  } else {
    if (n > Config::composite_group_order_cap())
      throw Error("product: composite group order cap exceeded");
    std::vector<int> t(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int i1 = i / nb, i2 = i % nb, j1 = j / nb, j2 = j % nb;
        t[static_cast<size_t>(i) * n + j] = a.mul(i1, j1) * nb + b.mul(i2, j2);
      }
    obj = FinObj::unchecked_group(a.tag(), std::move(t));
  }
  std::vector<int> t1(static_cast<size_t>(n)), t2(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    t1[static_cast<size_t>(i)] = i / nb;
    t2[static_cast<size_t>(i)] = i % nb;
  }
  return ProductResult{obj, FinMor::unchecked(obj, a, std::move(t1)),
                       FinMor::unchecked(obj, b, std::move(t2))};
}

FinMor pair_into_product(const ProductResult& p, const FinMor& f, const FinMor& g) {
  if (!(f.dom() == g.dom())) throw ShapeError("pair_into_product: domains differ");
  if (!(f.cod() == p.proj1.cod()) || !(g.cod() == p.proj2.cod()))
    throw ShapeError("pair_into_product: codomains do not match the product");
  int nb = p.proj2.cod().size();
  std::vector<int> t(static_cast<size_t>(f.dom().size()));
  for (int x = 0; x < f.dom().size(); ++x) t[static_cast<size_t>(x)] = f(x) * nb + g(x);
  return FinMor::unchecked(f.dom(), p.obj, std::move(t));
}

EqualizerResult equalizer(const FinMor& f, const FinMor& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()))
    throw ShapeError(shape_msg("equalizer", "not a parallel pair"));
  std::vector<int> labels;
  for (int x = 0; x < f.dom().size(); ++x)
    if (f(x) == g(x)) labels.push_back(x);
  Subobject s = sub_from_labels(f.dom(), std::move(labels));
  return EqualizerResult{s.sub(), s.inclusion};
}

PullbackResult pullback(const FinMor& f, const FinMor& g) {
  if (!(f.cod() == g.cod())) throw ShapeError(shape_msg("pullback", "codomain mismatch"));
  ProductResult p = product(f.dom(), g.dom());
  EqualizerResult e = equalizer(compose(f, p.proj1), compose(g, p.proj2));
  return PullbackResult{e.obj, compose(p.proj1, e.mono), compose(p.proj2, e.mono), e.mono};
}

ImageFactorization image_factor(const FinMor& f) {
  std::vector<int> labels(f.table());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  Subobject s = sub_from_labels(f.cod(), labels);
  std::vector<int> pos(static_cast<size_t>(f.cod().size()), -1);
  const auto& incl = s.inclusion.table();
  for (int i = 0; i < static_cast<int>(incl.size()); ++i) pos[static_cast<size_t>(incl[static_cast<size_t>(i)])] = i;
  std::vector<int> rt(static_cast<size_t>(f.dom().size()));
  for (int x = 0; x < f.dom().size(); ++x) rt[static_cast<size_t>(x)] = pos[static_cast<size_t>(f(x))];
  return ImageFactorization{FinMor::unchecked(f.dom(), s.sub(), std::move(rt)), s.inclusion};
}

Subobject joint_image(const std::vector<FinMor>& fs) {
  if (fs.empty()) throw ShapeError("joint_image: empty family (caller must handle the empty fibre)");
  const FinObj& e = fs[0].cod();
  for (const auto& f : fs) {
    if (!(f.cod() == e)) throw ShapeError("joint_image: codomains differ");
    if (f.dom().tag() != e.tag()) throw ShapeError("joint_image: mixed instance tags");
  }
  std::set<int> gen;
  for (const auto& f : fs)
    for (int v : f.table()) gen.insert(v);
  if (!e.is_group()) {
    return sub_from_labels(e, std::vector<int>(gen.begin(), gen.end()));
  }
  // breadth-first closure of the generated subgroup
  gen.insert(0);
  std::vector<int> work(gen.begin(), gen.end());
  std::set<int> closed(gen);
  size_t head = 0;
  while (head < work.size()) {
    int a = work[head++];
    for (size_t i = 0; i < work.size(); ++i) {
      int p1 = e.mul(a, work[i]);
      if (closed.insert(p1).second) work.push_back(p1);
      int p2 = e.mul(work[i], a);
      if (closed.insert(p2).second) work.push_back(p2);
    }
  }
  return sub_from_labels(e, std::vector<int>(closed.begin(), closed.end()));
}

CoproductResult coproduct(const FinObj& a, const FinObj& b) {
  if (a.tag() != b.tag()) throw ShapeError(shape_msg("coproduct", "mixed instance tags"));
  if (!coproduct_capable(a.tag()))
    throw CapabilityError(
        "coproduct: the plain-group instance has no finite coproducts; use joint_image "
        "or mapping-out instead");
  if (a.tag() == Instance::Set) {
    int na = a.size(), nb = b.size();
    FinObj obj = FinObj::set(na + nb);
    std::vector<int> t1(static_cast<size_t>(na)), t2(static_cast<size_t>(nb));
    std::iota(t1.begin(), t1.end(), 0);
    std::iota(t2.begin(), t2.end(), na);
    return CoproductResult{obj, FinMor::unchecked(a, obj, std::move(t1)),
                           FinMor::unchecked(b, obj, std::move(t2))};
  }
  // abelian: direct sum, carrier = pairs row-major as in product
  ProductResult p = product(a, b);
  int nb = b.size();
  std::vector<int> t1(static_cast<size_t>(a.size())), t2(static_cast<size_t>(b.size()));
  for (int i = 0; i < a.size(); ++i) t1[static_cast<size_t>(i)] = i * nb;
  std::iota(t2.begin(), t2.end(), 0);
  return CoproductResult{p.obj, FinMor::unchecked(a, p.obj, std::move(t1)),
                         FinMor::unchecked(b, p.obj, std::move(t2))};
}

FinMor copair(const CoproductResult& c, const FinMor& f, const FinMor& g) {
  if (!(f.cod() == g.cod())) throw ShapeError("copair: codomains differ");
  const FinObj& obj = c.obj;
  std::vector<int> t(static_cast<size_t>(obj.size()));
  if (obj.tag() == Instance::Set) {
    int na = f.dom().size();
    for (int x = 0; x < na; ++x) t[static_cast<size_t>(x)] = f(x);
    for (int y = 0; y < g.dom().size(); ++y) t[static_cast<size_t>(na + y)] = g(y);
  } else {
    int nb = g.dom().size();
    const FinObj& cod = f.cod();
    for (int e = 0; e < obj.size(); ++e)
      t[static_cast<size_t>(e)] = cod.mul(f(e / nb), g(e % nb));
  }
  return FinMor::unchecked(obj, f.cod(), std::move(t));
}

bool is_mono(const FinMor& f) {
  std::vector<char> seen(static_cast<size_t>(f.cod().size()), 0);
  for (int v : f.table()) {
    if (seen[static_cast<size_t>(v)]) return false;
    seen[static_cast<size_t>(v)] = 1;
  }
  return true;
}

bool is_epi(const FinMor& f) {
  std::vector<char> seen(static_cast<size_t>(f.cod().size()), 0);
  for (int v : f.table()) seen[static_cast<size_t>(v)] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool is_iso(const FinMor& f) { return f.dom().size() == f.cod().size() && is_mono(f); }

namespace {

// Greedy generating sequence plus a BFS word expression for every element:
// expr[e] = (parent, generator index), so a homomorphism is determined by
// the generator images.
struct GroupGenerators {
  std::vector<int> gens;
  std::vector<int> order;            // BFS discovery order, order[0] = 0
  std::vector<std::pair<int, int>> expr;  // per element: (parent, gen idx), (-1,-1) for unit
};

std::vector<int> generated_subgroup(const FinObj& g, const std::vector<int>& gens) {
  std::set<int> closed = {0};
  std::vector<int> work = {0};
  size_t head = 0;
  while (head < work.size()) {
    int a = work[head++];
    for (int s : gens) {
      int p = g.mul(a, s);
      if (closed.insert(p).second) work.push_back(p);
    }
  }
  return std::vector<int>(closed.begin(), closed.end());
}

GroupGenerators find_generators(const FinObj& g) {
  GroupGenerators r;
  std::vector<int> span = {0};
  while (static_cast<int>(span.size()) < g.size()) {
    int pick = -1;
    std::set<int> in_span(span.begin(), span.end());
    for (int x = 0; x < g.size(); ++x)
      if (!in_span.count(x)) {
        pick = x;
        break;
      }
    r.gens.push_back(pick);
    span = generated_subgroup(g, r.gens);
  }
  // BFS words
  r.expr.assign(static_cast<size_t>(g.size()), {-1, -1});
  std::vector<char> seen(static_cast<size_t>(g.size()), 0);
  seen[0] = 1;
  r.order = {0};
  size_t head = 0;
  while (head < r.order.size()) {
    int a = r.order[head++];
    for (size_t gi = 0; gi < r.gens.size(); ++gi) {
      int p = g.mul(a, r.gens[gi]);
      if (!seen[static_cast<size_t>(p)]) {
        seen[static_cast<size_t>(p)] = 1;
        r.expr[static_cast<size_t>(p)] = {a, static_cast<int>(gi)};
        r.order.push_back(p);
      }
    }
  }
  return r;
}

std::optional<std::vector<int>> extend_hom(const FinObj& a, const FinObj& b,
                                           const GroupGenerators& gg,
                                           const std::vector<int>& gen_images) {
  std::vector<int> t(static_cast<size_t>(a.size()), -1);
  t[0] = 0;
  for (size_t idx = 1; idx < gg.order.size(); ++idx) {
    int e = gg.order[idx];
    auto [parent, gi] = gg.expr[static_cast<size_t>(e)];
    t[static_cast<size_t>(e)] = b.mul(t[static_cast<size_t>(parent)],
                                      gen_images[static_cast<size_t>(gi)]);
  }
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (t[static_cast<size_t>(a.mul(x, y))] !=
          b.mul(t[static_cast<size_t>(x)], t[static_cast<size_t>(y)]))
        return std::nullopt;
  return t;
}

}  // namespace

std::vector<FinMor> hom_set(const FinObj& a, const FinObj& b) {
  if (a.tag() != b.tag()) throw ShapeError("hom_set: mixed instance tags");
  std::vector<FinMor> out;
  if (!a.is_group()) {
    if (a.size() == 0) {
      out.push_back(FinMor::unchecked(a, b, {}));
      return out;
    }
    if (b.size() == 0) return out;
    double total = std::pow(static_cast<double>(b.size()), a.size());
    if (total > (1 << 20)) throw Error("hom_set: enumeration too large for desk scale");
    std::vector<int> t(static_cast<size_t>(a.size()), 0);
    while (true) {
      out.push_back(FinMor::unchecked(a, b, t));
      int i = 0;
      while (i < a.size()) {
        if (++t[static_cast<size_t>(i)] < b.size()) break;
        t[static_cast<size_t>(i)] = 0;
        ++i;
      }
      if (i == a.size()) break;
    }
    return out;
  }
  if (a.size() > Config::atom_group_order_cap() || b.size() > Config::atom_group_order_cap())
    throw Error("hom_set: group order exceeds the enumeration cap");
  GroupGenerators gg = find_generators(a);
  size_t k = gg.gens.size();
  if (k == 0) {
    out.push_back(FinMor::zero(a, b));
    return out;
  }
  std::vector<int> img(k, 0);
  while (true) {
    bool ok = true;
    for (size_t i = 0; i < k && ok; ++i)
      // the image order must divide the generator order
      if (a.element_order(gg.gens[i]) % b.element_order(img[i]) != 0) ok = false;
    if (ok) {
      if (auto t = extend_hom(a, b, gg, img)) out.push_back(FinMor::unchecked(a, b, std::move(*t)));
    }
    size_t i = 0;
    while (i < k) {
      if (++img[i] < b.size()) break;
      img[i] = 0;
      ++i;
    }
    if (i == k) break;
  }
  return out;
}

std::optional<FinMor> find_iso(const FinObj& a, const FinObj& b) {
  if (a.tag() != b.tag()) return std::nullopt;
  if (a.size() != b.size()) return std::nullopt;
  if (!a.is_group()) {
    std::vector<int> t(static_cast<size_t>(a.size()));
    std::iota(t.begin(), t.end(), 0);
    return FinMor::unchecked(a, b, std::move(t));
  }
  if (a.size() > Config::atom_group_order_cap())
    throw Error("find_iso: group order exceeds the enumeration cap");
  GroupGenerators gg = find_generators(a);
  size_t k = gg.gens.size();
  if (k == 0) return FinMor::unchecked(a, b, {0});
  // backtracking over generator images with matching element orders
  std::vector<std::vector<int>> candidates(k);
  for (size_t i = 0; i < k; ++i) {
    int ord = a.element_order(gg.gens[i]);
    for (int y = 0; y < b.size(); ++y)
      if (b.element_order(y) == ord) candidates[i].push_back(y);
  }
  std::vector<int> img(k, 0);
  std::optional<FinMor> found;
  auto rec = [&](auto&& self, size_t depth) -> bool {
    if (depth == k) {
      if (auto t = extend_hom(a, b, gg, img)) {
        FinMor m = FinMor::unchecked(a, b, std::move(*t));
        if (is_iso(m)) {
          found = std::move(m);
          return true;
        }
      }
      return false;
    }
    for (int y : candidates[depth]) {
      img[depth] = y;
      if (self(self, depth + 1)) return true;
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

FinMor factor_through_mono(const FinMor& f, const FinMor& mono) {
  if (!(f.cod() == mono.cod())) throw ShapeError("factor_through_mono: codomains differ");
  std::vector<int> pos(static_cast<size_t>(mono.cod().size()), -1);
  for (int i = 0; i < mono.dom().size(); ++i) pos[static_cast<size_t>(mono(i))] = i;
  std::vector<int> t(static_cast<size_t>(f.dom().size()));
  for (int x = 0; x < f.dom().size(); ++x) {
    int p = pos[static_cast<size_t>(f(x))];
    if (p < 0) throw ShapeError("factor_through_mono: image not contained in the subobject");
    t[static_cast<size_t>(x)] = p;
  }
  return FinMor::unchecked(f.dom(), mono.dom(), std::move(t));
}

FinMor factor_through_sub(const Subobject& s, const FinMor& f) {
  return factor_through_mono(f, s.inclusion);
}

}  // namespace procosh
