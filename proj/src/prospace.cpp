#include "procosh/prospace.hpp"

#include <algorithm>
#include <set>

namespace procosh {

ProSpace::ProSpace(DChain chain, bool surjective)
    : chain_(std::move(chain)), surjective_(surjective) {}

ProSpace cantor_space() {
  ChainDecl d;
  d.stabilization_bound = 0;
  DChain c([](int n) { return FinObj::set(1 << n); },
           [](int n) {
             FinObj dom = FinObj::set(1 << (n + 1)), cod = FinObj::set(1 << n);
             std::vector<int> t(static_cast<size_t>(dom.size()));
             for (int x = 0; x < dom.size(); ++x) t[static_cast<size_t>(x)] = x >> 1;
             return FinMor(dom, cod, std::move(t));
           },
           d);
  return ProSpace(std::move(c), true);
}

ProSpace one_point_compactification() {
  // level n carrier: points 0..n-1 plus the accumulation cell at label n
  ChainDecl d;
  d.stabilization_bound = 0;
  DChain c([](int n) { return FinObj::set(n + 1); },
           [](int n) {
             FinObj dom = FinObj::set(n + 2), cod = FinObj::set(n + 1);
             std::vector<int> t(static_cast<size_t>(n + 2));
             for (int i = 0; i <= n - 1; ++i) t[static_cast<size_t>(i)] = i;
             t[static_cast<size_t>(n)] = n;      // the new point falls into the cell
             t[static_cast<size_t>(n + 1)] = n;  // the cell maps onto the cell
             return FinMor(dom, cod, std::move(t));
           },
           d);
  return ProSpace(std::move(c), true);
}

ProSpace finite_space(int size) {
  if (size < 1) throw ShapeError("finite_space: size must be >= 1");
  return ProSpace(DChain::constant(FinObj::set(size)), true);
}

ProSpace point_space() { return finite_space(1); }

ClopenSet clopen(const ProSpace& X, int level, std::vector<int> subset) {
  if (level < 0) throw ShapeError("clopen: negative level");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  int carrier = X.level(level).size();
  for (int v : subset)
    if (v < 0 || v >= carrier) throw ShapeError("clopen: label out of range");
  return ClopenSet{level, std::move(subset)};
}

ClopenSet whole_space(const ProSpace& X, int level) {
  std::vector<int> all(static_cast<size_t>(X.level(level).size()));
  for (int i = 0; i < static_cast<int>(all.size()); ++i) all[static_cast<size_t>(i)] = i;
  return ClopenSet{level, std::move(all)};
}

ClopenSet empty_clopen(int level) { return ClopenSet{level, {}}; }

ClopenSet clopen_lift(const ProSpace& X, const ClopenSet& u, int m) {
  if (m < u.level) throw ShapeError("clopen_lift: target level below the representation level");
  if (m == u.level) return u;
  FinMor tr = X.transition(m, u.level);
  std::set<int> in(u.subset.begin(), u.subset.end());
  std::vector<int> lifted;
  for (int x = 0; x < tr.dom().size(); ++x)
    if (in.count(tr(x))) lifted.push_back(x);
  return ClopenSet{m, std::move(lifted)};
}

std::vector<int> clopen_image(const ProSpace& X, const ClopenSet& u, int m) {
  if (m > u.level) throw ShapeError("clopen_image: target level above the representation level");
  if (!X.surjective())
    throw ShapeError("clopen_image: requires surjective transitions (image may not equal f_m(U))");
  FinMor tr = X.transition(u.level, m);
  std::set<int> img;
  for (int x : u.subset) img.insert(tr(x));
  return std::vector<int>(img.begin(), img.end());
}

namespace {

std::pair<ClopenSet, ClopenSet> at_common_level(const ProSpace& X, const ClopenSet& u,
                                                const ClopenSet& v) {
  int m = std::max(u.level, v.level);
  return {clopen_lift(X, u, m), clopen_lift(X, v, m)};
}

}  // namespace

ClopenSet clopen_meet(const ProSpace& X, const ClopenSet& u, const ClopenSet& v) {
  auto [a, b] = at_common_level(X, u, v);
  std::vector<int> out;
  std::set_intersection(a.subset.begin(), a.subset.end(), b.subset.begin(), b.subset.end(),
                        std::back_inserter(out));
  return ClopenSet{a.level, std::move(out)};
}

ClopenSet clopen_join(const ProSpace& X, const ClopenSet& u, const ClopenSet& v) {
  auto [a, b] = at_common_level(X, u, v);
  std::vector<int> out;
  std::set_union(a.subset.begin(), a.subset.end(), b.subset.begin(), b.subset.end(),
                 std::back_inserter(out));
  return ClopenSet{a.level, std::move(out)};
}

ClopenSet clopen_complement(const ProSpace& X, const ClopenSet& u) {
  std::set<int> in(u.subset.begin(), u.subset.end());
  std::vector<int> out;
  for (int x = 0; x < X.level(u.level).size(); ++x)
    if (!in.count(x)) out.push_back(x);
  return ClopenSet{u.level, std::move(out)};
}

bool clopen_is_disjoint(const ProSpace& X, const ClopenSet& u, const ClopenSet& v) {
  return clopen_meet(X, u, v).subset.empty();
}

bool clopen_equal(const ProSpace& X, const ClopenSet& u, const ClopenSet& v) {
  auto [a, b] = at_common_level(X, u, v);
  return a.subset == b.subset;
}

bool clopen_is_empty(const ClopenSet& u) { return u.subset.empty(); }

std::vector<std::vector<ClopenSet>> partitions(const ClopenSet& u) {
  std::vector<std::vector<ClopenSet>> out;
  int n = static_cast<int>(u.subset.size());
  if (n == 0) {
    out.push_back({});
    return out;
  }
  // restricted growth strings enumerate set partitions
  std::vector<int> rgs(static_cast<size_t>(n), 0);
  auto emit = [&] {
    int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<std::vector<int>> parts(static_cast<size_t>(blocks));
    for (int i = 0; i < n; ++i)
      parts[static_cast<size_t>(rgs[static_cast<size_t>(i)])].push_back(
          u.subset[static_cast<size_t>(i)]);
    std::vector<ClopenSet> blocks_out;
    for (auto& p : parts) blocks_out.push_back(ClopenSet{u.level, std::move(p)});
    out.push_back(std::move(blocks_out));
  };
  auto rec = [&](auto&& self, int i, int maxv) -> void {
    if (i == n) {
      emit();
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      rgs[static_cast<size_t>(i)] = v;
      self(self, i + 1, std::max(maxv, v));
    }
  };
  rec(rec, 1, 0);  // rgs[0] = 0 always
  return out;
}

PointThread::PointThread(ProSpace space, std::vector<int> prefix,
                         std::function<int(int)> extender)
    : space_(std::move(space)), prefix_(std::move(prefix)), extender_(std::move(extender)) {
  if (prefix_.empty()) throw ShapeError("PointThread: empty prefix");
  for (size_t n = 0; n + 1 < prefix_.size(); ++n) {
    FinMor tr = space_.step(static_cast<int>(n));
    if (prefix_[n + 1] < 0 || prefix_[n + 1] >= tr.dom().size() || tr(prefix_[n + 1]) != prefix_[n])
      throw ShapeError("PointThread: prefix is not transition-compatible at level " +
                       std::to_string(n));
  }
}

int PointThread::at(int n) const {
  if (n < 0) throw ShapeError("PointThread::at: negative level");
  while (n >= static_cast<int>(prefix_.size())) {
    if (!extender_)
      throw ShapeError("PointThread::at: thread recorded only to level " +
                       std::to_string(prefix_.size() - 1) + " and has no extender");
    int next_level = static_cast<int>(prefix_.size());
    int x = extender_(next_level);
    FinMor tr = space_.step(next_level - 1);
    if (x < 0 || x >= tr.dom().size() || tr(x) != prefix_.back())
      throw ShapeError("PointThread::at: extender is not transition-compatible at level " +
                       std::to_string(next_level));
    prefix_.push_back(x);
  }
  return prefix_[static_cast<size_t>(n)];
}

PointThread one_point_thread(const ProSpace& X, int point) {
  auto label = [point](int n) {
    if (point < 0) return n;  // the accumulation cell
    return std::min(point, n);
  };
  return PointThread(X, {label(0)}, label);
}

PointThread cantor_thread(const ProSpace& X, std::function<int(int)> bit) {
  auto shared = std::make_shared<std::function<int(int)>>(std::move(bit));
  // x_n carries bits b_0..b_{n-1}, newest bit least significant
  auto label = [shared](int n) {
    int x = 0;
    for (int i = 0; i < n; ++i) x = (x << 1) | ((*shared)(i) & 1);
    return x;
  };
  return PointThread(X, {0}, label);
}

PointThread cantor_thread_bits(const ProSpace& X, unsigned long long bits) {
  return cantor_thread(X, [bits](int i) { return static_cast<int>((bits >> i) & 1ull); });
}

bool is_in_clopen(const PointThread& x, const ClopenSet& u) {
  int label = x.at(u.level);
  return std::binary_search(u.subset.begin(), u.subset.end(), label);
}

}  // namespace procosh
