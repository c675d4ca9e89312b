#include "doctest.h"
#include "procosh/prosys.hpp"

#include <atomic>
#include <thread>

using namespace procosh;

namespace {

// levels Z/2^n with reduction transitions
DChain z2_tower() {
  auto pow2 = [](int n) { return 1 << n; };
  ChainDecl d;
  d.stabilization_bound = 0;  // reductions are already epic
  return DChain([pow2](int n) { return FinObj::cyclic(pow2(n)); },
                [pow2](int n) {
                  FinObj dom = FinObj::cyclic(pow2(n + 1)), cod = FinObj::cyclic(pow2(n));
                  std::vector<int> t(static_cast<size_t>(dom.size()));
                  for (int x = 0; x < dom.size(); ++x) t[static_cast<size_t>(x)] = x % cod.size();
                  return FinMor(dom, cod, std::move(t));
                },
                d);
}

// levels {0,1}^n, transition drops the last bit
DChain cantor_chain() {
  ChainDecl d;
  d.stabilization_bound = 0;
  return DChain([](int n) { return FinObj::set(1 << n); },
                [](int n) {
                  FinObj dom = FinObj::set(1 << (n + 1)), cod = FinObj::set(1 << n);
                  std::vector<int> t(static_cast<size_t>(dom.size()));
                  for (int x = 0; x < dom.size(); ++x) t[static_cast<size_t>(x)] = x >> 1;
                  return FinMor(dom, cod, std::move(t));
                },
                d);
}

// Z/2 <-0- Z/2 <-0- ... (zero transitions)
DChain zero_chain() {
  ChainDecl d;
  d.stabilization_bound = 1;
  FinObj z2 = FinObj::cyclic(2);
  return DChain([z2](int) { return z2; }, [z2](int) { return FinMor::zero(z2, z2); }, d);
}

}  // namespace

TEST_CASE("chain level and transition") {
  DChain c = z2_tower();
  CHECK(c.level(0).size() == 1);
  CHECK(c.level(3).size() == 8);
  CHECK(c.transition(2, 2) == FinMor::identity(c.level(2)));
  // compose two reductions: Z/8 -> Z/2
  FinMor t31 = c.transition(3, 1);
  CHECK(t31.dom().size() == 8);
  CHECK(t31.cod().size() == 2);
  for (int x = 0; x < 8; ++x) CHECK(t31(x) == x % 2);
  CHECK_THROWS_AS(c.transition(1, 3), ShapeError);

  DChain k = cantor_chain();
  for (int n = 0; n <= 3; ++n) CHECK(k.level(n).size() == 1 << n);
}

TEST_CASE("truncate") {
  DChain k = cantor_chain();
  auto t = truncate(k, 3);
  CHECK(t.levels.size() == 4);
  CHECK(t.steps.size() == 3);
  auto t0 = truncate(k, 0);
  CHECK(t0.levels.size() == 1);
  CHECK(t0.steps.empty());

  // eventually constant chain: plateau visible past the bound
  DChain c = DChain::constant(FinObj::set(3));
  auto tc = truncate(c, 4);
  for (const auto& o : tc.levels) CHECK(o.size() == 3);
}

TEST_CASE("memoization transparency") {
  // results are equal with and without a warm memo store
  DChain a = z2_tower();
  FinMor warm = a.transition(4, 1);
  DChain b = z2_tower();
  CHECK(warm == b.transition(4, 1));
  CHECK(a.level(2) == b.level(2));

  // concurrent reads are observationally pure
  DChain c = cantor_chain();
  std::atomic<bool> mismatch{false};
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&c, &mismatch] {
      for (int n = 0; n < 6; ++n)
        if (c.level(n).size() != 1 << n) mismatch = true;
    });
  for (auto& t : workers) t.join();
  CHECK_FALSE(mismatch.load());
}

TEST_CASE("eventual image normalize") {
  // already-epic chain: unchanged up to iso (here: on the nose)
  DChain tower = z2_tower();
  auto norm = eventual_image_normalize(tower, 2);
  CHECK(norm.soundness == Soundness::Exact);
  for (int n = 0; n <= 3; ++n) CHECK(norm.chain.level(n) == tower.level(n));
  CHECK_FALSE(norm.embed.first_noncommuting_level(3).has_value());

  // zero transitions: normalized levels trivial
  auto nz = eventual_image_normalize(zero_chain(), 1);
  CHECK(nz.soundness == Soundness::Exact);
  for (int n = 0; n <= 3; ++n) CHECK(nz.chain.level(n).size() == 1);

  // epic from level 1 onward, declared bound 2: level 0 shrinks
  FinObj z4 = FinObj::cyclic(4), z2 = FinObj::cyclic(2);
  ChainDecl d;
  d.stabilization_bound = 2;
  DChain mixed(
      [z4, z2](int n) { return n == 0 ? z4 : z2; },
      [z2, z4](int n) {
        if (n == 0) return FinMor(z2, z4, {0, 2});  // not epic
        return FinMor::identity(z2);                // epic from level 1 on
      },
      d);
  auto nm = eventual_image_normalize(mixed, 2);
  CHECK(nm.chain.level(0).size() == 2);  // Img(Z/2 -> Z/4) = {0,2}
  CHECK(nm.chain.level(1).size() == 2);
  for (int n = 0; n <= 2; ++n) CHECK(is_epi(nm.chain.step(n)));

  // idempotence within the sound window
  auto nn = eventual_image_normalize(nm.chain, 2);
  for (int n = 0; n <= 2; ++n) {
    auto iso = find_iso(nn.chain.level(n), nm.chain.level(n));
    CHECK(iso.has_value());
  }

  // heuristic flag without a declared bound
  DChain bare([z2](int) { return z2; }, [z2](int) { return FinMor::identity(z2); });
  CHECK(eventual_image_normalize(bare, 1).soundness == Soundness::Heuristic);

  CHECK_THROWS_AS(eventual_image_normalize(tower, -1), ShapeError);
}

TEST_CASE("normalized transitions are epic in the window") {
  auto norm = eventual_image_normalize(zero_chain(), 1);
  for (int n = 0; n <= 4; ++n) CHECK(is_epi(norm.chain.step(n)));
}

TEST_CASE("hom_to_finite") {
  // eventually constant chain at c: Hom(c, d)
  FinObj c = FinObj::cyclic(4), d = FinObj::cyclic(4);
  DChain cc = DChain::constant(c);
  auto r = hom_to_finite(cc, d, 3);
  CHECK(r.flag == Flag::Exact);
  CHECK(r.reps.size() == 4);  // gcd(4,4)
  for (int b : r.birth) CHECK(b == 0);

  // Z_2 tower into Z/4: 4 classes, stabilized at level 2
  auto rt = hom_to_finite(z2_tower(), FinObj::cyclic(4), 4);
  CHECK(rt.reps.size() == 4);
  CHECK(rt.flag == Flag::Truncated);  // the tower is not eventually constant
  int max_birth = 0;
  for (int b : rt.birth) max_birth = std::max(max_birth, b);
  CHECK(max_birth == 2);

  // epi-normalized: distinct classes at a window stay distinct later, so
  // counts are monotone in the window
  size_t prev = hom_to_finite(z2_tower(), FinObj::cyclic(4), 2).reps.size();
  for (int n = 3; n <= 4; ++n) {
    size_t cur = hom_to_finite(z2_tower(), FinObj::cyclic(4), n).reps.size();
    CHECK(prev <= cur);
    prev = cur;
  }

  // Cantor chain with a 2-element target: 2^(2^N) classes, truncated
  auto rc = hom_to_finite(cantor_chain(), FinObj::set(2), 3);
  CHECK(rc.flag == Flag::Truncated);
  CHECK(rc.reps.size() == 256);  // 2^(2^3)
}

TEST_CASE("map_chain") {
  // identity transform: same levels
  DChain k = cantor_chain();
  auto same = map_chain<DCat, DCat>(
      k, [](int, const FinObj& o) { return o; }, [](int, const FinMor& m) { return m; }, k.decl());
  for (int n = 0; n <= 3; ++n) CHECK(same.level(n) == k.level(n));

  // Fam-valued chain to D-valued chain via global cosections
  FinObj z2 = FinObj::cyclic(2);
  FamChain fc = FamChain::constant(fam_obj(Instance::Ab, {z2, z2}));
  auto gc = map_chain<DCat, FamCat>(
      fc, [](int, const FamObj& o) { return global_cosections(o).total; },
      [](int, const FamMor& m) {
        return global_cosections_map(m, global_cosections(m.dom), global_cosections(m.cod));
      },
      fc.decl());
  CHECK(gc.level(2).size() == 4);
  CHECK(gc.step(1) == FinMor::identity(gc.level(1)));
}

TEST_CASE("chain step endpoint validation") {
  FinObj z2 = FinObj::cyclic(2), z4 = FinObj::cyclic(4);
  DChain bad([z2](int) { return z2; }, [z4](int) { return FinMor(z4, z4, {0, 1, 2, 3}); });
  CHECK_THROWS_AS(bad.step(0), ShapeError);
}
