#include "doctest.h"
#include "procosh/prospace.hpp"

#include <random>

using namespace procosh;

TEST_CASE("space generators") {
  ProSpace k = cantor_space();
  for (int n = 0; n <= 3; ++n) CHECK(k.level(n).size() == 1 << n);
  ProSpace o = one_point_compactification();
  for (int n = 0; n <= 4; ++n) CHECK(o.level(n).size() == n + 1);
  for (int n = 0; n <= 4; ++n) CHECK(is_epi(o.step(n)));
  ProSpace f = finite_space(3);
  CHECK(f.level(5).size() == 3);
}

TEST_CASE("clopen lift") {
  ProSpace k = cantor_space();
  ClopenSet u = clopen(k, 1, {0});
  CHECK(clopen_lift(k, u, 1) == u);
  // {0} at level 1 lifts to {00, 01} at level 2: labels 0 and 1
  CHECK(clopen_lift(k, u, 2).subset == std::vector<int>{0, 1});
  CHECK(clopen_lift(k, whole_space(k, 0), 3).subset.size() == 8);
  CHECK_THROWS_AS(clopen_lift(k, clopen(k, 2, {0}), 1), ShapeError);
}

TEST_CASE("clopen image") {
  ProSpace k = cantor_space();
  ClopenSet u = clopen(k, 2, {0, 1});
  CHECK(clopen_image(k, u, 2) == u.subset);
  CHECK(clopen_image(k, u, 1) == std::vector<int>{0});
  CHECK(clopen_image(k, whole_space(k, 3), 0) == std::vector<int>{0});
  CHECK_THROWS_AS(clopen_image(k, u, 3), ShapeError);
  ProSpace bad(k.chain(), false);
  CHECK_THROWS_AS(clopen_image(bad, u, 1), ShapeError);
}

TEST_CASE("clopen boolean algebra") {
  ProSpace k = cantor_space();
  ClopenSet u = clopen(k, 1, {0}), v = clopen(k, 1, {1});
  CHECK(clopen_is_disjoint(k, u, v));
  CHECK(clopen_equal(k, clopen_join(k, u, v), whole_space(k, 1)));
  CHECK(clopen_is_empty(clopen_meet(k, u, clopen_complement(k, u))));
  // {0} at level 1 meets {01} at level 2 in {01}
  ClopenSet w = clopen(k, 2, {1});
  CHECK(clopen_meet(k, u, w) == w);

  // axioms on random clopens at mixed levels
  std::mt19937 rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    int lu = static_cast<int>(rng() % 5), lv = static_cast<int>(rng() % 5);
    std::vector<int> su, sv;
    for (int x = 0; x < (1 << lu); ++x)
      if (rng() & 1) su.push_back(x);
    for (int x = 0; x < (1 << lv); ++x)
      if (rng() & 1) sv.push_back(x);
    ClopenSet a = clopen(k, lu, su), b = clopen(k, lv, sv);
    // de Morgan at a common level
    int m = std::max(lu, lv);
    ClopenSet lhs = clopen_complement(k, clopen_join(k, a, b));
    ClopenSet rhs = clopen_meet(k, clopen_complement(k, clopen_lift(k, a, m)),
                                clopen_complement(k, clopen_lift(k, b, m)));
    CHECK(clopen_equal(k, lhs, rhs));
    // distributivity sample
    ClopenSet c = whole_space(k, 1);
    CHECK(clopen_equal(k, clopen_meet(k, c, clopen_join(k, a, b)),
                       clopen_join(k, clopen_meet(k, c, a), clopen_meet(k, c, b))));
  }
}

TEST_CASE("representation soundness: lift then image returns the subset") {
  ProSpace k = cantor_space();
  std::mt19937 rng(29);
  for (int rep = 0; rep < 30; ++rep) {
    int level = static_cast<int>(rng() % 4);
    std::vector<int> s;
    for (int x = 0; x < (1 << level); ++x)
      if (rng() & 1) s.push_back(x);
    ClopenSet u = clopen(k, level, s);
    ClopenSet lifted = clopen_lift(k, u, level + 2);
    CHECK(clopen_image(k, lifted, level) == u.subset);
  }
}

TEST_CASE("image commutes with meet at a common level") {
  // the disjointness-preservation step: saturated sets at one level
  ProSpace k = cantor_space();
  std::mt19937 rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    int level = 2 + static_cast<int>(rng() % 3);
    std::vector<int> su, sv;
    for (int x = 0; x < (1 << level); ++x) {
      if (rng() & 1) su.push_back(x);
      if (rng() & 1) sv.push_back(x);
    }
    // saturate both at level+1 so forward images are exact
    ClopenSet u = clopen_lift(k, clopen(k, level, su), level + 1);
    ClopenSet v = clopen_lift(k, clopen(k, level, sv), level + 1);
    auto meet_img = clopen_image(k, clopen_meet(k, u, v), level);
    std::vector<int> iu = clopen_image(k, u, level), iv = clopen_image(k, v, level);
    std::vector<int> expect;
    std::set_intersection(iu.begin(), iu.end(), iv.begin(), iv.end(), std::back_inserter(expect));
    CHECK(meet_img == expect);
  }
}

TEST_CASE("partitions") {
  ProSpace k = cantor_space();
  CHECK(partitions(clopen(k, 2, {1})).size() == 1);
  CHECK(partitions(clopen(k, 2, {1, 3})).size() == 2);
  CHECK(partitions(clopen(k, 3, {0, 2, 5})).size() == 5);  // Bell(3)
  CHECK(partitions(clopen(k, 3, {0, 1, 2, 3})).size() == 15);  // Bell(4)
  // blocks partition the subset
  for (const auto& p : partitions(clopen(k, 3, {0, 2, 5}))) {
    std::vector<int> merged;
    for (const auto& b : p) merged.insert(merged.end(), b.subset.begin(), b.subset.end());
    std::sort(merged.begin(), merged.end());
    CHECK(merged == std::vector<int>{0, 2, 5});
  }
}

TEST_CASE("point threads") {
  ProSpace k = cantor_space();
  PointThread zero = cantor_thread_bits(k, 0);
  CHECK(zero.at(0) == 0);
  CHECK(zero.at(3) == 0);
  CHECK(is_in_clopen(zero, whole_space(k, 2)));
  CHECK_FALSE(is_in_clopen(zero, clopen(k, 1, {1})));

  PointThread t = cantor_thread_bits(k, 2);  // b_0 = 0, b_1 = 1: labels 0, 0, 1, ...
  CHECK(t.at(1) == 0);
  CHECK(t.at(2) == 1);
  CHECK(is_in_clopen(t, clopen(k, 2, {1})));

  ProSpace o = one_point_compactification();
  PointThread inf = one_point_thread(o, -1);
  for (int n = 0; n <= 4; ++n) CHECK(inf.at(n) == n);
  PointThread p2 = one_point_thread(o, 2);
  CHECK(p2.at(1) == 1);
  CHECK(p2.at(2) == 2);
  CHECK(p2.at(5) == 2);

  // incompatible prefix rejected
  CHECK_THROWS_AS(PointThread(k, {0, 3}), ShapeError);
  // short thread without extender
  PointThread shrt(k, {0, 1});
  CHECK_THROWS_AS(shrt.at(3), ShapeError);
}
