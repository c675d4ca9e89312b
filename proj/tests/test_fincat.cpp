#include "doctest.h"
#include "procosh/fincat.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace procosh;

namespace {

// test-side oracle: all maps a->b as tables, filtered by the hom property
std::vector<std::vector<int>> all_maps(int dom, int cod) {
  std::vector<std::vector<int>> out;
  if (dom == 0) {
    out.push_back({});
    return out;
  }
  if (cod == 0) return out;
  std::vector<int> t(static_cast<size_t>(dom), 0);
  while (true) {
    out.push_back(t);
    int i = 0;
    while (i < dom) {
      if (++t[static_cast<size_t>(i)] < cod) break;
      t[static_cast<size_t>(i)] = 0;
      ++i;
    }
    if (i == dom) break;
  }
  return out;
}

bool is_hom_table(const FinObj& a, const FinObj& b, const std::vector<int>& t) {
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (t[static_cast<size_t>(a.mul(x, y))] !=
          b.mul(t[static_cast<size_t>(x)], t[static_cast<size_t>(y)]))
        return false;
  return true;
}

// test-side oracle: brute-force isomorphism search over unit-fixing bijections
bool groups_isomorphic_brute(const FinObj& a, const FinObj& b) {
  if (a.size() != b.size()) return false;
  int n = a.size();
  std::vector<int> perm(static_cast<size_t>(n - 1));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    std::vector<int> t(static_cast<size_t>(n));
    t[0] = 0;
    for (int i = 1; i < n; ++i) t[static_cast<size_t>(i)] = perm[static_cast<size_t>(i - 1)];
    if (is_hom_table(a, b, t)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// test-side oracle: subgroup closure by repeated multiplication
std::set<int> closure_brute(const FinObj& g, std::set<int> s) {
  s.insert(0);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> elems(s.begin(), s.end());
    for (int x : elems)
      for (int y : elems)
        if (s.insert(g.mul(x, y)).second) changed = true;
  }
  return s;
}

int gcd_int(int a, int b) { return b == 0 ? a : gcd_int(b, a % b); }

}  // namespace

TEST_CASE("compose basics") {
  FinObj z2 = FinObj::cyclic(2), z4 = FinObj::cyclic(4);
  FinMor f(z2, z4, {0, 2});
  CHECK(compose(FinMor::identity(z4), f) == f);
  CHECK(compose(f, FinMor::identity(z2)) == f);

  FinMor g(z4, z2, {0, 1, 0, 1});
  FinMor gf = compose(g, f);
  // evaluate tables pointwise
  for (int x = 0; x < 2; ++x) CHECK(gf(x) == g(f(x)));
  CHECK(gf == FinMor::zero(z2, z2));

  std::mt19937 rng(11);
  FinObj s3 = FinObj::set(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> ta(3), tb(3);
    for (auto& v : ta) v = static_cast<int>(rng() % 3);
    for (auto& v : tb) v = static_cast<int>(rng() % 3);
    FinMor a(s3, s3, ta), b(s3, s3, tb);
    FinMor ba = compose(b, a);
    for (int x = 0; x < 3; ++x) CHECK(ba(x) == b(a(x)));
  }

  CHECK_THROWS_AS(compose(g, g), ShapeError);  // cod(g) = Z/2 but dom(g) = Z/4
}

TEST_CASE("product") {
  FinObj z2 = FinObj::cyclic(2), z3 = FinObj::cyclic(3), z6 = FinObj::cyclic(6);
  auto p = product(z2, z3);
  CHECK(p.obj.size() == 6);
  CHECK(groups_isomorphic_brute(p.obj, z6));

  // unit law up to iso
  auto pt = product(z2, FinObj::terminal(Instance::Ab));
  CHECK(pt.obj.size() == 2);
  CHECK(is_iso(pt.proj1));

  auto ps = product(FinObj::set(2), FinObj::set(3));
  CHECK(ps.obj.size() == 6);
  CHECK(ps.obj.tag() == Instance::Set);

  // universal property via pairing on a sample
  FinMor f(z6, z2, {0, 1, 0, 1, 0, 1});
  FinMor g(z6, z3, {0, 1, 2, 0, 1, 2});
  FinMor h = pair_into_product(p, f, g);
  CHECK(compose(p.proj1, h) == f);
  CHECK(compose(p.proj2, h) == g);
  CHECK_FALSE(h.validate().has_value());

  CHECK_THROWS_AS(product(z2, FinObj::set(2)), ShapeError);
}

TEST_CASE("equalizer") {
  FinObj z4 = FinObj::cyclic(4);
  FinMor id4 = FinMor::identity(z4);
  FinMor neg(z4, z4, {0, 3, 2, 1});
  auto e = equalizer(id4, neg);
  // exhaustive scan oracle
  std::vector<int> expect;
  for (int x = 0; x < 4; ++x)
    if (x == neg(x)) expect.push_back(x);
  CHECK(e.mono.table() == expect);
  CHECK(e.obj.size() == 2);

  auto efull = equalizer(id4, id4);
  CHECK(efull.obj.size() == 4);

  FinObj s3 = FinObj::set(3), s2 = FinObj::set(2);
  FinMor u(s3, s2, {0, 1, 0}), v(s3, s2, {0, 1, 1});
  auto es = equalizer(u, v);
  CHECK(es.obj.size() == 2);
  CHECK(es.mono.table() == std::vector<int>{0, 1});

  CHECK_THROWS_AS(equalizer(u, FinMor::identity(s3)), ShapeError);
}

TEST_CASE("pullback") {
  FinObj z4 = FinObj::cyclic(4), z2 = FinObj::cyclic(2);
  FinMor q(z4, z2, {0, 1, 0, 1});
  auto pb = pullback(q, q);
  // exhaustive pairs oracle
  int count = 0;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (q(x) == q(y)) ++count;
  CHECK(pb.obj.size() == count);
  CHECK(pb.obj.size() == 8);
  CHECK(compose(q, pb.p1) == compose(q, pb.p2));

  // pullback along the identity is the domain
  auto pid = pullback(q, FinMor::identity(z2));
  CHECK(pid.obj.size() == 4);
  CHECK(is_iso(pid.p1));

  // over the terminal object: the product
  FinObj a = FinObj::set(2), b = FinObj::set(3), one = FinObj::set(1);
  auto pt = pullback(FinMor::constant(a, one, 0), FinMor::constant(b, one, 0));
  CHECK(pt.obj.size() == 6);
}

TEST_CASE("image factorization") {
  FinObj z4 = FinObj::cyclic(4);
  FinMor dbl(z4, z4, {0, 2, 0, 2});
  auto im = image_factor(dbl);
  CHECK(im.mono.table() == std::vector<int>{0, 2});
  CHECK(im.repi.cod().size() == 2);
  CHECK(groups_isomorphic_brute(im.repi.cod(), FinObj::cyclic(2)));
  CHECK(compose(im.mono, im.repi) == dbl);
  CHECK(is_epi(im.repi));
  CHECK(is_mono(im.mono));

  // monic map factors with iso repi
  FinMor inc(FinObj::cyclic(2), z4, {0, 2});
  auto im2 = image_factor(inc);
  CHECK(is_iso(im2.repi));

  FinMor c = FinMor::constant(FinObj::set(5), FinObj::set(3), 1);
  CHECK(image_factor(c).repi.cod().size() == 1);
}

TEST_CASE("image factorization unique up to unique iso") {
  FinObj z6 = FinObj::cyclic(6), z4 = FinObj::cyclic(4);
  for (const auto& f : hom_set(z6, z4)) {
    auto im = image_factor(f);
    // exactly one endo-iso of the image commutes with both legs
    int commuting = 0;
    for (const auto& u : hom_set(im.repi.cod(), im.repi.cod()))
      if (is_iso(u) && compose(u, im.repi) == im.repi && compose(im.mono, u) == im.mono)
        ++commuting;
    CHECK(commuting == 1);
  }
}

TEST_CASE("joint image") {
  FinObj s3g = FinObj::symmetric3();
  // generators: a transposition and a 3-cycle, as maps from Z/2 and Z/3
  FinObj z2 = FinObj::cyclic(2, Instance::Grp), z3 = FinObj::cyclic(3, Instance::Grp);
  int transposition = -1, threecycle = -1;
  for (int x = 1; x < 6; ++x) {
    if (s3g.element_order(x) == 2 && transposition < 0) transposition = x;
    if (s3g.element_order(x) == 3 && threecycle < 0) threecycle = x;
  }
  FinMor f2(z2, s3g, {0, transposition});
  FinMor f3(z3, s3g, {0, threecycle, s3g.mul(threecycle, threecycle)});
  auto ji = joint_image({f2, f3});
  // subgroup-closure brute force oracle
  auto cl = closure_brute(s3g, {transposition, threecycle});
  CHECK(static_cast<int>(cl.size()) == 6);
  CHECK(ji.sub().size() == 6);

  // single map: same as the image factorization mono
  auto one = joint_image({f2});
  CHECK(one.inclusion == image_factor(f2).mono);

  // sets: union of images
  FinObj s4 = FinObj::set(4), s2 = FinObj::set(2);
  FinMor u(s2, s4, {0, 1}), v(s2, s4, {1, 2});
  CHECK(joint_image({u, v}).inclusion.table() == std::vector<int>{0, 1, 2});

  CHECK_THROWS_AS(joint_image({}), ShapeError);
}

TEST_CASE("joint image minimality") {
  FinObj z8 = FinObj::cyclic(8);
  FinMor f(FinObj::cyclic(4), z8, {0, 2, 4, 6});
  auto ji = joint_image({f});
  // removing any element of the computed subobject breaks factorization
  const auto& labels = ji.inclusion.table();
  for (size_t drop = 0; drop < labels.size(); ++drop) {
    if (labels[drop] == 0) continue;  // group subobject must keep the unit
    std::vector<int> rest;
    for (size_t i = 0; i < labels.size(); ++i)
      if (i != drop) rest.push_back(labels[i]);
    bool factors = true;
    std::set<int> in_rest(rest.begin(), rest.end());
    for (int v : f.table())
      if (!in_rest.count(v)) factors = false;
    CHECK_FALSE(factors);
  }
}

TEST_CASE("coproduct") {
  FinObj z2 = FinObj::cyclic(2);
  auto cp = coproduct(z2, z2);
  CHECK(cp.obj.size() == 4);
  CHECK(groups_isomorphic_brute(cp.obj, FinObj::klein_four()));
  CHECK(is_mono(cp.inj1));
  CHECK(is_mono(cp.inj2));

  auto cs = coproduct(FinObj::set(2), FinObj::set(3));
  CHECK(cs.obj.size() == 5);
  CHECK(is_mono(cs.inj1));
  CHECK(is_mono(cs.inj2));

  // unit law
  auto cu = coproduct(FinObj::set(3), FinObj::initial(Instance::Set));
  CHECK(cu.obj.size() == 3);
  CHECK(is_iso(cu.inj1));

  // copair universal property
  FinObj z4 = FinObj::cyclic(4);
  FinMor f(z2, z4, {0, 2}), g(z2, z4, {0, 2});
  FinMor h = copair(cp, f, g);
  CHECK(compose(h, cp.inj1) == f);
  CHECK(compose(h, cp.inj2) == g);
  CHECK_FALSE(h.validate().has_value());

  CHECK_THROWS_AS(coproduct(FinObj::cyclic(2, Instance::Grp), FinObj::cyclic(2, Instance::Grp)),
                  CapabilityError);
}

TEST_CASE("mono and epi tests") {
  FinObj z2 = FinObj::cyclic(2), z4 = FinObj::cyclic(4);
  CHECK(is_mono(FinMor::identity(z4)));
  CHECK(is_epi(FinMor::identity(z4)));
  FinMor inc(z2, z4, {0, 2});
  CHECK(is_mono(inc));
  CHECK_FALSE(is_epi(inc));
  FinMor fold(FinObj::set(4), FinObj::set(2), {0, 1, 0, 1});
  CHECK(is_epi(fold));
  CHECK_FALSE(is_mono(fold));
}

TEST_CASE("hom set enumeration") {
  CHECK(hom_set(FinObj::set(2), FinObj::set(3)).size() == 9);

  FinObj z2 = FinObj::cyclic(2), z3 = FinObj::cyclic(3), z4 = FinObj::cyclic(4);
  auto h24 = hom_set(z2, z4);
  CHECK(h24.size() == 2);
  // exhaustive oracle over all tables
  int count = 0;
  for (const auto& t : all_maps(2, 4))
    if (t[0] == 0 && is_hom_table(z2, z4, t)) ++count;
  CHECK(static_cast<int>(h24.size()) == count);

  CHECK(hom_set(z3, z4).size() == 1);
  CHECK(hom_set(z3, z4)[0] == FinMor::zero(z3, z4));

  // duplicate-free
  std::set<std::vector<int>> tables;
  for (const auto& m : hom_set(z4, z4)) tables.insert(m.table());
  CHECK(tables.size() == hom_set(z4, z4).size());
}

TEST_CASE("hom set cardinalities") {
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      size_t expect = 1;
      if (a > 0) {
        expect = 1;
        for (int i = 0; i < a; ++i) expect *= static_cast<size_t>(b);
      }
      CHECK(hom_set(FinObj::set(a), FinObj::set(b)).size() == expect);
    }
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= 6; ++n)
      CHECK(hom_set(FinObj::cyclic(m), FinObj::cyclic(n)).size() ==
            static_cast<size_t>(gcd_int(m, n)));
}

TEST_CASE("pullback stability of epis") {
  std::mt19937 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 2 + static_cast<int>(rng() % 4);
    int m = 1 + static_cast<int>(rng() % n);
    FinObj a = FinObj::set(n), c = FinObj::set(m);
    std::vector<int> ft(static_cast<size_t>(n));
    for (int i = 0; i < m; ++i) ft[static_cast<size_t>(i)] = i;  // force surjectivity
    for (int i = m; i < n; ++i) ft[static_cast<size_t>(i)] = static_cast<int>(rng() % m);
    FinMor f(a, c, ft);
    REQUIRE(is_epi(f));
    int k = 1 + static_cast<int>(rng() % 4);
    std::vector<int> gt(static_cast<size_t>(k));
    for (auto& v : gt) v = static_cast<int>(rng() % m);
    FinMor g(FinObj::set(k), c, gt);
    auto pb = pullback(f, g);
    CHECK(is_epi(pb.p2));
  }
}

TEST_CASE("find_iso") {
  auto p = product(FinObj::cyclic(2), FinObj::cyclic(3));
  auto iso = find_iso(p.obj, FinObj::cyclic(6));
  REQUIRE(iso.has_value());
  CHECK(is_iso(*iso));
  CHECK_FALSE(iso->validate().has_value());
  CHECK_FALSE(find_iso(FinObj::klein_four(), FinObj::cyclic(4)).has_value());
  CHECK_FALSE(find_iso(FinObj::cyclic(2), FinObj::cyclic(3)).has_value());
}

TEST_CASE("group validation") {
  CHECK_THROWS_AS(FinObj::group(Instance::Ab, {0, 1, 1, 0, 1, 0}), ShapeError);
  // non-associative magma with identity: fails validation
  std::vector<int> bad = {0, 1, 2, 1, 0, 1, 2, 2, 0};
  CHECK_THROWS_AS(FinObj::group(Instance::Grp, bad), ShapeError);
  CHECK(FinObj::unchecked_group(Instance::Grp, bad).validate().has_value());
  // S_3 is a valid group but not abelian
  CHECK_FALSE(FinObj::symmetric3().validate().has_value());
  CHECK(FinObj::unchecked_group(Instance::Ab, FinObj::symmetric3().table()).validate().has_value());
}
