#include "doctest.h"
#include "procosh/bundle.hpp"

#include <random>

using namespace procosh;

namespace {

bool levelwise_isomorphic(const Cosheaf& a, const Cosheaf& b, int upto) {
  for (int n = 0; n <= upto; ++n)
    if (!find_iso(a.level(n), b.level(n))) return false;
  return true;
}

}  // namespace

TEST_CASE("to_bundle basics") {
  // finite cosheaf over 2 points with fibre sizes 2 and 3: |E| = 5
  FamObj fam = fam_obj(Instance::Set, {FinObj::set(2), FinObj::set(3)});
  Cosheaf fin = limit_of_chain(FamChain::constant(fam));
  ProBundle b = to_bundle(fin);
  CHECK(b.total().level(0).size() == 5);
  CHECK(b.base().level(0).size() == 2);
  CHECK_FALSE(b.first_noncommuting_level(3).has_value());

  // terminal cosheaf: the identity bundle X -> X
  ProSpace k = cantor_space();
  ProBundle t = to_bundle(terminal_cosheaf(Instance::Set, k));
  for (int n = 0; n <= 3; ++n) {
    CHECK(t.total().level(n).size() == k.level(n).size());
    CHECK(is_iso(t.proj(n)));
  }

  // constant 2-element cosheaf over Cantor: level n total of size 2 * 2^n
  ProBundle c = to_bundle(constant_cosheaf(FinObj::set(2), k));
  for (int n = 0; n <= 3; ++n) CHECK(c.total().level(n).size() == 2 * (1 << n));

  CHECK_THROWS_AS(to_bundle(constant_cosheaf(FinObj::cyclic(2), k)), ShapeError);
}

TEST_CASE("from_bundle and round trips") {
  ProSpace k = cantor_space();
  // identity bundle: the terminal cosheaf
  ProBundle idb(k, k, [k](int n) { return FinMor::identity(k.level(n)); });
  Cosheaf t = from_bundle(idb);
  for (int n = 0; n <= 3; ++n) {
    CHECK(t.level(n).index_size() == k.level(n).size());
    for (int x = 0; x < t.level(n).index_size(); ++x) CHECK(t.level(n).fibre(x).size() == 1);
  }
  // T'(U) = U: cosections over U have exactly |U_k| elements levelwise
  ClopenSet u = clopen(k, 2, {0, 3});
  DChain cu = cosections(t, u);
  for (int j = 0; j <= 2; ++j) {
    auto lifted = clopen_lift(k, u, u.level + j);
    CHECK(cu.level(j).size() == static_cast<int>(lifted.subset.size()));
  }

  // round trip from a cosheaf
  Cosheaf a = constant_cosheaf(FinObj::set(3), k);
  Cosheaf back = from_bundle(to_bundle(a));
  CHECK(levelwise_isomorphic(a, back, 3));

  // 2:1 covering of Cantor: the double Cantor total space
  ProSpace dbl = cantor_space();
  ProBundle cover(
      ProSpace(DChain([](int n) { return FinObj::set(2 << n); },
                      [](int n) {
                        FinObj dom = FinObj::set(2 << (n + 1)), cod = FinObj::set(2 << n);
                        // two parallel copies of the Cantor transitions
                        int half_hi = 1 << (n + 1), half_lo = 1 << n;
                        std::vector<int> t(static_cast<size_t>(dom.size()));
                        for (int e = 0; e < dom.size(); ++e) {
                          int copy = e / half_hi, idx = e % half_hi;
                          t[static_cast<size_t>(e)] = copy * half_lo + (idx >> 1);
                        }
                        return FinMor(dom, cod, std::move(t));
                      }),
               false),
      dbl,
      [dbl](int n) {
        int half = 1 << n;
        std::vector<int> t(static_cast<size_t>(2 * half));
        for (int e = 0; e < 2 * half; ++e) t[static_cast<size_t>(e)] = e % half;
        return FinMor(FinObj::set(2 * half), dbl.level(n), std::move(t));
      });
  REQUIRE_FALSE(cover.first_noncommuting_level(3).has_value());
  Cosheaf two_fibres = from_bundle(cover);
  for (int n = 0; n <= 2; ++n)
    for (int x = 0; x < two_fibres.level(n).index_size(); ++x)
      CHECK(two_fibres.level(n).fibre(x).size() == 2);
}

TEST_CASE("group objects") {
  ProSpace two = finite_space(2);
  FamObj gf = fam_obj(Instance::Grp,
                      {FinObj::cyclic(2, Instance::Grp), FinObj::cyclic(3, Instance::Grp)});
  Cosheaf g = limit_of_chain(FamChain::constant(gf));
  GroupObjectData d = to_group_object(g);
  CHECK(d.underlying.total().level(0).size() == 5);
  auto rep = check_group_object(d, 2);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());

  Cosheaf back = from_group_object(d, Instance::Grp);
  CHECK(levelwise_isomorphic(g, back, 2));

  // constant Z/2 over Cantor: level n total space of size 2^(n+1), XOR fibres
  ProSpace k = cantor_space();
  Cosheaf zc = constant_cosheaf(FinObj::cyclic(2, Instance::Grp), k);
  GroupObjectData dz = to_group_object(zc);
  for (int n = 0; n <= 2; ++n) CHECK(dz.underlying.total().level(n).size() == (1 << (n + 1)));
  CHECK(check_group_object(dz, 2).ok);
  Cosheaf zc_back = from_group_object(dz, Instance::Grp);
  CHECK(levelwise_isomorphic(zc, zc_back, 2));

  // trivial-group fibres: the identity-section bundle passes trivially
  Cosheaf triv = terminal_cosheaf(Instance::Grp, two);
  CHECK(check_group_object(to_group_object(triv), 2).ok);

  // S_3 over a point: one-fibre table read-off
  Cosheaf s3 = limit_of_chain(FamChain::constant(fam_obj(Instance::Grp, {FinObj::symmetric3()})));
  GroupObjectData ds = to_group_object(s3);
  CHECK(check_group_object(ds, 1).ok);
  Cosheaf s3_back = from_group_object(ds, Instance::Grp);
  CHECK(levelwise_isomorphic(s3, s3_back, 1));
}

TEST_CASE("corrupted group data is reported with witnesses") {
  ProSpace two = finite_space(2);
  FamObj gf = fam_obj(Instance::Grp,
                      {FinObj::cyclic(2, Instance::Grp), FinObj::cyclic(3, Instance::Grp)});
  Cosheaf g = limit_of_chain(FamChain::constant(gf));
  GroupObjectData d = to_group_object(g);

  // corrupt the multiplication at one pullback pair
  GroupObjectData bad = d;
  auto orig_mult = d.mult;
  bad.mult = [orig_mult](int n) {
    FinMor m = orig_mult(n);
    std::vector<int> t = m.table();
    // swap two values inside the Z/3 fibre block
    for (size_t i = 0; i < t.size(); ++i)
      if (t[i] >= 2) {
        t[i] = t[i] == 2 ? 3 : t[i];
        break;
      }
    return FinMor::unchecked(m.dom(), m.cod(), std::move(t));
  };
  auto rep = check_group_object(bad, 1);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.failures.empty());
  CHECK_FALSE(rep.failures[0].witness.empty());

  // unit that is not a section
  GroupObjectData bad2 = d;
  auto orig_unit = d.unit;
  bad2.unit = [orig_unit](int n) {
    FinMor u = orig_unit(n);
    std::vector<int> t = u.table();
    t[0] = t[1];  // both base points now hit the same fibre
    return FinMor::unchecked(u.dom(), u.cod(), std::move(t));
  };
  auto rep2 = check_group_object(bad2, 1);
  CHECK_FALSE(rep2.ok);
  bool has_section_failure = false;
  for (const auto& f : rep2.failures)
    if (f.axiom == "unit-section") has_section_failure = true;
  CHECK(has_section_failure);
}

TEST_CASE("slice products match fibrewise products") {
  // pullback E x_X E of the bundle equals the fibrewise product family
  ProSpace two = finite_space(2);
  FamObj fam = fam_obj(Instance::Set, {FinObj::set(2), FinObj::set(3)});
  Cosheaf a = limit_of_chain(FamChain::constant(fam));
  ProBundle b = to_bundle(a);
  auto pb = pullback(b.proj(0), b.proj(0));
  auto fp = product(fam, fam);
  // diagonal fibres only: (x,x) blocks
  int diag = 0;
  for (int x = 0; x < fam.index_size(); ++x)
    diag += fp.obj.fibre(x * fam.index_size() + x).size();
  CHECK(pb.obj.size() == diag);
}

TEST_CASE("corrupted mult breaking associativity is caught") {
  // one fibre Z/4 over a point; corrupt a single product entry
  Cosheaf g = limit_of_chain(
      FamChain::constant(fam_obj(Instance::Grp, {FinObj::cyclic(4, Instance::Grp)})));
  GroupObjectData d = to_group_object(g);
  GroupObjectData bad = d;
  auto orig = d.mult;
  bad.mult = [orig](int n) {
    FinMor m = orig(n);
    std::vector<int> t = m.table();
    t[5] = (t[5] + 1) % 4;
    return FinMor::unchecked(m.dom(), m.cod(), std::move(t));
  };
  auto rep = check_group_object(bad, 0);
  CHECK_FALSE(rep.ok);
}
