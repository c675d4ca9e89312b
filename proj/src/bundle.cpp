#include "procosh/bundle.hpp"

#include <algorithm>
#include <numeric>

namespace procosh {

namespace {

// cell boundaries of a family's disjoint union, by fibre order
std::vector<int> offsets_of(const FamObj& fam) {
  std::vector<int> off(static_cast<size_t>(fam.index_size()) + 1, 0);
  for (int x = 0; x < fam.index_size(); ++x)
    off[static_cast<size_t>(x) + 1] = off[static_cast<size_t>(x)] + fam.fibre(x).size();
  return off;
}

FamObj forget_to_sets(const FamObj& fam) {
  FamObj out{Instance::Set, {}};
  for (const auto& f : fam.fibres) out.fibres.push_back(FinObj::set(f.size()));
  return out;
}

}  // namespace

ProBundle::ProBundle(ProSpace total, ProSpace base, std::function<FinMor(int)> proj)
    : total_(std::move(total)), base_(std::move(base)), proj_(std::move(proj)) {}

FinMor ProBundle::proj(int n) const {
  FinMor p = proj_(n);
  if (!(p.dom() == total_.level(n)) || !(p.cod() == base_.level(n)))
    throw ShapeError("ProBundle::proj: endpoints do not match the spaces at level " +
                     std::to_string(n));
  return p;
}

std::optional<int> ProBundle::first_noncommuting_level(int upto) const {
  for (int n = 0; n < upto; ++n) {
    if (!(compose(proj(n), total_.step(n)) == compose(base_.step(n), proj(n + 1)))) return n;
  }
  return std::nullopt;
}

ProBundle to_bundle(const Cosheaf& a) {
  if (a.tag() != Instance::Set)
    throw ShapeError("to_bundle: set-valued cosheaves only (use to_group_object for groups)");
  Cosheaf ac = a;
  DChain total_chain(
      [ac](int n) { return FinObj::set(global_cosections(ac.level(n)).total.size()); },
      [ac](int n) {
        FamMor st = ac.step(n);
        auto gd = global_cosections(st.dom);
        auto gc = global_cosections(st.cod);
        FinMor m = global_cosections_map(st, gd, gc);
        return FinMor::unchecked(FinObj::set(m.dom().size()), FinObj::set(m.cod().size()),
                                 m.table());
      },
      ac.chain().decl());
  auto proj = [ac](int n) {
    FamObj fam = ac.level(n);
    auto off = offsets_of(fam);
    std::vector<int> t(static_cast<size_t>(off.back()));
    for (int x = 0; x < fam.index_size(); ++x)
      for (int e = off[static_cast<size_t>(x)]; e < off[static_cast<size_t>(x) + 1]; ++e)
        t[static_cast<size_t>(e)] = x;
    return FinMor::unchecked(FinObj::set(off.back()), FinObj::set(fam.index_size()),
                             std::move(t));
  };
  return ProBundle(ProSpace(std::move(total_chain), false), a.base(), proj);
}

Cosheaf from_bundle(const ProBundle& p) {
  ProBundle pc = p;
  auto fibres_at = [pc](int n) {
    FinMor pr = pc.proj(n);
    std::vector<std::vector<int>> cells(static_cast<size_t>(pr.cod().size()));
    for (int e = 0; e < pr.dom().size(); ++e) cells[static_cast<size_t>(pr(e))].push_back(e);
    return cells;
  };
  auto level_fn = [fibres_at](int n) {
    FamObj fam{Instance::Set, {}};
    for (const auto& cell : fibres_at(n)) fam.fibres.push_back(FinObj::set(static_cast<int>(cell.size())));
    return fam;
  };
  FamChain chain(
      level_fn,
      [pc, fibres_at, level_fn](int n) {
        FamObj dom = level_fn(n + 1), cod = level_fn(n);
        auto hi = fibres_at(n + 1), lo = fibres_at(n);
        FinMor tr = pc.total().step(n);
        FinMor base_tr = pc.base().step(n);
        // positions of total-space elements within their fibres
        std::vector<int> pos(static_cast<size_t>(tr.cod().size()), -1);
        for (const auto& cell : lo)
          for (int i = 0; i < static_cast<int>(cell.size()); ++i)
            pos[static_cast<size_t>(cell[static_cast<size_t>(i)])] = i;
        std::vector<FinMor> maps;
        for (int x = 0; x < dom.index_size(); ++x) {
          const auto& cell = hi[static_cast<size_t>(x)];
          int y = base_tr(x);
          std::vector<int> t(cell.size());
          FinMor prj = pc.proj(n);
          for (size_t i = 0; i < cell.size(); ++i) {
            int e = tr(cell[i]);
            if (prj(e) != y)
              throw ShapeError("from_bundle: projection does not commute with transitions at level " +
                               std::to_string(n));
            t[i] = pos[static_cast<size_t>(e)];
          }
          maps.push_back(FinMor::unchecked(dom.fibre(x), cod.fibre(y), std::move(t)));
        }
        return fam_mor_unchecked(dom, cod, base_tr.table(), std::move(maps));
      },
      pc.total().chain().decl());
  return Cosheaf(std::move(chain), p.base(), Instance::Set);
}

GroupObjectData to_group_object(const Cosheaf& g) {
  if (g.tag() == Instance::Set) throw ShapeError("to_group_object: group-valued cosheaves only");
  Cosheaf gc = g;
  // the underlying bundle forgets the group structure costalkwise
  FamChain set_chain(
      [gc](int n) { return forget_to_sets(gc.level(n)); },
      [gc](int n) {
        FamMor st = gc.step(n);
        std::vector<FinMor> maps;
        for (int x = 0; x < st.dom.index_size(); ++x)
          maps.push_back(FinMor::unchecked(FinObj::set(st.fibre_map(x).dom().size()),
                                           FinObj::set(st.fibre_map(x).cod().size()),
                                           st.fibre_map(x).table()));
        return fam_mor_unchecked(forget_to_sets(st.dom), forget_to_sets(st.cod), st.base,
                                 std::move(maps));
      },
      gc.chain().decl());
  Cosheaf underlying_set(std::move(set_chain), g.base(), Instance::Set);
  ProBundle bundle = to_bundle(underlying_set);
  ProBundle bc = bundle;
  auto fibre_pairs = [bc](int n) { return pullback(bc.proj(n), bc.proj(n)); };
  auto mult = [gc, bc, fibre_pairs](int n) {
    FamObj fam = gc.level(n);
    auto off = offsets_of(fam);
    auto pb = fibre_pairs(n);
    FinMor prj = bc.proj(n);
    std::vector<int> t(static_cast<size_t>(pb.obj.size()));
    for (int e = 0; e < pb.obj.size(); ++e) {
      int e1 = pb.p1(e), e2 = pb.p2(e);
      int x = prj(e1);
      int a = e1 - off[static_cast<size_t>(x)], b = e2 - off[static_cast<size_t>(x)];
      t[static_cast<size_t>(e)] = off[static_cast<size_t>(x)] + fam.fibre(x).mul(a, b);
    }
    return FinMor::unchecked(pb.obj, bc.total().level(n), std::move(t));
  };
  auto unit = [gc, bc](int n) {
    FamObj fam = gc.level(n);
    auto off = offsets_of(fam);
    std::vector<int> t(static_cast<size_t>(fam.index_size()));
    for (int x = 0; x < fam.index_size(); ++x) t[static_cast<size_t>(x)] = off[static_cast<size_t>(x)];
    return FinMor::unchecked(bc.base().level(n), bc.total().level(n), std::move(t));
  };
  auto inv = [gc, bc](int n) {
    FamObj fam = gc.level(n);
    auto off = offsets_of(fam);
    FinMor prj = bc.proj(n);
    std::vector<int> t(static_cast<size_t>(bc.total().level(n).size()));
    for (int e = 0; e < static_cast<int>(t.size()); ++e) {
      int x = prj(e);
      t[static_cast<size_t>(e)] = off[static_cast<size_t>(x)] +
                                  fam.fibre(x).inverse(e - off[static_cast<size_t>(x)]);
    }
    return FinMor::unchecked(bc.total().level(n), bc.total().level(n), std::move(t));
  };
  return GroupObjectData{bundle, fibre_pairs, mult, unit, inv};
}

Cosheaf from_group_object(const GroupObjectData& d, Instance tag) {
  if (tag == Instance::Set) throw ShapeError("from_group_object: group instances only");
  GroupObjectData dc = d;
  auto fibre_data = [dc](int n) {
    FinMor prj = dc.underlying.proj(n);
    std::vector<std::vector<int>> cells(static_cast<size_t>(prj.cod().size()));
    for (int e = 0; e < prj.dom().size(); ++e) cells[static_cast<size_t>(prj(e))].push_back(e);
    FinMor un = dc.unit(n);
    // relabel each fibre with the unit first, the rest in label order
    std::vector<std::vector<int>> order(cells.size());
    for (size_t x = 0; x < cells.size(); ++x) {
      int u = un(static_cast<int>(x));
      order[x].push_back(u);
      for (int e : cells[x])
        if (e != u) order[x].push_back(e);
    }
    return order;
  };
  auto level_fn = [dc, fibre_data, tag](int n) {
    auto order = fibre_data(n);
    auto pb = dc.fibre_pairs(n);
    FinMor mu = dc.mult(n);
    FamObj fam{tag, {}};
    for (size_t x = 0; x < order.size(); ++x) {
      const auto& elems = order[x];
      int k = static_cast<int>(elems.size());
      std::vector<int> pos(static_cast<size_t>(dc.underlying.total().level(n).size()), -1);
      for (int i = 0; i < k; ++i) pos[static_cast<size_t>(elems[static_cast<size_t>(i)])] = i;
      std::vector<int> table(static_cast<size_t>(k) * k, -1);
      // read the multiplication off the pullback carrier
      for (int e = 0; e < pb.obj.size(); ++e) {
        int e1 = pb.p1(e), e2 = pb.p2(e);
        if (pos[static_cast<size_t>(e1)] < 0 || pos[static_cast<size_t>(e2)] < 0) continue;
        int prod = mu(e);
        if (pos[static_cast<size_t>(prod)] < 0)
          throw ShapeError("from_group_object: multiplication leaves the fibre at level " +
                           std::to_string(n));
        table[static_cast<size_t>(pos[static_cast<size_t>(e1)]) * k +
              pos[static_cast<size_t>(e2)]] = pos[static_cast<size_t>(prod)];
      }
      FinObj fibre = FinObj::group(tag, std::move(table));
      fam.fibres.push_back(std::move(fibre));
    }
    return fam;
  };
  FamChain chain(
      level_fn,
      [dc, fibre_data, level_fn](int n) {
        FamObj dom = level_fn(n + 1), cod = level_fn(n);
        auto hi = fibre_data(n + 1), lo = fibre_data(n);
        FinMor tr = dc.underlying.total().step(n);
        FinMor base_tr = dc.underlying.base().step(n);
        FinMor prj = dc.underlying.proj(n);
        std::vector<int> pos(static_cast<size_t>(tr.cod().size()), -1);
        for (const auto& elems : lo)
          for (int i = 0; i < static_cast<int>(elems.size()); ++i)
            pos[static_cast<size_t>(elems[static_cast<size_t>(i)])] = i;
        std::vector<FinMor> maps;
        for (size_t x = 0; x < hi.size(); ++x) {
          int y = base_tr(static_cast<int>(x));
          std::vector<int> t(hi[x].size());
          for (size_t i = 0; i < hi[x].size(); ++i) {
            int e = tr(hi[x][i]);
            if (prj(e) != y)
              throw ShapeError("from_group_object: projection does not commute with transitions");
            t[i] = pos[static_cast<size_t>(e)];
          }
          // validated constructor: throws when the transition is not a
          // homomorphism (signals inconsistent input data)
          maps.push_back(FinMor(dom.fibre(static_cast<int>(x)), cod.fibre(y), std::move(t)));
        }
        return fam_mor_unchecked(dom, cod, base_tr.table(), std::move(maps));
      },
      dc.underlying.total().chain().decl());
  return Cosheaf(std::move(chain), d.underlying.base(), tag);
}

GroupObjectReport check_group_object(const GroupObjectData& d, int window) {
  GroupObjectReport rep;
  rep.window = window;
  auto fail = [&rep](int level, const std::string& axiom, std::vector<int> witness) {
    rep.ok = false;
    rep.failures.push_back(AxiomFailure{level, axiom, std::move(witness)});
  };
  for (int n = 0; n <= window; ++n) {
    FinMor prj = d.underlying.proj(n);
    auto pb = d.fibre_pairs(n);
    FinMor mu = d.mult(n);
    FinMor un = d.unit(n);
    FinMor iv = d.inv(n);
    int esz = prj.dom().size();

    // unit is a section
    bool unit_ok = true;
    for (int x = 0; x < prj.cod().size() && unit_ok; ++x)
      if (prj(un(x)) != x) {
        fail(n, "unit-section", {x});
        unit_ok = false;
      }
    // inv and mult preserve fibres
    for (int e = 0; e < esz; ++e)
      if (prj(iv(e)) != prj(e)) {
        fail(n, "inverse-fibre-preservation", {e});
        break;
      }
    for (int e = 0; e < pb.obj.size(); ++e)
      if (prj(mu(e)) != prj(pb.p1(e))) {
        fail(n, "mult-fibre-preservation", {pb.p1(e), pb.p2(e)});
        break;
      }

    // index pairs (a,b) of the pullback for fibrewise lookups
    auto pair_index = [&pb](int a, int b) {
      for (int e = 0; e < pb.obj.size(); ++e)
        if (pb.p1(e) == a && pb.p2(e) == b) return e;
      return -1;
    };
    auto mul2 = [&](int a, int b) { return mu(pair_index(a, b)); };

    // collect fibres
    std::vector<std::vector<int>> cells(static_cast<size_t>(prj.cod().size()));
    for (int e = 0; e < esz; ++e) cells[static_cast<size_t>(prj(e))].push_back(e);

    bool assoc_done = false, unit_law_done = false, inv_law_done = false;
    for (size_t x = 0; x < cells.size(); ++x) {
      const auto& cell = cells[x];
      if (unit_ok) {
        int u = un(static_cast<int>(x));
        for (int a : cell) {
          if (!unit_law_done && (mul2(u, a) != a || mul2(a, u) != a)) {
            fail(n, "unit-law", {a});
            unit_law_done = true;
          }
          if (!inv_law_done && (mul2(a, iv(a)) != u || mul2(iv(a), a) != u)) {
            fail(n, "inverse-law", {a});
            inv_law_done = true;
          }
        }
      }
      for (size_t i = 0; i < cell.size() && !assoc_done; ++i)
        for (size_t j = 0; j < cell.size() && !assoc_done; ++j)
          for (size_t k = 0; k < cell.size() && !assoc_done; ++k) {
            int a = cell[i], b = cell[j], c = cell[k];
            if (mul2(mul2(a, b), c) != mul2(a, mul2(b, c))) {
              fail(n, "associativity", {a, b, c});
              assoc_done = true;
            }
          }
    }

    // transition compatibility
    if (n < window) {
      FinMor trE = d.underlying.total().step(n);
      FinMor trX = d.underlying.base().step(n);
      auto pb_lo = d.fibre_pairs(n);
      FinMor mu_hi = d.mult(n + 1);
      FinMor un_hi = d.unit(n + 1);
      FinMor iv_hi = d.inv(n + 1);
      auto pb_hi = d.fibre_pairs(n + 1);
      auto pair_lo = [&pb_lo](int a, int b) {
        for (int e = 0; e < pb_lo.obj.size(); ++e)
          if (pb_lo.p1(e) == a && pb_lo.p2(e) == b) return e;
        return -1;
      };
      FinMor mu_lo = d.mult(n);
      for (int e = 0; e < pb_hi.obj.size(); ++e) {
        int a = pb_hi.p1(e), b = pb_hi.p2(e);
        int lo_pair = pair_lo(trE(a), trE(b));
        if (lo_pair < 0 || trE(mu_hi(e)) != mu_lo(lo_pair)) {
          fail(n, "transition-mult-compatibility", {a, b});
          break;
        }
      }
      for (int x = 0; x < d.underlying.base().level(n + 1).size(); ++x)
        if (trE(un_hi(x)) != d.unit(n)(trX(x))) {
          fail(n, "transition-unit-compatibility", {x});
          break;
        }
      for (int e = 0; e < d.underlying.total().level(n + 1).size(); ++e)
        if (trE(iv_hi(e)) != d.inv(n)(trE(e))) {
          fail(n, "transition-inverse-compatibility", {e});
          break;
        }
    }
  }
  return rep;
}

}  // namespace procosh
