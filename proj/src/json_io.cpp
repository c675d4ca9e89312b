#include "procosh/json_io.hpp"

#include <algorithm>

namespace procosh {

namespace {

Instance tag_from_json(const Json& j) {
  auto t = instance_from_name(j.get<std::string>());
  if (!t) throw ShapeError("json: unknown instance tag '" + j.get<std::string>() + "'");
  return *t;
}

// explicit D-chain from size/table lists with a constant tail
DChain set_chain_from_levels(std::vector<int> sizes, std::vector<std::vector<int>> transitions) {
  if (sizes.empty()) throw ShapeError("json: a levels space needs at least one level");
  if (transitions.size() + 1 != sizes.size())
    throw ShapeError("json: transition count must be level count - 1");
  ChainDecl decl;
  decl.stabilization_bound = 0;
  decl.constant_from = static_cast<int>(transitions.size());
  auto sz = std::make_shared<std::vector<int>>(std::move(sizes));
  auto tr = std::make_shared<std::vector<std::vector<int>>>(std::move(transitions));
  return DChain(
      [sz](int n) {
        return FinObj::set((*sz)[std::min<size_t>(static_cast<size_t>(n), sz->size() - 1)]);
      },
      [sz, tr](int n) {
        if (static_cast<size_t>(n) < tr->size()) {
          int hi = (*sz)[static_cast<size_t>(n) + 1], lo = (*sz)[static_cast<size_t>(n)];
          return FinMor(FinObj::set(hi), FinObj::set(lo), (*tr)[static_cast<size_t>(n)]);
        }
        return FinMor::identity(FinObj::set(sz->back()));
      },
      decl);
}

}  // namespace

Json to_json(const FinObj& o) {
  Json j;
  j["instance"] = instance_name(o.tag());
  j["size"] = o.size();
  if (o.is_group()) j["table"] = o.table();
  return j;
}

FinObj fin_obj_from_json(const Json& j, bool checked) {
  Instance tag = tag_from_json(j.at("instance"));
  if (tag == Instance::Set) return FinObj::set(j.at("size").get<int>());
  auto table = j.at("table").get<std::vector<int>>();
  if (!checked || j.value("unchecked", false)) return FinObj::unchecked_group(tag, std::move(table));
  FinObj g = FinObj::group(tag, std::move(table));
  if (g.size() > Config::atom_group_order_cap())
    throw Error("json: atomic group order exceeds the configured cap");
  return g;
}

Json to_json(const FinMor& m) {
  Json j;
  j["dom"] = to_json(m.dom());
  j["cod"] = to_json(m.cod());
  j["table"] = m.table();
  return j;
}

FinMor fin_mor_from_json(const Json& j, bool checked) {
  FinObj dom = fin_obj_from_json(j.at("dom"), checked);
  FinObj cod = fin_obj_from_json(j.at("cod"), checked);
  auto table = j.at("table").get<std::vector<int>>();
  if (!checked || j.value("unchecked", false))
    return FinMor::unchecked(std::move(dom), std::move(cod), std::move(table));
  return FinMor(std::move(dom), std::move(cod), std::move(table));
}

Json to_json(const FamObj& a) {
  Json j;
  j["instance"] = instance_name(a.tag);
  j["fibres"] = Json::array();
  for (const auto& f : a.fibres) j["fibres"].push_back(to_json(f));
  return j;
}

FamObj fam_obj_from_json(const Json& j, bool checked) {
  FamObj a{tag_from_json(j.at("instance")), {}};
  for (const auto& f : j.at("fibres")) a.fibres.push_back(fin_obj_from_json(f, checked));
  if (checked && !j.value("unchecked", false))
    if (auto err = a.validate()) throw ShapeError("json FamObj: " + *err);
  return a;
}

Json to_json(const FamMor& m) {
  Json j;
  j["dom"] = to_json(m.dom);
  j["cod"] = to_json(m.cod);
  j["base"] = m.base;
  j["fibre_maps"] = Json::array();
  for (const auto& fm : m.fibre_maps) j["fibre_maps"].push_back(fm.table());
  return j;
}

FamMor fam_mor_from_json(const Json& j, bool checked) {
  bool unchecked = !checked || j.value("unchecked", false);
  FamObj dom = fam_obj_from_json(j.at("dom"), !unchecked);
  FamObj cod = fam_obj_from_json(j.at("cod"), !unchecked);
  auto base = j.at("base").get<std::vector<int>>();
  std::vector<FinMor> maps;
  const auto& fm = j.at("fibre_maps");
  for (size_t x = 0; x < fm.size(); ++x) {
    if (x >= base.size() || base[x] < 0 || base[x] >= cod.index_size() ||
        static_cast<int>(x) >= dom.index_size())
      throw ShapeError("json FamMor: base/fibre map shape mismatch");
    maps.push_back(FinMor::unchecked(dom.fibre(static_cast<int>(x)), cod.fibre(base[x]),
                                     fm[x].get<std::vector<int>>()));
  }
  FamMor m = fam_mor_unchecked(std::move(dom), std::move(cod), std::move(base), std::move(maps));
  if (!unchecked)
    if (auto err = m.validate()) throw ShapeError("json FamMor: " + *err);
  return m;
}

Json space_descriptor(const ProSpace& x, int truncation) {
  Json j;
  j["kind"] = "levels";
  j["levels"] = Json::array();
  j["transitions"] = Json::array();
  for (int n = 0; n <= truncation; ++n) j["levels"].push_back(x.level(n).size());
  for (int n = 0; n < truncation; ++n) j["transitions"].push_back(x.step(n).table());
  j["tail"] = "constant";
  return j;
}

ProSpace space_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "cantor") return cantor_space();
  if (kind == "one-point") return one_point_compactification();
  if (kind == "finite") return finite_space(j.at("size").get<int>());
  if (kind == "levels") {
    if (j.value("tail", "constant") != std::string("constant"))
      throw ShapeError("json space: only constant tails are supported");
    return ProSpace(set_chain_from_levels(j.at("levels").get<std::vector<int>>(),
                                          j.at("transitions").get<std::vector<std::vector<int>>>()),
                    j.value("surjective", true));
  }
  throw ShapeError("json space: unknown kind '" + kind + "'");
}

Json cosheaf_descriptor(const Cosheaf& a, int truncation) {
  Json j;
  j["kind"] = "levels";
  j["instance"] = instance_name(a.tag());
  j["levels"] = Json::array();
  j["transitions"] = Json::array();
  for (int n = 0; n <= truncation; ++n) j["levels"].push_back(to_json(a.level(n)));
  for (int n = 0; n < truncation; ++n) {
    FamMor st = a.step(n);
    Json t;
    t["base"] = st.base;
    t["fibre_maps"] = Json::array();
    for (const auto& fm : st.fibre_maps) t["fibre_maps"].push_back(fm.table());
    j["transitions"].push_back(std::move(t));
  }
  j["tail"] = "constant";
  return j;
}

namespace {

Cosheaf cosheaf_from_levels(const Json& j) {
  bool unchecked = j.value("unchecked", false);
  auto levels = std::make_shared<std::vector<FamObj>>();
  for (const auto& l : j.at("levels")) levels->push_back(fam_obj_from_json(l, !unchecked));
  if (levels->empty()) throw ShapeError("json cosheaf: no levels");
  struct Step {
    std::vector<int> base;
    std::vector<std::vector<int>> maps;
  };
  auto steps = std::make_shared<std::vector<Step>>();
  for (const auto& t : j.at("transitions"))
    steps->push_back(Step{t.at("base").get<std::vector<int>>(),
                          t.at("fibre_maps").get<std::vector<std::vector<int>>>()});
  if (steps->size() + 1 != levels->size())
    throw ShapeError("json cosheaf: transition count must be level count - 1");
  ChainDecl decl;
  decl.stabilization_bound = j.value("stabilization_bound", static_cast<int>(steps->size()));
  decl.constant_from = j.value("constant_from", static_cast<int>(steps->size()));
  FamChain chain(
      [levels](int n) {
        return (*levels)[std::min<size_t>(static_cast<size_t>(n), levels->size() - 1)];
      },
      [levels, steps, unchecked](int n) {
        if (static_cast<size_t>(n) >= steps->size()) return fam_identity(levels->back());
        const Step& s = (*steps)[static_cast<size_t>(n)];
        const FamObj& dom = (*levels)[static_cast<size_t>(n) + 1];
        const FamObj& cod = (*levels)[static_cast<size_t>(n)];
        std::vector<FinMor> maps;
        for (size_t x = 0; x < s.maps.size(); ++x) {
          if (x >= s.base.size() || static_cast<int>(x) >= dom.index_size() || s.base[x] < 0 ||
              s.base[x] >= cod.index_size())
            throw ShapeError("json cosheaf: transition shape mismatch at level " +
                             std::to_string(n));
          maps.push_back(FinMor::unchecked(dom.fibre(static_cast<int>(x)), cod.fibre(s.base[x]),
                                           s.maps[x]));
        }
        FamMor m = fam_mor_unchecked(dom, cod, s.base, std::move(maps));
        if (!unchecked)
          if (auto err = m.validate())
            throw ShapeError("json cosheaf: transition " + std::to_string(n) + ": " + *err);
        return m;
      },
      decl);
  bool surjective = j.value("base_surjective", true);
  if (j.contains("space")) {
    ProSpace sp = space_from_json(j.at("space"));
    Instance tag = (*levels)[0].tag;
    return Cosheaf(std::move(chain), std::move(sp), tag);
  }
  return limit_of_chain(chain, surjective);
}

Cosheaf one_point_sum_set(const Json& j) {
  auto sizes = j.at("fibre_sizes").get<std::vector<int>>();
  if (sizes.empty()) throw ShapeError("json cosheaf: one-point-sum needs fibre sizes");
  ProSpace x = one_point_compactification();
  auto size_at = [sizes](int i) { return sizes[static_cast<size_t>(i) % sizes.size()]; };
  auto fam_at = [size_at](int n) {
    FamObj f{Instance::Set, {}};
    for (int i = 0; i < n; ++i) f.fibres.push_back(FinObj::set(size_at(i)));
    f.fibres.push_back(FinObj::set(1));  // accumulation cell
    return f;
  };
  FamChain chain(
      fam_at,
      [fam_at, x](int n) {
        FamObj dom = fam_at(n + 1), cod = fam_at(n);
        FinMor sp = x.step(n);
        std::vector<FinMor> maps;
        for (int i = 0; i < dom.index_size(); ++i) {
          if (i < n)
            maps.push_back(FinMor::identity(dom.fibre(i)));
          else
            maps.push_back(FinMor::constant(dom.fibre(i), cod.fibre(n), 0));
        }
        return fam_mor_unchecked(dom, cod, sp.table(), std::move(maps));
      },
      x.chain().decl());
  return Cosheaf(std::move(chain), x, Instance::Set);
}

Cosheaf one_point_product_ab(const Json& j) {
  FinObj fibre = fin_obj_from_json(j.at("fibre"));
  if (fibre.tag() != Instance::Ab)
    throw ShapeError("json cosheaf: one-point-product needs an abelian fibre");
  ProSpace x = one_point_compactification();
  FinObj triv = FinObj::trivial_group(Instance::Ab);
  auto fam_at = [fibre, triv](int n) {
    FamObj f{Instance::Ab, {}};
    for (int i = 0; i < n; ++i) f.fibres.push_back(fibre);
    f.fibres.push_back(triv);  // the accumulation cell carries the trivial group
    return f;
  };
  FamChain chain(
      fam_at,
      [fam_at, fibre, triv, x](int n) {
        FamObj dom = fam_at(n + 1), cod = fam_at(n);
        FinMor sp = x.step(n);
        std::vector<FinMor> maps;
        for (int i = 0; i < dom.index_size(); ++i) {
          if (i < n)
            maps.push_back(FinMor::identity(fibre));
          else if (i == n)
            maps.push_back(FinMor::zero(fibre, triv));  // the new factor is projected away
          else
            maps.push_back(FinMor::identity(triv));
        }
        return fam_mor_unchecked(dom, cod, sp.table(), std::move(maps));
      },
      x.chain().decl());
  return Cosheaf(std::move(chain), x, Instance::Ab);
}

}  // namespace

Cosheaf cosheaf_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant")
    return constant_cosheaf(fin_obj_from_json(j.at("fibre")), space_from_json(j.at("space")));
  if (kind == "skyscraper") {
    ProSpace x = space_from_json(j.at("space"));
    PointThread t = thread_from_json(j.at("point"), x);
    return skyscraper(t, fin_obj_from_json(j.at("fibre")), x);
  }
  if (kind == "one-point-sum") return one_point_sum_set(j);
  if (kind == "one-point-product") return one_point_product_ab(j);
  if (kind == "levels") return cosheaf_from_levels(j);
  throw ShapeError("json cosheaf: unknown kind '" + kind + "'");
}

Json bundle_descriptor(const ProBundle& b, int truncation) {
  Json j;
  j["kind"] = "levels";
  j["total"] = space_descriptor(b.total(), truncation);
  j["base"] = space_descriptor(b.base(), truncation);
  j["proj"] = Json::array();
  for (int n = 0; n <= truncation; ++n) j["proj"].push_back(b.proj(n).table());
  return j;
}

ProBundle bundle_from_json(const Json& j) {
  ProSpace total = space_from_json(j.at("total"));
  ProSpace base = space_from_json(j.at("base"));
  auto proj = std::make_shared<std::vector<std::vector<int>>>(
      j.at("proj").get<std::vector<std::vector<int>>>());
  if (proj->empty()) throw ShapeError("json bundle: missing projections");
  return ProBundle(total, base, [total, base, proj](int n) {
    const auto& t = (*proj)[std::min<size_t>(static_cast<size_t>(n), proj->size() - 1)];
    return FinMor(total.level(n), base.level(n), t);
  });
}

PointThread thread_from_json(const Json& j, const ProSpace& space) {
  if (j.is_number_integer()) {
    // shorthand: a point index for one-point compactifications or constant
    // labels elsewhere
    int p = j.get<int>();
    return PointThread(space, {std::min(p, space.level(0).size() - 1)},
                       [space, p](int n) { return std::min(p, space.level(n).size() - 1); });
  }
  auto prefix = j.at("prefix").get<std::vector<int>>();
  if (j.value("extend", std::string("none")) == "constant") {
    int last = prefix.back();
    return PointThread(space, prefix, [last](int) { return last; });
  }
  return PointThread(space, prefix);
}

PrecosheafFinite precosheaf_from_json(const Json& j) {
  Instance tag = tag_from_json(j.at("instance"));
  int base_size = j.at("base_size").get<int>();
  bool unchecked = j.value("unchecked", false);
  std::map<unsigned, FinObj> values;
  for (const auto& [key, v] : j.at("values").items())
    values.emplace(static_cast<unsigned>(std::stoul(key)), fin_obj_from_json(v, !unchecked));
  std::map<std::pair<unsigned, unsigned>, FinMor> maps;
  for (const auto& entry : j.at("connecting")) {
    unsigned sub = entry.at("sub").get<unsigned>();
    unsigned super = entry.at("super").get<unsigned>();
    auto table = entry.at("table").get<std::vector<int>>();
    maps.emplace(std::make_pair(sub, super),
                 FinMor::unchecked(values.at(sub), values.at(super), std::move(table)));
  }
  // identities may be omitted in descriptors
  for (auto& [mask, v] : values)
    if (!maps.count({mask, mask})) maps.emplace(std::make_pair(mask, mask), FinMor::identity(v));
  return PrecosheafFinite(tag, base_size, std::move(values), std::move(maps), !unchecked);
}

Json precosheaf_descriptor(const PrecosheafFinite& p) {
  Json j;
  j["instance"] = instance_name(p.tag());
  j["base_size"] = p.base_size();
  j["values"] = Json::object();
  unsigned full = p.base_size() == 0 ? 0u : (1u << p.base_size()) - 1u;
  for (unsigned mask = 0; mask <= full; ++mask)
    j["values"][std::to_string(mask)] = to_json(p.value(mask));
  j["connecting"] = Json::array();
  for (unsigned sub = 0; sub <= full; ++sub)
    for (unsigned super = sub; super <= full; ++super) {
      if ((sub & super) != sub || sub == super) continue;
      Json e;
      e["sub"] = sub;
      e["super"] = super;
      e["table"] = p.connect(sub, super).table();
      j["connecting"].push_back(std::move(e));
    }
  return j;
}

}  // namespace procosh
