#include "procosh/fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace procosh {

namespace {

Json z2_json(Instance tag) {
  Json j;
  j["instance"] = instance_name(tag);
  j["size"] = 2;
  j["table"] = std::vector<int>{0, 1, 1, 0};
  return j;
}

Json cyclic_json(int n, Instance tag) {
  Json j;
  j["instance"] = instance_name(tag);
  j["size"] = n;
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) t[static_cast<size_t>(i) * n + k] = (i + k) % n;
  j["table"] = std::move(t);
  return j;
}

Json set_json(int n) {
  Json j;
  j["instance"] = "set";
  j["size"] = n;
  return j;
}

Json space_json(const std::string& kind) {
  Json j;
  j["kind"] = kind;
  return j;
}

Json constant_cosheaf_json(const Json& fibre, const Json& space) {
  Json j;
  j["kind"] = "constant";
  j["fibre"] = fibre;
  j["space"] = space;
  return j;
}

// eventually-constant abelian chain over a point: Z/4, then the Z/2 plateau
Json evconst_ab_json(bool lie_about_the_bound) {
  Json lvl0, lvl_rest;
  lvl0["instance"] = "ab";
  lvl0["fibres"] = Json::array({cyclic_json(4, Instance::Ab)});
  lvl_rest["instance"] = "ab";
  lvl_rest["fibres"] = Json::array({z2_json(Instance::Ab)});
  Json t0, t1;
  t0["base"] = std::vector<int>{0};
  t0["fibre_maps"] = Json::array({std::vector<int>{0, 2}});  // Z/2 -> Z/4
  t1["base"] = std::vector<int>{0};
  t1["fibre_maps"] = Json::array({std::vector<int>{0, 1}});
  Json j;
  j["kind"] = "levels";
  j["instance"] = "ab";
  j["levels"] = Json::array({lvl0, lvl_rest, lvl_rest});
  j["transitions"] = Json::array({t0, t1});
  j["tail"] = "constant";
  j["constant_from"] = lie_about_the_bound ? 0 : 1;
  j["stabilization_bound"] = 1;
  return j;
}

// abelian chain over a point that declares a wrong plateau object entirely
Json corrupt_homformula_json() {
  Json lvl0, lvl_rest;
  lvl0["instance"] = "ab";
  lvl0["fibres"] = Json::array({cyclic_json(3, Instance::Ab)});
  lvl_rest["instance"] = "ab";
  lvl_rest["fibres"] = Json::array({z2_json(Instance::Ab)});
  Json t0, t1;
  t0["base"] = std::vector<int>{0};
  t0["fibre_maps"] = Json::array({std::vector<int>{0, 0}});  // Z/2 -> Z/3 zero map
  t1["base"] = std::vector<int>{0};
  t1["fibre_maps"] = Json::array({std::vector<int>{0, 1}});
  Json j;
  j["kind"] = "levels";
  j["instance"] = "ab";
  j["levels"] = Json::array({lvl0, lvl_rest, lvl_rest});
  j["transitions"] = Json::array({t0, t1});
  j["tail"] = "constant";
  j["constant_from"] = 0;  // wrong: the chain is constant only from level 1
  j["stabilization_bound"] = 1;
  return j;
}

Json z4_doubling_json() {
  Json lvl;
  lvl["instance"] = "ab";
  lvl["fibres"] = Json::array({cyclic_json(4, Instance::Ab)});
  Json t;
  t["base"] = std::vector<int>{0};
  t["fibre_maps"] = Json::array({std::vector<int>{0, 2, 0, 2}});
  Json j;
  j["kind"] = "levels";
  j["instance"] = "ab";
  j["levels"] = Json::array({lvl, lvl});
  j["transitions"] = Json::array({t});
  j["tail"] = "repeat-last";  // placeholder replaced below
  return j;
}

Json corrupt_keylemma_json() {
  // abelian cosheaf over a two-point space with a non-additive fibre "hom"
  Json lvl;
  lvl["instance"] = "ab";
  lvl["fibres"] = Json::array({z2_json(Instance::Ab), z2_json(Instance::Ab)});
  Json t;
  t["base"] = std::vector<int>{0, 1};
  t["fibre_maps"] = Json::array({std::vector<int>{1, 0}, std::vector<int>{0, 1}});
  Json j;
  j["kind"] = "levels";
  j["instance"] = "ab";
  j["levels"] = Json::array({lvl, lvl});
  j["transitions"] = Json::array({t});
  j["tail"] = "constant";
  j["unchecked"] = true;  // the map 0 -> 1 is not a homomorphism
  return j;
}

Json corrupt_fam_mor_json() {
  Json dom, cod;
  dom["instance"] = "ab";
  dom["fibres"] = Json::array({cyclic_json(4, Instance::Ab)});
  cod["instance"] = "ab";
  cod["fibres"] = Json::array({z2_json(Instance::Ab)});
  Json j;
  j["dom"] = dom;
  j["cod"] = cod;
  j["base"] = std::vector<int>{0};
  j["fibre_maps"] = Json::array({std::vector<int>{0, 1, 1, 0}});  // not a homomorphism
  j["unchecked"] = true;
  return j;
}

Json corrupt_precosheaf_json() {
  // composites through the two singletons disagree with the direct map
  Json j;
  j["instance"] = "set";
  j["base_size"] = 2;
  j["values"] = Json::object();
  j["values"]["0"] = set_json(1);
  j["values"]["1"] = set_json(1);
  j["values"]["2"] = set_json(1);
  j["values"]["3"] = set_json(3);
  j["connecting"] = Json::array();
  auto add = [&j](unsigned sub, unsigned super, std::vector<int> t) {
    Json e;
    e["sub"] = sub;
    e["super"] = super;
    e["table"] = std::move(t);
    j["connecting"].push_back(std::move(e));
  };
  add(0u, 1u, {0});
  add(0u, 2u, {0});
  add(0u, 3u, {0});
  add(1u, 3u, {0});
  add(2u, 3u, {2});  // composite via 2 lands at 2, direct map at 0
  j["unchecked"] = true;
  return j;
}

Json good_precosheaf_json() {
  Json j;
  j["instance"] = "set";
  j["base_size"] = 2;
  j["values"] = Json::object();
  j["values"]["0"] = set_json(0);
  j["values"]["1"] = set_json(1);
  j["values"]["2"] = set_json(1);
  j["values"]["3"] = set_json(3);
  j["connecting"] = Json::array();
  auto add = [&j](unsigned sub, unsigned super, std::vector<int> t) {
    Json e;
    e["sub"] = sub;
    e["super"] = super;
    e["table"] = std::move(t);
    j["connecting"].push_back(std::move(e));
  };
  add(0u, 1u, {});
  add(0u, 2u, {});
  add(0u, 3u, {});
  add(1u, 3u, {0});
  add(2u, 3u, {2});
  return j;
}

}  // namespace

FixtureRegistry FixtureRegistry::builtin() {
  FixtureRegistry r;
  auto add = [&r](const std::string& name, const std::string& kind, Json j,
                  bool corrupt = false) {
    r.add(FixtureEntry{name, kind, std::move(j), corrupt});
  };

  add("cantor", "space", space_json("cantor"));
  add("one-point", "space", space_json("one-point"));
  Json pt = space_json("finite");
  pt["size"] = 1;
  add("point", "space", pt);
  Json two = space_json("finite");
  two["size"] = 2;
  add("two-point", "space", two);
  Json three = space_json("finite");
  three["size"] = 3;
  add("three-point", "space", three);

  add("cantor-const-set1", "cosheaf", constant_cosheaf_json(set_json(1), space_json("cantor")));
  add("cantor-const-set2", "cosheaf", constant_cosheaf_json(set_json(2), space_json("cantor")));
  add("cantor-const-set3", "cosheaf", constant_cosheaf_json(set_json(3), space_json("cantor")));
  {
    Json j = constant_cosheaf_json(z2_json(Instance::Ab), space_json("cantor"));
    j["gc_level_cap"] = 3;
    j["expected_gc_orders"] = std::vector<long long>{2, 4, 16, 256};
    add("cantor-const-ab-z2", "cosheaf", j);
  }
  add("cantor-const-grp-z2", "cosheaf",
      constant_cosheaf_json(z2_json(Instance::Grp), space_json("cantor")));
  {
    Json j;
    j["kind"] = "one-point-sum";
    j["fibre_sizes"] = std::vector<int>{1, 2, 3};
    add("onepoint-sum-set", "cosheaf", j);
  }
  {
    Json j;
    j["kind"] = "one-point-product";
    j["fibre"] = z2_json(Instance::Ab);
    j["gc_level_cap"] = 6;
    add("onepoint-product-ab", "cosheaf", j);
  }
  {
    Json lvl;
    lvl["instance"] = "grp";
    lvl["fibres"] = Json::array({cyclic_json(2, Instance::Grp), cyclic_json(3, Instance::Grp)});
    Json j;
    j["kind"] = "levels";
    j["instance"] = "grp";
    j["levels"] = Json::array({lvl});
    j["transitions"] = Json::array();
    j["tail"] = "constant";
    add("twopoint-z2z3-grp", "cosheaf", j);
  }
  {
    Json lvl;
    lvl["instance"] = "grp";
    lvl["fibres"] = Json::array();
    // S_3 by table
    FinObj s3 = FinObj::symmetric3();
    Json s3j;
    s3j["instance"] = "grp";
    s3j["size"] = 6;
    s3j["table"] = s3.table();
    lvl["fibres"].push_back(s3j);
    Json j;
    j["kind"] = "levels";
    j["instance"] = "grp";
    j["levels"] = Json::array({lvl});
    j["transitions"] = Json::array();
    j["tail"] = "constant";
    add("point-s3-grp", "cosheaf", j);
  }
  {
    Json j;
    j["kind"] = "skyscraper";
    j["fibre"] = set_json(2);
    Json sp = space_json("finite");
    sp["size"] = 2;
    j["space"] = sp;
    Json point;
    point["prefix"] = std::vector<int>{1};
    point["extend"] = "constant";
    j["point"] = point;
    add("twopoint-skyscraper-set", "cosheaf", j);
  }
  {
    Json j = evconst_ab_json(false);
    add("evconst-ab", "cosheaf", j);
  }
  {
    Json j = z4_doubling_json();
    j["tail"] = "constant";
    j["constant_from"] = Json();  // unknown plateau: leave unset
    j.erase("constant_from");
    j["stabilization_bound"] = 2;
    add("z4-doubling-point-ab", "cosheaf", j);
  }
  add("good-precosheaf", "precosheaf", good_precosheaf_json());

  // negative controls
  add("corrupt-keylemma-ab", "cosheaf", corrupt_keylemma_json(), true);
  add("corrupt-fam-mor", "fam-mor", corrupt_fam_mor_json(), true);
  {
    Json j = constant_cosheaf_json(z2_json(Instance::Ab), space_json("cantor"));
    j["gc_level_cap"] = 3;
    j["expected_gc_orders"] = std::vector<long long>{2, 4, 8, 256};  // wrong at level 2
    add("corrupt-glil-orders", "cosheaf", j, true);
  }
  add("corrupt-homformula-decl", "cosheaf", corrupt_homformula_json(), true);
  add("corrupt-precosheaf", "precosheaf", corrupt_precosheaf_json(), true);
  {
    Json j;
    j["space"] = space_json("cantor");
    j["prefix"] = std::vector<int>{0, 1, 0};  // not transition-compatible
    add("corrupt-thread", "thread", j, true);
  }
  {
    Json j;
    j["cosheaf"] = "twopoint-z2z3-grp";
    j["tamper"] = "mult";
    add("corrupt-group-object", "group-object", j, true);
  }
  {
    Json j;
    j["cosheaf"] = "cantor-const-ab-z2";
    j["tamper"] = "cell-to-global";
    add("corrupt-oracle", "oracle", j, true);
  }
  return r;
}

FixtureRegistry FixtureRegistry::with_overrides(const std::string& dir) {
  FixtureRegistry r = builtin();
  if (dir.empty()) return r;
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return r;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream in(p);
    if (!in) continue;
    Json j = Json::parse(in, nullptr, true, true);
    FixtureEntry e;
    e.name = j.value("name", p.stem().string());
    e.kind = j.value("fixture_kind", std::string("cosheaf"));
    e.corrupt = j.value("corrupt", false);
    e.descriptor = j.contains("descriptor") ? j.at("descriptor") : j;
    r.add(std::move(e));
  }
  return r;
}

const FixtureEntry& FixtureRegistry::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error("unknown fixture '" + name + "'");
  return it->second;
}

std::vector<std::string> FixtureRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

ProSpace FixtureRegistry::space(const std::string& name) const {
  return space_from_json(entry(name).descriptor);
}

Cosheaf FixtureRegistry::cosheaf(const std::string& name) const {
  return cosheaf_from_json(entry(name).descriptor);
}

ProBundle FixtureRegistry::bundle(const std::string& name) const {
  return bundle_from_json(entry(name).descriptor);
}

PrecosheafFinite FixtureRegistry::precosheaf(const std::string& name) const {
  return precosheaf_from_json(entry(name).descriptor);
}

int FixtureRegistry::gc_level_cap(const std::string& name, int fallback) const {
  return entry(name).descriptor.value("gc_level_cap", fallback);
}

std::vector<long long> FixtureRegistry::expected_gc_orders(const std::string& name) const {
  const auto& d = entry(name).descriptor;
  if (!d.contains("expected_gc_orders")) return {};
  return d.at("expected_gc_orders").get<std::vector<long long>>();
}

std::optional<std::string> fixture_dir_from_env() {
  const char* v = std::getenv("PROCOSH_FIXTURE_DIR");
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace procosh
