#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "procosh/dot_export.hpp"
#include "procosh/verify.hpp"

// verify: runs the named suite (or all) over the fixture registry.
// demo:   prints truncated level data for the showcase fixtures.
// export: writes a fixture as json or dot.
// Exit codes: 0 all pass, 1 failures, 2 usage errors.

namespace {

using namespace procosh;

int write_out(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot open output file '" << path << "'\n";
    return 2;
  }
  out << content;
  return 0;
}

int cmd_verify(const std::string& suite, const SuiteOptions& opt, const std::string& format,
               const std::string& out_path) {
  std::vector<SuiteReport> reports;
  if (suite == "all") {
    reports = run_all_suites(opt);
  } else {
    if (!is_suite_name(suite)) {
      std::cerr << "unknown suite '" << suite << "'\n";
      return 2;
    }
    reports.push_back(run_suite(suite, opt));
  }
  bool all_ok = true;
  std::string text;
  Json jreports = Json::array();
  for (const auto& r : reports) {
    all_ok = all_ok && r.ok();
    text += report_to_text(r) + "\n";
    jreports.push_back(report_to_json(r));
  }
  if (format == "json") {
    Json j;
    j["reports"] = jreports;
    j["ok"] = all_ok;
    int rc = write_out(out_path, j.dump(2) + "\n");
    if (rc != 0) return rc;
  } else {
    int rc = write_out(out_path, text);
    if (rc != 0) return rc;
  }
  return all_ok ? 0 : 1;
}

int cmd_demo(const std::string& name, int truncation, const SuiteOptions& opt) {
  FixtureRegistry reg = opt.fixture_dir.empty()
                            ? (fixture_dir_from_env()
                                   ? FixtureRegistry::with_overrides(*fixture_dir_from_env())
                                   : FixtureRegistry::builtin())
                            : FixtureRegistry::with_overrides(opt.fixture_dir);
  if (name == "cantor-coproduct") {
    Cosheaf a = reg.cosheaf("cantor-const-ab-z2");
    int cap = std::min(truncation, reg.gc_level_cap("cantor-const-ab-z2", 3));
    DChain gc = global_cosections_chain(a);
    std::cout << "constant Z/2 cosheaf over the Cantor space\n";
    for (int n = 0; n <= cap; ++n) {
      std::cout << "level " << n << ": " << a.level(n).index_size()
                << " cells, cosections order " << gc.level(n).size();
      if (n < cap) std::cout << ", transition " << (is_epi(gc.step(n)) ? "epic" : "not epic");
      std::cout << "\n";
    }
    return 0;
  }
  if (name == "one-point-product") {
    Cosheaf a = reg.cosheaf("onepoint-product-ab");
    DChain gc = global_cosections_chain(a);
    std::cout << "product cosheaf over the one-point compactification\n";
    for (int n = 0; n <= truncation; ++n)
      std::cout << "level " << n << ": " << a.level(n).index_size()
                << " cells, partial product order " << gc.level(n).size() << "\n";
    return 0;
  }
  if (name == "zp-tower") {
    ChainDecl d;
    d.stabilization_bound = 0;
    DChain tower([](int n) { return FinObj::cyclic(1 << n); },
                 [](int n) {
                   FinObj dom = FinObj::cyclic(1 << (n + 1)), cod = FinObj::cyclic(1 << n);
                   std::vector<int> t(static_cast<size_t>(dom.size()));
                   for (int x = 0; x < dom.size(); ++x) t[static_cast<size_t>(x)] = x % cod.size();
                   return FinMor(dom, cod, std::move(t));
                 },
                 d);
    std::cout << "2-adic tower Z/2^n with reduction transitions\n";
    int cap = std::min(truncation, 4);
    for (int n = 0; n <= cap; ++n) {
      std::cout << "level " << n << ": order " << tower.level(n).size();
      if (n < cap) std::cout << ", transition epic: " << (is_epi(tower.step(n)) ? "yes" : "no");
      std::cout << "\n";
    }
    auto homs = hom_to_finite(tower, FinObj::cyclic(4), cap);
    std::cout << "hom classes into Z/4 at truncation " << cap << ": " << homs.reps.size() << " ("
              << flag_name(homs.flag) << ")\n";
    return 0;
  }
  if (name == "group-bundle") {
    Cosheaf g = reg.cosheaf("twopoint-z2z3-grp");
    GroupObjectData d = to_group_object(g);
    auto rep = check_group_object(d, std::min(truncation, 3));
    std::cout << "group cosheaf with fibres Z/2 and Z/3 over a two-point space\n";
    for (int n = 0; n <= std::min(truncation, 3); ++n)
      std::cout << "level " << n << ": total space size " << d.underlying.total().level(n).size()
                << "\n";
    std::cout << "group object axioms: " << (rep.ok ? "all pass" : "FAILED") << "\n";
    if (!rep.ok)
      for (const auto& f : rep.failures)
        std::cout << "  " << f.axiom << " fails at level " << f.level << "\n";
    return rep.ok ? 0 : 1;
  }
  std::cerr << "unknown demo '" << name << "'\n";
  return 2;
}

int cmd_export(const std::string& fixture, const std::string& format, int truncation,
               const std::string& out_path, const SuiteOptions& opt) {
  FixtureRegistry reg = opt.fixture_dir.empty()
                            ? (fixture_dir_from_env()
                                   ? FixtureRegistry::with_overrides(*fixture_dir_from_env())
                                   : FixtureRegistry::builtin())
                            : FixtureRegistry::with_overrides(opt.fixture_dir);
  if (!reg.has(fixture)) {
    std::cerr << "unknown fixture '" << fixture << "'\n";
    return 2;
  }
  const FixtureEntry& e = reg.entry(fixture);
  std::string content;
  if (format == "json") {
    Json j;
    if (e.kind == "space")
      j = space_descriptor(reg.space(fixture), truncation);
    else if (e.kind == "cosheaf")
      j = cosheaf_descriptor(reg.cosheaf(fixture), truncation);
    else
      j = e.descriptor;
    content = j.dump(2) + "\n";
  } else if (format == "dot") {
    if (e.kind == "space")
      content = space_to_dot(reg.space(fixture), truncation);
    else if (e.kind == "cosheaf")
      content = cosheaf_to_dot(reg.cosheaf(fixture), truncation);
    else {
      std::cerr << "dot export supports space and cosheaf fixtures\n";
      return 2;
    }
  } else {
    std::cerr << "unknown format '" << format << "'\n";
    return 2;
  }
  return write_out(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-truncation kernel for profinite cosheaf computations"};
  app.require_subcommand(1);

  SuiteOptions opt;
  std::string format = "text";
  std::string out_path;
  std::string suite = "all";
  std::string demo_name;
  std::string fixture;

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite, "suite name or 'all'");
  verify->add_option("--seed", opt.seed, "case seed");
  verify->add_option("--truncation", opt.truncation, "chain truncation level");
  verify->add_option("--window", opt.window, "verification window");
  verify->add_option("--cases", opt.cases, "override the suite's case count");
  verify->add_option("--fixture-dir", opt.fixture_dir, "fixture directory override");
  verify->add_option("--format", format, "text | json");
  verify->add_option("--out", out_path, "output file (default: stdout)");

  auto* demo = app.add_subcommand("demo", "print a showcase fixture");
  demo->add_option("--name", demo_name,
                   "cantor-coproduct | one-point-product | zp-tower | group-bundle")
      ->required();
  demo->add_option("--truncation", opt.truncation, "levels to print");
  demo->add_option("--fixture-dir", opt.fixture_dir, "fixture directory override");

  auto* exp = app.add_subcommand("export", "serialize a fixture");
  exp->add_option("--fixture", fixture, "fixture name")->required();
  exp->add_option("--format", format, "json | dot");
  exp->add_option("--truncation", opt.truncation, "levels to materialize");
  exp->add_option("--out", out_path, "output file (default: stdout)");
  exp->add_option("--fixture-dir", opt.fixture_dir, "fixture directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(suite, opt, format, out_path);
    if (demo->parsed()) return cmd_demo(demo_name, opt.truncation, opt);
    if (exp->parsed()) return cmd_export(fixture, format, opt.truncation, out_path, opt);
  } catch (const procosh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
