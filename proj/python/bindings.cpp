#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "procosh/bundle.hpp"
#include "procosh/dot_export.hpp"
#include "procosh/fixtures.hpp"
#include "procosh/verify.hpp"

namespace py = pybind11;
using namespace procosh;

namespace {

Instance parse_tag(const std::string& name) {
  auto t = instance_from_name(name);
  if (!t) throw ShapeError("unknown instance tag '" + name + "'");
  return *t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite-truncation kernel for profinite cosheaf computations";

  py::register_exception<Error>(m, "KernelError");
  py::register_exception<ShapeError>(m, "ShapeError");
  py::register_exception<CapabilityError>(m, "CapabilityError");

  py::class_<FinObj>(m, "FinObj")
      .def_property_readonly("instance", [](const FinObj& o) { return instance_name(o.tag()); })
      .def_property_readonly("size", &FinObj::size)
      .def_property_readonly("table", [](const FinObj& o) { return o.table(); })
      .def("mul", &FinObj::mul)
      .def("inverse", &FinObj::inverse)
      .def("element_order", &FinObj::element_order)
      .def("__eq__", [](const FinObj& a, const FinObj& b) { return a == b; })
      .def("__repr__", [](const FinObj& o) {
        return std::string("FinObj(") + instance_name(o.tag()) + ", " + std::to_string(o.size()) +
               ")";
      });

  py::class_<FinMor>(m, "FinMor")
      .def_property_readonly("dom", &FinMor::dom)
      .def_property_readonly("cod", &FinMor::cod)
      .def_property_readonly("table", [](const FinMor& f) { return f.table(); })
      .def("__call__", [](const FinMor& f, int x) { return f(x); })
      .def("__eq__", [](const FinMor& a, const FinMor& b) { return a == b; })
      .def("__repr__", [](const FinMor& f) {
        return "FinMor(" + std::to_string(f.dom().size()) + " -> " +
               std::to_string(f.cod().size()) + ")";
      });

  m.def("fin_set", &FinObj::set, py::arg("size"));
  m.def(
      "cyclic",
      [](int n, const std::string& tag) { return FinObj::cyclic(n, parse_tag(tag)); },
      py::arg("n"), py::arg("instance") = "ab");
  m.def("symmetric3", &FinObj::symmetric3);
  m.def("klein_four", &FinObj::klein_four);
  m.def(
      "group_from_table",
      [](const std::string& tag, std::vector<int> table) {
        return FinObj::group(parse_tag(tag), std::move(table));
      },
      py::arg("instance"), py::arg("table"));
  m.def("fin_mor", [](const FinObj& dom, const FinObj& cod, std::vector<int> table) {
    return FinMor(dom, cod, std::move(table));
  });
  m.def("identity", [](const FinObj& a) { return FinMor::identity(a); });

  m.def("compose", [](const FinMor& g, const FinMor& f) { return compose(g, f); });
  m.def("product", [](const FinObj& a, const FinObj& b) {
    auto p = product(a, b);
    return py::make_tuple(p.obj, p.proj1, p.proj2);
  });
  m.def("equalizer", [](const FinMor& f, const FinMor& g) {
    auto e = equalizer(f, g);
    return py::make_tuple(e.obj, e.mono);
  });
  m.def("pullback", [](const FinMor& f, const FinMor& g) {
    auto p = pullback(f, g);
    return py::make_tuple(p.obj, p.p1, p.p2);
  });
  m.def("image_factor", [](const FinMor& f) {
    auto im = image_factor(f);
    return py::make_tuple(im.repi, im.mono);
  });
  m.def("joint_image", [](const std::vector<FinMor>& fs) {
    auto s = joint_image(fs);
    return py::make_tuple(s.sub(), s.inclusion);
  });
  m.def("coproduct", [](const FinObj& a, const FinObj& b) {
    auto c = coproduct(a, b);
    return py::make_tuple(c.obj, c.inj1, c.inj2);
  });
  m.def("is_mono", [](const FinMor& f) { return is_mono(f); });
  m.def("is_epi", [](const FinMor& f) { return is_epi(f); });
  m.def("is_iso", [](const FinMor& f) { return is_iso(f); });
  m.def("hom_set", [](const FinObj& a, const FinObj& b) { return hom_set(a, b); });
  m.def("find_iso", [](const FinObj& a, const FinObj& b) -> py::object {
    auto iso = find_iso(a, b);
    if (!iso) return py::none();
    return py::cast(*iso);
  });

  py::class_<FamObj>(m, "FamObj")
      .def_property_readonly("instance", [](const FamObj& a) { return instance_name(a.tag); })
      .def_property_readonly("index_size", &FamObj::index_size)
      .def("fibre", &FamObj::fibre, py::return_value_policy::copy)
      .def("__eq__", [](const FamObj& a, const FamObj& b) { return a == b; })
      .def("__repr__", [](const FamObj& a) {
        return "FamObj(" + std::string(instance_name(a.tag)) + ", " +
               std::to_string(a.index_size()) + " fibres)";
      });

  py::class_<FamMor>(m, "FamMor")
      .def_property_readonly("dom", [](const FamMor& f) { return f.dom; })
      .def_property_readonly("cod", [](const FamMor& f) { return f.cod; })
      .def_property_readonly("base", [](const FamMor& f) { return f.base; })
      .def("fibre_map", &FamMor::fibre_map, py::return_value_policy::copy)
      .def("__eq__", [](const FamMor& a, const FamMor& b) { return a == b; });

  m.def("fam_obj", [](const std::string& tag, std::vector<FinObj> fibres) {
    return fam_obj(parse_tag(tag), std::move(fibres));
  });
  m.def("fam_mor",
        [](FamObj dom, FamObj cod, std::vector<int> base, std::vector<FinMor> maps) {
          return fam_mor(std::move(dom), std::move(cod), std::move(base), std::move(maps));
        });
  m.def("fam_identity", &fam_identity);
  m.def("fam_compose", [](const FamMor& g, const FamMor& f) { return compose(g, f); });
  m.def("fam_product", [](const FamObj& a, const FamObj& b) {
    auto p = product(a, b);
    return py::make_tuple(p.obj, p.proj1, p.proj2);
  });
  m.def("fam_equalizer", [](const FamMor& f, const FamMor& g) {
    auto e = equalizer(f, g);
    return py::make_tuple(e.obj, e.mono);
  });
  m.def("fam_image_factor", [](const FamMor& f) {
    auto im = image_factor(f);
    return py::make_tuple(im.repi, im.mono);
  });
  m.def("fam_coeq_kernel_pair", [](const FamMor& f) {
    auto c = coeq_kernel_pair(f);
    return py::make_tuple(c.obj, c.quotient);
  });
  m.def("fam_coproduct", [](const FamObj& a, const FamObj& b) {
    auto c = coproduct(a, b);
    return py::make_tuple(c.obj, c.inj1, c.inj2);
  });
  m.def("fam_is_epi", [](const FamMor& f) { return is_epi(f); });
  m.def("fam_is_mono", [](const FamMor& f) { return is_mono(f); });
  m.def("fam_global_cosections", [](const FamObj& a) {
    auto gc = global_cosections(a);
    return py::make_tuple(gc.total, gc.coprojections);
  });
  m.def("fam_hom_out", [](const FamObj& a, const FinObj& d) { return hom_out(a, d); });
  m.def("fam_hom_set", [](const FamObj& a, const FamObj& b) { return hom_set(a, b); });
  m.def("fam_find_iso", [](const FamObj& a, const FamObj& b) -> py::object {
    auto iso = find_iso(a, b);
    if (!iso) return py::none();
    return py::cast(*iso);
  });

  py::class_<ProSpace>(m, "ProSpace")
      .def("level_size", [](const ProSpace& x, int n) { return x.level(n).size(); })
      .def("transition", [](const ProSpace& x, int m, int n) { return x.transition(m, n); })
      .def_property_readonly("surjective", &ProSpace::surjective);

  py::class_<ClopenSet>(m, "ClopenSet")
      .def_property_readonly("level", [](const ClopenSet& u) { return u.level; })
      .def_property_readonly("subset", [](const ClopenSet& u) { return u.subset; });

  py::class_<PointThread>(m, "PointThread").def("at", &PointThread::at);

  m.def("cantor_space", &cantor_space);
  m.def("one_point_compactification", &one_point_compactification);
  m.def("finite_space", &finite_space);
  m.def("clopen", [](const ProSpace& x, int level, std::vector<int> subset) {
    return clopen(x, level, std::move(subset));
  });
  m.def("whole_space", &whole_space, py::arg("space"), py::arg("level") = 0);
  m.def("clopen_lift", &clopen_lift);
  m.def("clopen_image", &clopen_image);
  m.def("clopen_meet", &clopen_meet);
  m.def("clopen_join", &clopen_join);
  m.def("clopen_complement", &clopen_complement);
  m.def("clopen_is_disjoint", &clopen_is_disjoint);
  m.def("partitions",
        [](const ClopenSet& u) { return partitions(u); });
  m.def("is_in_clopen", &is_in_clopen);
  m.def("cantor_thread", [](const ProSpace& x, unsigned long long bits) {
    return cantor_thread_bits(x, bits);
  });
  m.def("one_point_thread", &one_point_thread);
  m.def("constant_thread", [](const ProSpace& x, int label) {
    return PointThread(x, {label}, [label](int) { return label; });
  });

  py::class_<DChain>(m, "ObjectChain")
      .def("level", [](const DChain& c, int n) { return c.level(n); })
      .def("step", [](const DChain& c, int n) { return c.step(n); })
      .def("transition", [](const DChain& c, int m, int n) { return c.transition(m, n); });

  py::class_<Cosheaf>(m, "Cosheaf")
      .def_property_readonly("instance", [](const Cosheaf& a) { return instance_name(a.tag()); })
      .def("level", [](const Cosheaf& a, int n) { return a.level(n); })
      .def("step", [](const Cosheaf& a, int n) { return a.step(n); })
      .def_property_readonly("base", &Cosheaf::base)
      .def("check_alignment", &Cosheaf::check_alignment);

  m.def("constant_cosheaf", &constant_cosheaf);
  m.def("terminal_cosheaf", [](const std::string& tag, const ProSpace& x) {
    return terminal_cosheaf(parse_tag(tag), x);
  });
  m.def("skyscraper", &skyscraper);
  m.def("cosections", &cosections);
  m.def("global_cosections_chain", &global_cosections_chain);
  m.def("costalk", &costalk);
  m.def("hom_out_of_cosections",
        [](const Cosheaf& a, const ClopenSet& u, const FinObj& d, int truncation) {
          auto r = hom_out_of_cosections(a, u, d, truncation);
          py::dict out;
          out["level"] = r.level;
          out["classes"] = r.reps.size();
          out["birth"] = r.birth;
          out["flag"] = flag_name(r.flag);
          return out;
        });
  m.def("hom_cosheaf", [](const Cosheaf& a, const Cosheaf& b, int colim, int lim) {
    auto r = hom_cosheaf(a, b, colim, lim);
    py::dict out;
    out["classes"] = r.reps.size();
    out["birth"] = r.birth;
    out["flag"] = flag_name(r.flag);
    return out;
  });
  m.def("cosheaf_from_json", [](const std::string& text) {
    return cosheaf_from_json(Json::parse(text));
  });
  m.def("cosheaf_to_json", [](const Cosheaf& a, int truncation) {
    return cosheaf_descriptor(a, truncation).dump();
  });
  m.def("cosheaf_to_dot", &cosheaf_to_dot);
  m.def("space_to_dot", &space_to_dot);

  py::class_<ProBundle>(m, "ProBundle")
      .def_property_readonly("total", &ProBundle::total)
      .def_property_readonly("base", &ProBundle::base)
      .def("proj", &ProBundle::proj);

  py::class_<GroupObjectData>(m, "GroupObjectData");

  m.def("to_bundle", &to_bundle);
  m.def("from_bundle", &from_bundle);
  m.def("to_group_object", &to_group_object);
  m.def("from_group_object", [](const GroupObjectData& d, const std::string& tag) {
    return from_group_object(d, parse_tag(tag));
  });
  m.def("check_group_object", [](const GroupObjectData& d, int window) {
    auto rep = check_group_object(d, window);
    py::dict out;
    out["ok"] = rep.ok;
    py::list fails;
    for (const auto& f : rep.failures) {
      py::dict e;
      e["level"] = f.level;
      e["axiom"] = f.axiom;
      e["witness"] = f.witness;
      fails.append(e);
    }
    out["failures"] = fails;
    return out;
  });

  m.def("fixture_names", [] { return FixtureRegistry::builtin().names(); });
  m.def("load_fixture", [](const std::string& name) {
    return FixtureRegistry::builtin().cosheaf(name);
  });

  m.def(
      "run_suite_json",
      [](const std::string& name, std::uint64_t seed, int truncation, int window, int cases) {
        SuiteOptions opt;
        opt.seed = seed;
        opt.truncation = truncation;
        opt.window = window;
        opt.cases = cases;
        return report_to_json(run_suite(name, opt)).dump();
      },
      py::arg("name"), py::arg("seed") = 7, py::arg("truncation") = 4, py::arg("window") = 3,
      py::arg("cases") = 0);
  m.def("suite_names", &suite_names);
}
