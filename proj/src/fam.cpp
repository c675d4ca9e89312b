#include "procosh/fam.hpp"

#include <algorithm>
#include <numeric>

namespace procosh {

std::optional<std::string> FamObj::validate() const {
  for (int x = 0; x < index_size(); ++x) {
    const FinObj& f = fibre(x);
    if (f.tag() != tag) return "fibre " + std::to_string(x) + " has a different instance tag";
    if (auto err = f.validate()) return "fibre " + std::to_string(x) + ": " + *err;
  }
  return std::nullopt;
}

FamObj fam_obj(Instance tag, std::vector<FinObj> fibres) {
  FamObj a{tag, std::move(fibres)};
  if (auto err = a.validate()) throw ShapeError("fam_obj: " + *err);
  return a;
}

FamObj fam_terminal(Instance tag) { return FamObj{tag, {FinObj::terminal(tag)}}; }
FamObj fam_initial(Instance tag) { return FamObj{tag, {}}; }

std::optional<std::string> FamMor::validate() const {
  if (dom.tag != cod.tag) return "instance tags differ";
  if (static_cast<int>(base.size()) != dom.index_size()) return "base table length mismatch";
  if (fibre_maps.size() != base.size()) return "fibre map count mismatch";
  for (int x = 0; x < dom.index_size(); ++x) {
    int y = base[static_cast<size_t>(x)];
    if (y < 0 || y >= cod.index_size()) return "base value out of range at " + std::to_string(x);
    const FinMor& fm = fibre_maps[static_cast<size_t>(x)];
    if (!(fm.dom() == dom.fibre(x))) return "fibre map domain mismatch at " + std::to_string(x);
    if (!(fm.cod() == cod.fibre(y))) return "fibre map codomain mismatch at " + std::to_string(x);
    if (auto err = fm.validate()) return "fibre map " + std::to_string(x) + ": " + *err;
  }
  return std::nullopt;
}

FamMor fam_mor(FamObj dom, FamObj cod, std::vector<int> base, std::vector<FinMor> fibre_maps) {
  FamMor m{std::move(dom), std::move(cod), std::move(base), std::move(fibre_maps)};
  if (auto err = m.validate()) throw ShapeError("fam_mor: " + *err);
  return m;
}

FamMor fam_mor_unchecked(FamObj dom, FamObj cod, std::vector<int> base,
                         std::vector<FinMor> fibre_maps) {
  return FamMor{std::move(dom), std::move(cod), std::move(base), std::move(fibre_maps)};
}

FamMor fam_identity(const FamObj& a) {
  std::vector<int> base(static_cast<size_t>(a.index_size()));
  std::iota(base.begin(), base.end(), 0);
  std::vector<FinMor> maps;
  maps.reserve(base.size());
  for (int x = 0; x < a.index_size(); ++x) maps.push_back(FinMor::identity(a.fibre(x)));
  return fam_mor_unchecked(a, a, std::move(base), std::move(maps));
}

FamMor compose(const FamMor& g, const FamMor& f) {
  if (!(f.cod == g.dom)) throw ShapeError("compose(FamMor): cod(f) != dom(g)");
  std::vector<int> base(static_cast<size_t>(f.dom.index_size()));
  std::vector<FinMor> maps;
  maps.reserve(base.size());
  for (int x = 0; x < f.dom.index_size(); ++x) {
    int y = f.base_at(x);
    base[static_cast<size_t>(x)] = g.base_at(y);
    maps.push_back(compose(g.fibre_map(y), f.fibre_map(x)));
  }
  return fam_mor_unchecked(f.dom, g.cod, std::move(base), std::move(maps));
}

FamProductResult product(const FamObj& a, const FamObj& b) {
  if (a.tag != b.tag) throw ShapeError("product(FamObj): mixed instance tags");
  int nb = b.index_size();
  FamObj obj{a.tag, {}};
  std::vector<int> b1, b2;
  std::vector<FinMor> m1, m2;
  for (int x = 0; x < a.index_size(); ++x)
    for (int y = 0; y < nb; ++y) {
      auto p = product(a.fibre(x), b.fibre(y));
      obj.fibres.push_back(p.obj);
      b1.push_back(x);
      b2.push_back(y);
      m1.push_back(p.proj1);
      m2.push_back(p.proj2);
    }
  FamMor proj1 = fam_mor_unchecked(obj, a, std::move(b1), std::move(m1));
  FamMor proj2 = fam_mor_unchecked(obj, b, std::move(b2), std::move(m2));
  return FamProductResult{obj, std::move(proj1), std::move(proj2)};
}

FamMor pair_into_product(const FamProductResult& p, const FamMor& f, const FamMor& g) {
  if (!(f.dom == g.dom)) throw ShapeError("pair_into_product(Fam): domains differ");
  const FamObj& a = p.proj1.cod;
  const FamObj& b = p.proj2.cod;
  if (!(f.cod == a) || !(g.cod == b))
    throw ShapeError("pair_into_product(Fam): codomains do not match the product");
  int nb = b.index_size();
  std::vector<int> base(static_cast<size_t>(f.dom.index_size()));
  std::vector<FinMor> maps;
  for (int x = 0; x < f.dom.index_size(); ++x) {
    int idx = f.base_at(x) * nb + g.base_at(x);
    base[static_cast<size_t>(x)] = idx;
    auto fp = product(a.fibre(f.base_at(x)), b.fibre(g.base_at(x)));
    maps.push_back(pair_into_product(fp, f.fibre_map(x), g.fibre_map(x)));
  }
  return fam_mor_unchecked(f.dom, p.obj, std::move(base), std::move(maps));
}

FamEqualizerResult equalizer(const FamMor& f, const FamMor& g) {
  if (!(f.dom == g.dom) || !(f.cod == g.cod))
    throw ShapeError("equalizer(Fam): not a parallel pair");
  FamObj obj{f.dom.tag, {}};
  std::vector<int> kept, base;
  std::vector<FinMor> maps;
  for (int x = 0; x < f.dom.index_size(); ++x) {
    if (f.base_at(x) != g.base_at(x)) continue;
    auto e = equalizer(f.fibre_map(x), g.fibre_map(x));
    obj.fibres.push_back(e.obj);
    kept.push_back(x);
    base.push_back(x);
    maps.push_back(e.mono);
  }
  FamMor mono = fam_mor_unchecked(obj, f.dom, std::move(base), std::move(maps));
  return FamEqualizerResult{obj, std::move(mono), std::move(kept)};
}

FamPullbackResult pullback(const FamMor& f, const FamMor& g) {
  if (!(f.cod == g.cod)) throw ShapeError("pullback(Fam): codomain mismatch");
  auto p = product(f.dom, g.dom);
  auto e = equalizer(compose(f, p.proj1), compose(g, p.proj2));
  return FamPullbackResult{e.obj, compose(p.proj1, e.mono), compose(p.proj2, e.mono)};
}

FamMor to_terminal(const FamObj& a) {
  FamObj t = fam_terminal(a.tag);
  std::vector<int> base(static_cast<size_t>(a.index_size()), 0);
  std::vector<FinMor> maps;
  for (int x = 0; x < a.index_size(); ++x) {
    if (a.tag == Instance::Set)
      maps.push_back(FinMor::constant(a.fibre(x), t.fibre(0), 0));
    else
      maps.push_back(FinMor::zero(a.fibre(x), t.fibre(0)));
  }
  return fam_mor_unchecked(a, t, std::move(base), std::move(maps));
}

FamImageFactorization image_factor(const FamMor& m) {
  // image index: base values with nonempty preimage, ascending
  std::vector<int> img_labels;
  {
    std::vector<char> hit(static_cast<size_t>(m.cod.index_size()), 0);
    for (int v : m.base) hit[static_cast<size_t>(v)] = 1;
    for (int y = 0; y < m.cod.index_size(); ++y)
      if (hit[static_cast<size_t>(y)]) img_labels.push_back(y);
  }
  std::vector<int> pos(static_cast<size_t>(m.cod.index_size()), -1);
  for (int i = 0; i < static_cast<int>(img_labels.size()); ++i)
    pos[static_cast<size_t>(img_labels[static_cast<size_t>(i)])] = i;

  FamObj img{m.dom.tag, {}};
  std::vector<FinMor> mono_maps;
  std::vector<Subobject> subs;
  for (int y : img_labels) {
    std::vector<FinMor> over_y;
    for (int x = 0; x < m.dom.index_size(); ++x)
      if (m.base_at(x) == y) over_y.push_back(m.fibre_map(x));
    Subobject s = joint_image(over_y);
    img.fibres.push_back(s.sub());
    mono_maps.push_back(s.inclusion);
    subs.push_back(std::move(s));
  }

  std::vector<int> repi_base(static_cast<size_t>(m.dom.index_size()));
  std::vector<FinMor> repi_maps;
  for (int x = 0; x < m.dom.index_size(); ++x) {
    int i = pos[static_cast<size_t>(m.base_at(x))];
    repi_base[static_cast<size_t>(x)] = i;
    repi_maps.push_back(factor_through_sub(subs[static_cast<size_t>(i)], m.fibre_map(x)));
  }
  FamMor repi = fam_mor_unchecked(m.dom, img, std::move(repi_base), std::move(repi_maps));
  FamMor mono = fam_mor_unchecked(img, m.cod, std::move(img_labels), std::move(mono_maps));
  return FamImageFactorization{std::move(repi), std::move(mono)};
}

FamCoequalizerResult coeq_kernel_pair(const FamMor& m) {
  auto im = image_factor(m);
  return FamCoequalizerResult{im.repi.cod, im.repi};
}

bool is_epi(const FamMor& m) {
  std::vector<char> hit(static_cast<size_t>(m.cod.index_size()), 0);
  for (int v : m.base) hit[static_cast<size_t>(v)] = 1;
  for (char h : hit)
    if (!h) return false;
  for (int y = 0; y < m.cod.index_size(); ++y) {
    std::vector<FinMor> over_y;
    for (int x = 0; x < m.dom.index_size(); ++x)
      if (m.base_at(x) == y) over_y.push_back(m.fibre_map(x));
    if (joint_image(over_y).sub().size() != m.cod.fibre(y).size()) return false;
  }
  return true;
}

bool is_mono(const FamMor& m) {
  std::vector<char> seen(static_cast<size_t>(m.cod.index_size()), 0);
  for (int v : m.base) {
    if (seen[static_cast<size_t>(v)]) return false;
    seen[static_cast<size_t>(v)] = 1;
  }
  for (const auto& fm : m.fibre_maps)
    if (!is_mono(fm)) return false;
  return true;
}

FamCoproductResult coproduct(const FamObj& a, const FamObj& b) {
  if (a.tag != b.tag) throw ShapeError("coproduct(Fam): mixed instance tags");
  FamObj obj{a.tag, a.fibres};
  obj.fibres.insert(obj.fibres.end(), b.fibres.begin(), b.fibres.end());
  std::vector<int> b1(static_cast<size_t>(a.index_size())), b2(static_cast<size_t>(b.index_size()));
  std::iota(b1.begin(), b1.end(), 0);
  std::iota(b2.begin(), b2.end(), a.index_size());
  std::vector<FinMor> m1, m2;
  for (int x = 0; x < a.index_size(); ++x) m1.push_back(FinMor::identity(a.fibre(x)));
  for (int y = 0; y < b.index_size(); ++y) m2.push_back(FinMor::identity(b.fibre(y)));
  return FamCoproductResult{obj, fam_mor_unchecked(a, obj, std::move(b1), std::move(m1)),
                            fam_mor_unchecked(b, obj, std::move(b2), std::move(m2))};
}

GlobalCosectionsResult global_cosections(const FamObj& a) {
  if (!coproduct_capable(a.tag))
    throw CapabilityError("global_cosections: plain-group instance; use hom_out instead");
  if (a.tag == Instance::Set) {
    int total = 0;
    for (const auto& f : a.fibres) total += f.size();
    FinObj obj = FinObj::set(total);
    std::vector<FinMor> inj;
    int off = 0;
    for (const auto& f : a.fibres) {
      std::vector<int> t(static_cast<size_t>(f.size()));
      std::iota(t.begin(), t.end(), off);
      inj.push_back(FinMor::unchecked(f, obj, std::move(t)));
      off += f.size();
    }
    return GlobalCosectionsResult{obj, std::move(inj)};
  }
  // abelian direct sum: carrier = tuples, row-major mixed radix
  long long order = 1;
  for (const auto& f : a.fibres) {
    order *= f.size();
    if (order > Config::composite_group_order_cap())
      throw Error("global_cosections: composite group order cap exceeded");
  }
  int n = static_cast<int>(order);
  int k = a.index_size();
  std::vector<int> stride(static_cast<size_t>(k), 1);
  for (int i = k - 2; i >= 0; --i)
    stride[static_cast<size_t>(i)] = stride[static_cast<size_t>(i + 1)] * a.fibre(i + 1).size();
  auto decompose = [&](int e, std::vector<int>& tuple) {
    for (int i = 0; i < k; ++i) {
      tuple[static_cast<size_t>(i)] = e / stride[static_cast<size_t>(i)];
      e %= stride[static_cast<size_t>(i)];
    }
  };
  std::vector<int> t(static_cast<size_t>(n) * n);
  std::vector<int> ta(static_cast<size_t>(k)), tb(static_cast<size_t>(k));
  for (int e1 = 0; e1 < n; ++e1) {
    decompose(e1, ta);
    for (int e2 = 0; e2 < n; ++e2) {
      decompose(e2, tb);
      int r = 0;
      for (int i = 0; i < k; ++i)
        r += a.fibre(i).mul(ta[static_cast<size_t>(i)], tb[static_cast<size_t>(i)]) *
             stride[static_cast<size_t>(i)];
      t[static_cast<size_t>(e1) * n + e2] = r;
    }
  }
  FinObj obj = FinObj::unchecked_group(Instance::Ab, std::move(t));
  std::vector<FinMor> inj;
  for (int i = 0; i < k; ++i) {
    std::vector<int> ti(static_cast<size_t>(a.fibre(i).size()));
    for (int v = 0; v < a.fibre(i).size(); ++v)
      ti[static_cast<size_t>(v)] = v * stride[static_cast<size_t>(i)];
    inj.push_back(FinMor::unchecked(a.fibre(i), obj, std::move(ti)));
  }
  return GlobalCosectionsResult{obj, std::move(inj)};
}

FinMor assemble_out_of_coproduct(const GlobalCosectionsResult& gc,
                                 const std::vector<FinMor>& legs, const FinObj& cod) {
  if (legs.size() != gc.coprojections.size())
    throw ShapeError("assemble_out_of_coproduct: leg count mismatch");
  const FinObj& total = gc.total;
  if (total.tag() == Instance::Set) {
    std::vector<int> t(static_cast<size_t>(total.size()), -1);
    for (size_t i = 0; i < legs.size(); ++i) {
      const auto& inj = gc.coprojections[i];
      for (int v = 0; v < inj.dom().size(); ++v) t[static_cast<size_t>(inj(v))] = legs[i](v);
    }
    return FinMor::unchecked(total, cod, std::move(t));
  }
  // direct sum: map each tuple componentwise and add in the codomain
  int k = static_cast<int>(legs.size());
  std::vector<int> stride(static_cast<size_t>(k), 1);
  for (int i = k - 2; i >= 0; --i)
    stride[static_cast<size_t>(i)] =
        stride[static_cast<size_t>(i + 1)] * legs[static_cast<size_t>(i + 1)].dom().size();
  std::vector<int> t(static_cast<size_t>(total.size()));
  for (int e = 0; e < total.size(); ++e) {
    int rem = e, r = 0;
    for (int i = 0; i < k; ++i) {
      int comp = rem / stride[static_cast<size_t>(i)];
      rem %= stride[static_cast<size_t>(i)];
      r = cod.mul(r, legs[static_cast<size_t>(i)](comp));
    }
    t[static_cast<size_t>(e)] = r;
  }
  return FinMor::unchecked(total, cod, std::move(t));
}

FinMor global_cosections_map(const FamMor& m, const GlobalCosectionsResult& gc_dom,
                             const GlobalCosectionsResult& gc_cod) {
  std::vector<FinMor> legs;
  for (int x = 0; x < m.dom.index_size(); ++x)
    legs.push_back(
        compose(gc_cod.coprojections[static_cast<size_t>(m.base_at(x))], m.fibre_map(x)));
  return assemble_out_of_coproduct(gc_dom, legs, gc_cod.total);
}

std::vector<std::vector<FinMor>> hom_out(const FamObj& a, const FinObj& d) {
  if (a.tag != d.tag()) throw ShapeError("hom_out: mixed instance tags");
  std::vector<std::vector<FinMor>> per_fibre;
  for (const auto& f : a.fibres) per_fibre.push_back(hom_set(f, d));
  std::vector<std::vector<FinMor>> out;
  for (const auto& h : per_fibre)
    if (h.empty()) return out;  // no maps into an empty d from a nonempty fibre
  std::vector<size_t> idx(per_fibre.size(), 0);
  while (true) {
    std::vector<FinMor> tuple;
    tuple.reserve(per_fibre.size());
    for (size_t i = 0; i < per_fibre.size(); ++i) tuple.push_back(per_fibre[i][idx[i]]);
    out.push_back(std::move(tuple));
    size_t i = 0;
    while (i < per_fibre.size()) {
      if (++idx[i] < per_fibre[i].size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == per_fibre.size()) break;
  }
  return out;
}

std::vector<FamMor> hom_set(const FamObj& a, const FamObj& b) {
  if (a.tag != b.tag) throw ShapeError("hom_set(Fam): mixed instance tags");
  std::vector<FamMor> out;
  int n = a.index_size(), m = b.index_size();
  if (n == 0) {
    out.push_back(fam_mor_unchecked(a, b, {}, {}));
    return out;
  }
  if (m == 0) return out;
  std::vector<int> base(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<std::vector<FinMor>> per_fibre;
    bool feasible = true;
    for (int x = 0; x < n && feasible; ++x) {
      per_fibre.push_back(hom_set(a.fibre(x), b.fibre(base[static_cast<size_t>(x)])));
      if (per_fibre.back().empty()) feasible = false;
    }
    if (feasible) {
      std::vector<size_t> idx(static_cast<size_t>(n), 0);
      while (true) {
        std::vector<FinMor> maps;
        maps.reserve(static_cast<size_t>(n));
        for (int x = 0; x < n; ++x)
          maps.push_back(per_fibre[static_cast<size_t>(x)][idx[static_cast<size_t>(x)]]);
        out.push_back(fam_mor_unchecked(a, b, base, std::move(maps)));
        size_t i = 0;
        while (i < static_cast<size_t>(n)) {
          if (++idx[i] < per_fibre[i].size()) break;
          idx[i] = 0;
          ++i;
        }
        if (i == static_cast<size_t>(n)) break;
      }
    }
    int i = 0;
    while (i < n) {
      if (++base[static_cast<size_t>(i)] < m) break;
      base[static_cast<size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
  }
  return out;
}

bool is_iso(const FamMor& m) {
  if (m.dom.index_size() != m.cod.index_size()) return false;
  std::vector<char> seen(static_cast<size_t>(m.cod.index_size()), 0);
  for (int v : m.base) {
    if (seen[static_cast<size_t>(v)]) return false;
    seen[static_cast<size_t>(v)] = 1;
  }
  for (const auto& fm : m.fibre_maps)
    if (!is_iso(fm)) return false;
  return true;
}

std::optional<FamMor> find_iso(const FamObj& a, const FamObj& b) {
  if (a.tag != b.tag || a.index_size() != b.index_size()) return std::nullopt;
  int n = a.index_size();
  std::vector<int> base(static_cast<size_t>(n), -1);
  std::vector<FinMor> maps(static_cast<size_t>(n));
  std::vector<char> used(static_cast<size_t>(n), 0);
  auto rec = [&](auto&& self, int x) -> bool {
    if (x == n) return true;
    for (int y = 0; y < n; ++y) {
      if (used[static_cast<size_t>(y)]) continue;
      if (auto iso = procosh::find_iso(a.fibre(x), b.fibre(y))) {
        used[static_cast<size_t>(y)] = 1;
        base[static_cast<size_t>(x)] = y;
        maps[static_cast<size_t>(x)] = *iso;
        if (self(self, x + 1)) return true;
        used[static_cast<size_t>(y)] = 0;
      }
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return fam_mor_unchecked(a, b, std::move(base), std::move(maps));
}

FamObj restrict_family(const FamObj& a, const std::vector<int>& labels) {
  FamObj out{a.tag, {}};
  for (int x : labels) {
    if (x < 0 || x >= a.index_size()) throw ShapeError("restrict_family: label out of range");
    out.fibres.push_back(a.fibre(x));
  }
  return out;
}

}  // namespace procosh
