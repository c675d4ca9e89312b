#include "procosh/cosheaf.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <set>

namespace procosh {

namespace {

ChainDecl shifted_decl(const ChainDecl& d, int shift) {
  ChainDecl out;
  if (d.stabilization_bound) out.stabilization_bound = d.stabilization_bound;
  if (d.constant_from) out.constant_from = std::max(0, *d.constant_from - shift);
  return out;
}

FinMor unique_from_initial(Instance tag, const FinObj& target) {
  if (tag == Instance::Set) return FinMor::unchecked(FinObj::set(0), target, {});
  return FinMor::unchecked(FinObj::trivial_group(tag), target, {0});
}

}  // namespace

Cosheaf::Cosheaf(FamChain chain, ProSpace base, Instance tag)
    : chain_(std::move(chain)), base_(std::move(base)), tag_(tag) {}

void Cosheaf::check_alignment(int upto) const {
  for (int n = 0; n <= upto; ++n) {
    FamObj fam = chain_.level(n);
    if (fam.tag != tag_)
      throw ShapeError("Cosheaf: level " + std::to_string(n) + " has a foreign instance tag");
    if (auto err = fam.validate())
      throw ShapeError("Cosheaf: level " + std::to_string(n) + ": " + *err);
    if (fam.index_size() != base_.level(n).size())
      throw ShapeError("Cosheaf: index size differs from the base at level " + std::to_string(n));
    if (n < upto) {
      FamMor st = chain_.step(n);
      if (auto err = st.validate())
        throw ShapeError("Cosheaf: step " + std::to_string(n) + ": " + *err);
      if (st.base != base_.step(n).table())
        throw ShapeError("Cosheaf: chain base and space transition differ at level " +
                         std::to_string(n));
    }
  }
}

Cosheaf limit_of_chain(const FamChain& chain, bool base_surjective) {
  Instance tag = chain.level(0).tag;
  DChain base_chain = map_chain<DCat, FamCat>(
      chain, [](int, const FamObj& o) { return FinObj::set(o.index_size()); },
      [](int, const FamMor& m) {
        return FinMor::unchecked(FinObj::set(m.dom.index_size()),
                                 FinObj::set(m.cod.index_size()), m.base);
      },
      chain.decl());
  return Cosheaf(chain, ProSpace(std::move(base_chain), base_surjective), tag);
}

Cosheaf constant_cosheaf(const FinObj& c, const ProSpace& x) {
  FinObj fibre = c;
  FamChain chain(
      [fibre, x](int n) {
        return FamObj{fibre.tag(),
                      std::vector<FinObj>(static_cast<size_t>(x.level(n).size()), fibre)};
      },
      [fibre, x](int n) {
        FamObj dom{fibre.tag(),
                   std::vector<FinObj>(static_cast<size_t>(x.level(n + 1).size()), fibre)};
        FamObj cod{fibre.tag(),
                   std::vector<FinObj>(static_cast<size_t>(x.level(n).size()), fibre)};
        std::vector<FinMor> maps(static_cast<size_t>(dom.index_size()), FinMor::identity(fibre));
        return fam_mor_unchecked(dom, cod, x.step(n).table(), std::move(maps));
      },
      x.chain().decl());
  return Cosheaf(std::move(chain), x, c.tag());
}

Cosheaf terminal_cosheaf(Instance tag, const ProSpace& x) {
  return constant_cosheaf(FinObj::terminal(tag), x);
}

Cosheaf skyscraper(const PointThread& x, const FinObj& c, const ProSpace& space) {
  if (!x.space().same_impl(space))
    throw ShapeError("skyscraper: thread does not belong to the space");
  Instance tag = c.tag();
  FinObj off = FinObj::initial(tag);
  FinObj fibre = c;
  auto level_fam = [fibre, off, tag, x, space](int n) {
    std::vector<FinObj> fs(static_cast<size_t>(space.level(n).size()), off);
    fs[static_cast<size_t>(x.at(n))] = fibre;
    return FamObj{tag, std::move(fs)};
  };
  FamChain chain(
      level_fam,
      [fibre, tag, x, space, level_fam](int n) {
        FamObj dom = level_fam(n + 1), cod = level_fam(n);
        FinMor sp_step = space.step(n);
        const auto& base = sp_step.table();
        std::vector<FinMor> maps;
        for (int ycell = 0; ycell < dom.index_size(); ++ycell) {
          if (ycell == x.at(n + 1))
            maps.push_back(FinMor::identity(fibre));
          else
            maps.push_back(unique_from_initial(tag, cod.fibre(base[static_cast<size_t>(ycell)])));
        }
        return fam_mor_unchecked(dom, cod, base, std::move(maps));
      },
      space.chain().decl());
  return Cosheaf(std::move(chain), space, tag);
}

RestrictedLevel restrict_over(const Cosheaf& a, const ClopenSet& u, int chain_level) {
  if (chain_level < u.level)
    throw ShapeError("restrict_over: chain level below the clopen's level");
  ClopenSet lifted = clopen_lift(a.base(), u, chain_level);
  FamObj fam = a.level(chain_level);
  if (fam.index_size() != a.base().level(chain_level).size())
    throw ShapeError("restrict_over: chain index and base size differ at level " +
                     std::to_string(chain_level));
  return RestrictedLevel{restrict_family(fam, lifted.subset), lifted.subset};
}

FamMor restricted_step(const Cosheaf& a, const ClopenSet& u, int chain_level) {
  RestrictedLevel hi = restrict_over(a, u, chain_level + 1);
  RestrictedLevel lo = restrict_over(a, u, chain_level);
  FamMor st = a.step(chain_level);
  std::vector<int> pos(static_cast<size_t>(a.level(chain_level).index_size()), -1);
  for (int i = 0; i < static_cast<int>(lo.cells.size()); ++i)
    pos[static_cast<size_t>(lo.cells[static_cast<size_t>(i)])] = i;
  std::vector<int> base;
  std::vector<FinMor> maps;
  for (int i = 0; i < static_cast<int>(hi.cells.size()); ++i) {
    int cell = hi.cells[static_cast<size_t>(i)];
    if (cell >= static_cast<int>(st.base.size()))
      throw ShapeError("restricted_step: chain base shorter than the space level");
    int target = st.base_at(cell);
    int p = target >= 0 && target < static_cast<int>(pos.size()) ? pos[static_cast<size_t>(target)]
                                                                 : -1;
    if (p < 0)
      throw ShapeError("restricted_step: chain base leaves the clopen at level " +
                       std::to_string(chain_level + 1) + ", cell " + std::to_string(cell));
    base.push_back(p);
    maps.push_back(st.fibre_map(cell));
  }
  return fam_mor_unchecked(hi.family, lo.family, std::move(base), std::move(maps));
}

namespace {

struct GcMemo {
  std::map<int, GlobalCosectionsResult> memo;
  std::mutex mu;
};

GlobalCosectionsResult gc_at(const std::shared_ptr<GcMemo>& memo, int key,
                             const std::function<FamObj()>& fam_fn) {
  {
    std::lock_guard<std::mutex> lk(memo->mu);
    auto it = memo->memo.find(key);
    if (it != memo->memo.end()) return it->second;
  }
  GlobalCosectionsResult r = global_cosections(fam_fn());
  std::lock_guard<std::mutex> lk(memo->mu);
  memo->memo.emplace(key, r);
  return r;
}

}  // namespace

DChain cosections(const Cosheaf& a, const ClopenSet& u) {
  if (!coproduct_capable(a.tag()))
    throw CapabilityError("cosections: plain-group instance; use hom_out_of_cosections");
  Cosheaf ac = a;
  ClopenSet uc = u;
  auto memo = std::make_shared<GcMemo>();
  auto gc = [ac, uc, memo](int j) {
    return gc_at(memo, j, [&] { return restrict_over(ac, uc, uc.level + j).family; });
  };
  return DChain([gc](int j) { return gc(j).total; },
                [ac, uc, gc](int j) {
                  FamMor rs = restricted_step(ac, uc, uc.level + j);
                  return global_cosections_map(rs, gc(j + 1), gc(j));
                },
                shifted_decl(ac.chain().decl(), uc.level));
}

DChain global_cosections_chain(const Cosheaf& a) {
  return cosections(a, whole_space(a.base(), 0));
}

DChain costalk(const Cosheaf& a, const PointThread& x) {
  if (!x.space().same_impl(a.base())) throw ShapeError("costalk: thread/base mismatch");
  Cosheaf ac = a;
  PointThread xc = x;
  return DChain([ac, xc](int n) { return ac.level(n).fibre(xc.at(n)); },
                [ac, xc](int n) {
                  FamMor st = ac.step(n);
                  int cell = xc.at(n + 1);
                  if (st.base_at(cell) != xc.at(n))
                    throw ShapeError("costalk: chain base does not follow the thread at level " +
                                     std::to_string(n));
                  return st.fibre_map(cell);
                },
                ac.chain().decl());
}

HomOutClasses hom_out_of_cosections(const Cosheaf& a, const ClopenSet& u, const FinObj& d,
                                    int truncation) {
  if (truncation < 0) throw ShapeError("hom_out_of_cosections: negative truncation");
  HomOutClasses out;
  out.level = truncation;
  RestrictedLevel top = restrict_over(a, u, u.level + truncation);
  out.cells = top.cells;
  out.reps = hom_out(top.family, d);
  out.birth.assign(out.reps.size(), truncation);
  // pushforward of tuples from lower levels marks birth levels
  std::vector<FamMor> steps;
  for (int k = 0; k < truncation; ++k) steps.push_back(restricted_step(a, u, u.level + k));
  for (int j = 0; j < truncation; ++j) {
    RestrictedLevel lvl = restrict_over(a, u, u.level + j);
    for (auto& tup : hom_out(lvl.family, d)) {
      std::vector<FinMor> cur = std::move(tup);
      for (int k = j; k < truncation; ++k) {
        const FamMor& st = steps[static_cast<size_t>(k)];
        std::vector<FinMor> next;
        next.reserve(static_cast<size_t>(st.dom.index_size()));
        for (int i = 0; i < st.dom.index_size(); ++i)
          next.push_back(compose(cur[static_cast<size_t>(st.base_at(i))], st.fibre_map(i)));
        cur = std::move(next);
      }
      for (size_t r = 0; r < out.reps.size(); ++r)
        if (out.reps[r] == cur && out.birth[r] > j) out.birth[r] = j;
    }
  }
  ChainDecl d2 = shifted_decl(a.chain().decl(), u.level);
  out.flag = (d2.constant_from && *d2.constant_from <= truncation) ? Flag::Exact : Flag::Truncated;
  return out;
}

PrecosheafFinite::PrecosheafFinite(Instance tag, int base_size, std::map<unsigned, FinObj> values,
                                   std::map<std::pair<unsigned, unsigned>, FinMor> connecting,
                                   bool validate)
    : tag_(tag), base_size_(base_size), values_(std::move(values)),
      connecting_(std::move(connecting)) {
  if (base_size_ < 0 || base_size_ > 16)
    throw ShapeError("PrecosheafFinite: base size out of range");
  unsigned full = (1u << base_size_) - 1u;
  for (unsigned mask = 0; mask <= full; ++mask)
    if (!values_.count(mask)) throw ShapeError("PrecosheafFinite: missing value for a subset");
  if (validate)
    if (auto err = check_functorial()) throw ShapeError("PrecosheafFinite: " + *err);
}

const FinObj& PrecosheafFinite::value(unsigned mask) const {
  auto it = values_.find(mask);
  if (it == values_.end()) throw ShapeError("PrecosheafFinite::value: unknown subset");
  return it->second;
}

const FinMor& PrecosheafFinite::connect(unsigned sub, unsigned super) const {
  auto it = connecting_.find({sub, super});
  if (it == connecting_.end()) throw ShapeError("PrecosheafFinite::connect: missing connecting map");
  return it->second;
}

std::optional<std::string> PrecosheafFinite::check_functorial() const {
  unsigned full = (1u << base_size_) - 1u;
  for (unsigned sub = 0; sub <= full; ++sub)
    for (unsigned super = sub; super <= full; ++super) {
      if ((sub & super) != sub) continue;
      auto it = connecting_.find({sub, super});
      if (it == connecting_.end())
        return "missing connecting map " + std::to_string(sub) + " <= " + std::to_string(super);
      const FinMor& m = it->second;
      if (!(m.dom() == value(sub)) || !(m.cod() == value(super)))
        return "connecting map endpoints mismatch";
      if (auto err = m.validate()) return "connecting map invalid: " + *err;
      if (sub == super && !(m == FinMor::identity(value(sub))))
        return "identity map is not the identity";
    }
  for (const auto& [key1, m1] : connecting_)
    for (const auto& [key2, m2] : connecting_) {
      if (key1.second != key2.first) continue;
      const FinMor& direct = connect(key1.first, key2.second);
      if (!(compose(m2, m1) == direct))
        return "composition fails for " + std::to_string(key1.first) + " <= " +
               std::to_string(key1.second) + " <= " + std::to_string(key2.second);
    }
  return std::nullopt;
}

CosheafifyResult cosheafify_finite(const PrecosheafFinite& p) {
  if (!coproduct_capable(p.tag()))
    throw CapabilityError("cosheafify_finite: coproduct-capable instances only");
  CosheafifyResult r;
  std::vector<FinObj> fibres;
  for (int x = 0; x < p.base_size(); ++x) fibres.push_back(p.value(1u << x));
  r.family = FamObj{p.tag(), std::move(fibres)};
  unsigned full = p.base_size() == 0 ? 0u : (1u << p.base_size()) - 1u;
  for (unsigned mask = 0; mask <= full; ++mask) {
    std::vector<int> members;
    for (int x = 0; x < p.base_size(); ++x)
      if (mask & (1u << x)) members.push_back(x);
    GlobalCosectionsResult gc = global_cosections(restrict_family(r.family, members));
    // counit: the singleton values map into P(U) along the inclusions
    std::vector<FinMor> legs;
    for (int x : members) legs.push_back(p.connect(1u << x, mask));
    FinMor counit = assemble_out_of_coproduct(gc, legs, p.value(mask));
    r.cosh_value.emplace(mask, std::move(gc));
    r.counit.emplace(mask, std::move(counit));
  }
  return r;
}

Cosheaf direct_image(const Cosheaf& a, std::function<FinMor(int)> g, const ProSpace& y) {
  if (!coproduct_capable(a.tag()))
    throw CapabilityError("direct_image: plain-group instance; use direct_image_formal");
  Cosheaf ac = a;
  ProSpace yc = y;
  auto gf = std::make_shared<std::function<FinMor(int)>>(std::move(g));
  auto cells_over = [ac, yc, gf](int n) {
    FinMor gn = (*gf)(n);
    if (gn.dom().size() != ac.level(n).index_size() || gn.cod().size() != yc.level(n).size())
      throw ShapeError("direct_image: level map endpoints mismatch at level " + std::to_string(n));
    std::vector<std::vector<int>> cells(static_cast<size_t>(yc.level(n).size()));
    for (int x = 0; x < gn.dom().size(); ++x) cells[static_cast<size_t>(gn(x))].push_back(x);
    return cells;
  };
  auto memo = std::make_shared<GcMemo>();
  auto gc_cell = [ac, cells_over, memo](int n, int ycell) {
    auto cells = cells_over(n);
    return gc_at(memo, n * 4096 + ycell, [&] {
      return restrict_family(ac.level(n), cells[static_cast<size_t>(ycell)]);
    });
  };
  auto level_fn = [ac, yc, gc_cell](int n) {
    std::vector<FinObj> fibres;
    for (int ycell = 0; ycell < yc.level(n).size(); ++ycell)
      fibres.push_back(gc_cell(n, ycell).total);
    return FamObj{ac.tag(), std::move(fibres)};
  };
  FamChain chain(
      level_fn,
      [ac, yc, cells_over, gc_cell, level_fn](int n) {
        FamObj dom_f = level_fn(n + 1), cod_f = level_fn(n);
        auto hi = cells_over(n + 1);
        auto lo = cells_over(n);
        FamMor st = ac.step(n);
        FinMor y_step = yc.step(n);
        const auto& ybase = y_step.table();
        std::vector<FinMor> maps;
        for (int ycell = 0; ycell < yc.level(n + 1).size(); ++ycell) {
          int target = ybase[static_cast<size_t>(ycell)];
          const auto& dom_cells = hi[static_cast<size_t>(ycell)];
          const auto& cod_cells = lo[static_cast<size_t>(target)];
          std::vector<int> pos(static_cast<size_t>(ac.level(n).index_size()), -1);
          for (int i = 0; i < static_cast<int>(cod_cells.size()); ++i)
            pos[static_cast<size_t>(cod_cells[static_cast<size_t>(i)])] = i;
          std::vector<int> rbase;
          std::vector<FinMor> rmaps;
          FamObj rdom = restrict_family(ac.level(n + 1), dom_cells);
          FamObj rcod = restrict_family(ac.level(n), cod_cells);
          for (int i = 0; i < static_cast<int>(dom_cells.size()); ++i) {
            int cell = dom_cells[static_cast<size_t>(i)];
            int p = pos[static_cast<size_t>(st.base_at(cell))];
            if (p < 0)
              throw ShapeError(
                  "direct_image: level maps do not commute with transitions at level " +
                  std::to_string(n));
            rbase.push_back(p);
            rmaps.push_back(st.fibre_map(cell));
          }
          FamMor restricted = fam_mor_unchecked(rdom, rcod, std::move(rbase), std::move(rmaps));
          maps.push_back(
              global_cosections_map(restricted, gc_cell(n + 1, ycell), gc_cell(n, target)));
        }
        return fam_mor_unchecked(dom_f, cod_f, ybase, std::move(maps));
      },
      ac.chain().decl());
  return Cosheaf(std::move(chain), yc, ac.tag());
}

FormalDirectImageLevel direct_image_formal(const Cosheaf& a, const FinMor& g_level, int level) {
  FamObj fam = a.level(level);
  if (g_level.dom().size() != fam.index_size())
    throw ShapeError("direct_image_formal: level map domain mismatch");
  FormalDirectImageLevel out;
  out.source = fam;
  out.cells.assign(static_cast<size_t>(g_level.cod().size()), {});
  for (int x = 0; x < fam.index_size(); ++x)
    out.cells[static_cast<size_t>(g_level(x))].push_back(x);
  return out;
}

FamObj inverse_image_finite_level(const FamObj& b, const std::vector<int>& g_table) {
  FamObj out{b.tag, {}};
  for (int v : g_table) {
    if (v < 0 || v >= b.index_size())
      throw ShapeError("inverse_image_finite_level: base value out of range");
    out.fibres.push_back(b.fibre(v));
  }
  return out;
}

CosheafMor::CosheafMor(Cosheaf dom, Cosheaf cod, std::function<FamMor(int)> level_fn)
    : dom_(std::move(dom)), cod_(std::move(cod)),
      mor_(dom_.chain(), cod_.chain(), std::move(level_fn)) {}

CosheafMor cosheaf_identity(const Cosheaf& a) {
  Cosheaf ac = a;
  return CosheafMor(a, a, [ac](int n) { return fam_identity(ac.level(n)); });
}

CosheafProductResult cosheaf_product(const Cosheaf& a, const Cosheaf& b) {
  if (a.tag() != b.tag()) throw ShapeError("cosheaf_product: mixed instance tags");
  Cosheaf ac = a, bc = b;
  FamChain chain(
      [ac, bc](int n) { return product(ac.level(n), bc.level(n)).obj; },
      [ac, bc](int n) {
        auto p_hi = product(ac.level(n + 1), bc.level(n + 1));
        auto p_lo = product(ac.level(n), bc.level(n));
        return pair_into_product(p_lo, compose(ac.step(n), p_hi.proj1),
                                 compose(bc.step(n), p_hi.proj2));
      });
  // base space: levelwise product of the bases
  ProSpace xa = a.base(), xb = b.base();
  DChain base(
      [xa, xb](int n) { return FinObj::set(xa.level(n).size() * xb.level(n).size()); },
      [xa, xb](int n) {
        int hi_a = xa.level(n + 1).size(), hi_b = xb.level(n + 1).size();
        int lo_b = xb.level(n).size();
        FinMor sa = xa.step(n), sb = xb.step(n);
        const auto& ta = sa.table();
        const auto& tb = sb.table();
        std::vector<int> t(static_cast<size_t>(hi_a) * hi_b);
        for (int i = 0; i < hi_a; ++i)
          for (int j = 0; j < hi_b; ++j)
            t[static_cast<size_t>(i * hi_b + j)] =
                ta[static_cast<size_t>(i)] * lo_b + tb[static_cast<size_t>(j)];
        return FinMor::unchecked(FinObj::set(hi_a * hi_b),
                                 FinObj::set(xa.level(n).size() * lo_b), std::move(t));
      });
  Cosheaf obj(chain, ProSpace(std::move(base), xa.surjective() && xb.surjective()), a.tag());
  CosheafMor proj1(obj, a, [ac, bc](int n) { return product(ac.level(n), bc.level(n)).proj1; });
  CosheafMor proj2(obj, b, [ac, bc](int n) { return product(ac.level(n), bc.level(n)).proj2; });
  return CosheafProductResult{std::move(obj), std::move(proj1), std::move(proj2)};
}

CosheafEqualizerResult cosheaf_equalizer(const CosheafMor& f, const CosheafMor& g) {
  if (!f.dom().chain().same_impl(g.dom().chain()) || !f.cod().chain().same_impl(g.cod().chain()))
    throw ShapeError("cosheaf_equalizer: not a strict parallel pair (re-present first)");
  Cosheaf a = f.dom();
  CosheafMor fc = f, gc = g;
  FamChain chain(
      [fc, gc](int n) { return equalizer(fc.at(n), gc.at(n)).obj; },
      [a, fc, gc](int n) {
        auto e_hi = equalizer(fc.at(n + 1), gc.at(n + 1));
        auto e_lo = equalizer(fc.at(n), gc.at(n));
        return FamCat::through_mono(compose(a.step(n), e_hi.mono), e_lo.mono);
      });
  Cosheaf obj = limit_of_chain(chain, false);
  CosheafMor mono(obj, a, [fc, gc](int n) { return equalizer(fc.at(n), gc.at(n)).mono; });
  return CosheafEqualizerResult{std::move(obj), std::move(mono)};
}

HomCosheafResult hom_cosheaf(const Cosheaf& a, const Cosheaf& b, int colim_level, int lim_level) {
  if (a.tag() != b.tag()) throw ShapeError("hom_cosheaf: mixed instance tags");
  HomCosheafResult r;
  r.colim_level = colim_level;
  r.lim_level = lim_level;
  r.reps = hom_set(a.level(colim_level), b.level(lim_level));
  r.birth.assign(r.reps.size(), colim_level);
  for (int i = 0; i < colim_level; ++i) {
    FamMor tr = a.chain().transition(colim_level, i);
    for (const auto& h : hom_set(a.level(i), b.level(lim_level))) {
      FamMor pushed = compose(h, tr);
      for (size_t k = 0; k < r.reps.size(); ++k)
        if (r.reps[k] == pushed && r.birth[k] > i) r.birth[k] = i;
    }
  }
  const auto& ca = a.chain().decl().constant_from;
  const auto& cb = b.chain().decl().constant_from;
  r.flag = (ca && *ca <= colim_level && cb && *cb <= lim_level) ? Flag::Exact : Flag::Truncated;
  return r;
}

EpiCertificate is_epi_cosheaf(const CosheafMor& m, int window) {
  EpiCertificate cert;
  cert.window = window;
  cert.epi = true;
  for (int n = 0; n <= window; ++n) {
    FamMor lm = m.at(n);
    LevelEpiReport rep;
    rep.level = n;
    std::vector<char> hit(static_cast<size_t>(lm.cod.index_size()), 0);
    for (int v : lm.base) hit[static_cast<size_t>(v)] = 1;
    rep.base_surjective = std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
    rep.epi = rep.base_surjective;
    for (int y = 0; y < lm.cod.index_size(); ++y) {
      rep.cod_fibre_sizes.push_back(lm.cod.fibre(y).size());
      std::vector<FinMor> over_y;
      for (int x = 0; x < lm.dom.index_size(); ++x)
        if (lm.base_at(x) == y) over_y.push_back(lm.fibre_map(x));
      if (over_y.empty()) {
        rep.joint_image_sizes.push_back(0);
        if (lm.cod.fibre(y).size() > 0) rep.epi = false;
        continue;
      }
      int sz = joint_image(over_y).sub().size();
      rep.joint_image_sizes.push_back(sz);
      if (sz != lm.cod.fibre(y).size()) rep.epi = false;
    }
    if (!rep.epi) cert.epi = false;
    cert.levels.push_back(std::move(rep));
  }
  return cert;
}

CosectionOracle::CosectionOracle(ProSpace base, Instance tag, DChain global,
                                 std::function<FinObj(int, int, int)> cell_level,
                                 std::function<FinMor(int, int, int)> cell_step,
                                 std::function<FinMor(int, int, int)> cell_to_global)
    : base_(std::move(base)), tag_(tag), global_(std::move(global)),
      cell_level_(std::move(cell_level)), cell_step_(std::move(cell_step)),
      cell_to_global_(std::move(cell_to_global)) {}

FinObj CosectionOracle::cell_level(int n, int x, int k) const {
  if (k < n) throw ShapeError("CosectionOracle::cell_level: k < n");
  return cell_level_(n, x, k);
}
FinMor CosectionOracle::cell_step(int n, int x, int k) const {
  if (k < n) throw ShapeError("CosectionOracle::cell_step: k < n");
  return cell_step_(n, x, k);
}
FinMor CosectionOracle::cell_to_global(int n, int x, int k) const {
  if (k < n) throw ShapeError("CosectionOracle::cell_to_global: k < n");
  return cell_to_global_(n, x, k);
}

CosectionOracle derive_oracle(const Cosheaf& a) {
  if (!coproduct_capable(a.tag()))
    throw CapabilityError("derive_oracle: coproduct-capable instances only");
  Cosheaf ac = a;
  DChain global = global_cosections_chain(a);
  auto cell_clopen = [ac](int n, int x) { return clopen(ac.base(), n, {x}); };
  auto cell_level = [ac, cell_clopen](int n, int x, int k) {
    return global_cosections(restrict_over(ac, cell_clopen(n, x), k).family).total;
  };
  auto cell_step = [ac, cell_clopen](int n, int x, int k) {
    ClopenSet u = cell_clopen(n, x);
    FamMor rs = restricted_step(ac, u, k);
    return global_cosections_map(rs, global_cosections(rs.dom), global_cosections(rs.cod));
  };
  auto cell_to_global = [ac, cell_clopen](int n, int x, int k) {
    RestrictedLevel rl = restrict_over(ac, cell_clopen(n, x), k);
    GlobalCosectionsResult gc_cell = global_cosections(rl.family);
    GlobalCosectionsResult gc_all = global_cosections(ac.level(k));
    std::vector<FinMor> legs;
    for (size_t i = 0; i < rl.cells.size(); ++i)
      legs.push_back(gc_all.coprojections[static_cast<size_t>(rl.cells[i])]);
    return assemble_out_of_coproduct(gc_cell, legs, gc_all.total);
  };
  return CosectionOracle(a.base(), a.tag(), std::move(global), cell_level, cell_step,
                         cell_to_global);
}

Cosheaf inv_decompose(const CosectionOracle& o, int window) {
  if (window < 0) throw ShapeError("inv_decompose: negative window");
  CosectionOracle oc = o;
  struct SubMemo {
    std::map<std::pair<int, int>, Subobject> memo;
    std::mutex mu;
  };
  auto memo = std::make_shared<SubMemo>();
  // image of C^{n,x}_{n+window} -> d_{n+window} -> d_n: the eventual image
  // of the cell's cosection chain in d_n within the window
  auto fibre_sub = [oc, window, memo](int n, int x) {
    {
      std::lock_guard<std::mutex> lk(memo->mu);
      auto it = memo->memo.find({n, x});
      if (it != memo->memo.end()) return it->second;
    }
    FinMor into_top = oc.cell_to_global(n, x, n + window);
    FinMor down = oc.global().transition(n + window, n);
    auto im = image_factor(compose(down, into_top));
    Subobject s{down.cod(), im.mono};
    std::lock_guard<std::mutex> lk(memo->mu);
    memo->memo.emplace(std::make_pair(n, x), s);
    return s;
  };
  auto level_fn = [oc, fibre_sub](int n) {
    std::vector<FinObj> fibres;
    for (int x = 0; x < oc.base().level(n).size(); ++x) fibres.push_back(fibre_sub(n, x).sub());
    return FamObj{oc.tag(), std::move(fibres)};
  };
  FamChain chain(
      level_fn,
      [oc, fibre_sub, level_fn](int n) {
        FamObj dom = level_fn(n + 1), cod = level_fn(n);
        FinMor b_step = oc.base().step(n);
        const auto& base = b_step.table();
        std::vector<FinMor> maps;
        for (int x = 0; x < dom.index_size(); ++x) {
          int y = base[static_cast<size_t>(x)];
          Subobject shi = fibre_sub(n + 1, x);
          Subobject slo = fibre_sub(n, y);
          // transport along the global transition, then factor through the
          // lower image; membership fails only on incoherent oracle data
          FinMor through = compose(oc.global().step(n), shi.inclusion);
          maps.push_back(factor_through_sub(slo, through));
        }
        return fam_mor_unchecked(dom, cod, base, std::move(maps));
      },
      oc.global().decl());
  return Cosheaf(chain, o.base(), o.tag());
}

}  // namespace procosh
