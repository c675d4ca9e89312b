#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "procosh/fam.hpp"
#include "procosh/fincat.hpp"

// Lazily generated, memoized inverse systems over the natural-number chain,
// valued in an effective category given by a traits struct. Oracles must be
// pure; memo stores are guarded so concurrent reads are observationally pure.

namespace procosh {

// Declared analysis bounds. Neither is checkable from finite data; they are
// trusted inputs and every derived result carries an EXACT/TRUNCATED or
// EXACT/HEURISTIC flag accordingly.
struct ChainDecl {
  // images Img(trans(j+k -> j)) stabilize for k >= this bound
  std::optional<int> stabilization_bound;
  // transitions at levels >= this bound are isomorphisms
  std::optional<int> constant_from;
};

enum class Flag { Exact, Truncated };
enum class Soundness { Exact, Heuristic };

const char* flag_name(Flag f);
const char* soundness_name(Soundness s);

// Category traits for D = (FinSet | FinAb | FinGrp).
struct DCat {
  using Obj = FinObj;
  using Mor = FinMor;
  static const Obj& dom(const Mor& m) { return m.dom(); }
  static const Obj& cod(const Mor& m) { return m.cod(); }
  static Mor id(const Obj& a) { return FinMor::identity(a); }
  static Mor comp(const Mor& g, const Mor& f) { return compose(g, f); }
  static std::pair<Mor, Mor> image(const Mor& m) {
    auto im = image_factor(m);
    return {im.repi, im.mono};
  }
  static Mor through_mono(const Mor& f, const Mor& mono) { return factor_through_mono(f, mono); }
  static bool epi(const Mor& m) { return is_epi(m); }
};

// Category traits for Fam(D).
struct FamCat {
  using Obj = FamObj;
  using Mor = FamMor;
  static const Obj& dom(const Mor& m) { return m.dom; }
  static const Obj& cod(const Mor& m) { return m.cod; }
  static Mor id(const Obj& a) { return fam_identity(a); }
  static Mor comp(const Mor& g, const Mor& f) { return compose(g, f); }
  static std::pair<Mor, Mor> image(const Mor& m) {
    auto im = image_factor(m);
    return {im.repi, im.mono};
  }
  static Mor through_mono(const Mor& f, const Mor& mono);
  static bool epi(const Mor& m) { return is_epi(m); }
};

template <class Cat>
class Chain {
 public:
  using Obj = typename Cat::Obj;
  using Mor = typename Cat::Mor;

  Chain() = default;
  Chain(std::function<Obj(int)> level_fn, std::function<Mor(int)> step_fn, ChainDecl decl = {})
      : impl_(std::make_shared<Impl>(std::move(level_fn), std::move(step_fn), decl)) {}

  static Chain constant(Obj obj) {
    ChainDecl d;
    d.stabilization_bound = 0;
    d.constant_from = 0;
    return Chain([obj](int) { return obj; }, [obj](int) { return Cat::id(obj); }, d);
  }

  bool valid() const { return impl_ != nullptr; }

  Obj level(int n) const {
    require(n >= 0, "Chain::level: negative level");
    std::lock_guard<std::mutex> lk(impl_->mu);
    auto it = impl_->levels.find(n);
    if (it != impl_->levels.end()) return it->second;
    Obj o = impl_->level_fn(n);
    impl_->levels.emplace(n, o);
    return o;
  }

  // transition level(n+1) -> level(n)
  Mor step(int n) const {
    require(n >= 0, "Chain::step: negative level");
    {
      std::lock_guard<std::mutex> lk(impl_->mu);
      auto it = impl_->steps.find(n);
      if (it != impl_->steps.end()) return it->second;
    }
    Mor m = impl_->step_fn(n);
    if (!(Cat::dom(m) == level(n + 1)) || !(Cat::cod(m) == level(n)))
      throw ShapeError("Chain::step: transition endpoints do not match the levels");
    std::lock_guard<std::mutex> lk(impl_->mu);
    impl_->steps.emplace(n, m);
    return m;
  }

  // composite transition level(m) -> level(n), m >= n; identity when m == n
  Mor transition(int m, int n) const {
    require(m >= n, "Chain::transition: m < n");
    if (m == n) return Cat::id(level(n));
    {
      std::lock_guard<std::mutex> lk(impl_->mu);
      auto it = impl_->composites.find({m, n});
      if (it != impl_->composites.end()) return it->second;
    }
    Mor acc = step(n);
    for (int k = n + 1; k < m; ++k) acc = Cat::comp(acc, step(k));
    std::lock_guard<std::mutex> lk(impl_->mu);
    impl_->composites.emplace(std::make_pair(m, n), acc);
    return acc;
  }

  const ChainDecl& decl() const { return impl_->decl; }
  bool same_impl(const Chain& other) const { return impl_ == other.impl_; }

 private:
  static void require(bool cond, const char* msg) {
    if (!cond) throw ShapeError(msg);
  }
  struct Impl {
    Impl(std::function<Obj(int)> lf, std::function<Mor(int)> sf, ChainDecl d)
        : level_fn(std::move(lf)), step_fn(std::move(sf)), decl(d) {}
    std::function<Obj(int)> level_fn;
    std::function<Mor(int)> step_fn;
    ChainDecl decl;
    std::map<int, Obj> levels;
    std::map<int, Mor> steps;
    std::map<std::pair<int, int>, Mor> composites;
    mutable std::mutex mu;
  };
  std::shared_ptr<Impl> impl_;
};

using DChain = Chain<DCat>;
using FamChain = Chain<FamCat>;

// Strict chain-level morphism; level maps must commute with both transition
// oracles (checked up to a window on demand).
template <class Cat>
class ChainMor {
 public:
  using Mor = typename Cat::Mor;
  ChainMor() = default;
  ChainMor(Chain<Cat> dom, Chain<Cat> cod, std::function<Mor(int)> level_fn)
      : dom_(std::move(dom)), cod_(std::move(cod)),
        impl_(std::make_shared<Impl>(std::move(level_fn))) {}

  const Chain<Cat>& dom() const { return dom_; }
  const Chain<Cat>& cod() const { return cod_; }

  Mor at(int n) const {
    std::lock_guard<std::mutex> lk(impl_->mu);
    auto it = impl_->memo.find(n);
    if (it != impl_->memo.end()) return it->second;
    Mor m = impl_->level_fn(n);
    if (!(Cat::dom(m) == dom_.level(n)) || !(Cat::cod(m) == cod_.level(n)))
      throw ShapeError("ChainMor: level map endpoints do not match the chains");
    impl_->memo.emplace(n, m);
    return m;
  }

  // nullopt when all commutation squares hold for levels 0..upto-1
  std::optional<int> first_noncommuting_level(int upto) const {
    for (int n = 0; n < upto; ++n) {
      auto lhs = Cat::comp(at(n), dom_.step(n));
      auto rhs = Cat::comp(cod_.step(n), at(n + 1));
      if (!(lhs == rhs)) return n;
    }
    return std::nullopt;
  }

 private:
  struct Impl {
    explicit Impl(std::function<Mor(int)> lf) : level_fn(std::move(lf)) {}
    std::function<Mor(int)> level_fn;
    std::map<int, Mor> memo;
    mutable std::mutex mu;
  };
  Chain<Cat> dom_, cod_;
  std::shared_ptr<Impl> impl_;
};

using DChainMor = ChainMor<DCat>;
using FamChainMor = ChainMor<FamCat>;

// Materialized finite window of a chain.
template <class Cat>
struct Truncation {
  std::vector<typename Cat::Obj> levels;  // 0..N
  std::vector<typename Cat::Mor> steps;   // steps[n]: levels[n+1] -> levels[n]
};

template <class Cat>
Truncation<Cat> truncate(const Chain<Cat>& chain, int upto) {
  Truncation<Cat> t;
  for (int n = 0; n <= upto; ++n) t.levels.push_back(chain.level(n));
  for (int n = 0; n < upto; ++n) t.steps.push_back(chain.step(n));
  return t;
}

// Level-indexed functorial transform of a chain.
template <class CatOut, class CatIn>
Chain<CatOut> map_chain(const Chain<CatIn>& in,
                        std::function<typename CatOut::Obj(int, const typename CatIn::Obj&)> obj_fn,
                        std::function<typename CatOut::Mor(int, const typename CatIn::Mor&)> mor_fn,
                        ChainDecl decl) {
  auto of = std::make_shared<std::function<typename CatOut::Obj(int, const typename CatIn::Obj&)>>(
      std::move(obj_fn));
  auto mf = std::make_shared<std::function<typename CatOut::Mor(int, const typename CatIn::Mor&)>>(
      std::move(mor_fn));
  return Chain<CatOut>([in, of](int n) { return (*of)(n, in.level(n)); },
                       [in, mf](int n) { return (*mf)(n, in.step(n)); }, decl);
}

template <class Cat>
struct Normalized {
  Chain<Cat> chain;
  // mono embeddings normalized level(j) -> original level(j)
  ChainMor<Cat> embed;
  Soundness soundness;  // Exact when the declared stabilization bound <= lookahead
  int lookahead;
};

// Mittag-Leffler normalization: replaces level j by Img(trans(j+lookahead -> j)).
// Within the sound window the restricted transitions are epic.
template <class Cat>
Normalized<Cat> eventual_image_normalize(const Chain<Cat>& chain, int lookahead) {
  if (lookahead < 0) throw ShapeError("eventual_image_normalize: negative lookahead");
  // share the per-level image factorizations between the level and step oracles
  auto monos = std::make_shared<std::map<int, typename Cat::Mor>>();
  auto mono_mu = std::make_shared<std::mutex>();
  auto mono_at = [chain, lookahead, monos, mono_mu](int j) {
    {
      std::lock_guard<std::mutex> lk(*mono_mu);
      auto it = monos->find(j);
      if (it != monos->end()) return it->second;
    }
    auto im = Cat::image(chain.transition(j + lookahead, j));
    std::lock_guard<std::mutex> lk(*mono_mu);
    monos->emplace(j, im.second);
    return im.second;
  };
  ChainDecl decl = chain.decl();
  Soundness sound = (decl.stabilization_bound && *decl.stabilization_bound <= lookahead)
                        ? Soundness::Exact
                        : Soundness::Heuristic;
  if (sound == Soundness::Exact) decl.stabilization_bound = 0;
  Chain<Cat> out(
      [mono_at](int j) { return Cat::dom(mono_at(j)); },
      [chain, mono_at](int j) {
        // restriction of step(j) to the images; always factors since the
        // image chain is decreasing
        auto into_orig = Cat::comp(chain.step(j), mono_at(j + 1));
        return Cat::through_mono(into_orig, mono_at(j));
      },
      decl);
  ChainMor<Cat> embed(out, chain, [mono_at](int j) { return mono_at(j); });
  return Normalized<Cat>{std::move(out), std::move(embed), sound, lookahead};
}

// colim_i Hom(level(i), d) truncated at level N: every class has a unique
// representative in Hom(level(N), d); birth[k] is the smallest level whose
// pushforward produces reps[k].
struct HomToFiniteResult {
  int level = 0;
  std::vector<FinMor> reps;
  std::vector<int> birth;
  Flag flag = Flag::Truncated;
};

HomToFiniteResult hom_to_finite(const DChain& chain, const FinObj& d, int truncation);

}  // namespace procosh
