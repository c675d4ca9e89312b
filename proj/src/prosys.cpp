#include "procosh/prosys.hpp"

namespace procosh {

const char* flag_name(Flag f) { return f == Flag::Exact ? "EXACT" : "TRUNCATED"; }
const char* soundness_name(Soundness s) {
  return s == Soundness::Exact ? "EXACT" : "HEURISTIC";
}

FamMor FamCat::through_mono(const FamMor& f, const FamMor& mono) {
  if (!(f.cod == mono.cod)) throw ShapeError("FamCat::through_mono: codomains differ");
  std::vector<int> pos(static_cast<size_t>(mono.cod.index_size()), -1);
  for (int y = 0; y < mono.dom.index_size(); ++y) pos[static_cast<size_t>(mono.base_at(y))] = y;
  std::vector<int> base(static_cast<size_t>(f.dom.index_size()));
  std::vector<FinMor> maps;
  for (int x = 0; x < f.dom.index_size(); ++x) {
    int y = pos[static_cast<size_t>(f.base_at(x))];
    if (y < 0)
      throw ShapeError("FamCat::through_mono: base image not contained in the subfamily");
    base[static_cast<size_t>(x)] = y;
    maps.push_back(factor_through_mono(f.fibre_map(x), mono.fibre_map(y)));
  }
  return fam_mor_unchecked(f.dom, mono.dom, std::move(base), std::move(maps));
}

HomToFiniteResult hom_to_finite(const DChain& chain, const FinObj& d, int truncation) {
  if (truncation < 0) throw ShapeError("hom_to_finite: negative truncation");
  HomToFiniteResult r;
  r.level = truncation;
  r.reps = hom_set(chain.level(truncation), d);
  r.birth.assign(r.reps.size(), truncation);
  // pushforward of every earlier hom set marks the birth level of its class
  for (int i = 0; i < truncation; ++i) {
    FinMor tr = chain.transition(truncation, i);
    for (const auto& h : hom_set(chain.level(i), d)) {
      FinMor pushed = compose(h, tr);
      for (size_t k = 0; k < r.reps.size(); ++k)
        if (r.reps[k] == pushed && r.birth[k] > i) r.birth[k] = i;
    }
  }
  const auto& cf = chain.decl().constant_from;
  r.flag = (cf && *cf <= truncation) ? Flag::Exact : Flag::Truncated;
  return r;
}

}  // namespace procosh
