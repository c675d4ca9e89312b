#pragma once

#include <string>

#include "json.hpp"
#include "procosh/bundle.hpp"
#include "procosh/cosheaf.hpp"

// JSON encodings of the core types and the fixture descriptor language.
// Field names are fixed by the schema files under schemas/.

namespace procosh {

using Json = nlohmann::json;

Json to_json(const FinObj& o);
FinObj fin_obj_from_json(const Json& j, bool checked = true);

Json to_json(const FinMor& m);
FinMor fin_mor_from_json(const Json& j, bool checked = true);

Json to_json(const FamObj& a);
FamObj fam_obj_from_json(const Json& j, bool checked = true);

Json to_json(const FamMor& m);
FamMor fam_mor_from_json(const Json& j, bool checked = true);

// space descriptors: {"kind": "cantor" | "one-point" | "finite" | "levels"}
Json space_descriptor(const ProSpace& x, int truncation);  // explicit-levels form
ProSpace space_from_json(const Json& j);

// cosheaf descriptors: {"kind": "constant" | "skyscraper" | "one-point-sum" |
// "one-point-product" | "levels"}
Json cosheaf_descriptor(const Cosheaf& a, int truncation);  // explicit-levels form
Cosheaf cosheaf_from_json(const Json& j);

// bundle descriptors: explicit levels with projection tables
Json bundle_descriptor(const ProBundle& b, int truncation);
ProBundle bundle_from_json(const Json& j);

// point threads: {"space": descriptor, "prefix": [...], "extend": "constant"?}
PointThread thread_from_json(const Json& j, const ProSpace& space);

PrecosheafFinite precosheaf_from_json(const Json& j);
Json precosheaf_descriptor(const PrecosheafFinite& p);

}  // namespace procosh
