#pragma once

#include <string>

#include "procosh/bundle.hpp"
#include "procosh/cosheaf.hpp"

namespace procosh {

// layered digraphs of truncated level diagrams; one node per level element,
// edges along transitions
std::string space_to_dot(const ProSpace& x, int truncation);
// same, with fibre annotations per cell
std::string cosheaf_to_dot(const Cosheaf& a, int truncation);
// total and base rows with projection edges
std::string bundle_to_dot(const ProBundle& b, int truncation);

}  // namespace procosh
