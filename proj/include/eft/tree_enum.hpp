#pragma once

#include <cstdint>
#include <vector>

#include "eft/family_tree.hpp"

namespace eft {

// All isomorphism classes of rooted family trees with up to max_vertices
// vertices (a finite directed tree with one parentless top plus a choice of
// root anywhere, unordered children). One representative per class.
// Exhaustive supports for the exact sigma tests come from here.
std::vector<FamilyTree> enumerate_rooted_fts(std::int32_t max_vertices);

}  // namespace eft
