#include "eft/tree_enum.hpp"

#include <set>
#include <string>

namespace eft {

std::vector<FamilyTree> enumerate_rooted_fts(std::int32_t max_vertices) {
  std::vector<FamilyTree> out;
  std::set<std::string> seen;
  for (std::int32_t n = 1; n <= max_vertices; ++n) {
    // Every labeled tree on {0..n-1} with parent[i] < i covers every shape;
    // roots range over all vertices; codes dedupe the classes.
    std::vector<std::int32_t> parent(n, -1);
    const auto emit = [&] {
      FamilyTree t;
      t.parent = parent;
      t.children.assign(n, {});
      t.boundary.assign(n, 0);
      for (std::int32_t v = 1; v < n; ++v) t.children[parent[v]].push_back(v);
      t.valid_radius = n;
      for (std::int32_t r = 0; r < n; ++r) {
        t.root = r;
        const std::string code = canonical_code_full(t);
        if (seen.insert(code).second) out.push_back(t);
      }
    };
    const auto rec = [&](auto&& self, std::int32_t v) -> void {
      if (v == n) {
        emit();
        return;
      }
      for (std::int32_t p = 0; p < v; ++p) {
        parent[v] = p;
        self(self, v + 1);
      }
    };
    rec(rec, 1);
  }
  return out;
}

}  // namespace eft
