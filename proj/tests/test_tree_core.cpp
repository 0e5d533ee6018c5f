#include <doctest.h>

#include <algorithm>
#include <set>

#include "eft/family_tree.hpp"
#include "eft/rng.hpp"
#include "eft/samplers.hpp"
#include "eft/tree_enum.hpp"

using namespace eft;

namespace {

// path c <- b <- a (a's parent is b, b's parent is c).
FamilyTree three_path() {
  TreeBuilder b;
  const auto c = b.add_vertex(-1);
  const auto bb = b.add_vertex(c);
  const auto a = b.add_vertex(bb);
  b.set_root(a);
  b.set_valid_radius(3);
  FamilyTree t = b.take();
  return t;
}

FamilyTree complete_binary(std::int32_t depth) {
  TreeBuilder b;
  const auto root = b.add_vertex(-1);
  b.set_root(root);
  std::vector<std::int32_t> level{root};
  for (std::int32_t d = 0; d < depth; ++d) {
    std::vector<std::int32_t> next;
    for (std::int32_t v : level) {
      next.push_back(b.add_vertex(v));
      next.push_back(b.add_vertex(v));
    }
    level = std::move(next);
  }
  b.set_valid_radius(1 << 20);
  return b.take();
}

OffspringDistribution crit_pi() { return OffspringDistribution::parse("0:1/2,2:1/2"); }

}  // namespace

TEST_CASE("generation offset basics") {
  const FamilyTree t = three_path();
  CHECK(generation_offset(t, t.root, t.root) == 0);
  CHECK(generation_offset(t, 2, 1) == 1);   // parent of a
  CHECK(generation_offset(t, 2, 0) == 2);   // grandparent
  CHECK(generation_offset(t, 0, 2) == -2);
  CHECK(generation_offset(t, 1, 2) == -1);
}

TEST_CASE("generation offset cocycle on random trees") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const FamilyTree t = sample_egwt(crit_pi(), 6, 6, 4096, seed);
    Rng rng(seed + 99);
    for (int i = 0; i < 1000; ++i) {
      const auto v = static_cast<std::int32_t>(rng.below(t.size()));
      const auto w = static_cast<std::int32_t>(rng.below(t.size()));
      const auto z = static_cast<std::int32_t>(rng.below(t.size()));
      CHECK(generation_offset(t, v, w) + generation_offset(t, w, z) ==
            generation_offset(t, v, z));
      CHECK(generation_offset(t, v, w) == -generation_offset(t, w, v));
    }
  }
}

TEST_CASE("descendants_n") {
  const FamilyTree bin = complete_binary(2);
  CHECK(descendants_n(bin, bin.root, 0).verts == std::vector<std::int32_t>{bin.root});
  CHECK(descendants_n(bin, bin.root, 2).verts.size() == 4);
  CHECK(descendants_n(bin, bin.root, 2).complete);

  // Two generations of GW(0:1/2, 2:1/2) can only produce 0, 2 or 4.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const FamilyTree t = sample_gwt(crit_pi(), 4096, 5, seed);
    const auto d2 = descendants_n(t, t.root, 2);
    REQUIRE(d2.complete);
    const auto n = d2.verts.size();
    CHECK((n == 0 || n == 2 || n == 4));
  }
}

TEST_CASE("descendants compose disjointly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FamilyTree t = sample_gwt(crit_pi(), 4096, 6, seed);
    const auto d3 = descendants_n(t, t.root, 3);
    std::vector<std::int32_t> unioned;
    for (std::int32_t w : descendants_n(t, t.root, 1).verts) {
      const auto part = descendants_n(t, w, 2);
      unioned.insert(unioned.end(), part.verts.begin(), part.verts.end());
    }
    std::set<std::int32_t> seen(unioned.begin(), unioned.end());
    CHECK(seen.size() == unioned.size());  // disjoint
    std::set<std::int32_t> expect(d3.verts.begin(), d3.verts.end());
    CHECK(seen == expect);
  }
}

TEST_CASE("generation members") {
  // Degenerate pi(1) = 1: the window is a path, |L_n| = 1.
  const OffspringDistribution path = OffspringDistribution::parse("1:1");
  const FamilyTree p = sample_egwt(path, 6, 6, 256, 3);
  for (std::int32_t n = 0; n <= 3; ++n) {
    const auto gen = generation_members(p, p.root, n);
    REQUIRE(gen.valid);
    CHECK(gen.verts.size() == 1);
  }

  // Canopy with d = 2: a root in layer 0 has |L_1| = 2.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const FamilyTree c = sample_canopy(2, 2.0, 4, seed);
    if (c.vtype[c.root] != 0) continue;
    const auto gen = generation_members(c, c.root, 1);
    REQUIRE(gen.valid);
    CHECK(gen.verts.size() == 2);
  }

  const FamilyTree t = sample_egwt(crit_pi(), 4, 4, 4096, 11);
  CHECK(generation_members(t, t.root, 0).verts == std::vector<std::int32_t>{t.root});
  // Beyond the window: invalid.
  CHECK_FALSE(generation_members(t, t.root, 5).valid);
}

TEST_CASE("canonical codes are relabeling invariant") {
  Rng rng(7);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const FamilyTree t = sample_egwt(crit_pi(), 4, 4, 4096, seed);
    std::vector<std::int32_t> perm(t.size());
    for (std::int32_t i = 0; i < t.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    const FamilyTree r = relabel(t, perm);
    CHECK(canonicalize(t, 3) == canonicalize(r, 3));
    CHECK(canonical_code_full(t) == canonical_code_full(r));
  }
}

TEST_CASE("canonical code basics") {
  TreeBuilder single;
  single.set_root(single.add_vertex(-1));
  FamilyTree one = single.take();
  one.valid_radius = 1;
  CHECK(canonicalize(one, 0) == canonicalize(one, 0));

  // Unordered: (leaf, cherry) under the root equals (cherry, leaf).
  const auto build = [](bool cherry_first) {
    TreeBuilder b;
    const auto root = b.add_vertex(-1);
    b.set_root(root);
    if (cherry_first) {
      const auto cherry = b.add_vertex(root);
      b.add_vertex(cherry);
      b.add_vertex(cherry);
      b.add_vertex(root);
    } else {
      b.add_vertex(root);
      const auto cherry = b.add_vertex(root);
      b.add_vertex(cherry);
      b.add_vertex(cherry);
    }
    FamilyTree t = b.take();
    t.valid_radius = 8;
    return t;
  };
  CHECK(canonical_code_full(build(true)) == canonical_code_full(build(false)));
  CHECK(canonical_code_full(build(true), /*ordered=*/true) !=
        canonical_code_full(build(false), /*ordered=*/true));
}

TEST_CASE("serialization round trip") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FamilyTree t = sample_egwt(crit_pi(), 5, 5, 4096, seed);
    const std::string text = serialize(t);
    const FamilyTree back = deserialize(text);
    CHECK(serialize(back) == text);
    CHECK(back.root == t.root);
    CHECK(back.valid_radius == t.valid_radius);
    CHECK(canonical_code_full(back, true) == canonical_code_full(t, true));
  }
}

TEST_CASE("validate rejects broken trees") {
  FamilyTree t;
  t.parent = {-1, 0, 0};
  t.children = {{1, 2}, {}, {}};
  t.boundary = {0, 0, 0};
  t.root = 0;
  CHECK_NOTHROW(validate(t));
  FamilyTree two_tops = t;
  two_tops.parent[2] = -1;
  two_tops.children[0] = {1};
  CHECK_THROWS(validate(two_tops));
  FamilyTree bad_children = t;
  bad_children.children[0] = {1};
  CHECK_THROWS(validate(bad_children));
}

TEST_CASE("prune keeps the old side and cuts the young side") {
  // Regular 3-ary window: after prune(t, 0) the root is a leaf but keeps its
  // full ancestry; after prune(t, 1) the root keeps children, grandchildren
  // are gone.
  const OffspringDistribution reg = OffspringDistribution::parse("2:1");
  const FamilyTree t = sample_egwt(reg, 4, 4, 1 << 16, 5);
  const FamilyTree p0 = prune(t, 0);
  CHECK_NOTHROW(validate(p0));
  CHECK(p0.children[p0.root].empty());
  CHECK(ancestor(p0, p0.root, 4).has_value());
  const FamilyTree p1 = prune(t, 1);
  CHECK(p1.children[p1.root].size() == 2);
  for (std::int32_t c : p1.children[p1.root]) CHECK(p1.children[c].empty());

  // Pruning twice at z then z' <= z equals pruning once at z'.
  const FamilyTree a = prune(prune(t, 2), 1);
  const FamilyTree b = prune(t, 1);
  CHECK(canonical_code_full(a, true) == canonical_code_full(b, true));
}

TEST_CASE("exhaustive rooted family trees") {
  // Hand-counted classes per size: 1, 2, 5, 13, 35 (cumulative 1,3,8,21,56).
  CHECK(enumerate_rooted_fts(1).size() == 1);
  CHECK(enumerate_rooted_fts(2).size() == 3);
  CHECK(enumerate_rooted_fts(3).size() == 8);
  CHECK(enumerate_rooted_fts(4).size() == 21);
  CHECK(enumerate_rooted_fts(5).size() == 56);
  for (const FamilyTree& t : enumerate_rooted_fts(4)) CHECK_NOTHROW(validate(t));
}
