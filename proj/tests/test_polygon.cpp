#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gravity/polygon.hpp"
#include "gravity/series.hpp"

using namespace gravity;

namespace {

// Independent crossing oracle: place vertex i at (i, i^2) on a parabola
// (convex position, no three collinear) and test proper segment
// intersection with exact integer orientation predicates.
bool crossing_oracle(const Chord& c1, const Chord& c2) {
  auto orient = [](int a, int b, int c) {
    long long ax = a, ay = 1LL * a * a, bx = b, by = 1LL * b * b, cx = c, cy = 1LL * c * c;
    long long v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    return (v > 0) - (v < 0);
  };
  int o1 = orient(c1.a, c1.b, c2.a), o2 = orient(c1.a, c1.b, c2.b);
  int o3 = orient(c2.a, c2.b, c1.a), o4 = orient(c2.a, c2.b, c1.b);
  return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

// brute-force dissection count: all k-subsets of chords, pairwise
// non-crossing per the oracle
long brute_force_dissections(int n, int k) {
  auto cs = all_chords(n);
  long count = 0;
  std::vector<int> idx;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(idx.size()) == k) {
      ++count;
      return;
    }
    for (int i = start; i < static_cast<int>(cs.size()); ++i) {
      bool ok = true;
      for (int j : idx)
        if (crossing_oracle(cs[j], cs[i])) { ok = false; break; }
      if (!ok) continue;
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
  return count;
}

// planar contraction of an internal tree edge (merges the two endpoint
// vertices, splicing their cyclic edge lists at the shared edge)
DihedralTree contract_edge(const DihedralTree& t, int edgeId) {
  DihedralTree out;
  out.n = t.n;
  out.internalEdges = t.internalEdges - 1;
  std::vector<int> owners;
  for (int v = 0; v < static_cast<int>(t.vertices.size()); ++v)
    for (const auto& e : t.vertices[v])
      if (e.internal && e.label == edgeId) owners.push_back(v);
  REQUIRE(owners.size() == 2);
  int u = owners[0], w = owners[1];
  auto relabel = [&](TreeEdge e) {
    if (e.internal && e.label > edgeId) --e.label;
    return e;
  };
  for (int v = 0; v < static_cast<int>(t.vertices.size()); ++v) {
    if (v == w) continue;
    if (v != u) {
      std::vector<TreeEdge> es;
      for (const auto& e : t.vertices[v]) es.push_back(relabel(e));
      out.vertices.push_back(std::move(es));
      continue;
    }
    // splice w's cyclic list (rotated to start after the shared edge) into u's
    auto posOf = [&](int vert) {
      for (size_t i = 0; i < t.vertices[vert].size(); ++i)
        if (t.vertices[vert][i].internal && t.vertices[vert][i].label == edgeId)
          return static_cast<int>(i);
      return -1;
    };
    int pu = posOf(u), pw = posOf(w);
    std::vector<TreeEdge> es;
    int su = static_cast<int>(t.vertices[u].size());
    int sw = static_cast<int>(t.vertices[w].size());
    for (int i = 1; i < su; ++i) es.push_back(relabel(t.vertices[u][(pu + i) % su]));
    for (int i = 1; i < sw; ++i) es.push_back(relabel(t.vertices[w][(pw + i) % sw]));
    out.vertices.push_back(std::move(es));
  }
  return out;
}

}  // namespace

TEST_CASE("chord enumeration") {
  CHECK(all_chords(3).empty());
  CHECK(all_chords(4).size() == 2);
  CHECK(all_chords(5).size() == 5);
  for (int n = 3; n <= 12; ++n)
    CHECK(static_cast<int>(all_chords(n).size()) == n * (n - 3) / 2);
  // global order is lexicographic
  auto cs = all_chords(6);
  CHECK(std::is_sorted(cs.begin(), cs.end()));
  CHECK_THROWS_AS(Chord(6, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Chord(6, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(Chord(6, 2, 2), std::invalid_argument);
}

TEST_CASE("crossing predicate") {
  CHECK_FALSE(crosses(Chord(6, 0, 2), Chord(6, 2, 4)));
  CHECK(crosses(Chord(6, 0, 3), Chord(6, 1, 4)));
  CHECK_FALSE(crosses(Chord(6, 0, 2), Chord(6, 3, 5)));
  CHECK_THROWS_AS(crosses(Chord(6, 0, 2), Chord(7, 0, 2)), std::invalid_argument);
  for (int n = 4; n <= 9; ++n) {
    auto cs = all_chords(n);
    for (const auto& c1 : cs)
      for (const auto& c2 : cs) {
        if (c1 == c2) continue;
        CHECK(crosses(c1, c2) == crossing_oracle(c1, c2));
        CHECK(crosses(c1, c2) == crosses(c2, c1));
      }
  }
}

TEST_CASE("dissection enumeration") {
  CHECK(dissections(3, 0).size() == 1);
  CHECK(dissections(5, 2).size() == 5);
  CHECK(dissections(6, 3).size() == 14);
  CHECK(dissections(6, 2).size() == 21);
  CHECK(dissections(6, 4).empty());
  for (int n = 4; n <= 8; ++n)
    for (int k = 0; k <= n - 3; ++k)
      CHECK(static_cast<long>(dissections(n, k).size()) == brute_force_dissections(n, k));
  // Cayley cross-check, n <= 10
  for (int n = 3; n <= 10; ++n)
    for (int k = 0; k <= n - 3; ++k)
      CHECK(Int(static_cast<long>(dissections(n, k).size())) == cayley_count(n, k));
}

TEST_CASE("sub-polygons") {
  {
    auto fs = subpolygons(5, Dissection(5, {}));
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].size() == 5);
  }
  {
    auto fs = subpolygons(5, Dissection(5, {Chord(5, 0, 2)}));
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].size() == 3);
    CHECK(fs[1].size() == 4);
  }
  {
    auto fs = subpolygons(6, Dissection(6, {Chord(6, 0, 2), Chord(6, 2, 4)}));
    REQUIRE(fs.size() == 3);
    CHECK(fs[0].size() == 3);
    CHECK(fs[1].size() == 3);
    CHECK(fs[2].size() == 4);
  }
  for (int n = 4; n <= 7; ++n)
    for (int k = 0; k <= n - 3; ++k)
      for (const auto& d : dissections(n, k)) {
        auto fs = subpolygons(n, d);
        REQUIRE(static_cast<int>(fs.size()) == k + 1);
        int total = 0;
        std::map<int, int> sideCount;
        std::map<std::pair<int, int>, int> chordCount;
        for (const auto& f : fs) {
          total += f.size();
          CHECK(f.size() >= 3);
          for (const auto& e : f.edges) {
            if (e.isChord) ++chordCount[{e.chord.a, e.chord.b}];
            else ++sideCount[e.side];
          }
        }
        CHECK(total == n + 2 * k);
        for (int s = 0; s < n; ++s) CHECK(sideCount[s] == 1);
        for (const auto& c : d.chords) CHECK(chordCount[{c.a, c.b}] == 2);
        // relabeling round-trips on every local chord
        for (const auto& f : fs) {
          for (int i = 0; i < f.size(); ++i) CHECK(f.localVertex(f.vertices[i]) == i);
          for (int i = 0; i < f.size(); ++i)
            for (int j = i + 2; j < f.size(); ++j) {
              if (i == 0 && j == f.size() - 1) continue;
              Chord lc(f.size(), i, j);
              CHECK(f.toLocal(f.toParent(lc)) == lc);
            }
        }
      }
}

TEST_CASE("dissection/tree bijection") {
  {
    auto t = dissection_to_tree(5, Dissection(5, {}));
    CHECK(t.vertices.size() == 1);
    CHECK(t.vertices[0].size() == 5);  // corolla
    CHECK(tree_to_dissection(t) == Dissection(5, {}));
  }
  {
    // pentagon: the 5 one-chord dissections give 5 distinct dihedral trees
    std::set<std::vector<std::pair<int, int>>> seen;
    for (const auto& d : dissections(5, 1)) {
      auto t = dissection_to_tree(5, d);
      CHECK(t.internalEdges == 1);
      auto back = tree_to_dissection(t);
      CHECK(back == d);
      std::vector<std::pair<int, int>> key;
      for (const auto& c : back.chords) key.push_back({c.a, c.b});
      seen.insert(key);
    }
    CHECK(seen.size() == 5);
  }
  {
    // hexagon triangulation: 4 vertices, all of degree 3
    Dissection d(6, {Chord(6, 0, 2), Chord(6, 2, 4), Chord(6, 0, 4)});
    auto t = dissection_to_tree(6, d);
    CHECK(t.vertices.size() == 4);
    for (const auto& v : t.vertices) CHECK(v.size() == 3);
  }
  for (int n = 4; n <= 8; ++n)
    for (int k = 0; k <= n - 3; ++k)
      for (const auto& d : dissections(n, k))
        CHECK(tree_to_dissection(dissection_to_tree(n, d)) == d);
  // rejects degree-2 internal vertices
  {
    DihedralTree bad;
    bad.n = 4;
    bad.internalEdges = 1;
    bad.vertices.resize(2);
    bad.vertices[0] = {{false, 0}, {false, 1}, {false, 2}, {false, 3}, {true, 0}};
    bad.vertices[1] = {{true, 0}};
    CHECK_THROWS_AS(tree_to_dissection(bad), std::invalid_argument);
  }
}

TEST_CASE("poset isomorphism: removing a chord contracts the dual edge") {
  for (int n = 4; n <= 7; ++n)
    for (int k = 1; k <= n - 3; ++k)
      for (const auto& d : dissections(n, k)) {
        auto t = dissection_to_tree(n, d);
        for (int ci = 0; ci < d.size(); ++ci) {
          std::vector<Chord> rest;
          for (int j = 0; j < d.size(); ++j)
            if (j != ci) rest.push_back(d.chords[j]);
          Dissection smaller(n, rest);
          auto contracted = contract_edge(t, ci);
          CHECK(tree_to_dissection(contracted) == smaller);
        }
      }
}

TEST_CASE("residual chords") {
  for (const auto& d : dissections(6, 2)) {
    auto res = residual_chords(d.chords);
    CHECK(res == d.chords);  // dissections are all-residual
  }
  CHECK(residual_chords({Chord(6, 0, 3), Chord(6, 1, 4)}).empty());
  // {0,3} crosses both others and {1,5} crosses it back: nothing is residual
  CHECK(residual_chords({Chord(6, 0, 3), Chord(6, 1, 4), Chord(6, 1, 5)}).empty());
  // brute-force comparison against the crossing oracle
  for (int n = 5; n <= 7; ++n) {
    auto cs = all_chords(n);
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Chord> set;
      for (const auto& c : cs)
        if (rng() % 3 == 0) set.push_back(c);
      auto got = residual_chords(set);
      std::vector<Chord> want;
      for (size_t i = 0; i < set.size(); ++i) {
        bool res = true;
        for (size_t j = 0; j < set.size(); ++j)
          if (i != j && crossing_oracle(set[i], set[j])) res = false;
        if (res) want.push_back(set[i]);
      }
      CHECK(got == want);
    }
  }
}

TEST_CASE("admissible orderings satisfy the prefix-disconnection property") {
  for (int n = 4; n <= 7; ++n)
    for (int k = 1; k <= n - 3; ++k)
      for (const auto& d : dissections(n, k)) {
        auto faces = subpolygons(n, d);
        auto ord = admissible_ordering(n, d);
        REQUIRE(static_cast<int>(ord.chords.size()) == k);
        REQUIRE(static_cast<int>(ord.polys.size()) == k + 1);
        // after deleting chords[0..j-1] from the dual tree, the isolated
        // vertices are exactly polys[0..j-1]
        for (int j = 1; j <= k; ++j) {
          std::set<std::pair<int, int>> removed;
          for (int i = 0; i < j; ++i) {
            const Chord& c = ord.chords[i];
            removed.insert({c.a, c.b});
          }
          // adjacency between faces through surviving chords
          std::vector<std::set<int>> adj(faces.size());
          for (const auto& c : d.chords) {
            if (removed.count({c.a, c.b})) continue;
            std::vector<int> owners;
            for (size_t f = 0; f < faces.size(); ++f)
              for (const auto& e : faces[f].edges)
                if (e.isChord && e.chord == c) owners.push_back(static_cast<int>(f));
            adj[owners[0]].insert(owners[1]);
            adj[owners[1]].insert(owners[0]);
          }
          std::set<int> isolated;
          for (size_t f = 0; f < faces.size(); ++f)
            if (adj[f].empty() && faces.size() > 1) isolated.insert(static_cast<int>(f));
          std::set<int> expect(ord.polys.begin(), ord.polys.begin() + j);
          // the rest must stay connected in one component
          if (j < k) {
            CHECK(isolated == expect);
          } else {
            // all chords removed: everything is isolated
            std::set<int> all;
            for (size_t f = 0; f < faces.size(); ++f) all.insert(static_cast<int>(f));
            CHECK(isolated == all);
          }
        }
      }
  // star-shaped dual tree: the chord-only center comes last
  Dissection star(6, {Chord(6, 0, 2), Chord(6, 2, 4), Chord(6, 0, 4)});
  auto faces = subpolygons(6, star);
  auto ord = admissible_ordering(6, star);
  CHECK(faces[ord.polys.back()].minSide() == -1);
}

TEST_CASE("chord contraction") {
  Chord c(6, 0, 3);
  std::vector<int> all{0, 1, 2, 3, 4, 5};
  CHECK(chord_contracts_to(c, all) == c);
  CHECK_FALSE(chord_contracts_to(Chord(6, 0, 4), {0, 1, 2, 3, 4}).has_value());
  auto im = chord_contracts_to(Chord(6, 0, 3), {0, 1, 2, 3, 4});
  REQUIRE(im.has_value());
  CHECK(*im == Chord(5, 0, 3));
}
