#pragma once

// Dihedral polygons, chords, dissections and their dual trees.
//
// Conventions used throughout the library:
//   - the standard n-gon has vertices v_0..v_{n-1} in dihedral order,
//   - side i joins v_i and v_{i+1 mod n},
//   - a chord is an unordered pair {a,b} of non-adjacent vertices, stored
//     with a < b,
//   - the global chord order is lexicographic on (a,b); all wedge signs
//     downstream refer to this single order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gravity {

inline int mod_n(int x, int n) { return ((x % n) + n) % n; }

inline bool vertices_adjacent(int n, int i, int j) {
  int d = mod_n(j - i, n);
  return d == 0 || d == 1 || d == n - 1;
}

struct Chord {
  int n = 0;  // size of the ambient polygon
  int a = 0;
  int b = 0;  // 0 <= a < b < n

  Chord() = default;
  Chord(int n_, int u, int v) : n(n_) {
    if (n < 3) throw std::invalid_argument("Chord: polygon needs n >= 3");
    if (u == v || u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("Chord: bad vertex indices");
    a = std::min(u, v);
    b = std::max(u, v);
    if (vertices_adjacent(n, a, b))
      throw std::invalid_argument("Chord: endpoints must be non-adjacent");
  }

  friend bool operator==(const Chord&, const Chord&) = default;
  friend auto operator<=>(const Chord&, const Chord&) = default;

  std::string str() const { return "{" + std::to_string(a) + "," + std::to_string(b) + "}"; }
};

// All chords of the n-gon in the global (lexicographic) order.
inline std::vector<Chord> all_chords(int n) {
  if (n < 3) throw std::invalid_argument("all_chords: n >= 3 required");
  std::vector<Chord> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 2; b < n; ++b) {
      if (a == 0 && b == n - 1) continue;
      out.emplace_back(n, a, b);
    }
  return out;
}

// Crossing predicate: exactly one endpoint of c2 lies strictly inside one of
// the two open arcs cut by c1.  Chords sharing an endpoint do not cross.
inline bool crosses(const Chord& c1, const Chord& c2) {
  if (c1.n != c2.n) throw std::invalid_argument("crosses: chords of different polygons");
  if (c1.a == c2.a || c1.a == c2.b || c1.b == c2.a || c1.b == c2.b) return false;
  auto inside = [&](int x) { return c1.a < x && x < c1.b; };
  return inside(c2.a) != inside(c2.b);
}

struct Dissection {
  int n = 0;
  std::vector<Chord> chords;  // sorted, pairwise non-crossing

  Dissection() = default;
  Dissection(int n_, std::vector<Chord> cs) : n(n_), chords(std::move(cs)) {
    std::sort(chords.begin(), chords.end());
    for (size_t i = 0; i < chords.size(); ++i) {
      if (chords[i].n != n) throw std::invalid_argument("Dissection: chord of wrong polygon");
      if (i > 0 && chords[i] == chords[i - 1])
        throw std::invalid_argument("Dissection: repeated chord");
      for (size_t j = i + 1; j < chords.size(); ++j)
        if (crosses(chords[i], chords[j]))
          throw std::invalid_argument("Dissection: crossing chords");
    }
  }

  int size() const { return static_cast<int>(chords.size()); }
  bool contains(const Chord& c) const {
    return std::binary_search(chords.begin(), chords.end(), c);
  }
  friend bool operator==(const Dissection&, const Dissection&) = default;
  friend auto operator<=>(const Dissection&, const Dissection&) = default;
};

// All dissections with k chords, in lexicographic order on chord-index sets.
inline std::vector<Dissection> dissections(int n, int k) {
  if (n < 3) throw std::invalid_argument("dissections: n >= 3 required");
  std::vector<Dissection> out;
  if (k < 0 || k > n - 3) return out;
  auto chords = all_chords(n);
  int m = static_cast<int>(chords.size());
  std::vector<std::uint64_t> crossMask(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && crosses(chords[i], chords[j])) crossMask[i] |= (1ULL << j);

  std::vector<int> chosen;
  std::uint64_t forbidden = 0;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(chosen.size()) == k) {
      std::vector<Chord> cs;
      cs.reserve(k);
      for (int idx : chosen) cs.push_back(chords[idx]);
      out.emplace_back(n, std::move(cs));
      return;
    }
    int need = k - static_cast<int>(chosen.size());
    for (int i = start; i + need <= m; ++i) {
      if (forbidden & (1ULL << i)) continue;
      chosen.push_back(i);
      std::uint64_t saved = forbidden;
      forbidden |= crossMask[i];
      self(self, i + 1);
      forbidden = saved;
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// One edge of a sub-polygon: either an original side or a chord of the parent.
struct SubEdge {
  bool isChord = false;
  int side = -1;  // valid when !isChord
  Chord chord;    // valid when isChord
};

// A face of the subdivision of the n-gon by a dissection.  Vertices are kept
// in ascending parent labels, which is also their dihedral order; edges[t]
// joins vertices[t] and vertices[(t+1) % size].
struct SubPolygon {
  int parentN = 0;
  std::vector<int> vertices;
  std::vector<SubEdge> edges;

  int size() const { return static_cast<int>(vertices.size()); }

  bool containsVertex(int v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
  }
  int localVertex(int v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v)
      throw std::invalid_argument("SubPolygon: vertex not in sub-polygon");
    return static_cast<int>(it - vertices.begin());
  }
  // Relabel a parent chord with both endpoints on this sub-polygon to the
  // standard |E|-gon.  The relabeling is strictly increasing on vertices, so
  // the global chord order is preserved.
  Chord toLocal(const Chord& c) const {
    if (c.n != parentN) throw std::invalid_argument("toLocal: wrong polygon size");
    return Chord(size(), localVertex(c.a), localVertex(c.b));
  }
  Chord toParent(const Chord& c) const {
    if (c.n != size()) throw std::invalid_argument("toParent: wrong polygon size");
    return Chord(parentN, vertices[c.a], vertices[c.b]);
  }
  bool isLocalChord(const Chord& parentChord) const {
    if (!containsVertex(parentChord.a) || !containsVertex(parentChord.b)) return false;
    return !vertices_adjacent(size(), localVertex(parentChord.a), localVertex(parentChord.b));
  }
  // Smallest original side contained, or -1 for chord-only sub-polygons.
  int minSide() const {
    int best = -1;
    for (const auto& e : edges)
      if (!e.isChord && (best == -1 || e.side < best)) best = e.side;
    return best;
  }
};

// Canonical order of the faces of a dissection: side-bearing sub-polygons
// first, sorted by their smallest original side (unique), then chord-only
// sub-polygons sorted by vertex lists.
inline bool subpolygon_less(const SubPolygon& x, const SubPolygon& y) {
  int sx = x.minSide(), sy = y.minSide();
  if ((sx >= 0) != (sy >= 0)) return sx >= 0;
  if (sx >= 0) return sx < sy;
  return x.vertices < y.vertices;
}

// Face tracing of the planar subdivision of the convex n-gon by the
// pairwise non-crossing chords of d.  Returns the k+1 interior faces in
// canonical order.
inline std::vector<SubPolygon> subpolygons(int n, const Dissection& d) {
  if (d.n != n) throw std::invalid_argument("subpolygons: dissection of wrong polygon");
  // adjacency: neighbors of v sorted by (u - v) mod n
  std::vector<std::vector<int>> adj(n);
  for (int v = 0; v < n; ++v) {
    adj[v].push_back(mod_n(v + 1, n));
    adj[v].push_back(mod_n(v - 1, n));
  }
  for (const auto& c : d.chords) {
    adj[c.a].push_back(c.b);
    adj[c.b].push_back(c.a);
  }
  for (int v = 0; v < n; ++v)
    std::sort(adj[v].begin(), adj[v].end(),
              [&](int x, int y) { return mod_n(x - v, n) < mod_n(y - v, n); });

  std::map<std::pair<int, int>, bool> used;
  for (int v = 0; v < n; ++v)
    for (int u : adj[v]) used[{v, u}] = false;

  std::vector<std::vector<int>> faces;
  for (auto& [edge, flag] : used) {
    if (flag) continue;
    std::vector<int> cycle;
    int v = edge.first, u = edge.second;
    while (!used[{v, u}]) {
      used[{v, u}] = true;
      cycle.push_back(u);
      // next edge of the face to the left of (v -> u): predecessor of v in
      // the cyclic neighbor order around u
      const auto& nb = adj[u];
      int pos = -1;
      for (size_t i = 0; i < nb.size(); ++i)
        if (nb[i] == v) { pos = static_cast<int>(i); break; }
      int w = nb[mod_n(pos - 1, static_cast<int>(nb.size()))];
      v = u;
      u = w;
    }
    faces.push_back(std::move(cycle));
  }

  std::vector<SubPolygon> out;
  for (auto& cyc : faces) {
    // the outer face is the unique one traversing some side clockwise
    bool outer = false;
    for (size_t i = 0; i < cyc.size(); ++i) {
      int x = cyc[i], y = cyc[(i + 1) % cyc.size()];
      if (mod_n(y - x, n) == n - 1) { outer = true; break; }
    }
    if (outer) continue;
    // rotate so that the minimal vertex comes first; interior faces are
    // traversed counterclockwise, i.e. in ascending vertex order
    auto mn = std::min_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), mn, cyc.end());
    SubPolygon p;
    p.parentN = n;
    p.vertices = cyc;
    for (size_t t = 0; t < cyc.size(); ++t) {
      int x = cyc[t], y = cyc[(t + 1) % cyc.size()];
      SubEdge e;
      if (mod_n(y - x, n) == 1) {
        e.isChord = false;
        e.side = x;
      } else {
        e.isChord = true;
        e.chord = Chord(n, x, y);
      }
      p.edges.push_back(e);
    }
    out.push_back(std::move(p));
  }
  if (out.size() != d.chords.size() + 1)
    throw std::logic_error("subpolygons: face count mismatch");
  std::sort(out.begin(), out.end(), subpolygon_less);
  return out;
}

// The subset of chords crossed by no other member of the set.
inline std::vector<Chord> residual_chords(const std::vector<Chord>& cs) {
  std::vector<Chord> out;
  for (size_t i = 0; i < cs.size(); ++i) {
    bool res = true;
    for (size_t j = 0; j < cs.size() && res; ++j)
      if (i != j && crosses(cs[i], cs[j])) res = false;
    if (res) out.push_back(cs[i]);
  }
  return out;
}

// Image of a chord under contraction of all sides outside keptSides, or
// nothing when the image degenerates.
inline std::optional<Chord> chord_contracts_to(const Chord& c, const std::vector<int>& keptSides) {
  std::vector<int> kept(keptSides);
  std::sort(kept.begin(), kept.end());
  int m = static_cast<int>(kept.size());
  if (m < 3) throw std::invalid_argument("chord_contracts_to: need at least 3 kept sides");
  for (int i = 0; i < m; ++i) {
    if (kept[i] < 0 || kept[i] >= c.n) throw std::invalid_argument("chord_contracts_to: bad side");
    if (i > 0 && kept[i] == kept[i - 1])
      throw std::invalid_argument("chord_contracts_to: repeated side");
  }
  // vertex v collapses onto class j where kept[j-1] < v <= kept[j] (cyclically)
  auto cls = [&](int v) {
    auto it = std::lower_bound(kept.begin(), kept.end(), v);
    if (it == kept.end()) return 0;
    return static_cast<int>(it - kept.begin());
  };
  int x = cls(c.a), y = cls(c.b);
  if (x == y || vertices_adjacent(m, x, y)) return std::nullopt;
  return Chord(m, x, y);
}

// ----------------------------------------------------------------------------
// Dual trees.

struct TreeEdge {
  bool internal = false;
  int label = -1;  // side index for external edges, edge id for internal ones
  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

// A tree embedded in the unoriented plane: per-vertex cyclically ordered edge
// lists, external edges labeled 0..n-1 in dihedral order.
struct DihedralTree {
  int n = 0;
  int internalEdges = 0;
  std::vector<std::vector<TreeEdge>> vertices;
};

inline DihedralTree dissection_to_tree(int n, const Dissection& d) {
  auto faces = subpolygons(n, d);
  std::map<std::pair<int, int>, int> chordId;
  for (int i = 0; i < d.size(); ++i) chordId[{d.chords[i].a, d.chords[i].b}] = i;
  DihedralTree t;
  t.n = n;
  t.internalEdges = d.size();
  for (const auto& f : faces) {
    std::vector<TreeEdge> es;
    for (const auto& e : f.edges) {
      TreeEdge te;
      if (e.isChord) {
        te.internal = true;
        te.label = chordId.at({e.chord.a, e.chord.b});
      } else {
        te.internal = false;
        te.label = e.side;
      }
      es.push_back(te);
    }
    t.vertices.push_back(std::move(es));
  }
  return t;
}

// Rebuild the dissection from a dihedral tree.  Rejects trees that are not
// dual to a dissection: degree-2 internal vertices, bad labels, arcs that are
// not cyclically contiguous.
inline Dissection tree_to_dissection(const DihedralTree& t) {
  int V = static_cast<int>(t.vertices.size());
  if (V == 0) throw std::invalid_argument("tree_to_dissection: empty tree");
  std::vector<int> sideAt(t.n, -1);
  std::vector<std::vector<int>> edgeAt(t.internalEdges);
  for (int v = 0; v < V; ++v) {
    if (t.vertices[v].size() < 3)
      throw std::invalid_argument("tree_to_dissection: vertex of arity < 3");
    for (const auto& e : t.vertices[v]) {
      if (e.internal) {
        if (e.label < 0 || e.label >= t.internalEdges)
          throw std::invalid_argument("tree_to_dissection: bad internal edge id");
        edgeAt[e.label].push_back(v);
      } else {
        if (e.label < 0 || e.label >= t.n || sideAt[e.label] != -1)
          throw std::invalid_argument("tree_to_dissection: bad external labels");
        sideAt[e.label] = v;
      }
    }
  }
  for (int s = 0; s < t.n; ++s)
    if (sideAt[s] == -1) throw std::invalid_argument("tree_to_dissection: missing external label");
  for (const auto& vs : edgeAt)
    if (vs.size() != 2 || vs[0] == vs[1])
      throw std::invalid_argument("tree_to_dissection: internal edge must join two vertices");
  if (V != t.internalEdges + 1)
    throw std::invalid_argument("tree_to_dissection: not a tree");

  // connectivity
  std::vector<std::vector<std::pair<int, int>>> nbr(V);  // (vertex, edge id)
  for (int e = 0; e < t.internalEdges; ++e) {
    nbr[edgeAt[e][0]].push_back({edgeAt[e][1], e});
    nbr[edgeAt[e][1]].push_back({edgeAt[e][0], e});
  }
  std::vector<char> seen(V, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [u, e] : nbr[v])
      if (!seen[u]) { seen[u] = 1; ++cnt; stack.push_back(u); }
  }
  if (cnt != V) throw std::invalid_argument("tree_to_dissection: disconnected");

  std::vector<Chord> chords;
  for (int e = 0; e < t.internalEdges; ++e) {
    // external labels on the side of edgeAt[e][0]
    std::vector<char> mark(V, 0);
    std::vector<int> st{edgeAt[e][0]};
    mark[edgeAt[e][0]] = 1;
    while (!st.empty()) {
      int v = st.back();
      st.pop_back();
      for (auto [u, e2] : nbr[v])
        if (e2 != e && !mark[u]) { mark[u] = 1; st.push_back(u); }
    }
    std::vector<char> inArc(t.n, 0);
    int arcLen = 0;
    for (int s = 0; s < t.n; ++s)
      if (mark[sideAt[s]]) { inArc[s] = 1; ++arcLen; }
    if (arcLen < 2 || arcLen > t.n - 2)
      throw std::invalid_argument("tree_to_dissection: component with fewer than 2 sides");
    // must be a contiguous cyclic arc a..b-1; the separating chord is {a,b}
    int a = -1;
    for (int s = 0; s < t.n; ++s)
      if (inArc[s] && !inArc[mod_n(s - 1, t.n)]) {
        if (a != -1) throw std::invalid_argument("tree_to_dissection: non-contiguous arc");
        a = s;
      }
    if (a == -1) throw std::invalid_argument("tree_to_dissection: degenerate arc");
    for (int i = 0; i < arcLen; ++i)
      if (!inArc[mod_n(a + i, t.n)])
        throw std::invalid_argument("tree_to_dissection: non-contiguous arc");
    chords.emplace_back(t.n, a, mod_n(a + arcLen, t.n));
  }
  return Dissection(t.n, std::move(chords));
}

// ----------------------------------------------------------------------------
// Admissible orderings (leaf pruning of the dual tree).

struct AdmissibleOrdering {
  std::vector<Chord> chords;  // chords[j] prunes polys[j]; polys.back() is the remainder
  std::vector<int> polys;     // indices into the canonical subpolygons(n, d) list
};

namespace detail {
// dual-tree adjacency on canonical face indices: per face, list of (chord
// index within d.chords, other face)
inline std::vector<std::vector<std::pair<int, int>>> dual_adjacency(
    const Dissection& d, const std::vector<SubPolygon>& faces) {
  std::vector<std::vector<std::pair<int, int>>> adj(faces.size());
  for (int ci = 0; ci < d.size(); ++ci) {
    std::vector<int> owners;
    for (size_t f = 0; f < faces.size(); ++f)
      for (const auto& e : faces[f].edges)
        if (e.isChord && e.chord == d.chords[ci]) owners.push_back(static_cast<int>(f));
    if (owners.size() != 2) throw std::logic_error("dual_adjacency: chord not shared by 2 faces");
    adj[owners[0]].push_back({ci, owners[1]});
    adj[owners[1]].push_back({ci, owners[0]});
  }
  return adj;
}
}  // namespace detail

// Deterministic admissible ordering: repeatedly prune the least-indexed leaf
// of the dual tree.  Removing chords[0..j] from the dual tree disconnects
// exactly polys[0..j-1].
inline AdmissibleOrdering admissible_ordering(int n, const Dissection& d) {
  if (d.size() == 0) throw std::invalid_argument("admissible_ordering: empty dissection");
  auto faces = subpolygons(n, d);
  auto adj = detail::dual_adjacency(d, faces);
  int F = static_cast<int>(faces.size());
  std::vector<int> degree(F, 0);
  std::vector<char> gone(F, 0);
  for (int f = 0; f < F; ++f) degree[f] = static_cast<int>(adj[f].size());
  std::vector<char> chordGone(d.size(), 0);
  AdmissibleOrdering ord;
  for (int step = 0; step + 1 < F; ++step) {
    int leaf = -1;
    for (int f = 0; f < F; ++f)
      if (!gone[f] && degree[f] == 1) { leaf = f; break; }
    if (leaf == -1) throw std::logic_error("admissible_ordering: no leaf found");
    int ci = -1, other = -1;
    for (auto [c, o] : adj[leaf])
      if (!chordGone[c]) { ci = c; other = o; break; }
    ord.chords.push_back(d.chords[ci]);
    ord.polys.push_back(leaf);
    gone[leaf] = 1;
    chordGone[ci] = 1;
    --degree[other];
    degree[leaf] = 0;
  }
  for (int f = 0; f < F; ++f)
    if (!gone[f]) ord.polys.push_back(f);
  return ord;
}

// All leaf-pruning orderings (test support).
inline std::vector<AdmissibleOrdering> all_admissible_orderings(int n, const Dissection& d) {
  if (d.size() == 0) throw std::invalid_argument("all_admissible_orderings: empty dissection");
  auto faces = subpolygons(n, d);
  auto adj = detail::dual_adjacency(d, faces);
  int F = static_cast<int>(faces.size());
  std::vector<AdmissibleOrdering> out;
  std::vector<int> degree(F);
  for (int f = 0; f < F; ++f) degree[f] = static_cast<int>(adj[f].size());
  std::vector<char> gone(F, 0), chordGone(d.size(), 0);
  AdmissibleOrdering cur;
  auto rec = [&](auto&& self, int remaining) -> void {
    if (remaining == 1) {
      AdmissibleOrdering full = cur;
      for (int f = 0; f < F; ++f)
        if (!gone[f]) full.polys.push_back(f);
      out.push_back(std::move(full));
      return;
    }
    for (int f = 0; f < F; ++f) {
      if (gone[f] || degree[f] != 1) continue;
      int ci = -1, other = -1;
      for (auto [c, o] : adj[f])
        if (!chordGone[c]) { ci = c; other = o; break; }
      cur.chords.push_back(d.chords[ci]);
      cur.polys.push_back(f);
      gone[f] = 1;
      chordGone[ci] = 1;
      --degree[other];
      self(self, remaining - 1);
      ++degree[other];
      gone[f] = 0;
      chordGone[ci] = 0;
      cur.chords.pop_back();
      cur.polys.pop_back();
    }
  };
  rec(rec, F);
  return out;
}

}  // namespace gravity
