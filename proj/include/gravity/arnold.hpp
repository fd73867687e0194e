#pragma once

// The hyperplane-arrangement model of H^*(M_{0,n}).
//
// With the normalization (z_1,...,z_n) = (inf, 0, t_1,...,t_{n-3}, 1) the
// moduli space M_{0,n} is the complement in C^{n-3} of the affine arrangement
//   t_i = 0,  t_i = 1,  t_i = t_j.
// The cohomology algebra is computed through the cone of this arrangement:
// the cone is central, its Orlik-Solomon algebra has the classical
// no-broken-circuit basis, and the affine algebra is the quotient by the
// ideal generated by the infinity generator.  With the infinity hyperplane
// smallest in the order, that ideal is spanned by the nbc sets containing it,
// so the quotient has the infinity-free nbc sets as a basis and reduction is
// "straighten in the cone, then drop the terms supported at infinity".

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gravity/exact_linalg.hpp"
#include "gravity/polygon.hpp"

namespace gravity {

using Mask = std::uint64_t;

inline int mask_size(Mask m) { return __builtin_popcountll(m); }

inline std::vector<int> mask_to_list(Mask m) {
  std::vector<int> out;
  while (m) {
    int b = __builtin_ctzll(m);
    out.push_back(b);
    m &= m - 1;
  }
  return out;
}

inline Mask list_to_mask(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= (Mask(1) << i);
  return m;
}

struct HyperplaneInfo {
  enum Kind { Coord, CoordOne, Diff } kind = Coord;
  int i = 0, j = 0;      // 1-based variable indices
  std::string label;     // "t1", "t2-1", "t1-t3", ...
  std::vector<Int> vec;  // homogenized normal in (t_1..t_m, x_0) coordinates
};

// The M_{0,n} arrangement in dimension m = n-3.  Hyperplane order is fixed:
// t_i's, then t_i - 1's, then t_i - t_j's lexicographically.
class ModuliArrangement {
 public:
  explicit ModuliArrangement(int n) : n_(n), m_(n - 3) {
    if (n < 3) throw std::invalid_argument("ModuliArrangement: n >= 3 required");
    for (int i = 1; i <= m_; ++i) {
      HyperplaneInfo h;
      h.kind = HyperplaneInfo::Coord;
      h.i = i;
      h.label = "t" + std::to_string(i);
      h.vec.assign(m_ + 1, 0);
      h.vec[i - 1] = 1;
      hs_.push_back(std::move(h));
    }
    for (int i = 1; i <= m_; ++i) {
      HyperplaneInfo h;
      h.kind = HyperplaneInfo::CoordOne;
      h.i = i;
      h.label = "t" + std::to_string(i) + "-1";
      h.vec.assign(m_ + 1, 0);
      h.vec[i - 1] = 1;
      h.vec[m_] = -1;
      hs_.push_back(std::move(h));
    }
    for (int i = 1; i <= m_; ++i)
      for (int j = i + 1; j <= m_; ++j) {
        HyperplaneInfo h;
        h.kind = HyperplaneInfo::Diff;
        h.i = i;
        h.j = j;
        h.label = "t" + std::to_string(i) + "-t" + std::to_string(j);
        h.vec.assign(m_ + 1, 0);
        h.vec[i - 1] = 1;
        h.vec[j - 1] = -1;
        hs_.push_back(std::move(h));
      }
  }

  int n() const { return n_; }
  int dim() const { return m_; }
  int count() const { return static_cast<int>(hs_.size()); }
  const HyperplaneInfo& hyperplane(int h) const { return hs_.at(h); }

  // Hyperplane of z_a - z_b = 0 for paper marked-point indices 1 <= a,b <= n,
  // or nothing when the difference involves infinity or is constant.
  std::optional<int> index_of_difference(int a, int b) const {
    if (a < 1 || a > n_ || b < 1 || b > n_) throw std::invalid_argument("bad marked point");
    if (a == b) throw std::invalid_argument("index_of_difference: a == b");
    if (a == 1 || b == 1) return std::nullopt;  // z_1 = infinity
    // z_2 = 0, z_n = 1, z_{i+2} = t_i
    auto var = [&](int x) { return x == 2 ? 0 : (x == n_ ? -1 : x - 2); };  // 0 means the point 0, -1 means 1
    int va = var(a), vb = var(b);
    if (va == 0 && vb == 0) throw std::logic_error("duplicate marked point");
    if ((va == 0 && vb == -1) || (va == -1 && vb == 0)) return std::nullopt;  // 0 - 1 constant
    if (va == 0 || vb == 0) {
      int i = (va == 0) ? vb : va;  // t_i - 0
      return i - 1;
    }
    if (va == -1 || vb == -1) {
      int i = (va == -1) ? vb : va;  // t_i - 1
      return m_ + (i - 1);
    }
    int i = std::min(va, vb), j = std::max(va, vb);
    return 2 * m_ + (i - 1) * (2 * m_ - i) / 2 + (j - i - 1);
  }

 private:
  int n_, m_;
  std::vector<HyperplaneInfo> hs_;
};

// Element of the Orlik-Solomon algebra in nbc coordinates: sparse rational
// combination of infinity-free nbc sets (affine hyperplane index masks).
struct OSClass {
  int degree = 0;
  std::map<Mask, Rat> coeff;

  bool zero() const { return coeff.empty(); }
  int weight() const { return 2 * degree; }  // pure Tate weight annotation

  OSClass& operator+=(const OSClass& o) {
    if (!o.zero() && !zero() && degree != o.degree)
      throw std::invalid_argument("OSClass: degree mismatch");
    if (zero()) degree = o.degree;
    for (const auto& [m, v] : o.coeff) {
      auto it = coeff.find(m);
      if (it == coeff.end()) {
        coeff[m] = v;
      } else {
        it->second += v;
        if (it->second == 0) coeff.erase(it);
      }
    }
    return *this;
  }
  OSClass operator*(const Rat& s) const {
    OSClass r;
    r.degree = degree;
    if (s == 0) return r;
    for (const auto& [m, v] : coeff) r.coeff[m] = v * s;
    return r;
  }
  friend bool operator==(const OSClass&, const OSClass&) = default;
};

// Per-n engine: matroid of the coned arrangement, circuits, nbc bases,
// straightening, dlog and chord forms.  Immutable after construction apart
// from the memo cache, which is guarded by a mutex.
class OSAlgebra {
 public:
  explicit OSAlgebra(int n, bool flipChordSigns = false)
      : arr_(n), flip_(flipChordSigns) {
    buildMatroid();
    buildNbc();
  }

  int n() const { return arr_.n(); }
  int dim() const { return arr_.dim(); }
  const ModuliArrangement& arrangement() const { return arr_; }
  bool flipChordSigns() const { return flip_; }

  int betti(int k) const {
    if (k < 0 || k > arr_.dim()) return 0;
    return static_cast<int>(nbc_[k].size());
  }
  std::vector<long> betti_moduli() const {
    std::vector<long> b(arr_.dim() + 1);
    for (int k = 0; k <= arr_.dim(); ++k) b[k] = betti(k);
    return b;
  }
  // nbc basis of degree k: affine-index masks in lexicographic set order
  const std::vector<Mask>& nbc_basis(int k) const { return nbc_.at(k); }
  int nbc_index(int k, Mask m) const {
    auto it = nbcIndex_.at(k).find(m);
    if (it == nbcIndex_.at(k).end()) throw std::invalid_argument("nbc_index: not a basis set");
    return it->second;
  }

  // Class of e_{i1} ^ ... ^ e_{ik} in nbc coordinates (affine indices,
  // arbitrary order, repeats give zero).
  OSClass os_reduce(const std::vector<int>& idx) const {
    for (int i : idx)
      if (i < 0 || i >= arr_.count()) throw std::invalid_argument("os_reduce: unknown hyperplane");
    int sign = 1;
    std::vector<int> s(idx);
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j) {
        if (s[i] == s[j]) return OSClass{static_cast<int>(idx.size()), {}};
        if (s[i] > s[j]) { std::swap(s[i], s[j]); sign = -sign; }
      }
    Mask coned = 0;
    for (int i : s) coned |= (Mask(1) << (i + 1));
    OSClass out = project(reduce_coned(coned), static_cast<int>(s.size()));
    return out * Rat(sign);
  }

  // dlog(z_a - z_b) as a class of degree <= 1 (paper 1-based marked points)
  OSClass dlog_difference(int a, int b) const {
    auto h = arr_.index_of_difference(a, b);
    OSClass c;
    c.degree = 1;
    if (h) c.coeff[Mask(1) << *h] = 1;
    return c;
  }

  // omega_c for a chord {v_a, v_b}: the dlog of the cross-ratio
  //   dlog(z_a - z_{b+1}) + dlog(z_{a+1} - z_b)
  // - dlog(z_a - z_b)     - dlog(z_{a+1} - z_{b+1}),
  // marked-point indices cyclic in 1..n; factors at infinity cancel pairwise
  // and constant factors vanish.
  OSClass chord_form(const Chord& c) const {
    if (c.n != arr_.n()) throw std::invalid_argument("chord_form: chord of wrong polygon");
    auto zp = [&](int x) { return mod_n(x - 1, arr_.n()) + 1; };
    OSClass out;
    out.degree = 1;
    out += dlog_difference(zp(c.a), zp(c.b + 1));
    out += dlog_difference(zp(c.a + 1), zp(c.b));
    out += dlog_difference(zp(c.a), zp(c.b)) * Rat(-1);
    out += dlog_difference(zp(c.a + 1), zp(c.b + 1)) * Rat(-1);
    if (flip_) out = out * Rat(-1);
    return out;
  }

  // Fully reduced wedge of chord forms.
  OSClass eval_monomial(std::span<const Chord> chords) const {
    OSClass acc;
    acc.degree = 0;
    acc.coeff[0] = 1;
    for (const auto& c : chords) {
      OSClass form = chord_form(c);
      OSClass next;
      next.degree = acc.degree + 1;
      for (const auto& [m, v] : acc.coeff)
        for (const auto& [g, w] : form.coeff) {
          int h = mask_to_list(g).front();
          if (m & (Mask(1) << h)) continue;  // repeated generator
          // sign of moving e_h into ascending position
          Mask higher = m >> (h + 1);
          int sgn = (mask_size(higher) % 2 == 0) ? 1 : -1;
          Mask coned = 0;
          Mask withH = m | (Mask(1) << h);
          coned = withH << 1;  // affine bit i -> coned bit i+1
          OSClass red = project(reduce_coned(coned), next.degree);
          next += red * (v * w * sgn);
        }
      acc = std::move(next);
    }
    return acc;
  }

  std::vector<Rat> to_row_vector(const OSClass& c, int k) const {
    std::vector<Rat> v(betti(k), Rat(0));
    if (c.zero()) return v;
    if (c.degree != k) throw std::invalid_argument("to_row_vector: degree mismatch");
    for (const auto& [m, val] : c.coeff) v[nbc_index(k, m)] = val;
    return v;
  }
  SparseVec to_sparse_vector(const OSClass& c, int k) const {
    SparseVec v;
    if (c.zero()) return v;
    if (c.degree != k) throw std::invalid_argument("to_sparse_vector: degree mismatch");
    for (const auto& [m, val] : c.coeff) v.emplace_back(nbc_index(k, m), val);
    std::sort(v.begin(), v.end());
    return v;
  }

 private:
  // --- coned matroid -------------------------------------------------------
  // Ground element 0 is the hyperplane at infinity (vector x_0); affine
  // hyperplane h sits at coned index h+1.  The order makes infinity smallest,
  // so no broken circuit contains it.

  int conedCount() const { return arr_.count() + 1; }

  std::vector<Int> conedVector(int g) const {
    if (g == 0) {
      std::vector<Int> v(arr_.dim() + 1, 0);
      v[arr_.dim()] = 1;
      return v;
    }
    return arr_.hyperplane(g - 1).vec;
  }

  static int intRank(std::vector<std::vector<Int>> rows) {
    int rk = 0;
    int R = static_cast<int>(rows.size());
    if (R == 0) return 0;
    int C = static_cast<int>(rows[0].size());
    for (int col = 0; col < C && rk < R; ++col) {
      int piv = -1;
      for (int r = rk; r < R; ++r)
        if (rows[r][col] != 0) { piv = r; break; }
      if (piv == -1) continue;
      std::swap(rows[rk], rows[piv]);
      for (int r = rk + 1; r < R; ++r) {
        if (rows[r][col] == 0) continue;
        Int a = rows[rk][col], b = rows[r][col];
        for (int c = col; c < C; ++c) rows[r][c] = rows[r][c] * a - rows[rk][c] * b;
      }
      ++rk;
    }
    return rk;
  }

  void buildMatroid() {
    int G = conedCount();
    int maxCircuit = arr_.dim() + 2;
    // circuits by increasing size: a subset is a circuit iff it is dependent
    // and contains no smaller circuit
    std::vector<int> cur;
    auto containsCircuit = [&](Mask m) {
      for (const auto& c : circuits_)
        if ((m & c.mask) == c.mask) return true;
      return false;
    };
    for (int size = 2; size <= maxCircuit; ++size) {
      std::vector<Mask> found;
      cur.clear();
      auto rec = [&](auto&& self, int start, Mask m) -> void {
        if (static_cast<int>(cur.size()) == size) {
          if (containsCircuit(m)) return;
          std::vector<std::vector<Int>> rows;
          for (int g : cur) rows.push_back(conedVector(g));
          if (intRank(std::move(rows)) < size) found.push_back(m);
          return;
        }
        int need = size - static_cast<int>(cur.size());
        for (int g = start; g + need <= G; ++g) {
          Mask m2 = m | (Mask(1) << g);
          if (containsCircuit(m2)) continue;  // cheap prefix prune
          cur.push_back(g);
          self(self, g + 1, m2);
          cur.pop_back();
        }
      };
      rec(rec, 0, 0);
      for (Mask m : found) {
        Circuit c;
        c.mask = m;
        c.elems = mask_to_list(m);
        c.minElem = c.elems.front();
        c.bcMask = m & ~(Mask(1) << c.minElem);
        circuits_.push_back(std::move(c));
      }
    }
    bcByMax_.assign(G, {});
    for (size_t i = 0; i < circuits_.size(); ++i) {
      int mx = circuits_[i].elems.back();
      bcByMax_[mx].push_back(static_cast<int>(i));
    }
  }

  void buildNbc() {
    int N = arr_.count();
    nbc_.assign(arr_.dim() + 1, {});
    nbcIndex_.assign(arr_.dim() + 1, {});
    std::vector<int> cur;
    // DFS over ascending affine indices; affine h has coned index h+1, and
    // broken circuits never contain the infinity element
    auto rec = [&](auto&& self, int start, Mask conedMask) -> void {
      int k = static_cast<int>(cur.size());
      Mask affine = conedMask >> 1;
      nbcIndex_[k][affine] = static_cast<int>(nbc_[k].size());
      nbc_[k].push_back(affine);
      if (k == arr_.dim()) return;
      for (int h = start; h < N; ++h) {
        int g = h + 1;
        Mask m2 = conedMask | (Mask(1) << g);
        bool bad = false;
        for (int ci : bcByMax_[g])
          if ((m2 & circuits_[ci].bcMask) == circuits_[ci].bcMask) { bad = true; break; }
        if (bad) continue;
        cur.push_back(h);
        self(self, h + 1, m2);
        cur.pop_back();
      }
    };
    rec(rec, 0, 0);
  }

  // --- straightening -------------------------------------------------------

  // Reduce e_S (coned mask, ascending orientation) to the classical nbc basis
  // of the coned algebra.  Dependent sets vanish; a set containing a broken
  // circuit B = C \ {min C} is rewritten through the circuit relation,
  // which strictly decreases the sorted index sequence.
  const std::map<Mask, Rat>& reduce_coned(Mask mask) const {
    {
      std::lock_guard<std::mutex> lock(memoMutex_);
      auto it = memo_.find(mask);
      if (it != memo_.end()) return it->second;
    }
    std::map<Mask, Rat> result;
    const Circuit* hit = nullptr;
    for (const auto& c : circuits_)
      if ((mask & c.bcMask) == c.bcMask) { hit = &c; break; }
    if (!hit) {
      result[mask] = 1;
    } else if (mask & (Mask(1) << hit->minElem)) {
      // contains the full circuit: dependent, hence zero
    } else {
      std::vector<int> S = mask_to_list(mask);
      const auto& C = hit->elems;  // c_0 < c_1 < ... < c_k
      // e_S = eps * e_B ^ e_R with B the broken circuit, R the rest
      Mask bMask = hit->bcMask;
      std::vector<int> B = mask_to_list(bMask);
      std::vector<int> R = mask_to_list(mask & ~bMask);
      int eps = mergeSign(B, R);
      // e_B = sum_{i>=1} (-1)^{i+1} e_{C minus c_i} (ascending order each)
      for (size_t i = 1; i < C.size(); ++i) {
        std::vector<int> Ci;
        for (size_t j = 0; j < C.size(); ++j)
          if (j != i) Ci.push_back(C[j]);
        int sgn = (i % 2 == 1) ? 1 : -1;  // (-1)^{i+1}
        int eps2 = mergeSign(Ci, R);
        Mask t = list_to_mask(Ci) | list_to_mask(R);
        const auto& sub = reduce_coned(t);
        Rat f = Rat(eps * sgn * eps2);
        for (const auto& [m2, v] : sub) {
          auto [it2, fresh] = result.try_emplace(m2, Rat(0));
          it2->second += v * f;
          if (it2->second == 0) result.erase(it2);
        }
      }
    }
    std::lock_guard<std::mutex> lock(memoMutex_);
    auto [it, inserted] = memo_.emplace(mask, std::move(result));
    return it->second;
  }

  // sign of merging two ascending disjoint lists into one ascending list
  static int mergeSign(const std::vector<int>& a, const std::vector<int>& b) {
    int inv = 0;
    for (int x : a)
      for (int y : b)
        if (y < x) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
  }

  // quotient by the infinity ideal: drop terms containing ground element 0
  OSClass project(const std::map<Mask, Rat>& coned, int degree) const {
    OSClass out;
    out.degree = degree;
    for (const auto& [m, v] : coned) {
      if (m & 1) continue;
      out.coeff[m >> 1] = v;
    }
    return out;
  }

  struct Circuit {
    Mask mask = 0;
    Mask bcMask = 0;
    int minElem = 0;
    std::vector<int> elems;
  };

  ModuliArrangement arr_;
  bool flip_;
  std::vector<Circuit> circuits_;
  std::vector<std::vector<int>> bcByMax_;
  std::vector<std::vector<Mask>> nbc_;
  std::vector<std::map<Mask, int>> nbcIndex_;
  mutable std::unordered_map<Mask, std::map<Mask, Rat>> memo_;
  mutable std::mutex memoMutex_;
};

// Betti numbers of M_{0,n} by nbc count.
inline std::vector<long> betti_moduli(int n) { return OSAlgebra(n).betti_moduli(); }

}  // namespace gravity
