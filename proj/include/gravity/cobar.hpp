#pragma once

// Rows of the residue spectral sequence for Brown's moduli spaces, realized
// as explicit finite complexes
//   0 -> H^q(M_{0,n}) -> (+)_{Diss_1} H^{q-1}(M(d)) -> (+)_{Diss_2} ... ,
// with blocks given by single-chord residues in Kunneth coordinates.  Row
// exactness away from position zero is the computational content of the
// cofreeness theorem, and the position-zero kernels are the Betti numbers of
// Brown's moduli spaces.

#include <map>
#include <stdexcept>
#include <vector>

#include "gravity/exact_linalg.hpp"
#include "gravity/gravity_space.hpp"
#include "gravity/polygon.hpp"
#include "gravity/series.hpp"

namespace gravity {

class CobarRow {
 public:
  struct Summand {
    Dissection d;
    std::vector<SubPolygon> faces;  // canonical order
    std::vector<int> degs;          // cohomological degree per face
    std::vector<int> dims;          // dim of each factor space
    int offset = 0;
    int dim = 0;
  };

  CobarRow(SpaceRegistry& reg, int n, int q) : n_(n), q_(q) {
    if (n < 3) throw std::invalid_argument("CobarRow: n >= 3 required");
    if (q < 0 || q > n - 3) throw std::invalid_argument("CobarRow: 0 <= q <= n-3 required");
    buildLayout(reg);
    buildDifferentials(reg);
    // d.d = 0 is re-checked here; a failure means an inconsistent sign
    // system and is fatal by design
    complex_ = std::make_unique<FiniteComplex>(dims_, diffs_);
  }

  int n() const { return n_; }
  int q() const { return q_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<Summand>& summands(int p) const { return summands_.at(p); }
  const FiniteComplex& complex() const { return *complex_; }
  const std::vector<RationalMatrix>& differentials() const { return diffs_; }

 private:
  void buildLayout(SpaceRegistry& reg) {
    summands_.resize(q_ + 1);
    summandIndex_.resize(q_ + 1);
    dims_.assign(q_ + 1, 0);
    for (int p = 0; p <= q_; ++p) {
      int offset = 0;
      for (const auto& d : dissections(n_, p)) {
        auto faces = subpolygons(n_, d);
        std::vector<int> degs(faces.size(), 0);
        // enumerate multidegrees summing to q - p with per-factor caps
        auto rec = [&](auto&& self, size_t i, int remaining) -> void {
          if (i + 1 == faces.size()) {
            if (remaining > faces.back().size() - 3) return;
            degs[i] = remaining;
            Summand s;
            s.d = d;
            s.faces = faces;
            s.degs = degs;
            s.dim = 1;
            for (size_t f = 0; f < faces.size(); ++f) {
              int dm = reg.space(faces[f].size(), degs[f]).dimension();
              s.dims.push_back(dm);
              s.dim *= dm;
            }
            if (s.dim == 0) return;
            s.offset = offset;
            offset += s.dim;
            summandIndex_[p][{chordMask(d), degs}] = static_cast<int>(summands_[p].size());
            summands_[p].push_back(std::move(s));
            return;
          }
          int cap = std::min(remaining, faces[i].size() - 3);
          for (int v = 0; v <= cap; ++v) {
            degs[i] = v;
            self(self, i + 1, remaining - v);
          }
        };
        rec(rec, 0, q_ - p);
      }
      dims_[p] = offset;
    }
  }

  Mask chordMask(const Dissection& d) const {
    auto chords = all_chords(n_);
    Mask m = 0;
    for (const auto& c : d.chords) {
      auto it = std::lower_bound(chords.begin(), chords.end(), c);
      m |= Mask(1) << (it - chords.begin());
    }
    return m;
  }

  void buildDifferentials(SpaceRegistry& reg) {
    auto chords = all_chords(n_);
    for (int p = 0; p < q_; ++p) {
      RationalMatrix D(dims_[p + 1], dims_[p]);
      for (const auto& src : summands_[p]) {
        for (const auto& c : chords) {
          if (src.d.contains(c)) continue;
          bool ok = true;
          for (const auto& x : src.d.chords)
            if (crosses(x, c)) { ok = false; break; }
          if (!ok) continue;

          std::vector<Chord> cs = src.d.chords;
          cs.push_back(c);
          Dissection d2(n_, cs);
          auto faces2 = subpolygons(n_, d2);
          Mask d2mask = chordMask(d2);

          // the face of src.d carrying c
          int fi = -1;
          for (size_t f = 0; f < src.faces.size(); ++f)
            if (src.faces[f].isLocalChord(c)) { fi = static_cast<int>(f); break; }
          if (fi < 0) throw std::logic_error("CobarRow: chord not inside any face");
          if (src.degs[fi] == 0) continue;  // residue lowers the factor degree
          const SubPolygon& host = src.faces[fi];
          Chord lc = host.toLocal(c);

          // vertex sets of the two parts, in the local canonical order
          auto parts = subpolygons(host.size(), Dissection(host.size(), {lc}));
          std::vector<int> vertsA, vertsB;
          for (int lv : parts[0].vertices) vertsA.push_back(host.vertices[lv]);
          for (int lv : parts[1].vertices) vertsB.push_back(host.vertices[lv]);

          // positions in the canonical face list of d2, by vertex set
          auto posIn2 = [&](const std::vector<int>& vs) {
            for (size_t g = 0; g < faces2.size(); ++g)
              if (faces2[g].vertices == vs) return static_cast<int>(g);
            throw std::logic_error("CobarRow: face not found after cut");
          };
          std::vector<int> tpos;  // insertion order: factors with fi -> (A, B)
          for (size_t f = 0; f < src.faces.size(); ++f) {
            if (static_cast<int>(f) == fi) {
              tpos.push_back(posIn2(vertsA));
              tpos.push_back(posIn2(vertsB));
            } else {
              tpos.push_back(posIn2(src.faces[f].vertices));
            }
          }
          // the residue is an odd operator: Koszul crossing over the degrees
          // of the factors in front of the host
          int crossing = 0;
          for (int f = 0; f < fi; ++f) crossing += src.degs[f];
          int crossingSign = crossing % 2 == 0 ? 1 : -1;

          const GravitySpace& hostSpace = reg.space(host.size(), src.degs[fi]);

          // per-monomial residue of the host factor
          for (int hp = 0; hp < hostSpace.dimension(); ++hp) {
            int monIdx = hostSpace.pivots()[hp];
            ChordMonomial mono;
            mono.chords = hostSpace.monomialChords(monIdx);
            auto step = delta_chord(host.size(), mono, lc);
            if (!step) continue;
            int a = step->left.degree(), b = step->right.degree();

            // target degrees in insertion order, then Koszul placement
            std::vector<int> idegs, degs2(faces2.size());
            for (size_t f = 0; f < src.faces.size(); ++f) {
              if (static_cast<int>(f) == fi) {
                idegs.push_back(a);
                idegs.push_back(b);
              } else {
                idegs.push_back(src.degs[f]);
              }
            }
            {
              size_t t = 0;
              for (size_t f = 0; f < src.faces.size(); ++f) {
                if (static_cast<int>(f) == fi) {
                  degs2[tpos[t]] = a;
                  degs2[tpos[t + 1]] = b;
                  t += 2;
                } else {
                  degs2[tpos[t]] = src.degs[f];
                  ++t;
                }
              }
            }
            int placeSign = koszul_reorder_sign(idegs, tpos);

            auto tgtIt = summandIndex_[p + 1].find({d2mask, degs2});
            if (tgtIt == summandIndex_[p + 1].end()) continue;  // a zero factor space
            const Summand& tgt = summands_[p + 1][tgtIt->second];

            const GravitySpace& spA = reg.space(static_cast<int>(vertsA.size()), a);
            const GravitySpace& spB = reg.space(static_cast<int>(vertsB.size()), b);
            auto coordsA = spA.pivotCoordsOfMonomial(spA.monomialIndex(spA.maskOf(step->left.chords)));
            auto coordsB = spB.pivotCoordsOfMonomial(spB.monomialIndex(spB.maskOf(step->right.chords)));

            Rat base = step->coeff * crossingSign * placeSign;
            int posA = tpos[fi], posB = tpos[fi + 1];

            // iterate the source tensor basis over the untouched factors and
            // fill the (A,B) coordinates
            std::vector<int> srcIdx(src.faces.size(), 0);
            auto fill = [&](auto&& self, size_t f) -> void {
              if (f == src.faces.size()) {
                int srcFlat = 0;
                for (size_t g = 0; g < src.faces.size(); ++g)
                  srcFlat = srcFlat * src.dims[g] + srcIdx[g];
                // target flat index: per-face index in canonical face order
                std::vector<int> tIdx(faces2.size(), 0);
                size_t t = 0;
                for (size_t g = 0; g < src.faces.size(); ++g) {
                  if (static_cast<int>(g) == fi) { t += 2; continue; }
                  tIdx[tpos[t]] = srcIdx[g];
                  ++t;
                }
                for (int ia = 0; ia < static_cast<int>(coordsA.size()); ++ia) {
                  if (coordsA[ia] == 0) continue;
                  for (int ib = 0; ib < static_cast<int>(coordsB.size()); ++ib) {
                    if (coordsB[ib] == 0) continue;
                    tIdx[posA] = ia;
                    tIdx[posB] = ib;
                    int tgtFlat = 0;
                    for (size_t g = 0; g < faces2.size(); ++g)
                      tgtFlat = tgtFlat * tgt.dims[g] + tIdx[g];
                    D.add(tgt.offset + tgtFlat, src.offset + srcFlat,
                          base * coordsA[ia] * coordsB[ib]);
                  }
                }
                return;
              }
              if (static_cast<int>(f) == fi) {
                srcIdx[f] = hp;
                self(self, f + 1);
                return;
              }
              for (int i = 0; i < src.dims[f]; ++i) {
                srcIdx[f] = i;
                self(self, f + 1);
              }
            };
            fill(fill, 0);
          }
        }
      }
      diffs_.push_back(std::move(D));
    }
  }

  int n_, q_;
  std::vector<int> dims_;
  std::vector<std::vector<Summand>> summands_;
  std::vector<std::map<std::pair<Mask, std::vector<int>>, int>> summandIndex_;
  std::vector<RationalMatrix> diffs_;
  std::unique_ptr<FiniteComplex> complex_;
};

struct ExactnessReport {
  int n = 0, q = 0;
  std::vector<int> dims;
  std::vector<int> homology;  // per position
  int kernelDim0 = 0;
  bool exactBeyondZero = false;
};

inline ExactnessReport check_exactness(const CobarRow& row) {
  ExactnessReport rep;
  rep.n = row.n();
  rep.q = row.q();
  rep.dims = row.dims();
  rep.homology = row.complex().homology_dims();
  rep.kernelDim0 =
      rep.dims[0] - (row.differentials().empty() ? 0 : rank(row.differentials()[0]));
  rep.exactBeyondZero = true;
  for (size_t p = 1; p < rep.homology.size(); ++p)
    if (rep.homology[p] != 0) rep.exactBeyondZero = false;
  return rep;
}

// Betti numbers of Brown's moduli space via the row kernels at position 0.
inline std::vector<long> brown_betti_kernel(SpaceRegistry& reg, int n) {
  std::vector<long> b;
  for (int q = 0; q <= n - 3; ++q) {
    CobarRow row(reg, n, q);
    b.push_back(check_exactness(row).kernelDim0);
  }
  return b;
}

// Cogenerator dimensions and the cofree dimension identity
//   dim C(n)_k = sum over dissections of products of cogenerator dims.
struct CofreeReport {
  int n = 0;
  std::vector<long> xdims;  // cogenerators per degree
  std::vector<long> lhs;    // b_q(M_{0,n})
  std::vector<long> rhs;    // dissection-indexed sums
  bool identityHolds = false;
};

// xdimsOf(s) must return the cogenerator dimensions (= Brown Betti numbers)
// for every polygon size s <= n.
template <typename XDims>
inline CofreeReport cofree_dimension_identity(int n, XDims&& xdimsOf) {
  CofreeReport rep;
  rep.n = n;
  rep.xdims = xdimsOf(n);
  rep.lhs.assign(n - 2, 0);
  {
    IntPolynomial b = poincare_moduli(n);
    for (int k = 0; k <= n - 3; ++k) rep.lhs[k] = static_cast<long>(b.coeff(k).get_si());
  }
  rep.rhs.assign(n - 2, 0);
  std::map<int, std::vector<long>> xcache;
  for (int s = 3; s <= n; ++s) xcache[s] = xdimsOf(s);
  for (int p = 0; p <= n - 3; ++p) {
    for (const auto& d : dissections(n, p)) {
      auto faces = subpolygons(n, d);
      // polynomial in x: product over faces of sum_k X_k(|face|) x^k
      std::vector<long> prod{1};
      for (const auto& f : faces) {
        const auto& x = xcache[f.size()];
        std::vector<long> next(prod.size() + x.size() - 1, 0);
        for (size_t i = 0; i < prod.size(); ++i)
          for (size_t j = 0; j < x.size(); ++j) next[i + j] += prod[i] * x[j];
        prod = std::move(next);
      }
      for (size_t i = 0; i < prod.size(); ++i) {
        size_t q = i + p;  // each chord contributes one to the wedge degree
        if (q < rep.rhs.size()) rep.rhs[q] += prod[i];
      }
    }
  }
  rep.identityHolds = (rep.lhs == rep.rhs);
  return rep;
}

inline CofreeReport cofree_generator_dims(SpaceRegistry& reg, int n) {
  std::map<int, std::vector<long>> memo;
  auto xdims = [&](int s) -> std::vector<long> {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    auto v = brown_betti_kernel(reg, s);
    memo[s] = v;
    return v;
  };
  return cofree_dimension_identity(n, xdims);
}

}  // namespace gravity
