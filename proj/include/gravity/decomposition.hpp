#pragma once

// Decomposition maps on quotient coordinates, the residual filtration
// reports, the contraction pullback psi, and the graded isomorphism
//   Phi : gr_r C(n)_k -> (+)_{d in Diss_r} R_0 C(d)
// with its one-sided inverse Psi.

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gravity/cobar.hpp"
#include "gravity/exact_linalg.hpp"
#include "gravity/gravity_space.hpp"
#include "gravity/polygon.hpp"

namespace gravity {

// ----------------------------------------------------------------------------
// Decomposition map along one dissection, on quotient (pivot) coordinates.

struct DecompositionMap {
  int n = 0, k = 0;
  Dissection d;
  struct Block {
    std::vector<int> degs;  // per canonical face
    int offset = 0;
    int dim = 0;
    std::vector<int> dims;  // per-factor dims
  };
  std::vector<Block> blocks;
  int targetDim = 0;
  RationalMatrix matrix;  // targetDim x dim C(n)_k
  bool kernelKilled = true;
  int kernelVectorsChecked = 0;
};

// Chain-level residue of a monomial along d, expressed in the tensor-product
// pivot coordinates of the target.  Returns the list of (flat target index,
// value) contributions.
namespace detail {
inline void accumulate_delta_coords(SpaceRegistry& reg, int n,
                                    const std::vector<SubPolygon>& faces,
                                    const DecompositionMap& layout, const ChordMonomial& mono,
                                    const Dissection& d, const Rat& scale,
                                    std::vector<Rat>& target) {
  auto res = delta_dissection(n, mono, d);
  if (!res) return;
  std::vector<int> degs(faces.size());
  for (size_t f = 0; f < faces.size(); ++f) degs[f] = res->factors[f].degree();
  const DecompositionMap::Block* blk = nullptr;
  for (const auto& b : layout.blocks)
    if (b.degs == degs) { blk = &b; break; }
  if (!blk) return;  // a factor space is zero-dimensional
  std::vector<std::vector<Rat>> coords(faces.size());
  for (size_t f = 0; f < faces.size(); ++f) {
    const GravitySpace& sp = reg.space(faces[f].size(), degs[f]);
    coords[f] = sp.pivotCoordsOfMonomial(sp.monomialIndex(sp.maskOf(res->factors[f].chords)));
  }
  std::vector<int> idx(faces.size(), 0);
  Rat base = res->coeff * scale;
  auto rec = [&](auto&& self, size_t f, const Rat& acc) -> void {
    if (f == faces.size()) {
      int flat = 0;
      for (size_t g = 0; g < faces.size(); ++g) flat = flat * blk->dims[g] + idx[g];
      target[blk->offset + flat] += acc;
      return;
    }
    for (int i = 0; i < blk->dims[f]; ++i) {
      if (coords[f][i] == 0) continue;
      idx[f] = i;
      self(self, f + 1, acc * coords[f][i]);
    }
  };
  rec(rec, 0, base);
}
}  // namespace detail

// Matrix of the induced map C(n)_k -> C(d) from source pivot coordinates to
// target tensor-product pivot coordinates, together with the report that the
// relation kernel maps to zero (well-definedness of the combinatorial
// residues; a failure signals a broken sign or cross-ratio convention).
inline DecompositionMap decomposition_map(SpaceRegistry& reg, int n, int k, const Dissection& d) {
  const GravitySpace& src = reg.space(n, k);
  DecompositionMap out;
  out.n = n;
  out.k = k;
  out.d = d;
  auto faces = subpolygons(n, d);
  // block layout over multidegrees
  {
    std::vector<int> degs(faces.size(), 0);
    int offset = 0;
    auto rec = [&](auto&& self, size_t i, int remaining) -> void {
      if (i + 1 == faces.size()) {
        if (remaining > faces.back().size() - 3) return;
        degs[i] = remaining;
        DecompositionMap::Block b;
        b.degs = degs;
        b.dim = 1;
        for (size_t f = 0; f < faces.size(); ++f) {
          int dm = reg.space(faces[f].size(), degs[f]).dimension();
          b.dims.push_back(dm);
          b.dim *= dm;
        }
        if (b.dim == 0) return;
        b.offset = offset;
        offset += b.dim;
        out.blocks.push_back(std::move(b));
        return;
      }
      int cap = std::min(remaining, faces[i].size() - 3);
      for (int v = 0; v <= cap; ++v) {
        degs[i] = v;
        self(self, i + 1, remaining - v);
      }
    };
    if (k - d.size() >= 0) rec(rec, 0, k - d.size());
    out.targetDim = offset;
  }

  out.matrix = RationalMatrix(out.targetDim, src.dimension());
  for (int j = 0; j < src.dimension(); ++j) {
    int monIdx = src.pivots()[j];
    ChordMonomial mono;
    mono.chords = src.monomialChords(monIdx);
    std::vector<Rat> col(out.targetDim, Rat(0));
    detail::accumulate_delta_coords(reg, n, faces, out, mono, d, Rat(1), col);
    for (int r = 0; r < out.targetDim; ++r)
      if (col[r] != 0) out.matrix.set(r, j, col[r]);
  }

  // well-definedness: every relation-kernel vector maps to zero
  for (const auto& kv : src.relationKernel()) {
    std::vector<Rat> img(out.targetDim, Rat(0));
    for (size_t m = 0; m < kv.size(); ++m) {
      if (kv[m] == 0) continue;
      ChordMonomial mono;
      mono.chords = src.monomialChords(static_cast<int>(m));
      detail::accumulate_delta_coords(reg, n, faces, out, mono, d, kv[m], img);
    }
    ++out.kernelVectorsChecked;
    for (const auto& v : img)
      if (v != 0) { out.kernelKilled = false; break; }
    if (!out.kernelKilled) break;
  }
  return out;
}

// ----------------------------------------------------------------------------
// Residual filtration report.

struct ResidualFiltration {
  int n = 0;
  // dims[k][r] = dim R_r C(n)_k for r = 0..n-3
  std::vector<std::vector<int>> dims;
  std::vector<std::vector<int>> grDims;
};

inline ResidualFiltration residual_filtration(SpaceRegistry& reg, int n) {
  ResidualFiltration rf;
  rf.n = n;
  for (int k = 0; k <= n - 3; ++k) {
    const auto& sp = reg.space(n, k);
    rf.dims.push_back(sp.filtrationDims());
    std::vector<int> gr;
    for (int r = 0; r <= n - 3; ++r) gr.push_back(sp.dimGr(r));
    rf.grDims.push_back(std::move(gr));
  }
  return rf;
}

// Lemma-style compatibility: the residue along d sends R_r into R_{r-|d|}
// of the target, checked chord-combinatorially on every spanning monomial.
inline bool filtration_compatible(int n, const Dissection& d, const ChordMonomial& mono) {
  auto res = delta_dissection(n, mono, d);
  if (!res) return true;
  int before = static_cast<int>(residual_chords(mono.chords).size());
  int after = 0;
  for (const auto& f : res->factors)
    after += static_cast<int>(residual_chords(f.chords).size());
  return after <= before - d.size();
}

// ----------------------------------------------------------------------------
// The contraction pullback psi.

// An inscribed polygon with a matching side chosen behind each chord edge;
// pulls classes of the sub-polygon back to the ambient polygon.
class InscribedPolygon {
 public:
  InscribedPolygon(int n, const SubPolygon& p, Conventions::MatchRule rule)
      : InscribedPolygon(n, p, pick_matching(n, p, rule)) {}

  // explicit matching sides, aligned with p.edges (-1 on side edges)
  InscribedPolygon(int n, const SubPolygon& p, const std::vector<int>& matching)
      : n_(n), p_(p) {
    if (p.parentN != n) throw std::invalid_argument("InscribedPolygon: wrong parent");
    int s = p.size();
    if (static_cast<int>(matching.size()) != s)
      throw std::invalid_argument("InscribedPolygon: one matching entry per edge");
    std::vector<int> keptOf(s, -1);
    for (int t = 0; t < s; ++t) {
      const auto& e = p.edges[t];
      if (!e.isChord) {
        keptOf[t] = e.side;
        continue;
      }
      int pick = matching[t];
      auto arc = component_sides(n, p, t);
      if (std::find(arc.begin(), arc.end(), pick) == arc.end())
        throw std::invalid_argument("InscribedPolygon: matching side outside its component");
      keptOf[t] = pick;
    }
    kept_ = keptOf;
    std::sort(kept_.begin(), kept_.end());
    // position of each edge's kept side; must be a rotation
    rot_ = -1;
    for (int t = 0; t < s; ++t) {
      int pos = static_cast<int>(
          std::lower_bound(kept_.begin(), kept_.end(), keptOf[t]) - kept_.begin());
      int r = mod_n(pos - t, s);
      if (rot_ == -1) rot_ = r;
      else if (rot_ != r) throw std::logic_error("InscribedPolygon: non-rotational matching");
    }
    // preimages of every local chord under the contraction onto kept sides
    auto localChords = all_chords(s);
    auto parentChords = all_chords(n);
    preimages_.resize(localChords.size());
    for (size_t i = 0; i < localChords.size(); ++i) {
      Chord image(s, mod_n(localChords[i].a + rot_, s), mod_n(localChords[i].b + rot_, s));
      for (const auto& pc : parentChords) {
        auto im = chord_contracts_to(pc, kept_);
        if (im && *im == image) preimages_[i].push_back(pc);
      }
    }
    localIndex_.clear();
    for (size_t i = 0; i < localChords.size(); ++i) localIndex_[localChords[i]] = static_cast<int>(i);
  }

  int parentN() const { return n_; }
  const SubPolygon& polygon() const { return p_; }
  const std::vector<int>& keptSides() const { return kept_; }

  const std::vector<Chord>& preimages(const Chord& local) const {
    auto it = localIndex_.find(local);
    if (it == localIndex_.end()) throw std::invalid_argument("psi: not a chord of the sub-polygon");
    return preimages_[it->second];
  }

  // psi on a monomial of the standard sub-polygon gon: expand the product of
  // the pulled-back forms into canonical monomials of the ambient polygon.
  std::vector<ChordMonomial> pullback(const ChordMonomial& mono) const {
    std::map<std::vector<Chord>, Rat> acc;
    acc[{}] = mono.coeff;
    for (const auto& lc : mono.chords) {
      std::map<std::vector<Chord>, Rat> next;
      for (const auto& [word, coeff] : acc)
        for (const auto& pc : preimages(lc)) {
          std::vector<Chord> w = word;
          w.push_back(pc);
          auto canon = ChordMonomial::canonicalize(std::move(w), coeff);
          if (!canon) continue;
          auto [it, fresh] = next.try_emplace(canon->chords, canon->coeff);
          if (!fresh) {
            it->second += canon->coeff;
            if (it->second == 0) next.erase(it);
          }
        }
      acc = std::move(next);
    }
    std::vector<ChordMonomial> out;
    for (const auto& [word, coeff] : acc) {
      ChordMonomial m;
      m.chords = word;
      m.coeff = coeff;
      out.push_back(std::move(m));
    }
    return out;
  }

 private:
  // the original sides behind the chord at edge position t
  static std::vector<int> component_sides(int n, const SubPolygon& p, int t) {
    int X = p.vertices[t];
    int Y = p.vertices[(t + 1) % p.size()];
    std::vector<int> arc;
    for (int v = X; v != Y; v = mod_n(v + 1, n)) arc.push_back(v);
    return arc;
  }

  static std::vector<int> pick_matching(int n, const SubPolygon& p, Conventions::MatchRule rule) {
    std::vector<int> m(p.size(), -1);
    for (int t = 0; t < p.size(); ++t) {
      if (!p.edges[t].isChord) continue;
      auto arc = component_sides(n, p, t);
      m[t] = rule == Conventions::MatchRule::Least ? *std::min_element(arc.begin(), arc.end())
                                                   : *std::max_element(arc.begin(), arc.end());
    }
    return m;
  }

  int n_;
  SubPolygon p_;
  std::vector<int> kept_;
  int rot_ = 0;
  std::vector<std::vector<Chord>> preimages_;
  std::map<Chord, int> localIndex_;
};

inline std::vector<ChordMonomial> psi_pullback(int n, const SubPolygon& p,
                                               const ChordMonomial& mono,
                                               Conventions::MatchRule rule) {
  return InscribedPolygon(n, p, rule).pullback(mono);
}

// ----------------------------------------------------------------------------
// Phi and Psi on gr_r coordinates.

struct PhiPsiReport {
  int n = 0, r = 0, k = 0;
  int dimGr = 0, dimTarget = 0;
  bool dimsMatch = false;
  bool phiInvertible = false;
  bool psiBuilt = false;
  bool phiPsiIdentity = false;
  bool psiLandsInRr = true;
  RationalMatrix phi, psi;
};

// Builds Phi (always) and Psi (optionally) for gr_r C(n)_k and verifies the
// statement of the graded isomorphism: dimension match, invertibility, and
// Phi Psi = id on the quotient coordinates.
inline PhiPsiReport phi_psi_check(SpaceRegistry& reg, int n, int r, int k, bool withPsi) {
  PhiPsiReport rep;
  rep.n = n;
  rep.r = r;
  rep.k = k;
  const GravitySpace& S = reg.space(n, k);
  const auto& grBasis = S.stagePivots(r);
  rep.dimGr = static_cast<int>(grBasis.size());

  if (r == 0) {
    rep.dimTarget = S.dimR0();
    rep.dimsMatch = true;
    rep.phiInvertible = true;
    rep.phi = RationalMatrix::identity(rep.dimGr);
    rep.psi = RationalMatrix::identity(rep.dimGr);
    rep.psiBuilt = withPsi;
    rep.phiPsiIdentity = true;
    return rep;
  }

  struct Block {
    Dissection d;
    Mask dMask;
    AdmissibleOrdering ord;
    std::vector<SubPolygon> faces;     // canonical
    std::vector<int> sizes;            // per admissible position
    std::vector<int> degs;             // per admissible position
    std::vector<int> dims;             // R_0 dims per admissible position
    int offset = 0;
    int dim = 0;
  };
  std::vector<Block> blocks;
  std::map<std::pair<Mask, std::vector<int>>, int> blockIndex;
  auto chords = all_chords(n);
  auto maskOfDissection = [&](const Dissection& d) {
    Mask m = 0;
    for (const auto& c : d.chords) {
      auto it = std::lower_bound(chords.begin(), chords.end(), c);
      m |= Mask(1) << (it - chords.begin());
    }
    return m;
  };

  int offset = 0;
  for (const auto& d : dissections(n, r)) {
    auto faces = subpolygons(n, d);
    auto ord = admissible_ordering(n, d);
    std::vector<int> sizes;
    for (int pi : ord.polys) sizes.push_back(faces[pi].size());
    std::vector<int> degs(sizes.size(), 0);
    auto rec = [&](auto&& self, size_t i, int remaining) -> void {
      if (i + 1 == sizes.size()) {
        if (remaining > sizes.back() - 3) return;
        degs[i] = remaining;
        Block b;
        b.d = d;
        b.dMask = maskOfDissection(d);
        b.ord = ord;
        b.faces = faces;
        b.sizes = sizes;
        b.degs = degs;
        b.dim = 1;
        for (size_t f = 0; f < sizes.size(); ++f) {
          int dm = reg.space(sizes[f], degs[f]).dimR0();
          b.dims.push_back(dm);
          b.dim *= dm;
        }
        if (b.dim == 0) return;
        b.offset = offset;
        offset += b.dim;
        blockIndex[{b.dMask, b.degs}] = static_cast<int>(blocks.size());
        blocks.push_back(std::move(b));
        return;
      }
      int cap = std::min(remaining, sizes[i] - 3);
      for (int v = 0; v <= cap; ++v) {
        degs[i] = v;
        self(self, i + 1, remaining - v);
      }
    };
    if (k - r >= 0) rec(rec, 0, k - r);
  }
  rep.dimTarget = offset;
  rep.dimsMatch = (rep.dimGr == rep.dimTarget);

  // Phi: residue along the residual dissection of each stage-r pivot monomial
  rep.phi = RationalMatrix(rep.dimTarget, rep.dimGr);
  for (int j = 0; j < rep.dimGr; ++j) {
    ChordMonomial mono;
    mono.chords = S.monomialChords(grBasis[j]);
    auto resid = residual_chords(mono.chords);
    if (static_cast<int>(resid.size()) != r)
      throw std::logic_error("phi: stage-r pivot without exactly r residual chords");
    Dissection d(n, resid);
    Mask dm = maskOfDissection(d);
    // locate the block family of d
    const Block* any = nullptr;
    for (const auto& b : blocks)
      if (b.dMask == dm) { any = &b; break; }
    if (!any) continue;  // no admissible target block (zero factor spaces)
    auto res = delta_word_form(n, mono, d, any->ord);
    if (!res) throw std::logic_error("phi: vanishing residue along the residual dissection");
    std::vector<int> degs(res->factors.size());
    for (size_t f = 0; f < res->factors.size(); ++f) degs[f] = res->factors[f].degree();
    auto bit = blockIndex.find({dm, degs});
    if (bit == blockIndex.end()) continue;
    const Block& blk = blocks[bit->second];
    std::vector<std::vector<Rat>> coords(res->factors.size());
    for (size_t f = 0; f < res->factors.size(); ++f) {
      const GravitySpace& sp = reg.space(blk.sizes[f], degs[f]);
      coords[f] =
          sp.r0Coords(sp.evalColumn(sp.monomialIndex(sp.maskOf(res->factors[f].chords))));
    }
    std::vector<int> idx(res->factors.size(), 0);
    auto fill = [&](auto&& self, size_t f, const Rat& acc) -> void {
      if (f == res->factors.size()) {
        int flat = 0;
        for (size_t g = 0; g < res->factors.size(); ++g) flat = flat * blk.dims[g] + idx[g];
        rep.phi.add(blk.offset + flat, j, acc);
        return;
      }
      for (int i = 0; i < blk.dims[f]; ++i) {
        if (coords[f][i] == 0) continue;
        idx[f] = i;
        self(self, f + 1, acc * coords[f][i]);
      }
    };
    fill(fill, 0, res->coeff);
  }
  if (rep.dimsMatch) rep.phiInvertible = (rank(rep.phi) == rep.dimGr);

  if (!withPsi || !rep.dimsMatch) return rep;

  // Psi: for each block and each tensor of R_0 pivot monomials,
  //   psi_0(X_0) ^ w_{c_1} ^ psi_1(X_1) ^ ... ^ w_{c_r} ^ psi_r(X_r),
  // expanded and read in gr_r coordinates.
  rep.psiBuilt = true;
  rep.psi = RationalMatrix(rep.dimGr, rep.dimTarget);
  for (const auto& blk : blocks) {
    std::vector<InscribedPolygon> insc;
    std::vector<const GravitySpace*> spaces;
    for (size_t f = 0; f < blk.sizes.size(); ++f) {
      insc.emplace_back(n, blk.faces[blk.ord.polys[f]], reg.conventions().matchRule);
      spaces.push_back(&reg.space(blk.sizes[f], blk.degs[f]));
    }
    std::vector<int> choice(blk.sizes.size(), 0);
    auto emit = [&](auto&& self, size_t f) -> void {
      if (f == blk.sizes.size()) {
        // assemble the wedge word
        std::map<std::vector<Chord>, Rat> acc;
        acc[{}] = 1;
        auto wedgeMonomials = [&](const std::vector<ChordMonomial>& ms) {
          std::map<std::vector<Chord>, Rat> next;
          for (const auto& [word, coeff] : acc)
            for (const auto& m : ms) {
              std::vector<Chord> w = word;
              for (const auto& c : m.chords) w.push_back(c);
              auto canon = ChordMonomial::canonicalize(std::move(w), coeff * m.coeff);
              if (!canon) continue;
              auto [it, fresh] = next.try_emplace(canon->chords, canon->coeff);
              if (!fresh) {
                it->second += canon->coeff;
                if (it->second == 0) next.erase(it);
              }
            }
          acc = std::move(next);
        };
        for (size_t f2 = 0; f2 < blk.sizes.size(); ++f2) {
          if (f2 > 0) {
            ChordMonomial cm;
            cm.chords = {blk.ord.chords[f2 - 1]};
            wedgeMonomials({cm});
          }
          const GravitySpace& sp = *spaces[f2];
          int monIdx = sp.stagePivots(0)[choice[f2]];
          ChordMonomial local;
          local.chords = sp.monomialChords(monIdx);
          wedgeMonomials(insc[f2].pullback(local));
        }
        // class of the resulting sum, in stage coordinates
        std::map<int, Rat> rowAcc;
        for (const auto& [word, coeff] : acc) {
          const auto& col = S.evalColumn(S.monomialIndex(S.maskOf(word)));
          for (const auto& [row, v] : col) rowAcc[row] += coeff * v;
        }
        SparseVec vec;
        for (const auto& [row, v] : rowAcc)
          if (v != 0) vec.emplace_back(row, v);
        auto coords = S.stageCoords(vec);
        for (size_t st = r + 1; st < coords.size(); ++st)
          for (const auto& c : coords[st])
            if (c != 0) rep.psiLandsInRr = false;
        int colIdx = 0;
        for (size_t g = 0; g < blk.sizes.size(); ++g) colIdx = colIdx * blk.dims[g] + choice[g];
        for (size_t i = 0; i < coords[r].size(); ++i)
          if (coords[r][i] != 0)
            rep.psi.set(static_cast<int>(i), blk.offset + colIdx, coords[r][i]);
        return;
      }
      for (int i = 0; i < blk.dims[f]; ++i) {
        choice[f] = i;
        self(self, f + 1);
      }
    };
    emit(emit, 0);
  }
  RationalMatrix prod = rep.phi * rep.psi;
  rep.phiPsiIdentity = true;
  for (int i = 0; i < rep.dimTarget && rep.phiPsiIdentity; ++i)
    for (int j = 0; j < rep.dimTarget; ++j) {
      Rat expect = (i == j) ? Rat(1) : Rat(0);
      if (prod.at(i, j) != expect) { rep.phiPsiIdentity = false; break; }
    }
  return rep;
}

// wedge order of the Psi formula: the wedge word above interleaves
// psi_i(X_i) with the ordering's chords; the chord in front of factor f2 is
// ord.chords[f2-1], matching Theorem-style orderings where polys[0] is cut
// off by chords[0].

// ----------------------------------------------------------------------------
// Coradical filtration check: F_k = R_k.

struct CoradicalReport {
  int n = 0;
  struct Instance {
    int degree = 0;  // wedge degree
    int filtK = 0;
    int dimF = 0, dimR = 0;
    bool subspaceContained = true;  // R_k lies inside F_k, checked on spanning monomials
  };
  std::vector<Instance> instances;
  bool pass = true;
};

inline CoradicalReport coradical_check(SpaceRegistry& reg, int n) {
  CoradicalReport rep;
  rep.n = n;
  for (int k = 0; k <= n - 3; ++k) {
    const GravitySpace& S = reg.space(n, k);
    for (int fk = 0; fk <= n - 3; ++fk) {
      CoradicalReport::Instance inst;
      inst.degree = k;
      inst.filtK = fk;
      inst.dimR = S.filtrationDims()[fk];
      auto diss = dissections(n, fk + 1);
      if (diss.empty()) {
        inst.dimF = S.dimension();
      } else {
        // stack all decomposition maps of cardinality fk+1
        std::vector<DecompositionMap> maps;
        int rows = 0;
        for (const auto& d : diss) {
          maps.push_back(decomposition_map(reg, n, k, d));
          rows += maps.back().targetDim;
        }
        RationalMatrix stacked(rows, S.dimension());
        int off = 0;
        for (const auto& m : maps) {
          m.matrix.forEach([&](int r, int c, const Rat& v) { stacked.set(off + r, c, v); });
          off += m.matrix.rows();
        }
        inst.dimF = S.dimension() - rank(stacked);
        // subspace check: every monomial of R_fk is killed by the stack
        for (size_t j = 0; j < S.monomials().size() && inst.subspaceContained; ++j) {
          if (S.residualCount(static_cast<int>(j)) > fk) continue;
          auto x = S.pivotCoordsOfMonomial(static_cast<int>(j));
          auto y = stacked.apply(x);
          for (const auto& v : y)
            if (v != 0) { inst.subspaceContained = false; break; }
        }
      }
      if (inst.dimF != inst.dimR || !inst.subspaceContained) rep.pass = false;
      rep.instances.push_back(inst);
    }
  }
  return rep;
}

}  // namespace gravity
