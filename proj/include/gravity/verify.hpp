#pragma once

// Verification suites: each runs a family of theorem instances at desk scale
// and reports machine-readable pass/fail lines.  Shared by the CLI and the
// acceptance binary.

#include <sstream>
#include <string>
#include <vector>

#include "gravity/cobar.hpp"
#include "gravity/decomposition.hpp"
#include "gravity/gravity_space.hpp"
#include "gravity/series.hpp"

namespace gravity {

struct SuiteResult {
  std::string suite;
  struct Instance {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Instance> instances;
  bool pass() const {
    for (const auto& i : instances)
      if (!i.pass) return false;
    return true;
  }
};

// spanning + kernel-killing of every single-chord residue
inline SuiteResult suite_welldefined(SpaceRegistry& reg, int n) {
  SuiteResult out;
  out.suite = "welldefined";
  for (int k = 0; k <= n - 3; ++k) {
    const GravitySpace& S = reg.space(n, k);
    {
      SuiteResult::Instance inst;
      inst.name = "spanning n=" + std::to_string(n) + " k=" + std::to_string(k);
      inst.pass = (S.dimension() == S.bettiTarget());
      inst.detail = "rank " + std::to_string(S.dimension()) + " of " +
                    std::to_string(S.monomialCount()) + " monomials, b_k = " +
                    std::to_string(S.bettiTarget());
      out.instances.push_back(inst);
    }
    for (const auto& c : all_chords(n)) {
      auto dm = decomposition_map(reg, n, k, Dissection(n, {c}));
      SuiteResult::Instance inst;
      inst.name = "kernel-killed n=" + std::to_string(n) + " k=" + std::to_string(k) +
                  " chord=" + c.str();
      inst.pass = dm.kernelKilled;
      inst.detail = std::to_string(dm.kernelVectorsChecked) + " kernel vectors";
      out.instances.push_back(inst);
    }
  }
  return out;
}

// cobar rows: d.d = 0 (construction) and vanishing homology beyond position 0
inline SuiteResult suite_exactness(SpaceRegistry& reg, int n) {
  SuiteResult out;
  out.suite = "exactness";
  for (int q = 0; q <= n - 3; ++q) {
    SuiteResult::Instance inst;
    inst.name = "row n=" + std::to_string(n) + " q=" + std::to_string(q);
    try {
      CobarRow row(reg, n, q);
      auto rep = check_exactness(row);
      inst.pass = rep.exactBeyondZero;
      std::ostringstream os;
      os << "dims";
      for (int d : rep.dims) os << " " << d;
      os << "; homology";
      for (int h : rep.homology) os << " " << h;
      os << "; kernel0 " << rep.kernelDim0;
      inst.detail = os.str();
    } catch (const std::exception& e) {
      inst.pass = false;
      inst.detail = std::string("construction failed: ") + e.what();
    }
    out.instances.push_back(inst);
  }
  return out;
}

// residue along every dissection maps R_r into R_{r-|d|}
inline SuiteResult suite_filtration(SpaceRegistry& reg, int n) {
  SuiteResult out;
  out.suite = "filtration";
  for (int k = 0; k <= n - 3; ++k) {
    const GravitySpace& S = reg.space(n, k);
    for (int p = 1; p <= k; ++p) {
      bool ok = true;
      int checked = 0;
      for (const auto& d : dissections(n, p)) {
        for (int j = 0; j < S.monomialCount(); ++j) {
          ChordMonomial mono;
          mono.chords = S.monomialChords(j);
          if (!filtration_compatible(n, d, mono)) { ok = false; break; }
          ++checked;
        }
        if (!ok) break;
      }
      SuiteResult::Instance inst;
      inst.name = "filtration n=" + std::to_string(n) + " k=" + std::to_string(k) +
                  " |d|=" + std::to_string(p);
      inst.pass = ok;
      inst.detail = std::to_string(checked) + " residues";
      out.instances.push_back(inst);
    }
  }
  return out;
}

// graded isomorphism gr_r = (+)_{Diss_r} R_0: dimensions and invertibility;
// Phi.Psi = id when requested
inline SuiteResult suite_phi(SpaceRegistry& reg, int n, bool withPsi, int onlyR = -1) {
  SuiteResult out;
  out.suite = "phi";
  for (int r = 0; r <= n - 3; ++r) {
    if (onlyR >= 0 && r != onlyR) continue;
    for (int k = r; k <= n - 3; ++k) {
      auto rep = phi_psi_check(reg, n, r, k, withPsi);
      SuiteResult::Instance inst;
      inst.name = "phi n=" + std::to_string(n) + " r=" + std::to_string(r) +
                  " k=" + std::to_string(k);
      inst.pass = rep.dimsMatch && rep.phiInvertible &&
                  (!withPsi || (rep.phiPsiIdentity && rep.psiLandsInRr));
      std::ostringstream os;
      os << "dim gr " << rep.dimGr << ", target " << rep.dimTarget;
      if (withPsi) os << (rep.phiPsiIdentity ? ", phi.psi = id" : ", phi.psi != id");
      inst.detail = os.str();
      out.instances.push_back(inst);
    }
  }
  return out;
}

// F_k = R_k, dimension- and subspace-wise
inline SuiteResult suite_coradical(SpaceRegistry& reg, int n) {
  SuiteResult out;
  out.suite = "coradical";
  auto rep = coradical_check(reg, n);
  for (const auto& inst : rep.instances) {
    SuiteResult::Instance i;
    i.name = "coradical n=" + std::to_string(n) + " k=" + std::to_string(inst.degree) +
             " F_" + std::to_string(inst.filtK);
    i.pass = (inst.dimF == inst.dimR) && inst.subspaceContained;
    i.detail = "dim F " + std::to_string(inst.dimF) + ", dim R " + std::to_string(inst.dimR);
    out.instances.push_back(i);
  }
  return out;
}

// three-way Brown Betti agreement at one n
inline SuiteResult suite_betti_agreement(SpaceRegistry& reg, int n, bool withKernel) {
  SuiteResult out;
  out.suite = "betti";
  auto series = brown_betti_series(n);
  auto euler = euler_check(n);
  SuiteResult::Instance inst;
  inst.name = "brown betti n=" + std::to_string(n);
  std::ostringstream os;
  os << "series";
  for (long b : series) os << " " << b;
  bool ok = euler.agrees;
  if (withKernel) {
    auto kernel = brown_betti_kernel(reg, n);
    ok = ok && (kernel == series);
    os << "; kernel";
    for (long b : kernel) os << " " << b;
  }
  os << "; euler";
  for (long b : euler.euler) os << " " << b;
  inst.pass = ok;
  inst.detail = os.str();
  out.instances.push_back(inst);
  return out;
}

}  // namespace gravity
