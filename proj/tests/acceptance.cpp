// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  All checks are exact; the printed budgets are generous upper
// bounds and the whole run stays well inside them on desk hardware.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "gravity/cobar.hpp"
#include "gravity/decomposition.hpp"
#include "gravity/gravity_space.hpp"
#include "gravity/series.hpp"
#include "gravity/verify.hpp"

using namespace gravity;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
            << std::endl;
  if (!pass) ++failures;
}

template <typename F>
double timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// labeled trees with one internal edge on n leaves: unordered bipartitions
// with both parts of size >= 2
long count_s_trees_one_edge(int n) {
  long count = 0;
  for (long mask = 0; mask < (1L << n); ++mask) {
    int c = __builtin_popcountll(mask);
    if (c >= 2 && n - c >= 2) ++count;
  }
  return count / 2;
}

// labeled 5-trees with two internal edges: a path of three internal
// vertices, the middle one carrying a single leaf (arity 3) and the ends two
// leaves each; count = choice of middle leaf times the unordered splits of
// the remaining four into two pairs
long count_5_trees_two_edges() {
  long count = 0;
  for (int mid = 0; mid < 5; ++mid) {
    std::vector<int> rest;
    for (int i = 0; i < 5; ++i)
      if (i != mid) rest.push_back(i);
    // unordered pair-partitions of the four remaining leaves: the partner of
    // rest[0] determines the partition
    for (int partner = 1; partner < 4; ++partner) ++count;
  }
  return count;
}

}  // namespace

int main() {
  std::cout << "dihedral gravity cooperad: acceptance criteria\n";

  // ---------------------------------------------------------------- 1
  {
    bool pass = true;
    std::string bad;
    double secs = timed([&] {
      for (int n = 3; n <= 8; ++n) {
        OSAlgebra os(n);
        IntPolynomial p = poincare_moduli(n);
        for (int k = 0; k <= n - 3; ++k)
          if (Int(os.betti(k)) != p.coeff(k)) {
            pass = false;
            bad = " first failure at n=" + std::to_string(n) + " k=" + std::to_string(k);
          }
      }
    });
    std::ostringstream os;
    os << "moduli Betti oracle agreement (nbc count = product coefficients), 3 <= n <= 8"
       << bad << "  [" << secs << "s]";
    report(1, pass, os.str());
  }

  // ---------------------------------------------------------------- 2
  {
    bool pass = true;
    std::ostringstream detail;
    double secs = timed([&] {
      for (int n = 3; n <= 8; ++n) {
        OSAlgebra os(n);
        for (int k = 0; k <= n - 3; ++k) {
          int got = spanning_rank(os, k);
          int want = os.betti(k);
          if (got != want) {
            pass = false;
            detail << " FAIL n=" << n << " k=" << k << " rank " << got << " != " << want << ";";
          }
        }
      }
    });
    std::ostringstream os;
    os << "spanning: chord-monomial evaluation has full rank b_k for all k, n <= 8"
       << detail.str() << "  [" << secs << "s]";
    report(2, pass, os.str());
  }

  // ---------------------------------------------------------------- 3
  {
    bool pass = true;
    std::string bad;
    double secs = timed([&] {
      SpaceRegistry reg;
      for (int n = 4; n <= 7; ++n) {
        auto suite = suite_welldefined(reg, n);
        if (!suite.pass()) {
          pass = false;
          for (const auto& inst : suite.instances)
            if (!inst.pass) { bad = " first failure: " + inst.name; break; }
        }
      }
    });
    report(3, pass,
           "well-definedness: every single-chord residue kills the relation kernel, n <= 7" +
               bad + "  [" + std::to_string(secs) + "s]");
  }

  // ---------------------------------------------------------------- 4
  {
    bool pass = true;
    std::string bad;
    double secs = timed([&] {
      SpaceRegistry reg;
      for (int n = 3; n <= 7; ++n) {
        auto suite = suite_exactness(reg, n);
        if (!suite.pass()) {
          pass = false;
          for (const auto& inst : suite.instances)
            if (!inst.pass) { bad = " first failure: " + inst.name; break; }
        }
      }
    });
    report(4, pass,
           "cofreeness rows: d.d = 0 and homology vanishes beyond position 0, all q, n <= 7" +
               bad + "  [" + std::to_string(secs) + "s]");
  }

  // ---------------------------------------------------------------- 5
  {
    bool pass = true;
    std::ostringstream detail;
    double secs = timed([&] {
      SpaceRegistry reg;
      // frozen low values
      std::map<int, std::vector<long>> frozen{
          {3, {1}}, {4, {1, 0}}, {5, {1, 0, 1}}, {6, {1, 0, 5, 4}}};
      for (auto& [n, want] : frozen)
        if (brown_betti_series(n) != want) {
          pass = false;
          detail << " frozen series value differs at n=" << n << ";";
        }
      for (int n = 3; n <= 10; ++n) {
        auto series = brown_betti_series(n);
        auto euler = euler_check(n);
        if (!euler.agrees) {
          pass = false;
          detail << " euler != series at n=" << n << ";";
        }
        if (n <= 7) {
          auto kernel = brown_betti_kernel(reg, n);
          if (kernel != series) {
            pass = false;
            detail << " kernel != series at n=" << n << ";";
          }
        }
      }
    });
    report(5, pass,
           "Brown Betti numbers: kernel (n <= 7) = series inversion = Euler count (n <= 10)" +
               detail.str() + "  [" + std::to_string(secs) + "s]");
  }

  // ---------------------------------------------------------------- 6
  {
    bool pass = true;
    std::ostringstream detail;
    double secs = timed([&] {
      SpaceRegistry reg;
      for (int n = 4; n <= 7; ++n)
        for (int r = 0; r <= n - 3; ++r)
          for (int k = r; k <= n - 3; ++k) {
            bool withPsi = n <= 6;
            auto rep = phi_psi_check(reg, n, r, k, withPsi);
            bool ok = rep.dimsMatch && rep.phiInvertible &&
                      (!withPsi || (rep.phiPsiIdentity && rep.psiLandsInRr));
            if (!ok) {
              pass = false;
              detail << " FAIL n=" << n << " r=" << r << " k=" << k << ";";
            }
          }
    });
    report(6, pass,
           "graded pieces: dim gr_r matches the dissection Kunneth sum, Phi invertible (n <= 7), "
           "Phi.Psi = id (n <= 6)" +
               detail.str() + "  [" + std::to_string(secs) + "s]");
  }

  // ---------------------------------------------------------------- 7
  {
    bool pass = true;
    std::string bad;
    double secs = timed([&] {
      SpaceRegistry reg;
      for (int n = 4; n <= 6; ++n) {
        auto rep = coradical_check(reg, n);
        if (!rep.pass) {
          pass = false;
          bad = " first failure at n=" + std::to_string(n);
        }
      }
    });
    report(7, pass,
           "coradical filtration: F_k = R_k dimension- and subspace-wise, n <= 6" + bad + "  [" +
               std::to_string(secs) + "s]");
  }

  // ---------------------------------------------------------------- 8
  {
    bool pass = true;
    std::ostringstream detail;
    double secs = timed([&] {
      for (int n = 3; n <= 10; ++n)
        for (int k = 0; k <= n - 3; ++k) {
          long got = static_cast<long>(dissections(n, k).size());
          if (Int(got) != cayley_count(n, k)) {
            pass = false;
            detail << " Cayley mismatch at n=" << n << " k=" << k << ";";
          }
        }
      if (dissections(4, 1).size() != 2) { pass = false; detail << " |Diss_1(4)| != 2;"; }
      if (dissections(5, 1).size() != 5) { pass = false; detail << " |Diss_1(5)| != 5;"; }
      if (dissections(5, 2).size() != 5) { pass = false; detail << " |Diss_2(5)| != 5;"; }
      if (count_s_trees_one_edge(4) != 3) { pass = false; detail << " 4-trees(1 edge) != 3;"; }
      if (count_s_trees_one_edge(5) != 10) { pass = false; detail << " 5-trees(1 edge) != 10;"; }
      if (count_5_trees_two_edges() != 15) { pass = false; detail << " 5-trees(2 edges) != 15;"; }
    });
    report(8, pass,
           "combinatorial counts: Cayley formula (n <= 10) and the printed dissection/tree "
           "counts" +
               detail.str() + "  [" + std::to_string(secs) + "s]");
  }

  // ---------------------------------------------------------------- 9
  {
    bool pass = true;
    std::ostringstream detail;
    double secs = timed([&] {
      SpaceRegistry reg;
      std::map<int, std::vector<long>> kernelX;
      for (int s = 3; s <= 7; ++s) kernelX[s] = brown_betti_kernel(reg, s);
      auto xdims = [&](int s) {
        // row kernels up to 7, the series oracle for the size-8 cogenerators
        if (s <= 7) return kernelX.at(s);
        return brown_betti_series(s);
      };
      for (int n = 3; n <= 8; ++n) {
        auto rep = cofree_dimension_identity(n, xdims);
        if (!rep.identityHolds) {
          pass = false;
          detail << " identity fails at n=" << n << ";";
        }
      }
    });
    report(9, pass,
           "cofree dimension identity: dim C(n)_k = sum over dissections of cogenerator "
           "products, n <= 8" +
               detail.str() + "  [" + std::to_string(secs) + "s]");
  }

  // ---------------------------------------------------------------- 10
  {
    bool pass = true;
    std::ostringstream detail;
    double secs = timed([&] {
      Conventions alt1;  // alternative matching side in psi
      alt1.matchRule = Conventions::MatchRule::Greatest;
      Conventions alt2;  // globally flipped chord-form signs
      alt2.flipChordSigns = true;
      SpaceRegistry base, regMatch(alt1), regFlip(alt2);
      std::vector<SpaceRegistry*> regs{&base, &regMatch, &regFlip};
      const int n = 5;
      // (3) well-definedness, (4) exactness, (5) kernel betti, (6) phi/psi:
      // identical ranks and verdicts under all three conventions
      std::vector<std::string> summaries;
      for (auto* reg : regs) {
        std::ostringstream s;
        auto wd = suite_welldefined(*reg, n);
        s << "wd:" << wd.pass();
        for (int k = 0; k <= n - 3; ++k) s << " rank" << k << ":" << reg->space(n, k).dimension();
        auto ex = suite_exactness(*reg, n);
        s << " ex:" << ex.pass();
        auto kb = brown_betti_kernel(*reg, n);
        s << " betti:";
        for (long b : kb) s << b << ",";
        for (int r = 0; r <= n - 3; ++r)
          for (int k = r; k <= n - 3; ++k) {
            auto rep = phi_psi_check(*reg, n, r, k, true);
            s << " phi" << r << k << ":" << rep.dimsMatch << rep.phiInvertible
              << rep.phiPsiIdentity;
          }
        summaries.push_back(s.str());
      }
      if (summaries[1] != summaries[0]) {
        pass = false;
        detail << " matching-side variation changed a verdict;";
      }
      if (summaries[2] != summaries[0]) {
        pass = false;
        detail << " sign flip changed a verdict;";
      }
      if (pass) detail << " verdicts: " << summaries[0];
    });
    report(10, pass,
           "convention robustness at n = 5: alternative matching sides and flipped chord signs "
           "give identical ranks and verdicts " +
               detail.str() + "  [" + std::to_string(secs) + "s]");
  }

  // Opt-in extended coverage (GRAVITY_ACCEPTANCE_LARGE=1): the full n = 8
  // row set.  Roughly ten minutes of exact elimination; verifies d.d = 0,
  // exactness beyond position zero, and kernel = series agreement at n = 8.
  if (const char* env = std::getenv("GRAVITY_ACCEPTANCE_LARGE"); env && env[0] == '1') {
    bool pass = true;
    std::ostringstream detail;
    double secs = timed([&] {
      SpaceRegistry reg;
      std::vector<long> kernel;
      for (int q = 0; q <= 5; ++q) {
        try {
          CobarRow row(reg, 8, q);
          auto rep = check_exactness(row);
          if (!rep.exactBeyondZero) {
            pass = false;
            detail << " homology at q=" << q << ";";
          }
          kernel.push_back(rep.kernelDim0);
        } catch (const std::exception& e) {
          pass = false;
          detail << " row q=" << q << " failed: " << e.what() << ";";
        }
      }
      if (pass && kernel != brown_betti_series(8)) {
        pass = false;
        detail << " kernel != series at n=8;";
      }
    });
    report(11, pass,
           "extended (opt-in): n = 8 rows have d.d = 0, vanish beyond position 0, and their "
           "kernels equal the series inversion" +
               detail.str() + "  [" + std::to_string(secs) + "s]");
  }

  std::cout << (failures == 0 ? "ACCEPTANCE: all criteria pass"
                              : "ACCEPTANCE: " + std::to_string(failures) + " criteria FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
