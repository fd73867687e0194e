#pragma once

// Batch command-line interface: enumeration, Betti tables, verification
// suites and artifact dumps.  Exit codes: 0 success, 2 usage error,
// 3 verification failure, 4 I/O error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gravity/cobar.hpp"
#include "gravity/decomposition.hpp"
#include "gravity/json_io.hpp"
#include "gravity/series.hpp"
#include "gravity/task_pool.hpp"
#include "gravity/verify.hpp"

namespace gravity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitIo = 4;

// linear-algebra commands are capped here unless --allow-large is given
inline constexpr int kLinearAlgebraCap = 8;
inline constexpr int kMaxN = 12;

struct RunConfig {
  std::string format = "text";  // text | json | csv
  std::string cacheDir;
  int jobs = 1;
  bool flipSigns = false;
  std::string matchRule = "least";
  bool allowLarge = false;

  Conventions conventions() const {
    Conventions c;
    c.flipChordSigns = flipSigns;
    c.matchRule = matchRule == "greatest" ? Conventions::MatchRule::Greatest
                                          : Conventions::MatchRule::Least;
    return c;
  }
};

// Attach the disk cache to a registry: gravity-space pivot data is loaded
// (and re-verified) on hit and stored on miss; nbc bases are stored per n and
// refreshed whenever the recomputed bases disagree with the file.
inline void attach_cache(SpaceRegistry& reg, const DiskCache& cache) {
  if (!cache.enabled()) return;
  std::string conv = reg.conventions().fingerprint();
  reg.setCacheHooks(
      [cache, conv](int n, int k) -> std::optional<SpacePivotData> {
        auto j = cache.load("space_n" + std::to_string(n) + "_k" + std::to_string(k) + "_" + conv);
        if (!j) return std::nullopt;
        try {
          SpacePivotData d;
          d.rank = (*j)["rank"].get<int>();
          d.pivots = (*j)["pivots"].get<std::vector<int>>();
          d.filtDims = (*j)["filt_dims"].get<std::vector<int>>();
          d.stagePivots = (*j)["stage_pivots"].get<std::vector<std::vector<int>>>();
          return d;
        } catch (...) {
          return std::nullopt;
        }
      },
      [cache, conv](int n, int k, const SpacePivotData& d) {
        Json j;
        j["module"] = "gravity";
        j["n"] = n;
        j["k"] = k;
        j["rank"] = d.rank;
        j["pivots"] = d.pivots;
        j["filt_dims"] = d.filtDims;
        j["stage_pivots"] = d.stagePivots;
        cache.store("space_n" + std::to_string(n) + "_k" + std::to_string(k) + "_" + conv, j);
      },
      [cache, conv](const OSAlgebra& alg) {
        Json j;
        j["module"] = "arnold";
        j["n"] = alg.n();
        j["betti"] = alg.betti_moduli();
        Json perDeg = Json::array();
        for (int k = 0; k <= alg.dim(); ++k) {
          Json sets = Json::array();
          for (Mask m : alg.nbc_basis(k)) sets.push_back(mask_to_list(m));
          perDeg.push_back(std::move(sets));
        }
        j["nbc"] = std::move(perDeg);
        std::string key = cache.nbcKey(alg.n(), conv);
        auto existing = cache.load(key);
        if (!existing || (*existing)["nbc"] != j["nbc"]) cache.store(key, j);
      });
}

namespace detail {

inline std::string join_longs(const std::vector<long>& v, const char* sep = ",") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

inline void emit(std::ostream& out, const RunConfig& cfg, const std::string& command,
                 const Json& params, const Json& result, const std::string& text,
                 const std::string& csv) {
  if (cfg.format == "json")
    out << json_envelope(command, params, result).dump(1) << "\n";
  else if (cfg.format == "csv")
    out << csv;
  else
    out << text;
}

inline Json suite_to_json(const SuiteResult& s) {
  Json arr = Json::array();
  for (const auto& i : s.instances) {
    Json j;
    j["name"] = i.name;
    j["pass"] = i.pass;
    j["detail"] = i.detail;
    arr.push_back(std::move(j));
  }
  Json out;
  out["suite"] = s.suite;
  out["pass"] = s.pass();
  out["instances"] = std::move(arr);
  return out;
}

inline std::string suite_to_text(const SuiteResult& s) {
  std::ostringstream os;
  for (const auto& i : s.instances)
    os << (i.pass ? "[PASS] " : "[FAIL] ") << i.name << "  (" << i.detail << ")\n";
  os << "suite " << s.suite << ": " << (s.pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

inline std::string suite_to_csv(const SuiteResult& s) {
  std::ostringstream os;
  os << "suite,name,pass,detail\n";
  for (const auto& i : s.instances)
    os << s.suite << ",\"" << i.name << "\"," << (i.pass ? 1 : 0) << ",\"" << i.detail << "\"\n";
  return os.str();
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dihedral gravity cooperad verification engine"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  RunConfig cfg;
  if (const char* env = std::getenv("GRAVITY_CACHE_DIR")) cfg.cacheDir = env;
  app.add_option("--format", cfg.format, "output format: text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--cache-dir", cfg.cacheDir, "disk cache directory (env GRAVITY_CACHE_DIR)");
  app.add_option("--jobs", cfg.jobs, "worker pool width")->check(CLI::Range(1, 64));
  app.add_flag("--flip-signs", cfg.flipSigns, "globally flip all chord-form signs");
  app.add_option("--match-rule", cfg.matchRule, "matching side rule for psi")
      ->check(CLI::IsMember({"least", "greatest"}));
  app.add_flag("--allow-large", cfg.allowLarge, "lift the default n cap on linear algebra");

  // dissections ------------------------------------------------------------
  auto* cmdDiss = app.add_subcommand("dissections", "enumerate or count dissections");
  int dN = 0, dK = -1;
  bool dCount = false, dVerifyCayley = false;
  cmdDiss->add_option("--n", dN, "polygon size")->required()->check(CLI::Range(3, kMaxN));
  cmdDiss->add_option("--k", dK, "number of chords (all k when omitted)");
  cmdDiss->add_flag("--count", dCount, "print counts only");
  cmdDiss->add_flag("--verify-cayley", dVerifyCayley, "compare with Cayley's formula");

  // betti ------------------------------------------------------------------
  auto* cmdBetti = app.add_subcommand("betti", "Betti tables of the moduli spaces");
  std::string bSpace = "moduli", bMethod;
  int bN = 0;
  bool bAllMethods = false;
  cmdBetti->add_option("--space", bSpace, "moduli | brown")
      ->check(CLI::IsMember({"moduli", "brown"}));
  cmdBetti->add_option("--n", bN, "polygon size")->required()->check(CLI::Range(3, kMaxN));
  cmdBetti->add_option("--method", bMethod, "kernel | series | euler | nbc | product");
  cmdBetti->add_flag("--all-methods", bAllMethods, "cross-check all applicable methods");

  // verify -----------------------------------------------------------------
  auto* cmdVerify = app.add_subcommand("verify", "run verification suites");
  std::string vSuite;
  int vN = 0, vNMax = -1, vR = -1;
  bool vPsi = false;
  cmdVerify
      ->add_option("suite", vSuite,
                   "welldefined | exactness | filtration | phi | coradical | betti")
      ->required()
      ->check(CLI::IsMember({"welldefined", "exactness", "filtration", "phi", "coradical",
                             "betti"}));
  cmdVerify->add_option("--n", vN, "polygon size (or range start)")
      ->required()
      ->check(CLI::Range(3, kMaxN));
  cmdVerify->add_option("--n-max", vNMax, "range end (inclusive)");
  cmdVerify->add_option("--r", vR, "restrict phi suite to one filtration stage");
  cmdVerify->add_flag("--with-psi", vPsi, "also build Psi and check Phi.Psi = id");

  // dump -------------------------------------------------------------------
  auto* cmdDump = app.add_subcommand("dump", "dump row complexes and space presentations");
  std::string dWhat;
  int uN = 0, uQ = -1, uK = -1;
  cmdDump->add_option("what", dWhat, "row | space")->required()
      ->check(CLI::IsMember({"row", "space"}));
  cmdDump->add_option("--n", uN, "polygon size")->required()->check(CLI::Range(3, kMaxN));
  cmdDump->add_option("--q", uQ, "row index");
  cmdDump->add_option("--k", uK, "degree");
  std::string dumpPath;
  cmdDump->add_option("--out", dumpPath, "write the JSON to a file instead of stdout");

  std::vector<const char*> argv;
  argv.push_back("gravity");
  for (auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  auto capCheck = [&](int n) {
    if (n > kLinearAlgebraCap && !cfg.allowLarge) {
      err << "n = " << n << " exceeds the default linear-algebra cap " << kLinearAlgebraCap
          << " (use --allow-large)\n";
      return false;
    }
    return true;
  };

  try {
    if (*cmdDiss) {
      // out-of-range k yields an empty listing by specification
      std::vector<int> ks;
      if (dK >= 0) ks.push_back(dK);
      else
        for (int k = 0; k <= dN - 3; ++k) ks.push_back(k);
      Json result;
      std::ostringstream text, csv;
      csv << "n,k,count" << (dVerifyCayley ? ",cayley,match" : "") << "\n";
      bool cayleyOk = true;
      Json perK = Json::array();
      for (int k : ks) {
        auto ds = k <= dN - 3 ? dissections(dN, k) : std::vector<Dissection>{};
        Json jk;
        jk["k"] = k;
        jk["count"] = ds.size();
        if (dVerifyCayley) {
          Int want = cayley_count(dN, k);
          bool match = (want == Int(static_cast<long>(ds.size())));
          cayleyOk = cayleyOk && match;
          jk["cayley"] = want.get_str();
          jk["match"] = match;
          csv << dN << "," << k << "," << ds.size() << "," << want.get_str() << "," << match
              << "\n";
          text << "n=" << dN << " k=" << k << ": " << ds.size() << " dissections (Cayley "
               << want.get_str() << (match ? ", match" : ", MISMATCH") << ")\n";
        } else {
          csv << dN << "," << k << "," << ds.size() << "\n";
          text << "n=" << dN << " k=" << k << ": " << ds.size() << " dissections\n";
        }
        if (!dCount) {
          Json list = Json::array();
          for (const auto& d : ds) {
            Json cj = Json::array();
            for (const auto& c : d.chords) cj.push_back(Json::array({c.a, c.b}));
            list.push_back(std::move(cj));
            if (cfg.format == "text") {
              text << " ";
              for (const auto& c : d.chords) text << " " << c.str();
              text << "\n";
            }
          }
          jk["dissections"] = std::move(list);
        }
        perK.push_back(std::move(jk));
      }
      result["n"] = dN;
      result["per_k"] = std::move(perK);
      Json params;
      params["n"] = dN;
      if (dK >= 0) params["k"] = dK;
      params["count"] = dCount;
      params["verify_cayley"] = dVerifyCayley;
      detail::emit(out, cfg, "dissections", params, result, text.str(), csv.str());
      return (dVerifyCayley && !cayleyOk) ? kExitVerification : kExitOk;
    }

    if (*cmdBetti) {
      Json params;
      params["space"] = bSpace;
      params["n"] = bN;
      std::map<std::string, std::vector<long>> tables;
      SpaceRegistry reg(cfg.conventions());
      attach_cache(reg, DiskCache(cfg.cacheDir));
      if (bSpace == "moduli") {
        std::vector<std::string> methods;
        if (bAllMethods) methods = {"nbc", "product"};
        else methods = {bMethod.empty() ? "product" : bMethod};
        for (const auto& m : methods) {
          if (m == "nbc") {
            if (!capCheck(bN)) return kExitUsage;
            tables[m] = reg.os(bN).betti_moduli();
          } else if (m == "product") {
            IntPolynomial p = poincare_moduli(bN);
            std::vector<long> b;
            for (int k = 0; k <= bN - 3; ++k) b.push_back(p.coeff(k).get_si());
            tables[m] = b;
          } else {
            err << "unknown moduli method " << m << "\n";
            return kExitUsage;
          }
        }
      } else {
        std::vector<std::string> methods;
        if (bAllMethods) {
          // the kernel route joins the cross-check when within the cap
          if (bN <= kLinearAlgebraCap || cfg.allowLarge) methods.push_back("kernel");
          methods.push_back("series");
          methods.push_back("euler");
        } else {
          methods = {bMethod.empty() ? "series" : bMethod};
        }
        for (const auto& m : methods) {
          if (m == "kernel") {
            if (!capCheck(bN)) return kExitUsage;
            tables[m] = brown_betti_kernel(reg, bN);
          } else if (m == "series") {
            tables[m] = brown_betti_series(bN);
          } else if (m == "euler") {
            tables[m] = euler_check(bN).euler;
          } else {
            err << "unknown brown method " << m << "\n";
            return kExitUsage;
          }
        }
      }
      bool agree = true;
      const std::vector<long>* first = nullptr;
      for (const auto& [m, t] : tables) {
        if (!first) first = &t;
        else if (*first != t) agree = false;
      }
      Json result;
      Json jt;
      for (const auto& [m, t] : tables) jt[m] = t;
      result["betti"] = std::move(jt);
      result["methods_agree"] = agree;
      std::ostringstream text, csv;
      csv << "method,betti\n";
      for (const auto& [m, t] : tables) csv << m << ",\"" << detail::join_longs(t) << "\"\n";
      text << detail::join_longs(first ? *first : std::vector<long>{}) << "\n";
      if (tables.size() > 1)
        text << tables.size() << "/" << tables.size()
             << (agree ? " methods agree" : " METHODS DISAGREE") << "\n";
      detail::emit(out, cfg, "betti", params, result, text.str(), csv.str());
      return agree ? kExitOk : kExitVerification;
    }

    if (*cmdVerify) {
      int nLo = vN, nHi = vNMax < 0 ? vN : vNMax;
      if (nHi < nLo) {
        err << "--n-max smaller than --n\n";
        return kExitUsage;
      }
      std::vector<int> ns;
      for (int n = nLo; n <= nHi; ++n) ns.push_back(n);
      for (int n : ns)
        if (vSuite != "betti" && !capCheck(n)) return kExitUsage;
      std::vector<SuiteResult> results(ns.size());
      SpaceRegistry reg(cfg.conventions());
      attach_cache(reg, DiskCache(cfg.cacheDir));
      std::vector<std::function<void()>> tasks;
      for (size_t i = 0; i < ns.size(); ++i)
        tasks.push_back([&, i] {
          int n = ns[i];
          if (vSuite == "welldefined") results[i] = suite_welldefined(reg, n);
          else if (vSuite == "exactness") results[i] = suite_exactness(reg, n);
          else if (vSuite == "filtration") results[i] = suite_filtration(reg, n);
          else if (vSuite == "phi") results[i] = suite_phi(reg, n, vPsi, vR);
          else if (vSuite == "coradical") results[i] = suite_coradical(reg, n);
          else if (vSuite == "betti")
            results[i] = suite_betti_agreement(reg, n, n <= kLinearAlgebraCap || cfg.allowLarge);
        });
      run_parallel(tasks, cfg.jobs);
      bool pass = true;
      std::ostringstream text, csv;
      Json arr = Json::array();
      for (const auto& r : results) {
        pass = pass && r.pass();
        text << detail::suite_to_text(r);
        csv << detail::suite_to_csv(r);
        arr.push_back(detail::suite_to_json(r));
      }
      Json params;
      params["suite"] = vSuite;
      params["n"] = nLo;
      params["n_max"] = nHi;
      Json result;
      result["suites"] = std::move(arr);
      result["pass"] = pass;
      detail::emit(out, cfg, "verify", params, result, text.str(), csv.str());
      return pass ? kExitOk : kExitVerification;
    }

    if (*cmdDump) {
      SpaceRegistry reg(cfg.conventions());
      attach_cache(reg, DiskCache(cfg.cacheDir));
      Json result;
      Json params;
      params["what"] = dWhat;
      params["n"] = uN;
      if (!capCheck(uN)) return kExitUsage;
      if (dWhat == "row") {
        if (uQ < 0 || uQ > uN - 3) {
          err << "dump row: need 0 <= q <= n-3\n";
          return kExitUsage;
        }
        params["q"] = uQ;
        CobarRow row(reg, uN, uQ);
        result["n"] = uN;
        result["q"] = uQ;
        result["weight"] = 2 * uQ;
        result["dims"] = row.dims();
        Json positions = Json::array();
        for (int p = 0; p <= uQ; ++p) {
          Json js = Json::array();
          for (const auto& s : row.summands(p)) {
            Json j;
            Json cj = Json::array();
            for (const auto& c : s.d.chords) cj.push_back(Json::array({c.a, c.b}));
            j["dissection"] = std::move(cj);
            j["degrees"] = s.degs;
            j["dim"] = s.dim;
            js.push_back(std::move(j));
          }
          positions.push_back(std::move(js));
        }
        result["summands"] = std::move(positions);
        Json diffs = Json::array();
        for (const auto& d : row.differentials()) diffs.push_back(matrix_to_json(d));
        result["differentials"] = std::move(diffs);
      } else {
        if (uK < 0 || uK > uN - 3) {
          err << "dump space: need 0 <= k <= n-3\n";
          return kExitUsage;
        }
        params["k"] = uK;
        const GravitySpace& S = reg.space(uN, uK);
        result["n"] = uN;
        result["k"] = uK;
        result["weight"] = 2 * uK;
        result["gravity_degree"] = uK - (uN - 3);
        result["monomials"] = S.monomialCount();
        result["rank"] = S.dimension();
        result["relations"] = static_cast<int>(S.relationKernel().size());
        Json mons = Json::array();
        for (int j = 0; j < S.monomialCount(); ++j) {
          Json cj = Json::array();
          for (const auto& c : S.monomialChords(j)) cj.push_back(Json::array({c.a, c.b}));
          mons.push_back(std::move(cj));
        }
        result["monomial_list"] = std::move(mons);
        result["pivots"] = S.pivots();
        result["filtration_dims"] = S.filtrationDims();
      }
      Json envelope = json_envelope(dWhat == "row" ? "dump row" : "dump space", params, result);
      std::string payload = envelope.dump(1) + "\n";
      if (!dumpPath.empty()) {
        std::ofstream f(dumpPath);
        if (!f) {
          err << "cannot write " << dumpPath << "\n";
          return kExitIo;
        }
        f << payload;
        out << "wrote " << dumpPath << "\n";
      } else {
        out << payload;
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitUsage;
}

}  // namespace gravity::cli
