#pragma once

// Command-line front end. run() parses arguments, dispatches to the library
// and maps outcomes to exit codes:
//   0 success, 1 I/O failure, 2 precondition violation or bad arguments,
//   3 certification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "etlab/bounds.hpp"
#include "etlab/constructions.hpp"
#include "etlab/errors.hpp"
#include "etlab/format.hpp"
#include "etlab/modring.hpp"
#include "etlab/search.hpp"
#include "etlab/spectral.hpp"

namespace etlab::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kPrecondition = 2, kCertification = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// JSON to `path`, or to `out` when path is empty.
inline void emit(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << j.dump(2) << '\n';
  else
    write_text(path, j.dump(2) + "\n");
}

inline std::string opt_str(const auto& o) {
  if (!o) return "";
  if constexpr (requires { o->str(); })
    return o->str();
  else if constexpr (std::is_floating_point_v<std::decay_t<decltype(*o)>>)
    return format_double(*o);
  else
    return std::to_string(*o);
}

inline std::string bound_csv(const BoundReport& r) {
  std::string s = "name,direction,k,n,t,eps,s,value,exact,preconditions_ok,certified\n";
  s += r.name + ',' + (r.direction == BoundDirection::Upper ? "upper" : "lower") + ',';
  s += opt_str(r.inputs.k) + ',' + opt_str(r.inputs.n) + ',' + opt_str(r.inputs.t) + ',';
  s += opt_str(r.inputs.eps) + ',' + opt_str(r.inputs.s) + ',';
  s += opt_str(r.value) + ',' + opt_str(r.exact) + ',' + (r.preconditions_ok ? "true" : "false") + ',';
  if (r.certified_against) s += r.certified_against->pass ? "pass" : "fail";
  s += '\n';
  return s;
}

inline int bound_status(const BoundReport& r) {
  if (!r.preconditions_ok) return kPrecondition;
  if (r.certified_against && !r.certified_against->pass) return kCertification;
  return kOk;
}

inline Rational parse_rational(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw ParameterError(std::string("cannot parse ") + what + " '" + text + "': " + e.what());
  }
}

}  // namespace detail

/// Runs one command line (args excludes the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"etlab: spectral bounds and constructions for eventown and k-town families"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  int status = kOk;
  std::string out_path;
  std::string csv_path;
  std::uint64_t budget = kDefaultSearchBudget;
  const std::uint64_t cap = dense_cap_from_env();
  std::function<void()> action;

  // -- bound ---------------------------------------------------------------
  auto* bound = app.add_subcommand("bound", "Evaluate a size bound")->require_subcommand(1);
  struct BoundArgs {
    std::int64_t k = 0, s = 0, t = 0;
    int n = 0;
    std::string eps = "0", lambda, rho, c = "1";
    bool oracle = true;
    std::vector<std::uint64_t> rows, cols;
  } b;
  auto report_bound = [&](BoundReport r) {
    if (!csv_path.empty()) detail::write_text(csv_path, detail::bound_csv(r));
    detail::emit(to_json(r), out_path, out);
    status = detail::bound_status(r);
  };
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--out", out_path, "Write JSON here instead of stdout");
    sc->add_option("--csv", csv_path, "Also write a one-row CSV");
  };
  {
    auto* sc = bound->add_subcommand("ktown", "k^{n/2}, or its supersaturated form when --eps is given");
    sc->add_option("--k", b.k)->required();
    sc->add_option("--n", b.n)->required();
    auto* eps = sc->add_option("--eps", b.eps, "Fraction of bad ordered pairs");
    add_common(sc);
    sc->callback([&, eps] {
      action = [&, eps] {
        report_bound(eps->count() ? ktown_supersat_bound(b.k, b.n, detail::parse_rational(b.eps, "--eps"))
                                  : ktown_bound(b.k, b.n));
      };
    });
  }
  {
    auto* sc = bound->add_subcommand("ktown-supersat", "k^{n/2} / (1 - k eps/(k-1))");
    sc->add_option("--k", b.k)->required();
    sc->add_option("--n", b.n)->required();
    sc->add_option("--eps", b.eps)->required();
    add_common(sc);
    sc->callback([&] { action = [&] { report_bound(ktown_supersat_bound(b.k, b.n, detail::parse_rational(b.eps, "--eps"))); }; });
  }
  {
    auto* sc = bound->add_subcommand("supersat", "lambda / (1 - (1-c) eps)");
    sc->add_option("--lambda", b.lambda)->required();
    sc->add_option("--c", b.c)->required();
    sc->add_option("--eps", b.eps)->required();
    add_common(sc);
    sc->callback([&] {
      action = [&] {
        report_bound(supersaturation_bound(detail::parse_rational(b.lambda, "--lambda"),
                                           detail::parse_rational(b.c, "--c"), detail::parse_rational(b.eps, "--eps")));
      };
    });
  }
  {
    auto* sc = bound->add_subcommand("cross", "(rho / (1 - (1-c) eps))^2");
    sc->add_option("--rho", b.rho)->required();
    sc->add_option("--c", b.c)->required();
    sc->add_option("--eps", b.eps)->required();
    add_common(sc);
    sc->callback([&] {
      action = [&] {
        report_bound(cross_bound(detail::parse_rational(b.rho, "--rho"), detail::parse_rational(b.c, "--c"),
                                 detail::parse_rational(b.eps, "--eps")));
      };
    });
  }
  {
    auto* sc = bound->add_subcommand("eventown-op", "Lower bound on op(F) for |F| = 2^{n/2} + s");
    sc->add_option("--n", b.n)->required();
    sc->add_option("--s", b.s)->required();
    add_common(sc);
    sc->callback([&] { action = [&] { report_bound(eventown_op_bound(b.n, b.s)); }; });
  }
  {
    auto* sc = bound->add_subcommand("shifted", "c(k) k^{n/2} / (1 - k eps/(k-1)) for t != 0");
    sc->add_option("--k", b.k)->required();
    sc->add_option("--n", b.n)->required();
    sc->add_option("--t", b.t)->required();
    sc->add_option("--eps", b.eps);
    add_common(sc);
    sc->callback([&] {
      action = [&] { report_bound(shifted_supersat_bound(b.k, b.n, b.t, detail::parse_rational(b.eps, "--eps"))); };
    });
  }
  {
    auto* sc = bound->add_subcommand("distance", "Point sets with s distinct distances");
    sc->add_option("--k", b.k)->required();
    sc->add_option("--n", b.n)->required();
    sc->add_option("--s", b.s)->required();
    add_common(sc);
    sc->callback([&] { action = [&] { report_bound(distance_bound(b.k, b.n, b.s)); }; });
  }
  {
    auto* sc = bound->add_subcommand("hart-iosevich", "k^{(n-1)/2} / ((k-1)/k - eps)");
    sc->add_option("--k", b.k)->required();
    sc->add_option("--n", b.n)->required();
    sc->add_option("--eps", b.eps);
    add_common(sc);
    sc->callback([&] {
      action = [&] { report_bound(hart_iosevich_bound(b.k, b.n, detail::parse_rational(b.eps, "--eps"))); };
    });
  }
  for (const char* name : {"lovasz", "singular"}) {
    auto* sc = bound->add_subcommand(name, std::string("Dense ") + name + " bound on the orthogonality graph");
    sc->add_option("--k", b.k)->required();
    sc->add_option("--n", b.n)->required();
    sc->add_option("--t", b.t);
    sc->add_flag("!--no-oracle", b.oracle, "Skip the independent-set oracle");
    sc->add_option("--budget", budget, "Oracle node budget");
    add_common(sc);
    const bool lovasz = std::string(name) == "lovasz";
    sc->callback([&, lovasz] {
      action = [&, lovasz] {
        OracleOptions opts;
        opts.certify = b.oracle;
        opts.budget = budget;
        report_bound(lovasz ? lovasz_bound(b.k, b.n, b.t, opts, cap) : singular_bound(b.k, b.n, b.t, opts, cap));
      };
    });
  }
  {
    auto* sc = bound->add_subcommand("discrepancy", "disc^2 <= 2^n |I| |J| <= N^3 on the Hadamard power");
    sc->add_option("--n", b.n)->required();
    sc->add_option("--rows", b.rows)->required()->delimiter(',');
    sc->add_option("--cols", b.cols)->required()->delimiter(',');
    sc->add_option("--out", out_path);
    sc->callback([&] {
      action = [&] {
        const auto r = discrepancy_check(b.n, b.rows, b.cols);
        detail::emit(to_json(r), out_path, out);
        status = r.ok() ? kOk : kCertification;
      };
    });
  }

  // -- construct -------------------------------------------------------------
  ConstructionSpec spec;
  std::string kind = "auto";
  auto* construct = app.add_subcommand("construct", "Build an extremal 0-town family");
  construct->add_option("--kind", kind, "eventown_pairing|prime_4t1|isotropic_chain|perfect_square|crt|auto")
      ->check(CLI::IsMember({"eventown_pairing", "prime_4t1", "isotropic_chain", "perfect_square", "crt", "auto"}));
  construct->add_option("--k", spec.k);
  construct->add_option("--n", spec.n)->required();
  construct->add_option("--m", spec.m, "Root for perfect_square");
  construct->add_option("--p", spec.p, "First modulus for crt");
  construct->add_option("--q", spec.q, "Second modulus for crt");
  construct->add_option("--seed", spec.seed, "Basis randomization for isotropic_chain (0 = canonical)");
  construct->add_option("--out", out_path, "Family JSON path (stdout when omitted)");
  construct->callback([&] {
    action = [&] {
      spec.kind = parse_construction_kind(kind);
      const auto family = build(spec);
      if (out_path.empty()) {
        out << family_to_json(family).dump(2) << '\n';
      } else {
        detail::write_text(out_path, family_to_json(family).dump(2) + "\n");
        out << nlohmann::json{{"kind", kind},
                              {"k", family.k()},
                              {"n", family.n()},
                              {"size", family.size()},
                              {"is_town", is_town(family, 0)},
                              {"out", out_path}}
                   .dump(2)
            << '\n';
      }
    };
  });

  // -- verify ----------------------------------------------------------------
  std::string family_path;
  Residue verify_t = 0;
  auto* verify = app.add_subcommand("verify", "Check a family file against the town condition and its bound");
  verify->add_option("file", family_path)->required();
  verify->add_option("--t", verify_t);
  verify->add_option("--out", out_path);
  verify->callback([&] {
    action = [&] {
      nlohmann::json raw;
      try {
        raw = nlohmann::json::parse(detail::read_text(family_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw IoError(family_path + ": " + e.what());
      }
      const auto family = family_from_json(raw);
      const Residue t = mod(verify_t, family.k());
      const auto stats = pair_stats(family, t);
      const bool town = stats.ordered_bad == 0;
      nlohmann::json j = {{"k", family.k()},
                          {"n", family.n()},
                          {"t", t},
                          {"size", family.size()},
                          {"is_town", town},
                          {"ordered_bad", stats.ordered_bad},
                          {"diagonal_bad", stats.diagonal_bad},
                          {"epsilon", stats.epsilon_ordered.str()}};
      if (stats.op_value) j["op"] = *stats.op_value;

      std::optional<BoundReport> r;
      if (t == 0 && town)
        r = ktown_bound(family.k(), family.n());
      else if (t == 0)
        r = ktown_supersat_bound(family.k(), family.n(), stats.epsilon_ordered);
      else
        r = shifted_supersat_bound(family.k(), family.n(), t, stats.epsilon_ordered);
      bool certified = true;
      if (r->preconditions_ok) {
        certified = certify(*r, static_cast<double>(family.size()), "|F|");
        j["bound"] = to_json(*r);
      } else {
        j["bound"] = nullptr;
      }
      j["pass"] = town && certified;
      detail::emit(j, out_path, out);
      status = town && certified ? kOk : kCertification;
    };
  });

  // -- search ----------------------------------------------------------------
  auto* search = app.add_subcommand("search", "Exact oracles")->require_subcommand(1);
  struct SearchArgs {
    std::int64_t k = 0, size = 0;
    int n = 0;
    Residue t = 0;
    bool subgroup = false;
  } sa;
  auto report_search = [&](const SearchResult& r) {
    detail::emit(to_json(r), out_path, out);
    if (!r.exhaustive) err << "warning: node budget exhausted; optimum is a lower bound\n";
  };
  {
    auto* sc = search->add_subcommand("mis", "Maximum independent set of the orthogonality graph");
    sc->add_option("--k", sa.k)->required();
    sc->add_option("--n", sa.n)->required();
    sc->add_option("--t", sa.t);
    sc->add_option("--budget", budget);
    sc->add_option("--out", out_path);
    sc->callback([&] {
      action = [&] { report_search(max_independent_set(OrthogonalityGraph(sa.k, sa.n, sa.t), budget, cap)); };
    });
  }
  {
    auto* sc = search->add_subcommand("town", "Largest t-town in (Z/k)^n");
    sc->add_option("--k", sa.k)->required();
    sc->add_option("--n", sa.n)->required();
    sc->add_option("--t", sa.t);
    sc->add_flag("--subgroup", sa.subgroup, "Search subgroups only (t = 0)");
    sc->add_option("--budget", budget);
    sc->add_option("--out", out_path);
    sc->callback([&] {
      action = [&] {
        if (sa.subgroup && mod(sa.t, sa.k == 0 ? 1 : sa.k) != 0)
          throw ParameterError("--subgroup requires t = 0");
        report_search(sa.subgroup ? max_town_subgroup(sa.k, sa.n, budget, cap) : max_town(sa.k, sa.n, sa.t, budget, cap));
      };
    });
  }
  {
    auto* sc = search->add_subcommand("min-op", "Minimum op(F) over families of subsets of [n] with |F| = size");
    sc->add_option("--n", sa.n)->required();
    sc->add_option("--size", sa.size)->required();
    sc->add_option("--budget", budget);
    sc->add_option("--out", out_path);
    sc->callback([&] { action = [&] { report_search(min_op_at_size(sa.n, sa.size, budget)); }; });
  }
  {
    auto* sc = search->add_subcommand("distance", "Largest single-distance set containing the origin");
    sc->add_option("--k", sa.k)->required();
    sc->add_option("--n", sa.n)->required();
    sc->add_option("--budget", budget);
    sc->add_option("--out", out_path);
    sc->callback([&] { action = [&] { report_search(max_single_distance_set(sa.k, sa.n, budget, cap)); }; });
  }

  // -- constants -------------------------------------------------------------
  auto* constants = app.add_subcommand("constants", "Shifted-product constants")->require_subcommand(1);
  struct ConstArgs {
    std::int64_t k = 0, k_max = 0;
    Residue t = 1;
  } ca;
  {
    auto* sc = constants->add_subcommand("c-constant", "c(t, k) for one t, or the table over t");
    sc->add_option("--k", ca.k)->required();
    auto* topt = sc->add_option("--t", ca.t);
    sc->add_option("--out", out_path);
    sc->add_option("--csv", csv_path);
    sc->callback([&, topt] {
      action = [&, topt] {
        auto row = [&](Residue t, const CConstant& c) {
          return nlohmann::json{{"k", ca.k},
                                {"t", t},
                                {"value", round_sig(c.value)},
                                {"unit", c.unit},
                                {"attains_lower_limit", c.attains_lower_limit}};
        };
        if (topt->count()) {
          detail::emit(row(ca.t, c_constant_detail(ca.t, ca.k)), out_path, out);
          return;
        }
        const auto table = c_constant_table(ca.k);
        nlohmann::json j = nlohmann::json::array();
        std::string csv = "k,t,c,unit,attains_lower_limit\n";
        for (std::size_t t = 0; t < table.size(); ++t) {
          j.push_back(row(static_cast<Residue>(t), table[t]));
          csv += std::to_string(ca.k) + ',' + std::to_string(t) + ',' + format_double(table[t].value) + ',' +
                 std::to_string(table[t].unit) + ',' + (table[t].attains_lower_limit ? "true" : "false") + '\n';
        }
        if (!csv_path.empty()) detail::write_text(csv_path, csv);
        detail::emit(j, out_path, out);
      };
    });
  }
  {
    auto* sc = constants->add_subcommand("c-average", "c(k) for prime k, or every prime 3 <= k <= --k-max");
    auto* kopt = sc->add_option("--k", ca.k);
    auto* kmax = sc->add_option("--k-max", ca.k_max);
    kopt->excludes(kmax);
    sc->add_option("--t", ca.t);
    sc->add_option("--out", out_path);
    sc->add_option("--csv", csv_path);
    sc->callback([&, kopt, kmax] {
      action = [&, kopt, kmax] {
        if (!kopt->count() && !kmax->count()) throw ParameterError("c-average: give --k or --k-max");
        std::vector<std::int64_t> ks;
        if (kopt->count()) {
          ks.push_back(ca.k);
        } else {
          for (std::int64_t k = 3; k <= ca.k_max; ++k)
            if (is_prime(k) && mod(ca.t, k) != 0) ks.push_back(k);
        }
        nlohmann::json j = nlohmann::json::array();
        std::string csv = "k,c_average\n";
        for (auto k : ks) {
          const double v = c_average(k, ca.t);
          j.push_back({{"k", k}, {"c_average", round_sig(v)}});
          csv += std::to_string(k) + ',' + format_double(v) + '\n';
        }
        if (!csv_path.empty()) detail::write_text(csv_path, csv);
        nlohmann::json doc = {{"t", ca.t}, {"limit", round_sig(kCAverageLimit)}, {"values", j}};
        detail::emit(doc, out_path, out);
      };
    });
  }

  // -- spectrum --------------------------------------------------------------
  struct SpecArgs {
    std::int64_t k = 0;
    int n = 1;
    Residue shift = 0;
    double tol = 1e-8;
    bool numeric = true;
  } sp;
  auto* spectrum = app.add_subcommand("spectrum", "Closed-form and numeric spectrum of Re(phi^shift A^(x)n)");
  spectrum->add_option("--k", sp.k)->required();
  spectrum->add_option("--n", sp.n)->required();
  spectrum->add_option("--shift", sp.shift);
  spectrum->add_option("--tol", sp.tol);
  spectrum->add_flag("!--no-numeric", sp.numeric, "Closed form only");
  spectrum->add_option("--out", out_path);
  spectrum->callback([&] {
    action = [&] {
      const auto s = spectral_summary(sp.k, sp.n, sp.shift, sp.tol, cap, sp.numeric);
      detail::emit(to_json(s), out_path, out);
      status = s.consistent() ? kOk : kCertification;
    };
  });

  std::vector<const char*> argv{"etlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  }

  try {
    if (action) action();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kCertification;
  } catch (const std::invalid_argument& e) {  // ParameterError, DimensionError, HypothesisError
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const ConstructionInfeasible& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return status;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace etlab::cli
