#ifndef UCRISK_CLI_HPP
#define UCRISK_CLI_HPP

// Command dispatch for the ucrisk tool. `run` takes the arguments after the
// program name and returns the process exit code:
//   0 success, 2 validation error, 3 property-check failure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ucrisk/capacity.hpp"
#include "ucrisk/expr.hpp"
#include "ucrisk/gexp.hpp"
#include "ucrisk/io.hpp"
#include "ucrisk/risk.hpp"
#include "ucrisk/scenario.hpp"

namespace ucrisk::cli {

using ojson = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kValidation = 2, kPropertyFailure = 3 };

inline const std::vector<std::string> kCommands = {"capacity", "risk",    "penalty",  "maximizer",
                                                   "rhomin",   "reduce",  "canonical", "riskless",
                                                   "gexp",     "verify",  "counterexample"};

struct Options {
  std::string command;
  std::string scenarios;
  std::vector<std::string> payoffs;
  std::string measure;
  std::string lattice;
  std::string format = "json";
  std::string weights;
  double p = 1.0;
  std::optional<double> eps;
  double eta = 0.1;
  std::optional<double> theta;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::size_t trials = 500;
  std::size_t atoms = 500;
};

/// Twelve significant digits; infinities become null.
inline ojson num(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

inline std::string text_num(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

/// Per-member row for the csv format.
struct Row {
  std::size_t index;
  double expectation;
  double penalty;
  double contribution;
};

struct Report {
  ojson body = ojson::object();
  std::vector<Row> rows;
};

inline void emit_scalar(std::ostream& os, const ojson& v) {
  if (v.is_null()) os << "null";
  else if (v.is_number_float()) os << text_num(v.get<double>());
  else if (v.is_string()) os << v.get<std::string>();
  else os << v.dump();
}

inline void emit(const Report& rep, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << rep.body.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    if (!rep.rows.empty()) {
      out << "index,expectation,penalty,contribution\n";
      for (const auto& r : rep.rows)
        out << r.index << ',' << text_num(r.expectation) << ',' << text_num(r.penalty) << ','
            << text_num(r.contribution) << '\n';
      return;
    }
    out << "key,value\n";
    for (const auto& [k, v] : rep.body.items()) {
      out << k << ',';
      if (v.is_structured()) out << '"' << v.dump() << '"';
      else emit_scalar(out, v);
      out << '\n';
    }
    return;
  }
  for (const auto& [k, v] : rep.body.items()) {
    out << k << ": ";
    if (v.is_structured()) out << v.dump();
    else emit_scalar(out, v);
    out << '\n';
  }
}

namespace detail {

inline io::ScenarioDocument load_scenarios(const Options& o) {
  if (o.scenarios.empty()) throw ValidationError("--scenarios is required for '" + o.command + "'");
  return io::parse_scenarios(io::read_file(o.scenarios), o.scenarios);
}

inline Payoff load_payoff(const Options& o, const SpacePtr& space, std::size_t which = 0) {
  if (o.payoffs.size() <= which) throw ValidationError("--payoff is required for '" + o.command + "'");
  const auto& path = o.payoffs[which];
  return io::parse_payoff(io::read_file(path), path).on(space, path);
}

inline RiskSpec risk_spec(const ScenarioSet& s) {
  double m = kInfinity;
  for (const auto& q : s) m = std::min(m, q.penalty);
  return RiskSpec(s, m <= kDefaultTol);
}

inline std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ValidationError(std::string("bad number '") + item + "' in " + what);
    out.push_back(v);
  }
  return out;
}

inline LatticeParams lattice_params(const Options& o) {
  auto v = parse_list(o.lattice, "--lattice");
  if (v.size() != 5) throw ValidationError("--lattice expects K,T,d,sigma_low,sigma_high");
  if (v[0] < 1 || v[0] != std::floor(v[0]) || (v[2] != 1 && v[2] != 2))
    throw ValidationError("--lattice: K must be a positive integer and d must be 1 or 2");
  return LatticeParams::uniform(static_cast<std::size_t>(v[0]), v[1], static_cast<std::size_t>(v[2]), v[3], v[4]);
}

/// Path payoff from an expression or from explicit values keyed by path id.
inline std::function<double(const PathView&)> path_payoff(const Options& o, const VolLattice& lat) {
  if (o.payoffs.empty()) throw ValidationError("--payoff is required for '" + o.command + "'");
  auto doc = io::parse_payoff(io::read_file(o.payoffs[0]), o.payoffs[0]);
  if (doc.expr) return [e = *doc.expr](const PathView& p) { return e.eval_path(p); };
  return [vals = *doc.values, &lat, src = o.payoffs[0]](const PathView& p) {
    auto id = lat.path_id(p.values);
    auto it = vals.find(id);
    if (it == vals.end()) throw ValidationError(src + ": payoff is not total, missing path '" + id + "'");
    return it->second;
  };
}

inline ojson strategy_json(const Strategy& st, std::size_t max_nodes = 64) {
  ojson arr = ojson::array();
  for (std::size_t j = 0; j < st.sigma.size() && j < max_nodes; ++j) {
    ojson row = ojson::array();
    for (double s : st.sigma[j]) row.push_back(num(s));
    arr.push_back(row);
  }
  return arr;
}

inline ojson scenario_check_json(const ScenarioCheckReport& r) {
  return {{"martingale_max_violation", num(r.martingale_max_violation)},
          {"orthogonality_max_violation", num(r.orthogonality_max_violation)},
          {"qv_within_bounds", r.qv_all_within()},
          {"paths", r.paths.size()}};
}

inline ojson axiom_json(const AxiomReport& rep) {
  ojson v = ojson::array();
  for (const auto& a : rep.verdicts) {
    ojson e{{"axiom", a.axiom}, {"checked", a.checked}, {"passed", a.passed}, {"max_violation", num(a.max_violation)}};
    if (a.witness) {
      ojson x = ojson::array(), y = ojson::array();
      for (double t : a.witness->x) x.push_back(num(t));
      for (double t : a.witness->y) y.push_back(num(t));
      e["witness"] = {{"x", x}, {"y", y}, {"scalar", num(a.witness->scalar)}};
    }
    v.push_back(e);
  }
  return v;
}

}  // namespace detail

/// Executes one command; returns the exit code.
inline int execute(const Options& o, std::ostream& out) {
  using namespace detail;
  Report rep;
  rep.body["command"] = o.command;
  int code = kOk;

  if (o.command == "capacity") {
    auto doc = load_scenarios(o);
    auto x = load_payoff(o, doc.set.space());
    auto c = capacity_argmax(x, doc.set, o.p);
    rep.body["p"] = num(o.p);
    rep.body["capacity"] = num(c.value);
    rep.body["index"] = c.index + 1;
    for (std::size_t n = 0; n < doc.set.size(); ++n) {
      double e = expectation(doc.set[n].measure, x, o.p);
      rep.rows.push_back({n + 1, e, doc.set[n].penalty, e});
    }
  } else if (o.command == "risk" || o.command == "maximizer") {
    auto doc = load_scenarios(o);
    auto spec = risk_spec(doc.set);
    auto x = load_payoff(o, doc.set.space());
    auto mx = maximizer(spec, x);
    if (o.command == "risk") {
      rep.body["rho"] = num(mx.value);
      rep.body["maximizer"] = mx.index + 1;
      if (o.theta) {
        auto p = canonical_measure(doc.set.finite_part());
        rep.body["theta"] = num(*o.theta);
        rep.body["entropic"] = num(entropic_oracle(p, *o.theta, x));
      }
    } else {
      rep.body["index"] = mx.index + 1;
      rep.body["id"] = doc.names[mx.index];
      rep.body["value"] = num(mx.value);
      rep.body["penalty"] = num(doc.set[mx.index].penalty);
      ojson w = ojson::object();
      const auto& q = doc.set[mx.index].measure;
      for (std::size_t i = 0; i < q.space()->size(); ++i)
        if (q.charges(i)) w[q.space()->id(i)] = num(q[i]);
      rep.body["weights"] = w;
    }
    for (std::size_t n = 0; n < doc.set.size(); ++n) {
      double e = -expectation_signed(doc.set[n].measure, x);
      rep.rows.push_back({n + 1, e, doc.set[n].penalty, e - doc.set[n].penalty});
    }
  } else if (o.command == "penalty") {
    auto doc = load_scenarios(o);
    auto spec = risk_spec(doc.set);
    if (!o.measure.empty()) {
      auto q = io::parse_measure(io::read_file(o.measure), doc.set.space(), o.measure);
      auto pv = penalty(spec, q);
      rep.body["penalty"] = num(pv.value);
      if (pv.finite()) {
        ojson l = ojson::array();
        for (double v : pv.lambda) l.push_back(num(v));
        rep.body["lambda"] = l;
      }
    } else {
      ojson arr = ojson::array();
      for (std::size_t n = 0; n < doc.set.size(); ++n) {
        double minimal = doc.set[n].finite() ? penalty(spec, doc.set[n].measure).value : kInfinity;
        arr.push_back({{"index", n + 1}, {"declared", num(doc.set[n].penalty)}, {"minimal", num(minimal)}});
        rep.rows.push_back({n + 1, 0.0, doc.set[n].penalty, minimal});
      }
      rep.body["penalties"] = arr;
    }
  } else if (o.command == "rhomin") {
    auto doc = load_scenarios(o);
    auto spec = risk_spec(doc.set);
    auto x = load_payoff(o, doc.set.space());
    auto d = rho_min_diagnostic(spec, x, o.tol);
    rep.body["rho_min"] = num(d.closed_form);
    rep.body["canonical_capacity"] = num(canonical_capacity(spec, x));
    rep.body["grid_monotone"] = d.monotone;
    rep.body["grid_converges"] = d.converges;
    ojson ratios = ojson::array();
    for (double r : d.ratios) ratios.push_back(num(r));
    rep.body["grid_ratios"] = ratios;
    for (std::size_t n = 0; n < doc.set.size(); ++n) {
      double e = -expectation_signed(doc.set[n].measure, x);
      rep.rows.push_back({n + 1, e, doc.set[n].penalty, doc.set[n].finite() ? e : -kInfinity});
    }
    if (!d.monotone || !d.converges) code = kPropertyFailure;
  } else if (o.command == "reduce") {
    auto doc = load_scenarios(o);
    if (!o.eps) throw ValidationError("--eps is required for 'reduce'");
    std::vector<Payoff> bank;
    for (std::size_t j = 0; j < o.payoffs.size(); ++j) bank.push_back(load_payoff(o, doc.set.space(), j));
    TestBank tb = bank.empty() ? TestBank::indicators(doc.set.space()) : TestBank(bank);
    auto r = reduce(doc.set, tb, *o.eps);
    ojson idx = ojson::array();
    for (auto i : r.indices) idx.push_back(i + 1);
    rep.body["eps"] = num(*o.eps);
    rep.body["indices"] = idx;
    rep.body["achieved_error"] = num(r.achieved_error);
    rep.body["bank_size"] = r.bank_size;
    rep.body["members"] = doc.set.size();
  } else if (o.command == "canonical") {
    auto doc = load_scenarios(o);
    std::optional<std::vector<double>> w;
    if (!o.weights.empty()) w = parse_list(o.weights, "--weights");
    auto p = canonical_measure(doc.set, w);
    auto alphas = w ? *w : geometric_weights(doc.set.size());
    std::vector<Payoff> ind;
    for (std::size_t i = 0; i < doc.set.space()->size(); ++i) ind.push_back(Payoff::indicator(doc.set.space(), i));
    bool ok = null_sets_agree(p, doc.set, ind);
    ojson a = ojson::array();
    for (double v : alphas) a.push_back(num(v));
    rep.body["alphas"] = a;
    ojson pw = ojson::object();
    for (std::size_t i = 0; i < p.space()->size(); ++i) pw[p.space()->id(i)] = num(p[i]);
    rep.body["weights"] = pw;
    rep.body["null_sets_agree"] = ok;
    for (std::size_t n = 0; n < doc.set.size(); ++n) rep.rows.push_back({n + 1, alphas[n], doc.set[n].penalty, alphas[n]});
    if (!ok) code = kPropertyFailure;
  } else if (o.command == "riskless") {
    auto doc = load_scenarios(o);
    auto spec = risk_spec(doc.set);
    auto x = load_payoff(o, doc.set.space());
    auto r = riskless(spec, x, kDefaultTol);
    rep.body["riskless"] = r.riskless;
    if (!r.riskless) {
      rep.body["lambda"] = num(r.lambda);
      rep.body["member"] = r.member + 1;
      rep.body["rho_at_lambda"] = num(r.rho_at_lambda);
    }
    for (std::size_t n = 0; n < doc.set.size(); ++n) {
      double e = expectation_signed(doc.set[n].measure, x);
      rep.rows.push_back({n + 1, e, doc.set[n].penalty, e});
    }
  } else if (o.command == "gexp") {
    if (o.lattice.empty()) throw ValidationError("--lattice is required for 'gexp'");
    VolLattice lat(lattice_params(o));
    auto x = path_payoff(o, lat);
    auto sol = solve_gexp(lat, x);
    double v = sol.value;
    const auto& pm = sol.worst;
    auto check = verify_scenario(pm, lat);
    rep.body["gexp"] = num(v);
    rep.body["worst_expectation"] = num(expectation_signed(pm.measure, materialize(pm.measure.space(), x)));
    rep.body["root_sigma"] = strategy_json(*pm.strategy, 1)[0];
    rep.body["strategy"] = strategy_json(*pm.strategy);
    rep.body["scenario_check"] = scenario_check_json(check);
    if (!check.passed()) code = kPropertyFailure;
  } else if (o.command == "verify") {
    auto doc = load_scenarios(o);
    auto spec = risk_spec(doc.set);
    AxiomOptions ao;
    ao.seed = o.seed;
    if (spec.normalized()) ao.capacity = [spec](const Payoff& x) { return canonical_capacity(spec, x); };
    auto ar = verify_axioms([spec](const Payoff& x) { return rho(spec, x); }, doc.set.space(), o.trials, o.tol, ao);
    rep.body["trials"] = ar.trials;
    rep.body["tol"] = num(ar.tol);
    rep.body["seed"] = o.seed;
    rep.body["axioms"] = axiom_json(ar);
    rep.body["passed"] = ar.all_passed();
    if (!ar.all_passed()) code = kPropertyFailure;
    if (!o.lattice.empty()) {
      VolLattice lat(lattice_params(o));
      auto pm = worst_measure(lat, path_payoff(o, lat));
      auto check = verify_scenario(pm, lat);
      rep.body["scenario_check"] = scenario_check_json(check);
      if (!check.passed()) code = kPropertyFailure;
    }
  } else if (o.command == "counterexample") {
    CounterexampleOptions co;
    co.p = o.p;
    co.seed = o.seed;
    auto r = dirac_counterexample(o.eta, o.atoms, co);
    rep.body["eta"] = num(r.eta);
    rep.body["p"] = num(r.p);
    rep.body["atoms"] = r.atoms;
    rep.body["family_size"] = r.family_size;
    rep.body["capacity_lower_bound"] = num(r.capacity_lower_bound);
    rep.body["sup_measure_of_A"] = num(r.sup_measure_of_A);
    rep.body["witness_index"] = r.witness_index;
    rep.body["certified"] = r.certified;
    if (!r.certified || r.capacity_lower_bound < 1.0 - r.eta || r.sup_measure_of_A != 0.0) code = kPropertyFailure;
  }

  emit(rep, o.format, out);
  return code;
}

/// Parses `args` (without the program name) and runs the command.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Risk measures, capacities and G-expectations on finite scenario sets", "ucrisk"};
  app.add_option("command", o.command, "command to run")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--scenarios", o.scenarios, "scenario JSON file");
  app.add_option("--payoff", o.payoffs, "payoff JSON file (repeat for a test bank)");
  app.add_option("--measure", o.measure, "measure JSON file for 'penalty'");
  app.add_option("--p", o.p, "capacity exponent p >= 1");
  app.add_option("--eps", o.eps, "reduction tolerance");
  app.add_option("--eta", o.eta, "counterexample margin in (0,1)");
  app.add_option("--theta", o.theta, "entropic risk aversion");
  app.add_option("--lattice", o.lattice, "K,T,d,sigma_low,sigma_high");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--tol", o.tol, "tolerance for property checks");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--trials", o.trials, "trials for 'verify'");
  app.add_option("--n", o.atoms, "atoms for 'counterexample'");
  app.add_option("--weights", o.weights, "comma-separated canonical weights");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    return execute(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kValidation;
}

}  // namespace ucrisk::cli

#endif  // UCRISK_CLI_HPP
