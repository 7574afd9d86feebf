#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "entrolab/aep.hpp"
#include "entrolab/entropies.hpp"
#include "entrolab/errors.hpp"
#include "entrolab/operational.hpp"
#include "entrolab/smoothing.hpp"
#include "entrolab/state_spec.hpp"
#include "entrolab/states.hpp"

namespace entrolab::cli {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}
std::string fmt(const ExtendedReal& x) { return x.to_string(9); }
std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : ""; }

json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::stod(fmt(x));
}
json num(const ExtendedReal& x) { return num(x.as_double()); }
json num(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

json diagnostics_json(const Diagnostics& d) {
  return json{{"status", d.status},
              {"iterations", d.iterations},
              {"duality_gap", num(d.duality_gap)},
              {"relative_gap", num(d.relative_gap)},
              {"primal_infeasibility", num(d.primal_infeasibility)},
              {"dual_infeasibility", num(d.dual_infeasibility)}};
}

enum class Format { Table, Csv, Json };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os, Format f) const {
    if (f == Format::Csv) {
      auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
      return;
    }
    std::vector<std::size_t> w(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) w[i] = header[i].size();
    for (const auto& r : rows)
      for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].empty() ? 1 : r[i].size());
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        const std::string cell = r[i].empty() ? "-" : r[i];
        os << (i ? "  " : "") << cell << std::string(w[i] - cell.size(), ' ');
      }
      os << '\n';
    };
    line(header);
    std::size_t total = 0;
    for (auto x : w) total += x + 2;
    os << std::string(total - 2, '-') << '\n';
    for (const auto& r : rows) line(r);
  }
};

struct Global {
  std::string format = "table";
  std::string output;
  std::uint64_t seed = 1;
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  int max_sdp_dim = 256;
  int workers = 0;

  sdp::Options solver() const {
    sdp::Options o;
    o.gap_tolerance = gap_tol;
    o.feasibility_tolerance = feas_tol;
    o.max_iterations = max_iter;
    o.max_total_dimension = max_sdp_dim;
    return o;
  }
  Format fmt() const { return format == "csv" ? Format::Csv : format == "json" ? Format::Json : Format::Table; }
};

struct Emitter {
  Format format;
  std::ostream& os;
  void emit(const Table& t, const json& j, const std::vector<std::string>& footer = {}) const {
    if (format == Format::Json) {
      os << j.dump(2) << '\n';
      return;
    }
    t.write(os, format);
    if (format == Format::Table)
      for (const auto& f : footer) os << f << '\n';
  }
};

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError("cannot read level '" + s + "'");
    }
  };
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
    } else {
      const int a = to_int(item.substr(0, dots)), b = to_int(item.substr(dots + 2));
      if (b < a) throw InputError("empty level range '" + item + "'");
      for (int k = a; k <= b; ++k) out.push_back(k);
    }
  }
  if (out.empty()) throw InputError("no ladder levels given");
  return out;
}

// ---- compute ----

struct ComputeArgs {
  std::vector<std::string> states;
  std::vector<std::string> quantities{"hmin", "hmax", "cond_vn"};
};

struct Row {
  std::string quantity;
  ExtendedReal value;
  std::string method;
  std::optional<Diagnostics> diagnostics;
  std::vector<std::string> notes;
};

Row from_report(const std::string& q, const EntropyReport& r) {
  const bool sdp = !r.diagnostics.status.empty();
  return Row{q, r.value, to_string(r.method), sdp ? std::optional<Diagnostics>(r.diagnostics) : std::nullopt,
             r.notes};
}

Row compute_one(const DensityOperator& rho, const std::string& q, const sdp::Options& o) {
  if (q == "hmin") return from_report(q, h_min_cond(rho, o));
  if (q == "hmax") return from_report(q, h_max_cond(rho, o));
  if (q == "hmax_direct") return from_report(q, h_max_cond_direct(rho, o));
  if (q == "hmin_pure") return from_report(q, h_min_pure(rho));
  if (q == "hmax_pure") return from_report(q, h_max_pure(rho));
  if (q == "hmin_sigma") {
    const DensityOperator r = as_bipartite(rho);
    return from_report(q, h_min_given_sigma(r, partial_trace(r, r.subsystems()[1].label)));
  }
  if (q == "hmin_uncond") return Row{q, ExtendedReal::finite(h_uncond(rho).h_min), "eigen", {}, {}};
  if (q == "hmax_uncond") return Row{q, ExtendedReal::finite(h_uncond(rho).h_max), "eigen", {}, {}};
  if (q == "vn") return Row{q, ExtendedReal::finite(von_neumann(rho.op())), "eigen", {}, {}};
  if (q == "cond_vn") return Row{q, ExtendedReal::finite(cond_von_neumann(rho)), "eigen", {}, {}};
  if (q == "decoupling") {
    auto r = decoupling_accuracy(rho, o);
    return Row{q, ExtendedReal::finite(r.value), "sdp", r.diagnostics, {}};
  }
  if (q == "qcorr") {
    auto r = quantum_correlation(rho, o);
    return Row{q, ExtendedReal::finite(r.value), "sdp", r.diagnostics, {}};
  }
  if (q == "guess") {
    auto r = guessing_probability(rho, o);
    return Row{q, ExtendedReal::finite(r.value), "sdp", r.diagnostics, {}};
  }
  if (q == "helstrom") return Row{q, ExtendedReal::finite(helstrom_binary(split_cq(rho))), "closed_form", {}, {}};
  throw InputError("unknown quantity '" + q + "'");
}

int cmd_compute(const ComputeArgs& a, const Global& g, const Emitter& e) {
  Table t{{"state", "quantity", "value", "method", "status", "iterations"}, {}};
  json j = json::array();
  for (const auto& spec : a.states) {
    const DensityOperator rho = parse_state(spec);
    for (const auto& q : a.quantities) {
      Row r = compute_one(rho, q, g.solver());
      t.rows.push_back({spec, q, fmt(r.value), r.method, r.diagnostics ? r.diagnostics->status : "",
                        r.diagnostics ? std::to_string(r.diagnostics->iterations) : ""});
      json item{{"state", spec}, {"quantity", q}, {"value", num(r.value)}, {"method", r.method}};
      item["diagnostics"] = r.diagnostics ? diagnostics_json(*r.diagnostics) : json(nullptr);
      item["notes"] = r.notes;
      j.push_back(item);
    }
  }
  e.emit(t, j);
  return kExitOk;
}

// ---- ladder ----

struct LadderArgs {
  std::string state;
  std::string levels;
  std::string quantity = "hmin";
  bool no_verify = false;
};

int cmd_ladder(const LadderArgs& a, const Global& g, const Emitter& e) {
  const DensityOperator rho = parse_state(a.state);
  LadderOptions o;
  o.solver = g.solver();
  o.verify_scaling = !a.no_verify;
  o.max_workers = g.workers;
  const LadderReport rep =
      ladder_convergence(rho, TruncationLadder(parse_levels(a.levels)), parse_ladder_quantity(a.quantity), o);
  Table t{{"k", "trace", "lambda_projected", "h_projected", "h_normalized"}, {}};
  json levels = json::array();
  for (const auto& l : rep.levels) {
    t.rows.push_back({std::to_string(l.level), fmt(l.trace), fmt(l.lambda_projected),
                      l.skipped ? "" : fmt(l.h_projected), l.skipped ? "" : fmt(l.h_normalized)});
    levels.push_back({{"level", l.level},
                      {"trace", num(l.trace)},
                      {"lambda_projected", num(l.lambda_projected)},
                      {"h_projected", l.skipped ? json(nullptr) : num(l.h_projected)},
                      {"h_normalized", l.skipped ? json(nullptr) : num(l.h_normalized)},
                      {"scaling_residual", num(l.scaling_residual)},
                      {"skipped", l.skipped},
                      {"note", l.note}});
  }
  json j{{"quantity", to_string(rep.quantity)},
         {"levels", levels},
         {"lambda_full", num(rep.lambda_full)},
         {"limit_estimate", num(rep.limit_estimate)},
         {"lambda_nondecreasing", rep.lambda_nondecreasing},
         {"lambda_bounded_by_full", rep.lambda_bounded_by_full},
         {"differences_shrinking", rep.differences_shrinking},
         {"scaling_identity_holds", rep.scaling_identity_holds}};
  auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
  e.emit(t, j,
         {"",
          "lambda_full             " + fmt(rep.lambda_full),
          "limit_estimate          " + fmt(rep.limit_estimate),
          "lambda_nondecreasing    " + yn(rep.lambda_nondecreasing),
          "lambda_bounded_by_full  " + yn(rep.lambda_bounded_by_full),
          "differences_shrinking   " + yn(rep.differences_shrinking),
          "scaling_identity_holds  " + yn(rep.scaling_identity_holds)});
  return kExitOk;
}

// ---- smooth ----

struct SmoothArgs {
  std::string state;
  std::vector<double> eps{0.0, 0.01, 0.05, 0.1, 0.2};
  std::vector<std::string> quantities{"hmin", "hmax"};
  int max_dim = 36;
};

int cmd_smooth(const SmoothArgs& a, const Global& g, const Emitter& e) {
  const DensityOperator rho = as_bipartite(parse_state(a.state));
  SmoothingOptions o;
  o.solver = g.solver();
  o.max_dimension = a.max_dim;
  o.max_workers = g.workers;
  Table t{{"eps", "quantity", "value", "lambda", "purified_distance"}, {}};
  json j = json::array();
  for (const auto& q : a.quantities) {
    if (q != "hmin" && q != "hmax") throw InputError("smooth quantities are hmin and hmax, got '" + q + "'");
    const auto reps = smooth_sweep(rho, a.eps, q == "hmin" ? SmoothKind::Min : SmoothKind::Max, o);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto& r = reps[i];
      std::optional<double> dist;
      if (q == "hmin" && r.optimizer) dist = purified_distance(rho.op(), *r.optimizer);
      t.rows.push_back({fmt(a.eps[i]), q, fmt(r.value), fmt(r.lambda), fmt(dist)});
      j.push_back({{"eps", num(a.eps[i])},
                   {"quantity", q},
                   {"value", num(r.value)},
                   {"lambda", num(r.lambda)},
                   {"purified_distance", num(dist)},
                   {"method", to_string(r.method)},
                   {"diagnostics", r.diagnostics.status.empty() ? json(nullptr) : diagnostics_json(r.diagnostics)},
                   {"notes", r.notes}});
    }
  }
  e.emit(t, j);
  return kExitOk;
}

// ---- aep ----

struct AepArgs {
  std::string state;
  std::vector<int> n{1, 2, 3};
  double eps = 0.05;
  bool no_measure = false;
  int max_dim = 64;
};

int cmd_aep(const AepArgs& a, const Global& g, const Emitter& e) {
  const DensityOperator rho = parse_state(a.state);
  AepOptions o;
  o.smoothing.solver = g.solver();
  o.smoothing.max_dimension = a.max_dim;
  o.measure = !a.no_measure;
  o.max_workers = g.workers;
  const auto reps = aep_sweep(rho, a.n, a.eps, o);
  Table t{{"n", "eps", "eta", "vn", "correction", "lower_bound", "upper_bound", "n_condition_met",
           "measured_min_rate", "measured_max_rate", "min_rate_ceiling", "max_rate_floor", "certification"},
          {}};
  json j = json::array();
  for (const auto& r : reps) {
    t.rows.push_back({std::to_string(r.n), fmt(r.eps), fmt(r.eta), fmt(r.vn), fmt(r.correction), fmt(r.lower_bound),
                      fmt(r.upper_bound), r.n_condition_met ? "true" : "false", fmt(r.measured_min_rate),
                      fmt(r.measured_max_rate), fmt(r.min_rate_ceiling), fmt(r.max_rate_floor),
                      to_string(r.certification)});
    j.push_back({{"n", r.n},
                 {"eps", num(r.eps)},
                 {"eta", num(r.eta)},
                 {"vn", num(r.vn)},
                 {"h_min", num(r.h_min)},
                 {"h_max", num(r.h_max)},
                 {"correction", num(r.correction)},
                 {"lower_bound", num(r.lower_bound)},
                 {"upper_bound", num(r.upper_bound)},
                 {"n_condition_met", r.n_condition_met},
                 {"min_rate_ceiling", num(r.min_rate_ceiling)},
                 {"max_rate_floor", num(r.max_rate_floor)},
                 {"measured_min_rate", num(r.measured_min_rate)},
                 {"measured_max_rate", num(r.measured_max_rate)},
                 {"certification", to_string(r.certification)},
                 {"lower_bound_holds", r.lower_bound_holds},
                 {"upper_bound_holds", r.upper_bound_holds},
                 {"ceiling_holds", r.ceiling_holds},
                 {"floor_holds", r.floor_holds},
                 {"notes", r.notes}});
  }
  e.emit(t, j);
  return kExitOk;
}

// ---- selftest ----

struct SelftestArgs {
  int count = 20;
};

struct Check {
  std::string name;
  double tolerance;
  int cases = 0;
  double worst = 0.0;
  void add(double violation) {
    ++cases;
    worst = std::max(worst, violation);
  }
  bool pass() const { return worst <= tolerance; }
};

int cmd_selftest(const SelftestArgs& a, const Global& g, const Emitter& e) {
  if (a.count < 1) throw InputError("selftest needs a positive count");
  const sdp::Options o = g.solver();
  Rng rng(g.seed);
  Check ordering{"ordering h_min <= H <= h_max", 1e-5};
  Check decoupling{"log decoupling accuracy = h_max", 1e-5};
  Check correlation{"log quantum correlation = -h_min", 1e-5};
  Check additivity{"h_min additive on products", 1e-5};
  Check processing{"h_min(A|BC) <= h_min(A|B)", 1e-5};
  Check guessing{"guessing probability = 2^-h_min", 1e-5};
  Check helstrom{"guessing probability = Helstrom", 1e-6};
  Check smoothing{"h_min_smooth(eps) >= h_min", 1e-6};
  Check gaps{"solver duality gap", 1e-7};
  const std::vector<Subsystem> ab{{"A", 2}, {"B", 2}};
  for (int i = 0; i < a.count; ++i) {
    const DensityOperator rho = random_state(rng, ab);
    const EntropyReport hmin = h_min_cond(rho, o), hmax = h_max_cond(rho, o);
    const double lo = hmin.value.value(), hi = hmax.value.value(), vn = cond_von_neumann(rho);
    ordering.add(std::max({0.0, lo - vn, vn - hi}));
    gaps.add(std::abs(hmin.diagnostics.relative_gap));
    decoupling.add(std::abs(std::log2(decoupling_accuracy(rho, o).value) - hi));
    correlation.add(std::abs(std::log2(quantum_correlation(rho, o).value) + lo));
    smoothing.add(std::max(0.0, lo - h_min_smooth(rho, 0.05, {o}).value.value()));
    const DensityOperator sigma = random_state(rng, ab);
    const double prod = h_min_cond(tensor_bipartite(rho, sigma), o).value.value();
    additivity.add(std::abs(prod - lo - h_min_cond(sigma, o).value.value()));
    const DensityOperator abc = random_state(rng, {{"A", 2}, {"B", 2}, {"C", 2}});
    const double full = h_min_cond(regroup(abc, {"A"}, {"B", "C"}), o).value.value();
    const double part = h_min_cond(partial_trace(abc, std::vector<std::string>{"A", "B"}), o).value.value();
    processing.add(std::max(0.0, full - part));
    const DensityOperator cq = random_cq_state(rng, 2, 2);
    const double gp = guessing_probability(cq, o).value;
    guessing.add(std::abs(gp - std::exp2(-h_min_cond(cq, o).value.value())));
    helstrom.add(std::abs(gp - helstrom_binary(split_cq(cq))));
  }
  Table t{{"check", "cases", "worst", "tolerance", "result"}, {}};
  json j = json::array();
  bool all = true;
  for (const Check* c :
       {&ordering, &decoupling, &correlation, &additivity, &processing, &guessing, &helstrom, &smoothing, &gaps}) {
    all = all && c->pass();
    t.rows.push_back({c->name, std::to_string(c->cases), fmt(c->worst), fmt(c->tolerance), c->pass() ? "PASS" : "FAIL"});
    j.push_back({{"check", c->name},
                 {"cases", c->cases},
                 {"worst", num(c->worst)},
                 {"tolerance", num(c->tolerance)},
                 {"pass", c->pass()}});
  }
  e.emit(t, j);
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional min- and max-entropy toolkit", "entrolab"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("-o,--output", g.output, "Write results to this file instead of stdout");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--gap-tol", g.gap_tol, "SDP relative gap tolerance")->check(CLI::PositiveNumber);
  app.add_option("--feas-tol", g.feas_tol, "SDP feasibility tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.max_iter, "SDP iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--max-sdp-dim", g.max_sdp_dim, "Cap on the total SDP block dimension")->check(CLI::PositiveNumber);
  app.add_option("--workers", g.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.fallthrough();

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Entropies and operational quantities");
  compute->add_option("-s,--state", ca.states, "State spec (repeatable)")->required();
  compute->add_option("-q,--quantity", ca.quantities,
                      "hmin, hmax, hmax_direct, hmin_pure, hmax_pure, hmin_sigma, hmin_uncond, hmax_uncond, vn, "
                      "cond_vn, decoupling, qcorr, guess, helstrom")
      ->delimiter(',');

  LadderArgs la;
  auto* ladder = app.add_subcommand("ladder", "Convergence over a truncation ladder");
  ladder->add_option("-s,--state", la.state, "State spec")->required();
  ladder->add_option("-l,--levels", la.levels, "Levels, e.g. 2..12 or 0,1,4")->required();
  ladder->add_option("-q,--quantity", la.quantity, "hmin, hmax, hmin_sigma or cond_vn");
  ladder->add_flag("--no-verify-scaling", la.no_verify, "Skip the independent normalized-state solves");

  SmoothArgs sa;
  auto* smooth = app.add_subcommand("smooth", "Smooth entropies over an epsilon grid");
  smooth->add_option("-s,--state", sa.state, "State spec")->required();
  smooth->add_option("-e,--eps", sa.eps, "Smoothing parameters")->delimiter(',');
  smooth->add_option("-q,--quantity", sa.quantities, "hmin and/or hmax")->delimiter(',');
  smooth->add_option("--max-dim", sa.max_dim, "Smoothing dimension cap")->check(CLI::PositiveNumber);

  AepArgs aa;
  auto* aep = app.add_subcommand("aep", "Finite-n bounds for iid copies");
  aep->add_option("-s,--state", aa.state, "State spec")->required();
  aep->add_option("-n,--n", aa.n, "Copy numbers")->delimiter(',');
  aep->add_option("-e,--eps", aa.eps, "Smoothing parameter");
  aep->add_flag("--no-measure", aa.no_measure, "Skip the smooth-entropy SDPs");
  aep->add_option("--max-dim", aa.max_dim, "Smoothing dimension cap")->check(CLI::PositiveNumber);

  SelftestArgs ta;
  auto* selftest = app.add_subcommand("selftest", "Seeded invariant checks on random states");
  selftest->add_option("-c,--count", ta.count, "Random states per check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    std::ostringstream o, e;
    const int code = app.exit(ex, o, e);
    out << o.str();
    err << e.str();
    return code == 0 ? kExitOk : kExitInput;
  }

  std::ofstream file;
  if (!g.output.empty()) {
    file.open(g.output);
    if (!file) {
      err << "error: cannot open output file '" << g.output << "'\n";
      return kExitInput;
    }
  }
  std::ostringstream buffer;
  const Emitter e{g.fmt(), buffer};
  try {
    int code = kExitOk;
    if (*compute) code = cmd_compute(ca, g, e);
    else if (*ladder) code = cmd_ladder(la, g, e);
    else if (*smooth) code = cmd_smooth(sa, g, e);
    else if (*aep) code = cmd_aep(aa, g, e);
    else if (*selftest) code = cmd_selftest(ta, g, e);
    (g.output.empty() ? out : file) << buffer.str();
    return code;
  } catch (const SolverError& ex) {
    err << "solver error: " << ex.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& ex) {
    err << "input error: " << ex.what() << '\n';
    return kExitInput;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace entrolab::cli
