// circusum command-line front end.
//
// Exit codes: 0 success, 2 bad input (including usage errors), 3 numeric
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "circusum/circusum.hpp"

using namespace circusum;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_bad_input = 2;
constexpr int exit_numeric = 3;

struct Common {
  std::string data;
  std::string unit = "radians";
  std::size_t column = 1;
  std::string out;
};

struct MonitorArgs {
  Common io;
  std::string mode = "direction";
  double zeta = 0.0;
  std::optional<double> h;
  std::optional<double> arl0;
  std::size_t m = 25;
  bool restart = false;
  bool trace = false;
  std::string trace_csv;
  std::size_t first = 1;
  std::size_t reps = 100'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

struct CalibrateArgs {
  double zeta = 0.25;
  double arl0 = 500;
  std::size_t reps = 100'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string out;
};

struct SimulateArgs {
  std::string experiments;
  std::string out;
  std::optional<unsigned> threads;
};

struct RefconstArgs {
  Common io;
  std::optional<double> delta0;
  std::optional<double> zeta_cap;
  std::optional<std::size_t> m;
};

struct ReplayArgs {
  Common io;
  std::size_t first = replay::pulsar_first_row;
  std::size_t last = replay::pulsar_last_row;
  bool trace = false;
  std::string trace_csv;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot write '" + path + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit_trace(const std::string& path, const MonitorReport& r) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot write '" + path + "'");
  write_trace_csv(f, r);
}

std::vector<Angle> load(const Common& io) { return parse_angles_file(io.data, unit_from_string(io.unit), io.column); }

int cmd_monitor(const MonitorArgs& a) {
  const AngleUnit unit = unit_from_string(a.io.unit);
  if (a.h && a.arl0) throw invalid_input("give either --h or --arl0, not both");
  if (!a.h && !a.arl0) throw invalid_input("monitor needs --h or --arl0");
  MonitorOptions opts;
  opts.config.mode = mode_from_string(a.mode);
  opts.config.zeta = a.zeta;
  opts.config.m = a.m;
  opts.restart = a.restart;
  opts.trace = a.trace || !a.trace_csv.empty();
  opts.first_index = a.first;
  std::optional<ControlLimit> cal;
  if (a.h) {
    opts.config.h = *a.h;
  } else {
    cal = calibrate_control_limit(a.zeta, *a.arl0, a.reps, RngStream(a.seed, 0), a.threads);
    opts.config.h = cal->h;
  }
  opts.config.validate();
  const auto data = load(a.io);
  const MonitorReport report = run_monitor(data, opts);
  json j = to_json(report, unit);
  if (!a.trace) j.erase("trace");
  j["input"] = {{"data", a.io.data}, {"column", a.io.column}};
  if (cal) j["calibration"] = {{"arl0", *a.arl0}, {"reps", a.reps}, {"seed", a.seed}, {"h", cal->h}, {"arl", cal->estimate.mean}};
  emit(a.io.out, j.dump(2));
  emit_trace(a.trace_csv, report);
  return exit_ok;
}

int cmd_calibrate(const CalibrateArgs& a) {
  const ControlLimit c = calibrate_control_limit(a.zeta, a.arl0, a.reps, RngStream(a.seed, 0), a.threads);
  json j = {{"zeta", a.zeta},
            {"arl0", a.arl0},
            {"reps", a.reps},
            {"seed", a.seed},
            {"h", c.h},
            {"arl", c.estimate.mean},
            {"stderr", c.estimate.std_error},
            {"censored", c.estimate.censored},
            {"stages", c.stages}};
  emit(a.out, j.dump(2));
  return exit_ok;
}

int cmd_simulate(const SimulateArgs& a) {
  auto entries = parse_experiments_file(a.experiments);
  if (entries.empty()) throw invalid_input("experiment file '" + a.experiments + "' contains no experiments");
  if (a.threads)
    for (auto& e : entries) e.spec.threads = *a.threads;
  std::ostringstream csv;
  write_results_csv(csv, run_table(entries));
  emit(a.out, csv.str());
  return exit_ok;
}

int cmd_refconst(const RefconstArgs& a) {
  if (a.delta0.has_value() == a.zeta_cap.has_value()) throw invalid_input("refconst needs exactly one of --delta0 or --zeta-cap");
  auto data = load(a.io);
  if (a.m) {
    if (*a.m > data.size()) throw invalid_input("--m exceeds the number of observations");
    data.resize(*a.m);
  }
  json j = {{"data", a.io.data}, {"unit", a.io.unit}, {"m", data.size()}};
  if (a.delta0) {
    j["delta0"] = *a.delta0;
    j["zeta"] = estimate_reference_constant(data, *a.delta0);
  } else {
    const DeltaSolution s = solve_delta_for_zeta(data, *a.zeta_cap);
    j["zeta_cap"] = *a.zeta_cap;
    j["delta0"] = s.delta0;
    j["found"] = s.found;
  }
  emit(a.io.out, j.dump(2));
  return exit_ok;
}

json checks_json(const std::vector<replay::Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return arr;
}

bool all_pass(const std::vector<replay::Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

int cmd_replay_acrophase(const ReplayArgs& a) {
  const auto data = load(a.io);
  MonitorOptions opts = replay::acrophase_options();
  opts.trace = a.trace || !a.trace_csv.empty();
  const MonitorReport report = run_monitor(data, opts);
  const auto checks = replay::check_acrophase(report);
  json j = to_json(report, unit_from_string(a.io.unit));
  if (!a.trace) j.erase("trace");
  j["checks"] = checks_json(checks);
  j["all_pass"] = all_pass(checks);
  emit(a.io.out, j.dump(2));
  emit_trace(a.trace_csv, report);
  return exit_ok;
}

int cmd_replay_pulsar(const ReplayArgs& a) {
  const auto all = load(a.io);
  const auto window = replay::pulsar_window(all, a.first, a.last);
  MonitorOptions opts = replay::pulsar_options(a.first);
  opts.trace = a.trace || !a.trace_csv.empty();
  const MonitorReport report = run_monitor(window, opts);
  const auto checks = replay::check_pulsar(report);
  json j = to_json(report, unit_from_string(a.io.unit));
  if (!a.trace) j.erase("trace");
  j["window"] = {{"first_row", a.first}, {"last_row", a.first + window.size() - 1}};
  j["checks"] = checks_json(checks);
  j["all_pass"] = all_pass(checks);
  emit(a.io.out, j.dump(2));
  emit_trace(a.trace_csv, report);
  return exit_ok;
}

void add_data_options(CLI::App* sub, Common& io) {
  sub->add_option("data", io.data, "Angle file: one observation per line, optional header, '#' comments")->required();
  sub->add_option("--unit", io.unit, "radians or degrees")->capture_default_str();
  sub->add_option("--column", io.column, "1-based column for comma-separated input")->capture_default_str();
  sub->add_option("--out", io.out, "Write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation-invariant CUSUM charts for circular data"};
  // --h is the control limit, so help is long-form only
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  MonitorArgs mon;
  auto* sub_mon = app.add_subcommand("monitor", "Monitor a stream of angles");
  add_data_options(sub_mon, mon.io);
  sub_mon->add_option("--mode", mon.mode, "direction or concentration")->capture_default_str();
  sub_mon->add_option("--zeta", mon.zeta, "Reference value")->capture_default_str();
  sub_mon->add_option("--h", mon.h, "Control limit");
  sub_mon->add_option("--arl0", mon.arl0, "Calibrate h to this in-control ARL instead");
  sub_mon->add_option("--m", mon.m, "Warmup size")->capture_default_str();
  sub_mon->add_flag("--restart", mon.restart, "Restart at tau_hat + 1 after each signal");
  sub_mon->add_flag("--trace", mon.trace, "Include the per-step trace in the report");
  sub_mon->add_option("--trace-csv", mon.trace_csv, "Write the per-step trace as CSV");
  sub_mon->add_option("--first", mon.first, "Global index of the first observation")->capture_default_str();
  sub_mon->add_option("--reps", mon.reps, "Calibration replications (with --arl0)")->capture_default_str();
  sub_mon->add_option("--seed", mon.seed, "Calibration seed (with --arl0)")->capture_default_str();
  sub_mon->add_option("--threads", mon.threads, "Worker threads (0 = all cores)")->capture_default_str();

  CalibrateArgs cal;
  auto* sub_cal = app.add_subcommand("calibrate", "Control limit for a nominal in-control ARL");
  sub_cal->add_option("--zeta", cal.zeta, "Reference value")->capture_default_str();
  sub_cal->add_option("--arl0", cal.arl0, "Target in-control ARL")->capture_default_str();
  sub_cal->add_option("--reps", cal.reps, "Monte-Carlo replications")->capture_default_str();
  sub_cal->add_option("--seed", cal.seed, "Seed")->capture_default_str();
  sub_cal->add_option("--threads", cal.threads, "Worker threads (0 = all cores)")->capture_default_str();
  sub_cal->add_option("--out", cal.out, "Write the result here instead of stdout");

  SimulateArgs sim;
  auto* sub_sim = app.add_subcommand("simulate", "Run an experiment file and write a results CSV");
  sub_sim->add_option("experiments", sim.experiments, "JSON Lines or JSON array of experiments")->required();
  sub_sim->add_option("--out", sim.out, "Results CSV (default stdout)");
  sub_sim->add_option("--threads", sim.threads, "Override worker threads for every experiment");

  RefconstArgs ref;
  auto* sub_ref = app.add_subcommand("refconst", "Reference value from Phase I data, or the shift it targets");
  add_data_options(sub_ref, ref.io);
  sub_ref->add_option("--delta0", ref.delta0, "Shift size to tune for (radians)");
  sub_ref->add_option("--zeta-cap", ref.zeta_cap, "Solve for the shift giving this reference value");
  sub_ref->add_option("--m", ref.m, "Use only the first m observations");

  ReplayArgs acro;
  auto* sub_acro = app.add_subcommand("replay-acrophase", "Replay the acrophase case study and check the progression");
  add_data_options(sub_acro, acro.io);
  sub_acro->add_flag("--trace", acro.trace, "Include the per-step trace");
  sub_acro->add_option("--trace-csv", acro.trace_csv, "Write the per-step trace as CSV");

  ReplayArgs pul;
  auto* sub_pul = app.add_subcommand("replay-pulsar", "Replay the pulsar case study and check the signal");
  add_data_options(sub_pul, pul.io);
  sub_pul->add_option("--first", pul.first, "First row of the monitored window")->capture_default_str();
  sub_pul->add_option("--last", pul.last, "Last row of the monitored window")->capture_default_str();
  sub_pul->add_flag("--trace", pul.trace, "Include the per-step trace");
  sub_pul->add_option("--trace-csv", pul.trace_csv, "Write the per-step trace as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_bad_input;
  }

  try {
    if (*sub_mon) return cmd_monitor(mon);
    if (*sub_cal) return cmd_calibrate(cal);
    if (*sub_sim) return cmd_simulate(sim);
    if (*sub_ref) return cmd_refconst(ref);
    if (*sub_acro) return cmd_replay_acrophase(acro);
    if (*sub_pul) return cmd_replay_pulsar(pul);
  } catch (const invalid_input& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_bad_input;
  } catch (const ill_conditioned_warmup& e) {
    std::fprintf(stderr, "error: ill-conditioned warmup: %s\n", e.what());
    return exit_numeric;
  } catch (const numeric_failure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_numeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_numeric;
  }
  return exit_bad_input;
}
