#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "angle.hpp"
#include "detector.hpp"
#include "errors.hpp"
#include "json_io.hpp"
#include "trig_accumulator.hpp"

namespace circusum {

enum class AngleUnit { radians, degrees };

inline AngleUnit unit_from_string(std::string_view s) {
  if (s == "radians" || s == "rad") return AngleUnit::radians;
  if (s == "degrees" || s == "deg") return AngleUnit::degrees;
  throw invalid_input("unknown unit '" + std::string(s) + "' (expected radians or degrees)");
}
inline std::string_view to_string(AngleUnit u) { return u == AngleUnit::radians ? "radians" : "degrees"; }

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_field(std::string_view line, std::size_t column) {
  std::size_t col = 1;
  std::size_t pos = 0;
  while (col < column) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) return std::nullopt;
    pos = comma + 1;
    ++col;
  }
  const auto end = line.find(',', pos);
  std::string_view field = trim(line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Reads one observation per line (field `column` of a comma-separated
/// line, 1-based). Blank lines and '#' comments are skipped; the first data
/// line may be a header if later lines parse.
inline std::vector<Angle> parse_angles(std::istream& in, AngleUnit unit = AngleUnit::radians, std::size_t column = 1) {
  if (column < 1) throw invalid_input("parse_angles: column is 1-based");
  std::vector<Angle> out;
  std::string line;
  std::size_t number = 0;
  std::optional<std::size_t> pending_header;
  bool seen_data_line = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto v = detail::parse_field(t, column);
    if (!v) {
      if (!seen_data_line && !pending_header) {
        pending_header = number;
        seen_data_line = true;
        continue;
      }
      throw invalid_input("parse_angles: cannot parse an angle on line " + std::to_string(number));
    }
    seen_data_line = true;
    out.push_back(unit == AngleUnit::degrees ? Angle::from_degrees(*v) : Angle::from_radians(*v));
  }
  if (out.empty()) {
    if (pending_header) throw invalid_input("parse_angles: cannot parse an angle on line " + std::to_string(*pending_header));
    throw invalid_input("parse_angles: no observations found");
  }
  return out;
}

inline std::vector<Angle> parse_angles_file(const std::string& path, AngleUnit unit = AngleUnit::radians, std::size_t column = 1) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open data file '" + path + "'");
  return parse_angles(in, unit, column);
}

struct Segment {
  std::size_t start = 0;  // global, inclusive
  std::size_t end = 0;
  Angle nu_hat;
  double kappa_hat = 0.0;  // +inf when unbounded, NaN for a single point
  std::optional<std::size_t> signal_at;
};

struct TraceRow {
  std::size_t run = 0;
  std::size_t n = 0;
  double summand = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
};

struct MonitorOptions {
  CusumConfig config;
  bool restart = false;
  bool trace = false;
  std::size_t first_index = 1;  // global number of the first observation
};

struct MonitorReport {
  MonitorOptions options;
  std::size_t n_total = 0;
  std::vector<SignalEvent> events;
  std::vector<Segment> segments;
  std::vector<TraceRow> trace;
  std::size_t warmup_extensions = 0;
  std::size_t degenerate_segments = 0;  // segments with zero resultant
};

inline Segment summarize_segment(std::span<const Angle> data, std::size_t first_index, std::size_t start, std::size_t end) {
  Segment s;
  s.start = start;
  s.end = end;
  TrigAccumulator acc;
  for (std::size_t g = start; g <= end; ++g) acc.push(data[g - first_index]);
  s.nu_hat = acc.mean_direction();
  s.kappa_hat = acc.n >= 2 ? sample_concentration(acc) : std::numeric_limits<double>::quiet_NaN();
  return s;
}

/// Runs the CUSUM over `data`. With restart, every signal closes the segment
/// ending at tau_hat and a new run starts at tau_hat + 1, its first m
/// observations forming the new warmup.
inline MonitorReport run_monitor(std::span<const Angle> data, const MonitorOptions& opts) {
  opts.config.validate();
  if (opts.first_index < 1) throw invalid_input("monitor: first index is 1-based");
  if (data.size() < opts.config.m)
    throw invalid_input("monitor: stream of " + std::to_string(data.size()) + " observations is shorter than warmup m = " +
                        std::to_string(opts.config.m));
  MonitorReport report;
  report.options = opts;
  report.n_total = data.size();
  const std::size_t first = opts.first_index;
  const std::size_t last = first + data.size() - 1;

  std::size_t seg_start = first;
  CusumState state(opts.config, first - 1);
  std::size_t run = 0;
  while (true) {
    std::size_t g = state.current_index() + 1;
    for (; g <= last; ++g) {
      const Phase phase = state.step(data[g - first]);
      if (opts.trace && phase != Phase::warming)
        report.trace.push_back({run, g, state.last_summand(), state.d_plus(), state.d_minus()});
      if (phase == Phase::signaled) break;
    }
    report.warmup_extensions += state.warmup_extensions();
    if (state.phase() == Phase::warming && state.n_total() > opts.config.m && run == 0)
      throw ill_conditioned_warmup("monitor: warmup variance is zero for the whole stream (identical or antipodal data?)");

    if (state.phase() != Phase::signaled) {
      Segment s = summarize_segment(data, first, seg_start, last);
      report.segments.push_back(s);
      break;
    }
    const SignalEvent ev = *state.signal();
    report.events.push_back(ev);
    Segment s = summarize_segment(data, first, seg_start, ev.changepoint);
    s.signal_at = ev.signal_index;
    report.segments.push_back(s);
    seg_start = ev.changepoint + 1;
    if (!opts.restart) {
      report.segments.push_back(summarize_segment(data, first, seg_start, last));
      break;
    }
    state = restart(state, ev.changepoint + 1, last);
    ++run;
  }
  for (const Segment& s : report.segments) {
    TrigAccumulator acc;
    for (std::size_t g = s.start; g <= s.end; ++g) acc.push(data[g - first]);
    if (acc.degenerate_direction()) ++report.degenerate_segments;
  }
  return report;
}

namespace detail {
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline json to_json(const MonitorReport& r, AngleUnit unit) {
  json j;
  const CusumConfig& c = r.options.config;
  j["config"] = {{"mode", std::string(to_string(c.mode))},
                 {"zeta", c.zeta},
                 {"h", c.h},
                 {"m", c.m},
                 {"restart", r.options.restart},
                 {"unit", std::string(to_string(unit))},
                 {"first_index", r.options.first_index},
                 {"n_total", r.n_total}};
  j["events"] = json::array();
  for (const SignalEvent& e : r.events)
    j["events"].push_back({{"signal_index", e.signal_index},
                           {"side", std::string(to_string(e.side))},
                           {"changepoint", e.changepoint},
                           {"segment_mean", e.segment_mean.radians()},
                           {"segment_mean_deg", e.segment_mean.degrees_positive()},
                           {"segment_kappa", detail::finite_or_null(e.segment_kappa)}});
  j["segments"] = json::array();
  for (const Segment& s : r.segments)
    j["segments"].push_back({{"start", s.start},
                             {"end", s.end},
                             {"nu_hat", s.nu_hat.radians()},
                             {"nu_hat_deg", s.nu_hat.degrees_positive()},
                             {"kappa_hat", detail::finite_or_null(s.kappa_hat)},
                             {"signal_at", s.signal_at ? json(*s.signal_at) : json(nullptr)}});
  j["diagnostics"] = {{"warmup_extensions", r.warmup_extensions}, {"degenerate_segments", r.degenerate_segments}};
  if (r.options.trace) {
    j["trace"] = json::array();
    for (const TraceRow& t : r.trace) j["trace"].push_back({t.run, t.n, t.summand, t.d_plus, t.d_minus});
  }
  return j;
}

inline void write_trace_csv(std::ostream& out, const MonitorReport& r) {
  out << "run,n,summand,d_plus,d_minus\n";
  char buf[160];
  for (const TraceRow& t : r.trace) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%.10g,%.10g\n", t.run, t.n, t.summand, t.d_plus, t.d_minus);
    out << buf;
  }
}

}  // namespace circusum
