#pragma once

// Case-study replays: a blood-pressure acrophase series monitored for
// direction changes with restarts, and pulsar arrival phases monitored for
// a concentration change. Reference values are the published progressions.

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "monitor.hpp"

namespace circusum::replay {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ReferenceSegment {
  std::size_t start;
  std::size_t end;
  std::optional<std::size_t> signal_at;
  double nu_hat;
  double kappa_hat;
};

inline constexpr double acrophase_zeta = 0.25;
inline constexpr double acrophase_h = 8.59;
inline constexpr std::size_t acrophase_m = 30;

inline const std::array<ReferenceSegment, 6>& acrophase_reference() {
  static const std::array<ReferenceSegment, 6> table = {{
      {1, 57, 66, -1.70, 1.86},
      {58, 110, 120, -0.76, 0.78},
      {111, 140, 178, -1.90, 2.60},
      {141, 241, 255, -1.19, 2.51},
      {242, 282, 299, -0.90, 0.31},
      {283, 306, std::nullopt, -0.007, 1.68},
  }};
  return table;
}

inline constexpr double pulsar_zeta = 0.0;
inline constexpr double pulsar_h = 30.46;
inline constexpr std::size_t pulsar_m = 50;
inline constexpr std::size_t pulsar_first_row = 191;
inline constexpr std::size_t pulsar_last_row = 1250;
inline constexpr std::size_t pulsar_signal = 686;
inline constexpr std::size_t pulsar_changepoint = 522;
inline constexpr double pulsar_kappa_before = 0.35;
inline constexpr double pulsar_kappa_after = 0.06;

inline MonitorOptions acrophase_options() {
  MonitorOptions o;
  o.config = {Mode::direction, acrophase_zeta, acrophase_h, acrophase_m};
  o.restart = true;
  return o;
}

inline MonitorOptions pulsar_options(std::size_t first_row = pulsar_first_row) {
  MonitorOptions o;
  o.config = {Mode::concentration, pulsar_zeta, pulsar_h, pulsar_m};
  o.restart = false;
  o.first_index = first_row;
  return o;
}

namespace detail {
inline std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}
inline double angular_distance(double a, double b) { return std::abs(wrap_radians(a - b)); }
}  // namespace detail

inline std::vector<Check> check_acrophase(const MonitorReport& r) {
  std::vector<Check> checks;
  const auto& ref = acrophase_reference();
  checks.push_back({"segment count", r.segments.size() == ref.size(),
                    std::to_string(r.segments.size()) + " segments (expected " + std::to_string(ref.size()) + ")"});
  for (std::size_t i = 0; i < ref.size() && i < r.segments.size(); ++i) {
    const Segment& s = r.segments[i];
    const ReferenceSegment& e = ref[i];
    const std::string tag = "segment " + std::to_string(i + 1);
    checks.push_back({tag + " bounds", s.start == e.start && s.end == e.end,
                      std::to_string(s.start) + "-" + std::to_string(s.end) + " (expected " + std::to_string(e.start) + "-" +
                          std::to_string(e.end) + ")"});
    const bool signal_ok = s.signal_at == e.signal_at;
    checks.push_back({tag + " signal", signal_ok,
                      (s.signal_at ? std::to_string(*s.signal_at) : std::string("none")) + " (expected " +
                          (e.signal_at ? std::to_string(*e.signal_at) : std::string("none")) + ")"});
    checks.push_back({tag + " nu_hat", detail::angular_distance(s.nu_hat.radians(), e.nu_hat) <= 0.01,
                      detail::fmt("%.4f (expected %.3f, tol 0.01)", s.nu_hat.radians(), e.nu_hat)});
    checks.push_back({tag + " kappa_hat", std::abs(s.kappa_hat - e.kappa_hat) <= 0.02,
                      detail::fmt("%.4f (expected %.2f, tol 0.02)", s.kappa_hat, e.kappa_hat)});
  }
  return checks;
}

inline std::vector<Check> check_pulsar(const MonitorReport& r) {
  std::vector<Check> checks;
  const bool has_event = !r.events.empty();
  checks.push_back({"first signal", has_event && r.events.front().signal_index == pulsar_signal,
                    has_event ? std::to_string(r.events.front().signal_index) + " (expected 686)" : "no signal (expected 686)"});
  checks.push_back({"changepoint", has_event && r.events.front().changepoint == pulsar_changepoint,
                    has_event ? std::to_string(r.events.front().changepoint) + " (expected 522)" : "no signal (expected 522)"});
  const bool two = r.segments.size() >= 2;
  checks.push_back({"kappa before change", two && std::abs(r.segments[0].kappa_hat - pulsar_kappa_before) <= 0.01,
                    two ? detail::fmt("%.4f (expected %.2f, tol 0.01)", r.segments[0].kappa_hat, pulsar_kappa_before) : "missing segment"});
  checks.push_back({"kappa after change", two && std::abs(r.segments[1].kappa_hat - pulsar_kappa_after) <= 0.01,
                    two ? detail::fmt("%.4f (expected %.2f, tol 0.01)", r.segments[1].kappa_hat, pulsar_kappa_after) : "missing segment"});
  return checks;
}

/// Restricts a full pulsar series to rows [first_row, last_row] (1-based).
inline std::vector<Angle> pulsar_window(std::span<const Angle> all, std::size_t first_row = pulsar_first_row,
                                        std::size_t last_row = pulsar_last_row) {
  if (all.size() < first_row) throw invalid_input("pulsar data has fewer than " + std::to_string(first_row) + " rows");
  const std::size_t end = std::min(all.size(), last_row);
  return {all.begin() + static_cast<std::ptrdiff_t>(first_row - 1), all.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace circusum::replay
