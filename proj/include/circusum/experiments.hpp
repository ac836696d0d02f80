#pragma once

// Batch runner: an experiment file is either JSON Lines (one experiment per
// line, '#' comments allowed) or a single JSON array. Results are CSV.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "sampler.hpp"
#include "simulation.hpp"

namespace circusum {

inline std::vector<ExperimentEntry> parse_experiments(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<ExperimentEntry> out;

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw invalid_input(std::string("experiment file: ") + e.what());
    }
    for (std::size_t i = 0; i < doc.size(); ++i) {
      try {
        out.push_back(experiment_from_json(doc[i]));
      } catch (const std::exception& e) {
        throw invalid_input("experiment entry " + std::to_string(i + 1) + ": " + e.what());
      }
    }
    return out;
  }

  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      ExperimentEntry e = experiment_from_json(json::parse(line));
      e.line = number;
      if (e.spec.id.empty()) e.spec.id = "line" + std::to_string(number);
      out.push_back(std::move(e));
    } catch (const std::exception& e) {
      throw invalid_input("experiment file line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<ExperimentEntry> parse_experiments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open experiment file '" + path + "'");
  return parse_experiments(in);
}

/// One CSV row. For scale entries `arl` carries the solved sigma.
struct ResultRow {
  std::string spec_id;
  std::string mode;
  std::string family;
  double kappa = 0.0;
  double zeta = 0.0;
  std::size_t m = 0;
  double arl0 = 0.0;
  double delta = 0.0;
  std::size_t tau = 0;
  std::size_t reps = 0;
  double arl = 0.0;
  double std_error = 0.0;
  std::size_t censored = 0;
};

inline std::vector<ResultRow> run_table(const std::vector<ExperimentEntry>& entries) {
  ControlLimitCache cache;
  std::vector<ResultRow> rows;
  rows.reserve(entries.size());
  for (const ExperimentEntry& e : entries) {
    const ExperimentSpec& s = e.spec;
    const DistributionSpec dist = s.resolved_dist();
    ResultRow row;
    row.spec_id = s.id;
    row.family = dist.label();
    row.kappa = dist.kappa.value_or(0.0);
    if (e.kind == ExperimentKind::scale) {
      row.mode = "scale";
      row.arl = Sampler(dist).scale();
      rows.push_back(row);
      continue;
    }
    row.mode = std::string(to_string(s.mode));
    row.zeta = s.zeta;
    row.m = s.m;
    row.arl0 = s.arl0.value_or(0.0);
    if (s.shift) {
      row.delta = s.shift->delta;
      row.tau = s.shift->tau;
    }
    const ArlEstimate est = e.kind == ExperimentKind::in_control ? in_control_arl(s, &cache) : out_of_control_arl(s, &cache);
    row.reps = est.reps;
    row.arl = est.mean;
    row.std_error = est.std_error;
    row.censored = est.censored;
    rows.push_back(row);
  }
  return rows;
}

inline constexpr const char* results_csv_header = "spec_id,mode,family,kappa,zeta,m,arl0,delta,tau,reps,arl,stderr,censored";

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << results_csv_header << '\n';
  char buf[512];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.6g,%.6g,%zu,%.6g,%.6f,%zu,%zu,%.6f,%.6f,%zu\n", csv_quote(r.spec_id).c_str(),
                  r.mode.c_str(), csv_quote(r.family).c_str(), r.kappa, r.zeta, r.m, r.arl0, r.delta, r.tau, r.reps, r.arl,
                  r.std_error, r.censored);
    out << buf;
  }
}

}  // namespace circusum
