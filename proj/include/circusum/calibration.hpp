#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace circusum {

struct ArlEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  std::size_t censored = 0;   // runs truncated at the horizon
  std::size_t redrawn = 0;    // replicates re-drawn (ill-conditioned warmup)
  std::size_t discarded = 0;  // replicates dropped for alarming before the change
  bool flagged = false;       // censoring or discard rate above its cap
};

/// Maximum tolerated fraction of censored runs before an estimate is flagged.
inline constexpr double censor_cap = 0.01;

/// Mean and standard error of a set of run lengths.
inline ArlEstimate summarize_run_lengths(std::span<const std::uint64_t> lengths, std::size_t censored = 0) {
  ArlEstimate est;
  est.reps = lengths.size();
  est.censored = censored;
  if (lengths.empty()) return est;
  long double sum = 0.0L, sum_sq = 0.0L;
  for (std::uint64_t n : lengths) {
    const long double v = static_cast<long double>(n);
    sum += v;
    sum_sq += v * v;
  }
  const long double count = static_cast<long double>(lengths.size());
  const long double mean = sum / count;
  const long double var = lengths.size() > 1 ? (sum_sq - count * mean * mean) / (count - 1.0L) : 0.0L;
  est.mean = static_cast<double>(mean);
  est.std_error = static_cast<double>(std::sqrt(std::max(var, 0.0L) / count));
  est.flagged = static_cast<double>(censored) > censor_cap * static_cast<double>(lengths.size());
  return est;
}

struct NormalArlOptions {
  std::uint64_t horizon = 1'000'000;
  unsigned threads = 0;
};

/// Run length of one two-sided CUSUM of i.i.d. N(0,1) summands started at 0.
/// Returns horizon when no crossing occurs (censored).
inline std::uint64_t normal_cusum_run_length(double zeta, double h, RngStream& rng, std::uint64_t horizon) {
  double up = 0.0, down = 0.0;
  for (std::uint64_t k = 1; k <= horizon; ++k) {
    const double z = rng.normal();
    up = std::max(0.0, up + z - zeta);
    down = std::min(0.0, down + z + zeta);
    if (up >= h || down <= -h) return k;
  }
  return horizon;
}

/// Monte-Carlo in-control ARL of the two-sided standard normal CUSUM.
/// Replicate r draws from rng.substream(r), so repeated calls with the same
/// rng reuse the same random numbers.
inline ArlEstimate normal_cusum_arl(double zeta, double h, std::size_t reps, const RngStream& rng, NormalArlOptions opts = {}) {
  if (!(h > 0.0) || !std::isfinite(h)) throw invalid_input("normal_cusum_arl: h must be finite and > 0");
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw invalid_input("normal_cusum_arl: zeta must be finite and >= 0");
  if (reps < 1000) throw invalid_input("normal_cusum_arl: at least 1000 replications required");
  std::vector<std::uint64_t> lengths(reps);
  std::vector<char> censored(reps, 0);
  parallel_for(reps, opts.threads, [&](std::size_t r) {
    RngStream s = rng.substream(r);
    const std::uint64_t n = normal_cusum_run_length(zeta, h, s, opts.horizon);
    lengths[r] = n;
    // a crossing exactly at the horizon is indistinguishable; count it censored
    censored[r] = n >= opts.horizon;
  });
  std::size_t n_censored = 0;
  for (char c : censored) n_censored += static_cast<std::size_t>(c);
  return summarize_run_lengths(lengths, n_censored);
}

struct ControlLimit {
  double h = 0.0;
  ArlEstimate estimate;
  int stages = 0;  // path-extension rounds needed to bracket arl0
};

namespace detail {

// One replicate of the normal CUSUM, advanced lazily. D+ and D- do not
// depend on h, so the run length for every h follows from the record
// times of G_k = max(D+_k, -D-_k): N(h) is the time of the first record >= h.
struct RecordPath {
  RngStream rng;
  double up = 0.0;
  double down = 0.0;
  std::uint64_t k = 0;
  double peak = -1.0;
  std::vector<std::pair<double, std::uint64_t>> records;

  explicit RecordPath(RngStream s) : rng(std::move(s)) {}

  void advance(double zeta, double target, double keep_from, std::uint64_t horizon) {
    std::erase_if(records, [keep_from](const auto& rec) { return rec.first < keep_from; });
    while (peak < target && k < horizon) {
      const double z = rng.normal();
      ++k;
      up = std::max(0.0, up + z - zeta);
      down = std::min(0.0, down + z + zeta);
      const double g = std::max(up, -down);
      if (g > peak) {
        peak = g;
        if (g >= keep_from) records.emplace_back(g, k);
      }
    }
  }

  // Valid for h >= the keep_from of the last advance().
  std::uint64_t run_length(double h, std::uint64_t horizon, bool& censored) const {
    if (peak < h) {
      censored = true;
      return horizon;
    }
    censored = false;
    auto it = std::lower_bound(records.begin(), records.end(), h, [](const auto& rec, double v) { return rec.first < v; });
    return it->second;
  }
};

inline ArlEstimate record_arl(const std::vector<RecordPath>& paths, double h, std::uint64_t horizon) {
  std::vector<std::uint64_t> lengths(paths.size());
  std::size_t censored = 0;
  for (std::size_t r = 0; r < paths.size(); ++r) {
    bool c = false;
    lengths[r] = paths[r].run_length(h, horizon, c);
    censored += c;
  }
  return summarize_run_lengths(lengths, censored);
}

}  // namespace detail

/// Control limit giving a two-sided standard-normal CUSUM in-control ARL
/// arl0. Replicate r uses rng.substream(r) exactly as normal_cusum_arl does,
/// so the estimated ARL is a monotone step function of h (common random
/// numbers) and the search is a bisection on it. Horizon is 100 * arl0.
inline ControlLimit calibrate_control_limit(double zeta, double arl0, std::size_t reps, const RngStream& rng, unsigned threads = 0) {
  if (!(arl0 >= 50.0) || !std::isfinite(arl0)) throw invalid_input("find_control_limit: arl0 must be >= 50");
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw invalid_input("find_control_limit: zeta must be finite and >= 0");
  if (reps < 1000) throw invalid_input("find_control_limit: at least 1000 replications required");
  const auto horizon = static_cast<std::uint64_t>(100.0 * arl0);
  std::vector<detail::RecordPath> paths;
  paths.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) paths.emplace_back(rng.substream(r));

  ControlLimit out;
  double lo = 0.0;
  double hi = 1.0;
  while (true) {
    ++out.stages;
    parallel_for(reps, threads, [&](std::size_t r) { paths[r].advance(zeta, hi, lo, horizon); });
    if (detail::record_arl(paths, hi, horizon).mean >= arl0) break;
    lo = hi;
    hi *= 1.15;
    if (hi > 4096.0) throw numeric_failure("find_control_limit: could not bracket arl0 = " + std::to_string(arl0));
  }
  while (hi - lo > 1e-5 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (detail::record_arl(paths, mid, horizon).mean < arl0) lo = mid;
    else hi = mid;
  }
  out.h = hi;
  out.estimate = detail::record_arl(paths, hi, horizon);
  if (std::abs(out.estimate.mean - arl0) > 0.01 * arl0)
    throw numeric_failure("find_control_limit: ARL at the solution misses the target by more than 1%");
  return out;
}

inline double find_control_limit(double zeta, double arl0, std::size_t reps, const RngStream& rng, unsigned threads = 0) {
  return calibrate_control_limit(zeta, arl0, reps, rng, threads).h;
}

}  // namespace circusum
