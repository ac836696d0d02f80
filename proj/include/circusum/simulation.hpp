#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "calibration.hpp"
#include "detector.hpp"
#include "distribution.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sampler.hpp"

namespace circusum {

struct Shift {
  double delta = 0.0;    // rotation in radians applied from observation tau + 1 on
  std::size_t tau = 0;   // last in-control observation (global index)
};

struct ExperimentSpec {
  std::string id;
  DistributionSpec dist;
  std::optional<double> kappa;  // overrides dist.kappa (and clears dist.sigma)
  std::size_t m = 25;
  double zeta = 0.0;
  std::optional<double> arl0;
  std::optional<double> h;      // explicit limit; otherwise calibrated from arl0
  std::size_t reps = 20'000;
  Mode mode = Mode::direction;
  std::optional<Shift> shift;
  std::uint64_t seed = 1;
  std::size_t calibration_reps = 100'000;
  std::uint64_t calibration_seed = 42;
  unsigned threads = 0;

  DistributionSpec resolved_dist() const {
    DistributionSpec d = dist;
    if (kappa) {
      if (d.family == Family::mixture) throw invalid_input("experiment kappa cannot override a mixture; set it on the base");
      d.kappa = *kappa;
      d.sigma.reset();
    }
    return d;
  }

  void validate() const {
    if (reps < 1000) throw invalid_input("experiment '" + id + "': reps must be at least 1000");
    if (m < 2) throw invalid_input("experiment '" + id + "': m must be at least 2");
    if (!arl0 && !h) throw invalid_input("experiment '" + id + "': give arl0 or h");
    if (arl0 && !(*arl0 >= 1.0)) throw invalid_input("experiment '" + id + "': arl0 must be >= 1");
    if (shift && shift->tau < m) throw invalid_input("experiment '" + id + "': shift tau must be >= m");
    if (!(zeta >= 0.0)) throw invalid_input("experiment '" + id + "': zeta must be >= 0");
    circusum::validate(resolved_dist());
  }

  std::uint64_t horizon() const {
    return arl0 ? static_cast<std::uint64_t>(100.0 * *arl0) : std::uint64_t{1'000'000};
  }
};

/// Memoises calibrated control limits by (zeta, arl0, reps, seed).
class ControlLimitCache {
 public:
  double get(double zeta, double arl0, std::size_t reps, std::uint64_t seed, unsigned threads = 0) {
    const auto key = std::make_tuple(zeta, arl0, reps, seed);
    {
      std::lock_guard lock(mutex_);
      if (auto it = limits_.find(key); it != limits_.end()) return it->second;
    }
    const double h = find_control_limit(zeta, arl0, reps, RngStream(seed, 0), threads);
    std::lock_guard lock(mutex_);
    limits_.emplace(key, h);
    return h;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<double, double, std::size_t, std::uint64_t>, double> limits_;
};

inline double resolve_limit(const ExperimentSpec& spec, ControlLimitCache* cache = nullptr) {
  if (spec.h) return *spec.h;
  if (cache) return cache->get(spec.zeta, *spec.arl0, spec.calibration_reps, spec.calibration_seed, spec.threads);
  return find_control_limit(spec.zeta, *spec.arl0, spec.calibration_reps, RngStream(spec.calibration_seed, 0), spec.threads);
}

/// Outcome of a single simulated stream.
struct ReplicateOutcome {
  bool signaled = false;
  std::size_t signal_index = 0;    // global index of the alarm
  std::size_t warmup_length = 0;
  double warmup_denominator = 0.0; // B*_m (or B'_m in concentration mode)
  bool extended_warmup = false;
};

/// Streams observations from `sampler` through a CUSUM until it signals or
/// `horizon` monitored observations pass. With a shift, observations after
/// shift.tau are rotated by shift.delta.
inline ReplicateOutcome run_replicate(const Sampler& sampler, const CusumConfig& config, RngStream& rng,
                                      const std::optional<Shift>& shift, std::uint64_t horizon) {
  CusumState state(config);
  ReplicateOutcome out;
  const std::uint64_t limit = horizon + config.m + (shift ? shift->tau : 0);
  for (std::uint64_t i = 1; i <= limit; ++i) {
    double x = sampler.draw(rng);
    if (shift && i > shift->tau) x = wrap_radians(x + shift->delta);
    if (state.step(Angle::from_radians(x)) == Phase::signaled) {
      out.signaled = true;
      out.signal_index = state.signal()->signal_index;
      break;
    }
    if (state.phase() == Phase::warming && state.n_total() > config.m) {
      out.extended_warmup = true;
      break;
    }
  }
  out.warmup_length = state.warmup_length();
  out.warmup_denominator = std::sqrt(state.warmup_denominator_sq());
  if (state.warmup_extensions() > 0) out.extended_warmup = true;
  return out;
}

namespace detail {

struct RunSample {
  std::uint64_t length = 0;
  bool censored = false;
  double warmup_denominator = 0.0;
  std::size_t redrawn = 0;
  std::size_t discarded = 0;
};

inline constexpr std::size_t max_attempts_per_replicate = 10'000;

inline std::vector<RunSample> simulate_runs(const ExperimentSpec& spec, double h) {
  spec.validate();
  const Sampler sampler(spec.resolved_dist());
  const CusumConfig config{spec.mode, spec.zeta, h, spec.m};
  config.validate();
  const std::uint64_t horizon = spec.horizon();
  const RngStream base(spec.seed, 0);
  std::vector<RunSample> runs(spec.reps);
  parallel_for(spec.reps, spec.threads, [&](std::size_t r) {
    const RngStream rep = base.substream(r);
    RunSample& out = runs[r];
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt >= max_attempts_per_replicate)
        throw numeric_failure("experiment '" + spec.id + "': replicate could not produce a usable run");
      RngStream s = rep.substream(attempt);
      const ReplicateOutcome o = run_replicate(sampler, config, s, spec.shift, horizon);
      if (o.extended_warmup) {
        ++out.redrawn;
        continue;
      }
      if (spec.shift) {
        if (o.signaled && o.signal_index <= spec.shift->tau) {
          ++out.discarded;
          continue;
        }
        out.censored = !o.signaled;
        out.length = o.signaled ? o.signal_index - spec.shift->tau : horizon;
      } else {
        out.censored = !o.signaled;
        out.length = o.signaled ? o.signal_index - o.warmup_length : horizon;
      }
      out.warmup_denominator = o.warmup_denominator;
      return;
    }
  });
  return runs;
}

inline ArlEstimate aggregate(const std::vector<RunSample>& runs) {
  std::vector<std::uint64_t> lengths;
  lengths.reserve(runs.size());
  std::size_t censored = 0, redrawn = 0, discarded = 0;
  for (const RunSample& r : runs) {
    lengths.push_back(r.length);
    censored += r.censored;
    redrawn += r.redrawn;
    discarded += r.discarded;
  }
  ArlEstimate est = summarize_run_lengths(lengths, censored);
  est.redrawn = redrawn;
  est.discarded = discarded;
  const double total = static_cast<double>(discarded + runs.size());
  if (total > 0 && static_cast<double>(discarded) / total > 0.9) est.flagged = true;
  return est;
}

}  // namespace detail

/// Mean number of monitored observations (from m + 1) to a false alarm.
inline ArlEstimate in_control_arl(const ExperimentSpec& spec, ControlLimitCache* cache = nullptr) {
  if (spec.shift) throw invalid_input("in_control_arl: experiment '" + spec.id + "' has a shift");
  spec.validate();
  return detail::aggregate(detail::simulate_runs(spec, resolve_limit(spec, cache)));
}

/// E[N - tau | N > tau]. Replicates that alarm at or before tau are discarded
/// and re-drawn.
inline ArlEstimate out_of_control_arl(const ExperimentSpec& spec, ControlLimitCache* cache = nullptr) {
  if (!spec.shift) throw invalid_input("out_of_control_arl: experiment '" + spec.id + "' has no shift");
  spec.validate();
  return detail::aggregate(detail::simulate_runs(spec, resolve_limit(spec, cache)));
}

struct ProfileBin {
  double bin_mid = 0.0;
  double mean_rl = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

struct ConditionalProfile {
  std::vector<ProfileBin> bins;  // bins with at least min_count replicates
  ArlEstimate overall;
  std::size_t suppressed = 0;    // replicates falling in suppressed bins
};

/// In-control run lengths grouped by the warmup denominator B*_m into bins of
/// width bin_width; bins with fewer than min_count members are suppressed.
inline ConditionalProfile conditional_arl_profile(const ExperimentSpec& spec, double bin_width, ControlLimitCache* cache = nullptr,
                                                  std::size_t min_count = 100) {
  if (spec.shift) throw invalid_input("conditional_arl_profile: experiment must be in control");
  if (!(bin_width > 0.0)) throw invalid_input("conditional_arl_profile: bin_width must be > 0");
  spec.validate();
  const auto runs = detail::simulate_runs(spec, resolve_limit(spec, cache));
  ConditionalProfile profile;
  profile.overall = detail::aggregate(runs);
  std::map<long, std::vector<std::uint64_t>> groups;
  for (const auto& r : runs) groups[static_cast<long>(std::floor(r.warmup_denominator / bin_width))].push_back(r.length);
  for (const auto& [index, lengths] : groups) {
    if (lengths.size() < min_count) {
      profile.suppressed += lengths.size();
      continue;
    }
    const ArlEstimate e = summarize_run_lengths(lengths);
    profile.bins.push_back({(static_cast<double>(index) + 0.5) * bin_width, e.mean, e.std_error, lengths.size()});
  }
  return profile;
}

}  // namespace circusum
