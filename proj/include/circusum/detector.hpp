#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "angle.hpp"
#include "errors.hpp"
#include "trig_accumulator.hpp"

namespace circusum {

enum class Mode { direction, concentration };

inline std::string_view to_string(Mode m) { return m == Mode::direction ? "direction" : "concentration"; }
inline Mode mode_from_string(std::string_view s) {
  if (s == "direction") return Mode::direction;
  if (s == "concentration") return Mode::concentration;
  throw invalid_input("unknown mode '" + std::string(s) + "' (expected direction or concentration)");
}

/// Relative floor on the squared CUSUM denominators; below it the warmup is
/// treated as ill-conditioned.
inline constexpr double degeneracy_floor = 1e-12;

/// (n-1) B*_{n-1}^2 / (n-1) in the rotation-invariant form
/// (C^2 S2 + S^2 C2 - 2 C S A2) / n over the accumulated observations.
inline double direction_denominator_sq(const TrigAccumulator& acc) {
  const double n = static_cast<double>(acc.n);
  return (acc.C * acc.C * acc.S2 + acc.S * acc.S * acc.C2 - 2.0 * acc.C * acc.S * acc.A2) / n;
}

/// B'^2 = n^-1 sum cos^2(X_i - nu_hat) - R^2 / n^2, with the cos^2 sum
/// expanded through (C2, S2, A2).
inline double concentration_denominator_sq(const TrigAccumulator& acc) {
  const double n = static_cast<double>(acc.n);
  const double r2 = acc.C * acc.C + acc.S * acc.S;
  double mean_cos_sq;
  if (r2 > 0.0) {
    mean_cos_sq = (acc.C * acc.C * acc.C2 + acc.S * acc.S * acc.S2 + 2.0 * acc.C * acc.S * acc.A2) / (r2 * n);
  } else {
    mean_cos_sq = acc.C2 / n;  // nu_hat = 0 by convention
  }
  return mean_cos_sq - r2 / (n * n);
}

/// xi_n = (C sin x - S cos x) / B* from the sums over X_1..X_{n-1}.
/// Empty when the denominator is degenerate.
inline std::optional<double> direction_summand(const TrigAccumulator& acc, Angle x) {
  if (acc.n < 2) throw invalid_input("direction_summand: need at least two prior observations");
  const double b2 = direction_denominator_sq(acc);
  if (!(b2 > degeneracy_floor * static_cast<double>(acc.n))) return std::nullopt;
  const double v = acc.C * std::sin(x.radians()) - acc.S * std::cos(x.radians());
  return v / std::sqrt(b2);
}

/// xi'_n = (cos(x - nu_hat) - R/(n-1)) / B'_{n-1}.
inline std::optional<double> concentration_summand(const TrigAccumulator& acc, Angle x) {
  if (acc.n < 2) throw invalid_input("concentration_summand: need at least two prior observations");
  const double b2 = concentration_denominator_sq(acc);
  if (!(b2 > degeneracy_floor * static_cast<double>(acc.n))) return std::nullopt;
  const double r = acc.resultant_length();
  const double n = static_cast<double>(acc.n);
  // cos(x - nu_hat) = (C cos x + S sin x) / R
  const double projected = r > 0.0 ? (acc.C * std::cos(x.radians()) + acc.S * std::sin(x.radians())) / r : std::cos(x.radians());
  return (projected - r / n) / std::sqrt(b2);
}

inline std::optional<double> summand(Mode mode, const TrigAccumulator& acc, Angle x) {
  return mode == Mode::direction ? direction_summand(acc, x) : concentration_summand(acc, x);
}

inline double denominator_sq(Mode mode, const TrigAccumulator& acc) {
  return mode == Mode::direction ? direction_denominator_sq(acc) : concentration_denominator_sq(acc);
}

struct CusumConfig {
  Mode mode = Mode::direction;
  double zeta = 0.0;       // reference value
  double h = 1.0;          // control limit
  std::size_t m = 2;       // warmup size

  void validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw invalid_input("control limit h must be finite and > 0");
    if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw invalid_input("reference value zeta must be finite and >= 0");
    if (m < 2) throw invalid_input("warmup size m must be at least 2");
  }
};

enum class Side { up, down };
inline std::string_view to_string(Side s) { return s == Side::up ? "up" : "down"; }

enum class Phase { warming, monitoring, signaled };
inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::warming: return "warming";
    case Phase::monitoring: return "monitoring";
    case Phase::signaled: return "signaled";
  }
  return "unknown";
}

/// Indices are global observation numbers (1-based, offset included).
struct SignalEvent {
  std::size_t signal_index = 0;
  Side side = Side::up;
  std::size_t changepoint = 0;
  Angle segment_mean;
  double segment_kappa = 0.0;
};

/// Two-sided CUSUM over either summand. D+ and D- are reflected at zero
/// independently; the summand for observation n uses only X_1..X_{n-1}, and
/// X_n enters the moment sums right after.
class CusumState {
 public:
  explicit CusumState(CusumConfig config, std::size_t index_offset = 0) : config_(config), offset_(index_offset) {
    config_.validate();
  }

  const CusumConfig& config() const noexcept { return config_; }
  const TrigAccumulator& accumulator() const noexcept { return acc_; }
  double d_plus() const noexcept { return d_plus_; }
  double d_minus() const noexcept { return d_minus_; }
  Phase phase() const noexcept { return phase_; }
  /// Observations consumed by this run.
  std::size_t n_total() const noexcept { return n_total_; }
  /// Observations used as warmup; exceeds m only if the warmup was extended.
  std::size_t warmup_length() const noexcept { return warmup_len_; }
  std::size_t warmup_extensions() const noexcept { return warmup_len_ > config_.m ? warmup_len_ - config_.m : 0; }
  std::size_t index_offset() const noexcept { return offset_; }
  /// Global index of the most recent observation.
  std::size_t current_index() const noexcept { return offset_ + n_total_; }
  std::size_t last_zero_plus() const noexcept { return offset_ + last_zero_plus_; }
  std::size_t last_zero_minus() const noexcept { return offset_ + last_zero_minus_; }
  /// Summand of the latest monitored step (NaN while warming).
  double last_summand() const noexcept { return last_summand_; }
  const std::optional<SignalEvent>& signal() const noexcept { return signal_; }
  std::span<const double> history() const noexcept { return history_; }

  /// Squared denominator at the end of warmup (B*_m^2 or B'_m^2).
  double warmup_denominator_sq() const noexcept { return warmup_b2_; }

  Phase step(Angle x) {
    if (phase_ == Phase::signaled) throw invalid_input("step: CUSUM has signaled; restart it first");
    ++n_total_;
    history_.push_back(x.radians());

    if (n_total_ <= config_.m || phase_ == Phase::warming) {
      if (n_total_ > config_.m) {
        // First candidate monitoring step: the warmup must be well conditioned.
        auto xi = summand(config_.mode, acc_, x);
        if (xi) {
          warmup_len_ = n_total_ - 1;
          warmup_b2_ = denominator_sq(config_.mode, acc_);
          last_zero_plus_ = last_zero_minus_ = warmup_len_;
          phase_ = Phase::monitoring;
          apply(*xi);
          acc_.push(x);
          return phase_;
        }
      }
      acc_.push(x);
      warmup_len_ = n_total_;
      return phase_;
    }

    auto xi = summand(config_.mode, acc_, x);
    if (!xi) throw ill_conditioned_warmup("CUSUM denominator collapsed at observation " + std::to_string(current_index()));
    apply(*xi);
    acc_.push(x);
    return phase_;
  }

  /// Feeds a summand directly, bypassing the moment sums. Monitoring only;
  /// used to exercise the recursion in isolation.
  Phase step_summand(double xi) {
    if (phase_ == Phase::signaled) throw invalid_input("step: CUSUM has signaled; restart it first");
    if (phase_ == Phase::warming) {
      phase_ = Phase::monitoring;
      warmup_len_ = n_total_;
      last_zero_plus_ = last_zero_minus_ = n_total_;
    }
    ++n_total_;
    history_.push_back(std::numeric_limits<double>::quiet_NaN());
    apply(xi);
    return phase_;
  }

 private:
  void apply(double xi) {
    last_summand_ = xi;
    d_plus_ = std::max(0.0, d_plus_ + xi - config_.zeta);
    d_minus_ = std::min(0.0, d_minus_ + xi + config_.zeta);
    if (d_plus_ == 0.0) last_zero_plus_ = n_total_;
    if (d_minus_ == 0.0) last_zero_minus_ = n_total_;
    if (d_plus_ >= config_.h) {
      record(Side::up, last_zero_plus_);
    } else if (d_minus_ <= -config_.h) {
      record(Side::down, last_zero_minus_);
    }
  }

  void record(Side side, std::size_t local_changepoint) {
    phase_ = Phase::signaled;
    SignalEvent ev;
    ev.signal_index = current_index();
    ev.side = side;
    ev.changepoint = offset_ + local_changepoint;
    TrigAccumulator seg;
    for (std::size_t i = 0; i < local_changepoint && i < history_.size(); ++i)
      if (!std::isnan(history_[i])) seg.push(history_[i]);
    if (seg.n >= 1) ev.segment_mean = seg.mean_direction();
    ev.segment_kappa = seg.n >= 2 ? sample_concentration(seg) : std::numeric_limits<double>::quiet_NaN();
    signal_ = ev;
  }

  CusumConfig config_;
  std::size_t offset_ = 0;
  TrigAccumulator acc_;
  double d_plus_ = 0.0;
  double d_minus_ = 0.0;
  std::size_t n_total_ = 0;
  std::size_t warmup_len_ = 0;
  std::size_t last_zero_plus_ = 0;
  std::size_t last_zero_minus_ = 0;
  double last_summand_ = std::numeric_limits<double>::quiet_NaN();
  double warmup_b2_ = std::numeric_limits<double>::quiet_NaN();
  Phase phase_ = Phase::warming;
  std::optional<SignalEvent> signal_;
  std::vector<double> history_;
};

inline Phase step(CusumState& state, Angle x) { return state.step(x); }

inline std::size_t changepoint_estimate(const CusumState& state) {
  if (state.phase() != Phase::signaled || !state.signal()) throw invalid_input("changepoint_estimate: CUSUM has not signaled");
  return state.signal()->changepoint;
}

/// Fresh state whose warmup starts at global index `from_index` (normally
/// tau_hat + 1). Monitoring resumes at from_index + m.
inline CusumState restart(const CusumState& state, std::size_t from_index, std::size_t stream_length) {
  if (state.phase() != Phase::signaled) throw invalid_input("restart: CUSUM has not signaled");
  if (from_index < 1 || from_index > stream_length)
    throw invalid_input("restart: index " + std::to_string(from_index) + " is beyond the end of the stream");
  return CusumState(state.config(), from_index - 1);
}

}  // namespace circusum
