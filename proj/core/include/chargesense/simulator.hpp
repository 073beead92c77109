// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chargesense/model.hpp"

namespace chargesense {

struct SimConfig {
  double horizon_hours = 5000.0;
  std::uint64_t seed = 0;
  std::size_t replications = 10;
  // Defaults to 10% of the horizon.
  std::optional<double> warmup_hours;

  double warmup() const { return warmup_hours.value_or(0.1 * horizon_hours); }
  /// Throws InvalidParameter unless horizon > warmup >= 0 and replications >= 1.
  void validate() const;
};

struct SimResult {
  double time_average_occupancy = 0.0;  // mean over replications
  double standard_error = 0.0;          // across replications; 0 for one replication
  std::vector<double> replication_averages;
  std::vector<double> level_frequencies;  // empirical choice shares over all arrivals
  double mean_demand = 0.0;               // kWh, empirical
  double mean_completion = 0.0;           // empirical theta
  double mean_service_hours = 0.0;        // empirical theta * x / r
  std::uint64_t arrivals = 0;             // over all replications
  std::uint64_t tie_breaks = 0;
  // Fraction of untruncated mixture draws accepted (mixture impatience only);
  // the truncation mass when sampling used the inverse CDF instead.
  std::optional<double> mixture_acceptance_rate;
  // Chi-square goodness of fit of level_frequencies to the analytic PMF.
  std::optional<double> chi_square_statistic;
  std::optional<double> chi_square_p_value;
};

struct TracePoint {
  double time_hours = 0.0;
  std::int64_t occupancy = 0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// Monte Carlo estimate of the infinite-server facility occupancy.
SimResult simulate(const Scenario& scenario, const SimConfig& config);

/// Occupancy after every arrival and departure event of replication 0, over [0, horizon].
std::vector<TracePoint> occupancy_trace(const Scenario& scenario, const SimConfig& config);

/// Time average of a trace over [from, to] (occupancy before the first event is 0).
double trace_time_average(const std::vector<TracePoint>& trace, double from, double to);

}  // namespace chargesense
