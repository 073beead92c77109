// SPDX-License-Identifier: Apache-2.0
#include "chargesense/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "chargesense/choice.hpp"
#include "chargesense/occupancy.hpp"
#include "chargesense/rng.hpp"

namespace chargesense {

namespace {

struct Event {
  double time;
  int delta;  // +1 arrival, -1 departure
};

struct Streams {
  CounterRng arrivals;
  CounterRng demand;
  CounterRng impatience;
  CounterRng membership;
  CounterRng completion;

  Streams(std::uint64_t seed, std::uint64_t replication)
      : arrivals(seed, replication, "arrivals"),
        demand(seed, replication, "demand"),
        impatience(seed, replication, "impatience"),
        membership(seed, replication, "membership"),
        completion(seed, replication, "completion") {}
};

struct ReplicationOutcome {
  std::vector<TracePoint> trace;
  std::vector<std::uint64_t> level_counts;
  std::uint64_t arrivals = 0;
  std::uint64_t ties = 0;
  std::uint64_t mixture_draws = 0;
  std::uint64_t mixture_accepts = 0;
  double sum_demand = 0.0;
  double sum_completion = 0.0;
  double sum_service = 0.0;
};

std::size_t sample_categorical(std::span<const double> masses, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    cumulative += masses[i];
    if (u < cumulative) return i;
  }
  // Round-off can leave the cumulative sum a hair under 1; pick the last
  // positive entry.
  for (std::size_t i = masses.size(); i-- > 0;) {
    if (masses[i] > 0.0) return i;
  }
  return masses.size() - 1;
}

class MixtureSampler {
 public:
  explicit MixtureSampler(const MixtureImpatience& mixture)
      : mixture_(mixture), use_rejection_(mixture.truncation_mass() >= 0.1) {
    for (const auto& c : mixture.components()) weights_.push_back(c.weight);
  }

  bool uses_rejection() const { return use_rejection_; }

  double draw(CounterRng& rng, ReplicationOutcome& outcome) const {
    if (!use_rejection_) return inverse_cdf(rng.next_open01());
    while (true) {
      const auto& c = mixture_.components()[sample_categorical(weights_, rng.next_open01())];
      const double u1 = rng.next_open01();
      const double u2 = rng.next_open01();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      const double alpha = c.mean + c.stddev * z;
      ++outcome.mixture_draws;
      if (alpha >= mixture_.lo() && alpha <= mixture_.hi()) {
        ++outcome.mixture_accepts;
        return alpha;
      }
    }
  }

 private:
  double inverse_cdf(double u) const {
    double lo = mixture_.lo();
    double hi = mixture_.hi();
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mixture_.cdf(mid) < u) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  const MixtureImpatience& mixture_;
  bool use_rejection_;
  std::vector<double> weights_;
};

double sample_completion(const EarlyDeparture& departure, CounterRng& rng) {
  switch (departure.kind()) {
    case DepartureKind::kAlwaysComplete:
      return 1.0;
    case DepartureKind::kPointMass:
      return departure.mean();
    case DepartureKind::kUniformInterval:
      return departure.lo() + (departure.hi() - departure.lo()) * rng.next_open01();
  }
  return 1.0;
}

ReplicationOutcome run_replication(const Scenario& scenario, const SimConfig& config,
                                   std::uint64_t replication) {
  const auto& scheme = scenario.scheme();
  ReplicationOutcome outcome;
  outcome.level_counts.assign(scheme.size(), 0);
  const double horizon = config.horizon_hours;
  const double lambda = scenario.arrival_rate();
  if (lambda == 0.0) return outcome;

  std::vector<LevelSet> populations;
  std::vector<double> shares;
  if (const auto& mix = scenario.subpopulations()) {
    for (const auto& entry : mix->entries()) {
      populations.push_back(entry.subset);
      shares.push_back(entry.share);
    }
  } else {
    populations.push_back(scheme.all_levels());
    shares.push_back(1.0);
  }

  std::optional<MixtureSampler> mixture_sampler;
  if (const auto* mixture = std::get_if<MixtureImpatience>(&scenario.impatience())) {
    mixture_sampler.emplace(*mixture);
  }

  Streams streams(config.seed, replication);
  std::vector<Event> events;
  const double span_x = scenario.demand().x_max() - scenario.demand().x_min();
  double t = 0.0;
  while (true) {
    t += -std::log(streams.arrivals.next_open01()) / lambda;
    if (t > horizon) break;

    const double x = scenario.demand().x_min() + span_x * streams.demand.next_open01();
    const std::size_t pop_index =
        populations.size() == 1 ? 0 : sample_categorical(shares, streams.membership.next_open01());
    const LevelSet allowed = populations[pop_index];

    double alpha = 0.0;
    const DiscreteImpatience* discrete = scenario.discrete_impatience();
    if (const auto& mix = scenario.subpopulations(); mix && mix->entry(pop_index).impatience) {
      discrete = &*mix->entry(pop_index).impatience;
    }
    if (discrete) {
      alpha = discrete->value(sample_categorical(discrete->masses(), streams.impatience.next_open01()));
    } else {
      alpha = mixture_sampler->draw(streams.impatience, outcome);
    }

    const double theta = sample_completion(scenario.departure(), streams.completion);
    const auto choice = select_level_tie_break(x, alpha, scheme, allowed);
    if (choice.tie) ++outcome.ties;
    const double service = theta * x / scheme.rate(choice.level);

    ++outcome.arrivals;
    ++outcome.level_counts[choice.level];
    outcome.sum_demand += x;
    outcome.sum_completion += theta;
    outcome.sum_service += service;
    events.push_back({t, +1});
    if (t + service <= horizon) events.push_back({t + service, -1});
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  outcome.trace.reserve(events.size());
  std::int64_t occupancy = 0;
  for (const auto& e : events) {
    occupancy += e.delta;
    outcome.trace.push_back({e.time, occupancy});
  }
  return outcome;
}

}  // namespace

void SimConfig::validate() const {
  if (!std::isfinite(horizon_hours) || !(horizon_hours > 0.0)) {
    throw InvalidParameter("horizon", "horizon must be positive");
  }
  const double w = warmup();
  if (!std::isfinite(w) || w < 0.0 || !(w < horizon_hours)) {
    throw InvalidParameter("warmup", "warmup must satisfy 0 <= warmup < horizon");
  }
  if (replications < 1) throw InvalidParameter("replications", "need at least one replication");
}

double trace_time_average(const std::vector<TracePoint>& trace, double from, double to) {
  if (!(to > from)) throw InvalidParameter("window", "time-average window must be nonempty");
  double integral = 0.0;
  double last_time = from;
  std::int64_t level = 0;
  for (const auto& point : trace) {
    if (point.time_hours >= to) break;
    if (point.time_hours > from) {
      integral += static_cast<double>(level) * (point.time_hours - last_time);
      last_time = point.time_hours;
    }
    level = point.occupancy;
  }
  integral += static_cast<double>(level) * (to - last_time);
  return integral / (to - from);
}

std::vector<TracePoint> occupancy_trace(const Scenario& scenario, const SimConfig& config) {
  config.validate();
  return run_replication(scenario, config, 0).trace;
}

SimResult simulate(const Scenario& scenario, const SimConfig& config) {
  config.validate();
  const auto& scheme = scenario.scheme();
  SimResult result;
  std::vector<std::uint64_t> counts(scheme.size(), 0);
  std::uint64_t draws = 0;
  std::uint64_t accepts = 0;
  double sum_demand = 0.0;
  double sum_completion = 0.0;
  double sum_service = 0.0;

  for (std::size_t r = 0; r < config.replications; ++r) {
    const auto outcome = run_replication(scenario, config, r);
    result.replication_averages.push_back(
        trace_time_average(outcome.trace, config.warmup(), config.horizon_hours));
    for (std::size_t l = 0; l < counts.size(); ++l) counts[l] += outcome.level_counts[l];
    result.arrivals += outcome.arrivals;
    result.tie_breaks += outcome.ties;
    draws += outcome.mixture_draws;
    accepts += outcome.mixture_accepts;
    sum_demand += outcome.sum_demand;
    sum_completion += outcome.sum_completion;
    sum_service += outcome.sum_service;
  }

  const auto& averages = result.replication_averages;
  const double n = static_cast<double>(averages.size());
  result.time_average_occupancy = std::accumulate(averages.begin(), averages.end(), 0.0) / n;
  if (averages.size() > 1) {
    double ss = 0.0;
    for (double a : averages) ss += (a - result.time_average_occupancy) * (a - result.time_average_occupancy);
    result.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }

  result.level_frequencies.assign(scheme.size(), 0.0);
  if (result.arrivals > 0) {
    const double total = static_cast<double>(result.arrivals);
    for (std::size_t l = 0; l < counts.size(); ++l) {
      result.level_frequencies[l] = static_cast<double>(counts[l]) / total;
    }
    result.mean_demand = sum_demand / total;
    result.mean_completion = sum_completion / total;
    result.mean_service_hours = sum_service / total;

    const auto expected = evaluate_occupancy(scenario).level_probabilities;
    double statistic = 0.0;
    int categories = 0;
    bool impossible = false;
    for (std::size_t l = 0; l < counts.size(); ++l) {
      const double e = expected[l] * total;
      if (e > 0.0) {
        ++categories;
        statistic += (static_cast<double>(counts[l]) - e) * (static_cast<double>(counts[l]) - e) / e;
      } else if (counts[l] > 0) {
        impossible = true;
      }
    }
    if (impossible) {
      result.chi_square_statistic = INFINITY;
      result.chi_square_p_value = 0.0;
    } else {
      result.chi_square_statistic = statistic;
      result.chi_square_p_value =
          categories > 1
              ? boost::math::cdf(boost::math::complement(
                    boost::math::chi_squared_distribution<double>(categories - 1), statistic))
              : 1.0;
    }
  }

  if (const auto* mixture = std::get_if<MixtureImpatience>(&scenario.impatience())) {
    result.mixture_acceptance_rate = draws > 0 ? static_cast<double>(accepts) / static_cast<double>(draws)
                                               : mixture->truncation_mass();
  }
  return result;
}

}  // namespace chargesense
