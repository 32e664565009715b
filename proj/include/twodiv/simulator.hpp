#pragma once

// Exact-event Monte Carlo for the refracted and the impulse-controlled
// processes. Between claims the state moves along straight lines, so every
// region crossing and axis hit is solved in closed form; the only bias is
// censoring at max_time, which is bounded and reported.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twodiv/impulse_valuation.hpp"
#include "twodiv/model.hpp"
#include "twodiv/rng.hpp"

namespace twodiv {

struct SimConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t master_seed = 1;
    double max_time = 0.0;  ///< 0: (1/q) ln(rate_bound / (q bias_tol))
    double bias_tol = 1e-4;
    std::vector<int> moment_orders{1};
    unsigned threads = 0;  ///< 0: hardware concurrency
    std::uint64_t block_size = 4096;
    std::uint64_t max_cycles = 10000000;  ///< impulse only; 1 gives the first-cycle payout
};

struct MomentEstimate {
    int order = 1;
    double mean = 0.0;
    double std_error = 0.0;
};

struct DividendEstimate {
    std::vector<MomentEstimate> moments;
    double ruin_time_mean = 0.0;  ///< over paths ruined before max_time
    std::uint64_t n_censored = 0;
    double truncation_bias_bound = 0.0;
    double max_time = 0.0;
    std::uint64_t n_paths = 0;

    /// Throws std::out_of_range if order n was not requested.
    const MomentEstimate& moment(int n) const;
};

struct TraceEvent {
    double t = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    std::string event;
};

struct PathResult {
    double D = 0.0;      ///< discounted dividends
    double sigma = 0.0;  ///< ruin time, or the censoring time
    bool censored = false;
};

/// r (e^{-q t1} - e^{-q t2}) / q, computed without cancellation.
double discounted_accrual(double rate, double t1, double t2, double q);

/// (1/q) ln(rate_bound / (q bias_tol)), at least 1/q.
double default_max_time(double rate_bound, double q, double bias_tol);

/// One path of the refracted process. No parameter validation, so a zero
/// claim intensity gives the deterministic flow.
PathResult simulate_refracted_path(const Reserves& u, const BarrierSpec& barrier, const ModelParams& params,
                                   PhiloxStream& rng, double max_time,
                                   std::vector<TraceEvent>* trace = nullptr);

DividendEstimate estimate_barrier_moments(const Reserves& u, const BarrierSpec& barrier,
                                          const ModelParams& params, const SimConfig& cfg);

/// One path of the impulse policy, at most max_cycles impulses.
PathResult simulate_impulse_path(const ImpulseSpec& spec, const ModelParams& params, PhiloxStream& rng,
                                 std::uint64_t max_cycles, double max_time,
                                 std::vector<TraceEvent>* trace = nullptr);

DividendEstimate estimate_impulse_moments(const ImpulseSpec& spec, const ModelParams& params,
                                          const SimConfig& cfg);

/// CSV t,y1,y2,event
void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& trace);

}  // namespace twodiv
