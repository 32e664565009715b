#pragma once

// Grid sweep and local refinement of the barrier (a, b) for fixed reserves,
// with the series value V1 as objective.

#include <iosfwd>
#include <vector>

#include "twodiv/barrier_valuation.hpp"

namespace twodiv {

struct SweepResult {
    std::vector<SweepRow> grid;  ///< row-major: a outer, b inner
    bool has_argmax = false;
    double argmax_a = 0.0;
    double argmax_b = 0.0;
    double argmax_value = 0.0;
};

struct SweepOptions {
    double tol = 1e-12;
    unsigned threads = 1;
    SequenceCache* cache = &default_sequence_cache();  ///< null: rebuild per cell
};

/// Every (a, b) cell; failing cells keep their error text and the sweep goes on.
/// Ties go to the first cell in grid order.
SweepResult sweep_barrier(const Reserves& u, const std::vector<double>& a_values,
                          const std::vector<double>& b_values, const ModelParams& params,
                          const SweepOptions& opt = {});

/// Sweep CSV followed by a footer row `argmax,<a>,<b>,<v1>`.
void write_sweep_result(std::ostream& os, const SweepResult& r);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct RefineResult {
    double a = 0.0;
    double b = 0.0;
    double v1 = 0.0;
    int evaluations = 0;
    bool budget_exhausted = false;
    std::vector<double> accepted;  ///< objective after each accepted move, starting with the start value
};

/// Coordinate-wise golden-section ascent from (a0, b0). A move is accepted
/// only if it does not lower V1, so the result is never below the start.
RefineResult refine_barrier(const Reserves& u, const ModelParams& params, Range a_range, Range b_range,
                            double a0, double b0, int budget = 200);

/// Starts from the sweep argmax.
RefineResult refine_barrier(const Reserves& u, const ModelParams& params, Range a_range, Range b_range,
                            const SweepResult& start, int budget = 200);

}  // namespace twodiv
