#pragma once

// Expected discounted dividends V1 under reflection at a linear barrier, from
// the exponential series built by gamma_engine, plus residual checks of any
// candidate V against the integro-differential equation and the barrier
// boundary condition.

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "twodiv/gamma_engine.hpp"
#include "twodiv/model.hpp"

namespace twodiv {

struct BarrierValuation {
    double value = 0.0;
    int terms_used = 0;
    double tail_estimate = 0.0;  ///< last term over the sum of |terms|
    std::string sequences_ref;
    std::shared_ptr<const GammaSequences> sequences;
};

/// Thread-safe memo of GammaSequences keyed by model, barrier and truncation.
class SequenceCache {
public:
    std::shared_ptr<const GammaSequences> get(const BarrierSpec& barrier, const ModelParams& params,
                                              const SequenceOptions& opt = {});
    std::size_t size() const;
    void clear();

private:
    using Key = std::tuple<double, double, double, double, double, double, double, double, double,
                           int, int>;
    mutable std::mutex mu_;
    std::map<Key, std::shared_ptr<const GammaSequences>> map_;
};

SequenceCache& default_sequence_cache();

struct SeriesSum {
    double value = 0.0;
    int terms = 0;
    double tail = 0.0;
};

/// Raw series at any (u1, u2); no region checks. Used by residual stencils.
SeriesSum evaluate_series(const GammaSequences& seq, double u1, double u2);

/// V1 at u for the reflection barrier. Requires exponential claims, u on the
/// barrier line or below it, u1 < u2 (or u = (0, b)) and u2 <= b.
/// `cache` may be null to force a fresh build.
BarrierValuation v1_barrier(const Reserves& u, const BarrierSpec& barrier, const ModelParams& params,
                            double tol = 1e-12, SequenceCache* cache = &default_sequence_cache());

using ValueFn = std::function<double(double, double)>;

/// c . grad V - (lambda + q) V + lambda int_0^{min(u1,u2)} V(u - (v,v)) alpha e^{-alpha v} dv
/// with central differences of step h.
double pide_residual(const ValueFn& V, const Reserves& u, const ModelParams& params, double h);

/// Same, for the series of `barrier`. u must lie in the complement at distance > 2h from its edges.
double pide_residual(const Reserves& u, const BarrierSpec& barrier, const ModelParams& params,
                     double h);

/// (c1+1) dV/du1 + (c2-a) dV/du2 - delta0 with backward second-order differences.
double boundary_residual(const ValueFn& V, const Reserves& u_on_line, const BarrierSpec& barrier,
                         const ModelParams& params, double h);

double boundary_residual(const Reserves& u_on_line, const BarrierSpec& barrier,
                         const ModelParams& params, double h);

/// Default finite-difference step 1e-4 * max(1, |u|).
double default_fd_step(const Reserves& u);

struct SweepRow {
    double a = 0.0, b = 0.0, u1 = 0.0, u2 = 0.0;
    double v1 = 0.0;
    int terms = 0;
    double tail = 0.0;
    std::string error;  ///< empty when the cell evaluated
};

/// CSV with header a,b,u1,u2,v1,terms,tail; failed cells print nan for v1 and tail.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace twodiv
