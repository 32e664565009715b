#include "twodiv/barrier_valuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "twodiv/quadrature.hpp"

namespace twodiv {

std::shared_ptr<const GammaSequences> SequenceCache::get(const BarrierSpec& barrier,
                                                         const ModelParams& params,
                                                         const SequenceOptions& opt) {
    const Key key{barrier.a, barrier.b,      barrier.delta1, barrier.delta2,
                  params.c1, params.c2,      params.lambda,  params.alpha(),
                  params.q,  opt.max_terms, opt.guard_terms};
    {
        std::lock_guard lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end() && it->second->tail_ratio < opt.tail_tol) return it->second;
    }
    auto seq = std::make_shared<const GammaSequences>(build_sequences(barrier, params, opt));
    std::lock_guard lock(mu_);
    auto [it, inserted] = map_.try_emplace(key, seq);
    if (!inserted) it->second = seq;
    return it->second;
}

std::size_t SequenceCache::size() const {
    std::lock_guard lock(mu_);
    return map_.size();
}

void SequenceCache::clear() {
    std::lock_guard lock(mu_);
    map_.clear();
}

SequenceCache& default_sequence_cache() {
    static SequenceCache cache;
    return cache;
}

SeriesSum evaluate_series(const GammaSequences& seq, double u1, double u2) {
    const double al = seq.alpha;
    const double dy = u2 - seq.b;
    auto term = [&](const GammaStep& s) {
        const double rho = s.rho(al);
        return s.D_scaled * (std::exp(s.g1 * u1 + s.g2 * dy) - rho * std::exp(s.g3 * u1 + s.g2 * dy));
    };
    SeriesSum out;
    double abs_sum = 0.0, last = 0.0;
    const std::size_t n = std::min(seq.steps.size(), seq.primed_steps.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double t = term(seq.steps[k]) + seq.E * term(seq.primed_steps[k]);
        out.value += t;
        abs_sum += std::abs(t);
        last = t;
    }
    out.terms = static_cast<int>(n);
    out.tail = abs_sum > 0.0 ? std::abs(last) / abs_sum : 0.0;
    return out;
}

namespace {

std::string sequences_ref(const GammaSequences& seq) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "gamma(a=%.6g,b=%.6g,terms=%zu)", seq.a, seq.b, seq.steps.size());
    return buf;
}

}  // namespace

BarrierValuation v1_barrier(const Reserves& u, const BarrierSpec& barrier, const ModelParams& params,
                            double tol, SequenceCache* cache) {
    params.alpha();  // non-exponential claims are rejected here
    validate_model(params);
    validate_barrier(barrier, params);

    const Region r = classify_point(u, barrier);
    if (r == Region::OutsideQuadrant) throw DomainError("reserves must be nonnegative");
    if (r == Region::Interior)
        throw DomainError("point lies inside the dividend region; the series is defined on its complement and the barrier line only (use the simulator)");
    const bool corner = u.u1 == 0.0 && r == Region::OnLine;
    if (u.u2 > barrier.b) throw DomainError("series needs u2 <= b");
    if (!corner && !(u.u1 < u.u2))
        throw DomainError("series needs u1 < u2; use the simulator for u1 >= u2");

    SequenceOptions opt;
    opt.tail_tol = std::max(tol, 1e-15);
    std::shared_ptr<const GammaSequences> seq;
    SeriesSum s;
    // Evaluation points far from (0, b) can need a few more terms than E did.
    for (;; opt.guard_terms *= 2) {
        seq = cache ? cache->get(barrier, params, opt)
                    : std::make_shared<const GammaSequences>(build_sequences(barrier, params, opt));
        s = evaluate_series(*seq, u.u1, u.u2);
        if (s.tail < opt.tail_tol) break;
        if (static_cast<int>(seq->steps.size()) >= opt.max_terms || opt.guard_terms >= 128) {
            std::ostringstream os;
            os << "series tail " << s.tail << " above tolerance " << tol;
            throw ConvergenceError(os.str());
        }
    }
    BarrierValuation out;
    out.value = s.value;
    out.terms_used = s.terms;
    out.tail_estimate = s.tail;
    out.sequences_ref = sequences_ref(*seq);
    out.sequences = std::move(seq);
    return out;
}

double pide_residual(const ValueFn& V, const Reserves& u, const ModelParams& p, double h) {
    const double al = p.alpha();
    const double v0 = V(u.u1, u.u2);
    const double d1 = (V(u.u1 + h, u.u2) - V(u.u1 - h, u.u2)) / (2.0 * h);
    const double d2 = (V(u.u1, u.u2 + h) - V(u.u1, u.u2 - h)) / (2.0 * h);
    const double upper = std::min(u.u1, u.u2);
    quad::Options qo;
    qo.abs_tol = 1e-10;
    const auto integral = quad::integrate(
        [&](double v) { return V(u.u1 - v, u.u2 - v) * al * std::exp(-al * v); }, 0.0, upper, qo);
    return p.c1 * d1 + p.c2 * d2 - (p.lambda + p.q) * v0 + p.lambda * integral.value;
}

double pide_residual(const Reserves& u, const BarrierSpec& barrier, const ModelParams& params,
                     double h) {
    const auto seq = default_sequence_cache().get(barrier, params);
    const double gap = barrier.b - barrier.a * u.u1 - u.u2;
    // The stencil must stay below the line and in the quadrant.
    if (u.u1 - 2.0 * h <= 0.0 || u.u2 - 2.0 * h <= 0.0 || gap <= 2.0 * h * (1.0 + barrier.a))
        throw DomainError("PIDE stencil leaves the complement of the dividend region");
    return pide_residual([&](double x, double y) { return evaluate_series(*seq, x, y).value; }, u,
                         params, h);
}

double boundary_residual(const ValueFn& V, const Reserves& u, const BarrierSpec& barrier,
                         const ModelParams& /*params*/, double h) {
    if (classify_point(u, barrier) != Region::OnLine)
        throw DomainError("boundary residual needs a point on the barrier line");
    if (!(u.u1 >= 2.0 * h) || !(u.u2 >= 2.0 * h))
        throw DomainError("backward stencil leaves the quadrant");
    const double f0 = V(u.u1, u.u2);
    const double d1 = (3.0 * f0 - 4.0 * V(u.u1 - h, u.u2) + V(u.u1 - 2.0 * h, u.u2)) / (2.0 * h);
    const double d2 = (3.0 * f0 - 4.0 * V(u.u1, u.u2 - h) + V(u.u1, u.u2 - 2.0 * h)) / (2.0 * h);
    return barrier.delta1 * d1 + barrier.delta2 * d2 - barrier.delta0();
}

double boundary_residual(const Reserves& u, const BarrierSpec& barrier, const ModelParams& params,
                         double h) {
    const auto seq = default_sequence_cache().get(barrier, params);
    return boundary_residual([&](double x, double y) { return evaluate_series(*seq, x, y).value; },
                             u, barrier, params, h);
}

double default_fd_step(const Reserves& u) {
    return 1e-4 * std::max(1.0, std::hypot(u.u1, u.u2));
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "a,b,u1,u2,v1,terms,tail\n";
    char buf[256];
    for (const auto& r : rows) {
        if (r.error.empty())
            std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.10f,%d,%.3e\n", r.a, r.b, r.u1, r.u2,
                          r.v1, r.terms, r.tail);
        else
            std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,nan,0,nan\n", r.a, r.b, r.u1, r.u2);
        os << buf;
    }
}

}  // namespace twodiv
