#include "twodiv/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

namespace twodiv {

SweepResult sweep_barrier(const Reserves& u, const std::vector<double>& a_values,
                          const std::vector<double>& b_values, const ModelParams& params,
                          const SweepOptions& opt) {
    SweepResult res;
    res.grid.resize(a_values.size() * b_values.size());
    for (std::size_t i = 0; i < a_values.size(); ++i)
        for (std::size_t j = 0; j < b_values.size(); ++j) {
            auto& r = res.grid[i * b_values.size() + j];
            r.a = a_values[i];
            r.b = b_values[j];
            r.u1 = u.u1;
            r.u2 = u.u2;
        }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < res.grid.size();) {
            auto& r = res.grid[k];
            try {
                const auto v = v1_barrier(u, BarrierSpec::reflection(r.a, r.b, params), params, opt.tol, opt.cache);
                r.v1 = v.value;
                r.terms = v.terms_used;
                r.tail = v.tail_estimate;
            } catch (const std::exception& e) {
                r.error = e.what();
                r.v1 = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(res.grid.size())));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& r : res.grid) {
        if (!r.error.empty()) continue;
        if (!res.has_argmax || r.v1 > res.argmax_value) {
            res.has_argmax = true;
            res.argmax_a = r.a;
            res.argmax_b = r.b;
            res.argmax_value = r.v1;
        }
    }
    return res;
}

void write_sweep_result(std::ostream& os, const SweepResult& r) {
    write_sweep_csv(os, r.grid);
    char buf[128];
    if (r.has_argmax)
        std::snprintf(buf, sizeof buf, "argmax,%.6g,%.6g,%.10f\n", r.argmax_a, r.argmax_b, r.argmax_value);
    else
        std::snprintf(buf, sizeof buf, "argmax,nan,nan,nan\n");
    os << buf;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

struct Objective {
    const Reserves& u;
    const ModelParams& params;
    int budget;
    int evaluations = 0;

    bool exhausted() const { return evaluations >= budget; }

    double operator()(double a, double b) {
        ++evaluations;
        try {
            return v1_barrier(u, BarrierSpec::reflection(a, b, params), params).value;
        } catch (const std::exception&) {
            return kNegInf;
        }
    }
};

// Golden-section search of f on [lo, hi]; returns the best point evaluated.
template <class F>
std::pair<double, double> golden(F&& f, double lo, double hi, Objective& obj) {
    double best_x = lo, best_f = kNegInf;
    auto eval = [&](double x) {
        const double v = f(x);
        if (v > best_f) best_x = x, best_f = v;
        return v;
    };
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    const double stop = 1e-7 * std::max(1.0, hi - lo);
    while (hi - lo > stop && !obj.exhausted()) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2, f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1, f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = eval(x1);
        }
    }
    return {best_x, best_f};
}

}  // namespace

RefineResult refine_barrier(const Reserves& u, const ModelParams& params, Range a_range, Range b_range,
                            double a0, double b0, int budget) {
    if (!(a_range.hi > a_range.lo) || !(b_range.hi > b_range.lo))
        throw std::invalid_argument("refine ranges must have hi > lo");
    Objective obj{u, params, std::max(budget, 1)};
    RefineResult res;
    res.a = a0;
    res.b = b0;
    res.v1 = obj(a0, b0);
    res.accepted.push_back(res.v1);

    for (int round = 0; round < 50 && !obj.exhausted(); ++round) {
        const double before = res.v1;
        {
            auto [x, fx] = golden([&](double a) { return obj(a, res.b); }, a_range.lo, a_range.hi, obj);
            if (fx >= res.v1 && x != res.a) {
                res.a = x;
                res.v1 = fx;
                res.accepted.push_back(fx);
            }
        }
        if (obj.exhausted()) break;
        {
            auto [x, fx] = golden([&](double b) { return obj(res.a, b); }, b_range.lo, b_range.hi, obj);
            if (fx >= res.v1 && x != res.b) {
                res.b = x;
                res.v1 = fx;
                res.accepted.push_back(fx);
            }
        }
        if (res.v1 - before <= 1e-10 * std::max(1.0, std::abs(res.v1))) break;
    }
    res.evaluations = obj.evaluations;
    res.budget_exhausted = obj.exhausted();
    return res;
}

RefineResult refine_barrier(const Reserves& u, const ModelParams& params, Range a_range, Range b_range,
                            const SweepResult& start, int budget) {
    if (!start.has_argmax) throw DomainError("sweep has no valid cell to start from");
    return refine_barrier(u, params, a_range, b_range, start.argmax_a, start.argmax_b, budget);
}

}  // namespace twodiv
