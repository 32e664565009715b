#pragma once

// Globally adaptive Gauss-Kronrod (G7/K15) integration.
//
// The panel rule comes from Boost.Math; the driver keeps a heap of panels
// ordered by error estimate and bisects the worst one until the summed error
// is below max(abs_tol, rel_tol * |I|). Callers pass known kinks as
// breakpoints so no panel straddles one.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace twodiv::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_panels = 2000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

namespace detail {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel panel(F& f, double a, double b) {
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

}  // namespace detail

/// Integral of f over [a, b] (a <= b), split at every breakpoint inside (a, b).
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {},
                 std::span<const double> breakpoints = {}) {
    Result res;
    if (!(b > a)) return res;

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Panel> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto p = detail::panel(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (total_err > target() && panels < opt.max_panels) {
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
        heap.pop();
        auto left = detail::panel(f, worst.a, mid);
        auto right = detail::panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum from the panels to shed accumulated update round-off.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.error = total_err;
    res.panels = panels;
    res.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    return res;
}

/// Integral over [a, inf) through the map x = a + t / (1 - t), t in [0, 1).
template <class F>
Result integrate_to_infinity(F&& f, double a, const Options& opt = {}) {
    auto g = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double s = 1.0 - t;
        const double v = f(a + t / s);
        return std::isfinite(v) ? v / (s * s) : 0.0;
    };
    return integrate(g, 0.0, 1.0, opt);
}

}  // namespace twodiv::quad
