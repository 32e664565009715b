#include "twodiv/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace twodiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void note(std::vector<TraceEvent>* trace, double t, double y1, double y2, const char* ev) {
    if (trace) trace->push_back({t, y1, y2, ev});
}

struct BlockSums {
    std::vector<double> power;  // power[k] = sum D^k, k = 1..2 max_n
    double sigma_sum = 0.0;
    std::uint64_t ruined = 0;
    std::uint64_t censored = 0;
};

template <class PathFn>
DividendEstimate run_paths(const SimConfig& cfg, double bias_bound, double max_time, PathFn&& path) {
    if (cfg.n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
    if (cfg.moment_orders.empty()) throw std::invalid_argument("at least one moment order is needed");
    int max_n = 0;
    for (int n : cfg.moment_orders) {
        if (n < 1) throw std::invalid_argument("moment orders must be >= 1");
        max_n = std::max(max_n, n);
    }
    const int kmax = 2 * max_n;
    const std::uint64_t bs = std::max<std::uint64_t>(1, cfg.block_size);
    const std::uint64_t n_blocks = (cfg.n_paths + bs - 1) / bs;
    std::vector<BlockSums> blocks(n_blocks);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            BlockSums s;
            s.power.assign(kmax + 1, 0.0);
            const std::uint64_t end = std::min(cfg.n_paths, (b + 1) * bs);
            for (std::uint64_t i = b * bs; i < end; ++i) {
                PhiloxStream rng(cfg.master_seed, i);
                const PathResult r = path(rng);
                double pw = 1.0;
                for (int k = 1; k <= kmax; ++k) {
                    pw *= r.D;
                    s.power[k] += pw;
                }
                if (r.censored) {
                    ++s.censored;
                } else {
                    ++s.ruined;
                    s.sigma_sum += r.sigma;
                }
            }
            blocks[b] = std::move(s);
        }
    };
    unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::uint64_t>(n_threads, n_blocks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<double> power(kmax + 1, 0.0);
    double sigma_sum = 0.0;
    std::uint64_t ruined = 0, censored = 0;
    for (const auto& s : blocks) {
        for (int k = 1; k <= kmax; ++k) power[k] += s.power[k];
        sigma_sum += s.sigma_sum;
        ruined += s.ruined;
        censored += s.censored;
    }

    const double N = static_cast<double>(cfg.n_paths);
    DividendEstimate est;
    est.n_paths = cfg.n_paths;
    est.n_censored = censored;
    est.max_time = max_time;
    est.truncation_bias_bound = bias_bound;
    est.ruin_time_mean = ruined ? sigma_sum / static_cast<double>(ruined) : kInf;
    for (int n : cfg.moment_orders) {
        MomentEstimate m;
        m.order = n;
        m.mean = power[n] / N;
        if (cfg.n_paths > 1) {
            const double var = (power[2 * n] - N * m.mean * m.mean) / (N - 1.0);
            m.std_error = std::sqrt(std::max(var, 0.0) / N);
        }
        est.moments.push_back(m);
    }
    return est;
}

double resolve_max_time(const SimConfig& cfg, double rate_bound, double q) {
    return cfg.max_time > 0.0 ? cfg.max_time : default_max_time(rate_bound, q, cfg.bias_tol);
}

}  // namespace

const MomentEstimate& DividendEstimate::moment(int n) const {
    for (const auto& m : moments)
        if (m.order == n) return m;
    throw std::out_of_range("moment order " + std::to_string(n) + " was not estimated");
}

double discounted_accrual(double rate, double t1, double t2, double q) {
    if (rate == 0.0 || !(t2 > t1)) return 0.0;
    return rate * std::exp(-q * t1) * (-std::expm1(-q * (t2 - t1))) / q;
}

double default_max_time(double rate_bound, double q, double bias_tol) {
    const double T = std::log(rate_bound / (q * bias_tol)) / q;
    return std::max(T, 1.0 / q);
}

PathResult simulate_refracted_path(const Reserves& u, const BarrierSpec& br, const ModelParams& p,
                                   PhiloxStream& rng, double max_time, std::vector<TraceEvent>* trace) {
    const double a = br.a, b = br.b;
    const double c1 = p.c1, c2 = p.c2, d1 = br.delta1, d2 = br.delta2, q = p.q;
    const double n_out = a * c1 + c2;                // d gap / dt outside
    const double n_in = a * (c1 - d1) + (c2 - d2);   // d gap / dt under full refraction
    const double n_delta = a * d1 + d2;
    const double eps_gap = 1e-12 * std::max(1.0, b);
    const double eps_slope = 1e-12 * n_delta;

    PathResult res;
    double y1 = u.u1, y2 = u.u2, t = 0.0;
    note(trace, t, y1, y2, "start");
    if (y1 < 0.0 || y2 < 0.0) {
        note(trace, t, y1, y2, "ruin");
        return res;
    }

    double next_claim = rng.exponential(p.lambda);
    for (;;) {
        const double horizon = std::min(next_claim, max_time);
        while (t < horizon) {
            const double gap = y2 - (b - a * y1);
            double v1, v2, rate, t_event;
            bool to_line = false;
            if (gap < -eps_gap) {
                v1 = c1, v2 = c2, rate = 0.0;
                t_event = -gap / n_out;
                to_line = true;
            } else if (n_in >= -eps_slope || gap > eps_gap) {
                // Full refraction: moving deeper, parallel, or back toward the line.
                v1 = c1 - d1, v2 = c2 - d2, rate = br.delta0();
                t_event = n_in < -eps_slope ? gap / (-n_in) : kInf;
                to_line = n_in < -eps_slope;
            } else {
                // On the line with the refracted drift pointing out of the region: slide.
                const double theta = n_out / n_delta;
                v1 = c1 - theta * d1, v2 = c2 - theta * d2, rate = theta * br.delta0();
                t_event = kInf;
            }
            double t_axis = kInf;
            if (v1 < 0.0) t_axis = std::min(t_axis, y1 / -v1);
            if (v2 < 0.0) t_axis = std::min(t_axis, y2 / -v2);

            const double dt = std::min({horizon - t, t_event, t_axis});
            res.D += discounted_accrual(rate, t, t + dt, q);
            y1 += v1 * dt;
            y2 += v2 * dt;
            t += dt;
            if (dt == t_axis) {
                if (v1 < 0.0 && y1 <= 1e-12) y1 = 0.0;
                if (v2 < 0.0 && y2 <= 1e-12) y2 = 0.0;
                res.sigma = t;
                note(trace, t, y1, y2, "ruin");
                return res;
            }
            if (dt == t_event && to_line) {
                y2 = b - a * y1;
                note(trace, t, y1, y2, "hit-line");
            } else if (rate > 0.0 && std::abs(gap) <= eps_gap && t_event == kInf && n_in < eps_slope) {
                y2 = b - a * y1;  // keep sliding paths exactly on the line
            }
        }
        if (t >= max_time) {
            res.sigma = max_time;
            res.censored = true;
            note(trace, t, y1, y2, "censor");
            return res;
        }
        const double x = p.claims.sample(rng.uniform());
        y1 -= x;
        y2 -= x;
        note(trace, t, y1, y2, "claim");
        if (y1 < 0.0 || y2 < 0.0) {
            res.sigma = t;
            note(trace, t, y1, y2, "ruin");
            return res;
        }
        next_claim = t + rng.exponential(p.lambda);
    }
}

DividendEstimate estimate_barrier_moments(const Reserves& u, const BarrierSpec& barrier, const ModelParams& params,
                                          const SimConfig& cfg) {
    validate_model(params);
    validate_barrier(barrier, params);
    if (u.u1 < 0.0 || u.u2 < 0.0) throw DomainError("reserves must be nonnegative");
    const double T = resolve_max_time(cfg, barrier.delta0(), params.q);
    const double bias = std::exp(-params.q * T) * barrier.delta0() / params.q;
    return run_paths(cfg, bias, T, [&](PhiloxStream& rng) {
        return simulate_refracted_path(u, barrier, params, rng, T);
    });
}

PathResult simulate_impulse_path(const ImpulseSpec& s, const ModelParams& p, PhiloxStream& rng,
                                 std::uint64_t max_cycles, double max_time, std::vector<TraceEvent>* trace) {
    const double c1 = p.c1, c2 = p.c2, q = p.q;
    const double reach = std::min(s.u1, s.u2);
    PathResult res;
    double t = 0.0;
    note(trace, t, s.u1, s.u2, "start");
    for (std::uint64_t cycle = 0;; ++cycle) {
        if (cycle >= max_cycles) {
            res.sigma = t;
            res.censored = true;
            note(trace, t, s.u1, s.u2, "censor");
            return res;
        }
        // Sitting at (u1, u2): company 1's premium is paid out as it comes in.
        const double wait = rng.exponential(p.lambda);
        if (t + wait >= max_time) {
            res.D += discounted_accrual(c1, t, max_time, q);
            res.sigma = max_time;
            res.censored = true;
            note(trace, max_time, s.u1, s.u2, "censor");
            return res;
        }
        res.D += discounted_accrual(c1, t, t + wait, q);
        t += wait;
        const double x = p.claims.sample(rng.uniform());
        note(trace, t, s.u1 - x, s.u2 - x, "claim");
        if (x > reach) {
            res.sigma = t;
            note(trace, t, s.u1 - x, s.u2 - x, "ruin");
            return res;
        }
        // Excursion of company 2 below u2; company 1 stays ruin-free while z >= lower_barrier.
        double z = s.u2 - x, tau = 0.0;
        for (;;) {
            const double e = rng.exponential(p.lambda);
            if (z + c2 * e >= s.u2) {
                tau += (s.u2 - z) / c2;
                break;
            }
            tau += e;
            if (t + tau >= max_time) {
                res.sigma = max_time;
                res.censored = true;
                note(trace, max_time, s.u1 - s.u2 + z + (c1 - c2) * tau, z, "censor");
                return res;
            }
            z += c2 * e - p.claims.sample(rng.uniform());
            const double y1 = z + s.u1 - s.u2 + (c1 - c2) * tau;
            note(trace, t + tau, y1, z, "claim");
            if (z < lower_barrier(tau, s, p) || z < 0.0) {
                res.sigma = t + tau;
                note(trace, t + tau, y1, z, "ruin");
                return res;
            }
        }
        t += tau;
        if (t >= max_time) {
            res.sigma = max_time;
            res.censored = true;
            note(trace, max_time, s.u1, s.u2, "censor");
            return res;
        }
        res.D += ((c1 - c2) * tau - s.K) * std::exp(-q * t);
        note(trace, t, s.u1, s.u2, "impulse");
    }
}

DividendEstimate estimate_impulse_moments(const ImpulseSpec& spec, const ModelParams& params,
                                          const SimConfig& cfg) {
    validate_model(params);
    validate_impulse(spec);
    const double T = resolve_max_time(cfg, params.c1, params.q);
    const double bias = std::exp(-params.q * T) * params.c1 / params.q;
    const std::uint64_t cycles = std::max<std::uint64_t>(1, cfg.max_cycles);
    return run_paths(cfg, bias, T, [&](PhiloxStream& rng) {
        return simulate_impulse_path(spec, params, rng, cycles, T);
    });
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& trace) {
    os << "t,y1,y2,event\n";
    char buf[160];
    for (const auto& e : trace) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,", e.t, e.y1, e.y2);
        os << buf << e.event << '\n';
    }
}

}  // namespace twodiv
