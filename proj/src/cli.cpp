#include "twodiv/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "twodiv/barrier_valuation.hpp"
#include "twodiv/config.hpp"
#include "twodiv/impulse_valuation.hpp"
#include "twodiv/optimizer.hpp"
#include "twodiv/reference_tables.hpp"
#include "twodiv/simulator.hpp"
#include "twodiv/validation.hpp"

namespace twodiv::cli {

namespace {

struct ModelOpts {
    std::string config;
    std::optional<double> c1, c2, lambda, alpha, q;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "key = value model file (c1, c2, lambda, alpha, q)");
        app->add_option("--c1", c1, "premium rate of company 1");
        app->add_option("--c2", c2, "premium rate of company 2");
        app->add_option("--lambda", lambda, "claim intensity");
        app->add_option("--alpha", alpha, "exponential claim rate");
        app->add_option("--q", q, "discount rate");
    }

    ModelParams resolve() const {
        ModelParams p = config.empty() ? reference_params() : load_model_config(config);
        if (c1) p.c1 = *c1;
        if (c2) p.c2 = *c2;
        if (lambda) p.lambda = *lambda;
        if (alpha) p.claims = ClaimDistribution::exponential(*alpha);
        if (q) p.q = *q;
        return validate_model(p);
    }
};

std::string num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void header(std::ostream& os) { os << "quantity,value,method,std_error\n"; }

void row(std::ostream& os, const std::string& name, double v, const char* method) {
    os << name << ',' << num(v) << ',' << method << ",\n";
}

void row(std::ostream& os, const std::string& name, double v, const char* method, double se) {
    os << name << ',' << num(v) << ',' << method << ',' << num(se) << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write '" + path + "'");
    return f;
}

void print_estimate(std::ostream& os, const DividendEstimate& e, std::uint64_t seed) {
    os << "# seed=" << seed << " paths=" << e.n_paths << '\n';
    header(os);
    for (const auto& m : e.moments) row(os, "moment_" + std::to_string(m.order), m.mean, "mc", m.std_error);
    row(os, "ruin_time_mean", e.ruin_time_mean, "mc");
    row(os, "censored", static_cast<double>(e.n_censored), "mc");
    row(os, "max_time", e.max_time, "mc");
    row(os, "truncation_bias_bound", e.truncation_bias_bound, "mc");
}

struct McOpts {
    std::uint64_t paths = 100000;
    std::uint64_t seed = 1;
    std::vector<int> moments{1};
    unsigned threads = 0;
    double max_time = 0.0;
    double bias_tol = 1e-4;
    std::string trace;
    std::uint64_t trace_path = 0;

    void attach(CLI::App* app) {
        app->add_option("--paths", paths, "number of paths")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "master seed");
        app->add_option("--moments", moments, "moment orders, e.g. 1,2")->delimiter(',')->check(CLI::PositiveNumber);
        app->add_option("--threads", threads, "worker threads (0 = all cores)");
        app->add_option("--max-time", max_time, "censoring horizon (default from --bias-tol)");
        app->add_option("--bias-tol", bias_tol, "censoring bias target")->check(CLI::PositiveNumber);
        app->add_option("--trace", trace, "write t,y1,y2,event of one path to this CSV");
        app->add_option("--trace-path", trace_path, "path index traced by --trace");
    }

    SimConfig config() const {
        SimConfig c;
        c.n_paths = paths;
        c.master_seed = seed;
        c.moment_orders = moments;
        c.threads = threads;
        c.max_time = max_time;
        c.bias_tol = bias_tol;
        return c;
    }
};

std::vector<double> table_grid_a() { return {kTableA.begin(), kTableA.end()}; }
std::vector<double> table_grid_b() { return {kTableB.begin(), kTableB.end()}; }

int cmd_table(int id, const ModelParams& p, const std::string& out_path, std::ostream& out) {
    const auto t = reference_table(id);
    if (t.cells.empty()) throw std::invalid_argument("table id must be 1, 2 or 3");
    std::ofstream file;
    std::ostream& os = out_path.empty() ? out : (file = open_out(out_path), file);

    os << "a,b,u1,u2,v1,published,diff\n";
    double max_diff = 0.0;
    bool have_best = false;
    double best_v = 0.0, best_a = 0.0, best_b = 0.0;
    char buf[160];
    for (const auto& c : t.cells) {
        double v = std::nan("");
        try {
            v = v1_barrier({c.u1, c.u2}, BarrierSpec::reflection(c.a, c.b, p), p).value;
        } catch (const std::exception&) {
        }
        const double d = v - c.published;
        if (std::isfinite(d)) max_diff = std::max(max_diff, std::abs(d));
        else max_diff = std::nan("");
        if (std::isfinite(v) && (!have_best || v > best_v)) have_best = true, best_v = v, best_a = c.a, best_b = c.b;
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.4f,%.2f,%+.4f\n", c.a, c.b, c.u1, c.u2, v, c.published, d);
        os << buf;
    }
    out << "# source: " << t.source << "; method=series\n";
    out << "max_abs_diff," << num(max_diff) << '\n';
    if (id != 3) {
        out << "argmax," << num(best_a) << ',' << num(best_b) << ',' << num(best_v) << '\n';
        out << "published_argmax," << num(t.argmax_a) << ',' << num(t.argmax_b) << '\n';
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dividend valuation for a two-company proportional-reinsurance risk process", "twodiv"};
    app.require_subcommand(1);

    // value-barrier
    auto* vb = app.add_subcommand("value-barrier", "V1 under reflection at y = b - a x (series)");
    ModelOpts vb_m;
    vb_m.attach(vb);
    double vb_u1 = 0, vb_u2 = 0, vb_a = 0, vb_b = 0, vb_tol = 1e-12;
    std::string vb_dump;
    vb->add_option("--u1", vb_u1)->required();
    vb->add_option("--u2", vb_u2)->required();
    vb->add_option("--a", vb_a, "barrier slope")->required();
    vb->add_option("--b", vb_b, "barrier intercept")->required();
    vb->add_option("--tol", vb_tol, "series truncation tolerance")->check(CLI::PositiveNumber);
    vb->add_option("--dump-gamma", vb_dump, "write k,g1,g2,g3,D,g1',g2',g3',D' to this CSV");

    // value-impulse
    auto* vi = app.add_subcommand("value-impulse", "V1 under the impulse policy");
    ModelOpts vi_m;
    vi_m.attach(vi);
    double vi_u1 = 0, vi_u2 = 0, vi_k = 0, vi_dq = 0;
    std::string vi_route = "march";
    vi->add_option("--u1", vi_u1)->required();
    vi->add_option("--u2", vi_u2)->required();
    vi->add_option("--cost", vi_k, "fixed cost K per impulse")->required();
    vi->add_option("--route", vi_route, "u1 <= u2 route: march (default) or ratio")
        ->check(CLI::IsMember({"march", "ratio"}));
    vi->add_option("--dq-step", vi_dq, "finite-difference step in q (default 1e-4 q)");

    // simulate barrier|impulse
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of dividend moments");
    sim->require_subcommand(1);
    auto* sb = sim->add_subcommand("barrier", "refracted process");
    ModelOpts sb_m;
    sb_m.attach(sb);
    McOpts sb_mc;
    sb_mc.attach(sb);
    double sb_u1 = 0, sb_u2 = 0, sb_a = 0, sb_b = 0;
    std::optional<double> sb_d1, sb_d2;
    sb->add_option("--u1", sb_u1)->required();
    sb->add_option("--u2", sb_u2)->required();
    sb->add_option("--a", sb_a)->required();
    sb->add_option("--b", sb_b)->required();
    sb->add_option("--delta1", sb_d1, "refraction rate (default c1 + 1)");
    sb->add_option("--delta2", sb_d2, "refraction rate (default c2 - a)");

    auto* si = sim->add_subcommand("impulse", "impulse policy");
    ModelOpts si_m;
    si_m.attach(si);
    McOpts si_mc;
    si_mc.attach(si);
    double si_u1 = 0, si_u2 = 0, si_k = 0;
    std::uint64_t si_cycles = SimConfig{}.max_cycles;
    si->add_option("--u1", si_u1)->required();
    si->add_option("--u2", si_u2)->required();
    si->add_option("--cost", si_k)->required();
    si->add_option("--max-cycles", si_cycles, "impulses per path before censoring (1 gives A)")
        ->check(CLI::PositiveNumber);

    // table
    auto* tb = app.add_subcommand("table", "recompute a published table and diff it");
    ModelOpts tb_m;
    tb_m.attach(tb);
    int tb_id = 0;
    std::string tb_out;
    tb->add_option("id", tb_id, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
    tb->add_option("--out", tb_out, "CSV destination (default stdout)");

    // optimize
    auto* op = app.add_subcommand("optimize", "sweep (a, b) and optionally refine");
    ModelOpts op_m;
    op_m.attach(op);
    double op_u1 = 0, op_u2 = 0;
    std::vector<double> op_a = table_grid_a(), op_b = table_grid_b();
    std::vector<double> op_ar, op_br;
    bool op_refine = false;
    int op_budget = 200;
    unsigned op_threads = 1;
    std::string op_out;
    op->add_option("--u1", op_u1)->required();
    op->add_option("--u2", op_u2)->required();
    op->add_option("--a-grid", op_a, "comma-separated slopes")->delimiter(',');
    op->add_option("--b-grid", op_b, "comma-separated intercepts")->delimiter(',');
    op->add_flag("--refine", op_refine, "golden-section refinement from the grid argmax");
    op->add_option("--a-range", op_ar, "lo,hi for refinement")->delimiter(',')->expected(2);
    op->add_option("--b-range", op_br, "lo,hi for refinement")->delimiter(',')->expected(2);
    op->add_option("--budget", op_budget, "objective evaluations for refinement")->check(CLI::PositiveNumber);
    op->add_option("--threads", op_threads, "threads for the sweep");
    op->add_option("--out", op_out, "CSV destination (default stdout)");

    // validate
    auto* va = app.add_subcommand("validate", "run the residual and invariant checks");
    ModelOpts va_m;
    va_m.attach(va);
    std::string va_csv;
    double va_a = 0.1;
    va->add_option("--gamma-csv", va_csv, "also check a dump written by value-barrier --dump-gamma");
    va->add_option("--a", va_a, "slope the dump was built with");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (vb->parsed()) {
            const auto p = vb_m.resolve();
            const auto br = BarrierSpec::reflection(vb_a, vb_b, p);
            const auto v = v1_barrier({vb_u1, vb_u2}, br, p, vb_tol);
            header(out);
            row(out, "v1", v.value, "series");
            row(out, "terms", v.terms_used, "series");
            row(out, "tail", v.tail_estimate, "series");
            out << "# " << v.sequences_ref << " region=" << to_string(classify_point({vb_u1, vb_u2}, br)) << '\n';
            if (!vb_dump.empty()) {
                auto f = open_out(vb_dump);
                write_sequences_csv(f, *v.sequences);
            }
            return kOk;
        }
        if (vi->parsed()) {
            const auto p = vi_m.resolve();
            LowCaseOptions lo;
            lo.route = vi_route == "ratio" ? LowRoute::SurvivalRatio : LowRoute::ExitMarch;
            lo.dq_step = vi_dq;
            const ImpulseSpec spec{vi_u1, vi_u2, vi_k};
            const auto v = impulse_v1(spec, p, lo);
            const char* m = to_string(v.method);
            header(out);
            row(out, "v1", v.value, m);
            row(out, "p", v.p, m);
            row(out, "A", v.A, m);
            row(out, "tau_moment", v.tau_moment, m);
            if (v.method != ImpulseMethod::ClosedFormHigh)
                out << "# p integral over x in [0, u1] (claims above u1 ruin company 1)\n";
            if (!v.warning.empty()) {
                out << "# warning: " << v.warning << '\n';
                err << "warning: " << v.warning << '\n';
            }
            return kOk;
        }
        if (sb->parsed()) {
            const auto p = sb_m.resolve();
            auto br = BarrierSpec::reflection(sb_a, sb_b, p);
            if (sb_d1) br.delta1 = *sb_d1;
            if (sb_d2) br.delta2 = *sb_d2;
            const auto cfg = sb_mc.config();
            const auto e = estimate_barrier_moments({sb_u1, sb_u2}, br, p, cfg);
            print_estimate(out, e, cfg.master_seed);
            if (!sb_mc.trace.empty()) {
                std::vector<TraceEvent> tr;
                PhiloxStream rng(cfg.master_seed, sb_mc.trace_path);
                simulate_refracted_path({sb_u1, sb_u2}, br, p, rng, e.max_time, &tr);
                auto f = open_out(sb_mc.trace);
                write_trace_csv(f, tr);
            }
            return kOk;
        }
        if (si->parsed()) {
            const auto p = si_m.resolve();
            auto cfg = si_mc.config();
            cfg.max_cycles = si_cycles;
            const ImpulseSpec spec{si_u1, si_u2, si_k};
            const auto e = estimate_impulse_moments(spec, p, cfg);
            print_estimate(out, e, cfg.master_seed);
            if (!si_mc.trace.empty()) {
                std::vector<TraceEvent> tr;
                PhiloxStream rng(cfg.master_seed, si_mc.trace_path);
                simulate_impulse_path(spec, p, rng, cfg.max_cycles, e.max_time, &tr);
                auto f = open_out(si_mc.trace);
                write_trace_csv(f, tr);
            }
            return kOk;
        }
        if (tb->parsed()) return cmd_table(tb_id, tb_m.resolve(), tb_out, out);
        if (op->parsed()) {
            const auto p = op_m.resolve();
            SweepOptions so;
            so.threads = op_threads;
            const Reserves u{op_u1, op_u2};
            const auto r = sweep_barrier(u, op_a, op_b, p, so);
            {
                std::ofstream file;
                std::ostream& os = op_out.empty() ? out : (file = open_out(op_out), file);
                write_sweep_result(os, r);
            }
            out << "# method=series\n";
            for (const auto& row_ : r.grid)
                if (!row_.error.empty())
                    out << "# cell a=" << num(row_.a) << " b=" << num(row_.b) << ": " << row_.error << '\n';
            if (op_refine) {
                const auto [amin, amax] = std::minmax_element(op_a.begin(), op_a.end());
                const auto [bmin, bmax] = std::minmax_element(op_b.begin(), op_b.end());
                const Range ar = op_ar.size() == 2 ? Range{op_ar[0], op_ar[1]} : Range{*amin, *amax};
                const Range brg = op_br.size() == 2 ? Range{op_br[0], op_br[1]} : Range{*bmin, *bmax};
                const auto ref = refine_barrier(u, p, ar, brg, r, op_budget);
                out << "refined," << num(ref.a) << ',' << num(ref.b) << ',' << num(ref.v1) << ",evaluations="
                    << ref.evaluations << (ref.budget_exhausted ? ",budget-exhausted" : "") << '\n';
            }
            return r.has_argmax ? kOk : kNoConvergence;
        }
        if (va->parsed()) {
            const auto p = va_m.resolve();
            auto checks = run_validation(p);
            if (!va_csv.empty()) {
                std::ifstream f(va_csv);
                if (!f) throw std::invalid_argument("cannot open '" + va_csv + "'");
                std::vector<GammaStep> s, ps;
                read_sequences_csv(f, s, ps);
                if (s.empty()) throw std::invalid_argument("no rows in '" + va_csv + "'");
                const double ap = (va_a - p.c2) / (p.c1 + 1.0);
                auto c1 = check_gamma_family(s, va_a, va_a, p, "dump");
                auto c2 = check_gamma_family(ps, ap, va_a, p, "dump primed");
                checks.insert(checks.end(), c1.begin(), c1.end());
                checks.insert(checks.end(), c2.begin(), c2.end());
            }
            write_checks(out, checks);
            const bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
            out << (ok ? "# all checks passed\n" : "# some checks FAILED\n");
            return ok ? kOk : kValidationFailed;
        }
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const ModelError& e) {
        err << "error: invalid parameters: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNoConvergence;
    }
    return kBadInput;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace twodiv::cli
