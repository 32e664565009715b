#include "twodiv/exit_march.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace twodiv {

int exit_march_steps(const ImpulseSpec& spec, const ModelParams& params, int z_cells) {
    const double R = (spec.u2 - spec.u1) / (params.c1 - params.c2);
    const double dz_target = spec.u2 / std::max(z_cells, 8);
    return std::max(8, static_cast<int>(std::ceil(R * params.c2 / dz_target)));
}

double exit_march_integral(const ImpulseSpec& spec, const ModelParams& params, double q, int n_time) {
    const double u1 = spec.u1, u2 = spec.u2;
    const double c1 = params.c1, c2 = params.c2, lam = params.lambda, al = params.alpha();
    const double R = (u2 - u1) / (c1 - c2);
    if (!(R > 0.0)) throw DomainError("exit march needs u1 < u2");
    if (n_time < 1) throw std::invalid_argument("exit march needs n_time >= 1");

    const double dt = R / n_time;
    const double dz = c2 * dt;
    const int M = static_cast<int>(std::ceil(u2 / dz)) + 2;
    std::vector<double> z(M);
    for (int j = 0; j < M; ++j) z[j] = u2 - dz * j;

    const auto sp = scale_params_at(params, q);
    const double w_top = w_q(u2, sp);
    const double ea = std::exp(-al * dz);
    const double decay = std::exp(-(lam + q) * dt);
    auto ell = [&](double t) { return std::max(0.0, u2 - u1 - (c1 - c2) * t); };
    auto lowest = [&](double l) {
        int j = static_cast<int>(std::floor((u2 - l) / dz + 1e-9));
        while (j + 1 < M && z[j + 1] >= l - 1e-14) ++j;
        while (j > 0 && z[j] < l - 1e-14) --j;
        return j;
    };

    std::vector<double> g(M, 0.0), J(M, 0.0), gn(M), Jn(M);
    for (int j = 0; j < M; ++j) g[j] = z[j] >= 0.0 ? w_q(z[j], sp) / w_top : 0.0;

    // J(z) = int_l^z g(y) alpha e^{-alpha (z - y)} dy by trapezoid with a partial bottom cell.
    {
        const int jm = lowest(0.0);
        const double h = z[jm];
        J[jm] = 0.5 * h * al * (g[jm] + g[jm] * std::exp(-al * h));
        for (int j = jm - 1; j >= 0; --j) J[j] = ea * J[j + 1] + 0.5 * dz * al * (g[j] + ea * g[j + 1]);
    }

    for (int i = n_time - 1; i >= 0; --i) {
        const double l = ell(i * dt);
        const int jm = lowest(l);
        std::fill(gn.begin(), gn.end(), 0.0);
        std::fill(Jn.begin(), Jn.end(), 0.0);
        for (int j = jm; j >= 1; --j) {
            double Jp, w;
            if (j == jm) {
                const double h = z[j] - l;
                Jp = 0.0;
                w = 0.5 * h * al * (1.0 + std::exp(-al * h));
            } else {
                Jp = ea * Jn[j + 1] + 0.5 * dz * al * ea * gn[j + 1];
                w = 0.5 * dz * al;
            }
            const double carried = decay * g[j - 1] + 0.5 * dt * lam * decay * J[j - 1];
            gn[j] = (carried + 0.5 * dt * lam * Jp) / (1.0 - 0.5 * dt * lam * w);
            Jn[j] = Jp + w * gn[j];
        }
        gn[0] = 1.0;
        if (jm == 0) {
            const double h = u2 - l;
            Jn[0] = 0.5 * h * al * (1.0 + std::exp(-al * h));
        } else {
            Jn[0] = ea * Jn[1] + 0.5 * dz * al * (1.0 + ea * gn[1]);
        }
        std::swap(g, gn);
        std::swap(J, Jn);
    }
    return J[0];
}

}  // namespace twodiv
