#include "isacsim/beamforming.hpp"

#include <cassert>
#include <cmath>

namespace isacsim {

BeamPlan build_beams(const ScenarioConfig& cfg, const std::vector<Position3>& grid,
                     const Placement& placement) {
    const int I = cfg.num_satellites();
    const int L = cfg.num_gateways();
    const int M = static_cast<int>(grid.size());
    const int T = cfg.num_slots_or_default(M);

    BeamPlan plan;
    plan.num_slots = T;
    plan.psi.resize(T);
    for (int t = 0; t < T; ++t) plan.psi[t] = t % M;

    const double sat_norm = 1.0 / std::sqrt(static_cast<double>(cfg.sat_array.size()));
    const double gat_norm = 1.0 / std::sqrt(static_cast<double>(cfg.gat_array.size()));

    plan.sat_grid_beams.resize(I);
    plan.comm_beams.resize(I);
    for (int i = 0; i < I; ++i) {
        plan.sat_grid_beams[i].resize(cfg.sat_array.size(), M);
        for (int m = 0; m < M; ++m) {
            plan.sat_grid_beams[i].col(m) =
                sat_norm * steering_vector(cfg.sat_array, downlook_direction(cfg.satellites[i], grid[m]));
        }
        const auto& ues = placement.ues[i];
        plan.comm_beams[i].resize(cfg.sat_array.size(), ues.size());
        for (std::size_t u = 0; u < ues.size(); ++u) {
            plan.comm_beams[i].col(u) =
                sat_norm * steering_vector(cfg.sat_array, downlook_direction(cfg.satellites[i], ues[u]));
        }
    }

    plan.gat_grid_beams.resize(L);
    for (int l = 0; l < L; ++l) {
        plan.gat_grid_beams[l].resize(cfg.gat_array.size(), M);
        for (int m = 0; m < M; ++m) {
            plan.gat_grid_beams[l].col(m) =
                gat_norm * steering_vector(cfg.gat_array, uplook_direction(cfg.gateways[l], grid[m]));
        }
    }

    plan.sensing_power_w.assign(I, cfg.sensing_power_w);
    return plan;
}

SinrTerms sinr_terms(const std::vector<std::vector<Eigen::MatrixXcd>>& channels,
                     const BeamPlan& beams, int t, double noise_variance_w) {
    const int I = static_cast<int>(channels.size());
    assert(I > 0);
    const int U_per = static_cast<int>(channels[0][0].cols());
    const int U = I * U_per;

    SinrTerms terms;
    terms.chi.resize(U, U);
    terms.nu.resize(U);

    for (int i = 0; i < I; ++i) {
        for (int u = 0; u < U_per; ++u) {
            const int g = i * U_per + u;
            double sensing = 0.0;
            for (int j = 0; j < I; ++j) {
                const Eigen::VectorXcd h = channels[j][i].col(u);  // h_{j,i,u}
                for (int v = 0; v < U_per; ++v) {
                    const std::complex<double> ip = h.dot(beams.comm_beams[j].col(v));
                    terms.chi(g, j * U_per + v) = std::norm(ip);
                }
                sensing += beams.sensing_power_w[j] * std::norm(h.dot(beams.sensing_beam(j, t)));
            }
            terms.nu(g) = sensing + noise_variance_w;
        }
    }
    return terms;
}

Eigen::VectorXd achieved_sinrs(const SinrTerms& terms, const Eigen::VectorXd& p) {
    const int U = static_cast<int>(p.size());
    Eigen::VectorXd out(U);
    for (int g = 0; g < U; ++g) {
        double interf = 0.0;
        for (int h = 0; h < U; ++h)
            if (h != g) interf += p(h) * terms.chi(g, h);
        out(g) = p(g) * terms.chi(g, g) / (interf + terms.nu(g));
    }
    return out;
}

namespace {

bool strictly_diagonally_dominant(const Eigen::MatrixXd& chi, double tau) {
    const int U = static_cast<int>(chi.rows());
    for (int g = 0; g < U; ++g) {
        double off = 0.0;
        for (int h = 0; h < U; ++h)
            if (h != g) off += chi(g, h);
        if (!(chi(g, g) > tau * off)) return false;
    }
    return true;
}

}  // namespace

PowerAllocation allocate_power(const SinrTerms& terms, double tau_c, double backoff_factor,
                               int max_backoff) {
    const int U = static_cast<int>(terms.chi.rows());
    PowerAllocation out;
    if (!terms.chi.allFinite() || !terms.nu.allFinite())
        throw std::invalid_argument("allocate_power: non-finite chi/nu");

    double tau = tau_c;
    int steps = 0;
    while (!strictly_diagonally_dominant(terms.chi, tau) && steps < max_backoff) {
        tau *= backoff_factor;
        ++steps;
    }
    out.effective_tau = tau;
    out.backoff_steps = steps;
    if (!strictly_diagonally_dominant(terms.chi, tau)) return out;  // infeasible

    Eigen::MatrixXd A = (-tau) * terms.chi;
    A.diagonal() = terms.chi.diagonal();
    Eigen::VectorXd p = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(tau * terms.nu);

    for (int g = 0; g < U; ++g) {
        if (p(g) < 0.0) {
            if (p(g) < -1e-12) return out;  // genuine negativity: infeasible
            p(g) = 0.0;                     // floating-point slack at the vertex
        }
    }
    out.p = p;

    const Eigen::VectorXd sinr = achieved_sinrs(terms, p);
    out.max_sinr_deviation = ((sinr.array() - tau).abs() / tau).maxCoeff();
    out.feasible = out.max_sinr_deviation < 1e-6;
    return out;
}

}  // namespace isacsim
