#pragma once

#include <Eigen/Dense>
#include <vector>

#include "isacsim/scenario.hpp"

namespace isacsim {

/// Constant-modulus beam set for one trial. Sensing beams are the normalized
/// steering columns toward the grid point probed in each slot; communication
/// beams steer at the true UE positions and are slot-invariant.
struct BeamPlan {
    std::vector<Eigen::MatrixXcd> sat_grid_beams;  // [i]: N_sat x M, columns v/sqrt(N_sat)
    std::vector<Eigen::MatrixXcd> gat_grid_beams;  // [l]: N_gat x M
    std::vector<Eigen::MatrixXcd> comm_beams;      // [i]: N_sat x U_i
    std::vector<int> psi;                          // [t] -> probed grid index (0-based)
    std::vector<double> sensing_power_w;           // [i]: P^r_i (fixed at maximum)
    int num_slots = 0;

    const Eigen::MatrixXcd& sensing_beam_block(int i) const { return sat_grid_beams[i]; }
    Eigen::VectorXcd sensing_beam(int i, int t) const { return sat_grid_beams[i].col(psi[t]); }
    Eigen::VectorXcd receive_beam(int l, int t) const { return gat_grid_beams[l].col(psi[t]); }
};

/// Build the full beam plan: grid-probe mapping psi(t) = ((t-1) mod M) + 1,
/// sensing/receive beams per Eq.-style steering at grid points, communication
/// beams from true UE positions, maximum sensing power on every slot.
BeamPlan build_beams(const ScenarioConfig& cfg, const std::vector<Position3>& grid,
                     const Placement& placement);

/// Beamformed channel powers entering the per-slot power allocation.
/// Row/column index g flattens (satellite i, user u) as g = i * U + u.
struct SinrTerms {
    Eigen::MatrixXd chi;  // chi(g, h) = |h_{j,i,u}^H f^c_{j,v}|^2 with g=(i,u), h=(j,v)
    Eigen::VectorXd nu;   // sensing interference + noise per UE
};

/// chi/nu for one slot. `channels[j][i]` holds the N_sat x U_i channel matrix
/// from satellite j to the UEs served by satellite i (columns are users).
SinrTerms sinr_terms(const std::vector<std::vector<Eigen::MatrixXcd>>& channels,
                     const BeamPlan& beams, int t, double noise_variance_w);

/// Achieved SINR of every UE at power vector p.
Eigen::VectorXd achieved_sinrs(const SinrTerms& terms, const Eigen::VectorXd& p);

struct PowerAllocation {
    Eigen::VectorXd p;            // per-UE communication powers (watts)
    bool feasible = false;
    double effective_tau = 0.0;   // threshold actually enforced (after backoff)
    int backoff_steps = 0;
    double max_sinr_deviation = 0.0;  // max relative |SINR - tau| at the solution
};

/// Minimum-power allocation meeting the SINR threshold on every UE. Checks the
/// strict-diagonal-dominance feasibility condition; on failure halves tau and
/// retries (max_backoff times), then solves the tight linear system by LU.
PowerAllocation allocate_power(const SinrTerms& terms, double tau_c, double backoff_factor = 0.5,
                               int max_backoff = 20);

}  // namespace isacsim
