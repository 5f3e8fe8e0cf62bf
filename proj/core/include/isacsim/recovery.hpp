#pragma once

#include <Eigen/Dense>
#include <vector>

#include "isacsim/geometry.hpp"
#include "isacsim/signal.hpp"

namespace isacsim {

/// Ordered grid indices selected by a recovery run. Indices are distinct; the
/// selection order is preserved.
struct CandidateSet {
    std::vector<int> indices;
};

/// Per-iteration residual trajectory for invariant checks.
struct RecoveryDiagnostics {
    std::vector<double> residual_norms;  // ||r|| after each LS update
    std::vector<double> orthogonality;   // ||A_sel^H r|| / (||A_sel||_F ||y||)
};

/// Greedy group-sparse recovery on the stacked multi-gateway system. A group
/// is one grid point across all I*L satellite/gateway replicas; the residual
/// update solves the joint stacked least-squares over the selected columns.
/// Ties in the group score break toward the lowest grid index.
CandidateSet centralized_omp(const std::vector<Eigen::VectorXcd>& y, const GridDictionary& dict,
                             int num_targets, RecoveryDiagnostics* diag = nullptr);

/// Same greedy recovery restricted to a single gateway block (group size I).
CandidateSet local_omp(const Eigen::VectorXcd& y_l, const Eigen::MatrixXcd& block,
                       int num_grid_points, int num_targets, RecoveryDiagnostics* diag = nullptr);

/// Compressive sampling matching pursuit adapted to grid-point groups:
/// select top-2K groups, merge, group least-squares, prune to top-K by
/// coefficient energy. Stops when the support stabilizes or after max_iters.
CandidateSet centralized_cosamp(const std::vector<Eigen::VectorXcd>& y, const GridDictionary& dict,
                                int num_targets, int max_iters = 50);
CandidateSet local_cosamp(const Eigen::VectorXcd& y_l, const Eigen::MatrixXcd& block,
                          int num_grid_points, int num_targets, int max_iters = 50);

struct MusicResult {
    Eigen::VectorXd spectrum;  // pseudo-spectrum over grid points
    CandidateSet peaks;        // top-K under the angular separation rule
    bool converged = false;
};

/// Subspace pseudo-spectrum over the grid from un-combined antenna snapshots.
/// Pass one snapshot/steering/gateway entry for the non-cooperative variant or
/// all gateways for the centralized one. Peak picking enforces a minimum
/// separation of one grid spacing in gateway-view angle.
MusicResult music_spectrum(const std::vector<Eigen::MatrixXcd>& snapshots,
                           const std::vector<Eigen::MatrixXcd>& gat_grid_steering,
                           const std::vector<Position3>& gateway_positions,
                           const std::vector<Position3>& grid, double grid_spacing_km,
                           int num_targets);

}  // namespace isacsim
