#pragma once

// Independent reference implementations used to cross-check the simulator.
// Everything here is deliberately brute-force or textbook-generic and shares
// no code with the library paths it validates.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "isacsim/geometry.hpp"
#include "isacsim/signal.hpp"

namespace isacsim::oracles {

/// Exhaustive K! assignment search. Returns (assignment, total cost).
std::pair<std::vector<int>, double> brute_force_assignment(const Eigen::MatrixXd& cost);

/// Textbook two-phase tableau simplex with Bland's rule for
///   min c^T x  s.t.  A x >= b, x >= 0.
/// Returns nullopt when infeasible or unbounded.
std::optional<Eigen::VectorXd> simplex_min(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& b);

/// Gradient-descent minimizer of the summed squared line-to-point distances,
/// started from the bundle centroid.
Eigen::Vector3d descend_line_bundle(const std::vector<Eigen::Vector3d>& anchors,
                                    const std::vector<Eigen::Vector3d>& directions,
                                    int steps = 10000);

/// Exhaustive search over all (M choose K) grid supports minimizing the
/// stacked least-squares residual of the group-sparse model.
std::vector<int> exhaustive_support_search(const std::vector<Eigen::VectorXcd>& y,
                                           const GridDictionary& dict, int K);

/// Residual norm of the stacked group LS on a fixed support (shared by the
/// exhaustive search; normal equations solved with full-pivot LU).
double support_residual_norm(const std::vector<Eigen::VectorXcd>& y, const GridDictionary& dict,
                             const std::vector<int>& support);

/// Brute-force group-correlation argmax over grid points for one residual.
int brute_force_group_argmax(const std::vector<Eigen::VectorXcd>& residual,
                             const GridDictionary& dict);

}  // namespace isacsim::oracles
