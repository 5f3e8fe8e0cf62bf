#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "isacsim/geometry.hpp"
#include "isacsim/recovery.hpp"
#include "isacsim/rng.hpp"

namespace isacsim {

/// Squared distance (km^2) from point c to the line through a and b.
double line_point_sqdist(const Position3& a, const Position3& b, const Position3& c);

/// Exact minimum-cost assignment on a square nonnegative cost matrix.
/// Returns the column assigned to each row.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

/// Per-target clusters of grid indices, one entry per gateway.
struct Clusters {
    std::vector<std::vector<int>> members;  // members[k][l] = grid index from gateway l
};

/// Sequential assignment of per-gateway candidate sets into target clusters:
/// gateway 1 seeds the clusters, each later gateway is matched by the
/// Hungarian algorithm on the line-to-point cost against the clusters built
/// so far. Every candidate set must hold exactly K entries.
Clusters sequential_associate(const std::vector<CandidateSet>& candidates,
                              const std::vector<Position3>& gateway_positions,
                              const std::vector<Position3>& grid);

/// Euclidean K-means baseline over the pooled candidate positions. Clusters
/// may violate the one-candidate-per-gateway constraint; that is recorded,
/// not repaired.
struct KmeansClusters {
    std::vector<std::vector<std::pair<int, int>>> members;  // (gateway, grid index)
    std::vector<Position3> centroids;
    bool one_per_gateway = true;
};

KmeansClusters kmeans_associate(const std::vector<CandidateSet>& candidates,
                                const std::vector<Position3>& grid, int num_clusters,
                                RngStream& rng, int max_iters = 50);

struct FuseResult {
    Position3 position;
    double condition_number = 0.0;
    bool used_fallback = false;  // near-parallel bundle resolved to the member centroid
};

/// Closed-form minimizer of the summed squared line-to-point distances over
/// the cluster's bearing lines. Bundles whose projector sum is near-singular
/// (condition number > 1e8) fall back to the centroid of the member grid points.
FuseResult fuse(const std::vector<int>& cluster, const std::vector<Position3>& gateway_positions,
                const std::vector<Position3>& grid);

}  // namespace isacsim
