#include "isacsim/association.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isacsim {

double line_point_sqdist(const Position3& a, const Position3& b, const Position3& c) {
    const Eigen::Vector3d dir = (b - a).vec();
    const double n2 = dir.squaredNorm();
    assert(n2 > 0.0 && "line requires two distinct points");
    const Eigen::Vector3d ca = (c - a).vec();
    const double proj = ca.dot(dir);
    return ca.squaredNorm() - proj * proj / n2;
}

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
    // Jonker-Volgenant style shortest augmenting path with potentials, O(n^3).
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw std::invalid_argument("hungarian: cost matrix must be square");
    if (!cost.allFinite()) throw std::invalid_argument("hungarian: cost matrix must be finite");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

Clusters sequential_associate(const std::vector<CandidateSet>& candidates,
                              const std::vector<Position3>& gateway_positions,
                              const std::vector<Position3>& grid) {
    const int L = static_cast<int>(candidates.size());
    if (L == 0) throw std::invalid_argument("sequential_associate: no candidate sets");
    const int K = static_cast<int>(candidates[0].indices.size());
    for (const auto& c : candidates) {
        if (static_cast<int>(c.indices.size()) != K)
            throw std::invalid_argument("sequential_associate: candidate counts differ");
    }

    Clusters out;
    out.members.resize(K);
    for (int k = 0; k < K; ++k) out.members[k].push_back(candidates[0].indices[k]);

    for (int g = 1; g < L; ++g) {
        Eigen::MatrixXd cost(K, K);
        for (int k = 0; k < K; ++k) {          // candidate k of gateway g: a bearing line
            const Position3& cand = grid[candidates[g].indices[k]];
            for (int kp = 0; kp < K; ++kp) {   // cluster kp: earlier members are points
                double acc = 0.0;
                for (int l = 0; l < g; ++l)
                    acc += line_point_sqdist(gateway_positions[g], cand,
                                             grid[out.members[kp][l]]);
                cost(k, kp) = acc;
            }
        }
        const std::vector<int> assign = hungarian(cost);
        for (int k = 0; k < K; ++k)
            out.members[assign[k]].push_back(candidates[g].indices[k]);
    }
    return out;
}

KmeansClusters kmeans_associate(const std::vector<CandidateSet>& candidates,
                                const std::vector<Position3>& grid, int num_clusters,
                                RngStream& rng, int max_iters) {
    struct Point {
        Eigen::Vector3d pos;
        int gateway;
        int grid_index;
    };
    std::vector<Point> pts;
    for (std::size_t l = 0; l < candidates.size(); ++l)
        for (int m : candidates[l].indices)
            pts.push_back({grid[m].vec(), static_cast<int>(l), m});
    const int P = static_cast<int>(pts.size());
    const int K = std::min(num_clusters, P);

    // Deterministic farthest-point seeding from the trial stream.
    std::vector<Eigen::Vector3d> centroids;
    centroids.push_back(pts[static_cast<int>(rng.uniform() * P) % P].pos);
    while (static_cast<int>(centroids.size()) < K) {
        int far = 0;
        double far_d = -1.0;
        for (int p = 0; p < P; ++p) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) d = std::min(d, (pts[p].pos - c).squaredNorm());
            if (d > far_d) {
                far_d = d;
                far = p;
            }
        }
        centroids.push_back(pts[far].pos);
    }

    std::vector<int> assign(P, 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (int p = 0; p < P; ++p) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int k = 0; k < K; ++k) {
                const double d = (pts[p].pos - centroids[k]).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            if (assign[p] != best) {
                assign[p] = best;
                changed = true;
            }
        }
        for (int k = 0; k < K; ++k) {
            Eigen::Vector3d acc = Eigen::Vector3d::Zero();
            int count = 0;
            for (int p = 0; p < P; ++p) {
                if (assign[p] == k) {
                    acc += pts[p].pos;
                    ++count;
                }
            }
            if (count > 0) {
                centroids[k] = acc / count;
            } else {
                // Re-seed an emptied cluster at the point farthest from its centroid.
                int far = 0;
                double far_d = -1.0;
                for (int p = 0; p < P; ++p) {
                    const double d = (pts[p].pos - centroids[assign[p]]).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = p;
                    }
                }
                centroids[k] = pts[far].pos;
                assign[far] = k;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
    }

    KmeansClusters out;
    out.members.resize(K);
    for (int p = 0; p < P; ++p)
        out.members[assign[p]].push_back({pts[p].gateway, pts[p].grid_index});
    for (int k = 0; k < K; ++k) {
        out.centroids.push_back(Position3::from_vec(centroids[k]));
        std::vector<char> seen(candidates.size(), 0);
        for (const auto& [gw, m] : out.members[k]) {
            if (seen[gw]) out.one_per_gateway = false;
            seen[gw] = 1;
        }
        if (out.members[k].size() != candidates.size()) out.one_per_gateway = false;
    }
    return out;
}

FuseResult fuse(const std::vector<int>& cluster, const std::vector<Position3>& gateway_positions,
                const std::vector<Position3>& grid) {
    const int L = static_cast<int>(cluster.size());
    Eigen::Matrix3d sum_q = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int l = 0; l < L; ++l) {
        const Eigen::Vector3d gat = gateway_positions[l].vec();
        const Eigen::Vector3d dir = (grid[cluster[l]].vec() - gat).normalized();
        const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - dir * dir.transpose();
        sum_q += proj;
        rhs += proj * gat;
        centroid += grid[cluster[l]].vec();
    }
    centroid /= static_cast<double>(L);

    FuseResult out;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sum_q);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    out.condition_number = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (!(out.condition_number < 1e8)) {
        out.used_fallback = true;  // all lines (near-)parallel: no unique intersection
        out.position = Position3::from_vec(centroid);
        return out;
    }
    out.position = Position3::from_vec(sum_q.ldlt().solve(rhs));
    return out;
}

}  // namespace isacsim
