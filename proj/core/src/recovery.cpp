#include "isacsim/recovery.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace isacsim {

namespace {

// The two group systems behind OMP/CoSaMP. A group is one grid point across
// all of its replica columns; `selected_matrix` materializes the columns the
// refit acts on. For the stacked system that is the full TL-row matrix exactly
// as the centralized update is written, structural zeros included.

struct StackedSystem {
    const GridDictionary& dict;
    int L;

    int slots() const { return dict.num_slots; }
    int groups() const { return dict.num_grid_points; }
    int group_size() const { return dict.num_satellites * L; }
    int rows() const { return dict.num_slots * L; }

    Eigen::VectorXd scores(const Eigen::VectorXcd& r) const {
        const int M = dict.num_grid_points;
        const int I = dict.num_satellites;
        const int T = dict.num_slots;
        Eigen::VectorXd s = Eigen::VectorXd::Zero(M);
        for (int l = 0; l < L; ++l) {
            const Eigen::RowVectorXcd c = r.segment(l * T, T).adjoint() * dict.blocks[l];
            for (int i = 0; i < I; ++i)
                for (int m = 0; m < M; ++m) s[m] += std::abs(c[i * M + m]);
        }
        return s;
    }

    Eigen::MatrixXcd selected_matrix(const std::vector<int>& groups_sel) const {
        const int M = dict.num_grid_points;
        const int I = dict.num_satellites;
        const int T = dict.num_slots;
        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(rows(), static_cast<int>(groups_sel.size()) * I * L);
        for (std::size_t g = 0; g < groups_sel.size(); ++g) {
            for (int l = 0; l < L; ++l) {
                for (int i = 0; i < I; ++i) {
                    const int col = static_cast<int>(g) * I * L + l * I + i;
                    B.block(l * T, col, T, 1) = dict.blocks[l].col(i * M + groups_sel[g]);
                }
            }
        }
        return B;
    }
};

struct LocalSystem {
    const Eigen::MatrixXcd& block;
    int M;

    int groups() const { return M; }
    int group_size() const { return static_cast<int>(block.cols()) / M; }
    int rows() const { return static_cast<int>(block.rows()); }

    Eigen::VectorXd scores(const Eigen::VectorXcd& r) const {
        const int I = group_size();
        const Eigen::RowVectorXcd c = r.adjoint() * block;
        Eigen::VectorXd s = Eigen::VectorXd::Zero(M);
        for (int i = 0; i < I; ++i)
            for (int m = 0; m < M; ++m) s[m] += std::abs(c[i * M + m]);
        return s;
    }

    Eigen::MatrixXcd selected_matrix(const std::vector<int>& groups_sel) const {
        const int I = group_size();
        Eigen::MatrixXcd B(rows(), static_cast<int>(groups_sel.size()) * I);
        for (std::size_t g = 0; g < groups_sel.size(); ++g)
            for (int i = 0; i < I; ++i)
                B.col(static_cast<int>(g) * I + i) = block.col(i * M + groups_sel[g]);
        return B;
    }
};

// Normal-equations LS with a Tikhonov ridge fallback when the Gram matrix is
// numerically singular (off-grid coherence can break plain invertibility).
Eigen::VectorXcd solve_ls(const Eigen::MatrixXcd& B, const Eigen::VectorXcd& y) {
    Eigen::MatrixXcd G = B.adjoint() * B;
    const Eigen::VectorXcd rhs = B.adjoint() * y;
    Eigen::LLT<Eigen::MatrixXcd> llt(G);
    if (llt.info() == Eigen::Success) return llt.solve(rhs);
    const double ridge = 1e-12 * G.real().trace() / static_cast<double>(G.cols());
    G.diagonal().array() += ridge;
    return Eigen::LDLT<Eigen::MatrixXcd>(G).solve(rhs);
}

int argmax_unselected(const Eigen::VectorXd& s, const std::vector<char>& taken) {
    int best = -1;
    double best_val = -1.0;
    for (int m = 0; m < s.size(); ++m) {
        if (taken[m]) continue;
        if (s[m] > best_val) {  // strict: ties keep the lowest index
            best_val = s[m];
            best = m;
        }
    }
    return best;
}

template <class System>
CandidateSet omp_engine(const System& sys, const Eigen::VectorXcd& y, int K,
                        RecoveryDiagnostics* diag) {
    assert(K >= 1 && K <= sys.groups());
    CandidateSet out;
    std::vector<char> taken(sys.groups(), 0);
    Eigen::VectorXcd r = y;
    const double ynorm = y.norm();
    for (int k = 0; k < K; ++k) {
        const int m = argmax_unselected(sys.scores(r), taken);
        taken[m] = 1;
        out.indices.push_back(m);
        const Eigen::MatrixXcd B = sys.selected_matrix(out.indices);
        const Eigen::VectorXcd coef = solve_ls(B, y);
        r = y - B * coef;
        if (diag) {
            diag->residual_norms.push_back(r.norm());
            const double den = B.norm() * (ynorm > 0.0 ? ynorm : 1.0);
            diag->orthogonality.push_back((B.adjoint() * r).norm() / den);
        }
    }
    return out;
}

std::vector<int> top_groups_by(const Eigen::VectorXd& value, int count,
                               const std::vector<int>* restrict_to = nullptr) {
    std::vector<int> idx;
    if (restrict_to) {
        idx = *restrict_to;
    } else {
        idx.resize(value.size());
        std::iota(idx.begin(), idx.end(), 0);
    }
    count = std::min<int>(count, static_cast<int>(idx.size()));
    std::partial_sort(idx.begin(), idx.begin() + count, idx.end(), [&](int a, int b) {
        if (value[a] != value[b]) return value[a] > value[b];
        return a < b;
    });
    idx.resize(count);
    return idx;
}

template <class System>
CandidateSet cosamp_engine(const System& sys, const Eigen::VectorXcd& y, int K, int max_iters) {
    assert(K >= 1 && K <= sys.groups());
    const int R = sys.group_size();
    std::vector<int> support;  // kept sorted for the stopping comparison
    Eigen::VectorXcd r = y;
    Eigen::VectorXd last_energy;

    for (int iter = 0; iter < max_iters; ++iter) {
        const Eigen::VectorXd s = sys.scores(r);
        std::vector<int> merged = top_groups_by(s, 2 * K);
        merged.insert(merged.end(), support.begin(), support.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        const Eigen::MatrixXcd B = sys.selected_matrix(merged);
        const Eigen::VectorXcd coef = solve_ls(B, y);
        Eigen::VectorXd energy(static_cast<int>(merged.size()));
        for (std::size_t g = 0; g < merged.size(); ++g)
            energy[static_cast<int>(g)] = coef.segment(static_cast<int>(g) * R, R).squaredNorm();

        // Prune to the K strongest groups, then refit on the pruned support.
        std::vector<int> order(merged.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (energy[a] != energy[b]) return energy[a] > energy[b];
            return merged[a] < merged[b];
        });
        std::vector<int> pruned;
        for (int j = 0; j < K; ++j) pruned.push_back(merged[order[j]]);
        std::sort(pruned.begin(), pruned.end());

        const Eigen::MatrixXcd Bp = sys.selected_matrix(pruned);
        const Eigen::VectorXcd coefp = solve_ls(Bp, y);
        r = y - Bp * coefp;
        last_energy.resize(K);
        for (int g = 0; g < K; ++g) last_energy[g] = coefp.segment(g * R, R).squaredNorm();

        if (pruned == support) break;
        support = pruned;
    }

    // Report in descending coefficient-energy order.
    std::vector<int> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (last_energy[a] != last_energy[b]) return last_energy[a] > last_energy[b];
        return support[a] < support[b];
    });
    CandidateSet out;
    for (int j : order) out.indices.push_back(support[j]);
    return out;
}

Eigen::VectorXcd stack(const std::vector<Eigen::VectorXcd>& y) {
    int total = 0;
    for (const auto& v : y) total += static_cast<int>(v.size());
    Eigen::VectorXcd out(total);
    int at = 0;
    for (const auto& v : y) {
        out.segment(at, v.size()) = v;
        at += static_cast<int>(v.size());
    }
    return out;
}

}  // namespace

CandidateSet centralized_omp(const std::vector<Eigen::VectorXcd>& y, const GridDictionary& dict,
                             int num_targets, RecoveryDiagnostics* diag) {
    StackedSystem sys{dict, static_cast<int>(dict.blocks.size())};
    return omp_engine(sys, stack(y), num_targets, diag);
}

CandidateSet local_omp(const Eigen::VectorXcd& y_l, const Eigen::MatrixXcd& block,
                       int num_grid_points, int num_targets, RecoveryDiagnostics* diag) {
    LocalSystem sys{block, num_grid_points};
    return omp_engine(sys, y_l, num_targets, diag);
}

CandidateSet centralized_cosamp(const std::vector<Eigen::VectorXcd>& y, const GridDictionary& dict,
                                int num_targets, int max_iters) {
    StackedSystem sys{dict, static_cast<int>(dict.blocks.size())};
    return cosamp_engine(sys, stack(y), num_targets, max_iters);
}

CandidateSet local_cosamp(const Eigen::VectorXcd& y_l, const Eigen::MatrixXcd& block,
                          int num_grid_points, int num_targets, int max_iters) {
    LocalSystem sys{block, num_grid_points};
    return cosamp_engine(sys, y_l, num_targets, max_iters);
}

MusicResult music_spectrum(const std::vector<Eigen::MatrixXcd>& snapshots,
                           const std::vector<Eigen::MatrixXcd>& gat_grid_steering,
                           const std::vector<Position3>& gateway_positions,
                           const std::vector<Position3>& grid, double grid_spacing_km,
                           int num_targets) {
    const int L = static_cast<int>(snapshots.size());
    const int M = static_cast<int>(grid.size());
    MusicResult out;
    out.spectrum = Eigen::VectorXd::Zero(M);

    Eigen::VectorXd denom = Eigen::VectorXd::Zero(M);
    for (int l = 0; l < L; ++l) {
        const int N = static_cast<int>(snapshots[l].rows());
        if (num_targets >= N) return out;  // no noise subspace left
        const double S = static_cast<double>(snapshots[l].cols());
        const Eigen::MatrixXcd cov = (snapshots[l] * snapshots[l].adjoint()) / S;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov);
        if (es.info() != Eigen::Success) return out;  // trial marked failed
        // Ascending eigenvalues: the first N-K eigenvectors span the noise subspace.
        const Eigen::MatrixXcd noise = es.eigenvectors().leftCols(N - num_targets);
        denom += (noise.adjoint() * gat_grid_steering[l]).colwise().squaredNorm().real().transpose();
    }
    for (int m = 0; m < M; ++m) out.spectrum[m] = 1.0 / std::max(denom[m], 1e-12);

    // Greedy peak picking: a candidate is suppressed when, from every gateway
    // view, it sits within one grid spacing in angle of an accepted peak.
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (out.spectrum[a] != out.spectrum[b]) return out.spectrum[a] > out.spectrum[b];
        return a < b;
    });
    auto separated = [&](int m, int a) {
        for (int l = 0; l < L; ++l) {
            const Eigen::Vector3d dm = (grid[m] - gateway_positions[l]).vec();
            const Eigen::Vector3d da = (grid[a] - gateway_positions[l]).vec();
            const double cosang =
                std::clamp(dm.dot(da) / (dm.norm() * da.norm()), -1.0, 1.0);
            const double threshold = grid_spacing_km / dm.norm();
            if (std::acos(cosang) >= threshold) return true;
        }
        return false;
    };
    std::vector<char> accepted(M, 0);
    for (int m : order) {
        if (static_cast<int>(out.peaks.indices.size()) == num_targets) break;
        bool ok = true;
        for (int a : out.peaks.indices) {
            if (!separated(m, a)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.peaks.indices.push_back(m);
            accepted[m] = 1;
        }
    }
    for (int m : order) {  // keep the exactly-K contract if suppression starved us
        if (static_cast<int>(out.peaks.indices.size()) == num_targets) break;
        if (!accepted[m]) out.peaks.indices.push_back(m);
    }
    out.converged = true;
    return out;
}

}  // namespace isacsim
