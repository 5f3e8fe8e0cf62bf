#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace isacsim::oracles {

std::pair<std::vector<int>, double> brute_force_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += cost(i, perm[i]);
        if (c < best_cost) {
            best_cost = c;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best, best_cost};
}

namespace {

// Dense tableau simplex for min c^T x s.t. Dx = e, x >= 0, with Bland's rule.
// Basis holds column indices of the tableau.
std::optional<Eigen::VectorXd> simplex_phase(Eigen::MatrixXd& tableau, std::vector<int>& basis,
                                             int original_vars) {
    const int rows = static_cast<int>(tableau.rows()) - 1;  // last row = objective
    const int cols = static_cast<int>(tableau.cols()) - 1;  // last col = rhs

    for (int iter = 0; iter < 20000; ++iter) {
        int pivot_col = -1;
        for (int j = 0; j < cols; ++j) {  // Bland: first improving column
            if (tableau(rows, j) < -1e-10) {
                pivot_col = j;
                break;
            }
        }
        if (pivot_col < 0) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(original_vars);
            for (int i = 0; i < rows; ++i)
                if (basis[i] < original_vars) x[basis[i]] = tableau(i, cols);
            return x;
        }
        int pivot_row = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < rows; ++i) {
            if (tableau(i, pivot_col) > 1e-12) {
                const double ratio = tableau(i, cols) / tableau(i, pivot_col);
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && basis[i] < basis[pivot_row < 0 ? i : pivot_row])) {
                    best_ratio = ratio;
                    pivot_row = i;
                }
            }
        }
        if (pivot_row < 0) return std::nullopt;  // unbounded
        tableau.row(pivot_row) /= tableau(pivot_row, pivot_col);
        for (int i = 0; i <= rows; ++i) {
            if (i == pivot_row) continue;
            tableau.row(i) -= tableau(i, pivot_col) * tableau.row(pivot_row);
        }
        basis[pivot_row] = pivot_col;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Eigen::VectorXd> simplex_min(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& b) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    // Standard form: A x - s = b with s >= 0, plus artificials for phase 1.
    const int total = n + m + m;  // x, surplus, artificial
    Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, total + 1);
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        double sign = b[i] >= 0.0 ? 1.0 : -1.0;  // keep rhs nonnegative
        tab.block(i, 0, 1, n) = sign * A.row(i);
        tab(i, n + i) = -sign;
        tab(i, n + m + i) = 1.0;
        tab(i, total) = sign * b[i];
        basis[i] = n + m + i;
    }
    // Phase 1 objective: minimize artificial sum.
    for (int j = 0; j <= total; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += tab(i, j);
        tab(m, j) = -s;
    }
    for (int i = 0; i < m; ++i) tab(m, n + m + i) = 0.0;
    auto phase1 = simplex_phase(tab, basis, total);
    if (!phase1) return std::nullopt;
    double artificial_sum = 0.0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n + m) artificial_sum += tab(i, total);
    if (artificial_sum > 1e-7) return std::nullopt;  // infeasible

    // Phase 2: drop artificial columns, install the real objective.
    Eigen::MatrixXd tab2 = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
    tab2.block(0, 0, m, n + m) = tab.block(0, 0, m, n + m);
    tab2.col(n + m).head(m) = tab.col(total).head(m);
    for (int j = 0; j < n; ++j) tab2(m, j) = c[j];
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n + m && std::abs(tab2(m, basis[i])) > 0.0)
            tab2.row(m) -= tab2(m, basis[i]) * tab2.row(i);
    }
    auto phase2 = simplex_phase(tab2, basis, n);
    if (!phase2) return std::nullopt;
    return phase2;
}

Eigen::Vector3d descend_line_bundle(const std::vector<Eigen::Vector3d>& anchors,
                                    const std::vector<Eigen::Vector3d>& directions,
                                    int steps) {
    const int L = static_cast<int>(anchors.size());
    std::vector<Eigen::Matrix3d> projectors(L);
    Eigen::Vector3d q = Eigen::Vector3d::Zero();
    for (int l = 0; l < L; ++l) {
        const Eigen::Vector3d u = directions[l].normalized();
        projectors[l] = Eigen::Matrix3d::Identity() - u * u.transpose();
        q += anchors[l] + u * 1.0;  // a point on each line seeds the centroid
    }
    q /= static_cast<double>(L);
    const double step = 0.45 / static_cast<double>(L);  // gradient Lipschitz <= 2L
    for (int s = 0; s < steps; ++s) {
        Eigen::Vector3d grad = Eigen::Vector3d::Zero();
        for (int l = 0; l < L; ++l) grad += 2.0 * (projectors[l] * (q - anchors[l]));
        q -= step * grad;
    }
    return q;
}

double support_residual_norm(const std::vector<Eigen::VectorXcd>& y, const GridDictionary& dict,
                             const std::vector<int>& support) {
    const int M = dict.num_grid_points;
    const int I = dict.num_satellites;
    const int T = dict.num_slots;
    const int L = static_cast<int>(dict.blocks.size());
    const int cols = static_cast<int>(support.size()) * I * L;

    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(T * L, cols);
    Eigen::VectorXcd ys(T * L);
    for (int l = 0; l < L; ++l) {
        ys.segment(l * T, T) = y[l];
        for (std::size_t g = 0; g < support.size(); ++g)
            for (int i = 0; i < I; ++i)
                B.block(l * T, static_cast<int>(g) * I * L + l * I + i, T, 1) =
                    dict.blocks[l].col(i * M + support[g]);
    }
    const Eigen::MatrixXcd G = B.adjoint() * B;
    const Eigen::VectorXcd coef =
        Eigen::FullPivLU<Eigen::MatrixXcd>(G).solve(B.adjoint() * ys);
    return (ys - B * coef).norm();
}

std::vector<int> exhaustive_support_search(const std::vector<Eigen::VectorXcd>& y,
                                           const GridDictionary& dict, int K) {
    const int M = dict.num_grid_points;
    std::vector<int> support(K);
    std::vector<int> best;
    double best_norm = std::numeric_limits<double>::infinity();

    // Enumerate all increasing K-tuples out of M.
    std::vector<int> idx(K);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        const double r = support_residual_norm(y, dict, idx);
        if (r < best_norm - 1e-15) {
            best_norm = r;
            best = idx;
        }
        int pos = K - 1;
        while (pos >= 0 && idx[pos] == M - K + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < K; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

int brute_force_group_argmax(const std::vector<Eigen::VectorXcd>& residual,
                             const GridDictionary& dict) {
    const int M = dict.num_grid_points;
    const int I = dict.num_satellites;
    const int L = static_cast<int>(dict.blocks.size());
    int best = -1;
    double best_score = -1.0;
    for (int m = 0; m < M; ++m) {
        double score = 0.0;
        for (int l = 0; l < L; ++l)
            for (int i = 0; i < I; ++i)
                score += std::abs(residual[l].dot(dict.blocks[l].col(i * M + m)));
        if (score > best_score) {
            best_score = score;
            best = m;
        }
    }
    return best;
}

}  // namespace isacsim::oracles
