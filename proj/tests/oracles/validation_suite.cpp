#include "validation_suite.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "isacsim/experiments.hpp"
#include "oracles.hpp"

namespace isacsim::validation {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

CheckResult finish(const std::string& name, bool passed, Clock::time_point start,
                   const std::string& detail) {
    return {name, passed, elapsed_s(start), detail};
}

std::vector<int> random_grid_support(RngStream& rng, int M, int K) {
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < K)
        chosen.insert(static_cast<int>(rng.uniform() * M) % M);
    return {chosen.begin(), chosen.end()};
}

}  // namespace

CheckResult check_hungarian_oracle() {
    const auto start = Clock::now();
    RngStream rng({0xa55, 1});
    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int K = 1 + trial % 6;
        Eigen::MatrixXd cost(K, K);
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) cost(i, j) = rng.uniform(0.0, 10.0);
        const std::vector<int> assign = hungarian(cost);
        double total = 0.0;
        for (int i = 0; i < K; ++i) total += cost(i, assign[i]);
        const double best = oracles::brute_force_assignment(cost).second;
        if (std::abs(total - best) > 1e-9) ++failures;
    }
    std::ostringstream detail;
    detail << failures << "/500 mismatches vs exhaustive assignment";
    return finish("hungarian-vs-brute-force", failures == 0, start, detail.str());
}

CheckResult check_fusion_oracle() {
    const auto start = Clock::now();
    RngStream rng({0xf0, 2});
    int checked = 0;
    double worst = 0.0;
    while (checked < 200) {
        const int L = 2 + checked % 3;
        const Position3 truth{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0),
                              rng.uniform(17.0, 20.0)};
        std::vector<Position3> anchors, points;
        std::vector<Eigen::Vector3d> avec, dvec;
        std::vector<int> cluster;
        for (int l = 0; l < L; ++l) {
            const Position3 a{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), 0.0};
            Eigen::Vector3d dir = (truth - a).vec();
            dir += Eigen::Vector3d(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                                   rng.uniform(-0.1, 0.1)) * dir.norm() * 0.02;
            const double s = rng.uniform(0.5, 1.5);
            anchors.push_back(a);
            points.push_back(Position3::from_vec(a.vec() + s * dir));
            avec.push_back(a.vec());
            dvec.push_back(dir);
            cluster.push_back(l);
        }
        const FuseResult fused = fuse(cluster, anchors, points);
        if (fused.used_fallback) continue;  // degenerate bundle, resample
        const Eigen::Vector3d numeric = oracles::descend_line_bundle(avec, dvec);
        worst = std::max(worst, (fused.position.vec() - numeric).norm());
        ++checked;
    }
    std::ostringstream detail;
    detail << "max |closed-form - numeric| = " << worst << " km over 200 bundles";
    return finish("fusion-vs-numeric-minimizer", worst < 1e-6, start, detail.str());
}

CheckResult check_power_allocation_oracle() {
    const auto start = Clock::now();
    RngStream rng({0x9a, 3});
    double worst_power = 0.0;
    double worst_sinr = 0.0;
    int infeasible = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int U = 1 + trial % 10;
        const double tau = rng.uniform(0.05, 0.5);
        SinrTerms terms;
        terms.chi.resize(U, U);
        terms.nu.resize(U);
        for (int g = 0; g < U; ++g) {
            terms.chi(g, g) = rng.uniform(1.0, 2.0);
            terms.nu(g) = rng.uniform(0.5, 2.0);
        }
        for (int g = 0; g < U; ++g) {
            double rowsum = 0.0;
            for (int h = 0; h < U; ++h)
                if (h != g) {
                    terms.chi(g, h) = rng.uniform(0.0, 1.0);
                    rowsum += terms.chi(g, h);
                }
            if (rowsum > 0.0) {
                const double scale = 0.8 * terms.chi(g, g) / (tau * rowsum);
                for (int h = 0; h < U; ++h)
                    if (h != g) terms.chi(g, h) *= std::min(scale, 1.0);
            }
        }
        const PowerAllocation alloc = allocate_power(terms, tau);
        if (!alloc.feasible || alloc.backoff_steps != 0) {
            ++infeasible;
            continue;
        }
        Eigen::MatrixXd A = (-tau) * terms.chi;
        A.diagonal() = terms.chi.diagonal();
        const auto lp = oracles::simplex_min(Eigen::VectorXd::Ones(U), A, tau * terms.nu);
        if (!lp) {
            ++infeasible;
            continue;
        }
        const double p_sum = alloc.p.sum();
        const double lp_sum = lp->sum();
        worst_power = std::max(worst_power, std::abs(p_sum - lp_sum) / std::max(p_sum, 1e-30));
        worst_sinr = std::max(worst_sinr, alloc.max_sinr_deviation);
    }
    std::ostringstream detail;
    detail << "max relative total-power gap " << worst_power << ", max SINR deviation "
           << worst_sinr << ", " << infeasible << " resamples";
    return finish("power-allocation-vs-simplex",
                  infeasible == 0 && worst_power < 1e-8 && worst_sinr < 1e-9, start, detail.str());
}

CheckResult check_lemma1_identity() {
    const auto start = Clock::now();
    RngStream rng({0x1e, 4});
    double worst = 0.0;
    for (int nx : {4, 8, 16}) {
        const UpaGeometry geom{nx, nx};
        const double n = geom.size();
        for (int trial = 0; trial < 1000; ++trial) {
            const Direction d1{rng.uniform(-3.14159, 3.14159), rng.uniform(0.0, 1.5707),
                               LookConvention::Downlook};
            const Direction d2{rng.uniform(-3.14159, 3.14159), rng.uniform(0.0, 1.5707),
                               LookConvention::Downlook};
            const double direct = crosstalk(geom, d1, d2);
            const double closed = crosstalk_closed_form(geom, d1, d2);
            // Relative error with an absolute floor covering the cancellation
            // noise of the direct N-term sum near pattern nulls.
            const double den = std::max({direct, closed, 1e-9 * n});
            worst = std::max(worst, std::abs(direct - closed) / den);
        }
    }
    bool decreasing = true;
    const Direction f1{0.3, 0.2, LookConvention::Downlook};
    const Direction f2{0.8, 0.5, LookConvention::Downlook};
    double prev = std::numeric_limits<double>::infinity();
    for (int nx : {4, 8, 16}) {
        const UpaGeometry geom{nx, nx};
        const double normalized = crosstalk(geom, f1, f2) / geom.size();
        if (!(normalized < prev)) decreasing = false;
        prev = normalized;
    }
    std::ostringstream detail;
    detail << "max relative identity error " << worst << ", normalized crosstalk decreasing: "
           << (decreasing ? "yes" : "no");
    return finish("lemma1-closed-form-identity", worst < 1e-10 && decreasing, start, detail.str());
}

CheckResult check_exact_recovery() {
    const auto start = Clock::now();
    ScenarioConfig cfg = desk_profile();
    cfg.master_seed = 11;
    const std::vector<Position3> grid = build_grid(cfg.grid);
    const int M = static_cast<int>(grid.size());

    int success = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const int K = 1 + trial % 3;
        cfg.num_targets = K;
        RngStream pick = substream(cfg.master_seed, trial, Draw::TargetPlacement, 999);
        const std::vector<int> truth = random_grid_support(pick, M, K);
        TrialOptions options;
        options.noiseless = true;
        std::vector<Position3> targets;
        for (int m : truth) targets.push_back(grid[m]);
        options.target_override = targets;

        const TrialData data = assemble_trial(cfg, trial, options);
        const std::set<int> truth_set(truth.begin(), truth.end());

        const CandidateSet cen = centralized_omp(data.obs.y, data.dict, K);
        bool ok = std::set<int>(cen.indices.begin(), cen.indices.end()) == truth_set;
        for (int l = 0; ok && l < cfg.num_gateways(); ++l) {
            const CandidateSet loc = local_omp(data.obs.y[l], data.dict.blocks[l], M, K);
            ok = std::set<int>(loc.indices.begin(), loc.indices.end()) == truth_set;
        }
        if (ok) ++success;
    }

    // Brute-force support equivalence on a tiny grid (M <= 20, K <= 2).
    ScenarioConfig tiny = desk_profile();
    tiny.master_seed = 12;
    tiny.grid.diameter_km = 6.0;
    tiny.grid.spacing_km = 2.0;
    tiny.grid.altitudes_km = {17.0, 19.0};
    const std::vector<Position3> tiny_grid = build_grid(tiny.grid);
    const int tiny_m = static_cast<int>(tiny_grid.size());
    bool brute_ok = tiny_m <= 20;
    for (int trial = 0; brute_ok && trial < 10; ++trial) {
        const int K = 1 + trial % 2;
        tiny.num_targets = K;
        RngStream pick = substream(tiny.master_seed, trial, Draw::TargetPlacement, 999);
        const std::vector<int> truth = random_grid_support(pick, tiny_m, K);
        TrialOptions options;
        options.noiseless = true;
        std::vector<Position3> targets;
        for (int m : truth) targets.push_back(tiny_grid[m]);
        options.target_override = targets;
        const TrialData data = assemble_trial(tiny, trial, options);

        const CandidateSet omp_sel = centralized_omp(data.obs.y, data.dict, K);
        std::vector<int> omp_sorted = omp_sel.indices;
        std::sort(omp_sorted.begin(), omp_sorted.end());
        const std::vector<int> brute = oracles::exhaustive_support_search(data.obs.y, data.dict, K);
        brute_ok = omp_sorted == brute;
    }

    std::ostringstream detail;
    detail << success << "/" << trials << " exact supports (need >= 99), brute-force equivalence "
           << (brute_ok ? "holds" : "fails");
    return finish("noiseless-exact-recovery", success >= 99 && brute_ok, start, detail.str());
}

CheckResult check_invariants() {
    const auto start = Clock::now();
    std::ostringstream detail;
    bool passed = true;

    ScenarioConfig cfg = desk_profile();
    cfg.master_seed = 21;
    const std::vector<Position3> grid = build_grid(cfg.grid);
    const int M = static_cast<int>(grid.size());

    // Constant-modulus beams, exact up to transcendental rounding.
    {
        const Placement placement = place_nodes(cfg, 0);
        const BeamPlan beams = build_beams(cfg, grid, placement);
        double worst = 0.0;
        const double sat_mod = 1.0 / std::sqrt(static_cast<double>(cfg.sat_array.size()));
        const double gat_mod = 1.0 / std::sqrt(static_cast<double>(cfg.gat_array.size()));
        for (const auto& b : beams.sat_grid_beams)
            worst = std::max(worst, (b.cwiseAbs().array() - sat_mod).abs().maxCoeff());
        for (const auto& b : beams.comm_beams)
            worst = std::max(worst, (b.cwiseAbs().array() - sat_mod).abs().maxCoeff());
        for (const auto& b : beams.gat_grid_beams)
            worst = std::max(worst, (b.cwiseAbs().array() - gat_mod).abs().maxCoeff());
        if (worst > 1e-15) {
            passed = false;
            detail << "[constant-modulus worst " << worst << "] ";
        }
    }

    // OMP residual monotonicity and orthogonality on noisy trials.
    {
        double worst_ortho = 0.0;
        bool monotone = true;
        for (int trial = 0; trial < 5; ++trial) {
            const TrialData data = assemble_trial(cfg, trial);
            RecoveryDiagnostics diag;
            centralized_omp(data.obs.y, data.dict, cfg.num_targets, &diag);
            for (std::size_t k = 1; k < diag.residual_norms.size(); ++k)
                if (diag.residual_norms[k] > diag.residual_norms[k - 1] * (1.0 + 1e-12))
                    monotone = false;
            for (double o : diag.orthogonality) worst_ortho = std::max(worst_ortho, o);
            RecoveryDiagnostics ldiag;
            local_omp(data.obs.y[0], data.dict.blocks[0], M, cfg.num_targets, &ldiag);
            for (std::size_t k = 1; k < ldiag.residual_norms.size(); ++k)
                if (ldiag.residual_norms[k] > ldiag.residual_norms[k - 1] * (1.0 + 1e-12))
                    monotone = false;
            for (double o : ldiag.orthogonality) worst_ortho = std::max(worst_ortho, o);
        }
        if (!monotone || worst_ortho > 1e-8) {
            passed = false;
            detail << "[omp monotone=" << monotone << " ortho=" << worst_ortho << "] ";
        }
    }

    // Cluster constraints of the sequential association.
    {
        bool ok = true;
        for (int trial = 0; trial < 5 && ok; ++trial) {
            const TrialResult r = run_trial(cfg, trial, {Framework::ProposedDis});
            const auto& locals = r.outcomes.at(Framework::ProposedDis).local_candidates;
            const Clusters clusters = sequential_associate(locals, cfg.gateways, grid);
            std::multiset<int> cluster_union, candidate_union;
            for (int l = 0; l < cfg.num_gateways(); ++l)
                for (int m : locals[l].indices) candidate_union.insert(m);
            for (const auto& c : clusters.members) {
                if (static_cast<int>(c.size()) != cfg.num_gateways()) ok = false;
                for (std::size_t l = 0; l < c.size(); ++l) {
                    const auto& cand = locals[l].indices;
                    if (std::find(cand.begin(), cand.end(), c[l]) == cand.end()) ok = false;
                    cluster_union.insert(c[l]);
                }
            }
            if (cluster_union != candidate_union) ok = false;
        }
        if (!ok) {
            passed = false;
            detail << "[cluster-constraints violated] ";
        }
    }

    // Projector sums are positive semidefinite.
    {
        RngStream rng({0x5d, 7});
        double min_eig = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const int L = 1 + rep % 4;
            Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
            for (int l = 0; l < L; ++l) {
                Eigen::Vector3d u(rng.normal(), rng.normal(), rng.normal());
                u.normalize();
                sum += Eigen::Matrix3d::Identity() - u * u.transpose();
            }
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sum);
            min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        }
        if (min_eig < -1e-12) {
            passed = false;
            detail << "[projector-sum min eigenvalue " << min_eig << "] ";
        }
    }

    // Bit-identical re-runs from equal seeds.
    {
        const std::set<Framework> fws = {Framework::ProposedCen, Framework::ProposedDis,
                                         Framework::OmpNc};
        const TrialResult a = run_trial(cfg, 3, fws);
        const TrialResult b = run_trial(cfg, 3, fws);
        bool identical = a.mean_comm_power_w == b.mean_comm_power_w &&
                         a.effective_tau == b.effective_tau;
        for (Framework fw : fws) {
            const auto& ea = a.outcomes.at(fw).estimates;
            const auto& eb = b.outcomes.at(fw).estimates;
            if (ea.size() != eb.size()) identical = false;
            for (std::size_t k = 0; identical && k < ea.size(); ++k)
                identical = ea[k].x == eb[k].x && ea[k].y == eb[k].y && ea[k].z == eb[k].z;
        }
        if (!identical) {
            passed = false;
            detail << "[rerun not bit-identical] ";
        }
    }

    if (passed) detail << "all structural invariants hold";
    return finish("invariant-suite", passed, start, detail.str());
}

std::vector<CheckResult> run_validation_suite() {
    return {check_hungarian_oracle(), check_fusion_oracle(), check_power_allocation_oracle(),
            check_lemma1_identity(), check_exact_recovery(), check_invariants()};
}

}  // namespace isacsim::validation
