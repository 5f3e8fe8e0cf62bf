#include "isacsim/experiments.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <iomanip>
#include <thread>

namespace isacsim {

std::string framework_name(Framework fw) {
    switch (fw) {
        case Framework::ProposedCen: return "Proposed-CEN";
        case Framework::ProposedDis: return "Proposed-DIS";
        case Framework::OmpNc: return "OMP-NC";
        case Framework::CosampCen: return "CoSaMP-CEN";
        case Framework::CosampDis: return "CoSaMP-DIS";
        case Framework::MusicCen: return "MUSIC-CEN";
        case Framework::MusicNc: return "MUSIC-NC";
        case Framework::OmpDisKmeans: return "OMP-DIS+K-means";
    }
    return "?";
}

std::optional<Framework> framework_from_name(const std::string& name) {
    for (Framework fw : all_frameworks())
        if (framework_name(fw) == name) return fw;
    return std::nullopt;
}

const std::set<Framework>& all_frameworks() {
    static const std::set<Framework> all = {
        Framework::ProposedCen, Framework::ProposedDis, Framework::OmpNc,
        Framework::CosampCen,   Framework::CosampDis,   Framework::MusicCen,
        Framework::MusicNc,     Framework::OmpDisKmeans};
    return all;
}

PowerSchedule solve_power_schedule(const ScenarioConfig& cfg, const BeamPlan& beams,
                                   const Placement& placement, std::uint64_t trial_index) {
    const int I = cfg.num_satellites();
    const int U_per = cfg.ues_per_satellite;
    const int T = beams.num_slots;
    const double sigma2 = cfg.noise_variance_w();

    PowerSchedule sched;
    sched.comm_power = Eigen::MatrixXd::Zero(I * U_per, T);
    sched.per_slot.resize(T);
    sched.min_effective_tau = cfg.tau_c;

    // h[j][i].col(u): channel from satellite j to UE u of satellite i.
    std::vector<std::vector<Eigen::MatrixXcd>> h(I, std::vector<Eigen::MatrixXcd>(I));
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < I; ++j) {
            for (int i = 0; i < I; ++i) {
                h[j][i].resize(cfg.sat_array.size(), U_per);
                for (int u = 0; u < U_per; ++u) {
                    RngStream rng =
                        substream(cfg.master_seed, trial_index, Draw::CommNlos, j, i, u, t);
                    h[j][i].col(u) = draw_comm_channel(rng, cfg.link, cfg.sat_array,
                                                       cfg.satellites[j], placement.ues[i][u]);
                }
            }
        }
        const SinrTerms terms = sinr_terms(h, beams, t, sigma2);
        PowerAllocation alloc = allocate_power(terms, cfg.tau_c);
        if (!alloc.feasible) {
            sched.all_feasible = false;
        } else {
            sched.comm_power.col(t) = alloc.p;
            sched.min_effective_tau = std::min(sched.min_effective_tau, alloc.effective_tau);
        }
        sched.per_slot[t] = std::move(alloc);
    }
    return sched;
}

TrialData assemble_trial(const ScenarioConfig& cfg, std::uint64_t trial_index,
                         const TrialOptions& options) {
    TrialData data;
    data.grid = build_grid(cfg.grid);
    data.placement = place_nodes(cfg, trial_index);
    if (options.target_override) data.placement.targets = *options.target_override;

    data.beams = build_beams(cfg, data.grid, data.placement);
    data.symbols = draw_symbols(cfg.master_seed, trial_index, cfg.num_satellites(),
                                cfg.ues_per_satellite, data.beams.num_slots);
    data.powers = solve_power_schedule(cfg, data.beams, data.placement, trial_index);
    data.reflections =
        draw_reflections(cfg, trial_index, static_cast<int>(data.placement.targets.size()));
    data.dict = build_dictionary(cfg, data.grid, data.beams, data.symbols, data.powers);
    data.obs = synthesize_observations(cfg, data.beams, data.symbols, data.powers,
                                       data.placement.targets, data.reflections, trial_index,
                                       options.noiseless);
    return data;
}

double truth_matched_mean_error(const std::vector<Position3>& estimates,
                                const std::vector<Position3>& truths) {
    const int K = static_cast<int>(truths.size());
    assert(static_cast<int>(estimates.size()) == K);
    Eigen::MatrixXd cost(K, K);
    for (int e = 0; e < K; ++e)
        for (int k = 0; k < K; ++k) {
            const double d = distance_km(estimates[e], truths[k]);
            cost(e, k) = d * d;
        }
    const std::vector<int> match = hungarian(cost);
    double total = 0.0;
    for (int e = 0; e < K; ++e) total += distance_km(estimates[e], truths[match[e]]);
    return total / K;
}

namespace {

std::vector<Position3> grid_points_of(const CandidateSet& set, const std::vector<Position3>& grid) {
    std::vector<Position3> out;
    for (int m : set.indices) out.push_back(grid[m]);
    return out;
}

FrameworkOutcome distributed_outcome(const std::vector<CandidateSet>& locals,
                                     const ScenarioConfig& cfg,
                                     const std::vector<Position3>& grid) {
    FrameworkOutcome out;
    out.local_candidates = locals;
    const Clusters clusters = sequential_associate(locals, cfg.gateways, grid);
    for (const auto& cluster : clusters.members)
        out.estimates.push_back(fuse(cluster, cfg.gateways, grid).position);
    out.ok = true;
    return out;
}

}  // namespace

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index,
                      const std::set<Framework>& frameworks, const TrialOptions& options) {
    const TrialData data = assemble_trial(cfg, trial_index, options);
    const int I = cfg.num_satellites();
    const int L = cfg.num_gateways();
    const int M = static_cast<int>(data.grid.size());
    const int K = static_cast<int>(data.placement.targets.size());
    const int T = data.beams.num_slots;

    TrialResult result;
    result.targets = data.placement.targets;
    result.grid_bound_km = grid_bound(data.placement.targets, data.grid);
    result.power_feasible = data.powers.all_feasible;
    result.effective_tau = data.powers.min_effective_tau;
    result.mean_comm_power_w = data.powers.comm_power.sum() / (static_cast<double>(T) * I);

    const bool need_local_omp =
        frameworks.count(Framework::ProposedDis) || frameworks.count(Framework::OmpNc) ||
        frameworks.count(Framework::OmpDisKmeans);
    std::vector<CandidateSet> local_sets;
    if (need_local_omp) {
        for (int l = 0; l < L; ++l) {
            local_sets.push_back(local_omp(data.obs.y[l], data.dict.blocks[l], M, K));
            if (frameworks.count(Framework::OmpNc) && !frameworks.count(Framework::ProposedDis) &&
                !frameworks.count(Framework::OmpDisKmeans))
                break;  // non-cooperative only needs gateway 1
        }
    }

    for (Framework fw : frameworks) {
        FrameworkOutcome outcome;
        switch (fw) {
            case Framework::ProposedCen: {
                const CandidateSet sel = centralized_omp(data.obs.y, data.dict, K);
                outcome.estimates = grid_points_of(sel, data.grid);
                outcome.ok = true;
                break;
            }
            case Framework::OmpNc: {
                outcome.estimates = grid_points_of(local_sets[0], data.grid);
                outcome.local_candidates = {local_sets[0]};
                outcome.ok = true;
                break;
            }
            case Framework::ProposedDis: {
                outcome = distributed_outcome(local_sets, cfg, data.grid);
                break;
            }
            case Framework::CosampCen: {
                const CandidateSet sel = centralized_cosamp(data.obs.y, data.dict, K);
                outcome.estimates = grid_points_of(sel, data.grid);
                outcome.ok = true;
                break;
            }
            case Framework::CosampDis: {
                std::vector<CandidateSet> locals;
                for (int l = 0; l < L; ++l)
                    locals.push_back(local_cosamp(data.obs.y[l], data.dict.blocks[l], M, K));
                outcome = distributed_outcome(locals, cfg, data.grid);
                break;
            }
            case Framework::MusicCen:
            case Framework::MusicNc: {
                const int use_l = fw == Framework::MusicNc ? 1 : L;
                const std::vector<Eigen::MatrixXcd> snaps = synthesize_music_snapshots(
                    cfg, data.grid, data.beams, data.placement.targets, data.reflections,
                    trial_index, options.noiseless);
                std::vector<Eigen::MatrixXcd> snaps_used(snaps.begin(), snaps.begin() + use_l);
                std::vector<Eigen::MatrixXcd> steer(use_l);
                std::vector<Position3> gats(cfg.gateways.begin(), cfg.gateways.begin() + use_l);
                const double scale = std::sqrt(static_cast<double>(cfg.gat_array.size()));
                for (int l = 0; l < use_l; ++l)
                    steer[l] = scale * data.beams.gat_grid_beams[l];
                const MusicResult music = music_spectrum(snaps_used, steer, gats, data.grid,
                                                         cfg.grid.spacing_km, K);
                outcome.ok = music.converged;
                if (music.converged) outcome.estimates = grid_points_of(music.peaks, data.grid);
                break;
            }
            case Framework::OmpDisKmeans: {
                RngStream rng = substream(cfg.master_seed, trial_index, Draw::KmeansInit);
                const KmeansClusters km = kmeans_associate(local_sets, data.grid, K, rng);
                outcome.local_candidates = local_sets;
                outcome.estimates = km.centroids;
                outcome.ok = static_cast<int>(km.centroids.size()) == K;
                break;
            }
        }
        if (outcome.ok)
            outcome.mean_error_km = truth_matched_mean_error(outcome.estimates, result.targets);
        result.outcomes[fw] = std::move(outcome);
    }
    return result;
}

std::vector<TrialResult> run_trials(const ScenarioConfig& cfg,
                                    const std::set<Framework>& frameworks, int count, int threads,
                                    const TrialOptions& options) {
    std::vector<TrialResult> results(count);
    if (threads < 1) threads = 1;
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int t = next.fetch_add(1); t < count; t = next.fetch_add(1))
            results[t] = run_trial(cfg, static_cast<std::uint64_t>(t), frameworks, options);
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Targets: return "targets";
        case SweepAxis::Gateways: return "gateways";
        case SweepAxis::Slots: return "slots";
        case SweepAxis::Power: return "power";
    }
    return "?";
}

std::optional<SweepAxis> sweep_axis_from_name(const std::string& name) {
    for (SweepAxis a : {SweepAxis::Targets, SweepAxis::Gateways, SweepAxis::Slots, SweepAxis::Power})
        if (sweep_axis_name(a) == name) return a;
    return std::nullopt;
}

ScenarioConfig apply_axis(const ScenarioConfig& cfg, SweepAxis axis, double value) {
    ScenarioConfig out = cfg;
    switch (axis) {
        case SweepAxis::Targets:
            out.num_targets = static_cast<int>(value);
            break;
        case SweepAxis::Gateways: {
            const int L = static_cast<int>(value);
            if (L < 1 || L > cfg.num_gateways())
                throw std::invalid_argument("gateway sweep value exceeds configured gateways");
            out.gateways.assign(cfg.gateways.begin(), cfg.gateways.begin() + L);
            break;
        }
        case SweepAxis::Slots:
            out.slots = static_cast<int>(value);
            break;
        case SweepAxis::Power:
            out.sensing_power_w = value;
            break;
    }
    out.validate();
    return out;
}

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                            const std::vector<double>& values,
                            const std::set<Framework>& frameworks, int trials, int threads) {
    if (values.empty()) throw std::invalid_argument("sweep requires at least one axis value");
    std::vector<SweepRow> rows;
    for (double value : values) {
        const ScenarioConfig point_cfg = apply_axis(cfg, axis, value);
        const std::vector<TrialResult> results = run_trials(point_cfg, frameworks, trials, threads);

        double power_sum = 0.0;
        int feasible = 0;
        for (const TrialResult& r : results) {
            if (r.power_feasible) {
                power_sum += r.mean_comm_power_w;
                ++feasible;
            }
        }
        for (Framework fw : frameworks) {
            SweepRow row;
            row.axis = sweep_axis_name(axis);
            row.value = value;
            row.framework = fw;
            row.trials = trials;
            row.seed = cfg.master_seed;
            row.feasibility_rate = static_cast<double>(feasible) / trials;
            row.mean_comm_power_w = feasible > 0 ? power_sum / feasible : 0.0;

            double sum = 0.0, sum2 = 0.0;
            int n = 0;
            for (const TrialResult& r : results) {
                const auto it = r.outcomes.find(fw);
                if (it == r.outcomes.end() || !it->second.ok) continue;
                sum += it->second.mean_error_km;
                sum2 += it->second.mean_error_km * it->second.mean_error_km;
                ++n;
            }
            if (n > 0) row.mean_distance_error_km = sum / n;
            if (n > 1) {
                const double var = (sum2 - sum * sum / n) / (n - 1);
                row.stderr_km = std::sqrt(std::max(var, 0.0) / n);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv_header() {
    return "axis,value,framework,mean_distance_error_km,stderr_km,mean_comm_power_w,"
           "feasibility_rate,trials,seed";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << sweep_csv_header() << '\n';
    out << std::setprecision(9);
    for (const SweepRow& r : rows) {
        out << r.axis << ',' << r.value << ',' << framework_name(r.framework) << ','
            << r.mean_distance_error_km << ',' << r.stderr_km << ',' << r.mean_comm_power_w << ','
            << r.feasibility_rate << ',' << r.trials << ',' << r.seed << '\n';
    }
}

}  // namespace isacsim
