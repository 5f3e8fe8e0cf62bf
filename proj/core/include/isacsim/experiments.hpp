#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "isacsim/association.hpp"
#include "isacsim/beamforming.hpp"
#include "isacsim/recovery.hpp"
#include "isacsim/scenario.hpp"
#include "isacsim/signal.hpp"

namespace isacsim {

enum class Framework {
    ProposedCen,
    ProposedDis,
    OmpNc,
    CosampCen,
    CosampDis,
    MusicCen,
    MusicNc,
    OmpDisKmeans,
};

std::string framework_name(Framework fw);
std::optional<Framework> framework_from_name(const std::string& name);
const std::set<Framework>& all_frameworks();

struct TrialOptions {
    bool noiseless = false;
    std::optional<std::vector<Position3>> target_override;
};

/// Everything assembled for one seeded trial, exposed so tests can drive the
/// pipeline stages directly.
struct TrialData {
    std::vector<Position3> grid;
    Placement placement;
    BeamPlan beams;
    SymbolSet symbols;
    PowerSchedule powers;
    ReflectionTensor reflections;
    GridDictionary dict;
    ObservationSet obs;
};

TrialData assemble_trial(const ScenarioConfig& cfg, std::uint64_t trial_index,
                         const TrialOptions& options = {});

/// Per-slot power allocation across the epoch (channels drawn internally).
PowerSchedule solve_power_schedule(const ScenarioConfig& cfg, const BeamPlan& beams,
                                   const Placement& placement, std::uint64_t trial_index);

struct FrameworkOutcome {
    std::vector<Position3> estimates;
    std::vector<CandidateSet> local_candidates;  // distributed pipelines only
    double mean_error_km = 0.0;
    bool ok = false;
};

struct TrialResult {
    std::map<Framework, FrameworkOutcome> outcomes;
    double mean_comm_power_w = 0.0;  // (1/(T I)) sum_t sum_i sum_u p_{i,u}(t)
    bool power_feasible = false;
    double effective_tau = 0.0;      // min over slots
    double grid_bound_km = 0.0;
    std::vector<Position3> targets;
};

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index,
                      const std::set<Framework>& frameworks, const TrialOptions& options = {});

/// Average distance (km) between estimates and truths after the optimal
/// label matching (Hungarian on squared distances).
double truth_matched_mean_error(const std::vector<Position3>& estimates,
                                const std::vector<Position3>& truths);

enum class SweepAxis { Targets, Gateways, Slots, Power };

std::string sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> sweep_axis_from_name(const std::string& name);

struct SweepRow {
    std::string axis;
    double value = 0.0;
    Framework framework{};
    double mean_distance_error_km = 0.0;
    double stderr_km = 0.0;
    double mean_comm_power_w = 0.0;
    double feasibility_rate = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

/// Mean +/- standard error per (axis value, framework) over seeded trials.
/// Trials run on a pool of `threads` workers; aggregation is a deterministic
/// reduction ordered by trial index.
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, SweepAxis axis,
                            const std::vector<double>& values,
                            const std::set<Framework>& frameworks, int trials, int threads);

/// Apply one axis value to a config (what the sweep does per grid column).
ScenarioConfig apply_axis(const ScenarioConfig& cfg, SweepAxis axis, double value);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweep_csv_header();

/// Run `count` trials (parallel) and return results ordered by trial index.
std::vector<TrialResult> run_trials(const ScenarioConfig& cfg, const std::set<Framework>& frameworks,
                                    int count, int threads, const TrialOptions& options = {});

}  // namespace isacsim
