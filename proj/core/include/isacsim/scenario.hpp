#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "isacsim/channel.hpp"
#include "isacsim/geometry.hpp"

namespace isacsim {

/// Cylindrical search lattice: square lattice points inside a disc, replicated
/// at each altitude level.
struct GridSpec {
    double center_x_km = 0.0;
    double center_y_km = 0.0;
    double diameter_km = 10.0;
    double spacing_km = 1.0;
    std::vector<double> altitudes_km = {17.0, 18.0, 19.0, 20.0};
};

/// All lattice points (x, y) with x^2 + y^2 <= (diameter/2)^2, one copy per
/// altitude level. Ordering: altitude-major, then y, then x (ascending).
std::vector<Position3> build_grid(const GridSpec& spec);

/// Every physical constant, node position, array size, and threshold of the
/// simulated network in one record. Derived quantities (grid, noise variance)
/// are computed on demand.
struct ScenarioConfig {
    std::vector<Position3> satellites = {{50.0, 50.0, 600.0}, {-50.0, -50.0, 600.0}};
    std::vector<Position3> gateways = {{1.0, 1.0, 0.0}, {1.0, -1.0, 0.0},
                                       {-1.0, 1.0, 0.0}, {-1.0, -1.0, 0.0}};
    int ues_per_satellite = 5;
    int num_targets = 3;

    UpaGeometry sat_array{26, 26};
    UpaGeometry gat_array{32, 32};
    LinkBudget link{};

    double rcs_m2 = 10.0;                  // gamma, linear (from dBsm)
    double min_reflection_magnitude = 3.0; // targets below this echo floor are resampled
    double tau_c = 0.1;                    // communication SINR threshold, linear
    double sensing_power_w = 1.0;          // P^r_i, shared by all satellites
    double noise_psd_dbm_per_hz = -174.0;  // N0
    double bandwidth_hz = 5e6;             // B

    GridSpec grid;
    int slots = 0;  // 0 means T = M

    double ue_disc_diameter_km = 50.0;
    double min_ue_spacing_km = 10.0;
    double target_disc_diameter_km = 10.0;
    double target_altitude_min_km = 17.0;
    double target_altitude_max_km = 20.0;

    int trials = 100;
    std::uint64_t master_seed = 1;

    int num_satellites() const { return static_cast<int>(satellites.size()); }
    int num_gateways() const { return static_cast<int>(gateways.size()); }
    int total_ues() const { return num_satellites() * ues_per_satellite; }

    /// sigma^2 = zeta^2 = N0 * B in watts.
    double noise_variance_w() const {
        return std::pow(10.0, noise_psd_dbm_per_hz / 10.0) * 1e-3 * bandwidth_hz;
    }

    int num_slots_or_default(int grid_points) const { return slots > 0 ? slots : grid_points; }

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// Table-default full-scale profile (26x26 / 32x32 arrays, 1 km grid, M = 324).
ScenarioConfig full_profile();

/// CI-scale profile: 8x8 arrays, 2 km grid (M = 84), T = M, boosted sensing
/// power to keep echo SNR comparable to the full-scale arrays.
ScenarioConfig desk_profile();

struct Placement {
    std::vector<std::vector<Position3>> ues;  // [satellite][u]
    std::vector<Position3> targets;           // [k]
};

/// UEs uniform on the ground disc under each satellite with a minimum pairwise
/// spacing (rejection sampling); targets uniform on the sensing disc with
/// uniform altitude. Deterministic given (config seed, trial index).
Placement place_nodes(const ScenarioConfig& cfg, std::uint64_t trial_index);

/// Mean over targets of the distance to the nearest grid point.
double grid_bound(const std::vector<Position3>& targets, const std::vector<Position3>& grid);

}  // namespace isacsim
