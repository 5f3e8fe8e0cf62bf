#include "isacsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isacsim {

std::vector<Position3> build_grid(const GridSpec& spec) {
    if (spec.spacing_km <= 0.0) throw std::invalid_argument("grid spacing must be positive");
    const double r = spec.diameter_km / 2.0;
    const double r2 = r * r + 1e-9;  // absorb FP noise on boundary lattice points
    const int span = static_cast<int>(std::floor(r / spec.spacing_km)) + 1;

    std::vector<Position3> grid;
    for (double alt : spec.altitudes_km) {
        for (int iy = -span; iy <= span; ++iy) {
            for (int ix = -span; ix <= span; ++ix) {
                const double x = ix * spec.spacing_km;
                const double y = iy * spec.spacing_km;
                if (x * x + y * y <= r2) {
                    grid.push_back({spec.center_x_km + x, spec.center_y_km + y, alt});
                }
            }
        }
    }
    return grid;
}

void ScenarioConfig::validate() const {
    if (satellites.empty()) throw std::invalid_argument("at least one satellite required");
    if (gateways.empty()) throw std::invalid_argument("at least one gateway required");
    if (ues_per_satellite < 0) throw std::invalid_argument("ues_per_satellite must be >= 0");
    if (num_targets < 1) throw std::invalid_argument("num_targets must be >= 1");
    if (sat_array.nx < 1 || sat_array.ny < 1 || gat_array.nx < 1 || gat_array.ny < 1)
        throw std::invalid_argument("array sizes must be >= 1 per axis");
    if (link.wavelength_m <= 0.0) throw std::invalid_argument("wavelength must be positive");
    if (link.tx_gain_sat <= 0.0 || link.rx_gain_ue <= 0.0 || link.rx_gain_gat <= 0.0 ||
        link.rician_kappa <= 0.0)
        throw std::invalid_argument("link gains and rician kappa must be positive");
    if (rcs_m2 <= 0.0) throw std::invalid_argument("rcs must be positive");
    if (tau_c <= 0.0) throw std::invalid_argument("tau_c must be positive");
    if (sensing_power_w <= 0.0) throw std::invalid_argument("sensing power must be positive");
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("bandwidth must be positive");
    if (grid.spacing_km <= 0.0) throw std::invalid_argument("grid spacing must be positive");
    if (grid.altitudes_km.empty()) throw std::invalid_argument("grid needs at least one altitude");
    if (slots < 0) throw std::invalid_argument("slots must be >= 0");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (target_altitude_max_km < target_altitude_min_km)
        throw std::invalid_argument("target altitude range inverted");
    for (const Position3& s : satellites) {
        if (s.z <= target_altitude_max_km)
            throw std::invalid_argument("satellites must sit above the target altitude band");
    }
}

ScenarioConfig full_profile() {
    ScenarioConfig cfg;
    cfg.link.rx_gain_ue = std::pow(10.0, -0.55);  // -5.5 dBi
    cfg.sensing_power_w = 1.0;
    cfg.trials = 1000;
    return cfg;
}

ScenarioConfig desk_profile() {
    ScenarioConfig cfg = full_profile();
    cfg.sat_array = {8, 8};
    cfg.gat_array = {8, 8};
    cfg.grid.spacing_km = 2.0;  // 21 lattice points per layer, M = 84
    cfg.trials = 100;
    // 8x8 arrays have ~21 dB less two-way beamforming gain than the full-scale
    // 26x26 / 32x32 pair; keep the echo SNR in a comparable regime.
    cfg.sensing_power_w = 500.0;
    return cfg;
}

namespace {

Position3 draw_on_disc(RngStream& rng, double cx, double cy, double radius_km, double z_km) {
    const double r = radius_km * std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    return {cx + r * std::cos(a), cy + r * std::sin(a), z_km};
}

}  // namespace

Placement place_nodes(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    constexpr int kMaxAttempts = 100000;
    Placement out;
    out.ues.resize(cfg.satellites.size());

    for (std::size_t i = 0; i < cfg.satellites.size(); ++i) {
        RngStream rng = substream(cfg.master_seed, trial_index, Draw::UePlacement, i);
        const double radius = cfg.ue_disc_diameter_km / 2.0;
        std::vector<Position3>& ues = out.ues[i];
        int attempts = 0;
        while (static_cast<int>(ues.size()) < cfg.ues_per_satellite) {
            if (++attempts > kMaxAttempts)
                throw std::runtime_error("UE placement rejection sampling exhausted; "
                                         "disc too crowded for the minimum spacing");
            Position3 cand =
                draw_on_disc(rng, cfg.satellites[i].x, cfg.satellites[i].y, radius, 0.0);
            const bool ok = std::all_of(ues.begin(), ues.end(), [&](const Position3& p) {
                return distance_km(cand, p) >= cfg.min_ue_spacing_km;
            });
            if (ok) ues.push_back(cand);
        }
    }

    RngStream rng = substream(cfg.master_seed, trial_index, Draw::TargetPlacement);
    const double tradius = cfg.target_disc_diameter_km / 2.0;
    for (int k = 0; k < cfg.num_targets; ++k) {
        Position3 p = draw_on_disc(rng, 0.0, 0.0, tradius, 0.0);
        p.z = rng.uniform(cfg.target_altitude_min_km, cfg.target_altitude_max_km);
        out.targets.push_back(p);
    }
    return out;
}

double grid_bound(const std::vector<Position3>& targets, const std::vector<Position3>& grid) {
    if (grid.empty()) throw std::invalid_argument("grid_bound requires a nonempty grid");
    double total = 0.0;
    for (const Position3& t : targets) {
        double best = std::numeric_limits<double>::infinity();
        for (const Position3& g : grid) best = std::min(best, distance_km(t, g));
        total += best;
    }
    return targets.empty() ? 0.0 : total / static_cast<double>(targets.size());
}

}  // namespace isacsim
