#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "isacsim/beamforming.hpp"
#include "isacsim/scenario.hpp"

namespace isacsim {

/// Unit-modulus random-phase symbols: one sensing stream per satellite and one
/// communication stream per (satellite, user), fresh per slot.
struct SymbolSet {
    std::vector<Eigen::VectorXcd> sensing;  // [i], length T
    std::vector<Eigen::MatrixXcd> comm;     // [i], U_i x T
};

SymbolSet draw_symbols(std::uint64_t master_seed, std::uint64_t trial, int num_satellites,
                       int ues_per_satellite, int num_slots);

/// Per-slot power allocation over the whole epoch.
struct PowerSchedule {
    Eigen::MatrixXd comm_power;  // U x T, row g = i*U_per + u
    std::vector<PowerAllocation> per_slot;
    bool all_feasible = true;
    double min_effective_tau = 0.0;
};

/// Reflection coefficients rho[i][k][l], drawn once per trial and held fixed
/// over the T-slot epoch (scan-to-scan fluctuation).
using ReflectionTensor = std::vector<std::vector<std::vector<std::complex<double>>>>;

ReflectionTensor draw_reflections(const ScenarioConfig& cfg, std::uint64_t trial, int num_targets);

/// Transmitted ISAC vector of satellite i at slot t:
/// sqrt(P^r_i) f^r_i(t) s^r_i(t) + sum_u sqrt(p^c_{i,u}(t)) f^c_{i,u} s^c_{i,u}(t).
Eigen::VectorXcd synthesize_tx(const BeamPlan& beams, const SymbolSet& symbols,
                               const PowerSchedule& powers, int ues_per_satellite, int i, int t);

/// Combined observation sequences y_l plus the post-combining noise variance.
struct ObservationSet {
    std::vector<Eigen::VectorXcd> y;  // [l], length T
    double noise_variance_w = 0.0;    // zeta^2 (unit-norm combiner preserves it)
};

/// Per-gateway grid dictionary blocks; the stacked matrix is block-diagonal
/// over gateways and its structural zeros are never materialized.
struct GridDictionary {
    std::vector<Eigen::MatrixXcd> blocks;  // [l]: T x (M*I), column i*M + m
    int num_grid_points = 0;               // M
    int num_satellites = 0;                // I
    int num_slots = 0;                     // T
};

/// Echo observation of every gateway over the epoch. `noiseless` skips the
/// additive noise draw (the streams consumed stay identical either way).
ObservationSet synthesize_observations(const ScenarioConfig& cfg, const BeamPlan& beams,
                                       const SymbolSet& symbols, const PowerSchedule& powers,
                                       const std::vector<Position3>& targets,
                                       const ReflectionTensor& reflections, std::uint64_t trial,
                                       bool noiseless);

/// Grid dictionary built from the same beam plan, powers, and symbol
/// realizations as the transmitted waveform (the waveform is known network-wide).
GridDictionary build_dictionary(const ScenarioConfig& cfg, const std::vector<Position3>& grid,
                                const BeamPlan& beams, const SymbolSet& symbols,
                                const PowerSchedule& powers);

/// Un-combined antenna snapshots for the subspace baseline: satellite 0 alone
/// transmits the sensing waveform at power P^r * I over 10*M slots.
std::vector<Eigen::MatrixXcd> synthesize_music_snapshots(const ScenarioConfig& cfg,
                                                         const std::vector<Position3>& grid,
                                                         const BeamPlan& beams,
                                                         const std::vector<Position3>& targets,
                                                         const ReflectionTensor& reflections,
                                                         std::uint64_t trial, bool noiseless);

/// Debug dumps: 32-byte header (magic, T, M, I, L, payload count) followed by
/// little-endian interleaved re/im 64-bit floats.
void dump_observations(const std::string& path, const ObservationSet& obs, int num_grid_points,
                       int num_satellites);
void dump_dictionary(const std::string& path, const GridDictionary& dict);

struct DumpHeader {
    char magic[8];
    std::uint32_t slots;
    std::uint32_t grid_points;
    std::uint32_t satellites;
    std::uint32_t gateways;
    std::uint64_t payload_complex_count;
};
static_assert(sizeof(DumpHeader) == 32, "dump header must be exactly 32 bytes");

DumpHeader read_dump_header(const std::string& path);
std::vector<std::complex<double>> read_dump_payload(const std::string& path);

}  // namespace isacsim
