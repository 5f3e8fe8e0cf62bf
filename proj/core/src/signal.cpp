#include "isacsim/signal.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace isacsim {

SymbolSet draw_symbols(std::uint64_t master_seed, std::uint64_t trial, int num_satellites,
                       int ues_per_satellite, int num_slots) {
    SymbolSet s;
    s.sensing.resize(num_satellites);
    s.comm.resize(num_satellites);
    for (int i = 0; i < num_satellites; ++i) {
        s.sensing[i].resize(num_slots);
        for (int t = 0; t < num_slots; ++t) {
            RngStream rng = substream(master_seed, trial, Draw::SensingSymbol, i, t);
            s.sensing[i][t] = rng.unit_symbol();
        }
        s.comm[i].resize(ues_per_satellite, num_slots);
        for (int u = 0; u < ues_per_satellite; ++u) {
            for (int t = 0; t < num_slots; ++t) {
                RngStream rng = substream(master_seed, trial, Draw::CommSymbol, i, u, t);
                s.comm[i](u, t) = rng.unit_symbol();
            }
        }
    }
    return s;
}

ReflectionTensor draw_reflections(const ScenarioConfig& cfg, std::uint64_t trial,
                                  int num_targets) {
    const int I = cfg.num_satellites();
    const int L = cfg.num_gateways();
    ReflectionTensor rho(I);
    for (int i = 0; i < I; ++i) {
        rho[i].resize(num_targets);
        for (int k = 0; k < num_targets; ++k) {
            rho[i][k].resize(L);
            for (int l = 0; l < L; ++l) {
                RngStream rng = substream(cfg.master_seed, trial, Draw::Reflection, i, k, l);
                rho[i][k][l] = draw_reflection(rng, cfg.rcs_m2, cfg.min_reflection_magnitude);
            }
        }
    }
    return rho;
}

Eigen::VectorXcd synthesize_tx(const BeamPlan& beams, const SymbolSet& symbols,
                               const PowerSchedule& powers, int ues_per_satellite, int i, int t) {
    Eigen::VectorXcd x = std::sqrt(beams.sensing_power_w[i]) * symbols.sensing[i][t] *
                         beams.sensing_beam(i, t);
    for (int u = 0; u < ues_per_satellite; ++u) {
        const double p = powers.comm_power(i * ues_per_satellite + u, t);
        x += std::sqrt(p) * symbols.comm[i](u, t) * beams.comm_beams[i].col(u);
    }
    return x;
}

namespace {

// (v^sat_point)^H x_i(t) for all points at once, given the point-vs-grid-beam
// and point-vs-comm-beam inner product tables (rows = points).
Eigen::MatrixXcd sat_side_products(const Eigen::MatrixXcd& point_grid,  // P x M
                                   const Eigen::MatrixXcd& point_comm,  // P x U_i
                                   const BeamPlan& beams, const SymbolSet& symbols,
                                   const PowerSchedule& powers, int ues_per_satellite, int i) {
    const int T = beams.num_slots;
    const int P = static_cast<int>(point_grid.rows());
    const double proot = std::sqrt(beams.sensing_power_w[i]);
    Eigen::MatrixXcd out(P, T);
    for (int t = 0; t < T; ++t) {
        Eigen::VectorXcd col = proot * symbols.sensing[i][t] * point_grid.col(beams.psi[t]);
        for (int u = 0; u < ues_per_satellite; ++u) {
            const double p = powers.comm_power(i * ues_per_satellite + u, t);
            col += std::sqrt(p) * symbols.comm[i](u, t) * point_comm.col(u);
        }
        out.col(t) = col;
    }
    return out;
}

}  // namespace

ObservationSet synthesize_observations(const ScenarioConfig& cfg, const BeamPlan& beams,
                                       const SymbolSet& symbols, const PowerSchedule& powers,
                                       const std::vector<Position3>& targets,
                                       const ReflectionTensor& reflections, std::uint64_t trial,
                                       bool noiseless) {
    const int I = cfg.num_satellites();
    const int L = cfg.num_gateways();
    const int K = static_cast<int>(targets.size());
    const int T = beams.num_slots;
    const double zeta2 = cfg.noise_variance_w();

    // Unnormalized steering toward the true targets.
    std::vector<Eigen::MatrixXcd> sat_tar(I);   // [i]: N_sat x K
    std::vector<Eigen::MatrixXcd> gat_tar(L);   // [l]: N_gat x K
    for (int i = 0; i < I; ++i) {
        sat_tar[i].resize(cfg.sat_array.size(), K);
        for (int k = 0; k < K; ++k)
            sat_tar[i].col(k) =
                steering_vector(cfg.sat_array, downlook_direction(cfg.satellites[i], targets[k]));
    }
    for (int l = 0; l < L; ++l) {
        gat_tar[l].resize(cfg.gat_array.size(), K);
        for (int k = 0; k < K; ++k)
            gat_tar[l].col(k) =
                steering_vector(cfg.gat_array, uplook_direction(cfg.gateways[l], targets[k]));
    }

    // (v^sat-tar_{i,k})^H x_i(t), K x T per satellite.
    std::vector<Eigen::MatrixXcd> tx_products(I);
    for (int i = 0; i < I; ++i) {
        const Eigen::MatrixXcd tar_grid = sat_tar[i].adjoint() * beams.sat_grid_beams[i];  // K x M
        const Eigen::MatrixXcd tar_comm = sat_tar[i].adjoint() * beams.comm_beams[i];      // K x U
        tx_products[i] =
            sat_side_products(tar_grid, tar_comm, beams, symbols, powers, cfg.ues_per_satellite, i);
    }

    ObservationSet obs;
    obs.noise_variance_w = zeta2;
    obs.y.resize(L);
    for (int l = 0; l < L; ++l) {
        const Eigen::MatrixXcd combine = beams.gat_grid_beams[l].adjoint() * gat_tar[l];  // M x K
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(T);
        for (int t = 0; t < T; ++t) {
            std::complex<double> acc = 0.0;
            for (int k = 0; k < K; ++k) {
                const std::complex<double> w_side = combine(beams.psi[t], k);
                for (int i = 0; i < I; ++i) {
                    const std::complex<double> gain = bistatic_gain(
                        cfg.link, cfg.satellites[i], targets[k], cfg.gateways[l]);
                    acc += reflections[i][k][l] * gain * w_side * tx_products[i](k, t);
                }
            }
            y[t] = acc;
        }
        if (!noiseless) {
            for (int t = 0; t < T; ++t) {
                RngStream rng = substream(cfg.master_seed, trial, Draw::GatewayNoise, l, t);
                y[t] += rng.complex_normal(zeta2);  // unit-norm combiner keeps zeta^2
            }
        }
        obs.y[l] = std::move(y);
    }
    return obs;
}

GridDictionary build_dictionary(const ScenarioConfig& cfg, const std::vector<Position3>& grid,
                                const BeamPlan& beams, const SymbolSet& symbols,
                                const PowerSchedule& powers) {
    const int I = cfg.num_satellites();
    const int L = cfg.num_gateways();
    const int M = static_cast<int>(grid.size());
    const int T = beams.num_slots;
    const double sat_scale = std::sqrt(static_cast<double>(cfg.sat_array.size()));
    const double gat_scale = std::sqrt(static_cast<double>(cfg.gat_array.size()));

    // (v^sat-grid_{i,m})^H x_i(t): scale the beam-vs-beam Gram back to steering.
    std::vector<Eigen::MatrixXcd> tx_products(I);  // [i]: M x T
    for (int i = 0; i < I; ++i) {
        const Eigen::MatrixXcd grid_grid =
            sat_scale * (beams.sat_grid_beams[i].adjoint() * beams.sat_grid_beams[i]);  // M x M
        const Eigen::MatrixXcd grid_comm =
            sat_scale * (beams.sat_grid_beams[i].adjoint() * beams.comm_beams[i]);      // M x U
        tx_products[i] =
            sat_side_products(grid_grid, grid_comm, beams, symbols, powers, cfg.ues_per_satellite, i);
    }

    GridDictionary dict;
    dict.num_grid_points = M;
    dict.num_satellites = I;
    dict.num_slots = T;
    dict.blocks.resize(L);
    for (int l = 0; l < L; ++l) {
        // w_l(t)^H v^gat-grid_{l,m} = gat_scale * (beam Gram)(psi(t), m)
        const Eigen::MatrixXcd w_side =
            gat_scale * (beams.gat_grid_beams[l].adjoint() * beams.gat_grid_beams[l]);  // M x M
        Eigen::MatrixXcd block(T, M * I);
        for (int i = 0; i < I; ++i) {
            Eigen::VectorXcd gains(M);
            for (int m = 0; m < M; ++m)
                gains[m] = bistatic_gain(cfg.link, cfg.satellites[i], grid[m], cfg.gateways[l]);
            for (int t = 0; t < T; ++t) {
                const int pt = beams.psi[t];
                for (int m = 0; m < M; ++m) {
                    block(t, i * M + m) = gains[m] * w_side(pt, m) * tx_products[i](m, t);
                }
            }
        }
        dict.blocks[l] = std::move(block);
    }
    return dict;
}

std::vector<Eigen::MatrixXcd> synthesize_music_snapshots(const ScenarioConfig& cfg,
                                                         const std::vector<Position3>& grid,
                                                         const BeamPlan& beams,
                                                         const std::vector<Position3>& targets,
                                                         const ReflectionTensor& reflections,
                                                         std::uint64_t trial, bool noiseless) {
    const int L = cfg.num_gateways();
    const int K = static_cast<int>(targets.size());
    const int M = static_cast<int>(grid.size());
    const int S = 10 * M;
    const int N = cfg.gat_array.size();
    const double zeta2 = cfg.noise_variance_w();
    // Single transmitting satellite compensated by the full network's sensing power.
    const double power = beams.sensing_power_w[0] * static_cast<double>(cfg.num_satellites());

    Eigen::MatrixXcd sat_tar(cfg.sat_array.size(), K);
    for (int k = 0; k < K; ++k)
        sat_tar.col(k) =
            steering_vector(cfg.sat_array, downlook_direction(cfg.satellites[0], targets[k]));
    const Eigen::MatrixXcd tar_grid = sat_tar.adjoint() * beams.sat_grid_beams[0];  // K x M

    Eigen::VectorXcd symbols(S);
    for (int t = 0; t < S; ++t) {
        RngStream rng = substream(cfg.master_seed, trial, Draw::SensingSymbol, 0, t);
        symbols[t] = rng.unit_symbol();
    }

    std::vector<Eigen::MatrixXcd> snaps(L);
    for (int l = 0; l < L; ++l) {
        Eigen::MatrixXcd gat_tar(N, K);
        Eigen::VectorXcd amp(K);
        for (int k = 0; k < K; ++k) {
            gat_tar.col(k) =
                steering_vector(cfg.gat_array, uplook_direction(cfg.gateways[l], targets[k]));
            amp[k] = reflections[0][k][l] *
                     bistatic_gain(cfg.link, cfg.satellites[0], targets[k], cfg.gateways[l]);
        }
        Eigen::MatrixXcd z(N, S);
        for (int t = 0; t < S; ++t) {
            const int pt = t % M;
            Eigen::VectorXcd col = Eigen::VectorXcd::Zero(N);
            for (int k = 0; k < K; ++k) {
                const std::complex<double> s =
                    amp[k] * std::sqrt(power) * symbols[t] * tar_grid(k, pt);
                col += s * gat_tar.col(k);
            }
            z.col(t) = col;
        }
        if (!noiseless) {
            for (int t = 0; t < S; ++t) {
                RngStream rng = substream(cfg.master_seed, trial, Draw::MusicNoise, l, t);
                for (int n = 0; n < N; ++n) z(n, t) += rng.complex_normal(zeta2);
            }
        }
        snaps[l] = std::move(z);
    }
    return snaps;
}

namespace {

void write_dump(const std::string& path, const DumpHeader& header,
                const std::vector<const Eigen::MatrixXcd*>& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open dump file for writing: " + path);
    out.write(reinterpret_cast<const char*>(&header), sizeof(header));
    for (const Eigen::MatrixXcd* m : payload) {
        out.write(reinterpret_cast<const char*>(m->data()),
                  static_cast<std::streamsize>(sizeof(std::complex<double>) * m->size()));
    }
    if (!out) throw std::runtime_error("dump write failed: " + path);
}

DumpHeader make_header(int T, int M, int I, int L, std::uint64_t count) {
    DumpHeader h{};
    std::memcpy(h.magic, "ISACDMP1", 8);
    h.slots = static_cast<std::uint32_t>(T);
    h.grid_points = static_cast<std::uint32_t>(M);
    h.satellites = static_cast<std::uint32_t>(I);
    h.gateways = static_cast<std::uint32_t>(L);
    h.payload_complex_count = count;
    return h;
}

}  // namespace

void dump_observations(const std::string& path, const ObservationSet& obs, int num_grid_points,
                       int num_satellites) {
    const int L = static_cast<int>(obs.y.size());
    const int T = L > 0 ? static_cast<int>(obs.y[0].size()) : 0;
    std::vector<Eigen::MatrixXcd> cols(L);
    std::vector<const Eigen::MatrixXcd*> refs;
    for (int l = 0; l < L; ++l) {
        cols[l] = obs.y[l];
        refs.push_back(&cols[l]);
    }
    write_dump(path, make_header(T, num_grid_points, num_satellites, L,
                                 static_cast<std::uint64_t>(L) * T),
               refs);
}

void dump_dictionary(const std::string& path, const GridDictionary& dict) {
    std::uint64_t count = 0;
    std::vector<const Eigen::MatrixXcd*> refs;
    for (const auto& b : dict.blocks) {
        count += static_cast<std::uint64_t>(b.size());
        refs.push_back(&b);
    }
    write_dump(path,
               make_header(dict.num_slots, dict.num_grid_points, dict.num_satellites,
                           static_cast<int>(dict.blocks.size()), count),
               refs);
}

DumpHeader read_dump_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dump file: " + path);
    DumpHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::memcmp(h.magic, "ISACDMP1", 8) != 0)
        throw std::runtime_error("bad dump header: " + path);
    return h;
}

std::vector<std::complex<double>> read_dump_payload(const std::string& path) {
    const DumpHeader h = read_dump_header(path);
    std::ifstream in(path, std::ios::binary);
    in.seekg(sizeof(DumpHeader));
    std::vector<std::complex<double>> data(h.payload_complex_count);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(sizeof(std::complex<double>) * data.size()));
    if (!in) throw std::runtime_error("truncated dump payload: " + path);
    return data;
}

}  // namespace isacsim
