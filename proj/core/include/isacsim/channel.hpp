#pragma once

#include <Eigen/Dense>
#include <complex>

#include "isacsim/geometry.hpp"
#include "isacsim/rng.hpp"

namespace isacsim {

/// Link-budget constants. Gains and the Rician factor are stored as linear
/// power ratios (parsed from dBi / dB / dBsm at the config boundary).
struct LinkBudget {
    double wavelength_m = 0.15;
    double tx_gain_sat = 1e3;     // A^sat_Tx
    double rx_gain_ue = 0.2818;   // A^ue_Rx
    double rx_gain_gat = 1e3;     // A^gat_Rx
    double rician_kappa = 1e3;    // kappa
};

/// Free-space LoS amplitude per antenna element for the satellite-UE link.
/// Distances enter in meters; positions are stored in km.
double comm_los_amplitude(const LinkBudget& budget, double distance_m);

/// Deterministic LoS component: amplitude * e^{-j 2 pi d / lambda} * steering.
Eigen::VectorXcd comm_channel_los(const LinkBudget& budget, const UpaGeometry& sat_array,
                                  const Position3& sat, const Position3& ue);

/// One Rician fading realization for a single slot. The NLoS part consumes
/// 2*N normal draws from `rng` in element order.
Eigen::VectorXcd draw_comm_channel(RngStream& rng, const LinkBudget& budget,
                                   const UpaGeometry& sat_array, const Position3& sat,
                                   const Position3& ue);

/// One Swerling-I reflection coefficient ~ CN(0, rcs_m2), without the
/// magnitude floor. Exposed separately so the raw distribution is testable.
std::complex<double> draw_reflection_raw(RngStream& rng, double rcs_m2);

/// Swerling-I coefficient redrawn until |rho| >= min_magnitude. Held constant
/// over the sensing epoch by the caller.
std::complex<double> draw_reflection(RngStream& rng, double rcs_m2, double min_magnitude);

/// Deterministic bistatic two-hop gain (no reflection coefficient, no beams):
/// amplitude sqrt(lambda^2 A_gat A_sat / (64 pi^3 d_gat^2 d_sat^2)) and phase
/// -2 pi (d_gat + d_sat) / lambda. Used for true targets and grid points alike.
std::complex<double> bistatic_gain_from_distances(const LinkBudget& budget, double d_gat_m,
                                                  double d_sat_m);
std::complex<double> bistatic_gain(const LinkBudget& budget, const Position3& sat,
                                   const Position3& point, const Position3& gateway);

}  // namespace isacsim
