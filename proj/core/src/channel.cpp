#include "isacsim/channel.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace isacsim {

double comm_los_amplitude(const LinkBudget& budget, double distance_m) {
    return budget.wavelength_m * std::sqrt(budget.tx_gain_sat * budget.rx_gain_ue) /
           (4.0 * std::numbers::pi * distance_m);
}

Eigen::VectorXcd comm_channel_los(const LinkBudget& budget, const UpaGeometry& sat_array,
                                  const Position3& sat, const Position3& ue) {
    const double d_m = distance_m(sat, ue);
    const Direction dir = downlook_direction(sat, ue);
    const std::complex<double> phase =
        std::polar(1.0, -2.0 * std::numbers::pi * d_m / budget.wavelength_m);
    return comm_los_amplitude(budget, d_m) * phase * steering_vector(sat_array, dir);
}

Eigen::VectorXcd draw_comm_channel(RngStream& rng, const LinkBudget& budget,
                                   const UpaGeometry& sat_array, const Position3& sat,
                                   const Position3& ue) {
    const double d_m = distance_m(sat, ue);
    const double amp = comm_los_amplitude(budget, d_m);
    const double kappa = budget.rician_kappa;
    const std::complex<double> phase =
        std::polar(1.0, -2.0 * std::numbers::pi * d_m / budget.wavelength_m);
    const Eigen::VectorXcd los = phase * steering_vector(sat_array, downlook_direction(sat, ue));

    const double w_los = std::sqrt(kappa / (1.0 + kappa));
    const double w_nlos = std::sqrt(1.0 / (1.0 + kappa));
    Eigen::VectorXcd h(sat_array.size());
    for (int n = 0; n < sat_array.size(); ++n) {
        h[n] = amp * (w_los * los[n] + w_nlos * rng.complex_normal(1.0));
    }
    return h;
}

std::complex<double> draw_reflection_raw(RngStream& rng, double rcs_m2) {
    assert(rcs_m2 > 0.0);
    return rng.complex_normal(rcs_m2);
}

std::complex<double> draw_reflection(RngStream& rng, double rcs_m2, double min_magnitude) {
    std::complex<double> rho = draw_reflection_raw(rng, rcs_m2);
    while (std::abs(rho) < min_magnitude) rho = draw_reflection_raw(rng, rcs_m2);
    return rho;
}

std::complex<double> bistatic_gain_from_distances(const LinkBudget& budget, double d_gat_m,
                                                  double d_sat_m) {
    assert(d_gat_m > 0.0 && d_sat_m > 0.0);
    const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    const double amp = std::sqrt(budget.wavelength_m * budget.wavelength_m * budget.rx_gain_gat *
                                 budget.tx_gain_sat / (64.0 * pi3 * d_gat_m * d_gat_m * d_sat_m * d_sat_m));
    return amp * std::polar(1.0, -2.0 * std::numbers::pi * (d_gat_m + d_sat_m) / budget.wavelength_m);
}

std::complex<double> bistatic_gain(const LinkBudget& budget, const Position3& sat,
                                   const Position3& point, const Position3& gateway) {
    return bistatic_gain_from_distances(budget, distance_m(gateway, point), distance_m(sat, point));
}

}  // namespace isacsim
