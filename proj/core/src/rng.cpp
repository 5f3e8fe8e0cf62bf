#include "isacsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace isacsim {

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::complex<double> RngStream::complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = s * normal();
    const double im = s * normal();
    return {re, im};
}

std::complex<double> RngStream::unit_symbol() {
    return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
}

}  // namespace isacsim
