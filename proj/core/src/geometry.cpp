#include "isacsim/geometry.hpp"

#include <cassert>
#include <numbers>

namespace isacsim {

Direction downlook_direction(const Position3& from, const Position3& to) {
    assert(from.z > to.z && "downlook requires the source strictly above the target");
    const Position3 d = from - to;
    const double rh = std::hypot(d.x, d.y);
    // Two-argument arctangent keeps the (cos az, sin az) pair continuous at dy = 0.
    const double az = (rh == 0.0) ? 0.0 : std::atan2(-d.x, d.y);
    const double el = std::atan2(rh, d.z);
    return {az, el, LookConvention::Downlook};
}

Direction uplook_direction(const Position3& gateway, const Position3& target) {
    assert(target.z > gateway.z && "uplook requires the target strictly above the gateway");
    const Position3 d = gateway - target;  // d.z < 0
    const double rh = std::hypot(d.x, d.y);
    const double az = (rh == 0.0) ? 0.0 : std::atan2(-d.x, d.y);
    const double el = std::atan2(rh, -d.z);
    return {az, el, LookConvention::Uplook};
}

Eigen::VectorXcd steering_vector(const UpaGeometry& geom, const Direction& dir) {
    const double pu = std::numbers::pi * dir.u();
    const double pv = std::numbers::pi * dir.v();
    Eigen::VectorXcd out(geom.size());
    for (int a = 0; a < geom.nx; ++a) {
        const std::complex<double> px = std::polar(1.0, -pu * a);
        for (int b = 0; b < geom.ny; ++b) {
            out[a * geom.ny + b] = px * std::polar(1.0, -pv * b);
        }
    }
    return out;
}

double crosstalk(const UpaGeometry& geom, const Direction& dir1, const Direction& dir2) {
    const Eigen::VectorXcd v1 = steering_vector(geom, dir1);
    const Eigen::VectorXcd v2 = steering_vector(geom, dir2);
    const double ip = std::abs(v1.dot(v2));  // Eigen dot conjugates the left argument
    return ip * ip / static_cast<double>(geom.size());
}

namespace {

// sin(pi*n*d/2) / sin(pi*d/2), with the limit n at the removable singularities.
double dirichlet_factor(int n, double d) {
    const double den = std::sin(0.5 * std::numbers::pi * d);
    if (std::abs(den) < 1e-14) return static_cast<double>(n);
    return std::sin(0.5 * std::numbers::pi * n * d) / den;
}

}  // namespace

double crosstalk_closed_form(const UpaGeometry& geom, double delta_x, double delta_y) {
    const double f = dirichlet_factor(geom.nx, delta_x) * dirichlet_factor(geom.ny, delta_y);
    return f * f / static_cast<double>(geom.size());
}

double crosstalk_closed_form(const UpaGeometry& geom, const Direction& dir1, const Direction& dir2) {
    return crosstalk_closed_form(geom, dir1.u() - dir2.u(), dir1.v() - dir2.v());
}

}  // namespace isacsim
