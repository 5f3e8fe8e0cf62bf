#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace isacsim {

/// 3D position in kilometers.
struct Position3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Position3 operator-(const Position3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Position3 operator+(const Position3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Position3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Eigen::Vector3d vec() const { return {x, y, z}; }
    static Position3 from_vec(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
};

inline double distance_km(const Position3& a, const Position3& b) {
    const Position3 d = a - b;
    return std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
}

inline double distance_m(const Position3& a, const Position3& b) {
    return distance_km(a, b) * 1e3;
}

/// Half-wavelength spaced uniform planar array, n_x by n_y elements.
struct UpaGeometry {
    int nx = 1;
    int ny = 1;
    int size() const { return nx * ny; }
};

enum class LookConvention { Downlook, Uplook };

/// Azimuth/elevation pair together with the convention it was derived under.
/// Downlook: azimuth w.r.t. the negative y-axis, elevation w.r.t. the negative
/// z-axis (transmitter above the point). Uplook: elevation w.r.t. the positive
/// z-axis (receiver below the point).
struct Direction {
    double azimuth = 0.0;    // radians
    double elevation = 0.0;  // radians
    LookConvention convention = LookConvention::Downlook;

    /// Phase coordinates entering the array response: (cos az * cos el, sin az * cos el).
    double u() const { return std::cos(azimuth) * std::cos(elevation); }
    double v() const { return std::sin(azimuth) * std::cos(elevation); }
};

/// Direction from an elevated node toward a lower point (satellite links).
/// Requires from.z > to.z.
Direction downlook_direction(const Position3& from, const Position3& to);

/// Direction from a ground node toward an elevated point (gateway links).
/// Requires target.z > gateway.z. Elevation is positive off zenith.
Direction uplook_direction(const Position3& gateway, const Position3& target);

/// UPA array response v = v_x kron v_y; every entry has unit modulus.
/// Flat index n maps to (x-index a, y-index b) with n = a*ny + b.
Eigen::VectorXcd steering_vector(const UpaGeometry& geom, const Direction& dir);

/// |v(dir1)^H v(dir2)|^2 / n computed from the steering vectors.
double crosstalk(const UpaGeometry& geom, const Direction& dir1, const Direction& dir2);

/// Same quantity via the Dirichlet-kernel closed form in the phase offsets
/// delta_x = u1-u2, delta_y = v1-v2. Removable 0/0 singularities evaluate to
/// the per-factor limit (nx resp. ny).
double crosstalk_closed_form(const UpaGeometry& geom, double delta_x, double delta_y);
double crosstalk_closed_form(const UpaGeometry& geom, const Direction& dir1, const Direction& dir2);

}  // namespace isacsim
