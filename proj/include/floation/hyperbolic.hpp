#pragma once

#include <array>
#include <complex>
#include <vector>

#include "floation/complex.hpp"
#include "floation/words.hpp"

namespace flo {

using Cx = std::complex<double>;

/// z -> (a z + b) / (c z + d), kept with determinant 1. Disk isometries have
/// c = conj(b), d = conj(a).
struct Mobius {
    Cx a{1}, b{0}, c{0}, d{1};

    Cx operator()(Cx z) const { return (a * z + b) / (c * z + d); }
    Mobius operator*(const Mobius& o) const;
    Mobius inverse() const { return {d, -b, -c, a}; }
    void normalize();
    double norm() const;  // max |entry|
    double trace_abs() const { return std::abs(a + d); }
    /// Distance to the identity in PSL(2,C) (sign-insensitive max-entry difference).
    double distance_to_identity() const;

    static Mobius rotation(double phi);
    /// Disk isometry sending p to 0.
    static Mobius to_origin(Cx p);
    /// Orientation-preserving disk isometry sending p1 -> q1, p2 -> q2 (equal hyperbolic lengths).
    static Mobius pairing(Cx p1, Cx p2, Cx q1, Cx q2);
};

double hyperbolic_distance(Cx z, Cx w);
/// Point at hyperbolic fraction t along the geodesic segment from p to q.
Cx geodesic_point(Cx p, Cx q, double t);
/// Boundary fixed points (repelling, attracting) of a hyperbolic disk isometry.
std::array<double, 2> fixed_angles(const Mobius& m);
double wrap_angle(double x);                 // into [0, 2 pi)
double angular_distance(double x, double y);  // on the circle, in [0, pi]

/// Counterclockwise boundary arc from `start` of length `length`.
struct Arc {
    double start = 0;
    double length = 2 * 3.14159265358979323846;
    bool contains(double angle, double slack = 0) const;
    double end() const { return wrap_angle(start + length); }
    double midpoint() const { return wrap_angle(start + length / 2); }
};
/// Intersection, keeping the piece that contains `hint` when it splits.
Arc intersect(const Arc& x, const Arc& y, double hint);

/// Regular 4g-gon fundamental domain with side pairings and the geodesic
/// realization of each base triangle.
struct HyperbolicModel {
    int genus = 0;
    std::vector<Cx> vertices;             // v_k, k = 0..4g-1
    std::vector<Mobius> generators;       // rho of the basis generators
    std::vector<Mobius> pairings;         // one per generator: side j -> side i
    std::vector<std::array<Cx, 3>> corners;  // base triangle corners in polygon coordinates
    std::vector<Mobius> anchor_inverse;   // rho(anchor_T)^-1 per triangle
    std::vector<std::array<Mobius, 3>> step;       // rho(h^-1 h') across each side
    std::vector<std::array<Arc, 3>> wall_arc;      // far-side boundary arc of each side's wall, local frame
    std::vector<std::array<std::array<double, 2>, 3>> wall_ends;  // wall endpoints, local frame
    std::vector<std::array<std::array<Cx, 2>, 3>> side_ends;       // reference tail and head, local frame
    double relation_residual = 0;
    double vertex_residual = 0;

    Mobius rho(const Word& w) const;
    /// Local-frame point on a side at hyperbolic fraction `param` from the reference tail.
    Cx side_point(std::size_t tri, std::size_t side, double param) const {
        return geodesic_point(side_ends[tri][side][0], side_ends[tri][side][1], param);
    }
    Cx centroid(std::size_t tri) const;
};

/// Requires a genus >= 2 triangulation of the polygon prod [a_i, b_i] whose
/// triangles are spanned by polygon vertices. Residual tolerance 1e-9.
HyperbolicModel build_model(const Triangulation2& t);

}  // namespace flo
