#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "floation/floation2.hpp"
#include "floation/hyperbolic.hpp"

namespace flo {

struct StraightenConfig {
    double eps = 1e-3;
    std::size_t max_crossings = 2000;
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    /// Stop a ray once its boundary interval is narrower than eps / 16.
    bool early_stop = true;
};

/// Nested boundary intervals cut out by the walls a ray crosses.
struct RayEndpoint {
    bool converged = false;
    bool overflow = false;  // developing matrix left double range
    bool inconsistent = false;  // two crossed walls bound disjoint arcs
    double angle = 0;
    Arc interval;
    std::size_t depth = 0;  // crossings used
    double max_quasi_ratio = 1;  // developed path length over distance travelled
};

struct DevelopedLeaf {
    std::vector<Cx> polyline;  // backward terminal, crossings in leaf order, forward terminal
    RayEndpoint forward, backward;
    std::size_t crossings = 0;
};

/// Running interval of one ray. Does not require convergence.
RayEndpoint ray_interval(const HyperbolicModel& m, const Ray& ray, double eps);
/// Same, but throws Trace/NotConverged when the interval is wider than eps.
RayEndpoint endpoint_estimate(const HyperbolicModel& m, const Ray& ray, double eps);
/// Develops a trace whose start lift is labelled by the identity.
DevelopedLeaf develop_leaf(const HyperbolicModel& m, const LeafTrace& tr, double eps);

struct Geodesic {
    double a = 0, b = 0;  // boundary angles
    std::size_t sample = 0;
};

/// Max endpoint distance under the better of the two matchings.
double geodesic_distance(const Geodesic& g, const Geodesic& h);
/// Endpoints interleave on the circle, every pair of endpoints at least `slack` apart.
bool linked(const Geodesic& g, const Geodesic& h, double slack);

struct Lamination {
    std::vector<Geodesic> leaves;
    std::size_t samples = 0;
    std::size_t converged = 0;
    std::size_t merged = 0;
    std::vector<std::size_t> not_converged;
    std::vector<std::pair<std::size_t, std::size_t>> linked_pairs;  // sample ids
    std::vector<DevelopedLeaf> developed;  // per sample
    double max_quasi_ratio = 1;
    bool overflow = false;
};

/// Start lifts at the identity label, cycling through base triangles, with
/// levels (1 - w) min + w max for w = k / 1021 drawn from the seed.
std::vector<LeafStart> sample_starts(const LiftedBall& ball, std::size_t n, std::uint64_t seed);

Lamination straighten_lamination(const HyperbolicModel& m, const LiftedBall& ball, const StraightenConfig& cfg);
/// Single-threaded reference with identical output.
Lamination straighten_lamination_serial(const HyperbolicModel& m, const LiftedBall& ball, const StraightenConfig& cfg);

/// Hausdorff distance between leaf sets under geodesic_distance.
double compare_laminations(const Lamination& x, const Lamination& y);

struct PerturbationResult {
    std::vector<Rational> sizes;
    std::vector<double> distances;
    bool non_increasing = false;  // within 2 eps as sizes shrink
};

/// Replaces the H1 functional by h1 + s * delta for each size s and compares
/// each straightened lamination with the unperturbed one.
PerturbationResult perturb_and_compare(const Triangulation2& t, const OrderOracle& base, const RatVec& delta,
                                       const std::vector<Rational>& sizes, const StraightenConfig& cfg);

nlohmann::json lamination_to_json(const Lamination& l, bool with_polylines = false);

}  // namespace flo
