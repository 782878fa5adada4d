#pragma once

#include <array>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "floation/complex.hpp"
#include "floation/embed.hpp"
#include "floation/orders.hpp"

namespace flo {

/// F-value of a lift label: an order-preserving map from group elements to
/// lexicographically ordered levels. nullopt outside the supported set.
class Valuation {
public:
    using Fn = std::function<std::optional<Level>(const NilElement&)>;

    Valuation(Fn fn, std::string kind, bool bounded) : fn_(std::move(fn)), kind_(std::move(kind)), bounded_(bounded) {}

    /// Exact functional levels (h1, depth2) or the Z^n functional chain.
    static Valuation functional(const OrderOracle& o);
    /// Single rational level from an embedding table keyed by the oracle.
    static Valuation table(const EmbeddingTable& t, const OrderOracle& o);

    std::optional<Level> operator()(const NilElement& h) const { return fn_(h); }
    const std::string& kind() const { return kind_; }
    bool bounded() const { return bounded_; }

private:
    Fn fn_;
    std::string kind_;
    bool bounded_ = false;
};

struct LiftedTriangle {
    std::size_t triangle = 0;
    NilElement label;
    bool operator==(const LiftedTriangle&) const = default;
};

struct LiftedEdge {
    std::size_t edge = 0;
    NilElement tail;  // label of the reference tail
    bool operator==(const LiftedEdge&) const = default;
};

struct LiftedEdgeHash {
    std::size_t operator()(const LiftedEdge& e) const { return NilElementHash{}(e.tail) * 31 + e.edge; }
};

struct LiftedTriangleHash {
    std::size_t operator()(const LiftedTriangle& t) const { return NilElementHash{}(t.label) * 17 + t.triangle; }
};

/// Lifted triangles (T, h) of the universal cover; corners h, h s0, h s0 s1 where
/// s_k is the element of side k. Labels live in the class-2 quotient of the
/// surface group, which is enough to separate lifts met by a single trace
/// (they never revisit a lifted edge).
class LiftedBall {
public:
    struct Neighbor {
        LiftedTriangle lift;
        std::size_t side = 0;  // side of the neighbour through which it was entered
    };

    LiftedBall(const Triangulation2& t, NilQuotient q, Valuation v, std::optional<int> radius);

    const Triangulation2& complex() const { return *t_; }
    const NilQuotient& quotient() const { return q_; }
    const Valuation& valuation() const { return v_; }
    std::optional<int> radius() const { return radius_; }

    const NilElement& corner_prefix(std::size_t tri, std::size_t k) const { return prefix_[tri][k]; }
    const NilElement& side_element(std::size_t tri, std::size_t k) const { return side_[tri][k]; }
    NilElement corner_label(const LiftedTriangle& l, std::size_t k) const;

    bool contains(const LiftedTriangle& l) const;
    /// Corner levels; nullopt when the lift is outside the ball or unvalued.
    std::optional<std::array<Level, 3>> corners(const LiftedTriangle& l) const;
    Neighbor neighbor(const LiftedTriangle& l, std::size_t side) const;
    LiftedEdge lifted_edge(const LiftedTriangle& l, std::size_t side) const;
    /// Corner index of the reference tail of a side.
    static std::size_t tail_corner(const Side& s, std::size_t side) { return s.sign > 0 ? side : (side + 1) % 3; }

    /// Enumerated lifts (bounded balls only), base lifts first.
    const std::vector<LiftedTriangle>& lifts() const { return lifts_; }

    /// Test hook: replace the level at one label.
    void override_value(const NilElement& h, Level value);

private:
    std::shared_ptr<const Triangulation2> t_;
    NilQuotient q_;
    Valuation v_;
    std::optional<int> radius_;
    std::vector<std::array<NilElement, 3>> prefix_, side_;
    std::unordered_set<NilElement, NilElementHash> labels_;
    std::vector<LiftedTriangle> lifts_;
    mutable std::unordered_map<NilElement, std::optional<Level>, NilElementHash> cache_;
};

/// Quotient used for lift labels: G/G_2 of the surface presentation.
NilQuotient label_quotient(const Triangulation2& t);

/// Validates edge positivity (EdgeEquivalentToUnit) and builds the ball; radius
/// bounds the word length of lift labels (nullopt: unbounded, lazy).
LiftedBall build_ball(const Triangulation2& t, const OrderOracle& o, const Valuation& v, std::optional<int> radius);

enum class TraceStatus { Open, ClosedCandidate, HitBallBoundary };
const char* to_string(TraceStatus s);

struct Crossing {
    LiftedEdge wall;
    double t = 0;   // position along the wall from tail to head
    double t2 = 0;  // next-order term when the level ties a leading component
    LiftedTriangle from;
    std::size_t from_side = 0;
    LiftedTriangle to;
    std::size_t to_side = 0;
};

/// Exit of the leaf from the last triangle of a ray, not crossed.
struct ExitPoint {
    LiftedTriangle lift;
    std::size_t side = 0;
    double t = 0;
};

struct Ray {
    std::vector<Crossing> crossings;
    ExitPoint terminal;
    TraceStatus status = TraceStatus::Open;
};

struct LeafStart {
    LiftedTriangle lift;
    Level level;
};

struct LeafTrace {
    LeafStart start;
    Ray forward, backward;
    TraceStatus status() const;
    std::size_t crossing_count() const { return forward.crossings.size() + backward.crossings.size(); }
};

/// Position in (0,1) of the level on a wall from tail value a to head value b.
/// Exact ties in leading components are resolved inside a boundary layer of
/// width 0.1 by the next component.
double wall_parameter(const Level& level, const Level& a, const Level& b);

struct WallPosition {
    double t = 0;
    double t2 = 0;  // coefficient of the next infinitesimal order
};
WallPosition wall_position(const Level& level, const Level& a, const Level& b);

/// Called after each crossing; returning true ends that ray (status Open).
using RayObserver = std::function<bool(bool forward, const Crossing&)>;

LeafTrace trace_leaf(const LiftedBall& ball, const LeafStart& start, std::size_t max_crossings,
                     const RayObserver& observe = {});

/// (1 - w) p + w q componentwise.
Level affine_level(const Level& p, const Level& q, const Rational& w);

/// A level strictly inside the start lift, avoiding its corner values. With a
/// chain of length >= 2 the leading component is pinned to the identity's (0).
Level generic_level(const LiftedBall& ball, const LiftedTriangle& lift, bool pin_leading = false);

struct HolonomyReport {
    bool ok = false;
    std::string alpha, beta, gamma;  // side element words
    std::size_t samples = 0;
    std::string failure;
};

/// Compares leaf-following inside one triangle with the edge-parameter
/// description: beta -> gamma is the identity, alpha -> gamma is x -> -rho(beta^-1)(-x).
HolonomyReport holonomy_check(const LiftedBall& ball, const EmbeddingTable& emb, const OrderOracle& o,
                              std::size_t triangle);

/// Table sufficient for holonomy_check on every triangle: identity, radius-1 ball
/// and the inverses of all side elements.
EmbeddingTable holonomy_table(const Triangulation2& t, const OrderOracle& o);

struct ClosedLeafCertificate {
    bool found = false;
    Word period_word;
    IntVec period_class;
    bool kernel_check = false;
    std::size_t crossings = 0;
    std::size_t period = 0;
};

struct TraceCaps {
    std::size_t max_crossings = 2000;
};

ClosedLeafCertificate detect_closed_leaf(const Triangulation2& t, const OrderOracle& o, const TraceCaps& caps = {});

nlohmann::json trace_to_json(const LeafTrace& tr, const LiftedBall& ball);

}  // namespace flo
