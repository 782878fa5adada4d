#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "floation/complex.hpp"
#include "floation/orders.hpp"

namespace flo {

/// +1 keeps an edge's reference orientation, -1 reverses it.
using Direction = std::vector<int>;

std::string format_direction(const Direction& d);
Direction parse_direction(const std::string& spec, std::size_t edges);

/// Orients every edge so that its word is positive. Throws EdgeEquivalentToUnit.
Direction order_induced_direction(const Triangulation3& t, const OrderOracle& o);

struct TetStatus {
    bool valid = false;
    std::array<int, 4> position{};  // 0 = min corner ... 3 = max corner, when valid
    std::string failure;
};

std::vector<TetStatus> validate_direction(const Triangulation3& t, const Direction& d);

enum class LinkColor { Blue, Black };

struct LinkColoring {
    std::vector<LinkColor> color;  // per link edge
    std::size_t blue = 0, black = 0;
};

struct RedCurveSet {
    std::vector<std::size_t> triangle;                 // link triangle of each arc
    std::vector<std::array<std::size_t, 2>> black;     // the two black link edges it joins
    std::vector<std::size_t> component;                // per arc
    std::size_t components = 0;
};

struct AuditReport {
    std::vector<TetStatus> tets;
    bool tets_valid = false;
    bool o_nonempty = false, i_nonempty = false, o_connected = false, i_connected = false;
    bool recurrence = false;
    std::size_t blue = 0, black = 0, red_arcs = 0, red_components = 0;
    std::size_t complement_components = 0;  // regions of the link sphere cut along red arcs
    bool is_local_orientation = false;
    bool is_regular = false;
};

/// Link sphere built once, audits per direction.
class DirectionAuditor {
public:
    explicit DirectionAuditor(const Triangulation3& t);

    const Triangulation3& complex() const { return *t_; }
    const LinkSphere& link() const { return link_; }

    /// Germ orientation of each link vertex: true when the edge leaves the vertex.
    std::vector<bool> outgoing(const Direction& d) const;
    /// Conditions 1-3; fills the o/i and recurrence fields.
    AuditReport check_local_orientation(const Direction& d) const;
    std::pair<LinkColoring, RedCurveSet> color_and_trace_red(const Direction& d) const;
    /// Full audit. Throws Theorem/RegularityMismatch if the two verdicts disagree and
    /// Invalid/DirectionNotTotal if some tetrahedron is not totally ordered.
    AuditReport decide_regularity(const Direction& d) const;

private:
    const Triangulation3* t_;
    LinkSphere link_;
};

AuditReport check_local_orientation(const Triangulation3& t, const Direction& d);
std::pair<LinkColoring, RedCurveSet> color_and_trace_red(const Triangulation3& t, const Direction& d);
AuditReport decide_regularity(const Triangulation3& t, const Direction& d);

/// Exact strict feasibility of phi(v_e) > 0 over the directed edge abelianizations.
bool abelian_feasible(const Triangulation3& t, const Direction& d);

/// Sound but incomplete: derives pairwise commutation of the basis generators
/// from relators by cancelling letters across already-commuting generators.
bool provably_abelian(const Triangulation3& t);

enum class Realizability { Yes, No, Unknown };
const char* to_string(Realizability r);

struct EnumerationRow {
    std::size_t mask = 0;  // bit e set: edge e keeps its reference orientation
    Direction direction;
    bool tets_valid = false;
    AuditReport report;  // audited only when tets_valid
    bool abelian_feasible = false;
    Realizability realizable = Realizability::Unknown;
};

struct Enumeration {
    std::vector<EnumerationRow> rows;
    std::size_t valid = 0, local_orientation = 0, regular = 0, realizable = 0, realizable_local = 0;
};

/// All 2^E directions (E <= 24). `only_valid` drops rows failing the per-tet check.
Enumeration enumerate_directions(const Triangulation3& t, bool only_valid = false);
Enumeration enumerate_directions_serial(const Triangulation3& t, bool only_valid = false);

std::string enumeration_csv(const Enumeration& e);
nlohmann::json audit_to_json(const Triangulation3& t, const Direction& d, const AuditReport& r);
nlohmann::json enumeration_summary(const Enumeration& e);

}  // namespace flo
