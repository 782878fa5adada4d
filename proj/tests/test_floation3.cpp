#include "doctest.h"

#include "floation/complex.hpp"
#include "floation/error.hpp"
#include "floation/floation3.hpp"
#include "floation/order_io.hpp"

using namespace flo;

namespace {

const Triangulation3& cube() {
    static const Triangulation3 t = load_triangulation3(bundled_complex("T3CUBE"));
    return t;
}

Direction from_mask(std::size_t mask, std::size_t edges) {
    Direction d(edges);
    for (std::size_t e = 0; e < edges; ++e) d[e] = (mask >> e) & 1 ? 1 : -1;
    return d;
}

// Does slot k of tet run from its lower to its higher vertex under d?
bool forward(const Triangulation3& t, const Direction& d, std::size_t tet, int slot) {
    const Side s = t.tet_edges[tet][slot];
    return s.sign * d[s.edge] > 0;
}

// A tetrahedron is totally ordered iff no three of its vertices form a directed cycle.
bool has_three_cycle(const Triangulation3& t, const Direction& d, std::size_t tet) {
    auto arrow = [&](int u, int v) {  // u -> v ?
        const bool f = forward(t, d, tet, edge_slot(std::min(u, v), std::max(u, v)));
        return u < v ? f : !f;
    };
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                if (a != b && b != c && a != c && arrow(a, b) && arrow(b, c) && arrow(c, a)) return true;
    return false;
}

bool germ_outgoing(const LinkSphere::Vertex& v, const Direction& d) { return (v.end == 0) == (d[v.edge] > 0); }

}  // namespace

TEST_CASE("direction specs") {
    CHECK(parse_direction("+-+", 3) == Direction{1, -1, 1});
    CHECK(parse_direction("1,-1,1", 3) == Direction{1, -1, 1});
    CHECK(format_direction({1, -1, -1}) == "+--");
    auto code = [](const char* spec) {
        try {
            parse_direction(spec, 3);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Theorem;
    };
    CHECK(code("++") == ErrorCode::Usage);
    CHECK(code("") == ErrorCode::Usage);
    CHECK(code("1,-1,1,1") == ErrorCode::Usage);
    CHECK(code("+-x") == ErrorCode::Parse);
    CHECK(code("1,2,1") == ErrorCode::Parse);
}

TEST_CASE("per-tetrahedron validity is the absence of directed 3-cycles") {
    const auto& t = cube();
    std::size_t cyclic_rows = 0;
    for (std::size_t mask = 0; mask < (1u << t.edge_count()); ++mask) {
        auto d = from_mask(mask, t.edge_count());
        auto st = validate_direction(t, d);
        bool any_cycle = false;
        for (std::size_t k = 0; k < t.tet_count(); ++k) {
            const bool cyc = has_three_cycle(t, d, k);
            CHECK(st[k].valid == !cyc);
            if (cyc) CHECK(!st[k].failure.empty());
            any_cycle = any_cycle || cyc;
            if (st[k].valid) {
                auto p = st[k].position;
                std::sort(p.begin(), p.end());
                CHECK(p == std::array<int, 4>{0, 1, 2, 3});
            }
        }
        cyclic_rows += any_cycle;
    }
    CHECK(cyclic_rows == 96);
}

TEST_CASE("coloring and red arcs agree with direct counts") {
    const auto& t = cube();
    DirectionAuditor aud(t);
    const auto& link = aud.link();
    for (std::size_t mask = 0; mask < (1u << t.edge_count()); ++mask) {
        auto d = from_mask(mask, t.edge_count());
        auto st = validate_direction(t, d);
        if (!std::all_of(st.begin(), st.end(), [](const TetStatus& s) { return s.valid; })) continue;
        auto [col, red] = aud.color_and_trace_red(d);
        std::size_t blue = 0;
        for (const auto& e : link.edges)
            blue += germ_outgoing(link.vertices[e.vertex[0]], d) == germ_outgoing(link.vertices[e.vertex[1]], d);
        CHECK(col.blue == blue);
        CHECK(col.black == link.edges.size() - blue);
        std::size_t mixed = 0;
        for (const auto& tri : link.triangle_vertices) {
            int out = 0;
            for (auto v : tri) out += germ_outgoing(link.vertices[v], d);
            mixed += out == 1 || out == 2;
        }
        CHECK(red.triangle.size() == mixed);
        // a regular direction's red curve is a single circle on the link sphere
        auto rep = aud.decide_regularity(d);
        CHECK(rep.is_local_orientation == rep.is_regular);
        if (rep.is_regular) CHECK(rep.red_components == 1);
        CHECK(rep.complement_components == rep.red_components + 1);
    }
}

TEST_CASE("a direction with a cyclic tetrahedron is refused by the regularity audit") {
    const auto& t = cube();
    for (std::size_t mask = 0; mask < (1u << t.edge_count()); ++mask) {
        auto d = from_mask(mask, t.edge_count());
        auto st = validate_direction(t, d);
        if (std::all_of(st.begin(), st.end(), [](const TetStatus& s) { return s.valid; })) continue;
        try {
            decide_regularity(t, d);
            FAIL("audited a non-total direction");
        } catch (const Error& e) {
            CHECK(e.kind() == "DirectionNotTotal");
            CHECK(e.code() == ErrorCode::Invalid);
        }
        auto r = check_local_orientation(t, d);
        CHECK(!r.tets_valid);
        CHECK(!r.is_local_orientation);
        break;
    }
}

TEST_CASE("abelian feasibility matches a small integer search") {
    const auto& t = cube();
    std::vector<IntVec> ab;
    for (const auto& w : t.edge_words) ab.push_back(abelianize(w, t.basis.rank()));
    for (std::size_t mask = 0; mask < (1u << t.edge_count()); ++mask) {
        auto d = from_mask(mask, t.edge_count());
        bool found = false;
        for (int x = -4; x <= 4 && !found; ++x)
            for (int y = -4; y <= 4 && !found; ++y)
                for (int z = -4; z <= 4 && !found; ++z) {
                    bool all = true;
                    for (std::size_t e = 0; e < ab.size(); ++e)
                        all = all && d[e] * (x * ab[e][0] + y * ab[e][1] + z * ab[e][2]) > 0;
                    found = all;
                }
        CHECK(abelian_feasible(t, d) == found);
        if (!found) continue;
        // directed loops are essential: no nonempty sum of directed edge classes vanishes
        for (std::size_t sub = 1; sub < (1u << t.edge_count()); ++sub) {
            IntVec s(3, 0);
            for (std::size_t e = 0; e < ab.size(); ++e)
                if ((sub >> e) & 1)
                    for (int k = 0; k < 3; ++k) s[k] += d[e] * ab[e][k];
            CHECK(s != IntVec{0, 0, 0});
        }
    }
}

TEST_CASE("T3CUBE: abelian group and exhaustive enumeration") {
    const auto& t = cube();
    CHECK(provably_abelian(t));
    auto par = enumerate_directions(t);
    auto ser = enumerate_directions_serial(t);
    CHECK(par.rows.size() == 128);
    CHECK(par.valid == 32);
    CHECK(par.local_orientation == ser.local_orientation);
    CHECK(par.regular == par.local_orientation);
    CHECK(par.realizable == ser.realizable);
    for (std::size_t i = 0; i < par.rows.size(); ++i) {
        CHECK(par.rows[i].mask == i);
        CHECK(par.rows[i].tets_valid == ser.rows[i].tets_valid);
        CHECK(par.rows[i].report.red_components == ser.rows[i].report.red_components);
        CHECK(par.rows[i].realizable == ser.rows[i].realizable);
        if (par.rows[i].tets_valid) {
            CHECK(par.rows[i].report.blue == 24);
            CHECK(par.rows[i].report.black == 12);
        }
    }
    auto only = enumerate_directions(t, true);
    CHECK(only.rows.size() == 32);
    auto csv = enumeration_csv(par);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 129);
}

TEST_CASE("order-induced directions") {
    const auto& t = cube();
    OrderContext ctx{t.basis, t.relators, 2048};
    for (const char* name : {"t3_lex", "t3_lambda"}) {
        auto o = load_order_file(std::filesystem::path(FLOATION_DATA_DIR) / "orders" / (std::string(name) + ".json"), ctx);
        auto d = order_induced_direction(t, o);
        for (std::size_t e = 0; e < t.edge_count(); ++e)
            CHECK(o.compare(d[e] > 0 ? t.edge_words[e] : t.edge_words[e].inverse(), Word{}) == Comparison::Greater);
        auto r = decide_regularity(t, d);
        CHECK(r.is_local_orientation);
        CHECK(r.red_components == 1);
        CHECK(abelian_feasible(t, d));
    }
    // an order that kills an edge class is refused
    auto partial = parse_order({{"backend", "zn"}, {"field", "Q"}, {"functionals", {{0, 0, 1}}}}, ctx);
    CHECK_THROWS_AS(order_induced_direction(t, partial), Error);
}

TEST_CASE("audit JSON") {
    const auto& t = cube();
    Direction d(t.edge_count(), 1);
    auto j = audit_to_json(t, d, decide_regularity(t, d));
    CHECK(j.at("blue") == 24);
    CHECK(j.at("is_regular") == true);
    CHECK(j.at("direction").size() == t.edge_count());
}
