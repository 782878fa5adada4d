#include "doctest.h"

#include "floation/complex.hpp"
#include "floation/error.hpp"
#include "floation/floation2.hpp"
#include "floation/order_io.hpp"
#include "floation/straighten.hpp"

using namespace flo;
using nlohmann::json;

namespace {

OrderOracle bundled_order(const std::string& name, const Triangulation2& t) {
    return load_order_file(std::filesystem::path(FLOATION_DATA_DIR) / "orders" / (name + ".json"),
                           {t.basis, t.relators, 2048});
}

OrderOracle zn(const json& functionals, const char* field = "Q") {
    return parse_order({{"backend", "zn"}, {"field", field}, {"functionals", functionals}});
}

Level rational_level(std::initializer_list<long> xs) {
    Level l;
    for (long x : xs) l.emplace_back(NumberField::rationals(), Rational(x));
    return l;
}

}  // namespace

TEST_CASE("wall parameter is linear in the leading component") {
    CHECK(wall_parameter(rational_level({1}), rational_level({0}), rational_level({4})) == doctest::Approx(0.25));
    CHECK(wall_parameter(rational_level({1}), rational_level({4}), rational_level({0})) == doctest::Approx(0.75));
    // leading tie: resolved inside the boundary layer by the next component
    double t = wall_parameter(rational_level({0, 1}), rational_level({0, 0}), rational_level({2, 5}));
    CHECK(t > 0);
    CHECK(t < 0.1);
}

TEST_CASE("holonomy on every TOR2 triangle for every torus order") {
    auto t = load_triangulation2(bundled_complex("TOR2"));
    for (const char* name : {"tor2_sqrt2", "z2_lambda", "z2_lex_kernel_10", "z2_lex_kernel_1m1", "z2_lex_kernel_21",
                             "z2_lambda_chain"}) {
        auto o = bundled_order(name, t);
        auto table = holonomy_table(t, o);
        auto ball = build_ball(t, o, Valuation::table(table, o), std::nullopt);
        for (std::size_t tri = 0; tri < t.triangle_count(); ++tri) {
            auto rep = holonomy_check(ball, table, o, tri);
            CHECK_MESSAGE(rep.ok, name, " T", tri, ": ", rep.failure);
            CHECK(rep.samples >= 100);
        }
    }
}

TEST_CASE("holonomy on OCT8 with both blow-ups") {
    auto t = load_triangulation2(bundled_complex("OCT8"));
    for (const char* name : {"oct8_surface_lex", "oct8_surface_lex_b"}) {
        auto o = bundled_order(name, t);
        auto table = holonomy_table(t, o);
        auto ball = build_ball(t, o, Valuation::table(table, o), std::nullopt);
        for (std::size_t tri = 0; tri < t.triangle_count(); ++tri) CHECK(holonomy_check(ball, table, o, tri).ok);
    }
}

TEST_CASE("a corrupted corner value fails the holonomy check") {
    auto t = load_triangulation2(bundled_complex("TOR2"));
    auto o = bundled_order("tor2_sqrt2", t);
    auto table = holonomy_table(t, o);
    auto ball = build_ball(t, o, Valuation::table(table, o), std::nullopt);
    const auto& q = ball.quotient();
    // shift the off-base corners of the three lifts that put a corner at the base point
    for (std::size_t k = 0; k < 3; ++k) {
        LiftedTriangle lift{0, q.inverse(ball.corner_prefix(0, k))};
        for (std::size_t j = 0; j < 3; ++j) {
            if (j == k) continue;
            auto label = ball.corner_label(lift, j);
            auto level = *ball.valuation()(label);
            level[0] += AlgebraicNumber(level[0].field(), ratio(1, 3));
            ball.override_value(label, level);
        }
    }
    CHECK(!holonomy_check(ball, table, o, 0).ok);
}

TEST_CASE("leaves never cross a wall twice") {
    auto tor = load_triangulation2(bundled_complex("TOR2"));
    std::size_t traces = 0;
    for (const char* name : {"tor2_sqrt2", "z2_lex_kernel_21"}) {
        auto o = bundled_order(name, tor);
        auto ball = build_ball(tor, o, Valuation::functional(o), std::nullopt);
        for (const auto& s : sample_starts(ball, 60, 3)) {
            auto tr = trace_leaf(ball, s, 200);
            // independent check: lifted edges along the leaf are distinct
            std::vector<LiftedEdge> seen;
            for (const auto* ray : {&tr.forward, &tr.backward})
                for (const auto& c : ray->crossings) {
                    CHECK(std::find(seen.begin(), seen.end(), c.wall) == seen.end());
                    seen.push_back(c.wall);
                }
            ++traces;
        }
    }
    auto oct = load_triangulation2(bundled_complex("OCT8"));
    auto o = bundled_order("oct8_surface_lex", oct);
    auto ball = build_ball(oct, o, Valuation::functional(o), std::nullopt);
    for (const auto& s : sample_starts(ball, 60, 5)) {
        auto tr = trace_leaf(ball, s, 150);
        CHECK(tr.crossing_count() > 0);
        ++traces;
    }
    CHECK(traces == 180);
}

TEST_CASE("crossings are consistent with the neighbour relation") {
    auto t = load_triangulation2(bundled_complex("OCT8"));
    auto o = bundled_order("oct8_surface_lex", t);
    auto ball = build_ball(t, o, Valuation::functional(o), std::nullopt);
    LiftedTriangle start{2, ball.quotient().identity()};
    auto tr = trace_leaf(ball, {start, generic_level(ball, start)}, 100);
    LiftedTriangle at = start;
    for (const auto& c : tr.forward.crossings) {
        CHECK(c.from == at);
        auto n = ball.neighbor(c.from, c.from_side);
        CHECK(n.lift == c.to);
        CHECK(n.side == c.to_side);
        CHECK(c.t > 0);
        CHECK(c.t < 1);
        at = c.to;
    }
}

TEST_CASE("closed leaves and the kernel class") {
    auto t = load_triangulation2(bundled_complex("TOR2"));
    auto cert = detect_closed_leaf(t, zn(json::array({json::array({1, 1}), json::array({1, 0})})));
    REQUIRE(cert.found);
    CHECK(((cert.period_class == IntVec{1, -1}) || (cert.period_class == IntVec{-1, 1})));
    CHECK(cert.kernel_check);
    auto irr = detect_closed_leaf(t, zn(json::array({json::array({1, json::array({0, 1})})}), "sqrt2"));
    CHECK(!irr.found);
}

TEST_CASE("closed-leaf detection needs a torus and a total order") {
    auto t = load_triangulation2(bundled_complex("TOR2"));
    CHECK_THROWS_AS(detect_closed_leaf(t, zn(json::array({json::array({1, 0})}))), Error);
    auto oct = load_triangulation2(bundled_complex("OCT8"));
    CHECK_THROWS_AS(detect_closed_leaf(oct, bundled_order("oct8_surface_lex", oct)), Error);
}

TEST_CASE("trace JSON has both rays") {
    auto t = load_triangulation2(bundled_complex("TOR2"));
    auto o = bundled_order("tor2_sqrt2", t);
    auto ball = build_ball(t, o, Valuation::functional(o), std::nullopt);
    LiftedTriangle start{0, ball.quotient().identity()};
    auto tr = trace_leaf(ball, {start, generic_level(ball, start)}, 12);
    auto j = trace_to_json(tr, ball);
    CHECK(j.at("forward").at("crossings").size() == 12);
    CHECK(j.at("backward").at("crossings").size() == 12);
    CHECK(j.at("forward").at("status") == "Open");
}

TEST_CASE("an observer can stop a ray") {
    auto t = load_triangulation2(bundled_complex("TOR2"));
    auto o = bundled_order("tor2_sqrt2", t);
    auto ball = build_ball(t, o, Valuation::functional(o), std::nullopt);
    LiftedTriangle start{1, ball.quotient().identity()};
    std::size_t calls = 0;
    auto tr = trace_leaf(ball, {start, generic_level(ball, start)}, 50, [&](bool forward, const Crossing&) {
        ++calls;
        return forward;  // stop forward at once, let backward run
    });
    CHECK(tr.forward.crossings.size() == 1);
    CHECK(tr.backward.crossings.size() == 50);
    CHECK(calls == 51);
}
