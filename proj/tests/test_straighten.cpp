#include "doctest.h"

#include <numbers>
#include <random>

#include "floation/complex.hpp"
#include "floation/error.hpp"
#include "floation/order_io.hpp"
#include "floation/straighten.hpp"
#include "floation/svg.hpp"

using namespace flo;
using std::numbers::pi;

namespace {

struct Oct8 {
    Triangulation2 t = load_triangulation2(bundled_complex("OCT8"));
    HyperbolicModel m = build_model(t);
    OrderOracle o = load_order_file(std::filesystem::path(FLOATION_DATA_DIR) / "orders/oct8_surface_lex.json",
                                    {t.basis, t.relators, 2048});
    LiftedBall ball = build_ball(t, o, Valuation::functional(o), std::nullopt);
};

const Oct8& oct8() {
    static const Oct8 w;
    return w;
}

Cx on_circle(double a) { return std::polar(1.0, a); }

// Chords of the unit circle cross in the open disk: plain segment intersection.
bool chords_cross(const Geodesic& g, const Geodesic& h) {
    Cx p = on_circle(g.a), q = on_circle(g.b), r = on_circle(h.a), s = on_circle(h.b);
    auto cross = [](Cx u, Cx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    double d1 = cross(q - p, r - p), d2 = cross(q - p, s - p), d3 = cross(s - r, p - r), d4 = cross(s - r, q - r);
    return d1 * d2 < 0 && d3 * d4 < 0;
}

double brute_hausdorff(const std::vector<Geodesic>& x, const std::vector<Geodesic>& y) {
    auto d = [](const Geodesic& g, const Geodesic& h) {
        return std::min(std::max(angular_distance(g.a, h.a), angular_distance(g.b, h.b)),
                        std::max(angular_distance(g.a, h.b), angular_distance(g.b, h.a)));
    };
    auto one_way = [&](const auto& u, const auto& v) {
        double worst = 0;
        for (const auto& g : u) {
            double best = 1e9;
            for (const auto& h : v) best = std::min(best, d(g, h));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_way(x, y), one_way(y, x));
}

}  // namespace

TEST_CASE("Mobius pairing and invariance of distance") {
    Cx p1(0.1, 0.2), p2(-0.3, 0.4);
    Mobius to0 = Mobius::to_origin(p1);
    CHECK(std::abs(to0(p1)) < 1e-12);
    Cx q1 = Mobius::rotation(1.0)(p1), q2 = Mobius::rotation(1.0)(p2);
    Mobius m = Mobius::pairing(p1, p2, q1, q2);
    CHECK(std::abs(m(p1) - q1) < 1e-12);
    CHECK(std::abs(m(p2) - q2) < 1e-12);
    CHECK(hyperbolic_distance(to0(p1), to0(p2)) == doctest::Approx(hyperbolic_distance(p1, p2)));
    CHECK((m * m.inverse()).distance_to_identity() < 1e-12);
    Cx mid = geodesic_point(p1, p2, 0.5);
    CHECK(hyperbolic_distance(p1, mid) == doctest::Approx(hyperbolic_distance(mid, p2)));
}

TEST_CASE("boundary arcs") {
    Arc a{wrap_angle(-0.5), 1.0}, b{0.2, 1.0};
    Arc c = intersect(a, b, 0.3);
    CHECK(c.start == doctest::Approx(0.2));
    CHECK(c.length == doctest::Approx(0.3));
    CHECK(a.contains(0.0));
    CHECK(!a.contains(1.0));
    Arc full;
    Arc d = intersect(full, a, 0);
    CHECK(d.length == doctest::Approx(1.0));
    CHECK(angular_distance(0.1, 2 * pi - 0.1) == doctest::Approx(0.2));
}

TEST_CASE("OCT8 hyperbolic model") {
    const auto& w = oct8();
    CHECK(w.m.genus == 2);
    CHECK(w.m.vertices.size() == 8);
    CHECK(w.m.relation_residual < 1e-9);
    CHECK(w.m.vertex_residual < 1e-9);
    CHECK(w.m.rho(w.t.relators[0]).distance_to_identity() < 1e-9);
    for (std::size_t e = 0; e < w.t.edge_count(); ++e) CHECK(w.m.rho(w.t.edge_words[e]).trace_abs() > 2);
    // vertex angles sum to 2 pi at the single vertex
    double total = 0;
    for (const auto& c : w.m.corners)
        for (int k = 0; k < 3; ++k) {
            Mobius to0 = Mobius::to_origin(c[k]);
            total += std::abs(std::arg(to0(c[(k + 1) % 3]) / to0(c[(k + 2) % 3])));
        }
    CHECK(total == doctest::Approx(2 * pi).epsilon(1e-9));
}

TEST_CASE("models need a genus >= 2 polygon") {
    auto t = load_triangulation2(bundled_complex("TOR2"));
    CHECK_THROWS_AS(build_model(t), Error);
}

TEST_CASE("linking agrees with chord intersection") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ang(0, 2 * pi);
    for (int k = 0; k < 5000; ++k) {
        Geodesic g{ang(rng), ang(rng)}, h{ang(rng), ang(rng)};
        CHECK(linked(g, h, 0) == chords_cross(g, h));
        CHECK(geodesic_distance(g, h) == doctest::Approx(geodesic_distance(h, g)));
        CHECK(geodesic_distance(g, Geodesic{g.b, g.a}) < 1e-12);
    }
    // endpoints closer than the slack never count as linked
    CHECK(!linked({0.0, 2.0}, {1.0, 0.0005}, 1e-3));
}

TEST_CASE("Hausdorff distance matches the brute-force version") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ang(0, 2 * pi);
    for (int k = 0; k < 200; ++k) {
        Lamination x, y;
        for (int i = 0; i < 1 + k % 7; ++i) x.leaves.push_back({ang(rng), ang(rng)});
        for (int i = 0; i < 1 + k % 5; ++i) y.leaves.push_back({ang(rng), ang(rng)});
        CHECK(compare_laminations(x, y) == doctest::Approx(brute_hausdorff(x.leaves, y.leaves)));
    }
    CHECK_THROWS_AS(compare_laminations(Lamination{}, Lamination{}), Error);
}

TEST_CASE("OCT8 straightening: disjoint leaves, serial equals parallel") {
    const auto& w = oct8();
    StraightenConfig cfg;
    cfg.samples = 30;
    auto par = straighten_lamination(w.m, w.ball, cfg);
    auto ser = straighten_lamination_serial(w.m, w.ball, cfg);
    CHECK(par.converged == 30);
    CHECK(par.linked_pairs.empty());
    REQUIRE(par.leaves.size() == ser.leaves.size());
    for (std::size_t i = 0; i < par.leaves.size(); ++i) {
        CHECK(par.leaves[i].a == ser.leaves[i].a);
        CHECK(par.leaves[i].b == ser.leaves[i].b);
    }
    for (std::size_t i = 0; i < par.leaves.size(); ++i)
        for (std::size_t j = i + 1; j < par.leaves.size(); ++j) CHECK(!chords_cross(par.leaves[i], par.leaves[j]));
    // every developed polyline ends inside its boundary intervals' cones
    for (const auto& d : par.developed) {
        CHECK(d.polyline.size() == d.crossings + 2);
        for (const auto& z : d.polyline) CHECK(std::abs(z) < 1);
    }
}

TEST_CASE("endpoint estimates need enough crossings") {
    const auto& w = oct8();
    LiftedTriangle start{0, w.ball.quotient().identity()};
    auto tr = trace_leaf(w.ball, {start, generic_level(w.ball, start)}, 2);
    CHECK_THROWS_AS(endpoint_estimate(w.m, tr.forward, 1e-3), Error);
    auto r = ray_interval(w.m, tr.forward, 1e-3);
    CHECK(!r.converged);
    CHECK(r.interval.length > 1e-3);
    auto full = trace_leaf(w.ball, {start, generic_level(w.ball, start)}, 200);
    auto e = endpoint_estimate(w.m, full.forward, 1e-3);
    CHECK(e.converged);
    CHECK(e.interval.contains(e.angle));
}

TEST_CASE("endpoint intervals shrink along a ray") {
    const auto& w = oct8();
    LiftedTriangle start{3, w.ball.quotient().identity()};
    auto tr = trace_leaf(w.ball, {start, generic_level(w.ball, start)}, 40);
    double prev = 2 * pi + 1;
    for (std::size_t n = 1; n <= tr.forward.crossings.size(); n += 3) {
        Ray partial = tr.forward;
        partial.crossings.resize(n);
        auto r = ray_interval(w.m, partial, 1e-12);
        CHECK(r.interval.length <= prev + 1e-12);
        prev = r.interval.length;
    }
}

TEST_CASE("lamination JSON") {
    const auto& w = oct8();
    StraightenConfig cfg;
    cfg.samples = 5;
    auto l = straighten_lamination(w.m, w.ball, cfg);
    auto j = lamination_to_json(l, true);
    CHECK(j.at("samples") == 5);
    CHECK(j.at("leaves").size() == l.leaves.size());
    CHECK(j.contains("polylines"));
    CHECK(!lamination_to_json(l, false).contains("polylines"));
}

TEST_CASE("svg: one leaf is one arc, antipodal leaves are lines") {
    Lamination one;
    one.leaves.push_back({0.3, 2.0});
    auto svg = render_lamination_svg(one, nullptr);
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
        return n;
    };
    CHECK(count("class=\"leaf\"") == 1);
    CHECK(count(" A ") == 1);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg_geodesic(0.5, 0.5 + pi, 600).rfind("<line", 0) == 0);
    CHECK(svg_geodesic(0.5, 1.5, 600).rfind("<path", 0) == 0);
    CHECK_THROWS_AS(render_lamination_svg(Lamination{}, nullptr), Error);
}

TEST_CASE("svg arc radius is tan of half the opening") {
    // endpoints at angle 0 and pi/2: radius tan(pi/4) = 1 disk radius
    auto s = svg_geodesic(0, pi / 2, 600);
    auto a = s.find(" A ");
    REQUIRE(a != std::string::npos);
    double r = std::stod(s.substr(a + 3));
    CHECK(r == doctest::Approx(285.0));  // 600 px with a 15 px margin
}

TEST_CASE("svg scene with the polygon") {
    const auto& w = oct8();
    StraightenConfig cfg;
    cfg.samples = 4;
    auto l = straighten_lamination(w.m, w.ball, cfg);
    auto svg = render_lamination_svg(l, &w.m, SvgOptions{400, true});
    CHECK(svg.find("class=\"poly\"") != std::string::npos);
    CHECK(svg.find("class=\"path\"") != std::string::npos);
    CHECK(svg.find("width=\"400\"") != std::string::npos);
}
