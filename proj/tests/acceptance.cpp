// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "floation/complex.hpp"
#include "floation/embed.hpp"
#include "floation/error.hpp"
#include "floation/floation2.hpp"
#include "floation/floation3.hpp"
#include "floation/order_io.hpp"
#include "floation/straighten.hpp"

#include "oracles.hpp"

using namespace flo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::filesystem::path order_path(const std::string& name) {
    return std::filesystem::path(FLOATION_DATA_DIR) / "orders" / (name + ".json");
}

OrderContext context_of(const Triangulation2& t) {
    OrderContext ctx;
    ctx.generators = t.basis;
    ctx.relators = t.relators;
    return ctx;
}

AlgebraicNumber num(const FieldPtr& f, RatVec coords) { return AlgebraicNumber(f, std::move(coords)); }

struct NamedOrder {
    std::string name;
    OrderOracle order;
};

// Z^2 corpus: irrational chains and lexicographic chains with rational kernel.
std::vector<NamedOrder> torus_corpus() {
    std::vector<NamedOrder> out;
    auto q = NumberField::rationals(), s2 = NumberField::sqrt2(), l6 = NumberField::lambda6();
    auto chain = [](FieldPtr f, std::vector<Functional> fs) { return OrderOracle(ZnOrder{FunctionalChain(f, 2, fs)}); };
    out.push_back({"(1, sqrt2)", chain(s2, {{num(s2, {1}), num(s2, {0, 1})}})});
    out.push_back({"(1, -sqrt2)", chain(s2, {{num(s2, {1}), num(s2, {0, -1})}})});
    out.push_back({"(sqrt2, 3)", chain(s2, {{num(s2, {0, 1}), num(s2, {3})}})});
    out.push_back({"(1, lambda)", chain(l6, {{num(l6, {1}), num(l6, {0, 1})}})});
    out.push_back({"(-1, lambda^2)", chain(l6, {{num(l6, {-1}), num(l6, {0, 0, 1})}})});
    out.push_back({"(lambda^5, -2)", chain(l6, {{num(l6, {0, 0, 0, 0, 0, 1}), num(l6, {-2})}})});
    const std::vector<std::pair<long, long>> kernels{{1, 0}, {0, 1}, {1, -1}, {2, 1}};
    for (auto [p, r] : kernels)
        for (int sign : {1, -1}) {
            // leading functional kills (p, r); the refinement is +-(p, r) itself
            Functional lead{num(q, {Rational(r)}), num(q, {Rational(-p)})};
            Functional next{num(q, {Rational(sign * p)}), num(q, {Rational(sign * r)})};
            std::ostringstream name;
            name << "kernel (" << p << "," << r << ") refinement " << (sign > 0 ? "+" : "-");
            out.push_back({name.str(), chain(q, {lead, next})});
        }
    // a rational chain in an irrational field
    out.push_back({"lambda chain kernel (2,1)",
                   chain(l6, {{num(l6, {1}), num(l6, {-2})}, {num(l6, {1}), num(l6, {0, 1})}})});
    return out;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome criterion1() {
    auto t0 = Clock::now();
    auto t = load_triangulation2(bundled_complex("TOR2"));
    auto corpus = torus_corpus();
    std::size_t agree = 0, certificates = 0, exact = 0;
    std::string bad;
    for (const auto& [name, o] : corpus) {
        const auto& chain = std::get<ZnOrder>(o.backend()).chain;
        const bool arch = is_archimedean(chain);
        auto cert = detect_closed_leaf(t, o);
        if (cert.found != arch) ++agree;
        else bad += " [" + name + "]";
        if (cert.found) {
            ++certificates;
            auto k = kernel_generator(chain);
            IntVec neg = cert.period_class;
            for (auto& v : neg) v = -v;
            if (k && (cert.period_class == *k || neg == *k)) ++exact;
            else bad += " [" + name + ": class]";
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << corpus.size() << " orders, " << agree << " verdicts match, " << exact << "/" << certificates
      << " certificates on the kernel generator, " << secs << " s" << bad;
    return {corpus.size() >= 12 && agree == corpus.size() && exact == certificates && secs < 10, d.str()};
}

Outcome criterion2() {
    std::mt19937_64 rng(20260101);
    std::size_t ok = 0, collapse_ok = 0;
    const std::size_t trials = 10000;
    for (std::size_t k = 0; k < trials; ++k) {
        auto r = oracle::random_table(rng, 4 + k % 9, true);
        OrderOracle o(r.table);
        auto i0 = minimal_embed(o, r.sequence);
        auto again = minimal_embed(o, r.sequence);
        auto expect = oracle::embed_by_rules(r.sequence, r.class_of);
        bool good = true;
        for (const auto& w : r.sequence) {
            auto v = i0.value(w);
            good = good && v && is_dyadic(*v) && *v == expect.at(w) && again.value(w) == v;
            for (const auto& u : r.sequence) {
                auto cu = r.class_of.at(u), cw = r.class_of.at(w);
                auto vu = i0.value(u);
                good = good && ((cu < cw) == (*vu < *v)) && ((cu == cw) == (*vu == *v));
            }
        }
        ok += good;
        oracle::RandomTable blown = r;
        blown.table = oracle::refine(r.table, rng);
        OrderOracle ob(blown.table);
        auto j = minimal_embed(ob, r.sequence);
        auto f = collapse_between(j, i0);
        bool col = true;
        for (const auto& w : r.sequence) col = col && f(*j.value(w)) == *i0.value(w);
        collapse_ok += col;
    }
    std::ostringstream d;
    d << ok << "/" << trials << " tables match the rule oracle, " << collapse_ok << "/" << trials
      << " blow-ups collapse onto i0";
    return {ok == trials && collapse_ok == trials, d.str()};
}

// Traces many leaves and counts WallCrossedTwice events.
struct TraceTally {
    std::size_t traces = 0, twice = 0, other = 0;
    std::string note;
};

void trace_many(const LiftedBall& ball, std::size_t n, std::uint64_t seed, std::size_t cap, TraceTally& tally) {
    for (const auto& s : sample_starts(ball, n, seed)) {
        try {
            trace_leaf(ball, s, cap);
            ++tally.traces;
        } catch (const Error& e) {
            if (e.kind() == "WallCrossedTwice") ++tally.twice;
            else {
                ++tally.other;
                tally.note = e.what();
            }
        }
    }
}

Outcome criterion3() {
    TraceTally tally;
    auto tor = load_triangulation2(bundled_complex("TOR2"));
    for (const auto& [name, o] : torus_corpus())
        trace_many(build_ball(tor, o, Valuation::functional(o), std::nullopt), 50, 7, 300, tally);
    auto oct = load_triangulation2(bundled_complex("OCT8"));
    std::size_t tor_traces = tally.traces;
    for (const char* name : {"oct8_surface_lex", "oct8_surface_lex_b"}) {
        auto o = load_order_file(order_path(name), context_of(oct));
        trace_many(build_ball(oct, o, Valuation::functional(o), std::nullopt), 250, 11, 300, tally);
    }
    std::ostringstream d;
    d << tally.traces << " traces (" << tor_traces << " TOR2, " << tally.traces - tor_traces << " OCT8), "
      << tally.twice << " WallCrossedTwice, " << tally.other << " other errors " << tally.note;
    return {tally.traces >= 1000 && tally.twice == 0 && tally.other == 0, d.str()};
}

Outcome criterion4() {
    std::size_t checks = 0, passed = 0, skipped = 0;
    std::string notes;
    const std::vector<std::pair<std::string, std::vector<std::string>>> plan{
        {"TOR2", {"tor2_sqrt2", "z2_lambda", "z2_lex_kernel_10", "z2_lex_kernel_1m1", "z2_lex_kernel_21", "z2_lambda_chain"}},
        {"OCT8", {"oct8_surface_lex", "oct8_surface_lex_b", "oct8_h1_only"}}};
    for (const auto& [cx, orders] : plan) {
        auto t = load_triangulation2(bundled_complex(cx));
        for (const auto& name : orders) {
            auto o = load_order_file(order_path(name), context_of(t));
            try {
                check_edges_positive_or_flip(o, t.edge_words, t.edges.names());
            } catch (const Error& e) {
                // partial order that identifies an edge with the unit: not admissible for tracing
                ++skipped;
                notes += " " + name + " inadmissible (" + e.kind() + ");";
                continue;
            }
            auto table = holonomy_table(t, o);
            auto ball = build_ball(t, o, Valuation::table(table, o), std::nullopt);
            for (std::size_t tri = 0; tri < t.triangle_count(); ++tri) {
                auto rep = holonomy_check(ball, table, o, tri);
                ++checks;
                if (rep.ok && rep.samples >= 100) ++passed;
                else notes += " " + cx + "/" + name + "/T" + std::to_string(tri) + ": " + rep.failure + ";";
            }
        }
    }
    std::ostringstream d;
    d << passed << "/" << checks << " triangle checks at >= 100 levels, " << skipped << " orders skipped;" << notes;
    return {checks > 0 && passed == checks, d.str()};
}

struct Oct8 {
    Triangulation2 t = load_triangulation2(bundled_complex("OCT8"));
    HyperbolicModel m = build_model(t);
    OrderOracle lex = load_order_file(order_path("oct8_surface_lex"), context_of(t));
    OrderOracle lex_b = load_order_file(order_path("oct8_surface_lex_b"), context_of(t));
};

Oct8& oct8() {
    static Oct8 o;
    return o;
}

double max_endpoint_shift(const Lamination& x, const Lamination& y) {
    double worst = 0;
    for (std::size_t i = 0; i < x.developed.size() && i < y.developed.size(); ++i) {
        const auto& a = x.developed[i];
        const auto& b = y.developed[i];
        if (!(a.forward.converged && a.backward.converged && b.forward.converged && b.backward.converged)) continue;
        worst = std::max({worst, angular_distance(a.forward.angle, b.forward.angle),
                          angular_distance(a.backward.angle, b.backward.angle)});
    }
    return worst;
}

Outcome criterion5() {
    auto& w = oct8();
    auto t0 = Clock::now();
    auto ball = build_ball(w.t, w.lex, Valuation::functional(w.lex), std::nullopt);
    StraightenConfig cfg;  // 50 samples, eps 1e-3, cap 2000
    cfg.early_stop = false;
    Lamination base = straighten_lamination(w.m, ball, cfg);
    cfg.max_crossings *= 2;
    Lamination doubled = straighten_lamination(w.m, ball, cfg);
    const double secs = seconds_since(t0);
    const double shift = max_endpoint_shift(base, doubled);
    const double hd = compare_laminations(base, doubled);
    std::ostringstream d;
    d << base.converged << "/" << base.samples << " converged, " << base.leaves.size() << " leaves, "
      << base.linked_pairs.size() << " crossing pairs, endpoint shift at doubled cap " << shift << ", Hausdorff " << hd
      << ", max quasi ratio " << base.max_quasi_ratio << ", " << secs << " s";
    return {base.converged > 0 && base.linked_pairs.empty() && doubled.linked_pairs.empty() && shift <= cfg.eps &&
                secs < 60,
            d.str()};
}

Outcome criterion6() {
    auto& w = oct8();
    StraightenConfig cfg;
    auto la = straighten_lamination(w.m, build_ball(w.t, w.lex, Valuation::functional(w.lex), std::nullopt), cfg);
    auto lb = straighten_lamination(w.m, build_ball(w.t, w.lex_b, Valuation::functional(w.lex_b), std::nullopt), cfg);
    const double d = compare_laminations(la, lb);
    std::ostringstream s;
    s << "Hausdorff distance " << d << " between blow-ups (" << la.leaves.size() << " vs " << lb.leaves.size()
      << " leaves), threshold " << 2 * cfg.eps;
    return {d < 2 * cfg.eps, s.str()};
}

Outcome criterion7() {
    auto& w = oct8();
    StraightenConfig cfg;
    auto r = perturb_and_compare(w.t, w.lex, {0, 1, 0, -1}, {ratio(1, 10), ratio(1, 100), ratio(1, 1000)}, cfg);
    std::ostringstream d;
    d << "distances";
    for (double x : r.distances) d << " " << x;
    d << " at sizes 0.1, 0.01, 0.001";
    return {r.non_increasing && r.distances.size() == 3, d.str()};
}

Outcome criterion8() {
    auto t = load_triangulation3(bundled_complex("T3CUBE"));
    auto link = build_link_sphere(t);
    Enumeration e;
    try {
        e = enumerate_directions(t);
    } catch (const Error& err) {
        return {false, std::string("enumeration failed: ") + err.what()};
    }
    std::size_t coloring_ok = 0;
    for (const auto& row : e.rows)
        if (row.tets_valid && row.report.blue == 24 && row.report.black == 12) ++coloring_ok;
    std::ostringstream d;
    d << e.rows.size() << " directions, " << e.valid << " valid, " << coloring_ok << " with 24 blue / 12 black, "
      << e.local_orientation << " local orientations, " << e.regular << " regular, 0 violations, link V-E+F = "
      << link.euler();
    return {e.rows.size() == 128 && coloring_ok == e.valid && e.valid > 0 && link.euler() == 2, d.str()};
}

Outcome criterion9() {
    auto t = load_triangulation3(bundled_complex("T3CUBE"));
    OrderContext ctx;
    ctx.generators = t.basis;
    ctx.relators = t.relators;
    auto o = load_order_file(order_path("t3_lex"), ctx);
    Direction d = order_induced_direction(t, o);
    AuditReport r = decide_regularity(t, d);
    // linear projection: x -> N^2 x0 + N x1 + x2 induces the lex order on edges for large N
    bool projection_agrees = true;
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
        auto v = abelianize(t.edge_words[e], t.basis.rank());
        std::int64_t phi = 0;
        for (std::size_t k = 0; k < v.size(); ++k) phi = phi * 1000 + v[k];
        projection_agrees = projection_agrees && ((phi > 0) == (d[e] > 0)) && phi != 0;
    }
    auto e = enumerate_directions(t);
    std::size_t lex_like = 0;  // directions induced by some Z^3 order that are local orientations
    for (const auto& row : e.rows)
        if (row.realizable == Realizability::Yes && row.report.is_local_orientation) ++lex_like;
    std::ostringstream s;
    s << "direction " << format_direction(d) << ": local orientation " << (r.is_local_orientation ? "yes" : "no")
      << ", red components " << r.red_components << ", projection " << (projection_agrees ? "agrees" : "disagrees")
      << "; order-realizable directions " << e.realizable << ", of which local orientations " << lex_like;
    return {r.red_components == 1 && r.is_local_orientation && projection_agrees, s.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d: %s  %s  (%.2f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
