#include "floation/straighten.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "floation/error.hpp"

namespace flo {

namespace {

constexpr double kOverflowNorm = 1e150;
constexpr double kEarlyStopFraction = 1.0 / 16;
constexpr double kPrecisionFloor = 1e-9;  // arcs this short are at the limit of double angles

Arc transform(const Mobius& M, const Arc& a) {
    if (a.length >= 2 * std::numbers::pi) return a;
    double s = std::arg(M(std::polar(1.0, a.start)));
    double e = std::arg(M(std::polar(1.0, a.start + a.length)));
    return Arc{wrap_angle(s), wrap_angle(e - s)};
}

/// Incremental nested-interval state of one ray.
struct RayState {
    const HyperbolicModel* m;
    double eps;
    Mobius M;
    RayEndpoint out;
    Cx origin{};
    bool have_prev = false;
    std::size_t prev_side = 0;
    double prev_t = 0;
    double path = 0;

    RayState(const HyperbolicModel& model, double e) : m(&model), eps(e) {}

    /// Returns false once the developing matrix overflows or the arcs stop nesting.
    bool add(const Crossing& c) {
        const std::size_t tri = c.from.triangle, side = c.from_side;
        const Cx local = m->side_point(tri, side, c.t);
        const Cx global = M(local);
        if (out.interval.length < kPrecisionFloor) return false;
        const Arc next = intersect(out.interval, transform(M, m->wall_arc[tri][side]), std::arg(global));
        if (next.length <= 0) {
            out.inconsistent = true;
            return false;
        }
        out.interval = next;

        if (!have_prev) {
            origin = global;
        } else {
            path += hyperbolic_distance(m->side_point(tri, prev_side, prev_t), local);
            const double d = hyperbolic_distance(M.inverse()(origin), local);
            if (d > 1 && std::isfinite(d)) out.max_quasi_ratio = std::max(out.max_quasi_ratio, path / d);
        }
        have_prev = true;
        prev_side = c.to_side;
        prev_t = c.t;

        M = M * m->step[tri][side];
        M.normalize();
        ++out.depth;
        if (M.norm() > kOverflowNorm) {
            out.overflow = true;
            return false;
        }
        return true;
    }

    RayEndpoint finish() {
        out.angle = out.interval.midpoint();
        out.converged = !out.inconsistent && out.interval.length < eps;
        return out;
    }
};

}  // namespace

RayEndpoint ray_interval(const HyperbolicModel& m, const Ray& ray, double eps) {
    RayState st(m, eps);
    for (const auto& c : ray.crossings)
        if (!st.add(c)) break;
    return st.finish();
}

RayEndpoint endpoint_estimate(const HyperbolicModel& m, const Ray& ray, double eps) {
    RayEndpoint r = ray_interval(m, ray, eps);
    if (!r.converged)
        throw Error(ErrorCode::Trace, "NotConverged",
                    "boundary interval still " + std::to_string(r.interval.length) + " wide after " +
                        std::to_string(r.depth) + " crossings" + (r.overflow ? " (numeric overflow)" : ""));
    return r;
}

DevelopedLeaf develop_leaf(const HyperbolicModel& m, const LeafTrace& tr, double eps) {
    DevelopedLeaf out;
    out.crossings = tr.crossing_count();
    auto points = [&](const Ray& ray) {
        std::vector<Cx> pts;
        Mobius M;
        for (const auto& c : ray.crossings) {
            pts.push_back(M(m.side_point(c.from.triangle, c.from_side, c.t)));
            M = M * m.step[c.from.triangle][c.from_side];
            M.normalize();
        }
        pts.push_back(M(m.side_point(ray.terminal.lift.triangle, ray.terminal.side, ray.terminal.t)));
        return pts;
    };
    auto back = points(tr.backward), fwd = points(tr.forward);
    out.polyline.assign(back.rbegin(), back.rend());
    out.polyline.insert(out.polyline.end(), fwd.begin(), fwd.end());
    out.forward = ray_interval(m, tr.forward, eps);
    out.backward = ray_interval(m, tr.backward, eps);
    return out;
}

double geodesic_distance(const Geodesic& g, const Geodesic& h) {
    return std::min(std::max(angular_distance(g.a, h.a), angular_distance(g.b, h.b)),
                    std::max(angular_distance(g.a, h.b), angular_distance(g.b, h.a)));
}

bool linked(const Geodesic& g, const Geodesic& h, double slack) {
    for (double x : {g.a, g.b})
        for (double y : {h.a, h.b})
            if (angular_distance(x, y) < slack) return false;
    Arc side{g.a, wrap_angle(g.b - g.a)};
    return side.contains(h.a) != side.contains(h.b);
}

std::vector<LeafStart> sample_starts(const LiftedBall& ball, std::size_t n, std::uint64_t seed) {
    const auto& t = ball.complex();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(1, 1020);
    std::vector<LeafStart> out;
    for (std::size_t i = 0; i < n; ++i) {
        LiftedTriangle lift{i % t.triangle_count(), ball.quotient().identity()};
        auto c = ball.corners(lift);
        if (!c) throw Error(ErrorCode::Trace, "StartOutsideBall", "base triangle is not in the ball");
        std::array<std::size_t, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return compare_levels((*c)[x], (*c)[y]) < 0; });
        for (;;) {
            Level L = affine_level((*c)[idx[0]], (*c)[idx[2]], ratio(pick(rng), 1021));
            if (compare_levels(L, (*c)[idx[1]]) != 0) {
                out.push_back({lift, std::move(L)});
                break;
            }
        }
    }
    return out;
}

namespace {

DevelopedLeaf straighten_one(const HyperbolicModel& m, const LiftedBall& ball, const LeafStart& s,
                             const StraightenConfig& cfg) {
    RayObserver observe;
    std::optional<RayState> st;
    bool dir = true;
    if (cfg.early_stop)
        observe = [&](bool forward, const Crossing& c) {
            if (!st || forward != dir) {
                st.emplace(m, cfg.eps);
                dir = forward;
            }
            if (!st->add(c)) return true;
            return st->out.interval.length < cfg.eps * kEarlyStopFraction;
        };
    LeafTrace tr = trace_leaf(ball, s, cfg.max_crossings, observe);
    return develop_leaf(m, tr, cfg.eps);
}

Lamination assemble(std::vector<DevelopedLeaf> dev, const StraightenConfig& cfg) {
    Lamination lam;
    lam.samples = dev.size();
    for (std::size_t i = 0; i < dev.size(); ++i) {
        const auto& d = dev[i];
        lam.max_quasi_ratio = std::max({lam.max_quasi_ratio, d.forward.max_quasi_ratio, d.backward.max_quasi_ratio});
        lam.overflow = lam.overflow || d.forward.overflow || d.backward.overflow;
        if (!d.forward.converged || !d.backward.converged ||
            angular_distance(d.forward.angle, d.backward.angle) < cfg.eps) {
            lam.not_converged.push_back(i);
            continue;
        }
        ++lam.converged;
        Geodesic g{d.backward.angle, d.forward.angle, i};
        bool dup = std::any_of(lam.leaves.begin(), lam.leaves.end(),
                               [&](const Geodesic& h) { return geodesic_distance(g, h) < cfg.eps; });
        if (dup)
            ++lam.merged;
        else
            lam.leaves.push_back(g);
    }
    for (std::size_t i = 0; i < lam.leaves.size(); ++i)
        for (std::size_t j = i + 1; j < lam.leaves.size(); ++j)
            if (linked(lam.leaves[i], lam.leaves[j], cfg.eps))
                lam.linked_pairs.emplace_back(lam.leaves[i].sample, lam.leaves[j].sample);
    lam.developed = std::move(dev);
    return lam;
}

}  // namespace

Lamination straighten_lamination(const HyperbolicModel& m, const LiftedBall& ball, const StraightenConfig& cfg) {
    const auto starts = sample_starts(ball, cfg.samples, cfg.seed);
    std::vector<DevelopedLeaf> dev(starts.size());
    std::vector<std::string> errors(starts.size());
    const long n = static_cast<long>(starts.size());
#pragma omp parallel
    {
        LiftedBall local = ball;  // the level cache is not shared between threads
#pragma omp for schedule(dynamic)
        for (long i = 0; i < n; ++i) {
            try {
                dev[i] = straighten_one(m, local, starts[i], cfg);
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw Error(ErrorCode::Theorem, "SampleFailed", "sample " + std::to_string(i) + ": " + errors[i]);
    return assemble(std::move(dev), cfg);
}

Lamination straighten_lamination_serial(const HyperbolicModel& m, const LiftedBall& ball, const StraightenConfig& cfg) {
    const auto starts = sample_starts(ball, cfg.samples, cfg.seed);
    std::vector<DevelopedLeaf> dev;
    for (const auto& s : starts) dev.push_back(straighten_one(m, ball, s, cfg));
    return assemble(std::move(dev), cfg);
}

double compare_laminations(const Lamination& x, const Lamination& y) {
    if (x.leaves.empty() || y.leaves.empty())
        throw Error(ErrorCode::Usage, "EmptyLamination", "cannot compare an empty lamination");
    auto directed = [](const Lamination& p, const Lamination& q) {
        double worst = 0;
        for (const auto& g : p.leaves) {
            double best = 1e300;
            for (const auto& h : q.leaves) best = std::min(best, geodesic_distance(g, h));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(x, y), directed(y, x));
}

PerturbationResult perturb_and_compare(const Triangulation2& t, const OrderOracle& base, const RatVec& delta,
                                       const std::vector<Rational>& sizes, const StraightenConfig& cfg) {
    const auto* s = std::get_if<SurfaceLexOrder>(&base.backend());
    if (!s) throw Error(ErrorCode::Order, "NotSurfaceOrder", "perturbation needs a surface_lex order");
    if (delta.size() != s->h1.size()) throw Error(ErrorCode::Usage, "BadPerturbation", "perturbation has the wrong rank");
    const HyperbolicModel m = build_model(t);
    auto run = [&](const OrderOracle& o) {
        return straighten_lamination(m, build_ball(t, o, Valuation::functional(o), std::nullopt), cfg);
    };
    const Lamination ref = run(base);
    PerturbationResult out;
    out.sizes = sizes;
    for (const auto& size : sizes) {
        SurfaceLexOrder p = *s;
        for (std::size_t k = 0; k < p.h1.size(); ++k)
            p.h1[k] += AlgebraicNumber(p.h1[k].field(), Rational(size * delta[k]));
        out.distances.push_back(compare_laminations(ref, run(OrderOracle(std::move(p)))));
    }
    out.non_increasing = true;
    for (std::size_t k = 1; k < out.distances.size(); ++k)
        if (out.distances[k] > out.distances[k - 1] + 2 * cfg.eps) out.non_increasing = false;
    return out;
}

nlohmann::json lamination_to_json(const Lamination& l, bool with_polylines) {
    using nlohmann::json;
    json leaves = json::array();
    for (const auto& g : l.leaves) leaves.push_back({{"sample", g.sample}, {"a", g.a}, {"b", g.b}});
    json linked = json::array();
    for (auto [i, j] : l.linked_pairs) linked.push_back({i, j});
    json out{{"samples", l.samples},
             {"converged", l.converged},
             {"merged", l.merged},
             {"leaves", leaves},
             {"not_converged", l.not_converged},
             {"linked_pairs", linked},
             {"max_quasi_ratio", l.max_quasi_ratio},
             {"overflow", l.overflow}};
    json depth = json::array();
    for (const auto& d : l.developed) depth.push_back({d.backward.depth, d.forward.depth});
    out["depths"] = depth;
    if (with_polylines) {
        json polys = json::array();
        for (const auto& d : l.developed) {
            json p = json::array();
            for (const auto& z : d.polyline) p.push_back({z.real(), z.imag()});
            polys.push_back(p);
        }
        out["polylines"] = polys;
    }
    return out;
}

}  // namespace flo
