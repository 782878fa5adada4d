#include "floation/floation2.hpp"

#include <algorithm>
#include <cmath>

#include "floation/error.hpp"
#include "floation/order_io.hpp"

namespace flo {

namespace {

constexpr double kLayer = 0.1;

double squash(double d) { return d / (2.0 * (1.0 + std::abs(d))); }

int level_sign(const Level& a, const Level& b) { return compare_levels(a, b); }

Level affine(const Level& p, const Level& q, const Rational& w) { return affine_level(p, q, w); }

}  // namespace

Level affine_level(const Level& p, const Level& q, const Rational& w) {
    Level out;
    for (std::size_t k = 0; k < p.size(); ++k) out.push_back(p[k] * (1 - w) + q[k] * w);
    return out;
}

Valuation Valuation::functional(const OrderOracle& o) {
    if (!o.is_group_backend()) throw Error(ErrorCode::Order, "NotAGroupOrder", "functional valuation needs a group order");
    auto oracle = std::make_shared<const OrderOracle>(o);
    return Valuation([oracle](const NilElement& h) -> std::optional<Level> { return oracle->level(h); }, "functional",
                     false);
}

Valuation Valuation::table(const EmbeddingTable& t, const OrderOracle& o) {
    if (!o.is_group_backend()) throw Error(ErrorCode::Order, "NotAGroupOrder", "table valuation needs a group order");
    auto oracle = std::make_shared<const OrderOracle>(o);
    auto table = std::make_shared<const EmbeddingTable>(t);
    auto q = NumberField::rationals();
    return Valuation(
        [oracle, table, q](const NilElement& h) -> std::optional<Level> {
            auto v = table->value_by_key(oracle->element_key(h));
            if (!v) return std::nullopt;
            return Level{AlgebraicNumber(q, *v)};
        },
        "table", true);
}

NilQuotient label_quotient(const Triangulation2& t) { return NilQuotient(t.basis.rank(), t.relators); }

LiftedBall::LiftedBall(const Triangulation2& t, NilQuotient q, Valuation v, std::optional<int> radius)
    : t_(std::make_shared<const Triangulation2>(t)), q_(std::move(q)), v_(std::move(v)), radius_(radius) {
    for (const auto& tri : t.triangles) {
        std::array<NilElement, 3> side, prefix;
        for (std::size_t k = 0; k < 3; ++k) {
            NilElement e = q_.image(t.edge_words[tri[k].edge]);
            side[k] = tri[k].sign > 0 ? e : q_.inverse(e);
        }
        prefix[0] = q_.identity();
        prefix[1] = side[0];
        prefix[2] = q_.multiply(side[0], side[1]);
        side_.push_back(side);
        prefix_.push_back(prefix);
    }
    if (radius_) {
        std::vector<NilElement> frontier{q_.identity()};
        std::vector<NilElement> order{q_.identity()};
        labels_.insert(q_.identity());
        for (int r = 0; r < *radius_; ++r) {
            std::vector<NilElement> next;
            for (const auto& h : frontier)
                for (std::size_t g = 0; g < q_.rank(); ++g)
                    for (int s : {1, -1}) {
                        NilElement x = q_.multiply(h, q_.letter(g, s));
                        if (labels_.insert(x).second) {
                            next.push_back(x);
                            order.push_back(x);
                        }
                    }
            frontier = std::move(next);
        }
        for (const auto& h : order)
            for (std::size_t tri = 0; tri < t.triangle_count(); ++tri) lifts_.push_back({tri, h});
    } else {
        for (std::size_t tri = 0; tri < t.triangle_count(); ++tri) lifts_.push_back({tri, q_.identity()});
    }
}

NilElement LiftedBall::corner_label(const LiftedTriangle& l, std::size_t k) const {
    return q_.multiply(l.label, prefix_.at(l.triangle)[k]);
}

bool LiftedBall::contains(const LiftedTriangle& l) const {
    if (l.triangle >= prefix_.size()) return false;
    return !radius_ || labels_.count(l.label) > 0;
}

std::optional<std::array<Level, 3>> LiftedBall::corners(const LiftedTriangle& l) const {
    if (!contains(l)) return std::nullopt;
    std::array<Level, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        NilElement h = corner_label(l, k);
        auto it = cache_.find(h);
        if (it == cache_.end()) it = cache_.emplace(h, v_(h)).first;
        if (!it->second) return std::nullopt;
        out[k] = *it->second;
    }
    return out;
}

void LiftedBall::override_value(const NilElement& h, Level value) { cache_[h] = std::move(value); }

LiftedBall::Neighbor LiftedBall::neighbor(const LiftedTriangle& l, std::size_t side) const {
    const auto& t = *t_;
    const Side s = t.triangles[l.triangle][side];
    const auto& slots = t.slots[s.edge];
    const SlotRef other =
        (slots[0].triangle == l.triangle && slots[0].side == side) ? slots[1] : slots[0];
    const Side s2 = t.triangles[other.triangle][other.side];
    const std::size_t c = tail_corner(s, side), c2 = tail_corner(s2, other.side);
    NilElement tail = q_.multiply(l.label, prefix_[l.triangle][c]);
    NilElement h2 = q_.multiply(tail, q_.inverse(prefix_[other.triangle][c2]));
    return Neighbor{{other.triangle, std::move(h2)}, other.side};
}

LiftedEdge LiftedBall::lifted_edge(const LiftedTriangle& l, std::size_t side) const {
    const Side s = t_->triangles[l.triangle][side];
    return LiftedEdge{s.edge, corner_label(l, tail_corner(s, side))};
}

LiftedBall build_ball(const Triangulation2& t, const OrderOracle& o, const Valuation& v, std::optional<int> radius) {
    if (radius && *radius < 0) throw Error(ErrorCode::Usage, "BadRadius", "radius must be nonnegative");
    if (o.rank() != t.basis.rank())
        throw Error(ErrorCode::Order, "RankMismatch",
                    "order has rank " + std::to_string(o.rank()) + " but the complex has " +
                        std::to_string(t.basis.rank()) + " generators");
    check_edges_positive_or_flip(o, t.edge_words, t.edges.names());
    NilQuotient q = label_quotient(t);
    if (std::holds_alternative<SurfaceLexOrder>(o.backend()) &&
        o.quotient().relator_lattice().basis() != q.relator_lattice().basis())
        throw Error(ErrorCode::Order, "QuotientMismatch", "order relators differ from the complex's relators");
    return LiftedBall(t, std::move(q), v, radius);
}

const char* to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::Open: return "Open";
        case TraceStatus::ClosedCandidate: return "ClosedCandidate";
        case TraceStatus::HitBallBoundary: return "HitBallBoundary";
    }
    return "?";
}

TraceStatus LeafTrace::status() const {
    if (forward.status == TraceStatus::HitBallBoundary || backward.status == TraceStatus::HitBallBoundary)
        return TraceStatus::HitBallBoundary;
    if (forward.status == TraceStatus::ClosedCandidate || backward.status == TraceStatus::ClosedCandidate)
        return TraceStatus::ClosedCandidate;
    return TraceStatus::Open;
}

WallPosition wall_position(const Level& level, const Level& a, const Level& b) {
    std::size_t k = 0;
    while (k < a.size() && a[k] == b[k]) ++k;
    if (k == a.size()) throw Error(ErrorCode::Trace, "DegenerateWall", "wall endpoints have equal values");
    // first nonzero difference beyond k, in magnitude
    auto tail_gap = [&](const Level& x, const Level& y) {
        for (std::size_t j = k + 1; j < x.size(); ++j) {
            AlgebraicNumber d = x[j] - y[j];
            if (!d.is_zero()) return std::abs(d.to_double());
        }
        return 0.0;
    };
    if (level[k] == a[k]) return {kLayer * (0.5 + squash(tail_gap(level, a))), 0.0};
    if (level[k] == b[k]) return {1.0 - kLayer * (0.5 + squash(tail_gap(level, b))), 0.0};
    const double den = (b[k] - a[k]).to_double();
    const double t = std::clamp((level[k] - a[k]).to_double() / den, 0.0, 1.0);
    double t2 = 0;
    if (k + 1 < a.size())
        t2 = ((level[k + 1] - a[k + 1]).to_double() - t * (b[k + 1] - a[k + 1]).to_double()) / den;
    return {t, t2};
}

double wall_parameter(const Level& level, const Level& a, const Level& b) { return wall_position(level, a, b).t; }

namespace {

// The two sides crossed by the level inside a lift, ascending.
std::array<std::size_t, 2> crossing_sides(const std::array<Level, 3>& c, const Level& L) {
    int s[3];
    for (std::size_t k = 0; k < 3; ++k) {
        s[k] = level_sign(c[k], L);
        if (s[k] == 0) throw Error(ErrorCode::Trace, "SingularLevel", "level equals a corner value");
    }
    std::array<std::size_t, 2> out{};
    std::size_t n = 0;
    for (std::size_t k = 0; k < 3; ++k)
        if (s[k] != s[(k + 1) % 3]) out[n++] = k;
    if (n != 2) throw Error(ErrorCode::Trace, "LevelOutsideTriangle", "level is not strictly inside the triangle");
    return out;
}

WallPosition side_position(const LiftedBall& ball, const std::array<Level, 3>& c, const LiftedTriangle& l,
                           std::size_t side, const Level& L) {
    const Side s = ball.complex().triangles[l.triangle][side];
    const std::size_t tail = LiftedBall::tail_corner(s, side), head = tail == side ? (side + 1) % 3 : side;
    return wall_position(L, c[tail], c[head]);
}

}  // namespace

LeafTrace trace_leaf(const LiftedBall& ball, const LeafStart& start, std::size_t max_crossings,
                     const RayObserver& observe) {
    auto c0 = ball.corners(start.lift);
    if (!c0) throw Error(ErrorCode::Trace, "StartOutsideBall", "start triangle is not in the ball");
    const Level& L = start.level;
    if (L.size() != (*c0)[0].size()) throw Error(ErrorCode::Trace, "BadLevel", "level has the wrong number of components");
    const auto sides = crossing_sides(*c0, L);

    LeafTrace tr;
    tr.start = start;
    std::unordered_set<LiftedEdge, LiftedEdgeHash> visited;

    auto run = [&](Ray& ray, std::size_t exit_side, bool forward) {
        LiftedTriangle lift = start.lift;
        std::array<Level, 3> corners = *c0;
        bool stop = false;
        for (;;) {
            const WallPosition pos = side_position(ball, corners, lift, exit_side, L);
            const double t = pos.t;
            if (stop || ray.crossings.size() >= max_crossings) {
                ray.terminal = {lift, exit_side, t};
                ray.status = TraceStatus::Open;
                return;
            }
            LiftedEdge wall = ball.lifted_edge(lift, exit_side);
            auto nb = ball.neighbor(lift, exit_side);
            auto nc = ball.corners(nb.lift);
            if (!nc) {
                ray.terminal = {lift, exit_side, t};
                ray.status = TraceStatus::HitBallBoundary;
                return;
            }
            if (!visited.insert(wall).second)
                throw Error(ErrorCode::Theorem, "WallCrossedTwice",
                            "leaf re-entered wall of edge " + ball.complex().edges.name(wall.edge));
            ray.crossings.push_back({wall, t, pos.t2, lift, exit_side, nb.lift, nb.side});
            if (observe) stop = observe(forward, ray.crossings.back());
            const auto next = crossing_sides(*nc, L);
            if (next[0] != nb.side && next[1] != nb.side)
                throw Error(ErrorCode::Theorem, "InconsistentCrossing", "entry side is not crossed by the level");
            exit_side = next[0] == nb.side ? next[1] : next[0];
            lift = nb.lift;
            corners = std::move(*nc);
        }
    };
    run(tr.forward, sides[0], true);
    run(tr.backward, sides[1], false);
    return tr;
}

Level generic_level(const LiftedBall& ball, const LiftedTriangle& lift, bool pin_leading) {
    auto c = ball.corners(lift);
    if (!c) throw Error(ErrorCode::Trace, "StartOutsideBall", "start triangle is not in the ball");
    std::array<std::size_t, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return level_sign((*c)[i], (*c)[j]) < 0; });
    const Level &p = (*c)[idx[0]], &q = (*c)[idx[1]], &r = (*c)[idx[2]];
    if (!pin_leading || p.size() < 2) return affine(p, q, ratio(1, 3));
    const auto field = p[0].field();
    for (const Rational& w : {ratio(1, 3), ratio(-1, 3), ratio(1, 7), ratio(-1, 7)}) {
        Level L(p.size(), AlgebraicNumber(field));
        L[1] = AlgebraicNumber(field, w);
        if (level_sign(p, L) < 0 && level_sign(L, r) < 0 && level_sign(L, q) != 0) return L;
    }
    throw Error(ErrorCode::Trace, "NoGenericLevel", "no pinned level fits inside the start triangle");
}

HolonomyReport holonomy_check(const LiftedBall& ball, const EmbeddingTable& emb, const OrderOracle& o,
                              std::size_t triangle) {
    HolonomyReport rep;
    const auto& t = ball.complex();
    if (triangle >= t.triangle_count()) throw Error(ErrorCode::Usage, "UnknownTriangle", "triangle id out of range");
    const auto& q = ball.quotient();

    auto fail = [&](std::string why) {
        rep.ok = false;
        rep.failure = std::move(why);
        return rep;
    };
    auto scalar = [](const Level& l) -> std::optional<Rational> {
        if (l.size() != 1 || !l[0].is_rational()) return std::nullopt;
        return l[0].coords().empty() ? Rational(0) : l[0].coords()[0];
    };

    std::array<Word, 3> prefix;
    {
        const auto& tri = t.triangles[triangle];
        auto side_word = [&](std::size_t k) {
            Word w = t.edge_words[tri[k].edge];
            return tri[k].sign > 0 ? w : w.inverse();
        };
        prefix[1] = side_word(0);
        prefix[2] = prefix[1] * side_word(1);
    }
    auto base = ball.corners({triangle, q.identity()});
    if (!base) return fail("base lift is outside the ball");
    std::array<std::size_t, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return level_sign((*base)[i], (*base)[j]) < 0; });
    const Word alpha = prefix[idx[0]].inverse() * prefix[idx[1]];
    const Word beta = prefix[idx[1]].inverse() * prefix[idx[2]];
    const Word gamma = prefix[idx[0]].inverse() * prefix[idx[2]];
    rep.alpha = format_word(alpha, t.basis);
    rep.beta = format_word(beta, t.basis);
    rep.gamma = format_word(gamma, t.basis);

    // the lift in which gamma ends at the base point
    LiftedTriangle lift{triangle, q.image(prefix[idx[2]].inverse())};
    auto c = ball.corners(lift);
    if (!c) return fail("gamma-terminal lift is outside the ball");
    auto FP = scalar((*c)[idx[0]]), FQ = scalar((*c)[idx[1]]), FR = scalar((*c)[idx[2]]);
    if (!FP || !FQ || !FR) return fail("holonomy check needs rational corner values");
    auto iv = [&](const Word& w) { return emb.value_by_key(o.element_key(q.image(w))); };
    auto ia = iv(alpha.inverse()), ib = iv(beta.inverse()), ig = iv(gamma.inverse()), i0 = iv(Word{});
    if (!ia || !ib || !ig || !i0) return fail("table lacks an edge endpoint");
    if (*i0 != 0) return fail("identity is not embedded at 0");

    const PLMap rho_b = extend_action(emb, beta).map;
    const PLMap rho_binv = extend_action(emb, beta.inverse()).map;
    // endpoint correspondence of the three edge parameterizations
    if (*FR != 0) return fail("top corner is not at 0");
    if (*FQ != *ib) return fail("beta does not end where gamma's subinterval ends");
    if (*FP != *ig) return fail("gamma's lower endpoint disagrees with i(gamma^-1)");
    if (-rho_binv(Rational(0)) != -*FQ) return fail("alpha's 0 endpoint is not sent to -i(beta^-1)");
    if (-rho_binv(*ia) != -*FP) return fail("alpha's far endpoint is not sent to -i(gamma^-1)");
    if (rho_b(*FP) != *ia || rho_b(*FQ) != 0) return fail("beta does not carry the alpha side onto alpha");

    const int kSamples = 100;
    for (int j = 0; j < kSamples + 1; ++j) {
        const Rational L = *FP + (*FR - *FP) * ratio(j + 1, kSamples + 2);
        if (L == *FQ) continue;
        ++rep.samples;
        const Rational s_gamma = (L - *FP) / (*FR - *FP);
        const Rational x_gamma = -(*ig + s_gamma * (0 - *ig));
        if (x_gamma != -L) return fail("gamma parameter does not follow F");
        if (L > *FQ) {
            const Rational s_beta = (L - *FQ) / (*FR - *FQ);
            const Rational x_beta = -(*ib * (1 - s_beta));
            if (x_beta != x_gamma) return fail("beta -> gamma is not the identity");
        } else {
            const Rational y = -rho_b(L);
            if (y < 0 || y > -*ia) return fail("alpha parameter outside its interval");
            if (-rho_binv(-y) != x_gamma) return fail("alpha -> gamma is not x -> -rho(beta^-1)(-x)");
        }
    }
    if (rep.samples < static_cast<std::size_t>(kSamples)) return fail("too few sample levels");
    rep.ok = true;
    return rep;
}

EmbeddingTable holonomy_table(const Triangulation2& t, const OrderOracle& o) {
    std::vector<Word> gens;
    for (std::size_t i = 0; i < t.basis.rank(); ++i) gens.push_back(Word::generator(i));
    auto seq = breadth_first_ball(gens, 1, oracle_keyer(o));
    for (const auto& tri : t.triangles) {
        std::array<Word, 3> prefix;
        auto side_word = [&](std::size_t k) {
            Word w = t.edge_words[tri[k].edge];
            return tri[k].sign > 0 ? w : w.inverse();
        };
        prefix[1] = side_word(0);
        prefix[2] = prefix[1] * side_word(1);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                if (a != b) seq.push_back(prefix[a].inverse() * prefix[b]);
    }
    return minimal_embed(o, seq);
}

ClosedLeafCertificate detect_closed_leaf(const Triangulation2& t, const OrderOracle& o, const TraceCaps& caps) {
    const auto* zn = std::get_if<ZnOrder>(&o.backend());
    if (!zn) throw Error(ErrorCode::Order, "NotZnOrder", "closed-leaf detection expects a Z^n functional order");
    if (t.genus() != 1 || zn->chain.n != 2)
        throw Error(ErrorCode::Usage, "NotTorus", "closed-leaf detection runs on torus triangulations");
    if (!is_total(zn->chain))
        throw Error(ErrorCode::Order, "NotTotal", "closed-leaf detection needs a total order");
    auto ball = build_ball(t, o, Valuation::functional(o), std::nullopt);
    const auto& q = ball.quotient();
    const auto kernel = kernel_generator(zn->chain);
    const bool pin = zn->chain.functionals.size() >= 2;

    ClosedLeafCertificate out;
    LiftedTriangle start{0, q.identity()};
    LeafTrace tr = trace_leaf(ball, {start, generic_level(ball, start, pin)}, caps.max_crossings);
    out.crossings = tr.crossing_count();

    for (const Ray* ray : {&tr.forward, &tr.backward}) {
        const auto& cr = ray->crossings;
        const std::size_t n = cr.size();
        for (std::size_t P = 1; 3 * P <= n; ++P) {
            bool ok = true;
            std::optional<NilElement> g;
            for (std::size_t i = n - 3 * P; i + P < n && ok; ++i) {
                const auto &a = cr[i], &b = cr[i + P];
                if (a.wall.edge != b.wall.edge || a.from.triangle != b.from.triangle || a.from_side != b.from_side) {
                    ok = false;
                    break;
                }
                NilElement d = q.multiply(b.to.label, q.inverse(a.to.label));
                if (!g)
                    g = d;
                else if (!(*g == d))
                    ok = false;
            }
            if (!ok || !g || q.is_identity(*g)) continue;
            // corresponding crossings move strictly monotonically and do not spread out
            for (std::size_t j = n - P; j < n && ok; ++j) {
                const Crossing &c0 = cr[j - 2 * P], &c1 = cr[j - P], &c2 = cr[j];
                auto diff = [](const Crossing& x, const Crossing& y) {
                    return x.t != y.t ? std::pair{y.t - x.t, 0.0} : std::pair{0.0, y.t2 - x.t2};
                };
                auto sgn = [](std::pair<double, double> d) {
                    double v = d.first != 0 ? d.first : d.second;
                    return (v > 0) - (v < 0);
                };
                auto mag = [](std::pair<double, double> d) {
                    return std::pair{std::abs(d.first), d.first != 0 ? 0.0 : std::abs(d.second)};
                };
                const auto d1 = diff(c0, c1), d2 = diff(c1, c2);
                const int s1 = sgn(d1), s2 = sgn(d2);
                const auto m1 = mag(d1), m2 = mag(d2);
                const bool spreading = m2.first > m1.first * (1 + 1e-12) ||
                                       (m2.first == 0 && m1.first == 0 && m2.second > m1.second * (1 + 1e-12));
                ok = s1 != 0 && s1 == s2 && !spreading;
            }
            if (!ok) continue;
            const IntVec cls = g->x;
            IntVec neg(cls.size());
            for (std::size_t k = 0; k < cls.size(); ++k) neg[k] = -cls[k];
            const bool kernel_ok = kernel && (cls == *kernel || neg == *kernel);
            if (!kernel_ok) continue;
            out.found = true;
            out.kernel_check = true;
            out.period = P;
            out.period_class = *kernel;
            Word w;
            for (std::size_t k = 0; k < kernel->size(); ++k) w = w * power(Word::generator(k), static_cast<int>((*kernel)[k]));
            out.period_word = w;
            return out;
        }
    }
    return out;
}

nlohmann::json trace_to_json(const LeafTrace& tr, const LiftedBall& ball) {
    using nlohmann::json;
    const auto& t = ball.complex();
    auto label = [](const NilElement& h) { return json{{"x", h.x}, {"c", h.c}}; };
    auto ray_json = [&](const Ray& r) {
        json cs = json::array();
        for (const auto& c : r.crossings)
            cs.push_back({{"edge", t.edges.name(c.wall.edge)},
                          {"tail", label(c.wall.tail)},
                          {"t", c.t},
                          {"from_triangle", c.from.triangle},
                          {"to_triangle", c.to.triangle}});
        return json{{"status", to_string(r.status)},
                    {"crossings", cs},
                    {"terminal", {{"triangle", r.terminal.lift.triangle}, {"side", r.terminal.side}, {"t", r.terminal.t}}}};
    };
    json level = json::array();
    for (const auto& a : tr.start.level) level.push_back(to_json(a));
    return json{{"start", {{"triangle", tr.start.lift.triangle}, {"label", label(tr.start.lift.label)}, {"level", level}}},
                {"status", to_string(tr.status())},
                {"forward", ray_json(tr.forward)},
                {"backward", ray_json(tr.backward)}};
}

}  // namespace flo
