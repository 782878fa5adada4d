#include "floation/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "floation/error.hpp"
#include "floation/floation2.hpp"

namespace flo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kResidualTolerance = 1e-9;

Cx boundary_point(double angle) { return std::polar(1.0, angle); }

}  // namespace

Mobius Mobius::operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

void Mobius::normalize() {
    Cx s = std::sqrt(a * d - b * c);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
}

double Mobius::norm() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }

double Mobius::distance_to_identity() const {
    double best = 1e300;
    for (double s : {1.0, -1.0})
        best = std::min(best, std::max({std::abs(a - s), std::abs(b), std::abs(c), std::abs(d - s)}));
    return best;
}

Mobius Mobius::rotation(double phi) { return {std::polar(1.0, phi / 2), 0, 0, std::polar(1.0, -phi / 2)}; }

Mobius Mobius::to_origin(Cx p) {
    double s = 1.0 / std::sqrt(1.0 - std::norm(p));
    return {s, -p * s, -std::conj(p) * s, s};
}

Mobius Mobius::pairing(Cx p1, Cx p2, Cx q1, Cx q2) {
    Mobius t1 = to_origin(p1), t2 = to_origin(q1);
    double phi = std::arg(t2(q2)) - std::arg(t1(p2));
    Mobius m = t2.inverse() * rotation(phi) * t1;
    m.normalize();
    return m;
}

double hyperbolic_distance(Cx z, Cx w) {
    double r = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
    return 2 * std::atanh(std::min(r, 1.0 - 1e-16));
}

Cx geodesic_point(Cx p, Cx q, double t) {
    Mobius m = Mobius::to_origin(p);
    Cx w = m(q);
    double r = std::abs(w);
    if (r == 0) return p;
    double s = std::tanh(t * std::atanh(r));
    return m.inverse()(w * (s / r));
}

std::array<double, 2> fixed_angles(const Mobius& m) {
    if (std::abs(m.c) < 1e-300) throw Error(ErrorCode::Trace, "NotHyperbolic", "isometry fixes the origin");
    Cx disc = std::sqrt((m.a - m.d) * (m.a - m.d) + 4.0 * m.b * m.c);
    Cx z1 = (m.a - m.d + disc) / (2.0 * m.c), z2 = (m.a - m.d - disc) / (2.0 * m.c);
    // attracting fixed point has |c z + d| > 1
    if (std::abs(m.c * z1 + m.d) > std::abs(m.c * z2 + m.d)) std::swap(z1, z2);
    return {wrap_angle(std::arg(z1)), wrap_angle(std::arg(z2))};
}

double wrap_angle(double x) {
    x = std::fmod(x, 2 * kPi);
    if (x < 0) x += 2 * kPi;
    return x >= 2 * kPi ? 0 : x;
}

double angular_distance(double x, double y) {
    double d = wrap_angle(x - y);
    return std::min(d, 2 * kPi - d);
}

bool Arc::contains(double angle, double slack) const {
    double d = wrap_angle(angle - start);
    return d <= length + slack || d >= 2 * kPi - slack;
}

Arc intersect(const Arc& x, const Arc& y, double hint) {
    if (x.length >= 2 * kPi) return y;
    if (y.length >= 2 * kPi) return x;
    const double ys = wrap_angle(y.start - x.start);
    std::vector<std::pair<double, double>> pieces;  // [lo, hi] relative to x.start
    auto clip = [&](double lo, double hi) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, x.length);
        if (hi > lo) pieces.emplace_back(lo, hi);
    };
    clip(ys, std::min(ys + y.length, 2 * kPi));
    if (ys + y.length > 2 * kPi) clip(0, ys + y.length - 2 * kPi);
    if (pieces.empty()) return Arc{x.start, 0};
    auto pick = pieces.front();
    if (pieces.size() > 1) {
        double h = wrap_angle(hint - x.start);
        auto it = std::find_if(pieces.begin(), pieces.end(), [&](auto p) { return h >= p.first && h <= p.second; });
        pick = it != pieces.end() ? *it
                                  : *std::max_element(pieces.begin(), pieces.end(), [](auto p, auto q) {
                                        return p.second - p.first < q.second - q.first;
                                    });
    }
    return Arc{wrap_angle(x.start + pick.first), pick.second - pick.first};
}

Mobius HyperbolicModel::rho(const Word& w) const {
    Mobius m;
    for (const auto& l : w.letters()) m = m * (l.sign > 0 ? generators[l.gen] : generators[l.gen].inverse());
    m.normalize();
    return m;
}

Cx HyperbolicModel::centroid(std::size_t tri) const {
    const auto& c = corners[tri];
    return anchor_inverse[tri]((c[0] + c[1] + c[2]) / 3.0);
}

HyperbolicModel build_model(const Triangulation2& t) {
    if (!t.polygon)
        throw Error(ErrorCode::Invalid, "NoPolygon", "complex '" + t.name + "' declares no fundamental polygon");
    const auto& poly = *t.polygon;
    const std::size_t n = poly.size();
    const int g = t.genus();
    if (g < 2)
        throw Error(ErrorCode::Invalid, "GenusTooSmall", "hyperbolic model needs genus >= 2, got " + std::to_string(g));
    if (n != static_cast<std::size_t>(4 * g))
        throw Error(ErrorCode::Invalid, "BadPolygon", "polygon must have 4g sides");

    // sides a b a^-1 b^-1 per block, each a basis generator
    std::vector<std::size_t> gen_of_side(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Word& w = t.edge_words[poly[k].edge];
        if (w.length() != 1 || w.letters()[0].sign != 1)
            throw Error(ErrorCode::Invalid, "BadPolygon", "polygon sides must be basis generators");
        gen_of_side[k] = w.letters()[0].gen;
    }
    for (std::size_t m = 0; m < n; m += 4) {
        bool ok = poly[m].sign == 1 && poly[m + 1].sign == 1 && poly[m + 2].sign == -1 && poly[m + 3].sign == -1 &&
                  poly[m].edge == poly[m + 2].edge && poly[m + 1].edge == poly[m + 3].edge &&
                  poly[m].edge != poly[m + 1].edge;
        if (!ok) throw Error(ErrorCode::Invalid, "BadPolygon", "polygon word must be a product of commutators");
    }

    HyperbolicModel M;
    M.genus = g;
    const double alpha = 2 * kPi / static_cast<double>(n);
    const double R = std::acosh(1.0 / std::tan(kPi / static_cast<double>(n)) / std::tan(alpha / 2));
    const double r = std::tanh(R / 2);
    for (std::size_t k = 0; k < n; ++k)
        M.vertices.push_back(std::polar(r, kPi / static_cast<double>(n) + 2 * kPi * static_cast<double>(k) / static_cast<double>(n)));
    auto v = [&](std::size_t k) { return M.vertices[k % n]; };

    M.generators.assign(t.basis.rank(), Mobius{});
    M.pairings.assign(t.basis.rank(), Mobius{});
    Mobius prefix;  // rho of the product of earlier commutators
    for (std::size_t m = 0; m < n; m += 4) {
        Mobius pa = Mobius::pairing(v(m + 3), v(m + 2), v(m), v(m + 1));
        Mobius pb = Mobius::pairing(v(m + 4), v(m + 3), v(m + 1), v(m + 2));
        Mobius pinv = prefix.inverse();
        Mobius A = pinv * pa * pb * pa.inverse() * prefix;
        A.normalize();
        Mobius B = A.inverse() * pinv * pa.inverse() * prefix * A;
        B.normalize();
        M.generators[gen_of_side[m]] = A;
        M.generators[gen_of_side[m + 1]] = B;
        M.pairings[gen_of_side[m]] = pa;
        M.pairings[gen_of_side[m + 1]] = pb;
        prefix = prefix * A * B * A.inverse() * B.inverse();
        prefix.normalize();
    }
    for (const auto& rel : t.relators)
        M.relation_residual = std::max(M.relation_residual, M.rho(rel).distance_to_identity());

    // polygon vertex labels
    const NilQuotient q = label_quotient(t);
    std::vector<Word> delta_word{Word{}};
    std::vector<NilElement> delta{q.identity()};
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Word s = t.edge_words[poly[k].edge];
        delta_word.push_back(delta_word.back() * (poly[k].sign > 0 ? s : s.inverse()));
        delta.push_back(q.image(delta_word.back()));
    }
    for (std::size_t k = 0; k < n; ++k)
        M.vertex_residual = std::max(M.vertex_residual, std::abs(M.rho(delta_word[k])(v(0)) - v(k)));

    // base triangles inside the polygon
    std::vector<std::array<Word, 3>> prefix_words;
    for (std::size_t tri = 0; tri < t.triangles.size(); ++tri) {
        std::array<Word, 3> pw;
        std::array<NilElement, 3> pe;
        pw[0] = Word{};
        for (std::size_t k = 0; k < 2; ++k) {
            const Side s = t.triangles[tri][k];
            pw[k + 1] = pw[k] * (s.sign > 0 ? t.edge_words[s.edge] : t.edge_words[s.edge].inverse());
        }
        for (std::size_t k = 0; k < 3; ++k) pe[k] = q.image(pw[k]);
        prefix_words.push_back(pw);
        bool placed = false;
        for (std::size_t i = 0; i < n && !placed; ++i) {
            std::array<std::size_t, 3> idx{i, n, n};
            for (std::size_t k = 1; k < 3; ++k) {
                NilElement target = q.multiply(delta[i], pe[k]);
                for (std::size_t j = 0; j < n; ++j)
                    if (delta[j] == target) idx[k] = j;
            }
            if (idx[1] == n || idx[2] == n || idx[1] == i || idx[2] == i || idx[1] == idx[2]) continue;
            M.corners.push_back({v(idx[0]), v(idx[1]), v(idx[2])});
            M.anchor_inverse.push_back(M.rho(delta_word[i]).inverse());
            placed = true;
        }
        if (!placed)
            throw Error(ErrorCode::Invalid, "BadPolygon",
                        "triangle " + std::to_string(tri) + " is not spanned by polygon vertices");
        for (std::size_t k = 0; k < 3; ++k)
            M.vertex_residual = std::max(
                M.vertex_residual, std::abs(M.anchor_inverse[tri](M.corners[tri][k]) - M.rho(pw[k])(v(0))));
    }

    for (std::size_t tri = 0; tri < t.triangles.size(); ++tri) {
        std::array<std::array<Cx, 2>, 3> ends;
        for (std::size_t side = 0; side < 3; ++side) {
            std::size_t tail = LiftedBall::tail_corner(t.triangles[tri][side], side);
            std::size_t head = tail == side ? (side + 1) % 3 : side;
            ends[side] = {M.anchor_inverse[tri](M.corners[tri][tail]), M.anchor_inverse[tri](M.corners[tri][head])};
        }
        M.side_ends.push_back(ends);
    }

    // steps, walls and far sides
    for (std::size_t tri = 0; tri < t.triangles.size(); ++tri) {
        std::array<Mobius, 3> steps;
        std::array<Arc, 3> arcs;
        std::array<std::array<double, 2>, 3> ends;
        for (std::size_t side = 0; side < 3; ++side) {
            const Side s = t.triangles[tri][side];
            const auto& slots = t.slots[s.edge];
            const SlotRef other = (slots[0].triangle == tri && slots[0].side == side) ? slots[1] : slots[0];
            const Side s2 = t.triangles[other.triangle][other.side];
            const std::size_t c = LiftedBall::tail_corner(s, side), c2 = LiftedBall::tail_corner(s2, other.side);
            steps[side] = M.rho(prefix_words[tri][c] * prefix_words[other.triangle][c2].inverse());

            Mobius frame = M.rho(prefix_words[tri][c]);
            auto fix = fixed_angles(M.rho(t.edge_words[s.edge]));
            double p = std::arg(frame(boundary_point(fix[0]))), qa = std::arg(frame(boundary_point(fix[1])));
            ends[side] = {wrap_angle(p), wrap_angle(qa)};

            // the wall runs from the repelling to the attracting end of rho(x); the entered
            // triangle lies opposite this triangle's third corner
            const auto& se = M.side_ends[tri][side];
            Mobius to0 = Mobius::to_origin(se[0]);
            Cx head = to0(se[1]), third = to0(M.anchor_inverse[tri](M.corners[tri][(side + 2) % 3]));
            const bool third_left = std::imag(third * std::conj(head)) > 0;
            arcs[side] = third_left ? Arc{wrap_angle(p), wrap_angle(qa - p)} : Arc{wrap_angle(qa), wrap_angle(p - qa)};

            // shared side must agree from both triangles
            Cx mine = M.side_point(tri, side, 0.5);
            M.vertex_residual = std::max(
                M.vertex_residual, std::abs(mine - steps[side](M.side_point(other.triangle, other.side, 0.5))));
        }
        M.step.push_back(steps);
        M.wall_arc.push_back(arcs);
        M.wall_ends.push_back(ends);
    }

    if (M.relation_residual > kResidualTolerance || M.vertex_residual > kResidualTolerance)
        throw Error(ErrorCode::Invalid, "ModelResidual",
                    "side pairings do not close up (relation " + std::to_string(M.relation_residual) + ", vertices " +
                        std::to_string(M.vertex_residual) + ")");
    return M;
}

}  // namespace flo
