#include "floation/floation3.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "floation/error.hpp"

namespace flo {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::size_t classes(const std::vector<std::size_t>& members) {
        std::set<std::size_t> roots;
        for (auto m : members) roots.insert(find(m));
        return roots.size();
    }
};

void check_length(const Triangulation3& t, const Direction& d) {
    if (d.size() != t.edge_count())
        throw Error(ErrorCode::Usage, "BadDirection",
                    "direction has " + std::to_string(d.size()) + " entries for " + std::to_string(t.edge_count()) +
                        " edges");
    for (int s : d)
        if (s != 1 && s != -1) throw Error(ErrorCode::Usage, "BadDirection", "direction entries must be +1 or -1");
}

/// Link edges of each link triangle.
std::vector<std::vector<std::size_t>> triangle_edges(const LinkSphere& L) {
    std::vector<std::vector<std::size_t>> out(L.triangle_vertices.size());
    for (std::size_t e = 0; e < L.edges.size(); ++e)
        for (auto tri : L.edges[e].triangle) out[tri].push_back(e);
    return out;
}

}  // namespace

std::string format_direction(const Direction& d) {
    std::string s;
    for (int x : d) s += x > 0 ? '+' : '-';
    return s;
}

Direction parse_direction(const std::string& spec, std::size_t edges) {
    Direction d;
    std::string token;
    std::istringstream in(spec);
    if (spec.find_first_not_of("+-") == std::string::npos) {
        for (char c : spec) d.push_back(c == '+' ? 1 : -1);
    } else {
        while (std::getline(in, token, ',')) {
            token.erase(std::remove(token.begin(), token.end(), ' '), token.end());
            if (token == "1" || token == "+1")
                d.push_back(1);
            else if (token == "-1")
                d.push_back(-1);
            else
                throw Error(ErrorCode::Parse, "ParseError", "bad direction entry '" + token + "'");
        }
    }
    if (d.size() != edges)
        throw Error(ErrorCode::Usage, "BadDirection",
                    "direction has " + std::to_string(d.size()) + " entries for " + std::to_string(edges) + " edges");
    return d;
}

Direction order_induced_direction(const Triangulation3& t, const OrderOracle& o) {
    if (o.rank() != t.basis.rank())
        throw Error(ErrorCode::Order, "RankMismatch", "order rank differs from the complex's generator count");
    return check_edges_positive_or_flip(o, t.edge_words, t.edges.names());
}

std::vector<TetStatus> validate_direction(const Triangulation3& t, const Direction& d) {
    check_length(t, d);
    std::vector<TetStatus> out;
    for (std::size_t tet = 0; tet < t.tet_count(); ++tet) {
        std::array<int, 4> outdeg{};
        for (std::size_t k = 0; k < 6; ++k) {
            const Side s = t.tet_edges[tet][k];
            const bool low_to_high = s.sign * d[s.edge] > 0;
            ++outdeg[low_to_high ? kEdgeVertices[k][0] : kEdgeVertices[k][1]];
        }
        TetStatus st;
        std::array<int, 4> sorted = outdeg;
        std::sort(sorted.begin(), sorted.end());
        st.valid = sorted == std::array<int, 4>{0, 1, 2, 3};
        if (st.valid)
            for (int v = 0; v < 4; ++v) st.position[v] = 3 - outdeg[v];
        else
            st.failure = "directed cycle among the corners";
        out.push_back(st);
    }
    return out;
}

DirectionAuditor::DirectionAuditor(const Triangulation3& t) : t_(&t), link_(build_link_sphere(t)) {}

std::vector<bool> DirectionAuditor::outgoing(const Direction& d) const {
    check_length(*t_, d);
    std::vector<bool> out;
    for (const auto& v : link_.vertices) out.push_back((v.end == 0) == (d[v.edge] > 0));
    return out;
}

AuditReport DirectionAuditor::check_local_orientation(const Direction& d) const {
    AuditReport r;
    r.tets = validate_direction(*t_, d);
    r.tets_valid = std::all_of(r.tets.begin(), r.tets.end(), [](const TetStatus& s) { return s.valid; });
    const auto out = outgoing(d);
    for (bool want : {true, false}) {
        std::vector<std::size_t> members;
        for (std::size_t v = 0; v < out.size(); ++v)
            if (out[v] == want) members.push_back(v);
        UnionFind uf(out.size());
        for (const auto& e : link_.edges)
            if (out[e.vertex[0]] == want && out[e.vertex[1]] == want) uf.unite(e.vertex[0], e.vertex[1]);
        const bool nonempty = !members.empty();
        const bool connected = nonempty && uf.classes(members) == 1;
        (want ? r.o_nonempty : r.i_nonempty) = nonempty;
        (want ? r.o_connected : r.i_connected) = connected;
    }
    // one vertex: every increasing path returns to it
    r.recurrence = true;
    r.is_local_orientation = r.tets_valid && r.o_nonempty && r.i_nonempty && r.o_connected && r.i_connected && r.recurrence;
    return r;
}

std::pair<LinkColoring, RedCurveSet> DirectionAuditor::color_and_trace_red(const Direction& d) const {
    const auto out = outgoing(d);
    LinkColoring col;
    for (const auto& e : link_.edges) {
        const bool blue = out[e.vertex[0]] == out[e.vertex[1]];
        col.color.push_back(blue ? LinkColor::Blue : LinkColor::Black);
        ++(blue ? col.blue : col.black);
    }
    const std::size_t n = t_->tet_count();
    if (col.blue != 4 * n || col.black != 2 * n)
        throw Error(ErrorCode::Theorem, "ColorCount",
                    "expected " + std::to_string(4 * n) + " blue and " + std::to_string(2 * n) + " black link edges, got " +
                        std::to_string(col.blue) + " and " + std::to_string(col.black));

    RedCurveSet red;
    const auto tri_edges = triangle_edges(link_);
    std::vector<std::size_t> arc_of(link_.triangle_vertices.size(), SIZE_MAX);
    for (std::size_t tri = 0; tri < tri_edges.size(); ++tri) {
        std::vector<std::size_t> black;
        for (auto e : tri_edges[tri])
            if (col.color[e] == LinkColor::Black) black.push_back(e);
        if (black.empty()) continue;
        if (black.size() != 2) throw Error(ErrorCode::Theorem, "ColorCount", "link triangle with one or three black edges");
        arc_of[tri] = red.triangle.size();
        red.triangle.push_back(tri);
        red.black.push_back({black[0], black[1]});
    }
    UnionFind uf(red.triangle.size());
    for (std::size_t e = 0; e < link_.edges.size(); ++e)
        if (col.color[e] == LinkColor::Black) uf.unite(arc_of[link_.edges[e].triangle[0]], arc_of[link_.edges[e].triangle[1]]);
    std::vector<std::size_t> all(red.triangle.size());
    std::iota(all.begin(), all.end(), 0);
    for (auto a : all) red.component.push_back(uf.find(a));
    red.components = uf.classes(all);
    return {std::move(col), std::move(red)};
}

AuditReport DirectionAuditor::decide_regularity(const Direction& d) const {
    AuditReport r = check_local_orientation(d);
    if (!r.tets_valid)
        throw Error(ErrorCode::Invalid, "DirectionNotTotal", "some tetrahedron is not totally ordered by the direction");
    auto [col, red] = color_and_trace_red(d);
    r.blue = col.blue;
    r.black = col.black;
    r.red_arcs = red.triangle.size();
    r.red_components = red.components;

    // regions of the sphere cut along the red arcs: a mixed link triangle splits into
    // the piece at its lone corner (1) and the rest (0)
    const auto out = outgoing(d);
    const auto& L = link_;
    auto piece = [&](std::size_t tri, std::size_t v) -> std::size_t {
        const auto& tv = L.triangle_vertices[tri];
        int same = 0;
        for (auto w : tv) same += out[w] == out[v];
        return 2 * tri + (same == 1 ? 1 : 0);
    };
    UnionFind uf(2 * L.triangle_vertices.size());
    std::vector<std::size_t> members;
    for (std::size_t tri = 0; tri < L.triangle_vertices.size(); ++tri) {
        members.push_back(2 * tri);
        const auto& tv = L.triangle_vertices[tri];
        if (out[tv[0]] != out[tv[1]] || out[tv[1]] != out[tv[2]]) members.push_back(2 * tri + 1);
    }
    for (const auto& e : L.edges)
        for (auto v : e.vertex) uf.unite(piece(e.triangle[0], v), piece(e.triangle[1], v));
    r.complement_components = uf.classes(members);

    r.is_regular = r.red_components == 1;
    if (r.is_regular != r.is_local_orientation)
        throw Error(ErrorCode::Theorem, "RegularityMismatch",
                    "red components " + std::to_string(r.red_components) + " but local orientation " +
                        (r.is_local_orientation ? "holds" : "fails"));
    if (r.complement_components != r.red_components + 1)
        throw Error(ErrorCode::Theorem, "LinkRegions",
                    std::to_string(r.red_components) + " red curves cut the link sphere into " +
                        std::to_string(r.complement_components) + " regions");
    return r;
}

AuditReport check_local_orientation(const Triangulation3& t, const Direction& d) {
    return DirectionAuditor(t).check_local_orientation(d);
}

std::pair<LinkColoring, RedCurveSet> color_and_trace_red(const Triangulation3& t, const Direction& d) {
    return DirectionAuditor(t).color_and_trace_red(d);
}

AuditReport decide_regularity(const Triangulation3& t, const Direction& d) { return DirectionAuditor(t).decide_regularity(d); }

bool abelian_feasible(const Triangulation3& t, const Direction& d) {
    check_length(t, d);
    const std::size_t r = t.basis.rank();
    std::set<IntVec> rows;
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
        IntVec v = abelianize(t.edge_words[e], r);
        for (auto& x : v) x *= d[e];
        rows.insert(v);
    }
    auto normalize = [](IntVec v) {
        std::int64_t g = 0;
        for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
        if (g > 1)
            for (auto& x : v) x /= g;
        return v;
    };
    // Fourier-Motzkin on strict homogeneous inequalities row . phi > 0
    for (std::size_t k = 0; k < r; ++k) {
        std::vector<IntVec> pos, neg;
        std::set<IntVec> next;
        for (const auto& v : rows) {
            if (v[k] > 0)
                pos.push_back(v);
            else if (v[k] < 0)
                neg.push_back(v);
            else
                next.insert(v);
        }
        for (const auto& p : pos)
            for (const auto& q : neg) {
                IntVec c(r);
                for (std::size_t j = 0; j < r; ++j) c[j] = -q[k] * p[j] + p[k] * q[j];
                next.insert(normalize(c));
            }
        rows = std::move(next);
    }
    return rows.empty();  // any survivor reads 0 > 0
}

bool provably_abelian(const Triangulation3& t) {
    const std::size_t r = t.basis.rank();
    std::vector<std::vector<bool>> commute(r, std::vector<bool>(r, false));
    for (std::size_t i = 0; i < r; ++i) commute[i][i] = true;

    auto reduce = [&](std::vector<Letter> w) {
        for (bool changed = true; changed;) {
            changed = false;
            const std::size_t n = w.size();
            for (std::size_t rot = 0; rot < n && !changed; ++rot) {
                std::vector<Letter> c(w.begin() + static_cast<long>(rot), w.end());
                c.insert(c.end(), w.begin(), w.begin() + static_cast<long>(rot));
                for (std::size_t i = 0; i < c.size() && !changed; ++i)
                    for (std::size_t j = i + 1; j < c.size(); ++j) {
                        if (c[j].gen == c[i].gen && c[j].sign == -c[i].sign) {
                            c.erase(c.begin() + static_cast<long>(j));
                            c.erase(c.begin() + static_cast<long>(i));
                            w = std::move(c);
                            changed = true;
                            break;
                        }
                        if (!commute[c[i].gen][c[j].gen]) break;
                    }
            }
        }
        return w;
    };

    for (bool progress = true; progress;) {
        progress = false;
        for (const auto& rel : t.relators) {
            auto w = reduce(rel.letters());
            if (w.size() != 4) continue;
            const auto a = w[0], b = w[1];
            if (a.gen != b.gen && w[2].gen == a.gen && w[2].sign == -a.sign && w[3].gen == b.gen && w[3].sign == -b.sign &&
                !commute[a.gen][b.gen]) {
                commute[a.gen][b.gen] = commute[b.gen][a.gen] = true;
                progress = true;
            }
        }
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (!commute[i][j]) return false;
    return true;
}

const char* to_string(Realizability r) {
    switch (r) {
        case Realizability::Yes: return "YES";
        case Realizability::No: return "NO";
        case Realizability::Unknown: return "UNKNOWN";
    }
    return "?";
}

namespace {

constexpr std::size_t kMaxEnumeratedEdges = 24;

EnumerationRow enumerate_one(const DirectionAuditor& aud, std::size_t mask, bool abelian) {
    const auto& t = aud.complex();
    EnumerationRow row;
    row.mask = mask;
    for (std::size_t e = 0; e < t.edge_count(); ++e) row.direction.push_back((mask >> e) & 1 ? 1 : -1);
    auto tets = validate_direction(t, row.direction);
    row.tets_valid = std::all_of(tets.begin(), tets.end(), [](const TetStatus& s) { return s.valid; });
    if (row.tets_valid)
        row.report = aud.decide_regularity(row.direction);
    else
        row.report.tets = std::move(tets);
    row.abelian_feasible = abelian_feasible(t, row.direction);
    if (abelian)
        row.realizable = t.h1.torsion.empty() && row.abelian_feasible ? Realizability::Yes : Realizability::No;
    return row;
}

Enumeration finish(std::vector<EnumerationRow> rows, bool only_valid) {
    Enumeration out;
    for (auto& r : rows) {
        if (only_valid && !r.tets_valid) continue;
        out.valid += r.tets_valid;
        out.local_orientation += r.report.is_local_orientation;
        out.regular += r.report.is_regular;
        out.realizable += r.realizable == Realizability::Yes;
        out.realizable_local += r.realizable == Realizability::Yes && r.report.is_local_orientation;
        out.rows.push_back(std::move(r));
    }
    return out;
}

std::size_t candidate_count(const Triangulation3& t) {
    if (t.edge_count() > kMaxEnumeratedEdges)
        throw Error(ErrorCode::Usage, "TooManyEdges",
                    std::to_string(t.edge_count()) + " edges exceed the enumeration limit of " +
                        std::to_string(kMaxEnumeratedEdges));
    return std::size_t{1} << t.edge_count();
}

}  // namespace

Enumeration enumerate_directions(const Triangulation3& t, bool only_valid) {
    const std::size_t n = candidate_count(t);
    const DirectionAuditor aud(t);
    const bool abelian = provably_abelian(t);
    std::vector<EnumerationRow> rows(n);
    std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (long m = 0; m < static_cast<long>(n); ++m) {
        try {
            rows[m] = enumerate_one(aud, static_cast<std::size_t>(m), abelian);
        } catch (const Error& e) {
            errors[m] = e.what();
        }
    }
    for (std::size_t m = 0; m < n; ++m)
        if (!errors[m].empty())
            throw Error(ErrorCode::Theorem, "AuditFailed", "direction mask " + std::to_string(m) + ": " + errors[m]);
    return finish(std::move(rows), only_valid);
}

Enumeration enumerate_directions_serial(const Triangulation3& t, bool only_valid) {
    const std::size_t n = candidate_count(t);
    const DirectionAuditor aud(t);
    const bool abelian = provably_abelian(t);
    std::vector<EnumerationRow> rows;
    for (std::size_t m = 0; m < n; ++m) rows.push_back(enumerate_one(aud, m, abelian));
    return finish(std::move(rows), only_valid);
}

std::string enumeration_csv(const Enumeration& e) {
    std::ostringstream out;
    out << "mask,direction,tets_valid,blue,black,red_arcs,red_components,o_connected,i_connected,local_orientation,regular,"
           "abelian_feasible,realizable\n";
    for (const auto& r : e.rows) {
        const auto& a = r.report;
        out << r.mask << ',' << format_direction(r.direction) << ',' << r.tets_valid << ',' << a.blue << ',' << a.black
            << ',' << a.red_arcs << ',' << a.red_components << ',' << a.o_connected << ',' << a.i_connected << ','
            << a.is_local_orientation << ',' << a.is_regular << ',' << r.abelian_feasible << ','
            << to_string(r.realizable) << '\n';
    }
    return out.str();
}

nlohmann::json audit_to_json(const Triangulation3& t, const Direction& d, const AuditReport& r) {
    using nlohmann::json;
    json tets = json::array();
    for (const auto& s : r.tets) {
        json j{{"valid", s.valid}};
        if (s.valid) j["position"] = s.position;
        else j["failure"] = s.failure;
        tets.push_back(j);
    }
    json dir = json::object();
    for (std::size_t e = 0; e < t.edge_count(); ++e) dir[t.edges.name(e)] = d[e];
    return json{{"complex", t.name},
                {"direction", dir},
                {"tets", tets},
                {"o_nonempty", r.o_nonempty},
                {"i_nonempty", r.i_nonempty},
                {"o_connected", r.o_connected},
                {"i_connected", r.i_connected},
                {"recurrence", r.recurrence},
                {"blue", r.blue},
                {"black", r.black},
                {"red_arcs", r.red_arcs},
                {"red_components", r.red_components},
                {"complement_components", r.complement_components},
                {"is_local_orientation", r.is_local_orientation},
                {"is_regular", r.is_regular},
                {"abelian_feasible", abelian_feasible(t, d)}};
}

nlohmann::json enumeration_summary(const Enumeration& e) {
    return nlohmann::json{{"candidates", e.rows.size()},
                          {"valid", e.valid},
                          {"local_orientation", e.local_orientation},
                          {"regular", e.regular},
                          {"realizable", e.realizable},
                          {"realizable_local_orientation", e.realizable_local}};
}

}  // namespace flo
