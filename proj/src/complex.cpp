#include <algorithm>
#include <numeric>

#include "complex_internal.hpp"
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
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

}  // namespace

int edge_slot(int u, int v) {
    if (u > v) std::swap(u, v);
    for (int k = 0; k < 6; ++k)
        if (kEdgeVertices[k][0] == u && kEdgeVertices[k][1] == v) return k;
    throw Error(ErrorCode::Invalid, "BadEdge", "no tetrahedron edge joins a vertex to itself");
}

namespace detail {

Presentation solve_presentation(const GeneratorSet& edges, const std::vector<std::size_t>& basis_edge,
                                const std::vector<Word>& relations) {
    const std::size_t E = edges.rank();
    std::vector<std::optional<Word>> known(E);
    for (std::size_t i = 0; i < basis_edge.size(); ++i) known.at(basis_edge[i]) = Word::generator(i);

    auto translate = [&](const std::vector<Letter>& letters, std::size_t from, std::size_t to) {
        Word out;
        for (std::size_t k = from; k < to; ++k) {
            const Word& w = *known[letters[k].gen];
            out = out * (letters[k].sign > 0 ? w : w.inverse());
        }
        return out;
    };

    for (bool progress = true; progress;) {
        progress = false;
        for (const auto& r : relations) {
            const auto& ls = r.letters();
            std::size_t unknown = 0, pos = 0;
            for (std::size_t k = 0; k < ls.size(); ++k)
                if (!known[ls[k].gen]) {
                    ++unknown;
                    pos = k;
                }
            if (unknown != 1) continue;
            // u e^s v = 1  =>  e^s = u^-1 v^-1
            Word u = translate(ls, 0, pos), v = translate(ls, pos + 1, ls.size());
            Word es = u.inverse() * v.inverse();
            known[ls[pos].gen] = ls[pos].sign > 0 ? es : es.inverse();
            progress = true;
        }
    }

    Presentation out;
    for (std::size_t e = 0; e < E; ++e) {
        if (!known[e])
            throw Error(ErrorCode::Invalid, "UnderdeterminedEdges",
                        "edge " + edges.name(e) + " is not determined by the basis generators");
        out.edge_words.push_back(*known[e]);
    }
    IntMat rows;
    for (const auto& r : relations) {
        rows.push_back(abelianize(r, E));
        Word w = translate(r.letters(), 0, r.length());
        if (!w.empty() && std::find(out.relators.begin(), out.relators.end(), w) == out.relators.end())
            out.relators.push_back(w);
    }
    out.h1 = cokernel_shape(E, rows);
    return out;
}

}  // namespace detail

std::size_t edge_id(const GeneratorSet& edges, const std::string& name) {
    auto id = edges.find(name);
    if (!id) throw Error(ErrorCode::Usage, "UnknownEdge", "no edge named '" + name + "'");
    return *id;
}

Word edge_word(const Triangulation2& t, std::size_t edge) {
    if (edge >= t.edge_words.size()) throw Error(ErrorCode::Usage, "UnknownEdge", "edge id out of range");
    return t.edge_words[edge];
}

Word edge_word(const Triangulation3& t, std::size_t edge) {
    if (edge >= t.edge_words.size()) throw Error(ErrorCode::Usage, "UnknownEdge", "edge id out of range");
    return t.edge_words[edge];
}

LinkSphere build_link_sphere(const Triangulation3& t) {
    const std::size_t n = t.tet_count();
    LinkSphere L;
    L.end_ids_.assign(16 * n, SIZE_MAX);

    // edge ends (tet, v, w): the end at v of edge vw
    auto end_index = [](std::size_t tet, int v, int w) { return tet * 16 + static_cast<std::size_t>(v * 4 + w); };
    UnionFind ends(16 * n);
    for (std::size_t tet = 0; tet < n; ++tet)
        for (int f = 0; f < 4; ++f) {
            const auto& g = t.gluings[tet][f];
            for (int v = 0; v < 4; ++v)
                for (int w = 0; w < 4; ++w) {
                    if (v == w || v == f || w == f) continue;
                    ends.unite(end_index(tet, v, w), end_index(g.tet, g.perm[v], g.perm[w]));
                }
        }
    std::vector<std::size_t> root_to_vertex(16 * n, SIZE_MAX);
    for (std::size_t tet = 0; tet < n; ++tet)
        for (int v = 0; v < 4; ++v)
            for (int w = 0; w < 4; ++w) {
                if (v == w) continue;
                std::size_t r = ends.find(end_index(tet, v, w));
                const Side s = t.tet_edges[tet][edge_slot(v, w)];
                // the slot's i->j edge has sign s; the reference tail is i when s > 0
                const bool v_is_low = v < w;
                const int end = (v_is_low == (s.sign > 0)) ? 0 : 1;
                if (root_to_vertex[r] == SIZE_MAX) {
                    root_to_vertex[r] = L.vertices.size();
                    L.vertices.push_back({s.edge, end});
                } else {
                    const auto& prev = L.vertices[root_to_vertex[r]];
                    if (prev.edge != s.edge || prev.end != end)
                        throw Error(ErrorCode::Invalid, "LinkNotSphere", "edge ends identified inconsistently");
                }
                L.end_ids_[end_index(tet, v, w)] = root_to_vertex[r];
            }

    L.triangle_vertices.resize(4 * n);
    for (std::size_t tet = 0; tet < n; ++tet)
        for (int v = 0; v < 4; ++v) {
            std::size_t k = 0;
            for (int w = 0; w < 4; ++w)
                if (w != v) L.triangle_vertices[4 * tet + v][k++] = L.vertex_of(tet, v, w);
        }

    for (std::size_t tet = 0; tet < n; ++tet)
        for (int f = 0; f < 4; ++f) {
            const auto& g = t.gluings[tet][f];
            // each glued face pair is visited twice; keep the lexicographically lower slot
            if (std::make_pair(g.tet, g.perm[f]) < std::make_pair(tet, f)) continue;
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                int a = -1, b = -1;
                for (int w = 0; w < 4; ++w) {
                    if (w == v || w == f) continue;
                    (a < 0 ? a : b) = w;
                }
                LinkSphere::Edge e;
                e.triangle = {4 * tet + static_cast<std::size_t>(v), 4 * g.tet + static_cast<std::size_t>(g.perm[v])};
                e.vertex = {L.vertex_of(tet, v, a), L.vertex_of(tet, v, b)};
                e.tet = tet;
                e.corner = v;
                e.face = f;
                L.edges.push_back(e);
            }
        }

    if (L.triangle_vertices.size() != 4 * n || L.edges.size() != 6 * n)
        throw Error(ErrorCode::Invalid, "LinkNotSphere", "link has the wrong number of cells");
    UnionFind comp(4 * n);
    for (const auto& e : L.edges) comp.unite(e.triangle[0], e.triangle[1]);
    for (std::size_t i = 0; i < 4 * n; ++i)
        if (comp.find(i) != 0) throw Error(ErrorCode::Invalid, "LinkNotSphere", "link is disconnected");

    // every link vertex must have a single cycle of corners around it
    const std::size_t V = L.vertices.size();
    std::vector<std::vector<std::size_t>> corners(V);  // triangle ids around each vertex
    for (std::size_t tri = 0; tri < L.triangle_vertices.size(); ++tri)
        for (auto v : L.triangle_vertices[tri]) corners[v].push_back(tri);
    for (std::size_t v = 0; v < V; ++v) {
        std::vector<std::size_t>& c = corners[v];
        UnionFind uf(c.size());
        auto idx = [&](std::size_t tri) { return static_cast<std::size_t>(std::find(c.begin(), c.end(), tri) - c.begin()); };
        for (const auto& e : L.edges)
            if (e.vertex[0] == v || e.vertex[1] == v) uf.unite(idx(e.triangle[0]), idx(e.triangle[1]));
        for (std::size_t k = 0; k < c.size(); ++k)
            if (uf.find(k) != 0) throw Error(ErrorCode::Invalid, "LinkNotSphere", "link vertex is not a manifold point");
    }
    if (L.euler() != 2)
        throw Error(ErrorCode::Invalid, "LinkNotSphere", "link Euler characteristic is " + std::to_string(L.euler()));
    if (V != 2 * t.edge_count())
        throw Error(ErrorCode::Invalid, "LinkNotSphere", "link vertex count differs from twice the edge count");
    return L;
}

const char* to_string(Essential e) { return e == Essential::Essential ? "ESSENTIAL" : "UNKNOWN"; }

std::vector<EssentialReport> check_essential(const Triangulation& tri, const OrderOracle* o) {
    return std::visit(
        [&](const auto& t) {
            std::vector<EssentialReport> out;
            IntMat rel;
            for (const auto& r : t.relators) rel.push_back(abelianize(r, t.basis.rank()));
            LatticeReducer lattice(t.basis.rank(), rel);
            for (std::size_t e = 0; e < t.edge_count(); ++e) {
                EssentialReport rep{t.edges.name(e), t.edge_words[e], Essential::Unknown, "zero in H1"};
                IntVec v = abelianize(t.edge_words[e], t.basis.rank());
                lattice.reduce(v);
                if (std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; })) {
                    rep.status = Essential::Essential;
                    rep.reason = "nonzero in H1";
                } else if (o && o->is_group_backend() && o->rank() == t.basis.rank() &&
                           o->compare(t.edge_words[e], Word{}) != Comparison::Equivalent) {
                    rep.status = Essential::Essential;
                    rep.reason = "order separates it from the identity";
                }
                out.push_back(std::move(rep));
            }
            return out;
        },
        tri);
}

}  // namespace flo
