#include <algorithm>
#include <functional>
#include <sstream>
#include <map>
#include <numeric>

#include "complex_internal.hpp"
#include "floation/error.hpp"
#include "floation/order_io.hpp"

namespace flo {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::Parse, "ParseError", what); }

const json& need(const json& doc, const char* field) {
    if (!doc.contains(field)) parse_fail(std::string("missing field '") + field + "'");
    return doc.at(field);
}

std::vector<std::string> string_list(const json& v, const char* what) {
    if (!v.is_array()) parse_fail(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& s : v) {
        if (!s.is_string()) parse_fail(std::string(what) + " must be an array of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

std::vector<Side> parse_sides(const std::string& text, const GeneratorSet& edges) {
    std::vector<Side> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        int sign = 1;
        std::string name = tok;
        if (tok.size() > 3 && tok.ends_with("^-1")) {
            sign = -1;
            name = tok.substr(0, tok.size() - 3);
        } else if (tok.ends_with("^1")) {
            name = tok.substr(0, tok.size() - 2);
        }
        auto id = edges.find(name);
        if (!id) parse_fail("unknown edge '" + name + "'");
        out.push_back({*id, sign});
    }
    return out;
}

std::vector<std::size_t> resolve_basis(const json& doc, const GeneratorSet& edges, GeneratorSet& basis) {
    basis = GeneratorSet(string_list(need(doc, "generators"), "generators"));
    std::vector<std::size_t> ids;
    for (const auto& name : basis.names()) {
        auto id = edges.find(name);
        if (!id) parse_fail("generator '" + name + "' is not an edge");
        ids.push_back(*id);
    }
    return ids;
}

Word side_word(const std::vector<Side>& sides, std::size_t rank) {
    std::vector<Letter> ls;
    for (const auto& s : sides) ls.push_back({s.edge, s.sign});
    return reduce_word(ls, rank);
}

int perm_sign(const std::array<int, 4>& p) {
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

}  // namespace

Triangulation2 build_triangulation2(const json& doc) {
    Triangulation2 t;
    t.name = doc.value("name", std::string("unnamed"));
    const auto tri_text = string_list(need(doc, "triangles"), "triangles");
    if (doc.contains("edges")) {
        t.edges = GeneratorSet(string_list(doc.at("edges"), "edges"));
    } else {
        std::vector<std::string> names;
        for (const auto& s : tri_text) {
            std::istringstream in(s);
            std::string tok;
            while (in >> tok) {
                auto name = tok.substr(0, tok.find('^'));
                if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
            }
        }
        t.edges = GeneratorSet(names);
    }
    if (tri_text.empty()) throw Error(ErrorCode::Invalid, "NotClosed", "no triangles");
    const std::size_t E = t.edges.rank();
    t.slots.assign(E, {});
    std::vector<int> uses(E, 0);
    for (std::size_t i = 0; i < tri_text.size(); ++i) {
        auto sides = parse_sides(tri_text[i], t.edges);
        if (sides.size() != 3) parse_fail("triangle " + std::to_string(i) + " does not have three sides");
        std::array<Side, 3> arr{sides[0], sides[1], sides[2]};
        for (std::size_t k = 0; k < 3; ++k) {
            auto e = arr[k].edge;
            if (uses[e] >= 2)
                throw Error(ErrorCode::Invalid, "NotClosed", "edge " + t.edges.name(e) + " has more than two sides");
            t.slots[e][uses[e]++] = {i, k};
        }
        t.triangles.push_back(arr);
        t.boundary_words.push_back(side_word(sides, E));
    }
    for (std::size_t e = 0; e < E; ++e)
        if (uses[e] != 2)
            throw Error(ErrorCode::Invalid, "NotClosed",
                        "edge " + t.edges.name(e) + " appears in " + std::to_string(uses[e]) + " side slot(s)");

    // orientability: flip triangles so every edge occurs once with each sign
    const std::size_t F = t.triangles.size();
    std::vector<int> flip(F, 0);
    std::vector<bool> seen(F, false);
    for (std::size_t root = 0; root < F; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            auto i = stack.back();
            stack.pop_back();
            for (const auto& s : t.triangles[i]) {
                for (const auto& slot : t.slots[s.edge]) {
                    auto j = slot.triangle;
                    const int sj = t.triangles[j][slot.side].sign;
                    if (j == i && slot.side != static_cast<std::size_t>(&s - t.triangles[i].data())) {
                        if (sj == s.sign)
                            throw Error(ErrorCode::Invalid, "NotOrientable", "edge " + t.edges.name(s.edge));
                        continue;
                    }
                    if (j == i) continue;
                    // want s.sign * (-1)^flip[i] == -(sj * (-1)^flip[j])
                    const int want = (s.sign == sj) ? 1 - flip[i] : flip[i];
                    if (!seen[j]) {
                        seen[j] = true;
                        flip[j] = want;
                        stack.push_back(j);
                    } else if (flip[j] != want) {
                        throw Error(ErrorCode::Invalid, "NotOrientable", "surface is not orientable");
                    }
                }
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), true) != static_cast<long>(F)) {
        throw Error(ErrorCode::Invalid, "NotClosed", "triangles are disconnected");
    }
    const int chi = t.euler();
    if (chi > 2 || chi % 2 != 0)
        throw Error(ErrorCode::Invalid, "EulerMismatch", "Euler characteristic " + std::to_string(chi) +
                                                             " is not that of a closed orientable surface");
    if (doc.contains("euler") && doc.at("euler").get<int>() != chi)
        throw Error(ErrorCode::Invalid, "EulerMismatch",
                    "declared Euler characteristic " + doc.at("euler").dump() + " but counted " + std::to_string(chi));

    t.basis_edge = resolve_basis(doc, t.edges, t.basis);
    auto pres = detail::solve_presentation(t.edges, t.basis_edge, t.boundary_words);
    t.edge_words = std::move(pres.edge_words);
    t.relators = std::move(pres.relators);
    t.h1 = pres.h1;
    if (t.h1.free_rank != static_cast<std::size_t>(2 * t.genus()) || !t.h1.torsion.empty())
        throw Error(ErrorCode::Invalid, "EulerMismatch", "H1 does not match the genus");

    if (doc.contains("polygon")) {
        auto sides = parse_sides(need(doc, "polygon").get<std::string>(), t.edges);
        t.polygon = sides;
    }
    return t;
}

Triangulation3 build_triangulation3(const json& doc) {
    Triangulation3 t;
    t.name = doc.value("name", std::string("unnamed"));
    const auto& tets = need(doc, "tetrahedra");
    if (!tets.is_array() || tets.empty()) parse_fail("tetrahedra must be a nonempty array");
    const std::size_t n = tets.size();
    t.gluings.resize(n);
    std::vector<std::array<bool, 4>> present(n, {false, false, false, false});
    for (std::size_t i = 0; i < n; ++i) {
        const auto& gl = need(tets[i], "gluings");
        if (!gl.is_array() || gl.size() != 4) parse_fail("tetrahedron " + std::to_string(i) + " needs four gluings");
        for (int f = 0; f < 4; ++f) {
            if (gl[f].is_null()) continue;
            Gluing g;
            g.tet = need(gl[f], "tet").get<std::size_t>();
            auto p = need(gl[f], "perm").get<std::vector<int>>();
            if (p.size() != 4) parse_fail("perm must list four vertices");
            std::copy(p.begin(), p.end(), g.perm.begin());
            auto sorted = p;
            std::sort(sorted.begin(), sorted.end());
            if (sorted != std::vector<int>{0, 1, 2, 3}) parse_fail("perm is not a permutation of 0..3");
            if (g.tet >= n) parse_fail("gluing references a missing tetrahedron");
            t.gluings[i][f] = g;
            present[i][f] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (int f = 0; f < 4; ++f) {
            if (!present[i][f])
                throw Error(ErrorCode::Invalid, "NotClosed",
                            "face " + std::to_string(f) + " of tetrahedron " + std::to_string(i) + " is unglued");
            const auto& g = t.gluings[i][f];
            const int f2 = g.perm[f];
            if (g.tet == i && f2 == f)
                throw Error(ErrorCode::Invalid, "GluingNotInvolutive", "face glued to itself");
            const auto& back = t.gluings[g.tet][f2];
            bool ok = back.tet == i;
            for (int v = 0; v < 4 && ok; ++v) ok = back.perm[g.perm[v]] == v;
            if (!ok)
                throw Error(ErrorCode::Invalid, "GluingNotInvolutive",
                            "gluing of tet " + std::to_string(i) + " face " + std::to_string(f) + " is not reversed");
        }

    // orientations: gluings must reverse orientation
    t.tet_orientation.assign(n, 0);
    for (std::size_t root = 0; root < n; ++root) {
        if (t.tet_orientation[root] != 0) continue;
        if (root != 0) throw Error(ErrorCode::Invalid, "NotClosed", "tetrahedra are disconnected");
        t.tet_orientation[root] = 1;
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            auto i = stack.back();
            stack.pop_back();
            for (int f = 0; f < 4; ++f) {
                const auto& g = t.gluings[i][f];
                const int want = -perm_sign(g.perm) * t.tet_orientation[i];
                if (t.tet_orientation[g.tet] == 0) {
                    t.tet_orientation[g.tet] = want;
                    stack.push_back(g.tet);
                } else if (t.tet_orientation[g.tet] != want) {
                    throw Error(ErrorCode::Invalid, "NotOrientable", "3-manifold is not orientable");
                }
            }
        }
    }

    // edge classes: union-find over (tet, slot) with orientation parity
    std::vector<std::size_t> parent(6 * n);
    std::vector<int> parity(6 * n, 0);  // orientation relative to parent
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::pair<std::size_t, int>(std::size_t)> find = [&](std::size_t x) -> std::pair<std::size_t, int> {
        if (parent[x] == x) return {x, 0};
        auto [r, p] = find(parent[x]);
        parent[x] = r;
        parity[x] ^= p;
        return {r, parity[x]};
    };
    for (std::size_t i = 0; i < n; ++i)
        for (int f = 0; f < 4; ++f) {
            const auto& g = t.gluings[i][f];
            for (int k = 0; k < 6; ++k) {
                const int u = kEdgeVertices[k][0], v = kEdgeVertices[k][1];
                if (u == f || v == f) continue;
                const int pu = g.perm[u], pv = g.perm[v];
                const std::size_t a = 6 * i + k, b = 6 * g.tet + edge_slot(pu, pv);
                const int rel = pu < pv ? 0 : 1;
                auto [ra, xa] = find(a);
                auto [rb, xb] = find(b);
                if (ra == rb) {
                    if ((xa ^ xb) != rel)
                        throw Error(ErrorCode::Invalid, "EdgeReversed", "an edge is identified with its reverse");
                    continue;
                }
                const auto lo = std::min(ra, rb), hi = std::max(ra, rb);
                parent[hi] = lo;
                parity[hi] = xa ^ xb ^ rel;
            }
        }
    std::map<std::size_t, std::size_t> class_of_root;
    t.tet_edges.resize(n);
    for (std::size_t s = 0; s < 6 * n; ++s) {
        auto [r, x] = find(s);
        auto [it, fresh] = class_of_root.emplace(r, class_of_root.size());
        if (fresh) t.reference_slot.push_back({s / 6, s % 6});
        // the root is the lowest slot and carries the reference orientation
        t.tet_edges[s / 6][s % 6] = Side{it->second, x ? -1 : 1};
    }
    const std::size_t E = class_of_root.size();

    std::vector<std::string> names(E);
    for (std::size_t e = 0; e < E; ++e) names[e] = "e" + std::to_string(e);
    bool labelled = tets[0].contains("edge_labels");
    if (labelled) {
        std::vector<std::string> assigned(E);
        for (std::size_t i = 0; i < n; ++i) {
            auto labels = string_list(need(tets[i], "edge_labels"), "edge_labels");
            if (labels.size() != 6) parse_fail("edge_labels needs six entries");
            for (int k = 0; k < 6; ++k) {
                std::string name = labels[k];
                int sign = 1;
                if (name.ends_with("^-1")) {
                    sign = -1;
                    name.resize(name.size() - 3);
                }
                const Side s = t.tet_edges[i][k];
                if (assigned[s.edge].empty()) assigned[s.edge] = name;
                if (assigned[s.edge] != name || sign != s.sign)
                    throw Error(ErrorCode::Invalid, "LabelMismatch",
                                "edge label '" + labels[k] + "' in tet " + std::to_string(i) +
                                    " disagrees with the derived edge classes");
            }
        }
        names = assigned;
    }
    t.edges = GeneratorSet(names);

    for (std::size_t i = 0; i < n; ++i)
        for (int f = 0; f < 4; ++f) {
            const auto& g = t.gluings[i][f];
            if (std::make_pair(g.tet, g.perm[f]) < std::make_pair(i, f)) continue;
            int v[3], m = 0;
            for (int w = 0; w < 4; ++w)
                if (w != f) v[m++] = w;
            auto letter = [&](int a, int b) {
                Side s = t.tet_edges[i][edge_slot(a, b)];
                return Letter{s.edge, s.sign};
            };
            Letter c = letter(v[0], v[2]);
            t.face_relations.push_back(reduce_word({letter(v[0], v[1]), letter(v[1], v[2]), {c.gen, -c.sign}}, E));
        }

    const int chi = t.euler();
    if (chi != 0)
        throw Error(ErrorCode::Invalid, "EulerMismatch", "1 - E + F - T = " + std::to_string(chi) + ", expected 0");

    t.basis_edge = resolve_basis(doc, t.edges, t.basis);
    auto pres = detail::solve_presentation(t.edges, t.basis_edge, t.face_relations);
    t.edge_words = std::move(pres.edge_words);
    t.relators = std::move(pres.relators);
    t.h1 = pres.h1;

    build_link_sphere(t);
    return t;
}

Triangulation parse_triangulation(const json& doc) {
    if (!doc.is_object()) parse_fail("triangulation document must be an object");
    const int dim = need(doc, "dimension").get<int>();
    if (dim == 2) return build_triangulation2(doc);
    if (dim == 3) return build_triangulation3(doc);
    parse_fail("dimension must be 2 or 3");
}

Triangulation load_and_validate(const std::filesystem::path& path) {
    auto doc = read_json_file(path);
    try {
        return parse_triangulation(doc);
    } catch (const json::exception& e) {
        parse_fail(path.string() + ": " + e.what());
    }
}

Triangulation2 load_triangulation2(const std::filesystem::path& path) {
    auto t = load_and_validate(path);
    if (auto* p = std::get_if<Triangulation2>(&t)) return std::move(*p);
    throw Error(ErrorCode::Usage, "WrongDimension", path.string() + " is not a surface triangulation");
}

Triangulation3 load_triangulation3(const std::filesystem::path& path) {
    auto t = load_and_validate(path);
    if (auto* p = std::get_if<Triangulation3>(&t)) return std::move(*p);
    throw Error(ErrorCode::Usage, "WrongDimension", path.string() + " is not a 3-manifold triangulation");
}

std::filesystem::path bundled_complex(const std::string& name) {
    return std::filesystem::path(FLOATION_DATA_DIR) / (name + ".json");
}

json validation_report(const Triangulation& tri) {
    return std::visit(
        [](const auto& t) {
            json rels = json::array();
            for (const auto& r : t.relators) rels.push_back(format_word(r, t.basis));
            json words = json::object();
            for (std::size_t e = 0; e < t.edge_count(); ++e)
                words[t.edges.name(e)] = format_word(t.edge_words[e], t.basis);
            json out{{"name", t.name},
                     {"valid", true},
                     {"V", 1},
                     {"E", t.edge_count()},
                     {"euler", t.euler()},
                     {"generators", t.basis.names()},
                     {"edge_words", words},
                     {"relators", rels},
                     {"h1", {{"free_rank", t.h1.free_rank}, {"torsion", t.h1.torsion}}}};
            if constexpr (std::is_same_v<std::decay_t<decltype(t)>, Triangulation2>) {
                out["dimension"] = 2;
                out["F"] = t.triangle_count();
                out["genus"] = t.genus();
            } else {
                out["dimension"] = 3;
                out["F"] = t.face_count();
                out["T"] = t.tet_count();
                auto L = build_link_sphere(t);
                out["link"] = {{"triangles", L.triangle_vertices.size()},
                               {"edges", L.edges.size()},
                               {"vertices", L.vertices.size()},
                               {"euler", L.euler()}};
            }
            return out;
        },
        tri);
}

}  // namespace flo
