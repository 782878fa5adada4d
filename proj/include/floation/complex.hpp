#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "floation/lattice.hpp"
#include "floation/orders.hpp"
#include "floation/words.hpp"

namespace flo {

struct Side {
    std::size_t edge = 0;
    int sign = 1;
    bool operator==(const Side&) const = default;
};

struct SlotRef {
    std::size_t triangle = 0;
    std::size_t side = 0;
};

/// One-vertex triangulated closed surface. Side k of a triangle runs from corner k
/// to corner k+1; the boundary word is side0 side1 side2.
struct Triangulation2 {
    std::string name;
    GeneratorSet edges;  // edge classes
    GeneratorSet basis;  // generators of the presentation, a subset of the edges
    std::vector<std::size_t> basis_edge;  // edge id of each basis generator
    std::vector<std::array<Side, 3>> triangles;
    std::vector<Word> boundary_words;  // over edge classes
    std::vector<std::array<SlotRef, 2>> slots;  // per edge class
    std::vector<Word> edge_words;  // per edge class, over the basis
    std::vector<Word> relators;    // over the basis
    std::optional<std::vector<Side>> polygon;  // fan polygon boundary, when the file declares one
    AbelianGroupShape h1;

    std::size_t edge_count() const { return edges.rank(); }
    std::size_t triangle_count() const { return triangles.size(); }
    int euler() const { return 1 - static_cast<int>(edge_count()) + static_cast<int>(triangle_count()); }
    int genus() const { return (2 - euler()) / 2; }
};

/// Edge slot k of a tetrahedron joins kEdgeVertices[k][0] < kEdgeVertices[k][1].
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
int edge_slot(int u, int v);

struct Gluing {
    std::size_t tet = 0;
    std::array<int, 4> perm{};  // vertex v of this tet -> perm[v] of `tet`; face f -> face perm[f]
};

/// One-vertex triangulated closed orientable 3-manifold. Face f of a tetrahedron
/// is the face opposite vertex f.
struct Triangulation3 {
    std::string name;
    GeneratorSet edges;
    GeneratorSet basis;
    std::vector<std::size_t> basis_edge;
    std::vector<std::array<Gluing, 4>> gluings;
    std::vector<std::array<Side, 6>> tet_edges;  // class and sign of the i->j edge in each slot
    std::vector<std::array<std::size_t, 2>> reference_slot;  // per class: lowest (tet, slot)
    std::vector<Word> face_relations;  // one per glued face pair, over edge classes
    std::vector<Word> edge_words;
    std::vector<Word> relators;
    std::vector<int> tet_orientation;
    AbelianGroupShape h1;

    std::size_t tet_count() const { return gluings.size(); }
    std::size_t edge_count() const { return edges.rank(); }
    std::size_t face_count() const { return 2 * tet_count(); }
    int euler() const {
        return 1 - static_cast<int>(edge_count()) + static_cast<int>(face_count()) - static_cast<int>(tet_count());
    }
};

using Triangulation = std::variant<Triangulation2, Triangulation3>;

/// Link of the vertex. Triangle 4t+v is the corner of tetrahedron t at vertex v; its
/// three vertices are the ends at v of the edges (v, w), w != v ascending.
struct LinkSphere {
    struct Edge {
        std::array<std::size_t, 2> triangle{};
        std::array<std::size_t, 2> vertex{};  // link vertices at its ends
        std::size_t tet = 0;                  // slot on the lower side: corner v of face f in tet
        int corner = 0;
        int face = 0;
    };
    struct Vertex {
        std::size_t edge = 0;  // edge class
        int end = 0;           // 0 = tail of the reference orientation, 1 = head
    };
    std::vector<std::array<std::size_t, 3>> triangle_vertices;
    std::vector<Edge> edges;
    std::vector<Vertex> vertices;
    std::size_t vertex_of(std::size_t tet, int v, int w) const { return end_ids_.at(tet * 16 + v * 4 + w); }

    int euler() const {
        return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
               static_cast<int>(triangle_vertices.size());
    }

private:
    friend LinkSphere build_link_sphere(const Triangulation3& t);
    std::vector<std::size_t> end_ids_;  // (tet, v, w) -> link vertex
};

Triangulation2 build_triangulation2(const nlohmann::json& doc);
Triangulation3 build_triangulation3(const nlohmann::json& doc);
Triangulation parse_triangulation(const nlohmann::json& doc);
Triangulation load_and_validate(const std::filesystem::path& path);
Triangulation2 load_triangulation2(const std::filesystem::path& path);
Triangulation3 load_triangulation3(const std::filesystem::path& path);

/// Path of a bundled example complex (TOR2, OCT8, T3CUBE).
std::filesystem::path bundled_complex(const std::string& name);

LinkSphere build_link_sphere(const Triangulation3& t);

/// The edge class as a word in the basis generators.
Word edge_word(const Triangulation2& t, std::size_t edge);
Word edge_word(const Triangulation3& t, std::size_t edge);
std::size_t edge_id(const GeneratorSet& edges, const std::string& name);

enum class Essential { Essential, Unknown };
const char* to_string(Essential e);

struct EssentialReport {
    std::string edge;
    Word word;
    Essential status = Essential::Unknown;
    std::string reason;
};

std::vector<EssentialReport> check_essential(const Triangulation& t, const OrderOracle* o = nullptr);

nlohmann::json validation_report(const Triangulation& t);

}  // namespace flo
