#pragma once

#include "spine3/errors.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace spine3 {

// A tetrahedron has vertices 0..3. Face f is the face opposite vertex f.
// Quad type k separates a pair of opposite edges:
//   k=0 <-> {01},{23}   k=1 <-> {02},{13}   k=2 <-> {03},{12}
// Global indices: quad q = 3*tet + k, triangle = 4*tet + vertex.

struct Perm4 {
    std::array<int, 4> img{0, 1, 2, 3};

    int operator[](int i) const { return img[static_cast<std::size_t>(i)]; }
    Perm4 inverse() const;
    int sign() const; // +1 even, -1 odd
    bool is_permutation() const;
    bool operator==(const Perm4&) const = default;
};

struct Gluing {
    int tet = 0;
    int face = 0;
    int to_tet = 0;
    int to_face = 0;
    Perm4 perm;
};

struct GluingSpec {
    int tet_count = 0;
    std::vector<Gluing> gluings;
};

// The six edge slots of a tet, in lexicographic vertex-pair order.
inline constexpr std::array<std::array<int, 2>, 6> kEdgePairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// edge-pair index of {a,b}
int edge_pair_index(int a, int b);

// quad type whose opposite-edge pair contains {a,b}
int quad_type_of_pair(int a, int b);

// the two opposite edge-pair indices of quad type k
std::array<int, 2> quad_opposite_edges(int k);

struct Triangulation {
    GluingSpec spec;
    int tet_count = 0;

    // gluing destination per face slot (4t+f): target tet, face, perm
    std::vector<Gluing> face_map; // size 4T, indexed by 4*tet+face

    std::vector<int> orientation; // per tet, +1 or -1

    // quotient classes; canonical numbering by lowest member slot
    std::vector<int> edge_class;       // size 6T, slot 6t+pair -> class id
    std::vector<int> vertex_class;     // size 4T, slot 4t+v -> class id
    std::vector<int> face_class;       // size 4T, slot 4t+f -> class id
    std::vector<int> arc_class;        // size 16T (slot 16t+4f+v, v!=f), -1 unused
    int edge_count = 0;
    int vertex_count = 0;
    int face_count = 0;
    int arc_count = 0;

    std::vector<std::vector<int>> edge_slots;   // class -> member slots (sorted)
    std::vector<std::vector<int>> vertex_slots; // class -> member slots (sorted)

    int num_tets() const { return tet_count; }
    int num_quads() const { return 3 * tet_count; }
    int num_triangles() const { return 4 * tet_count; }

    int euler_characteristic() const {
        return vertex_count - edge_count + face_count - tet_count;
    }

    // Quotient edge class of edge slot {a,b} in tet t.
    int edge_class_of(int tet, int a, int b) const {
        return edge_class[static_cast<std::size_t>(6 * tet + edge_pair_index(a, b))];
    }
    int vertex_class_of(int tet, int v) const {
        return vertex_class[static_cast<std::size_t>(4 * tet + v)];
    }

    // Degree of a quotient edge (number of edge slots in the class).
    int edge_degree(int e) const {
        return static_cast<int>(edge_slots[static_cast<std::size_t>(e)].size());
    }

    // Endpoint multiplicity m(e,v): how many ends of edge e land on vertex
    // class v (a loop edge counts twice).
    int edge_end_multiplicity(int e, int v) const;

    // chi of the vertex link surface: (#edge ends at v) - (#corner slots)/2.
    int vertex_link_chi(int v) const;

    // Cyclic successor of quad type k inside tet t. Positively oriented tets
    // run 0 -> 1 -> 2 -> 0; negative orientation reverses.
    int quad_successor_type(int tet, int k) const {
        return orientation[static_cast<std::size_t>(tet)] > 0 ? (k + 1) % 3
                                                              : (k + 2) % 3;
    }
    int quad_successor(int q) const {
        int t = q / 3;
        return 3 * t + quad_successor_type(t, q % 3);
    }
    int quad_predecessor(int q) const { return quad_successor(quad_successor(q)); }
};

// Incidence index tables between quotient edges and quads.
struct IncidenceTable {
    // class level: i(e,q) in {0,1,2}; rows = edge classes, cols = quads
    std::vector<std::vector<int>> i;
    // slot level: slot_disjoint[6t+p][k] = 1 iff edge slot p of tet t avoids
    // quad type k of the same tet
    std::vector<std::array<int, 3>> slot;
    // per tet: the two opposite-edge pair indices of each quad type
    std::vector<std::array<std::array<int, 2>, 3>> opposite_pairs;
    int triangle_types_per_tet = 4;
    int quad_types_per_tet = 3;
};

// Parse the JSON gluing file format and build the validated triangulation.
Triangulation parse_and_validate(const std::string& text);
Triangulation build_triangulation(const GluingSpec& spec);

IncidenceTable build_incidence(const Triangulation& tri);

// Cyclic successor map on the three quads of a tet, as the ordered triple
// (succ of type 0, succ of type 1, succ of type 2).
std::array<int, 3> quad_cyclic_order(const Triangulation& tri, int tet);

} // namespace spine3
