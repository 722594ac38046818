#include "spine3/triangulation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace spine3 {

Perm4 Perm4::inverse() const {
    Perm4 p;
    for (int i = 0; i < 4; ++i)
        p.img[static_cast<std::size_t>(img[static_cast<std::size_t>(i)])] = i;
    return p;
}

int Perm4::sign() const {
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (img[static_cast<std::size_t>(i)] > img[static_cast<std::size_t>(j)])
                s = -s;
    return s;
}

bool Perm4::is_permutation() const {
    std::array<bool, 4> seen{};
    for (int v : img) {
        if (v < 0 || v > 3 || seen[static_cast<std::size_t>(v)])
            return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

int edge_pair_index(int a, int b) {
    if (a > b)
        std::swap(a, b);
    for (int p = 0; p < 6; ++p)
        if (kEdgePairs[static_cast<std::size_t>(p)][0] == a &&
            kEdgePairs[static_cast<std::size_t>(p)][1] == b)
            return p;
    throw Error(ErrorCode::InvalidInput, "bad edge pair");
}

int quad_type_of_pair(int a, int b) {
    if (a > b)
        std::swap(a, b);
    if (a == 0)
        return b - 1; // {0,1}->0, {0,2}->1, {0,3}->2
    // complements: {2,3}->0, {1,3}->1, {1,2}->2
    if (a == 2 && b == 3)
        return 0;
    if (a == 1 && b == 3)
        return 1;
    if (a == 1 && b == 2)
        return 2;
    throw Error(ErrorCode::InvalidInput, "bad vertex pair");
}

std::array<int, 2> quad_opposite_edges(int k) {
    switch (k) {
    case 0: return {edge_pair_index(0, 1), edge_pair_index(2, 3)};
    case 1: return {edge_pair_index(0, 2), edge_pair_index(1, 3)};
    default: return {edge_pair_index(0, 3), edge_pair_index(1, 2)};
    }
}

namespace {

// Plain union-find; class numbering is derived afterwards from minimal slots.
struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

// Canonical class ids: sort classes by least member slot.
std::vector<int> canonical_classes(UnionFind& uf, std::size_t n, int& count,
                                   std::vector<std::vector<int>>* members = nullptr) {
    std::map<int, int> root_to_id;
    for (std::size_t s = 0; s < n; ++s) {
        int r = uf.find(static_cast<int>(s));
        if (!root_to_id.count(r))
            root_to_id[r] = static_cast<int>(root_to_id.size());
    }
    count = static_cast<int>(root_to_id.size());
    std::vector<int> cls(n);
    if (members)
        members->assign(static_cast<std::size_t>(count), {});
    for (std::size_t s = 0; s < n; ++s) {
        cls[s] = root_to_id[uf.find(static_cast<int>(s))];
        if (members)
            (*members)[static_cast<std::size_t>(cls[s])].push_back(
                static_cast<int>(s));
    }
    return cls;
}

} // namespace

Triangulation build_triangulation(const GluingSpec& spec) {
    const int n = spec.tet_count;
    if (n <= 0)
        throw Error(ErrorCode::InvalidInput, "tet count must be positive");

    Triangulation tri;
    tri.spec = spec;
    tri.tet_count = n;

    // Resolve the face pairing map; each face slot must be covered exactly
    // once, with inverses synthesized or cross-checked.
    std::vector<bool> have(static_cast<std::size_t>(4 * n), false);
    tri.face_map.assign(static_cast<std::size_t>(4 * n), Gluing{});
    auto install = [&](const Gluing& g) {
        if (g.tet < 0 || g.tet >= n || g.to_tet < 0 || g.to_tet >= n ||
            g.face < 0 || g.face > 3 || g.to_face < 0 || g.to_face > 3)
            throw Error(ErrorCode::InvalidInput, "tet/face index out of range");
        if (!g.perm.is_permutation())
            throw Error(ErrorCode::BadPermutation, "perm is not a permutation of {0,1,2,3}");
        if (g.perm[g.face] != g.to_face)
            throw Error(ErrorCode::BadPermutation, "perm does not map face to to_face");
        if (g.tet == g.to_tet && g.face == g.to_face)
            throw Error(ErrorCode::SelfFaceGluing,
                        "face glued to itself in tet " + std::to_string(g.tet));
        auto s = static_cast<std::size_t>(4 * g.tet + g.face);
        if (have[s]) {
            const Gluing& prev = tri.face_map[s];
            if (prev.to_tet != g.to_tet || prev.to_face != g.to_face ||
                !(prev.perm == g.perm))
                throw Error(ErrorCode::BadPermutation,
                            "conflicting gluings for tet " + std::to_string(g.tet) +
                                " face " + std::to_string(g.face));
            return;
        }
        have[s] = true;
        tri.face_map[s] = g;
    };
    for (const auto& g : spec.gluings) {
        install(g);
        install(Gluing{g.to_tet, g.to_face, g.tet, g.face, g.perm.inverse()});
    }
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f)
            if (!have[static_cast<std::size_t>(4 * t + f)])
                throw Error(ErrorCode::UngluedFace, "tet " + std::to_string(t) +
                                                        " face " + std::to_string(f) +
                                                        " has no partner");

    // Orientation signs: each gluing must be orientation-reversing after
    // sign adjustment, i.e. sign(t)*sign(t')*sgn(perm) = -1.
    tri.orientation.assign(static_cast<std::size_t>(n), 0);
    for (int start = 0; start < n; ++start) {
        if (tri.orientation[static_cast<std::size_t>(start)] != 0)
            continue;
        tri.orientation[static_cast<std::size_t>(start)] = 1;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = tri.face_map[static_cast<std::size_t>(4 * t + f)];
                int want = -g.perm.sign() * tri.orientation[static_cast<std::size_t>(t)];
                int& o = tri.orientation[static_cast<std::size_t>(g.to_tet)];
                if (o == 0) {
                    o = want;
                    stack.push_back(g.to_tet);
                } else if (o != want) {
                    throw Error(ErrorCode::NonOrientable,
                                "no consistent orientation signs exist");
                }
            }
        }
    }

    // Quotient classes via union-find over slots, driven by the gluings.
    UnionFind vuf(static_cast<std::size_t>(4 * n));
    UnionFind euf(static_cast<std::size_t>(6 * n));
    UnionFind fuf(static_cast<std::size_t>(4 * n));
    UnionFind auf(static_cast<std::size_t>(16 * n));
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.face_map[static_cast<std::size_t>(4 * t + f)];
            fuf.unite(4 * t + f, 4 * g.to_tet + g.to_face);
            for (int v = 0; v < 4; ++v) {
                if (v == f)
                    continue;
                vuf.unite(4 * t + v, 4 * g.to_tet + g.perm[v]);
                auf.unite(16 * t + 4 * f + v,
                          16 * g.to_tet + 4 * g.to_face + g.perm[v]);
                for (int w = v + 1; w < 4; ++w) {
                    if (w == f)
                        continue;
                    euf.unite(6 * t + edge_pair_index(v, w),
                              6 * g.to_tet + edge_pair_index(g.perm[v], g.perm[w]));
                }
            }
        }
    }
    tri.vertex_class = canonical_classes(vuf, static_cast<std::size_t>(4 * n),
                                         tri.vertex_count, &tri.vertex_slots);
    tri.edge_class = canonical_classes(euf, static_cast<std::size_t>(6 * n),
                                       tri.edge_count, &tri.edge_slots);
    tri.face_class = canonical_classes(fuf, static_cast<std::size_t>(4 * n),
                                       tri.face_count);

    // Arc classes: only slots 16t+4f+v with v != f are meaningful. Number
    // the used classes canonically and mark unused slots with -1.
    {
        std::map<int, int> root_to_id;
        for (int t = 0; t < n; ++t)
            for (int f = 0; f < 4; ++f)
                for (int v = 0; v < 4; ++v) {
                    if (v == f)
                        continue;
                    int r = auf.find(16 * t + 4 * f + v);
                    if (!root_to_id.count(r))
                        root_to_id[r] = static_cast<int>(root_to_id.size());
                }
        tri.arc_count = static_cast<int>(root_to_id.size());
        tri.arc_class.assign(static_cast<std::size_t>(16 * n), -1);
        for (int t = 0; t < n; ++t)
            for (int f = 0; f < 4; ++f)
                for (int v = 0; v < 4; ++v) {
                    if (v == f)
                        continue;
                    auto s = static_cast<std::size_t>(16 * t + 4 * f + v);
                    tri.arc_class[s] = root_to_id[auf.find(static_cast<int>(s))];
                }
    }
    return tri;
}

Triangulation parse_and_validate(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("bad JSON: ") + e.what());
    }
    GluingSpec spec;
    try {
        spec.tet_count = j.at("tets").get<int>();
        for (const auto& g : j.at("gluings")) {
            Gluing gl;
            gl.tet = g.at("tet").get<int>();
            gl.face = g.at("face").get<int>();
            gl.to_tet = g.at("to_tet").get<int>();
            gl.to_face = g.at("to_face").get<int>();
            auto perm = g.at("perm");
            if (!perm.is_array() || perm.size() != 4)
                throw Error(ErrorCode::BadPermutation, "perm must have 4 entries");
            for (std::size_t i = 0; i < 4; ++i)
                gl.perm.img[i] = perm[i].get<int>();
            spec.gluings.push_back(gl);
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("bad gluing spec: ") + e.what());
    }
    return build_triangulation(spec);
}

int Triangulation::edge_end_multiplicity(int e, int v) const {
    // Any representative slot gives the same endpoint multiset.
    int s = edge_slots[static_cast<std::size_t>(e)].front();
    int t = s / 6;
    auto pr = kEdgePairs[static_cast<std::size_t>(s % 6)];
    int m = 0;
    if (vertex_class_of(t, pr[0]) == v)
        ++m;
    if (vertex_class_of(t, pr[1]) == v)
        ++m;
    return m;
}

int Triangulation::vertex_link_chi(int v) const {
    int ends = 0;
    for (int e = 0; e < edge_count; ++e)
        ends += edge_end_multiplicity(e, v);
    int slots = static_cast<int>(vertex_slots[static_cast<std::size_t>(v)].size());
    return ends - slots / 2;
}

IncidenceTable build_incidence(const Triangulation& tri) {
    const int n = tri.num_tets();
    IncidenceTable inc;
    inc.slot.assign(static_cast<std::size_t>(6 * n), {0, 0, 0});
    inc.opposite_pairs.assign(static_cast<std::size_t>(n), {});
    inc.i.assign(static_cast<std::size_t>(tri.edge_count),
                 std::vector<int>(static_cast<std::size_t>(3 * n), 0));
    for (int t = 0; t < n; ++t) {
        for (int k = 0; k < 3; ++k) {
            auto opp = quad_opposite_edges(k);
            inc.opposite_pairs[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = opp;
            for (int pe : opp) {
                inc.slot[static_cast<std::size_t>(6 * t + pe)][static_cast<std::size_t>(k)] = 1;
                int e = tri.edge_class[static_cast<std::size_t>(6 * t + pe)];
                inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(3 * t + k)] += 1;
            }
        }
    }
    return inc;
}

std::array<int, 3> quad_cyclic_order(const Triangulation& tri, int tet) {
    return {tri.quad_successor_type(tet, 0), tri.quad_successor_type(tet, 1),
            tri.quad_successor_type(tet, 2)};
}

} // namespace spine3
