#include "spine3/z2taut.hpp"

#include <algorithm>

namespace spine3 {

bool is_z2_taut(const Triangulation& tri, const IncidenceTable& inc,
                const Z2Assignment& f) {
    if (static_cast<int>(f.chosen.size()) != tri.num_tets())
        return false;
    for (int k : f.chosen)
        if (k < 0 || k > 2)
            return false;
    for (int e = 0; e < tri.edge_count; ++e) {
        int parity = 0;
        for (int t = 0; t < tri.num_tets(); ++t)
            parity ^= inc.i[static_cast<std::size_t>(e)]
                           [static_cast<std::size_t>(3 * t + f.chosen[static_cast<std::size_t>(t)])] &
                      1;
        if (parity)
            return false;
    }
    return true;
}

TautEnumeration enumerate_taut(const Triangulation& tri, const IncidenceTable& inc,
                               long long limit, bool force_full) {
    const int n = tri.num_tets();
    const int ne = tri.edge_count;
    TautEnumeration out;

    // Edge e is decided once every tet carrying an odd-incidence quad of e
    // has chosen; record that last tet.
    std::vector<int> finalize_at(static_cast<std::size_t>(ne), -1);
    for (int e = 0; e < ne; ++e)
        for (int t = 0; t < n; ++t)
            for (int k = 0; k < 3; ++k)
                if (inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(3 * t + k)] & 1)
                    finalize_at[static_cast<std::size_t>(e)] = std::max(
                        finalize_at[static_cast<std::size_t>(e)], t);
    std::vector<std::vector<int>> finalized_edges(static_cast<std::size_t>(n));
    for (int e = 0; e < ne; ++e)
        if (finalize_at[static_cast<std::size_t>(e)] >= 0)
            finalized_edges[static_cast<std::size_t>(finalize_at[static_cast<std::size_t>(e)])]
                .push_back(e);

    const bool full_traversal = n <= 20 || force_full;
    std::vector<int> parity(static_cast<std::size_t>(ne), 0);
    std::vector<int> choice(static_cast<std::size_t>(n), 0);

    struct Frame {
        int tet;
        int next_type;
    };

    // Iterative DFS in lexicographic order.
    std::vector<Frame> stack;
    stack.push_back({0, 0});
    bool done = false;
    while (!stack.empty() && !done) {
        Frame& fr = stack.back();
        if (fr.next_type == 3) {
            stack.pop_back();
            if (!stack.empty()) {
                Frame& p = stack.back();
                int k = p.next_type - 1;
                for (int e = 0; e < ne; ++e)
                    parity[static_cast<std::size_t>(e)] ^=
                        inc.i[static_cast<std::size_t>(e)]
                             [static_cast<std::size_t>(3 * p.tet + k)] &
                        1;
            }
            continue;
        }
        int t = fr.tet;
        int k = fr.next_type++;
        for (int e = 0; e < ne; ++e)
            parity[static_cast<std::size_t>(e)] ^=
                inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(3 * t + k)] & 1;
        choice[static_cast<std::size_t>(t)] = k;

        bool ok = true;
        std::vector<int> failing;
        for (int e : finalized_edges[static_cast<std::size_t>(t)])
            if (parity[static_cast<std::size_t>(e)]) {
                ok = false;
                failing.push_back(e);
            }
        if (!ok) {
            if (t > out.deepest_fail_depth) {
                out.deepest_fail_depth = t;
                out.deepest_fail_edges = failing;
            }
            // undo and try the next type
            for (int e = 0; e < ne; ++e)
                parity[static_cast<std::size_t>(e)] ^=
                    inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(3 * t + k)] & 1;
            continue;
        }
        if (t + 1 == n) {
            ++out.count;
            if (static_cast<long long>(out.structures.size()) < limit)
                out.structures.push_back(Z2Assignment{choice});
            else if (!full_traversal)
                done = true;
            for (int e = 0; e < ne; ++e)
                parity[static_cast<std::size_t>(e)] ^=
                    inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(3 * t + k)] & 1;
            continue;
        }
        stack.push_back({t + 1, 0});
    }
    out.count_exact = !done;
    std::sort(out.structures.begin(), out.structures.end(),
              [](const Z2Assignment& a, const Z2Assignment& b) {
                  return a.chosen < b.chosen;
              });
    return out;
}

bool verify_quadratic_equiv() {
    for (int mask = 0; mask < 8; ++mask) {
        int f0 = mask & 1, f1 = (mask >> 1) & 1, f2 = (mask >> 2) & 1;
        bool quadratic = ((f0 + f1 + f2) % 2 == 1) &&
                         ((f0 * f1 + f0 * f2 + f1 * f2) % 2 == 0);
        bool exactly_one = f0 + f1 + f2 == 1;
        if (quadratic != exactly_one)
            return false;
    }
    return true;
}

} // namespace spine3
