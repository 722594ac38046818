#pragma once

#include "spine3/triangulation.hpp"

#include <cstdint>
#include <vector>

namespace spine3 {

// f: quads -> {0,1} with exactly one 1 per tet and even weighted sum around
// every edge. Stored as the chosen quad type per tet.
struct Z2Assignment {
    std::vector<int> chosen; // per tet, quad type with f = 1

    std::vector<int> support(int tet_count) const {
        std::vector<int> s;
        for (int t = 0; t < tet_count; ++t)
            s.push_back(3 * t + chosen[static_cast<std::size_t>(t)]);
        return s;
    }
};

bool is_z2_taut(const Triangulation& tri, const IncidenceTable& inc,
                const Z2Assignment& f);

struct TautEnumeration {
    long long count = 0;
    bool count_exact = false; // full traversal done (guaranteed for |T| <= 20)
    std::vector<Z2Assignment> structures; // up to limit, lexicographic
    // Where empty searches died: the deepest tet reached before pruning and
    // the edge-parity constraints failing there.
    int deepest_fail_depth = -1;
    std::vector<int> deepest_fail_edges;
};

// Backtracking over the 3^|T| per-tet choices with incremental edge parity
// pruning (i(e,q) = 2 contributes nothing mod 2). At most `limit` structures
// are stored. The traversal always completes for |T| <= 20, giving an exact
// count; force_full extends that guarantee to larger triangulations at the
// caller's expense.
TautEnumeration enumerate_taut(const Triangulation& tri, const IncidenceTable& inc,
                               long long limit, bool force_full = false);

// The GF(2) equivalence behind the quadratic formulation: over all 8
// vectors in {0,1}^3, (sum = 1 and pairwise products sum to 0) holds iff
// exactly one coordinate is 1.
bool verify_quadratic_equiv();

} // namespace spine3
