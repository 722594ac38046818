#pragma once

#include "spine3/nzform.hpp"
#include "spine3/qmatrix.hpp"
#include "spine3/triangulation.hpp"

#include <optional>
#include <vector>

namespace spine3 {

// Normal-coordinate vectors live in R^(triangles + quads), dimension 7T,
// triangles first: index 4t+v for triangles, 4T + 3t+k for quads.
struct NormalVector {
    QVec values; // size 7T

    static std::size_t tri_index(int tet, int v) {
        return static_cast<std::size_t>(4 * tet + v);
    }
    static std::size_t quad_index(int tet_count, int q) {
        return static_cast<std::size_t>(4 * tet_count + q);
    }
};

struct QuadVector {
    QVec values; // size 3T
};

struct MatchingSystems {
    QMatrix standard; // arc classes x 7T  (one row per normal arc class)
    QMatrix quad;     // edges x 3T        (rows W(e,.))
};

MatchingSystems matching_systems(const Triangulation& tri, const IncidenceTable& inc,
                                 const NZMatrix& nz);

struct SolutionBases {
    std::vector<QVec> sns_basis;      // kernel of the standard system, dim 7T vectors
    std::vector<QVec> proj_sns_basis; // quad parts of the above
    std::vector<QVec> tas_perp_basis; // row space of the TAS constraint matrix
    std::vector<QVec> tas_basis;
    bool duality_ok = false; // Proj(S_ns) == TAS^perp by double inclusion
};

// Exact bases plus the duality double-inclusion check. Throws
// DualityViolation if the inclusion fails (implementation-bug sentinel).
SolutionBases solution_bases(const Triangulation& tri, const IncidenceTable& inc,
                             const NZMatrix& nz);

// Lift a quad vector v in TAS^perp to a full solution of the matching
// equations, with the triangle free variables of the reduced echelon
// parametrization pinned to zero. Throws NotInTASperp when v fails the exact
// membership precondition.
NormalVector lift_quad_to_full(const Triangulation& tri, const MatchingSystems& ms,
                               const SolutionBases& bases, const QuadVector& v);

// Max |row . x| residual of the standard system; exact zero for solutions.
bool solves_matching_exactly(const MatchingSystems& ms, const NormalVector& x);

struct TwoQuadSolution {
    NormalVector vector;
    std::vector<int> support;  // 1 or 2 quads with nonzero quad coordinate
    std::vector<int> partners; // q1 values whose pair search produced this vector
};

// Canonical quad vector in TAS^perp supported in {q_target, q1} with
// coordinate 1 at q_target, if one exists.
std::optional<QuadVector> two_quad_pair_solution(const SolutionBases& bases,
                                                 int q_target, int q1);

std::vector<TwoQuadSolution> two_quad_search(const Triangulation& tri,
                                             const MatchingSystems& ms,
                                             const SolutionBases& bases,
                                             int q_target);

struct Cluster {
    int tet = 0;
    std::vector<TwoQuadSolution> solutions; // one per quad type, in type order
    int distinct_count = 0;
};

std::vector<Cluster> cluster_search(const Triangulation& tri, const MatchingSystems& ms,
                                    const SolutionBases& bases);

} // namespace spine3
