#pragma once

#include "spine3/qmatrix.hpp"
#include "spine3/triangulation.hpp"

#include <string>
#include <vector>

namespace spine3 {

// Integer carriers of the Neumann-Zagier structure.
//   w(q,q') = +1 if q -> q' in the tet's cyclic order, -1 if q' -> q, else 0.
//   W(e,q)  = sum_{q'} i(e,q') w(q',q).
struct NZMatrix {
    std::vector<std::vector<int>> w; // quads x quads
    std::vector<std::vector<int>> W; // edges x quads

    // pairing w(x,y) = sum w(q,q') x(q) y(q')
    Rational pairing(const QVec& x, const QVec& y) const;
};

NZMatrix build_forms(const Triangulation& tri, const IncidenceTable& inc);

struct IdentityViolationRecord {
    std::string identity;
    std::vector<long> indices;
    std::string detail;
};

struct IdentityReport {
    // identity name -> ok flag, in a fixed order
    std::vector<std::pair<std::string, bool>> status;
    std::vector<IdentityViolationRecord> violations;

    bool all_ok() const {
        for (const auto& [name, ok] : status)
            if (!ok)
                return false;
        return true;
    }
};

// Exact verification of Prop 3.1(a)(b), the double/triple composition
// identities of w, and the -3y identity on a basis of Z. Never throws;
// violations are collected in the report.
IdentityReport pairing_identities(const Triangulation& tri,
                                  const IncidenceTable& inc, const NZMatrix& nz);

// The chain complex Z -> R^E -> R^V and its dual, all over exact rationals.
struct ChainMaps {
    std::vector<QVec> Z_basis; // per-tet-sum-zero subspace of R^Box
    QMatrix A_full;            // E x 3T, A(x)(e) = sum_q i(e,q) x(q)
    QMatrix B;                 // V x E, with loop edges counted twice
    QMatrix A_star;            // 3T x E, (1/3) W(e,q)
    QMatrix B_star;            // E x V
};

ChainMaps build_chain_maps(const Triangulation& tri, const IncidenceTable& inc,
                           const NZMatrix& nz);

struct ExactnessReport {
    bool BA_zero = false;          // B . A = 0 on Z
    bool im_A_eq_ker_B = false;    // rank(A|_Z) == dim ker B
    bool B_surjective = false;     // rank B == |V|
    bool B_star_injective = false; // rank B* == |V|
    bool AstarBstar_zero = false;  // A* . B* = 0
    bool ker_Astar_eq_im_Bstar = false;
    bool isotropic = false; // w(A*(x), A*(y)) = 0 for all basis pairs
    long rank_A = 0;
    long rank_B = 0;
    long dim_ker_A = 0; // = dim TAS
    long dim_Z = 0;
    std::vector<QVec> tas_basis; // ker(A) within Z

    bool all_ok() const {
        return BA_zero && im_A_eq_ker_B && B_surjective && B_star_injective &&
               AstarBstar_zero && ker_Astar_eq_im_Bstar && isotropic;
    }
};

ExactnessReport chain_analysis(const Triangulation& tri, const IncidenceTable& inc,
                               const NZMatrix& nz);

// u_e(q) = W(e,q), the distinguished tangential angle structure of an edge.
QVec edge_tas_vector(const NZMatrix& nz, int e);

} // namespace spine3
