#include "spine3/haken.hpp"

#include "spine3/angles.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace spine3 {

MatchingSystems matching_systems(const Triangulation& tri,
                                 [[maybe_unused]] const IncidenceTable& inc,
                                 const NZMatrix& nz) {
    const int n = tri.num_tets();
    MatchingSystems ms;
    ms.standard = QMatrix(static_cast<std::size_t>(tri.arc_count),
                          static_cast<std::size_t>(7 * n));

    // One equation per arc class, built at slot level: walking the two sides
    // of each face pairing. Each arc class has exactly two slots, and both
    // sides contribute once when we iterate source slots with tet <= target
    // (or canonical order for self-pairings).
    std::set<int> done;
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.face_map[static_cast<std::size_t>(4 * t + f)];
            int me = 4 * t + f, other = 4 * g.to_tet + g.to_face;
            if (std::min(me, other) != me || done.count(me))
                continue;
            done.insert(me);
            for (int v = 0; v < 4; ++v) {
                if (v == f)
                    continue;
                int arc = tri.arc_class[static_cast<std::size_t>(16 * t + 4 * f + v)];
                int v2 = g.perm[v];
                auto row = static_cast<std::size_t>(arc);
                ms.standard.at(row, NormalVector::tri_index(t, v)) += 1;
                ms.standard.at(row, NormalVector::quad_index(n, 3 * t + quad_type_of_pair(f, v))) += 1;
                ms.standard.at(row, NormalVector::tri_index(g.to_tet, v2)) -= 1;
                ms.standard.at(row, NormalVector::quad_index(n, 3 * g.to_tet + quad_type_of_pair(g.to_face, v2))) -= 1;
            }
        }

    ms.quad = QMatrix(static_cast<std::size_t>(tri.edge_count),
                      static_cast<std::size_t>(3 * n));
    for (int e = 0; e < tri.edge_count; ++e)
        for (int q = 0; q < 3 * n; ++q)
            ms.quad.at(static_cast<std::size_t>(e), static_cast<std::size_t>(q)) =
                nz.W[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)];
    return ms;
}

SolutionBases solution_bases(const Triangulation& tri, const IncidenceTable& inc,
                             const NZMatrix& nz) {
    const int n = tri.num_tets();
    SolutionBases sb;
    MatchingSystems ms = matching_systems(tri, inc, nz);
    sb.sns_basis = ms.standard.nullspace();
    for (const auto& x : sb.sns_basis) {
        QVec q(static_cast<std::size_t>(3 * n));
        for (int i = 0; i < 3 * n; ++i)
            q[static_cast<std::size_t>(i)] = x[NormalVector::quad_index(n, i)];
        sb.proj_sns_basis.push_back(std::move(q));
    }
    QMatrix c = tas_constraint_matrix(tri, inc);
    sb.tas_perp_basis = c.rowspace_basis();
    sb.tas_basis = c.nullspace();

    bool incl1 = span_contains_all(sb.tas_perp_basis, sb.proj_sns_basis);
    bool incl2 = span_contains_all(sb.proj_sns_basis, sb.tas_perp_basis);
    sb.duality_ok = incl1 && incl2;
    if (!sb.duality_ok)
        throw Error(ErrorCode::DualityViolation,
                    std::string("Proj(S_ns) vs TAS-perp inclusion failed: ") +
                        (incl1 ? "" : "Proj not in TAS-perp; ") +
                        (incl2 ? "" : "TAS-perp not in Proj"));
    return sb;
}

namespace {

bool in_tas_perp(const SolutionBases& bases, const QVec& v) {
    for (const auto& u : bases.tas_basis)
        if (dot(u, v) != 0)
            return false;
    return true;
}

} // namespace

NormalVector lift_quad_to_full(const Triangulation& tri, const MatchingSystems& ms,
                               const SolutionBases& bases, const QuadVector& v) {
    const int n = tri.num_tets();
    if (!in_tas_perp(bases, v.values))
        throw Error(ErrorCode::NotInTASperp,
                    "quad vector is not orthogonal to TAS");

    // Triangle unknowns against the quad part moved to the right-hand side.
    const std::size_t nt = static_cast<std::size_t>(4 * n);
    QMatrix a(ms.standard.rows(), nt);
    QVec rhs(ms.standard.rows(), Rational(0));
    for (std::size_t r = 0; r < ms.standard.rows(); ++r) {
        for (std::size_t c = 0; c < nt; ++c)
            a.at(r, c) = ms.standard.at(r, c);
        Rational s(0);
        for (int q = 0; q < 3 * n; ++q)
            s -= ms.standard.at(r, NormalVector::quad_index(n, q)) *
                 v.values[static_cast<std::size_t>(q)];
        rhs[r] = s;
    }
    auto tri_part = a.solve(rhs);
    if (!tri_part)
        throw Error(ErrorCode::DualityViolation,
                    "lift inconsistent although v is in TAS-perp");
    NormalVector out;
    out.values = qvec_zero(static_cast<std::size_t>(7 * n));
    for (std::size_t c = 0; c < nt; ++c)
        out.values[c] = (*tri_part)[c];
    for (int q = 0; q < 3 * n; ++q)
        out.values[NormalVector::quad_index(n, q)] = v.values[static_cast<std::size_t>(q)];
    return out;
}

bool solves_matching_exactly(const MatchingSystems& ms, const NormalVector& x) {
    return is_zero_vec(ms.standard.apply(x.values));
}

std::optional<QuadVector> two_quad_pair_solution(const SolutionBases& bases,
                                                 int q_target, int q1) {
    // alpha e_qt + beta e_q1 lies in TAS^perp iff alpha u(qt) + beta u(q1) = 0
    // for every TAS basis vector u. A solution with alpha != 0 exists iff the
    // qt column of the TAS basis lies in the span of the q1 column.
    const std::size_t nq = bases.tas_perp_basis.empty()
                               ? bases.tas_basis.empty()
                                     ? 0
                                     : bases.tas_basis[0].size()
                               : bases.tas_perp_basis[0].size();
    QVec col_t, col_1;
    for (const auto& u : bases.tas_basis) {
        col_t.push_back(u[static_cast<std::size_t>(q_target)]);
        col_1.push_back(u[static_cast<std::size_t>(q1)]);
    }
    Rational lambda(0);
    if (!is_zero_vec(col_t)) {
        if (is_zero_vec(col_1))
            return std::nullopt;
        // need col_t = lambda * col_1 exactly
        std::size_t piv = 0;
        while (col_1[piv] == 0)
            ++piv;
        lambda = col_t[piv] / col_1[piv];
        for (std::size_t i = 0; i < col_t.size(); ++i)
            if (col_t[i] != lambda * col_1[i])
                return std::nullopt;
    }
    QuadVector v;
    v.values = qvec_zero(nq);
    v.values[static_cast<std::size_t>(q_target)] = 1;
    if (q1 != q_target)
        v.values[static_cast<std::size_t>(q1)] -= lambda;
    else if (lambda != 0)
        return std::nullopt; // e_qt alone must already be orthogonal
    return v;
}

std::vector<TwoQuadSolution> two_quad_search(const Triangulation& tri,
                                             const MatchingSystems& ms,
                                             const SolutionBases& bases,
                                             int q_target) {
    const int nq = tri.num_quads();
    std::vector<TwoQuadSolution> out;
    std::map<QVec, std::size_t> seen; // canonical quad vector -> index in out
    auto add = [&](const QuadVector& v, int partner) {
        auto it = seen.find(v.values);
        if (it != seen.end()) {
            out[it->second].partners.push_back(partner);
            return;
        }
        TwoQuadSolution sol;
        sol.vector = lift_quad_to_full(tri, ms, bases, v);
        for (int q = 0; q < nq; ++q)
            if (v.values[static_cast<std::size_t>(q)] != 0)
                sol.support.push_back(q);
        sol.partners.push_back(partner);
        seen[v.values] = out.size();
        out.push_back(std::move(sol));
    };
    if (auto v = two_quad_pair_solution(bases, q_target, q_target))
        add(*v, q_target);
    for (int q1 = 0; q1 < nq; ++q1) {
        if (q1 == q_target)
            continue;
        if (auto v = two_quad_pair_solution(bases, q_target, q1))
            add(*v, q1);
    }
    return out;
}

std::vector<Cluster> cluster_search(const Triangulation& tri, const MatchingSystems& ms,
                                    const SolutionBases& bases) {
    std::vector<Cluster> clusters;
    for (int t = 0; t < tri.num_tets(); ++t) {
        Cluster c;
        c.tet = t;
        bool all = true;
        for (int k = 0; k < 3 && all; ++k) {
            auto sols = two_quad_search(tri, ms, bases, 3 * t + k);
            if (sols.empty())
                all = false;
            else
                c.solutions.push_back(sols.front());
        }
        if (!all)
            continue;
        std::set<QVec> distinct;
        for (const auto& s : c.solutions)
            distinct.insert(s.vector.values);
        c.distinct_count = static_cast<int>(distinct.size());
        clusters.push_back(std::move(c));
    }
    return clusters;
}

} // namespace spine3
