#include "spine3/nzform.hpp"

#include <random>

namespace spine3 {

Rational NZMatrix::pairing(const QVec& x, const QVec& y) const {
    Rational s(0);
    const std::size_t n = w.size();
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t p = 0; p < n; ++p)
            if (w[q][p] != 0)
                s += Rational(w[q][p]) * x[q] * y[p];
    return s;
}

NZMatrix build_forms(const Triangulation& tri, const IncidenceTable& inc) {
    const int n = tri.num_tets();
    const int nq = 3 * n;
    NZMatrix nz;
    nz.w.assign(static_cast<std::size_t>(nq), std::vector<int>(static_cast<std::size_t>(nq), 0));
    for (int t = 0; t < n; ++t)
        for (int k = 0; k < 3; ++k) {
            int q = 3 * t + k;
            int qs = tri.quad_successor(q);
            nz.w[static_cast<std::size_t>(q)][static_cast<std::size_t>(qs)] = 1;
            nz.w[static_cast<std::size_t>(qs)][static_cast<std::size_t>(q)] = -1;
        }
    nz.W.assign(static_cast<std::size_t>(tri.edge_count),
                std::vector<int>(static_cast<std::size_t>(nq), 0));
    for (int e = 0; e < tri.edge_count; ++e)
        for (int q = 0; q < nq; ++q) {
            int s = 0;
            for (int qp = 0; qp < nq; ++qp)
                s += inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(qp)] *
                     nz.w[static_cast<std::size_t>(qp)][static_cast<std::size_t>(q)];
            nz.W[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)] = s;
        }
    return nz;
}

QVec edge_tas_vector(const NZMatrix& nz, int e) {
    const auto& row = nz.W[static_cast<std::size_t>(e)];
    QVec u(row.size());
    for (std::size_t q = 0; q < row.size(); ++q)
        u[q] = row[q];
    return u;
}

namespace {

std::vector<QVec> z_subspace_basis(int tet_count) {
    // Canonical nullspace of the per-tet sum constraints.
    QMatrix m(static_cast<std::size_t>(tet_count), static_cast<std::size_t>(3 * tet_count));
    for (int t = 0; t < tet_count; ++t)
        for (int k = 0; k < 3; ++k)
            m.at(static_cast<std::size_t>(t), static_cast<std::size_t>(3 * t + k)) = 1;
    return m.nullspace();
}

} // namespace

IdentityReport pairing_identities(const Triangulation& tri,
                                  const IncidenceTable& inc, const NZMatrix& nz) {
    IdentityReport rep;
    const int nq = tri.num_quads();
    const int ne = tri.edge_count;
    auto record = [&rep](const std::string& name, bool ok) {
        rep.status.emplace_back(name, ok);
    };

    // antisymmetry and same-tet support of w
    {
        bool ok = true;
        for (int a = 0; a < nq; ++a)
            for (int b = 0; b < nq; ++b) {
                int v = nz.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                bool bad = v + nz.w[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] != 0 ||
                           (v != 0 && a / 3 != b / 3) || v < -1 || v > 1;
                if (bad) {
                    ok = false;
                    rep.violations.push_back({"antisymmetry", {a, b}, "w entry bad"});
                }
            }
        record("antisymmetry", ok);
    }

    // Prop 3.1(a): sum_q w(q, q') = 0
    {
        bool ok = true;
        for (int qp = 0; qp < nq; ++qp) {
            long s = 0;
            for (int q = 0; q < nq; ++q)
                s += nz.w[static_cast<std::size_t>(q)][static_cast<std::size_t>(qp)];
            if (s != 0) {
                ok = false;
                rep.violations.push_back({"prop_3_1_a", {qp}, "column sum " + std::to_string(s)});
            }
        }
        record("prop_3_1_a", ok);
    }

    // Prop 3.1(b): sum_{q,q'} i(e,q) i(e',q') w(q,q') = 0 for all edge pairs
    {
        bool ok = true;
        for (int e = 0; e < ne; ++e)
            for (int ep = 0; ep < ne; ++ep) {
                long s = 0;
                for (int q = 0; q < nq; ++q) {
                    int ieq = inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)];
                    if (ieq == 0)
                        continue;
                    for (int qp = 0; qp < nq; ++qp)
                        s += static_cast<long>(ieq) *
                             inc.i[static_cast<std::size_t>(ep)][static_cast<std::size_t>(qp)] *
                             nz.w[static_cast<std::size_t>(q)][static_cast<std::size_t>(qp)];
                }
                if (s != 0) {
                    ok = false;
                    rep.violations.push_back({"prop_3_1_b", {e, ep}, "sum " + std::to_string(s)});
                }
            }
        record("prop_3_1_b", ok);
    }

    // Composition values: sum_q w(q1,q) w(q,q2) is -2 on the diagonal, 1 for
    // distinct quads of one tet, 0 across tets.
    {
        bool ok = true;
        for (int q1 = 0; q1 < nq; ++q1)
            for (int q2 = 0; q2 < nq; ++q2) {
                long s = 0;
                for (int q = 0; q < nq; ++q)
                    s += static_cast<long>(nz.w[static_cast<std::size_t>(q1)][static_cast<std::size_t>(q)]) *
                         nz.w[static_cast<std::size_t>(q)][static_cast<std::size_t>(q2)];
                long want = q1 == q2 ? -2 : (q1 / 3 == q2 / 3 ? 1 : 0);
                if (s != want) {
                    ok = false;
                    rep.violations.push_back({"composition", {q1, q2},
                                              "got " + std::to_string(s) + " want " + std::to_string(want)});
                }
            }
        record("composition", ok);
    }

    // -3y identity on the canonical basis of Z, plus seeded random rational
    // combinations.
    {
        bool ok = true;
        auto zb = z_subspace_basis(tri.num_tets());
        std::mt19937_64 rng(0x5eed5a5au);
        std::uniform_int_distribution<int> num(-9, 9);
        std::vector<QVec> samples = zb;
        for (int r = 0; r < 4; ++r) {
            QVec y = qvec_zero(static_cast<std::size_t>(nq));
            for (const auto& v : zb) {
                Rational c(num(rng), 1 + std::abs(num(rng)));
                c.canonicalize();
                for (int q = 0; q < nq; ++q)
                    y[static_cast<std::size_t>(q)] += c * v[static_cast<std::size_t>(q)];
            }
            samples.push_back(y);
        }
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const QVec& y = samples[s];
            for (int q1 = 0; q1 < nq; ++q1) {
                Rational acc(0);
                for (int q = 0; q < nq; ++q) {
                    if (nz.w[static_cast<std::size_t>(q1)][static_cast<std::size_t>(q)] == 0)
                        continue;
                    for (int q2 = 0; q2 < nq; ++q2)
                        acc += Rational(nz.w[static_cast<std::size_t>(q1)][static_cast<std::size_t>(q)] *
                                        nz.w[static_cast<std::size_t>(q)][static_cast<std::size_t>(q2)]) *
                               y[static_cast<std::size_t>(q2)];
                }
                if (acc != Rational(-3) * y[static_cast<std::size_t>(q1)]) {
                    ok = false;
                    rep.violations.push_back({"minus_3y", {static_cast<long>(s), q1}, "mismatch"});
                }
            }
        }
        record("minus_3y", ok);
    }

    // Triple composition: sum w(q1,.) w(.,.) w(.,q4) = -3 w(q1,q4)
    {
        bool ok = true;
        for (int q1 = 0; q1 < nq; ++q1)
            for (int q4 = 0; q4 < nq; ++q4) {
                long s = 0;
                for (int q2 = 0; q2 < nq; ++q2) {
                    if (nz.w[static_cast<std::size_t>(q1)][static_cast<std::size_t>(q2)] == 0)
                        continue;
                    for (int q3 = 0; q3 < nq; ++q3)
                        s += static_cast<long>(nz.w[static_cast<std::size_t>(q1)][static_cast<std::size_t>(q2)]) *
                             nz.w[static_cast<std::size_t>(q2)][static_cast<std::size_t>(q3)] *
                             nz.w[static_cast<std::size_t>(q3)][static_cast<std::size_t>(q4)];
                }
                if (s != -3L * nz.w[static_cast<std::size_t>(q1)][static_cast<std::size_t>(q4)]) {
                    ok = false;
                    rep.violations.push_back({"triple_composition", {q1, q4}, "sum " + std::to_string(s)});
                }
            }
        record("triple_composition", ok);
    }

    return rep;
}

ChainMaps build_chain_maps(const Triangulation& tri, const IncidenceTable& inc,
                           const NZMatrix& nz) {
    const int nq = tri.num_quads();
    const int ne = tri.edge_count;
    const int nv = tri.vertex_count;
    ChainMaps cm;
    cm.Z_basis = z_subspace_basis(tri.num_tets());

    cm.A_full = QMatrix(static_cast<std::size_t>(ne), static_cast<std::size_t>(nq));
    for (int e = 0; e < ne; ++e)
        for (int q = 0; q < nq; ++q)
            cm.A_full.at(static_cast<std::size_t>(e), static_cast<std::size_t>(q)) =
                inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)];

    cm.B = QMatrix(static_cast<std::size_t>(nv), static_cast<std::size_t>(ne));
    for (int e = 0; e < ne; ++e)
        for (int v = 0; v < nv; ++v)
            cm.B.at(static_cast<std::size_t>(v), static_cast<std::size_t>(e)) =
                tri.edge_end_multiplicity(e, v);
    cm.B_star = cm.B.transposed();

    cm.A_star = QMatrix(static_cast<std::size_t>(nq), static_cast<std::size_t>(ne));
    for (int q = 0; q < nq; ++q)
        for (int e = 0; e < ne; ++e)
            cm.A_star.at(static_cast<std::size_t>(q), static_cast<std::size_t>(e)) =
                Rational(nz.W[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)]) /
                Rational(3);
    return cm;
}

ExactnessReport chain_analysis(const Triangulation& tri, const IncidenceTable& inc,
                               const NZMatrix& nz) {
    ChainMaps cm = build_chain_maps(tri, inc, nz);
    ExactnessReport rep;
    const int nv = tri.vertex_count;

    rep.dim_Z = static_cast<long>(cm.Z_basis.size());

    // A restricted to Z, in the canonical Z-basis coordinates
    QMatrix zmat = QMatrix::from_rows(cm.Z_basis).transposed(); // 3T x dimZ
    QMatrix a_on_z = cm.A_full * zmat;                          // E x dimZ

    rep.rank_A = static_cast<long>(a_on_z.rank());
    rep.rank_B = static_cast<long>(cm.B.rank());
    rep.BA_zero = (cm.B * a_on_z).is_zero();
    rep.im_A_eq_ker_B =
        rep.rank_A == static_cast<long>(cm.B.cols()) - rep.rank_B;
    rep.B_surjective = rep.rank_B == nv;
    rep.B_star_injective = static_cast<long>(cm.B_star.rank()) == nv;
    rep.AstarBstar_zero = (cm.A_star * cm.B_star).is_zero();
    rep.ker_Astar_eq_im_Bstar =
        static_cast<long>(cm.A_star.cols()) - static_cast<long>(cm.A_star.rank()) == nv;

    // Isotropy of im(A*): w(A*(x), A*(y)) = 0 for the standard basis of R^E.
    {
        bool ok = true;
        const int ne = tri.edge_count;
        for (int e1 = 0; e1 < ne && ok; ++e1)
            for (int e2 = 0; e2 < ne && ok; ++e2) {
                QVec x = cm.A_star.col(static_cast<std::size_t>(e1));
                QVec y = cm.A_star.col(static_cast<std::size_t>(e2));
                if (nz.pairing(x, y) != 0)
                    ok = false;
            }
        rep.isotropic = ok;
    }

    // ker(A) within Z = TAS: nullspace of tet rows stacked on incidence rows.
    {
        const int n = tri.num_tets();
        QMatrix c(static_cast<std::size_t>(n + tri.edge_count),
                  static_cast<std::size_t>(3 * n));
        for (int t = 0; t < n; ++t)
            for (int k = 0; k < 3; ++k)
                c.at(static_cast<std::size_t>(t), static_cast<std::size_t>(3 * t + k)) = 1;
        for (int e = 0; e < tri.edge_count; ++e)
            for (int q = 0; q < 3 * n; ++q)
                c.at(static_cast<std::size_t>(n + e), static_cast<std::size_t>(q)) =
                    inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)];
        rep.tas_basis = c.nullspace();
        rep.dim_ker_A = static_cast<long>(rep.tas_basis.size());
    }
    return rep;
}

} // namespace spine3
