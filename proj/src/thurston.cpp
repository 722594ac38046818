#include "spine3/thurston.hpp"

#include "spine3/errors.hpp"
#include "spine3/lobachevsky.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace spine3 {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateEps = 1e-12;

void check_nondegenerate(const ShapeAssignment& z) {
    for (const auto& s : z)
        if (std::abs(s) < kDegenerateEps || std::abs(s - 1.0) < kDegenerateEps)
            throw Error(ErrorCode::DegenerateShape, "shape at 0 or 1");
}

cplx edge_product(const Triangulation& tri, const IncidenceTable& inc,
                  const ShapeAssignment& z, int e) {
    cplx p(1.0, 0.0);
    for (int q = 0; q < tri.num_quads(); ++q) {
        int k = inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)];
        for (int j = 0; j < k; ++j)
            p *= z[static_cast<std::size_t>(q)];
    }
    return p;
}

} // namespace

ResidualReport residuals(const Triangulation& tri, const IncidenceTable& inc,
                         const ShapeAssignment& z, ResidualMode mode) {
    check_nondegenerate(z);
    ResidualReport rep;
    rep.mode = mode;
    const int nq = tri.num_quads();
    rep.tet_relation.resize(static_cast<std::size_t>(nq));
    for (int q = 0; q < nq; ++q) {
        cplx r = z[static_cast<std::size_t>(tri.quad_successor(q))] *
                     (cplx(1.0, 0.0) - z[static_cast<std::size_t>(q)]) -
                 cplx(1.0, 0.0);
        rep.tet_relation[static_cast<std::size_t>(q)] = std::abs(r);
        rep.max_relation = std::max(rep.max_relation, std::abs(r));
    }
    for (int e = 0; e < tri.edge_count; ++e) {
        cplx p = edge_product(tri, inc, z, e);
        rep.edge_products.push_back(p);
        double d = std::abs(p - 1.0);
        if (mode == ResidualMode::Generalized)
            d = std::min(d, std::abs(p + 1.0));
        rep.edge.push_back(d);
        rep.max_edge = std::max(rep.max_edge, d);
    }
    rep.pass = rep.max_relation < 1e-8 && rep.max_edge < 1e-8;
    return rep;
}

namespace {

// Shapes of one tet derived from the log of its type-0 quad.
void tet_shapes(const Triangulation& tri, int t, cplx w, ShapeAssignment& z) {
    cplx z0 = std::exp(w);
    int s1 = tri.quad_successor_type(t, 0);
    int s2 = tri.quad_successor_type(t, s1);
    z[static_cast<std::size_t>(3 * t)] = z0;
    z[static_cast<std::size_t>(3 * t + s1)] = cplx(1.0, 0.0) / (cplx(1.0, 0.0) - z0);
    z[static_cast<std::size_t>(3 * t + s2)] = (z0 - cplx(1.0, 0.0)) / z0;
}

} // namespace

NewtonResult newton_refine(const Triangulation& tri, const IncidenceTable& inc,
                           const ShapeAssignment& z0) {
    check_nondegenerate(z0);
    const int n = tri.num_tets();
    const int ne = tri.edge_count;

    {
        ResidualReport pre = residuals(tri, inc, z0, ResidualMode::Generalized);
        if (pre.max_relation > 1e-6)
            throw Error(ErrorCode::NotShapeConsistent,
                        "seed violates the per-tet shape relation");
        if (pre.max_edge > 0.5)
            throw Error(ErrorCode::NotShapeConsistent,
                        "seed outside the Newton basin (edge residual > 0.5)");
    }

    // Log coordinates, one per tet, plus frozen branch integers.
    std::vector<cplx> w(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        w[static_cast<std::size_t>(t)] = std::log(z0[static_cast<std::size_t>(3 * t)]);
    ShapeAssignment z(static_cast<std::size_t>(3 * n));
    auto rebuild = [&](const std::vector<cplx>& ws) {
        for (int t = 0; t < n; ++t)
            tet_shapes(tri, t, ws[static_cast<std::size_t>(t)], z);
    };
    rebuild(w);

    std::vector<long> m(static_cast<std::size_t>(ne));
    auto log_sum = [&](int e) {
        cplx s(0.0, 0.0);
        for (int q = 0; q < 3 * n; ++q) {
            int k = inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)];
            if (k)
                s += static_cast<double>(k) * std::log(z[static_cast<std::size_t>(q)]);
        }
        return s;
    };
    for (int e = 0; e < ne; ++e)
        m[static_cast<std::size_t>(e)] = std::lround(log_sum(e).imag() / (2.0 * kPi));

    auto max_edge_residual = [&]() {
        double worst = 0.0;
        for (int e = 0; e < ne; ++e)
            worst = std::max(worst,
                             std::abs(edge_product(tri, inc, z, e) - cplx(1.0, 0.0)));
        return worst;
    };

    NewtonResult out;
    double res = max_edge_residual();
    out.residual_history.push_back(res);
    std::vector<cplx> best_w = w;
    double best_res = res;

    for (long it = 0; it < 50 && res > 1e-13; ++it) {
        Eigen::MatrixXcd J(ne, n);
        Eigen::VectorXcd F(ne);
        for (int e = 0; e < ne; ++e) {
            F(e) = log_sum(e) - cplx(0.0, 2.0 * kPi * static_cast<double>(
                                              m[static_cast<std::size_t>(e)]));
            for (int t = 0; t < n; ++t) {
                cplx zt = z[static_cast<std::size_t>(3 * t)];
                int s1 = tri.quad_successor_type(t, 0);
                int s2 = tri.quad_successor_type(t, s1);
                auto iq = [&](int k) {
                    return static_cast<double>(
                        inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(3 * t + k)]);
                };
                J(e, t) = iq(0) + iq(s1) * zt / (cplx(1.0, 0.0) - zt) +
                          iq(s2) / (zt - cplx(1.0, 0.0));
            }
        }
        Eigen::VectorXcd step =
            J.completeOrthogonalDecomposition().solve(-F);

        double damping = 1.0;
        bool accepted = false;
        for (int tries = 0; tries < 10; ++tries) {
            std::vector<cplx> cand = w;
            for (int t = 0; t < n; ++t)
                cand[static_cast<std::size_t>(t)] += damping * step(t);
            rebuild(cand);
            bool degenerate = false;
            for (const auto& s : z)
                if (std::abs(s) < kDegenerateEps || std::abs(s - 1.0) < kDegenerateEps)
                    degenerate = true;
            double cand_res = degenerate ? res + 1.0 : max_edge_residual();
            if (!degenerate && cand_res <= res) {
                w = cand;
                res = cand_res;
                accepted = true;
                break;
            }
            ++out.rejected_steps;
            damping *= 0.5;
        }
        ++out.iterations;
        if (!accepted) {
            out.flag = "NoProgress";
            break;
        }
        out.residual_history.push_back(res);
        if (res < best_res) {
            best_res = res;
            best_w = w;
        }
    }

    rebuild(best_w);
    out.z = z;
    out.report = residuals(tri, inc, z, ResidualMode::Strict);
    out.converged = best_res < 1e-10;
    return out;
}

ShapeVolume shape_volume(const Triangulation& tri, const IncidenceTable& inc,
                         const ShapeAssignment& z) {
    check_nondegenerate(z);
    ShapeVolume out;
    for (const auto& s : z)
        out.volume += lobachevsky(std::arg(s));
    ResidualReport rel = residuals(tri, inc, z, ResidualMode::Generalized);
    out.max_relation = rel.max_relation;
    bool positive_real = true;
    for (const auto& p : rel.edge_products) {
        double a = std::abs(p.imag()) / std::abs(p);
        out.max_edge_arg = std::max(out.max_edge_arg, a);
        if (a > 1e-8 || p.real() <= 0.0)
            positive_real = false;
    }
    out.in_WT = rel.max_relation < 1e-8 && positive_real;
    return out;
}

DegenerationVector degeneration_analysis(const Triangulation& tri,
                                         const IncidenceTable& inc,
                                         const std::vector<std::vector<int>>& W_table,
                                         const std::vector<ShapeAssignment>& sequence) {
    if (sequence.size() < 2)
        throw Error(ErrorCode::InvalidInput, "need at least two assignments");
    const int nq = tri.num_quads();
    auto log_norm = [&](const ShapeAssignment& z) {
        double s = 0.0;
        for (const auto& x : z) {
            double l = std::log(std::abs(x));
            s += l * l;
        }
        return std::sqrt(s);
    };
    for (std::size_t i = 0; i + 1 < sequence.size(); ++i)
        if (!(log_norm(sequence[i + 1]) > log_norm(sequence[i])))
            throw Error(ErrorCode::NotDegenerating, "log norms are not growing");

    const ShapeAssignment& last = sequence.back();
    DegenerationVector out;
    double denom = 1.0;
    for (const auto& x : last) {
        double l = std::log(std::abs(x));
        denom += l * l;
    }
    denom = std::sqrt(denom);
    out.u.resize(static_cast<std::size_t>(nq));
    for (int q = 0; q < nq; ++q)
        out.u[static_cast<std::size_t>(q)] =
            std::log(std::abs(last[static_cast<std::size_t>(q)])) / denom;

    for (int e = 0; e < tri.edge_count; ++e) {
        double s = 0.0;
        for (int q = 0; q < nq; ++q)
            s += inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)] *
                 out.u[static_cast<std::size_t>(q)];
        out.residual_38 = std::max(out.residual_38, std::abs(s));
    }

    // Per tet, the quad whose shape stays closest to 1; the coefficient is
    // the u value of its cyclic successor.
    out.v.assign(static_cast<std::size_t>(nq), 0.0);
    for (int t = 0; t < tri.num_tets(); ++t) {
        int best = 3 * t;
        for (int k = 1; k < 3; ++k)
            if (std::abs(last[static_cast<std::size_t>(3 * t + k)] - 1.0) <
                std::abs(last[static_cast<std::size_t>(best)] - 1.0))
                best = 3 * t + k;
        out.I_set.push_back(best);
        double a = out.u[static_cast<std::size_t>(tri.quad_successor(best))];
        out.v[static_cast<std::size_t>(best)] = a;
    }
    for (int e = 0; e < tri.edge_count; ++e) {
        double s = 0.0;
        for (int q = 0; q < nq; ++q)
            s += out.v[static_cast<std::size_t>(q)] *
                 W_table[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)];
        out.residual_39 = std::max(out.residual_39, std::abs(s));
    }
    return out;
}

} // namespace spine3
