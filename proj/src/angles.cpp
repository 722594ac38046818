#include "spine3/angles.hpp"

#include "spine3/lattice.hpp"

#include <cmath>
#include <numbers>

namespace spine3 {

QMatrix tas_constraint_matrix(const Triangulation& tri, const IncidenceTable& inc) {
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
    return c;
}

TASBasis tas_basis(const Triangulation& tri, const IncidenceTable& inc) {
    return TASBasis{tas_constraint_matrix(tri, inc).nullspace()};
}

SasInitResult sas_init(const Triangulation& tri, const IncidenceTable& inc) {
    const int n = tri.num_tets();
    const int m = n + tri.edge_count;
    QMatrix c = tas_constraint_matrix(tri, inc);

    // Work in units of pi: tet rows want 1, edge rows want 2 (that is, 0 mod 2).
    QVec rhs(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r)
        rhs[static_cast<std::size_t>(r)] = r < n ? 1 : 2;

    SasInitResult out;
    auto sol = c.solve(rhs);
    if (!sol) {
        // Relax modulo the 2pi lattice: find integer k with rhs + 2k in the
        // image of the constraint matrix. The image is cut out by the left
        // null space L, so we need (2L) k = -L rhs over the integers.
        out.used_lattice = true;
        auto lnull = c.transposed().nullspace();
        ZMat twoL;
        ZVec target;
        for (const auto& y : lnull) {
            // clear denominators to get a primitive integer row
            Integer den(1);
            for (const auto& x : y)
                den = den * x.get_den() / gcd(den, Integer(x.get_den()));
            ZVec row;
            Integer dotc(0);
            for (int r = 0; r < m; ++r) {
                Rational scaled = y[static_cast<std::size_t>(r)] * Rational(den);
                Integer yi = scaled.get_num();
                row.push_back(2 * yi);
                dotc += yi * rhs[static_cast<std::size_t>(r)].get_num();
            }
            twoL.push_back(std::move(row));
            target.push_back(-dotc);
        }
        auto k = solve_integer(twoL, target);
        if (!k)
            throw Error(ErrorCode::InitFailure,
                        "no 2pi-lattice shift makes the angle system solvable");
        for (int r = 0; r < m; ++r)
            rhs[static_cast<std::size_t>(r)] += Rational(2) * Rational((*k)[static_cast<std::size_t>(r)]);
        sol = c.solve(rhs);
        if (!sol)
            throw Error(ErrorCode::InitFailure,
                        "lattice-shifted angle system still inconsistent");
    }

    out.theta_over_pi = *sol;
    out.theta.resize(sol->size());
    for (std::size_t q = 0; q < sol->size(); ++q)
        out.theta[q] = std::numbers::pi * rat_double((*sol)[q]);
    return out;
}

DimensionCheck dimension_check(const Triangulation& tri, const IncidenceTable& inc) {
    DimensionCheck d;
    d.expected = tri.euler_characteristic() + tri.num_tets();
    d.actual = tas_basis(tri, inc).dim();
    d.match = d.expected == d.actual;
    return d;
}

TASProjector::TASProjector(const TASBasis& basis) {
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for (const auto& v : basis.basis) {
        std::vector<double> u(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            u[i] = rat_double(v[i]);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& w : ortho_) {
                double d = 0;
                for (std::size_t i = 0; i < u.size(); ++i)
                    d += u[i] * w[i];
                for (std::size_t i = 0; i < u.size(); ++i)
                    u[i] -= d * w[i];
            }
        double nrm = 0;
        for (double x : u)
            nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12)
            continue; // dependent input vector; exact bases never hit this
        for (double& x : u)
            x /= nrm;
        ortho_.push_back(std::move(u));
    }
}

std::vector<double> TASProjector::project(const std::vector<double>& g) const {
    std::vector<double> out(g.size(), 0.0);
    for (const auto& u : ortho_) {
        double d = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            d += u[i] * g[i];
        for (std::size_t i = 0; i < g.size(); ++i)
            out[i] += d * u[i];
    }
    return out;
}

namespace {

double dist_to_multiple(double x, double period) {
    double r = std::remainder(x, period);
    return std::abs(r);
}

} // namespace

SasResiduals sas_residuals(const Triangulation& tri, const IncidenceTable& inc,
                           const AnglePoint& theta) {
    SasResiduals res;
    const int n = tri.num_tets();
    for (int t = 0; t < n; ++t) {
        double s = 0;
        for (int k = 0; k < 3; ++k)
            s += theta[static_cast<std::size_t>(3 * t + k)];
        res.tet = std::max(res.tet, dist_to_multiple(s - std::numbers::pi,
                                                     2 * std::numbers::pi));
    }
    for (int e = 0; e < tri.edge_count; ++e) {
        double s = 0;
        for (int q = 0; q < 3 * n; ++q)
            s += inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)] *
                 theta[static_cast<std::size_t>(q)];
        res.edge = std::max(res.edge, dist_to_multiple(s, 2 * std::numbers::pi));
    }
    return res;
}

} // namespace spine3
