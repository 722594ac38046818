#include "spine3/volopt.hpp"

#include "spine3/lobachevsky.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>

namespace spine3 {

namespace {

constexpr double kPi = std::numbers::pi;

// Classification thresholds are fixed; config.grad_tol only steers the
// iteration's stopping point.
constexpr double kSmoothCriticalTol = 1e-9;
constexpr double kDirectionalTol = 1e-6;

double dist_to_pi_lattice(double x) { return std::abs(std::remainder(x, kPi)); }

int resolve_threads(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("SPINE3_THREADS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

} // namespace

VolOptContext make_volopt_context(const Triangulation& tri, const IncidenceTable& inc,
                                  const NZMatrix& nz) {
    TASBasis tas = tas_basis(tri, inc);
    TASProjector proj(tas);
    return VolOptContext{tri, inc, nz, std::move(tas), std::move(proj)};
}

FlatSets flat_sets(const Triangulation& tri, const AnglePoint& theta, double eps) {
    FlatSets fs;
    const int n = tri.num_tets();
    for (int t = 0; t < n; ++t) {
        int cnt = 0;
        for (int k = 0; k < 3; ++k)
            if (dist_to_pi_lattice(theta[static_cast<std::size_t>(3 * t + k)]) < eps) {
                fs.flat_quads.push_back(3 * t + k);
                ++cnt;
            }
        if (cnt == 3)
            fs.flat_tets.push_back(t);
        else if (cnt > 0)
            fs.partially_flat_tets.push_back(t);
    }
    for (int q : fs.flat_quads) {
        int t = q / 3;
        if (std::find(fs.partially_flat_tets.begin(), fs.partially_flat_tets.end(),
                      t) != fs.partially_flat_tets.end())
            fs.w_quads.push_back(q);
    }
    return fs;
}

double volume(const AnglePoint& theta) {
    double v = 0.0;
    for (double t : theta)
        v += lobachevsky(t);
    return v;
}

VolumeGrad volume_and_grad(const AnglePoint& theta) {
    VolumeGrad vg;
    vg.grad.resize(theta.size());
    for (std::size_t q = 0; q < theta.size(); ++q) {
        vg.vol += lobachevsky(theta[q]);
        if (std::abs(2.0 * std::sin(theta[q])) < 1e-300)
            vg.near_singular = true;
        vg.grad[q] = lobachevsky_deriv(theta[q]);
    }
    return vg;
}

Directional directional_derivative(const VolOptContext& ctx, const AnglePoint& theta,
                                   const std::vector<double>& u, double flat_eps) {
    FlatSets fs = flat_sets(ctx.tri, theta, flat_eps);
    double s = 0.0;
    for (int q : fs.w_quads)
        s += u[static_cast<std::size_t>(q)];
    Directional d;
    if (s > 1e-9) {
        d.kind = Directional::Kind::PlusInfinity;
        return d;
    }
    if (s < -1e-9) {
        d.kind = Directional::Kind::MinusInfinity;
        return d;
    }
    std::vector<bool> is_flat(theta.size(), false);
    for (int q : fs.flat_quads)
        is_flat[static_cast<std::size_t>(q)] = true;
    double val = 0.0;
    for (std::size_t q = 0; q < theta.size(); ++q) {
        if (is_flat[q]) {
            if (u[q] != 0.0)
                val -= u[q] * std::log(std::abs(u[q]));
        } else {
            val -= u[q] * std::log(std::abs(2.0 * std::sin(theta[q])));
        }
    }
    d.value = val;
    return d;
}

const char* classification_name(Classification c) {
    switch (c) {
    case Classification::SmoothCritical: return "smooth-critical";
    case Classification::NonsmoothCritical: return "nonsmooth-critical";
    case Classification::NonCritical: return "non-critical";
    }
    return "unknown";
}

namespace {

struct RestartOutcome {
    AnglePoint theta;
    double vol = -1e300;
    double grad_norm = 0.0;
    long iterations = 0;
    bool hit_max = false;
    bool near_singular = false;
};

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

// Second-order polish at smooth candidates: Newton on the stationarity
// system in orthonormal TAS coordinates. The Armijo search on the volume
// cannot resolve improvements below fp noise (~1e-16), which caps plain
// ascent near ||P grad|| ~ 1e-8; the gradient itself is computable to
// machine precision, so Newton pushes stationarity to ~1e-13.
void newton_polish(const VolOptContext& ctx, AnglePoint& theta, double flat_eps) {
    const auto& basis = ctx.projector.orthonormal_basis();
    const int d = static_cast<int>(basis.size());
    if (d == 0)
        return;
    const int nq = static_cast<int>(theta.size());
    double base_vol = volume(theta);

    for (int it = 0; it < 40; ++it) {
        if (flat_sets(ctx.tri, theta, flat_eps).any_flat())
            return;
        VolumeGrad vg = volume_and_grad(theta);
        std::vector<double> gp = ctx.projector.project(vg.grad);
        double gn = norm2(gp);
        if (gn < 1e-13)
            return;
        // H = U^T diag(Lambda''(theta)) U with Lambda''(t) = -cot t
        std::vector<double> hdiag(static_cast<std::size_t>(nq));
        for (int q = 0; q < nq; ++q) {
            double s = std::sin(theta[static_cast<std::size_t>(q)]);
            double c = std::cos(theta[static_cast<std::size_t>(q)]);
            if (std::abs(s) < 1e-12)
                return; // too close to flat for curvature
            hdiag[static_cast<std::size_t>(q)] = -c / s;
        }
        std::vector<double> h(static_cast<std::size_t>(d * d), 0.0);
        std::vector<double> gd(static_cast<std::size_t>(d), 0.0);
        for (int a = 0; a < d; ++a) {
            for (int q = 0; q < nq; ++q)
                gd[static_cast<std::size_t>(a)] +=
                    basis[static_cast<std::size_t>(a)][static_cast<std::size_t>(q)] *
                    vg.grad[static_cast<std::size_t>(q)];
            for (int b = a; b < d; ++b) {
                double s = 0.0;
                for (int q = 0; q < nq; ++q)
                    s += basis[static_cast<std::size_t>(a)][static_cast<std::size_t>(q)] *
                         hdiag[static_cast<std::size_t>(q)] *
                         basis[static_cast<std::size_t>(b)][static_cast<std::size_t>(q)];
                h[static_cast<std::size_t>(a * d + b)] = s;
                h[static_cast<std::size_t>(b * d + a)] = s;
            }
        }
        // Solve H s = -g by Gaussian elimination with partial pivoting.
        std::vector<double> m = h, rhs(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            rhs[static_cast<std::size_t>(a)] = -gd[static_cast<std::size_t>(a)];
        std::vector<int> piv(static_cast<std::size_t>(d));
        for (int c = 0; c < d; ++c) {
            int p = c;
            for (int r = c + 1; r < d; ++r)
                if (std::abs(m[static_cast<std::size_t>(r * d + c)]) >
                    std::abs(m[static_cast<std::size_t>(p * d + c)]))
                    p = r;
            if (std::abs(m[static_cast<std::size_t>(p * d + c)]) < 1e-14)
                return; // singular Hessian; leave the point as is
            if (p != c) {
                for (int j = 0; j < d; ++j)
                    std::swap(m[static_cast<std::size_t>(p * d + j)],
                              m[static_cast<std::size_t>(c * d + j)]);
                std::swap(rhs[static_cast<std::size_t>(p)], rhs[static_cast<std::size_t>(c)]);
            }
            for (int r = c + 1; r < d; ++r) {
                double f = m[static_cast<std::size_t>(r * d + c)] /
                           m[static_cast<std::size_t>(c * d + c)];
                for (int j = c; j < d; ++j)
                    m[static_cast<std::size_t>(r * d + j)] -=
                        f * m[static_cast<std::size_t>(c * d + j)];
                rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(c)];
            }
        }
        std::vector<double> s(static_cast<std::size_t>(d));
        for (int r = d - 1; r >= 0; --r) {
            double acc = rhs[static_cast<std::size_t>(r)];
            for (int j = r + 1; j < d; ++j)
                acc -= m[static_cast<std::size_t>(r * d + j)] * s[static_cast<std::size_t>(j)];
            s[static_cast<std::size_t>(r)] = acc / m[static_cast<std::size_t>(r * d + r)];
        }

        double damping = 1.0;
        bool accepted = false;
        for (int tries = 0; tries < 6 && !accepted; ++tries) {
            AnglePoint cand = theta;
            for (int q = 0; q < nq; ++q) {
                double delta = 0.0;
                for (int a = 0; a < d; ++a)
                    delta += s[static_cast<std::size_t>(a)] *
                             basis[static_cast<std::size_t>(a)][static_cast<std::size_t>(q)];
                cand[static_cast<std::size_t>(q)] += damping * delta;
            }
            VolumeGrad cg = volume_and_grad(cand);
            std::vector<double> cgp = ctx.projector.project(cg.grad);
            if (norm2(cgp) < gn && cg.vol >= base_vol - 1e-12) {
                theta = cand;
                accepted = true;
            }
            damping *= 0.5;
        }
        if (!accepted)
            return;
    }
}

RestartOutcome run_restart(const VolOptContext& ctx, AnglePoint theta,
                           const MaximizeConfig& cfg) {
    RestartOutcome out;
    long iters = 0;
    bool stalled = false;
    for (; iters < cfg.max_iterations; ++iters) {
        VolumeGrad vg = volume_and_grad(theta);
        out.near_singular = out.near_singular || vg.near_singular;
        std::vector<double> gp = ctx.projector.project(vg.grad);
        double gn = norm2(gp);
        if (gn < cfg.grad_tol)
            break;
        double v0 = vg.vol;
        double step = 1.0;
        bool accepted = false;
        while (step >= 1e-14) {
            AnglePoint cand = theta;
            for (std::size_t q = 0; q < cand.size(); ++q)
                cand[q] += step * gp[q];
            if (volume(cand) >= v0 + 1e-4 * step * gn * gn) {
                theta = std::move(cand);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            stalled = true;
            break;
        }
    }
    out.hit_max = iters >= cfg.max_iterations;
    (void)stalled;

    if (!flat_sets(ctx.tri, theta, cfg.flat_eps).any_flat())
        newton_polish(ctx, theta, cfg.flat_eps);

    VolumeGrad vg = volume_and_grad(theta);
    out.theta = std::move(theta);
    out.vol = vg.vol;
    out.grad_norm = norm2(ctx.projector.project(vg.grad));
    out.iterations = iters;
    out.near_singular = out.near_singular || vg.near_singular;
    return out;
}

} // namespace

VolumeReport maximize(const VolOptContext& ctx, const AnglePoint& theta0,
                      const MaximizeConfig& config) {
    const int d = ctx.projector.dim();
    const int restarts = std::max(1, config.restarts);

    // All perturbation coefficients are drawn up front so the result does
    // not depend on how restarts are distributed over threads.
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> dist(-config.start_scale, config.start_scale);
    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(restarts));
    for (int r = 1; r < restarts; ++r) {
        coeffs[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            coeffs[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)] = dist(rng);
    }

    auto start_point = [&](int r) {
        AnglePoint th = theta0;
        if (r == 0)
            return th;
        const auto& basis = ctx.projector.orthonormal_basis();
        for (std::size_t q = 0; q < th.size(); ++q)
            for (int a = 0; a < d; ++a)
                th[q] += coeffs[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)] *
                         basis[static_cast<std::size_t>(a)][q];
        return th;
    };

    std::vector<RestartOutcome> results(static_cast<std::size_t>(restarts));
    int nthreads = std::min(resolve_threads(config.threads), restarts);
    if (nthreads <= 1) {
        for (int r = 0; r < restarts; ++r)
            results[static_cast<std::size_t>(r)] = run_restart(ctx, start_point(r), config);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&, w]() {
                for (int r = w; r < restarts; r += nthreads)
                    results[static_cast<std::size_t>(r)] =
                        run_restart(ctx, start_point(r), config);
            });
        for (auto& th : pool)
            th.join();
    }

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[static_cast<std::size_t>(r)].vol >
            results[static_cast<std::size_t>(best)].vol)
            best = r;

    const RestartOutcome& win = results[static_cast<std::size_t>(best)];
    VolumeReport rep;
    rep.point = win.theta;
    rep.volume = win.vol;
    rep.grad_norm_in_tas = win.grad_norm;
    rep.flats = flat_sets(ctx.tri, win.theta, config.flat_eps);
    rep.restart_index = best;
    rep.iterations = win.iterations;
    rep.hit_max_iterations = win.hit_max;
    rep.near_singular = win.near_singular;

    if (!rep.flats.any_flat() && rep.grad_norm_in_tas < kSmoothCriticalTol) {
        rep.classification = Classification::SmoothCritical;
    } else if (rep.flats.any_flat()) {
        bool critical = true;
        for (const auto& u : ctx.projector.orthonormal_basis()) {
            for (double sign : {1.0, -1.0}) {
                std::vector<double> su(u.size());
                for (std::size_t q = 0; q < u.size(); ++q)
                    su[q] = sign * u[q];
                Directional dd =
                    directional_derivative(ctx, win.theta, su, config.flat_eps);
                if (dd.kind == Directional::Kind::PlusInfinity ||
                    (dd.kind == Directional::Kind::Finite &&
                     dd.value > kDirectionalTol)) {
                    critical = false;
                    break;
                }
            }
            if (!critical)
                break;
        }
        rep.classification = critical ? Classification::NonsmoothCritical
                                      : Classification::NonCritical;
    } else {
        rep.classification = Classification::NonCritical;
    }
    return rep;
}

ExtractionResult classify_and_extract(const VolOptContext& ctx,
                                      const VolumeReport& report,
                                      const MatchingSystems& ms,
                                      const SolutionBases& bases) {
    ExtractionResult out;
    if (report.classification == Classification::NonCritical)
        throw Error(ErrorCode::InvalidInput,
                    "extraction requires a critical point report");
    if (report.classification == Classification::NonsmoothCritical &&
        report.flats.flat_quads.empty())
        throw Error(ErrorCode::InvalidInput,
                    "nonsmooth report with empty flat quad set");

    if (report.classification == Classification::SmoothCritical) {
        out.smooth = true;
        const AnglePoint& th = report.point;
        out.z.resize(th.size());
        for (std::size_t q = 0; q < th.size(); ++q) {
            int pred = ctx.tri.quad_predecessor(static_cast<int>(q));
            int succ = ctx.tri.quad_successor(static_cast<int>(q));
            double ratio = std::sin(th[static_cast<std::size_t>(pred)]) /
                           std::sin(th[static_cast<std::size_t>(succ)]);
            out.z[q] = ratio * std::complex<double>(std::cos(th[q]), std::sin(th[q]));
        }
        out.residual_report =
            residuals(ctx.tri, ctx.inc, out.z, ResidualMode::Generalized);
        out.extraction_mismatch = out.residual_report.max_edge > 1e-6;
        return out;
    }

    // Non-smooth: a two-quad solution for every flat quad, clusters for
    // fully flat tets.
    std::vector<QVec> seen;
    for (int q : report.flats.flat_quads) {
        auto sols = two_quad_search(ctx.tri, ms, bases, q);
        for (auto& s : sols) {
            bool dup = false;
            for (const auto& v : seen)
                if (v == s.vector.values)
                    dup = true;
            if (!dup) {
                seen.push_back(s.vector.values);
                out.two_quad_solutions.push_back(std::move(s));
            }
        }
    }
    for (int t : report.flats.flat_tets) {
        Cluster c;
        c.tet = t;
        bool all = true;
        for (int k = 0; k < 3 && all; ++k) {
            auto sols = two_quad_search(ctx.tri, ms, bases, 3 * t + k);
            if (sols.empty())
                all = false;
            else
                c.solutions.push_back(sols.front());
        }
        if (all) {
            std::vector<QVec> distinct;
            for (const auto& s : c.solutions) {
                bool dup = false;
                for (const auto& v : distinct)
                    if (v == s.vector.values)
                        dup = true;
                if (!dup)
                    distinct.push_back(s.vector.values);
            }
            c.distinct_count = static_cast<int>(distinct.size());
            out.clusters.push_back(std::move(c));
        }
    }
    return out;
}

FlatteningPath fg_flatten(const VolOptContext& ctx, const VolumeReport& report) {
    const double eps = 1e-7;
    FlatSets fs = flat_sets(ctx.tri, report.point, eps);
    if (fs.partially_flat_tets.empty())
        throw Error(ErrorCode::NotApplicable, "no partially flat tetrahedra");

    FlatteningPath path;
    path.start = report.point;
    path.vol_start = volume(report.point);
    AnglePoint theta = report.point;
    const int nq = ctx.tri.num_quads();

    while (true) {
        fs = flat_sets(ctx.tri, theta, eps);
        int n_before = static_cast<int>(fs.partially_flat_tets.size());
        if (n_before == 0)
            break;
        for (int t : fs.partially_flat_tets) {
            int cnt = 0;
            for (int k = 0; k < 3; ++k)
                if (dist_to_pi_lattice(theta[static_cast<std::size_t>(3 * t + k)]) < eps)
                    ++cnt;
            if (cnt != 1)
                throw Error(ErrorCode::ClaimViolation,
                            "partially flat tet without exactly one flat quad");
        }

        FlatteningLeg leg;
        leg.start = theta;
        leg.n_before = n_before;
        leg.v.assign(static_cast<std::size_t>(nq), 0);
        for (int q = 0; q < nq; ++q)
            for (int qp : fs.w_quads)
                leg.v[static_cast<std::size_t>(q)] +=
                    ctx.nz.w[static_cast<std::size_t>(qp)][static_cast<std::size_t>(q)];

        // Exact TAS membership of the integer direction.
        for (int t = 0; t < ctx.tri.num_tets(); ++t) {
            long s = leg.v[static_cast<std::size_t>(3 * t)] +
                     leg.v[static_cast<std::size_t>(3 * t + 1)] +
                     leg.v[static_cast<std::size_t>(3 * t + 2)];
            if (s != 0)
                throw Error(ErrorCode::ClaimViolation, "v has nonzero tet sum");
        }
        for (int e = 0; e < ctx.tri.edge_count; ++e) {
            long s = 0;
            for (int q = 0; q < nq; ++q)
                s += static_cast<long>(
                         ctx.inc.i[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)]) *
                     leg.v[static_cast<std::size_t>(q)];
            if (s != 0)
                throw Error(ErrorCode::ClaimViolation, "v has nonzero edge sum");
        }

        // First arrival of a moving quad at pi Z, both directions considered.
        double t_plus = 1e300, t_minus = 1e300;
        for (int q = 0; q < nq; ++q) {
            long vq = leg.v[static_cast<std::size_t>(q)];
            if (vq == 0)
                continue;
            double r = theta[static_cast<std::size_t>(q)] -
                       kPi * std::floor(theta[static_cast<std::size_t>(q)] / kPi);
            double up = (kPi - r) / static_cast<double>(std::labs(vq));
            double down = r / static_cast<double>(std::labs(vq));
            t_plus = std::min(t_plus, vq > 0 ? up : down);
            t_minus = std::min(t_minus, vq > 0 ? down : up);
        }
        double dir = t_plus <= t_minus ? 1.0 : -1.0;
        double t_guess = std::min(t_plus, t_minus);

        auto at = [&](double t) {
            AnglePoint p = theta;
            for (int q = 0; q < nq; ++q)
                p[static_cast<std::size_t>(q)] +=
                    dir * t * static_cast<double>(leg.v[static_cast<std::size_t>(q)]);
            return p;
        };
        auto arrived = [&](double t) {
            AnglePoint p = at(t);
            for (int q = 0; q < nq; ++q)
                if (leg.v[static_cast<std::size_t>(q)] != 0 &&
                    dist_to_pi_lattice(p[static_cast<std::size_t>(q)]) < eps * 0.5)
                    return true;
            return static_cast<int>(
                       flat_sets(ctx.tri, p, eps).partially_flat_tets.size()) < n_before;
        };

        double lo = 0.0, hi = t_guess + eps * 0.25;
        if (!arrived(hi))
            hi = t_guess * (1.0 + 1e-9) + eps;
        for (int it = 0; it < 200 && !arrived(hi); ++it)
            hi *= 1.0 + 1e-6;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (arrived(mid))
                hi = mid;
            else
                lo = mid;
        }
        leg.t0 = dir * hi;

        // Volume must be constant along the leg: U tets carry angle pairs
        // summing to a multiple of pi, so their contributions cancel.
        for (int jj = 0; jj < 64; ++jj) {
            double t = hi * static_cast<double>(jj) / 63.0;
            leg.max_vol_deviation = std::max(
                leg.max_vol_deviation, std::abs(volume(at(t)) - path.vol_start));
        }

        AnglePoint next = at(hi);
        // Snap angles that arrived at the lattice to exact multiples.
        for (int q = 0; q < nq; ++q)
            if (leg.v[static_cast<std::size_t>(q)] != 0 &&
                dist_to_pi_lattice(next[static_cast<std::size_t>(q)]) < 4.0 * eps)
                next[static_cast<std::size_t>(q)] =
                    kPi * std::round(next[static_cast<std::size_t>(q)] / kPi);

        FlatSets after = flat_sets(ctx.tri, next, eps);
        leg.n_after = static_cast<int>(after.partially_flat_tets.size());
        if (leg.n_after >= leg.n_before)
            throw Error(ErrorCode::ClaimViolation,
                        "flattening leg did not decrease the count");
        leg.end = next;
        theta = std::move(next);
        path.legs.push_back(std::move(leg));
    }

    path.end = theta;
    path.vol_end = volume(theta);
    return path;
}

} // namespace spine3
