#pragma once

#include "spine3/angles.hpp"
#include "spine3/haken.hpp"
#include "spine3/nzform.hpp"
#include "spine3/thurston.hpp"
#include "spine3/triangulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spine3 {

// Everything the optimizer needs, built once and shared read-only.
struct VolOptContext {
    const Triangulation& tri;
    const IncidenceTable& inc;
    const NZMatrix& nz;
    TASBasis tas;
    TASProjector projector;
};

VolOptContext make_volopt_context(const Triangulation& tri, const IncidenceTable& inc,
                                  const NZMatrix& nz);

// Flat-quad bookkeeping at a point. A quad is flat when its angle is within
// eps of pi Z. The per-tet product condition forces 0, 1 or 3 flat quads per
// tet; U is the set of partially-flat-but-not-flat tets, and the moving set
// W collects their flat quads.
struct FlatSets {
    std::vector<int> flat_quads;
    std::vector<int> flat_tets;           // all three quads flat
    std::vector<int> partially_flat_tets; // U: some but not all quads flat
    std::vector<int> w_quads;             // flat quads inside U tets

    bool any_flat() const { return !flat_quads.empty(); }
};

FlatSets flat_sets(const Triangulation& tri, const AnglePoint& theta, double eps);

double volume(const AnglePoint& theta);

struct VolumeGrad {
    double vol = 0.0;
    std::vector<double> grad; // d vol / d theta(q) = -ln|2 sin theta(q)|
    bool near_singular = false;
};

VolumeGrad volume_and_grad(const AnglePoint& theta);

// One-sided derivative d/dt vol(theta + t u) at t -> 0+. Divergent exactly
// when the moving flat quads of u do not balance.
struct Directional {
    enum class Kind { Finite, PlusInfinity, MinusInfinity } kind = Kind::Finite;
    double value = 0.0; // meaningful for Finite
};

Directional directional_derivative(const VolOptContext& ctx, const AnglePoint& theta,
                                   const std::vector<double>& u, double flat_eps);

enum class Classification { SmoothCritical, NonsmoothCritical, NonCritical };

const char* classification_name(Classification c);

struct VolumeReport {
    AnglePoint point;
    double volume = 0.0;
    double grad_norm_in_tas = 0.0;
    FlatSets flats;
    Classification classification = Classification::NonCritical;
    int restart_index = 0;
    long iterations = 0; // accepted ascent steps of the winning restart
    bool hit_max_iterations = false;
    bool near_singular = false;
};

struct MaximizeConfig {
    int restarts = 20;
    std::uint64_t seed = 0;
    long max_iterations = 2000;
    double grad_tol = 1e-9;   // classification threshold on ||P grad||
    double flat_eps = 1e-7;   // distance to pi Z counting as flat
    double start_scale = 6.0; // restart perturbation amplitude along TAS
    int threads = 0;          // 0: SPINE3_THREADS or hardware concurrency
};

// Multi-start projected gradient ascent with Armijo backtracking on the
// volume itself, followed by a Newton polish in TAS coordinates at smooth
// candidates. Deterministic for fixed seed, independent of thread count.
VolumeReport maximize(const VolOptContext& ctx, const AnglePoint& theta0,
                      const MaximizeConfig& config);

struct ExtractionResult {
    bool smooth = false;
    // smooth branch
    ShapeAssignment z;
    ResidualReport residual_report;
    bool extraction_mismatch = false; // smooth point with residuals > 1e-6
    // non-smooth branch
    std::vector<TwoQuadSolution> two_quad_solutions;
    std::vector<Cluster> clusters;
};

// Extraction at a critical point: shape parameters from sine ratios at
// smooth points, two-quad normal solutions at flat quads.
ExtractionResult classify_and_extract(const VolOptContext& ctx,
                                      const VolumeReport& report,
                                      const MatchingSystems& ms,
                                      const SolutionBases& bases);

struct FlatteningLeg {
    std::vector<long> v; // integer TAS direction sum_{q' in W} w(q', .)
    double t0 = 0.0;     // signed parameter of the first arrival
    AnglePoint start, end;
    int n_before = 0, n_after = 0;   // |U| on each side
    double max_vol_deviation = 0.0;  // over 64 samples along the leg
};

struct FlatteningPath {
    AnglePoint start, end;
    double vol_start = 0.0, vol_end = 0.0;
    std::vector<FlatteningLeg> legs;
};

// Volume-preserving path from a non-smooth maximum to a point where every
// partially flat tetrahedron is fully flat. Throws NotApplicable when U is
// empty and ClaimViolation if the constructed direction leaves TAS.
FlatteningPath fg_flatten(const VolOptContext& ctx, const VolumeReport& report);

} // namespace spine3
