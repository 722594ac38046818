#pragma once

#include "spine3/triangulation.hpp"

#include <complex>
#include <string>
#include <vector>

namespace spine3 {

// One complex shape per quad; z(q) must avoid {0, 1}. Coherent tets satisfy
// z(succ q) = 1/(1 - z(q)) along the cyclic order.
using ShapeAssignment = std::vector<std::complex<double>>;

enum class ResidualMode { Strict, Generalized };

struct ResidualReport {
    ResidualMode mode = ResidualMode::Strict;
    std::vector<double> tet_relation; // per quad: |z(succ q)(1-z(q)) - 1|
    std::vector<double> edge;         // per edge: distance of the product to 1 (or +-1)
    std::vector<std::complex<double>> edge_products;
    double max_relation = 0.0;
    double max_edge = 0.0;
    bool pass = false; // both maxima below 1e-8
};

ResidualReport residuals(const Triangulation& tri, const IncidenceTable& inc,
                         const ShapeAssignment& z, ResidualMode mode);

struct NewtonResult {
    ShapeAssignment z;
    ResidualReport report; // strict mode
    bool converged = false;
    long iterations = 0;
    long rejected_steps = 0;              // damping events
    std::vector<double> residual_history; // max edge residual after each accepted step
    std::string flag;                     // empty, or "NoProgress"
};

// Damped Newton on log-shape coordinates, one complex unknown per tet,
// branch integers frozen from the seed, least-squares step (the edge system
// can be rank deficient). Accepted steps never increase the max edge
// residual.
NewtonResult newton_refine(const Triangulation& tri, const IncidenceTable& inc,
                           const ShapeAssignment& z0);

struct ShapeVolume {
    double volume = 0.0;
    bool in_WT = false; // coherent and every edge product a positive real
    double max_relation = 0.0;
    double max_edge_arg = 0.0; // |Im(prod)| / |prod| worst case
};

ShapeVolume shape_volume(const Triangulation& tri, const IncidenceTable& inc,
                         const ShapeAssignment& z);

struct DegenerationVector {
    std::vector<double> u; // normalized log vector at the last entry
    std::vector<int> I_set;
    std::vector<double> v; // sum of a_q q* over I
    double residual_38 = 0.0;
    double residual_39 = 0.0;
};

DegenerationVector degeneration_analysis(const Triangulation& tri,
                                         const IncidenceTable& inc,
                                         const std::vector<std::vector<int>>& W_table,
                                         const std::vector<ShapeAssignment>& sequence);

} // namespace spine3
