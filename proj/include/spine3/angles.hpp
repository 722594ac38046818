#pragma once

#include "spine3/nzform.hpp"
#include "spine3/qmatrix.hpp"
#include "spine3/triangulation.hpp"

#include <vector>

namespace spine3 {

// Argument vector over quads, radians. theta(q) represents the circle point
// e^{i theta(q)}; everything downstream only depends on theta mod pi or 2pi.
using AnglePoint = std::vector<double>;

struct TASBasis {
    std::vector<QVec> basis;
    int dim() const { return static_cast<int>(basis.size()); }
};

// Constraint matrix whose kernel is TAS: one per-tet sum row, then one
// incidence row per quotient edge.
QMatrix tas_constraint_matrix(const Triangulation& tri, const IncidenceTable& inc);

TASBasis tas_basis(const Triangulation& tri, const IncidenceTable& inc);

struct SasInitResult {
    AnglePoint theta;
    QVec theta_over_pi;     // exact solution in units of pi
    bool used_lattice = false; // required the 2pi-lattice relaxation
};

// A point satisfying sum_{q in tet} theta = pi (mod 2pi) and
// sum_q i(e,q) theta(q) = 0 (mod 2pi). Solves the plain rational system with
// RHS (pi, 2pi) first; otherwise shifts the RHS by the 2pi-lattice via an
// integer Hermite solve. Failure of both is an implementation-bug sentinel.
SasInitResult sas_init(const Triangulation& tri, const IncidenceTable& inc);

struct DimensionCheck {
    long expected = 0; // chi(M) + |T|
    long actual = 0;   // dim TAS
    bool match = false;
};

DimensionCheck dimension_check(const Triangulation& tri, const IncidenceTable& inc);

// Euclidean projection onto span(TAS), with an orthonormalized floating
// point copy of the basis cached at construction. Pure and safe to share.
class TASProjector {
  public:
    TASProjector(const TASBasis& basis);

    std::vector<double> project(const std::vector<double>& g) const;
    int dim() const { return static_cast<int>(ortho_.size()); }
    const std::vector<std::vector<double>>& orthonormal_basis() const {
        return ortho_;
    }

  private:
    std::vector<std::vector<double>> ortho_;
};

// Largest distance of the two congruence families from their target cosets.
struct SasResiduals {
    double tet = 0.0;
    double edge = 0.0;
    double max() const { return tet > edge ? tet : edge; }
};

SasResiduals sas_residuals(const Triangulation& tri, const IncidenceTable& inc,
                           const AnglePoint& theta);

} // namespace spine3
