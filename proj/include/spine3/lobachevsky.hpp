#pragma once

namespace spine3 {

// Lobachevsky function Lambda(t) = -Integral_0^t ln|2 sin s| ds.
// Odd, pi-periodic, Lambda(0) = 0.

// Series route: the Fourier expansion (1/2) sum sin(2nt)/n^2 with its tail
// near the |t| ln|t| singularity summed in closed form, which turns it into
// a zeta-weighted power series converging geometrically on the reduced
// range. Absolute error below 1e-12.
double lobachevsky(double t);

// Quadrature route: dyadic panels refining geometrically into the endpoint
// singularity, 16-point Gauss-Legendre on each panel. Independent of the
// series evaluation; used to cross-validate it.
double lobachevsky_quadrature(double t);

// d/dt Lambda(t) = -ln|2 sin t|. Guarded: clamps the argument of the log
// away from zero so flat angles yield a large finite value, never inf/nan.
double lobachevsky_deriv(double t);

} // namespace spine3
