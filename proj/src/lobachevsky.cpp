#include "spine3/lobachevsky.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace spine3 {

namespace {

constexpr double kPi = std::numbers::pi;

// zeta(2k), k = 1..27; beyond that zeta(2k) = 1 to double precision.
constexpr std::array<double, 27> kZetaEven = {
    1.64493406684822643647,  1.08232323371113819152,  1.01734306198444913971,
    1.00407735619794433938,  1.00099457512781808534,  1.0002460865533080483,
    1.00006124813505870483,  1.00001528225940865187,  1.00000381729326499984,
    1.0000009539620338728,   1.00000023845050272773,  1.00000005960818905126,
    1.00000001490155482837,  1.00000000372533402479,  1.00000000093132743242,
    1.00000000023283118337,  1.00000000005820772088,  1.00000000001455192189,
    1.00000000000363797955,  1.00000000000090949478,  1.00000000000022737368,
    1.00000000000005684342,  1.00000000000001421085,  1.00000000000000355271,
    1.00000000000000088818,  1.00000000000000022204,  1.00000000000000005551,
};

// Reduce to [-pi/2, pi/2] using period pi.
double reduce(double t) { return std::remainder(t, kPi); }

struct GLNode {
    double x, w;
};
constexpr std::array<GLNode, 16> kGauss16 = {{
    {-0.989400934991649932596, 0.0271524594117540948518},
    {-0.944575023073232576078, 0.0622535239386478928628},
    {-0.86563120238783174388, 0.0951585116824927848099},
    {-0.755404408355003033895, 0.124628971255533872052},
    {-0.617876244402643748447, 0.149595988816576732082},
    {-0.458016777657227386342, 0.169156519395002538189},
    {-0.28160355077925891323, 0.182603415044923588867},
    {-0.0950125098376374401853, 0.189450610455068496285},
    {0.0950125098376374401853, 0.189450610455068496285},
    {0.28160355077925891323, 0.182603415044923588867},
    {0.458016777657227386342, 0.169156519395002538189},
    {0.617876244402643748447, 0.149595988816576732082},
    {0.755404408355003033895, 0.124628971255533872052},
    {0.86563120238783174388, 0.0951585116824927848099},
    {0.944575023073232576078, 0.0622535239386478928628},
    {0.989400934991649932596, 0.0271524594117540948518},
}};

double gauss16(double a, double b) {
    // integral of ln(2 sin s) over [a, b], integrand smooth inside
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (const auto& n : kGauss16)
        s += n.w * std::log(2.0 * std::sin(mid + half * n.x));
    return s * half;
}

} // namespace

double lobachevsky(double t) {
    double x = reduce(t);
    if (x == 0.0)
        return 0.0;
    // Lambda(x) = x - x ln|2x| + x * sum_k zeta(2k)/(k(2k+1)) (x/pi)^{2k}
    double r = (x / kPi) * (x / kPi);
    double pw = r, s = 0.0;
    for (std::size_t k = 1; k <= 40; ++k) {
        double z = k <= kZetaEven.size() ? kZetaEven[k - 1] : 1.0;
        double term = z / (static_cast<double>(k) * (2.0 * k + 1.0)) * pw;
        s += term;
        pw *= r;
        if (term < 1e-18)
            break;
    }
    return x - x * std::log(std::abs(2.0 * x)) + x * s;
}

double lobachevsky_quadrature(double t) {
    double x = reduce(t);
    if (x == 0.0)
        return 0.0;
    double sign = x < 0 ? -1.0 : 1.0;
    x = std::abs(x);
    // Panels [x/2^{j+1}, x/2^j] refine geometrically toward the singular
    // endpoint; the remaining sliver below x/2^48 contributes O(1e-13).
    double acc = 0.0;
    double hi = x;
    for (int j = 0; j < 48; ++j) {
        double lo = 0.5 * hi;
        acc += gauss16(lo, hi);
        hi = lo;
    }
    return -sign * acc;
}

double lobachevsky_deriv(double t) {
    double s = std::abs(2.0 * std::sin(t));
    if (s < 1e-300)
        s = 1e-300;
    return -std::log(s);
}

} // namespace spine3
