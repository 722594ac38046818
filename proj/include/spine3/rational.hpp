#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace spine3 {

using Rational = mpq_class;
using Integer = mpz_class;

using QVec = std::vector<Rational>;
using IVec = std::vector<long>;

// "p" or "p/q", canonical form.
inline std::string rat_str(const Rational& r) {
    Rational c(r);
    c.canonicalize();
    if (c.get_den() == 1)
        return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline double rat_double(const Rational& r) { return r.get_d(); }

inline QVec qvec_zero(std::size_t n) { return QVec(n, Rational(0)); }

inline Rational dot(const QVec& a, const QVec& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline bool is_zero_vec(const QVec& a) {
    for (const auto& x : a)
        if (x != 0)
            return false;
    return true;
}

} // namespace spine3
