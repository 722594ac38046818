#include "spine3/lattice.hpp"

#include <cassert>

namespace spine3 {

namespace {

// g = gcd(a,b) = p*a + q*b
void xgcd(const Integer& a, const Integer& b, Integer& g, Integer& p, Integer& q) {
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
}

} // namespace

std::optional<ZVec> solve_integer(const ZMat& a, const ZVec& b) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    assert(b.size() == m);

    ZMat h = a;
    // u: n x n unimodular accumulator of the column operations
    ZMat u(n, ZVec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        u[i][i] = 1;

    auto combine_cols = [&](std::size_t r, std::size_t cl, std::size_t cj) {
        // Column ops making h[r][cl] = gcd and h[r][cj] = 0.
        Integer g, p, q;
        xgcd(h[r][cl], h[r][cj], g, p, q);
        Integer s = h[r][cl] / g, t = h[r][cj] / g;
        for (std::size_t i = 0; i < m; ++i) {
            Integer nl = p * h[i][cl] + q * h[i][cj];
            Integer nj = s * h[i][cj] - t * h[i][cl];
            h[i][cl] = nl;
            h[i][cj] = nj;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Integer nl = p * u[i][cl] + q * u[i][cj];
            Integer nj = s * u[i][cj] - t * u[i][cl];
            u[i][cl] = nl;
            u[i][cj] = nj;
        }
    };

    std::vector<long> pivot_col(m, -1);
    std::size_t lead = 0;
    for (std::size_t r = 0; r < m && lead < n; ++r) {
        if (h[r][lead] == 0) {
            std::size_t j = lead + 1;
            while (j < n && h[r][j] == 0)
                ++j;
            if (j < n) {
                for (std::size_t i = 0; i < m; ++i)
                    std::swap(h[i][lead], h[i][j]);
                for (std::size_t i = 0; i < n; ++i)
                    std::swap(u[i][lead], u[i][j]);
            }
        }
        for (std::size_t j = lead + 1; j < n; ++j)
            if (h[r][j] != 0)
                combine_cols(r, lead, j);
        if (h[r][lead] != 0) {
            pivot_col[r] = static_cast<long>(lead);
            ++lead;
        }
    }

    // Forward substitution with divisibility checks.
    ZVec y(n, 0);
    for (std::size_t r = 0; r < m; ++r) {
        Integer acc = b[r];
        for (std::size_t c = 0; c < n; ++c)
            if (h[r][c] != 0 && !(pivot_col[r] >= 0 &&
                                  c == static_cast<std::size_t>(pivot_col[r])))
                acc -= h[r][c] * y[c];
        if (pivot_col[r] >= 0) {
            auto c = static_cast<std::size_t>(pivot_col[r]);
            if (acc % h[r][c] != 0)
                return std::nullopt;
            y[c] = acc / h[r][c];
        } else if (acc != 0) {
            return std::nullopt;
        }
    }

    ZVec x(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (u[i][j] != 0 && y[j] != 0)
                s += u[i][j] * y[j];
        x[i] = s;
    }
    return x;
}

} // namespace spine3
