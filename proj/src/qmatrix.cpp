#include "spine3/qmatrix.hpp"

#include <cassert>

namespace spine3 {

QMatrix QMatrix::from_rows(const std::vector<QVec>& rows) {
    if (rows.empty())
        return QMatrix();
    QMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        assert(rows[i].size() == m.cols_);
        for (std::size_t j = 0; j < m.cols_; ++j)
            m.at(i, j) = rows[i][j];
    }
    return m;
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

QVec QMatrix::row(std::size_t i) const {
    QVec v(cols_);
    for (std::size_t j = 0; j < cols_; ++j)
        v[j] = at(i, j);
    return v;
}

QVec QMatrix::col(std::size_t j) const {
    QVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = at(i, j);
    return v;
}

void QMatrix::set_row(std::size_t i, const QVec& v) {
    assert(v.size() == cols_);
    for (std::size_t j = 0; j < cols_; ++j)
        at(i, j) = v[j];
}

QMatrix QMatrix::transposed() const {
    QMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(j, i) = at(i, j);
    return m;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    assert(cols_ == o.rows_);
    QMatrix m(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = at(i, k);
            if (a == 0)
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                m.at(i, j) += a * o.at(k, j);
        }
    return m;
}

QVec QMatrix::apply(const QVec& x) const {
    assert(x.size() == cols_);
    QVec y(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0)
                y[i] += at(i, j) * x[j];
    return y;
}

bool QMatrix::is_zero() const {
    for (const auto& x : data_)
        if (x != 0)
            return false;
    return true;
}

QMatrix QMatrix::vstack(const QMatrix& o) const {
    if (rows_ == 0)
        return o;
    assert(cols_ == o.cols_ || o.rows_ == 0);
    QMatrix m(rows_ + o.rows_, cols_);
    m.data_ = data_;
    m.data_.insert(m.data_.end(), o.data_.begin(), o.data_.end());
    return m;
}

std::vector<std::size_t> QMatrix::rref() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t p = r;
        while (p < rows_ && at(p, c) == 0)
            ++p;
        if (p == rows_)
            continue;
        if (p != r)
            for (std::size_t j = 0; j < cols_; ++j)
                std::swap(at(p, j), at(r, j));
        Rational inv = 1 / at(r, c);
        for (std::size_t j = c; j < cols_; ++j)
            at(r, j) *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || at(i, c) == 0)
                continue;
            Rational f = at(i, c);
            for (std::size_t j = c; j < cols_; ++j)
                at(i, j) -= f * at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t QMatrix::rank() const {
    QMatrix m(*this);
    return m.rref().size();
}

std::vector<QVec> QMatrix::nullspace() const {
    QMatrix m(*this);
    auto pivots = m.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots)
        is_pivot[c] = true;
    std::vector<QVec> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f])
            continue;
        QVec v(cols_, Rational(0));
        v[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[pivots[k]] = -m.at(k, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<QVec> QMatrix::rowspace_basis() const {
    QMatrix m(*this);
    auto pivots = m.rref();
    std::vector<QVec> basis;
    for (std::size_t i = 0; i < pivots.size(); ++i)
        basis.push_back(m.row(i));
    return basis;
}

std::optional<QVec> QMatrix::solve(const QVec& b) const {
    assert(b.size() == rows_);
    QMatrix aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = b[i];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_)
        return std::nullopt; // pivot in the RHS column
    QVec x(cols_, Rational(0));
    for (std::size_t k = 0; k < pivots.size(); ++k)
        x[pivots[k]] = aug.at(k, cols_);
    return x;
}

bool QMatrix::row_space_contains(const QVec& v) const {
    QMatrix ext = vstack(QMatrix::from_rows({v}));
    return ext.rank() == rank();
}

std::size_t span_rank(const std::vector<QVec>& vs) {
    if (vs.empty())
        return 0;
    return QMatrix::from_rows(vs).rank();
}

bool span_contains(const std::vector<QVec>& vs, const QVec& v) {
    if (is_zero_vec(v))
        return true;
    if (vs.empty())
        return false;
    return QMatrix::from_rows(vs).row_space_contains(v);
}

bool span_contains_all(const std::vector<QVec>& vs, const std::vector<QVec>& sub) {
    for (const auto& v : sub)
        if (!span_contains(vs, v))
            return false;
    return true;
}

} // namespace spine3
