#pragma once

#include <vector>

#include "hypercal/endomorphism.hpp"

namespace hypercal {

// Exact dense linear algebra over Q(i). Everything here is Gaussian
// elimination at desk scale; no pivoting strategy beyond "first nonzero".

inline int rank(Matrix m) {
    int r = 0;
    for (int col = 0; col < m.cols && r < m.rows; ++col) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (!m(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m(r, j), m(piv, j));
        GaussianRational inv = GaussianRational(1) / m(r, col);
        for (int j = col; j < m.cols; ++j) m(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m(i, col).is_zero()) continue;
            GaussianRational f = m(i, col);
            for (int j = col; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

// Basis of the right kernel, one column vector per basis element.
inline std::vector<std::vector<GaussianRational>> kernel_basis(Matrix m) {
    int n = m.cols;
    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < n && r < m.rows; ++col) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (!m(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < n; ++j) std::swap(m(r, j), m(piv, j));
        GaussianRational inv = GaussianRational(1) / m(r, col);
        for (int j = col; j < n; ++j) m(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m(i, col).is_zero()) continue;
            GaussianRational f = m(i, col);
            for (int j = col; j < n; ++j) m(i, j) -= f * m(r, j);
        }
        pivot_col.push_back(col);
        ++r;
    }
    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<GaussianRational>> basis;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<GaussianRational> v(n, GaussianRational(0));
        v[free] = GaussianRational(1);
        for (int k = 0; k < static_cast<int>(pivot_col.size()); ++k)
            v[pivot_col[k]] = -m(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline GaussianRational determinant(Matrix m) {
    if (m.rows != m.cols) throw DomainError("determinant of non-square matrix");
    GaussianRational det(1);
    for (int col = 0; col < m.cols; ++col) {
        int piv = -1;
        for (int i = col; i < m.rows; ++i)
            if (!m(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) return GaussianRational(0);
        if (piv != col) {
            for (int j = 0; j < m.cols; ++j) std::swap(m(col, j), m(piv, j));
            det = -det;
        }
        det *= m(col, col);
        GaussianRational inv = GaussianRational(1) / m(col, col);
        for (int i = col + 1; i < m.rows; ++i) {
            if (m(i, col).is_zero()) continue;
            GaussianRational f = m(i, col) * inv;
            for (int j = col; j < m.cols; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

inline Matrix inverse(const Matrix& m) {
    if (m.rows != m.cols) throw DomainError("inverse of non-square matrix");
    int n = m.rows;
    Matrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = GaussianRational(1);
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (!aug(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) throw DomainError("matrix not invertible");
        if (piv != col)
            for (int j = 0; j < 2 * n; ++j) std::swap(aug(col, j), aug(piv, j));
        GaussianRational inv = GaussianRational(1) / aug(col, col);
        for (int j = 0; j < 2 * n; ++j) aug(col, j) *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == col || aug(i, col).is_zero()) continue;
            GaussianRational f = aug(i, col);
            for (int j = 0; j < 2 * n; ++j) aug(i, j) -= f * aug(col, j);
        }
    }
    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

// Sylvester test: all leading principal minors strictly positive. Callers
// must pass real matrices.
inline bool leading_minors_positive(const Matrix& m) {
    if (m.rows != m.cols) throw DomainError("minor test on non-square matrix");
    for (int k = 1; k <= m.rows; ++k) {
        Matrix block(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) block(i, j) = m(i, j);
        GaussianRational d = determinant(block);
        if (!d.is_real() || d.re.sign() <= 0) return false;
    }
    return true;
}

} // namespace hypercal
