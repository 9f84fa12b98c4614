#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "planar/rational.hpp"

namespace planar {

using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;  // row-major

inline Q dot(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw error("dot: size mismatch");
    Q s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline QVec vec_sub(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline QVec vec_add(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline QVec vec_scale(const QVec& a, const Q& c) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

inline bool is_zero(const QVec& a) {
    for (const auto& x : a)
        if (sgn(x) != 0) return false;
    return true;
}

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<size_t> rref(QMat& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && sgn(m[sel][c]) == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        Q inv = Q(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Q f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r, QVec(cols, Q(0)));
    return pivots;
}

inline size_t rank(QMat m) { return rref(m).size(); }

inline Q det(QMat m) {
    size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw error("det: not square");
    Q result(1);
    for (size_t c = 0; c < n; ++c) {
        size_t sel = c;
        while (sel < n && sgn(m[sel][c]) == 0) ++sel;
        if (sel == n) return Q(0);
        if (sel != c) {
            std::swap(m[c], m[sel]);
            result = -result;
        }
        result *= m[c][c];
        Q inv = Q(1) / m[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (sgn(m[i][c]) == 0) continue;
            Q f = m[i][c] * inv;
            for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return result;
}

/// Solves A x = b for square A; nullopt when A is singular.
inline std::optional<QVec> solve_linear(QMat a, QVec b) {
    size_t n = a.size();
    if (b.size() != n) throw error("solve_linear: size mismatch");
    for (size_t c = 0; c < n; ++c) {
        size_t sel = c;
        while (sel < n && sgn(a[sel][c]) == 0) ++sel;
        if (sel == n) return std::nullopt;
        std::swap(a[c], a[sel]);
        std::swap(b[c], b[sel]);
        Q inv = Q(1) / a[c][c];
        for (size_t j = c; j < n; ++j) a[c][j] *= inv;
        b[c] *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == c || sgn(a[i][c]) == 0) continue;
            Q f = a[i][c];
            for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    return b;
}

/// Basis of the right kernel of m (vectors x with m x = 0).
inline QMat kernel_basis(QMat m, size_t cols) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    QMat basis;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        QVec v(cols, Q(0));
        v[free_col] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// All k-subsets of {0,..,n-1} in lexicographic order.
inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

/// Determinant of the square submatrix of m picking all rows and `cols`.
inline Q minor_det(const QMat& m, const std::vector<int>& cols) {
    QMat sub(m.size(), QVec(cols.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) sub[i][j] = m[i][static_cast<size_t>(cols[j])];
    return det(sub);
}

/// Scales an integer-or-rational vector to integer entries with content 1 and
/// first nonzero entry positive. Zero vectors pass through unchanged.
inline QVec canonical_direction(QVec v) {
    Z lcm_den(1);
    for (const auto& x : v) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den().get_mpz_t());
    Z gcd_num(0);
    for (auto& x : v) {
        x *= Q(lcm_den);
        x.canonicalize();
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), x.get_num().get_mpz_t());
    }
    if (sgn(Q(gcd_num)) == 0) return v;
    int lead = 0;
    for (const auto& x : v) {
        if (sgn(x) != 0) {
            lead = sgn(x);
            break;
        }
    }
    Q scale = Q(lead < 0 ? -gcd_num : gcd_num);
    for (auto& x : v) {
        x /= scale;
        x.canonicalize();
    }
    return v;
}

}  // namespace planar
