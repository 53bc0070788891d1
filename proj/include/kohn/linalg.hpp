// linalg.hpp — exact dense linear algebra over the Gaussian rationals.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kohn/gaussian.hpp"

namespace kohn {

using GVec = std::vector<GaussianRational>;
using GMat = std::vector<GVec>;

// In-place reduced row echelon form. Returns pivot columns (ascending);
// zero rows are dropped.
inline std::vector<size_t> rref(GMat& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = rows;
        for (size_t i = r; i < rows; ++i) {
            if (!m[i][c].is_zero()) {
                sel = i;
                break;
            }
        }
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        GaussianRational inv = m[r][c].inverse();
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            GaussianRational f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

// Reduce v against an rref basis; v becomes the residual.
inline void reduce_against(const GMat& rr, const std::vector<size_t>& pivots, GVec& v) {
    for (size_t i = 0; i < rr.size(); ++i) {
        const GaussianRational& f = v[pivots[i]];
        if (f.is_zero()) continue;
        GaussianRational g = f;
        for (size_t j = pivots[i]; j < v.size(); ++j) v[j] -= g * rr[i][j];
    }
}

inline bool is_zero_vec(const GVec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

inline GaussianRational gmat_det(GMat m) {
    size_t n = m.size();
    GaussianRational det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t sel = n;
        for (size_t i = c; i < n; ++i) {
            if (!m[i][c].is_zero()) {
                sel = i;
                break;
            }
        }
        if (sel == n) return GaussianRational(0);
        if (sel != c) {
            std::swap(m[sel], m[c]);
            det = -det;
        }
        det *= m[c][c];
        GaussianRational inv = m[c][c].inverse();
        for (size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            GaussianRational f = m[i][c] * inv;
            for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

inline std::optional<GMat> gmat_inverse(const GMat& a) {
    size_t n = a.size();
    GMat aug(n, GVec(2 * n, GaussianRational(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = GaussianRational(1);
    }
    auto pivots = rref(aug);
    if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
    GMat inv(n, GVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

}  // namespace kohn
