#ifndef WEILINV_LINALG_HPP
#define WEILINV_LINALG_HPP

#include <cstddef>
#include <vector>

#include "weilinv/rational.hpp"

namespace weilinv {

/// Fraction-free (Bareiss) elimination on an integer matrix; returns the rank.
/// The matrix is taken by value and destroyed.
inline int bareiss_rank(std::vector<std::vector<Integer>> m) {
    if (m.empty() || m[0].empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    Integer prev = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t pivot = row;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[row], m[pivot]);
        for (std::size_t i = row + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                m[i][j] = (m[row][col] * m[i][j] - m[i][col] * m[row][j]) / prev;
            m[i][col] = 0;
        }
        prev = m[row][col];
        ++row;
    }
    return static_cast<int>(row);
}

/// Clears denominators row by row, then runs fraction-free elimination.
inline int exact_rank(const std::vector<std::vector<Rational>>& m) {
    std::vector<std::vector<Integer>> im;
    im.reserve(m.size());
    for (const auto& r : m) {
        Integer l = 1;
        for (const auto& q : r) l = lcm(l, denominator(q));
        std::vector<Integer> ir;
        ir.reserve(r.size());
        for (const auto& q : r) ir.push_back(numerator(q) * (l / denominator(q)));
        im.push_back(std::move(ir));
    }
    return bareiss_rank(std::move(im));
}

/// Bareiss determinant of a square integer matrix.
inline Integer bareiss_determinant(std::vector<std::vector<Integer>> m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != k) {
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : Integer(-m[n - 1][n - 1]);
}

} // namespace weilinv

#endif
