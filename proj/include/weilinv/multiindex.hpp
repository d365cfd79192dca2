#ifndef WEILINV_MULTIINDEX_HPP
#define WEILINV_MULTIINDEX_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "weilinv/rational.hpp"

namespace weilinv {

/// Exponent vector: one non-negative entry per variable / generator.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

/// Graded lexicographic order: lower total degree first, ties broken by
/// ascending lexicographic comparison of the exponent vector.
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return graded_lex_less(a, b);
    }
};

inline MultiIndex index_sum(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

/// alpha! = prod_i alpha_i!
inline Integer index_factorial(const MultiIndex& a) {
    Integer f = 1;
    for (int e : a) f *= factorial(e);
    return f;
}

/// All exponent vectors of the given length with total degree <= bound,
/// in graded-lex order.
inline std::vector<MultiIndex> indices_up_to(int length, int bound) {
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<std::size_t>(length), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == length) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[static_cast<std::size_t>(pos)] = e;
            self(self, pos + 1, remaining - e);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, bound);
    std::sort(out.begin(), out.end(), GradedLex{});
    return out;
}

} // namespace weilinv

#endif
