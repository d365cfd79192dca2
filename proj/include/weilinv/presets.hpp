#ifndef WEILINV_PRESETS_HPP
#define WEILINV_PRESETS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "weilinv/expr.hpp"
#include "weilinv/groups.hpp"
#include "weilinv/jets.hpp"

namespace weilinv {

// -- joint invariants --------------------------------------------------------

/// Squared euclidean distance of points j1, j2 in R^n.
inline ExprPtr square_distance(int n, int j1, int j2) {
    ExprPtr acc = ex::c(0);
    for (int i = 1; i <= n; ++i)
        acc = ex::add(acc, ex::ipow(ex::sub(ex::var(point_var_name(i, j2)),
                                            ex::var(point_var_name(i, j1))),
                                    2));
    return acc;
}

/// det of the n x n matrix of edge vectors p_{j+1} - p_1 (columns), row-major.
inline ExprPtr oriented_volume(int n) {
    std::vector<ExprPtr> entries;
    for (int i = 1; i <= n; ++i)
        for (int j = 2; j <= n + 1; ++j)
            entries.push_back(ex::sub(ex::var(point_var_name(i, j)), ex::var(point_var_name(i, 1))));
    return ex::det(n, std::move(entries));
}

/// (x3 - x1)/(x2 - x1) on the line.
inline ExprPtr affine_ratio() {
    return ex::div(ex::sub(ex::var("x1_p3"), ex::var("x1_p1")),
                   ex::sub(ex::var("x1_p2"), ex::var("x1_p1")));
}

/// Cross ratio ((x1-x3)(x2-x4))/((x1-x2)(x3-x4)).
inline ExprPtr anharmonic_ratio() {
    auto x = [](int j) { return ex::var(point_var_name(1, j)); };
    return ex::div(ex::mul(ex::sub(x(1), x(3)), ex::sub(x(2), x(4))),
                   ex::mul(ex::sub(x(1), x(2)), ex::sub(x(3), x(4))));
}

// -- differential invariants -------------------------------------------------

/// sum_i (x_i')^2, the quadratic form of the arc-length element.
inline ExprPtr sum_squared_derivatives(int n) {
    ExprPtr acc = ex::c(0);
    for (int i = 1; i <= n; ++i)
        acc = ex::add(acc, ex::ipow(ex::var(jet_var_name(i, MultiIndex{1})), 2));
    return acc;
}

/// x1'*x2'' - x1''*x2', the curvature numerator of a plane curve.
inline ExprPtr curvature_numerator() {
    auto d = [](int i, int o) { return ex::var(jet_var_name(i, MultiIndex{o})); };
    return ex::sub(ex::mul(d(1, 1), d(2, 2)), ex::mul(d(1, 2), d(2, 1)));
}

/// Wronskian det[x_i^{(j)}], i = 1..n (rows), j = 1..n (columns).
inline ExprPtr wronskian(int n) {
    std::vector<ExprPtr> entries;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) entries.push_back(ex::var(jet_var_name(i, MultiIndex{j})));
    return ex::det(n, std::move(entries));
}

/// x''/x'.
inline ExprPtr log_derivative() {
    return ex::div(ex::var("x1_d2"), ex::var("x1_d1"));
}

/// (3 x''^2 - 2 x' x''')/x'^2, the Schwarzian up to an affine normalization.
inline ExprPtr schwarzian() {
    auto d = [](int o) { return ex::var(jet_var_name(1, MultiIndex{o})); };
    return ex::div(ex::sub(ex::mul(ex::c(3), ex::ipow(d(2), 2)),
                           ex::mul(ex::c(2), ex::mul(d(1), d(3)))),
                   ex::ipow(d(1), 2));
}

// -- derive presets ----------------------------------------------------------

struct DerivePreset {
    std::string name;
    ExprPtr numerator;           // the joint invariant (or quotient numerator)
    ExprPtr denominator;         // set when the preset runs the quotient path
    int points = 0;              // k
    int dim = 0;                 // n
    int jet_order = 0;           // r
    std::vector<Rational> twist; // scaling constants, length k
    bool quotient = false;
};

inline std::vector<DerivePreset> derive_presets() {
    std::vector<DerivePreset> ps;
    ps.push_back({"endo-metric", square_distance(2, 1, 2), nullptr, 2, 2, 2,
                  {Rational(0), Rational(1)}, false});
    ps.push_back({"area", oriented_volume(2), nullptr, 3, 2, 3,
                  {Rational(0), Rational(1), Rational(2)}, false});
    ps.push_back({"volume-n3", oriented_volume(3), nullptr, 4, 3, 4,
                  {Rational(0), Rational(1), Rational(2), Rational(3)}, false});
    {
        auto r = affine_ratio();
        ps.push_back({"affine-ratio", r->args[0], r->args[1], 3, 1, 2,
                      {Rational(0), Rational(1), Rational(2)}, true});
    }
    {
        auto r = anharmonic_ratio();
        ps.push_back({"anharmonic", r->args[0], r->args[1], 4, 1, 4,
                      {Rational(0), Rational(1), Rational(2), Rational(3)}, true});
    }
    return ps;
}

inline std::optional<DerivePreset> find_derive_preset(const std::string& name) {
    for (auto& p : derive_presets())
        if (p.name == name) return p;
    return std::nullopt;
}

// -- identity presets --------------------------------------------------------

/// 16 A^2 = 2a^2b^2 + 2b^2c^2 + 2c^2a^2 - a^4 - b^4 - c^4 in the squared
/// side lengths; lhs is A computed that way, rhs is |det2|/2 of the edge
/// matrix.
inline std::pair<ExprPtr, ExprPtr> heron_identity() {
    ExprPtr qa = square_distance(2, 1, 2);
    ExprPtr qb = square_distance(2, 2, 3);
    ExprPtr qc = square_distance(2, 1, 3);
    ExprPtr sixteen_a2 =
        ex::sub(ex::mul(ex::c(2), ex::add(ex::add(ex::mul(qa, qb), ex::mul(qb, qc)),
                                          ex::mul(qc, qa))),
                ex::add(ex::add(ex::ipow(qa, 2), ex::ipow(qb, 2)), ex::ipow(qc, 2)));
    ExprPtr lhs = ex::sqrt(ex::div(sixteen_a2, ex::c(16)));
    ExprPtr rhs = ex::div(ex::sqrt(ex::ipow(oriented_volume(2), 2)), ex::c(2));
    return {lhs, rhs};
}

/// 288 V^2 = det of the 5x5 distance matrix bordered by ones; the det is
/// expanded along the first row (0,1,1,1,1) into det4 minors so the builtin
/// determinants suffice. rhs is |det3|/6 of the edge matrix.
inline std::pair<ExprPtr, ExprPtr> cayley_menger_identity() {
    // b[i][j]: bordered matrix entries, i,j = 0..4
    std::vector<std::vector<ExprPtr>> b(5, std::vector<ExprPtr>(5));
    b[0][0] = ex::c(0);
    for (int j = 1; j <= 4; ++j) {
        b[0][static_cast<std::size_t>(j)] = ex::c(1);
        b[static_cast<std::size_t>(j)][0] = ex::c(1);
    }
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                i == j ? ex::c(0) : square_distance(3, i, j);
    ExprPtr det = ex::c(0);
    for (int j = 1; j <= 4; ++j) {
        std::vector<ExprPtr> minor;
        for (int r = 1; r <= 4; ++r)
            for (int c = 0; c <= 4; ++c)
                if (c != j)
                    minor.push_back(b[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        ExprPtr m4 = ex::det(4, std::move(minor));
        det = (j % 2 == 1) ? ex::sub(det, m4) : ex::add(det, m4);
    }
    ExprPtr lhs = ex::sqrt(ex::div(det, ex::c(288)));
    ExprPtr rhs = ex::div(ex::sqrt(ex::ipow(oriented_volume(3), 2)), ex::c(6));
    return {lhs, rhs};
}

/// k random points of R^n in [-5, 5], rejected unless the edge-vector det
/// clears 1e-2 of the configuration's scale: near-degenerate simplices lose
/// too many digits to cancellation in the bordered-determinant expansion to
/// compare at 1e-9 relative tolerance.
inline DomainSampler general_position_sampler(int n, int k) {
    return [n, k](SplitRng& rng) -> std::optional<std::map<std::string, double>> {
        std::map<std::string, double> pt;
        double scale = 1.0;
        for (int j = 1; j <= k; ++j)
            for (int i = 1; i <= n; ++i) {
                double v = rng.next_double(-5.0, 5.0);
                scale = std::max(scale, std::fabs(v));
                pt.emplace(point_var_name(i, j), v);
            }
        // edge-vector determinant (k = n + 1 points expected)
        double det = 0.0;
        if (k == n + 1) {
            Float64Ring ring;
            det = evaluate(ring, oriented_volume(n), pt);
        } else {
            return pt; // no general-position requirement
        }
        double threshold = 1e-2 * std::pow(scale, n);
        if (std::fabs(det) < threshold) return std::nullopt;
        return pt;
    };
}

struct IdentityPreset {
    std::string name;
    ExprPtr lhs;
    ExprPtr rhs;
    DomainSampler sampler;
};

inline std::vector<IdentityPreset> identity_presets() {
    std::vector<IdentityPreset> ps;
    {
        auto [l, r] = heron_identity();
        ps.push_back({"heron", l, r, general_position_sampler(2, 3)});
    }
    {
        auto [l, r] = cayley_menger_identity();
        ps.push_back({"cayley-menger", l, r, general_position_sampler(3, 4)});
    }
    return ps;
}

inline std::optional<IdentityPreset> find_identity_preset(const std::string& name) {
    for (auto& p : identity_presets())
        if (p.name == name) return p;
    return std::nullopt;
}

} // namespace weilinv

#endif
