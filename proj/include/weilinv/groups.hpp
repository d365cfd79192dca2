#ifndef WEILINV_GROUPS_HPP
#define WEILINV_GROUPS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weilinv/errors.hpp"
#include "weilinv/expr.hpp"
#include "weilinv/jets.hpp"
#include "weilinv/linalg.hpp"
#include "weilinv/random.hpp"
#include "weilinv/weil.hpp"

namespace weilinv {

/// A finite-dimensional group action on R^n given by coordinate expressions
/// in the point variables x<i>_p1 and the parameter names. Each infinitesimal
/// generator additionally records which parameter slot realizes it: identity
/// + dir*delta in that slot reproduces the generator to first order.
struct GroupAction {
    std::string name;
    int dim_M = 0;
    std::vector<std::string> params;
    std::vector<Rational> identity;
    std::vector<ExprPtr> action;                  // dim_M expressions
    std::vector<std::vector<ExprPtr>> generators; // dim_G fields, dim_M exprs each
    std::vector<std::pair<int, Rational>> generator_dirs; // (param slot, direction)
    std::function<std::vector<Rational>(SplitRng&)> sampler;

    int dim_G() const { return static_cast<int>(generators.size()); }
};

// -- built-in actions -------------------------------------------------------

/// Euclidean motions of R^n: a product of Givens rotations followed by a
/// translation. Each rotation angle is parametrized rationally on the circle
/// (cos, sin) = ((4-u^2)/(4+u^2), 4u/(4+u^2)), whose derivative at u = 0 is
/// exactly (0, 1), so the u-directions realize the rotation generators and
/// every sampled group element is an exact rational rotation.
inline GroupAction mov(int n) {
    if (n < 1) throw UnsupportedOperation("mov(n) needs n >= 1");
    GroupAction g;
    g.name  = "mov:" + std::to_string(n);
    g.dim_M = n;
    for (int i = 1; i <= n; ++i) g.params.push_back("t" + std::to_string(i));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            g.params.push_back("u" + std::to_string(i) + std::to_string(j));
            pairs.emplace_back(i, j);
        }
    g.identity.assign(g.params.size(), Rational(0));

    std::vector<ExprPtr> coords;
    for (int i = 1; i <= n; ++i) coords.push_back(ex::var(point_var_name(i, 1)));
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [i, j] = pairs[p];
        ExprPtr u    = ex::var(g.params[static_cast<std::size_t>(n) + p]);
        ExprPtr u2   = ex::ipow(u, 2);
        ExprPtr denom = ex::add(ex::c(4), u2);
        ExprPtr cosu = ex::div(ex::sub(ex::c(4), u2), denom);
        ExprPtr sinu = ex::div(ex::mul(ex::c(4), u), denom);
        ExprPtr xi = coords[static_cast<std::size_t>(i - 1)];
        ExprPtr xj = coords[static_cast<std::size_t>(j - 1)];
        coords[static_cast<std::size_t>(i - 1)] = ex::sub(ex::mul(cosu, xi), ex::mul(sinu, xj));
        coords[static_cast<std::size_t>(j - 1)] = ex::add(ex::mul(sinu, xi), ex::mul(cosu, xj));
    }
    for (int i = 1; i <= n; ++i)
        g.action.push_back(ex::add(coords[static_cast<std::size_t>(i - 1)],
                                   ex::var("t" + std::to_string(i))));

    // translations d/dx_i, then rotations x_i d/dx_j - x_j d/dx_i
    for (int i = 1; i <= n; ++i) {
        std::vector<ExprPtr> field(static_cast<std::size_t>(n), ex::c(0));
        field[static_cast<std::size_t>(i - 1)] = ex::c(1);
        g.generators.push_back(std::move(field));
        g.generator_dirs.emplace_back(i - 1, Rational(1));
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [i, j] = pairs[p];
        std::vector<ExprPtr> field(static_cast<std::size_t>(n), ex::c(0));
        field[static_cast<std::size_t>(i - 1)] = ex::neg(ex::var(point_var_name(j, 1)));
        field[static_cast<std::size_t>(j - 1)] = ex::var(point_var_name(i, 1));
        g.generators.push_back(std::move(field));
        g.generator_dirs.emplace_back(n + static_cast<int>(p), Rational(1));
    }

    g.sampler = [np = g.params.size()](SplitRng& rng) {
        std::vector<Rational> v;
        v.reserve(np);
        for (std::size_t i = 0; i < np; ++i) v.push_back(rng.next_rational(8, 4));
        return v;
    };
    return g;
}

/// Affine line: x -> lam*x + mu, lam != 0.
inline GroupAction aff1() {
    GroupAction g;
    g.name     = "aff1";
    g.dim_M    = 1;
    g.params   = {"lam", "mu"};
    g.identity = {Rational(1), Rational(0)};
    g.action   = {ex::add(ex::mul(ex::var("lam"), ex::var("x1_p1")), ex::var("mu"))};
    g.generators = {{ex::c(1)}, {ex::var("x1_p1")}};
    g.generator_dirs = {{1, Rational(1)}, {0, Rational(1)}};
    g.sampler = [](SplitRng& rng) {
        return std::vector<Rational>{rng.next_nonzero_rational(8, 4), rng.next_rational(8, 4)};
    };
    return g;
}

/// Moebius action of PGL(2): x -> (a*x + b)/(c*x + d), ad - bc != 0.
inline GroupAction pgl2() {
    GroupAction g;
    g.name     = "pgl2";
    g.dim_M    = 1;
    g.params   = {"a", "b", "c", "d"};
    g.identity = {Rational(1), Rational(0), Rational(0), Rational(1)};
    ExprPtr x  = ex::var("x1_p1");
    g.action   = {ex::div(ex::add(ex::mul(ex::var("a"), x), ex::var("b")),
                          ex::add(ex::mul(ex::var("c"), x), ex::var("d")))};
    g.generators = {{ex::c(1)}, {x}, {ex::ipow(x, 2)}};
    // x/( -delta*x + 1 ) = x + delta*x^2 + O(delta^2), hence the -1 on c
    g.generator_dirs = {{1, Rational(1)}, {0, Rational(1)}, {2, Rational(-1)}};
    g.sampler = [](SplitRng& rng) {
        for (;;) {
            Rational a = rng.next_rational(8, 4), b = rng.next_rational(8, 4);
            Rational c = rng.next_rational(8, 4), d = rng.next_rational(8, 4);
            if (a * d - b * c != 0) return std::vector<Rational>{a, b, c, d};
        }
    };
    return g;
}

// -- prolonged action -------------------------------------------------------

/// Image of a near-point under one group element: evaluate the action's
/// coordinate expressions over the Weil algebra. Parameters may themselves be
/// algebra elements (used for the dual-number generator check).
template <RingStructure R>
NearPoint<R> prolonged_action(const std::map<std::string, WeilElement<typename R::Elem>>& param_bind,
                              const NearPoint<R>& p, const GroupAction& act) {
    if (p.n != act.dim_M) throw SpecMismatch("near-point dimension does not match the action");
    std::map<std::string, WeilElement<typename R::Elem>> bind = param_bind;
    for (int i = 1; i <= p.n; ++i)
        bind.emplace(point_var_name(i, 1), p.series[static_cast<std::size_t>(i - 1)]);
    NearPoint<R> out{p.n, p.algebra, {}};
    for (const auto& e : act.action) {
        try {
            out.series.push_back(evaluate(p.algebra, e, bind));
        } catch (const NotAUnit& err) {
            throw BasePointSingular(std::string("action undefined at the base point (") +
                                    err.what() + ")");
        }
    }
    return out;
}

template <RingStructure R>
NearPoint<R> prolonged_action(const std::vector<Rational>& params, const NearPoint<R>& p,
                              const GroupAction& act) {
    if (params.size() != act.params.size())
        throw SpecMismatch("wrong number of group parameters");
    std::map<std::string, WeilElement<typename R::Elem>> bind;
    for (std::size_t s = 0; s < params.size(); ++s)
        bind.emplace(act.params[s], p.algebra.from_rational(params[s]));
    return prolonged_action(bind, p, act);
}

// -- invariance checking ----------------------------------------------------

struct InvarianceReport {
    bool invariant = false;
    int samples = 0;
    int rejected = 0;
    double max_deviation = 0.0;       // float path; exact path reports 0 or 1-as-flag
    bool exact = true;                // whether the run used an exact ring
    std::string worst_deviation_text; // rendered deviation of the worst sample
    std::optional<std::string> witness;
};

namespace detail {

template <RingStructure R>
std::map<std::string, typename R::Elem> random_jet_coords(const R& ring, int n, int r,
                                                          SplitRng& rng) {
    std::map<std::string, typename R::Elem> coords;
    for (int i = 1; i <= n; ++i)
        for (int o = 0; o <= r; ++o)
            coords.emplace(jet_var_name(i, MultiIndex{o}),
                           ring.from_rational(rng.next_rational(8, 4)));
    return coords;
}

inline std::string describe_sample(const std::map<std::string, Rational>& coords,
                                   const std::vector<std::string>& param_names,
                                   const std::vector<Rational>& params) {
    std::string s = "jet{";
    bool first = true;
    for (const auto& [k, v] : coords) {
        if (!first) s += ", ";
        first = false;
        s += k + "=" + to_string(v);
    }
    s += "} params{";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) s += ", ";
        s += param_names[i] + "=" + to_string(params[i]);
    }
    return s + "}";
}

} // namespace detail

/// Samples random jets and group elements and compares the candidate on the
/// jet against the candidate on the prolonged jet. Exact rings demand literal
/// equality; the float ring tracks the max relative deviation against tol.
/// Sample i draws all its randomness from (seed, i), so reports are
/// deterministic and order-independent; candidates or actions undefined at a
/// sample (vanishing denominators) cause a resample, capped at 100x samples.
template <RingStructure R>
InvarianceReport check_invariant(const R& ring, const ExprPtr& cand, const GroupAction& act,
                                 int r, int samples, double tol, std::uint64_t seed) {
    InvarianceReport rep;
    rep.samples = samples;
    rep.exact   = !std::is_same_v<R, Float64Ring>;
    rep.invariant = true;
    int rejections = 0;
    const int rejection_cap = 100 * samples;
    for (int idx = 0; idx < samples; ++idx) {
        SplitRng rng(seed, static_cast<std::uint64_t>(idx));
        for (;;) {
            if (rejections > rejection_cap)
                throw SamplerExhausted("more than " + std::to_string(rejection_cap) +
                                       " rejected samples");
            auto coords = detail::random_jet_coords(ring, act.dim_M, r, rng);
            auto params = act.sampler(rng);
            try {
                auto jet   = make_jet(ring, act.dim_M, 1, r, coords);
                auto image = prolonged_action(params, jet, act);
                auto v1 = evaluate(ring, cand, coords);
                auto v2 = evaluate(ring, cand, jet_coordinates(image));
                if constexpr (std::is_same_v<R, Float64Ring>) {
                    double scale = std::max({1.0, std::fabs(v1), std::fabs(v2)});
                    double dev   = std::fabs(v1 - v2) / scale;
                    if (dev > rep.max_deviation) {
                        rep.max_deviation = dev;
                        rep.worst_deviation_text = ring.to_string(dev);
                        rep.witness = "sample " + std::to_string(idx);
                    }
                } else {
                    auto diff = ring.sub(v1, v2);
                    if (!ring.is_zero(diff)) {
                        rep.invariant = false;
                        rep.max_deviation = 1.0;
                        rep.worst_deviation_text = ring.to_string(diff);
                        if (!rep.witness) {
                            std::map<std::string, Rational> shown;
                            if constexpr (std::is_same_v<R, RationalRing>)
                                shown = coords;
                            rep.witness = detail::describe_sample(shown, act.params, params);
                        }
                    }
                }
            } catch (const BasePointSingular&) {
                ++rejections;
                continue;
            } catch (const NotAUnit&) {
                ++rejections;
                continue;
            } catch (const DivisionByZero&) {
                ++rejections;
                continue;
            }
            break;
        }
    }
    rep.rejected = rejections;
    if constexpr (std::is_same_v<R, Float64Ring>) {
        rep.invariant = rep.max_deviation <= tol;
        if (rep.invariant) rep.witness.reset();
    } else {
        if (rep.invariant) rep.worst_deviation_text = "0";
        (void)tol;
    }
    return rep;
}

// -- infinitesimal invariance -----------------------------------------------

/// Lie-derivative test along one generator: run the action with the
/// generator's parameter perturbed by a dual number delta (in the tensor of
/// the jet algebra with R[delta]/(delta^2)), then return the delta-component
/// of the candidate on the perturbed jet. Zero iff the candidate is
/// infinitesimally invariant along that generator at that jet.
inline Rational infinitesimal_invariance(const ExprPtr& cand, const GroupAction& act,
                                         int gen_index, int r,
                                         const NearPoint<RationalRing>& jet) {
    if (gen_index < 0 || gen_index >= act.dim_G())
        throw SpecMismatch("generator index out of range");
    if (r != jet.order()) throw SpecMismatch("jet order does not match the requested order");
    if (act.generator_dirs.size() != act.generators.size())
        throw UnsupportedOperation("action has no one-parameter directions for its generators");
    RationalRing ring;
    WeilAlgebra<RationalRing> dual(ring, 1, 1);
    auto T = tensor_product(jet.algebra, dual);

    NearPoint<RationalRing> lifted{jet.n, T.algebra, {}};
    for (const auto& s : jet.series) lifted.series.push_back(T.embed_left(s));

    auto [slot, dir] = act.generator_dirs[static_cast<std::size_t>(gen_index)];
    std::map<std::string, WeilElement<Rational>> param_bind;
    for (std::size_t s = 0; s < act.params.size(); ++s) {
        auto val = T.algebra.from_rational(act.identity[s]);
        if (static_cast<int>(s) == slot) {
            auto delta = T.embed_right(dual.generator(0));
            val = T.algebra.add(val, T.algebra.scale(dir, delta));
        }
        param_bind.emplace(act.params[s], val);
    }
    auto image = prolonged_action(param_bind, lifted, act);

    // jet coordinates of the image are dual numbers: o! * (coefficient of
    // eps^o delta^0 + coefficient of eps^o delta^1 * delta)
    std::map<std::string, WeilElement<Rational>> bind;
    for (int i = 1; i <= jet.n; ++i)
        for (int o = 0; o <= jet.order(); ++o) {
            Rational f(factorial(o));
            Rational c0 = f * T.algebra.coefficient(image.series[static_cast<std::size_t>(i - 1)],
                                                    MultiIndex{o, 0});
            Rational c1 = f * T.algebra.coefficient(image.series[static_cast<std::size_t>(i - 1)],
                                                    MultiIndex{o, 1});
            bind.emplace(jet_var_name(i, MultiIndex{o}),
                         dual.add(dual.constant(c0), dual.monomial(MultiIndex{1}, c1)));
        }
    auto value = evaluate(dual, cand, bind);
    return dual.coefficient(value, MultiIndex{1});
}

// -- rank analysis ----------------------------------------------------------

struct RankReport {
    struct PerK {
        int k = 0;
        int rank = 0;
        int invariant_count = 0;
        double attain_fraction = 1.0; // share of samples attaining the max rank
    };
    std::string action_name;
    int dim_G = 0;
    int dim_M = 0;
    int samples = 0;
    std::vector<PerK> per_k;
    std::optional<int> k0_estimate; // smallest k with rank == dim_G
    std::pair<int, int> bounds;     // ceil(dim_G/dim_M) <= k0 <= dim_G
    std::vector<std::string> notes;
};

/// Generic rank of the generator distribution on k-tuples: the dim_G x (k*n)
/// matrix of generator values at random rational tuples, rank by fraction-free
/// elimination, maximized over samples.
inline RankReport rank_analysis(const GroupAction& act, int k_max, int samples,
                                std::uint64_t seed) {
    if (k_max < 1) throw UnsupportedOperation("rank analysis needs k_max >= 1");
    RationalRing ring;
    RankReport rep;
    rep.action_name = act.name;
    rep.dim_G   = act.dim_G();
    rep.dim_M   = act.dim_M;
    rep.samples = samples;
    rep.bounds  = {(act.dim_G() + act.dim_M - 1) / act.dim_M, act.dim_G()};
    for (int k = 1; k <= k_max; ++k) {
        int best = 0;
        std::vector<int> ranks;
        ranks.reserve(static_cast<std::size_t>(samples));
        for (int idx = 0; idx < samples; ++idx) {
            SplitRng rng(seed ^ static_cast<std::uint64_t>(k) << 32, static_cast<std::uint64_t>(idx));
            std::vector<std::map<std::string, Rational>> points;
            for (int j = 0; j < k; ++j) {
                std::map<std::string, Rational> pt;
                for (int i = 1; i <= act.dim_M; ++i)
                    pt.emplace(point_var_name(i, 1), rng.next_rational(10, 4));
                points.push_back(std::move(pt));
            }
            std::vector<std::vector<Rational>> m;
            for (const auto& field : act.generators) {
                std::vector<Rational> row;
                for (const auto& pt : points)
                    for (const auto& comp : field) row.push_back(evaluate(ring, comp, pt));
                m.push_back(std::move(row));
            }
            int rk = exact_rank(m);
            ranks.push_back(rk);
            best = std::max(best, rk);
        }
        int attain = 0;
        for (int rk : ranks)
            if (rk == best) ++attain;
        RankReport::PerK pk;
        pk.k = k;
        pk.rank = best;
        pk.invariant_count = k * act.dim_M - best;
        pk.attain_fraction = samples > 0 ? static_cast<double>(attain) / samples : 1.0;
        if (pk.attain_fraction < 0.9)
            rep.notes.push_back("warning: only " + std::to_string(attain) + "/" +
                                std::to_string(samples) + " samples attain rank " +
                                std::to_string(best) + " at k=" + std::to_string(k) +
                                "; sampling may be non-generic");
        if (!rep.k0_estimate && best == rep.dim_G) rep.k0_estimate = k;
        rep.per_k.push_back(pk);
    }
    rep.notes.push_back(
        "k0 bounds follow from rank counting: k*dim_M >= dim_G is necessary for full rank and "
        "k = dim_G always suffices, so ceil(dim_G/dim_M) <= k0 <= dim_G");
    return rep;
}

// -- identity checking ------------------------------------------------------

struct IdentityReport {
    bool passed = false;
    int samples = 0;
    int rejected = 0;
    double max_rel_deviation = 0.0;
    std::optional<std::string> witness;
};

using DomainSampler =
    std::function<std::optional<std::map<std::string, double>>(SplitRng&)>;

/// Compares two float expressions over a sampled domain; rejection sampling
/// honors the domain's open conditions (general position).
inline IdentityReport identity_check(const ExprPtr& lhs, const ExprPtr& rhs,
                                     const DomainSampler& sampler, int samples, double tol,
                                     std::uint64_t seed) {
    Float64Ring ring;
    IdentityReport rep;
    rep.samples = samples;
    int rejections = 0;
    const int rejection_cap = 100 * samples;
    for (int idx = 0; idx < samples; ++idx) {
        SplitRng rng(seed, static_cast<std::uint64_t>(idx));
        for (;;) {
            if (rejections > rejection_cap)
                throw SamplerExhausted("more than " + std::to_string(rejection_cap) +
                                       " rejected samples");
            auto pt = sampler(rng);
            if (!pt) {
                ++rejections;
                continue;
            }
            double a, b;
            try {
                a = evaluate(ring, lhs, *pt);
                b = evaluate(ring, rhs, *pt);
            } catch (const NotAUnit&) {
                ++rejections;
                continue;
            } catch (const UnsupportedOperation&) { // sqrt of a tiny negative
                ++rejections;
                continue;
            }
            double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
            double dev   = std::fabs(a - b) / scale;
            if (dev > rep.max_rel_deviation) {
                rep.max_rel_deviation = dev;
                rep.witness = "sample " + std::to_string(idx);
            }
            break;
        }
    }
    rep.rejected = rejections;
    rep.passed = rep.max_rel_deviation <= tol;
    if (rep.passed) rep.witness.reset();
    return rep;
}

} // namespace weilinv

#endif
