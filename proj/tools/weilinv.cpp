// weilinv: derive differential invariants from joint invariants by twisted
// jet arithmetic, and verify candidates by exact or numeric group-invariance
// checks.
//
// Exit codes: 0 success / property holds, 1 invariance or identity failure,
// 2 usage error, 3 engine error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weilinv/groups.hpp"
#include "weilinv/jets.hpp"
#include "weilinv/json_io.hpp"
#include "weilinv/presets.hpp"

namespace {

using namespace weilinv;

std::string read_expr_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw UnsupportedOperation("cannot open expression file " + arg.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

GroupAction parse_group(const std::string& spec) {
    if (spec == "aff1") return aff1();
    if (spec == "pgl2") return pgl2();
    if (spec.rfind("mov:", 0) == 0) return mov(std::stoi(spec.substr(4)));
    if (!spec.empty() && spec[0] == '@') return load_action_fixture(spec.substr(1));
    throw CLI::ValidationError("--group", "expected mov:N, aff1, pgl2 or @fixture.json");
}

std::vector<Rational> parse_twist(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string piece;
    while (std::getline(ss, piece, ',')) out.push_back(parse_rational(piece));
    return out;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int cmd_derive(const std::string& expr_arg, const std::string& preset_name, int points, int dim,
               int jet_order, const std::string& twist_arg, bool quotient, bool json,
               bool have_points, bool have_dim, bool have_order, bool have_twist,
               bool have_quotient) {
    ExprPtr num, den;
    std::vector<Rational> twist;
    if (!preset_name.empty()) {
        auto p = find_derive_preset(preset_name);
        if (!p) throw UsageError("unknown derive preset " + preset_name);
        num = p->numerator;
        den = p->denominator;
        if (!have_points) points = p->points;
        if (!have_dim) dim = p->dim;
        if (!have_order) jet_order = p->jet_order;
        if (!have_twist) twist = p->twist;
        if (!have_quotient) quotient = p->quotient;
    }
    if (!expr_arg.empty()) {
        ExprPtr e = parse(read_expr_arg(expr_arg));
        if (quotient) {
            if (e->kind != Expr::Kind::Div)
                throw UsageError("--quotient needs an expression whose top level is a division");
            num = e->args[0];
            den = e->args[1];
        } else {
            num = e;
            den = nullptr;
        }
    }
    if (!num) throw UsageError("derive needs --expr or --preset");
    if (twist.empty()) {
        if (twist_arg.empty()) throw UsageError("derive needs --twist");
        twist = parse_twist(twist_arg);
    } else if (have_twist) {
        twist = parse_twist(twist_arg);
    }
    if (points <= 0 || dim <= 0 || jet_order < 0)
        throw UsageError("derive needs positive --points and --dim and --jet-order >= 0");
    if (static_cast<int>(twist.size()) != points)
        throw UsageError("twist length " + std::to_string(twist.size()) +
                         " does not match --points " + std::to_string(points));
    for (const std::string& v : free_vars(quotient ? ex::div(num, den) : num)) {
        std::size_t us = v.find("_p");
        bool ok = false;
        if (us != std::string::npos && v[0] == 'x') {
            try {
                int i = std::stoi(v.substr(1, us - 1));
                int j = std::stoi(v.substr(us + 2));
                ok = i >= 1 && i <= dim && j >= 1 && j <= points;
            } catch (...) {
            }
        }
        if (!ok)
            throw UsageError("variable " + v + " is not x<i>_p<j> with i <= " +
                             std::to_string(dim) + ", j <= " + std::to_string(points));
    }

    auto p  = universal_jet(dim, 1, jet_order);
    auto tw = scaling_twist(p.algebra, twist);
    DerivationResult<RationalFunctionRing> d =
        quotient ? singular_twisted_quotient(num, den, tw, p) : twisted_differential(num, tw, p);

    if (json) {
        std::cout << derivation_to_json(d).dump(2) << "\n";
        return 0;
    }
    std::cout << "order: " << d.order << "\n";
    if (d.reduced_order) std::cout << "reduced_order: " << *d.reduced_order << "\n";
    auto lowest = d.lowest_component();
    const auto& ring = d.algebra.coeff_ring;
    for (const auto& [alpha, c] : d.components()) {
        int j = alpha[0];
        auto scaled = ring.mul(c, ring.from_rational(Rational(factorial(j))));
        std::cout << "eps^" << j << ": " << ring.to_string(c)
                  << " | scaled: " << ring.to_string(scaled);
        if (lowest && lowest->first == alpha) std::cout << "   <- lowest nonvanishing";
        std::cout << "\n";
    }
    if (!lowest) std::cout << "element is 0\n";
    return 0;
}

int cmd_check(const std::string& expr_arg, const std::string& group_arg, int jet_order,
              int samples, double tol, std::uint64_t seed, const std::string& ring_name,
              bool json) {
    if (expr_arg.empty()) throw UsageError("check needs --expr");
    auto cand = parse(read_expr_arg(expr_arg));
    auto act  = parse_group(group_arg);
    InvarianceReport rep;
    if (ring_name == "rational") {
        rep = check_invariant(RationalRing{}, cand, act, jet_order, samples, tol, seed);
    } else if (ring_name == "float") {
        rep = check_invariant(Float64Ring{}, cand, act, jet_order, samples, tol, seed);
    } else {
        throw UsageError("check supports --ring rational or float");
    }
    if (json) {
        std::cout << invariance_to_json(rep).dump(2) << "\n";
    } else {
        std::cout << "action: " << act.name << "\n";
        std::cout << "samples: " << rep.samples << " rejected: " << rep.rejected << "\n";
        if (rep.invariant) {
            std::cout << "invariant: yes (max deviation "
                      << (rep.exact ? std::string("0") : std::to_string(rep.max_deviation))
                      << ")\n";
        } else {
            std::cout << "invariant: no (deviation " << rep.worst_deviation_text << ")\n";
            if (rep.witness) std::cout << "witness: " << *rep.witness << "\n";
        }
    }
    return rep.invariant ? 0 : 1;
}

int cmd_rank(const std::string& group_arg, int k_max, int samples, std::uint64_t seed, bool json) {
    auto act = parse_group(group_arg);
    auto rep = rank_analysis(act, k_max, samples, seed);
    if (json) {
        std::cout << rank_to_json(rep).dump(2) << "\n";
        return 0;
    }
    std::cout << "action: " << rep.action_name << " (dim_G=" << rep.dim_G
              << ", dim_M=" << rep.dim_M << ")\n";
    for (const auto& pk : rep.per_k)
        std::cout << "k=" << pk.k << " rank=" << pk.rank
                  << " invariants=" << pk.invariant_count << "\n";
    if (rep.k0_estimate) std::cout << "k0: " << *rep.k0_estimate << "\n";
    std::cout << "k0 bounds: [" << rep.bounds.first << ", " << rep.bounds.second << "]\n";
    for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
    return 0;
}

int cmd_identity(const std::string& preset_name, int samples, double tol, std::uint64_t seed,
                 bool json) {
    auto p = find_identity_preset(preset_name);
    if (!p) throw UsageError("unknown identity preset " + preset_name);
    auto rep = identity_check(p->lhs, p->rhs, p->sampler, samples, tol, seed);
    if (json) {
        std::cout << identity_to_json(rep).dump(2) << "\n";
    } else {
        std::cout << "identity: " << p->name << "\n";
        std::cout << "samples: " << rep.samples << " rejected: " << rep.rejected << "\n";
        std::cout << "max relative deviation: " << rep.max_rel_deviation << "\n";
        std::cout << (rep.passed ? "passed" : "FAILED") << "\n";
        if (rep.witness) std::cout << "witness: " << *rep.witness << "\n";
    }
    return rep.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"derive and verify differential invariants over truncated jet algebras"};
    app.require_subcommand(1);

    // one set of option variables per subcommand: CLI11 applies default_val at
    // setup time, so sharing a variable lets one subcommand's default clobber
    // another's
    std::string expr_arg, preset_name, twist_arg, group_arg = "mov:2";
    std::string derive_ring, check_ring;
    int points = 0, dim = 0, jet_order = 0, k_max = 4;
    int check_samples = 0, rank_samples = 0, identity_samples = 0;
    double check_tol = 1e-9, identity_tol = 1e-9;
    std::uint64_t seed = 0;
    bool quotient = false, json = false;

    auto* derive = app.add_subcommand("derive", "derive an invariant by twisted differentials");
    auto* d_expr = derive->add_option("--expr", expr_arg, "joint invariant (or @file)");
    derive->add_option("--preset", preset_name,
                       "endo-metric | area | volume-n3 | affine-ratio | anharmonic");
    auto* d_points = derive->add_option("--points", points, "number of points k");
    auto* d_dim    = derive->add_option("--dim", dim, "dimension n of the space");
    auto* d_order  = derive->add_option("--jet-order", jet_order, "truncation order r");
    auto* d_twist  = derive->add_option("--twist", twist_arg, "scaling constants c0,c1,...");
    auto* d_quot   = derive->add_flag("--quotient", quotient,
                                      "divide numerator by denominator in the annihilator quotient");
    derive->add_flag("--json", json, "machine-readable output");
    derive->add_option("--ring", derive_ring, "coefficient ring (rational-function)");

    auto* check = app.add_subcommand("check", "check invariance under a group action");
    check->add_option("--expr", expr_arg, "candidate invariant in jet variables (or @file)");
    check->add_option("--group", group_arg, "mov:N | aff1 | pgl2 | @fixture.json");
    check->add_option("--jet-order", jet_order, "jet order r")->default_val(2);
    check->add_option("--samples", check_samples, "sample count")->default_val(100);
    check->add_option("--tol", check_tol, "tolerance (float ring)")->default_val(1e-9);
    check->add_option("--seed", seed, "random seed")->default_val(0);
    check->add_option("--ring", check_ring, "rational | float")->default_val("rational");
    check->add_flag("--json", json, "machine-readable output");

    auto* rank = app.add_subcommand("rank", "generic rank of the generator distribution");
    rank->add_option("--group", group_arg, "mov:N | aff1 | pgl2 | @fixture.json");
    rank->add_option("--points", k_max, "maximal number of points k")->default_val(4);
    rank->add_option("--samples", rank_samples, "samples per k")->default_val(20);
    rank->add_option("--seed", seed, "random seed")->default_val(0);
    rank->add_flag("--json", json, "machine-readable output");

    auto* identity = app.add_subcommand("identity", "verify a functional-dependence identity");
    identity->add_option("--preset", preset_name, "heron | cayley-menger")->required();
    identity->add_option("--samples", identity_samples, "sample count")->default_val(1000);
    identity->add_option("--tol", identity_tol, "relative tolerance")->default_val(1e-9);
    identity->add_option("--seed", seed, "random seed")->default_val(0);
    identity->add_flag("--json", json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (derive->parsed()) {
            if (!derive_ring.empty() && derive_ring != "rational-function") {
                std::cerr << "usage: derive runs over the rational-function ring\n";
                return 2;
            }
            return cmd_derive(expr_arg, preset_name, points, dim, jet_order, twist_arg, quotient,
                              json, d_points->count() > 0, d_dim->count() > 0,
                              d_order->count() > 0, d_twist->count() > 0, d_quot->count() > 0);
        }
        if (check->parsed())
            return cmd_check(expr_arg, group_arg, jet_order, check_samples, check_tol, seed, check_ring, json);
        if (rank->parsed()) return cmd_rank(group_arg, k_max, rank_samples, seed, json);
        if (identity->parsed()) return cmd_identity(preset_name, identity_samples, identity_tol, seed, json);
        (void)d_expr;
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const weilinv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
