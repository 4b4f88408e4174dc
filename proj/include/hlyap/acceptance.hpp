#pragma once

// Acceptance criteria shared by the acceptance runner and `hlyap selftest`.
//
// Each criterion reports pass/fail against pinned tolerances and a wall-clock
// limit. Scale::Full runs the criteria at their stated sizes; Scale::Fast
// shrinks only the brute-force sweep (criterion 4), everything else is
// identical.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hlyap/coefficient.hpp"
#include "hlyap/errors.hpp"
#include "hlyap/fredholm_verifier.hpp"
#include "hlyap/green_kernel.hpp"
#include "hlyap/hadamard_operators.hpp"
#include "hlyap/lyapunov_bounds.hpp"
#include "hlyap/params.hpp"
#include "hlyap/special_functions.hpp"

namespace hlyap::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr double kE = 2.718281828459045;

/// Uniform reals from a 64-bit Mersenne Twister, built from the top 53 bits
/// so the stream is identical on every platform.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : rng_(seed) {}
    double operator()(double lo, double hi) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

private:
    std::mt19937_64 rng_;
};

/// Valid parameter sets: σ ∈ (1.05, 2), κ a fraction in (0.05, 0.95) of σ − 1,
/// t1 ∈ (0.5, 2), ln(t2/t1) ∈ (0.25, 2.5).
inline std::vector<FracParams> random_params(std::uint64_t seed, std::size_t count) {
    Uniform draw(seed);
    std::vector<FracParams> out;
    out.reserve(count);
    while (out.size() < count) {
        const double sigma = 1.0 + draw(0.05, 1.0);
        const double kappa = (sigma - 1.0) * draw(0.05, 0.95);
        const double t1 = draw(0.5, 2.0);
        const double L = draw(0.25, 2.5);
        out.push_back(validate(sigma, kappa, t1, t1 * std::exp(L)));
    }
    return out;
}

enum class Scale { Fast, Full };

struct Options {
    Scale scale = Scale::Full;
    std::uint64_t seed = kDefaultSeed;
    std::string filter;  // substring of the criterion name or module tag; empty runs all
};

struct Result {
    int id = 0;
    std::string name;
    std::string module;
    bool passed = false;
    double seconds = 0.0;
    double limit_seconds = 0.0;
    std::string detail;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline bool close(double value, double expected, double tol) { return std::fabs(value - expected) <= tol; }

struct Outcome {
    bool ok = true;
    std::string detail;

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& s) {
        if (!detail.empty()) detail += "; ";
        detail += s;
    }
};

inline FracParams example1() { return validate(1.75, 0.5, 1.0, kE); }

inline Outcome example1_constants(const Options&) {
    Outcome o;
    const FracParams p = example1();
    const GreenMaxReport g = green_max(p);
    const double bound = lyapunov_bound(p);
    o.check(close(g.delta, 1.0, 1e-12), "delta " + fmt("%.17g", g.delta));
    o.check(close(g.x2, 0.5, 1e-12), "x2 " + fmt("%.17g", g.x2));
    o.check(close(g.omega, 0.3032653299, 1e-9), "omega " + fmt("%.17g", g.omega));
    o.check(close(g.mho, 0.3849001795, 1e-9), "mho " + fmt("%.17g", g.mho));
    o.check(close(g.gamma_sk, 0.9064024771, 1e-9), "gamma " + fmt("%.17g", g.gamma_sk));
    o.check(close(bound, 2.3549027134, 1e-8), "bound " + fmt("%.17g", bound));
    if (o.ok) o.note("bound " + fmt("%.12g", bound));
    return o;
}

inline Outcome example1_verdict(const Options&) {
    Outcome o;
    const FracParams p = example1();
    const Coefficient q = Coefficient::expression("ln(t)");
    const double integral = integrate_abs_q(q, p.t1(), p.t2(), 1e-10);
    const Verdict v = nonexistence_check(p, q, 1e-10);
    o.check(close(integral, 1.0, 1e-9), "integral " + fmt("%.17g", integral));
    o.check(v.kind == VerdictKind::NoNontrivialSolution, std::string("verdict ") + to_string(v.kind));
    if (o.ok) o.note("integral " + fmt("%.15g", integral) + " < " + fmt("%.12g", v.bound));
    return o;
}

inline Outcome example2_eigen_bound(const Options&) {
    Outcome o;
    const FracParams p = example1();
    const double eb = eigenvalue_bound(p);
    o.check(close(eb, 4.0463865405, 1e-8), "eigen_bound " + fmt("%.17g", eb));
    const Verdict below = lambda_nonexistence_check(p, 4.0);
    const Verdict above = lambda_nonexistence_check(p, 4.1);
    o.check(below.kind == VerdictKind::NoNontrivialSolution, "lambda 4.0 gave " + std::string(to_string(below.kind)));
    o.check(above.kind == VerdictKind::Inconclusive, "lambda 4.1 gave " + std::string(to_string(above.kind)));
    if (o.ok) o.note("eigen_bound " + fmt("%.12g", eb));
    return o;
}

inline Outcome oracle_agreement(const Options& opt) {
    Outcome o;
    const bool full = opt.scale == Scale::Full;
    const std::size_t count = full ? 50 : 8;
    const std::size_t grid = full ? 2000 : 1000;
    const auto sets = random_params(opt.seed, count);
    double worst = 0.0;
    std::size_t failures = 0;
    for (const FracParams& p : sets) {
        const double closed = green_max(p).max_abs_g;
        const double brute = green_max_bruteforce(p, grid).value;
        const double rel = std::fabs(closed - brute) / closed;
        worst = std::max(worst, rel);
        if (!(rel <= 2e-3)) ++failures;
    }
    o.check(failures == 0, std::to_string(failures) + " sets above 2e-3");
    o.note(std::to_string(count) + " sets, n=" + std::to_string(grid) + ", worst rel " + fmt("%.3g", worst));
    return o;
}

inline Outcome eigen_bound_never_violated(const Options& opt) {
    Outcome o;
    const auto sets = random_params(opt.seed, 20);
    std::size_t violations = 0, corrected_violations = 0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (const FracParams& p : sets) {
        const NystromResult r = min_eigenvalue_modulus(p, 400);
        if (!(r.lambda_min >= r.analytic_bound - 1e-9)) ++violations;
        if (!(r.lambda_min >= r.constant_q_bound - 1e-9)) ++corrected_violations;
        worst_ratio = std::min(worst_ratio, r.lambda_min / r.analytic_bound);
    }
    const NystromResult ex = min_eigenvalue_modulus(example1(), 400);
    o.check(ex.lambda_min >= 4.0463865405, "example lambda_min " + fmt("%.12g", ex.lambda_min));
    o.check(violations == 0, std::to_string(violations) + "/20 sets with lambda_min < eigen_bound");
    o.note("min lambda_min/eigen_bound " + fmt("%.4g", worst_ratio));
    o.note("example lambda_min " + fmt("%.10g", ex.lambda_min));
    o.note(std::to_string(corrected_violations) + "/20 below bound/(t2-t1)");
    return o;
}

inline Outcome power_rule(const Options& opt) {
    Outcome o;
    Uniform draw(opt.seed ^ 0x5eedULL);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double order = draw(0.1, 2.0);
        const double expo = draw(0.2, 3.0);
        const double t1 = draw(0.5, 2.0);
        const double x = draw(0.2, 2.0);
        auto g = [expo](double u) { return std::pow(u, expo - 1.0); };
        const double num = hadamard_integral_log(order, g, x);
        const double ref = power_rule_reference(PowerRuleOp::Integral, order, expo, t1, t1 * std::exp(x));
        worst = std::max(worst, std::fabs(num - ref));
    }
    o.check(worst <= 1e-6, "integral error " + fmt("%.3g", worst));

    // D^σ I^σ f = f for a smooth f in the log variable.
    auto f = [](double u) { return 1.0 + u * std::exp(-u) + 0.5 * std::sin(2.0 * u); };
    double worst_inv = 0.0;
    for (double order : {0.25, 0.6, 1.0, 1.3, 1.75, 2.0}) {
        auto If = [&](double u) { return hadamard_integral_log(order, f, u); };
        for (double x : {0.4, 0.9, 1.4}) {
            worst_inv = std::max(worst_inv, std::fabs(hadamard_derivative_log(order, If, x) - f(x)));
        }
    }
    o.check(worst_inv <= 1e-4, "inversion error " + fmt("%.3g", worst_inv));
    if (o.ok) o.note("integral err " + fmt("%.2g", worst) + ", inversion err " + fmt("%.2g", worst_inv));
    return o;
}

inline Outcome kappa_limit(const Options&) {
    Outcome o;
    double worst = 0.0;
    for (double sigma : {1.3, 1.6, 1.9}) {
        const FracParams p = validate(sigma, 1e-7, 1.0, kE);
        const double ours = gamma(sigma - 1e-7) / omega(p);
        const double ref = reference_bound_kappa0(sigma, 1.0, kE);
        worst = std::max(worst, std::fabs(ours - ref) / ref);
    }
    o.check(worst <= 1e-5, "relative gap " + fmt("%.3g", worst));
    if (o.ok) o.note("worst rel gap " + fmt("%.2g", worst));
    return o;
}

inline Outcome monotonicity(const Options& opt) {
    Outcome o;
    const auto sets = random_params(opt.seed + 1, 20);
    Uniform draw(opt.seed + 2);
    constexpr double slack = 8.0 * std::numeric_limits<double>::epsilon();
    std::size_t bad1 = 0, bad2 = 0, bad_edge = 0, bad_sign = 0, bad_diag = 0;
    for (const FracParams& p : sets) {
        for (int k = 0; k < 200; ++k) {
            const double t = p.t1() * std::exp(p.log_length() * draw(0.0, 1.0));
            // Two points in [t, t2] and two in [t1, t].
            double a = t * std::exp(std::log(p.t2() / t) * draw(0.0, 1.0));
            double b = t * std::exp(std::log(p.t2() / t) * draw(0.0, 1.0));
            if (a > b) std::swap(a, b);
            const double xa = xi1(p, t, a), xb = xi1(p, t, b);
            if (xb > xa + slack * std::fabs(xa)) ++bad1;
            if (xa < 0.0 || xb < 0.0) ++bad_sign;

            double c = p.t1() * std::exp(std::log(t / p.t1()) * draw(0.0, 1.0));
            double d = p.t1() * std::exp(std::log(t / p.t1()) * draw(0.0, 1.0));
            c = std::min(c, t);
            d = std::min(d, t);
            if (c > d) std::swap(c, d);
            const double yc = xi2(p, t, c), yd = xi2(p, t, d);
            if (yd < yc - slack * std::max(std::fabs(yc), std::fabs(yd))) ++bad2;
            if (xi2(p, t, p.t1()) > 0.0) ++bad_edge;
            if (std::fabs(xi1(p, t, t) - xi2(p, t, t)) > 1e-12) ++bad_diag;
        }
    }
    o.check(bad1 == 0, std::to_string(bad1) + " increases of xi1");
    o.check(bad2 == 0, std::to_string(bad2) + " decreases of xi2");
    o.check(bad_edge == 0, std::to_string(bad_edge) + " positive xi2(t,t1)");
    o.check(bad_sign == 0, std::to_string(bad_sign) + " negative xi1");
    o.check(bad_diag == 0, std::to_string(bad_diag) + " diagonal jumps");
    if (o.ok) o.note("20 sets x 200 pairs, no violations");
    return o;
}

/// Round-trip corpus for the expression parser.
inline const std::vector<std::string>& expression_corpus() {
    static const std::vector<std::string> corpus = {
        "t",
        "1",
        "0.5",
        "1e-3",
        "2.5E+2",
        ".25",
        "ln(t)",
        "exp(t)",
        "sin(t)",
        "cos(t)",
        "abs(t - 2)",
        "sqrt(t)",
        "-t",
        "--t",
        "-t^2",
        "2^3^2",
        "(2^3)^2",
        "1+2*3",
        "(1+2)*3",
        "2*t^2 - 1",
        "t/2/3",
        "t/(2/3)",
        "t-1-2",
        "t-(1-2)",
        "1 - -t",
        "2*-t",
        "-2^-t",
        "t^-0.5",
        "ln(t)^2",
        "ln(t^2)",
        "exp(-t)*sin(3*t)",
        "abs(ln(t)) + 1",
        "sqrt(abs(cos(t)))",
        "1/(1+t^2)",
        "(t-1)*(t-2)*(t-3)",
        "3.14159*t",
        "t*t*t - 3*t",
        "exp(ln(t))",
        "  t  +  1  ",
        "((t))",
        "-(t+1)",
        "2*(3+4)^2",
        "sin(t)^2 + cos(t)^2",
        "ln(t)/ln(2)",
        "1e10*t^-3",
        "exp(exp(0.1*t))",
        "abs(-t)",
        "0.1+0.2",
        "t^(1/3)",
        "-ln(t)*-1",
    };
    return corpus;
}

inline Outcome parser_corpus(const Options&) {
    Outcome o;
    std::size_t failures = 0;
    for (const std::string& src : expression_corpus()) {
        const ExprPtr ast = parse_expr(src);
        const std::string printed = to_source(*ast);
        const ExprPtr again = parse_expr(printed);
        if (!structurally_equal(*ast, *again) || to_source(*again) != printed) {
            ++failures;
            o.note("round-trip failed: " + src);
        }
    }
    o.check(failures == 0, std::to_string(failures) + " round-trip failures");
    o.check(expression_corpus().size() == 50, "corpus size");

    const ExprPtr ln = parse_expr("ln(t)");
    o.check(ln->kind == ExprKind::Function && ln->func == FuncKind::Ln && ln->lhs &&
                ln->lhs->kind == ExprKind::Variable,
            "ln(t) shape");
    o.check(evaluate(*parse_expr("2*t^2 - 1"), 2.0) == 7.0, "2*t^2 - 1 at 2");
    o.check(evaluate(*parse_expr("1+2*3"), 0.0) == 7.0, "1+2*3");
    if (o.ok) o.note("50 round-trips, 3 precedence examples");
    return o;
}

struct Criterion {
    int id;
    const char* name;
    const char* module;
    double limit_seconds;
    Outcome (*run)(const Options&);
};

inline const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "example1_constants", "green_kernel lyapunov_bounds", 1e-3, example1_constants},
        {2, "example1_verdict", "lyapunov_bounds coefficient_expr", 0.05, example1_verdict},
        {3, "example2_eigen_bound", "lyapunov_bounds", 1e-3, example2_eigen_bound},
        {4, "green_max_oracle_agreement", "green_kernel", 60.0, oracle_agreement},
        {5, "eigen_bound_never_violated", "fredholm_verifier", 120.0, eigen_bound_never_violated},
        {6, "power_rule", "hadamard_operators", 10.0, power_rule},
        {7, "kappa_to_zero_limit", "lyapunov_bounds", 0.01, kappa_limit},
        {8, "kernel_monotonicity", "green_kernel", 5.0, monotonicity},
        {9, "parser_corpus", "coefficient_expr", 0.1, parser_corpus},
    };
    return all;
}

}  // namespace detail

inline bool matches(const detail::Criterion& s, const std::string& filter) {
    if (filter.empty()) return true;
    return std::string(s.name).find(filter) != std::string::npos ||
           std::string(s.module).find(filter) != std::string::npos || std::to_string(s.id) == filter;
}

/// Runs one criterion. Library errors become a failed result with the
/// message as detail; a run over its time limit fails as well.
inline Result run_one(const detail::Criterion& s, const Options& opt) {
    Result r;
    r.id = s.id;
    r.name = s.name;
    r.module = s.module;
    r.limit_seconds = s.limit_seconds;
    const auto start = std::chrono::steady_clock::now();
    detail::Outcome out;
    try {
        out = s.run(opt);
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = out.ok;
    r.detail = out.detail;
    if (r.seconds > r.limit_seconds) {
        r.passed = false;
        r.detail += (r.detail.empty() ? "" : "; ") + std::string("runtime ") + detail::fmt("%.3g", r.seconds) +
                    " s over limit " + detail::fmt("%.3g", r.limit_seconds) + " s";
    }
    return r;
}

inline std::vector<Result> run(const Options& opt) {
    std::vector<Result> out;
    for (const auto& s : detail::criteria()) {
        if (matches(s, opt.filter)) out.push_back(run_one(s, opt));
    }
    return out;
}

inline std::string format_line(const Result& r) {
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %d %-28s %9.4f s  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds);
    return head + r.detail;
}

}  // namespace hlyap::acceptance
