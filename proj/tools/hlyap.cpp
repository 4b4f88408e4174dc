// hlyap: command-line front end.
//
//   hlyap bound    --sigma S --kappa K --t1 A --t2 B
//   hlyap check    ... (--q-const C | --q-expr EXPR | --q-table FILE)
//   hlyap green    eval --t T --s S | max | grid --n N --out FILE   (plus params)
//   hlyap eigen    ... [--n N]
//   hlyap selftest [--filter F] [--full]
//
// Global flags: --json, --tol <real>, --seed <int>.
// Exit codes: 0 ok, 1 selftest failure, 2 usage/validation, 3 numerical
// failure, 4 eigenvalue bound violated.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"

#include "hlyap/acceptance.hpp"
#include "hlyap/hlyap.hpp"
#include "hlyap/report.hpp"

namespace {

enum Exit { kOk = 0, kSelftestFailed = 1, kUsage = 2, kNumerical = 3, kBoundViolated = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decimal with optional exponent; no bare `e`, no inf/nan/hex.
double parse_real(const std::string& flag, const std::string& text) {
    static const std::regex pattern(R"([+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)");
    if (!std::regex_match(text, pattern)) {
        throw UsageError(flag + ": '" + text + "' is not a decimal real (use e.g. 2.718281828459045, not e)");
    }
    const char* first = text.data();
    if (*first == '+') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw UsageError(flag + ": '" + text + "' is out of range");
    }
    return v;
}

struct ParamFlags {
    std::string sigma, kappa, t1, t2;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sigma", sigma, "Outer derivative order, 1 < sigma <= 2")->required();
        cmd->add_option("--kappa", kappa, "Inner derivative order, 0 < kappa < sigma - 1")->required();
        cmd->add_option("--t1", t1, "Left endpoint, t1 > 0")->required();
        cmd->add_option("--t2", t2, "Right endpoint, t2 > t1")->required();
    }
    hlyap::FracParams get() const {
        return hlyap::validate(parse_real("--sigma", sigma), parse_real("--kappa", kappa), parse_real("--t1", t1),
                               parse_real("--t2", t2));
    }
};

// The edge maximum sits at t1·exp(L·(a/(σ−1))^(1/κ)); flag it when that
// offset is below what t can resolve.
void edge_warning(const hlyap::FracParams& p, std::vector<std::string>& warnings) {
    const double s1 = p.sigma() - 1.0;
    const double offset = p.log_length() * std::pow(p.kernel_exponent() / s1, 1.0 / p.kappa());
    if (offset < 4.0 * std::numeric_limits<double>::epsilon()) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "edge maximum lies at ln(t/t1) = %.3g, not resolvable as a value of t", offset);
        warnings.emplace_back(buf);
    }
}

int emit(const hlyap::RunReport& report, bool json) {
    if (json) {
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        std::cout << hlyap::render_text(report);
    }
    return kOk;
}

int exit_code_for(hlyap::ErrorKind kind) {
    using hlyap::ErrorKind;
    switch (kind) {
        case ErrorKind::QuadratureFailure:
        case ErrorKind::ConvergenceFailure:
        case ErrorKind::DifferenceInstability: return kNumerical;
        default: return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lyapunov-type bounds and Green's function tools for Hadamard fractional BVPs"};
    app.require_subcommand(1);
    app.fallthrough();

    bool json = false;
    std::string tol_text = "1e-9";
    std::int64_t seed = static_cast<std::int64_t>(hlyap::acceptance::kDefaultSeed);
    app.add_flag("--json", json, "Emit JSON");
    app.add_option("--tol", tol_text, "Absolute tolerance for the integral of |q|");
    app.add_option("--seed", seed, "Seed for pseudo-random parameter sets");

    ParamFlags bound_flags, check_flags, green_flags, eigen_flags;

    CLI::App* bound = app.add_subcommand("bound", "Lyapunov bound and Green's function constants");
    bound_flags.attach(bound);

    CLI::App* check = app.add_subcommand("check", "Nonexistence verdict for a coefficient q");
    check_flags.attach(check);
    std::string q_const, q_expr, q_table;
    auto* oc = check->add_option("--q-const", q_const, "Constant coefficient");
    auto* oe = check->add_option("--q-expr", q_expr, "Expression in t, e.g. \"ln(t)\"");
    auto* ot = check->add_option("--q-table", q_table, "CSV file with header t,q");
    oc->excludes(oe)->excludes(ot);
    oe->excludes(ot);

    CLI::App* green = app.add_subcommand("green", "Green's function evaluation, maximum and grid");
    green->require_subcommand(1);
    green_flags.attach(green);
    CLI::App* g_eval = green->add_subcommand("eval", "G(t, s)");
    std::string t_text, s_text;
    g_eval->add_option("--t", t_text, "t in [t1, t2]")->required();
    g_eval->add_option("--s", s_text, "s in [t1, t2]")->required();
    CLI::App* g_max = green->add_subcommand("max", "Exact maximum of |G|");
    CLI::App* g_grid = green->add_subcommand("grid", "Write an n x n grid of G as CSV");
    std::size_t grid_n = 100;
    std::string grid_out;
    g_grid->add_option("--n", grid_n, "Points per axis (uniform in ln t)");
    g_grid->add_option("--out", grid_out, "Output CSV path")->required();

    CLI::App* eigen = app.add_subcommand("eigen", "Smallest eigenvalue modulus by product-integration Nystrom");
    eigen_flags.attach(eigen);
    long long eigen_n = 400;
    eigen->add_option("--n", eigen_n, "Mesh size, 32 <= n <= 4000");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the acceptance criteria");
    std::string filter;
    bool full = false;
    selftest->add_option("--filter", filter, "Run only criteria whose name or module contains this text");
    selftest->add_flag("--full", full, "Full-size brute-force sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        const double tol = parse_real("--tol", tol_text);
        if (!(tol > 0.0)) throw UsageError("--tol must be positive");

        hlyap::RunReport report;
        if (*bound) {
            const hlyap::FracParams p = bound_flags.get();
            report.command = "bound";
            report.params = p;
            hlyap::LyapunovReport r = hlyap::lyapunov_report(p);
            report.payload = hlyap::to_json(r);
            report.payload["constant_q_bound"] = hlyap::constant_coefficient_bound(p);
            edge_warning(p, report.warnings);
            return emit(report, json);
        }
        if (*check) {
            const hlyap::FracParams p = check_flags.get();
            const int given = (oc->count() > 0) + (oe->count() > 0) + (ot->count() > 0);
            if (given != 1) throw UsageError("check needs exactly one of --q-const, --q-expr, --q-table");
            hlyap::Coefficient q = oc->count() ? hlyap::Coefficient::constant(parse_real("--q-const", q_const))
                                   : oe->count() ? hlyap::Coefficient::expression(q_expr)
                                                 : hlyap::load_table_csv(q_table);
            const hlyap::Verdict v = hlyap::nonexistence_check(p, q, tol);
            report.command = "check";
            report.params = p;
            report.payload = hlyap::to_json(v);
            report.payload["coefficient"] = q.describe();
            return emit(report, json);
        }
        if (*green) {
            const hlyap::FracParams p = green_flags.get();
            report.params = p;
            if (*g_eval) {
                const double t = parse_real("--t", t_text), s = parse_real("--s", s_text);
                report.command = "green eval";
                report.payload = hlyap::Json{{"t", t}, {"s", s}, {"G", hlyap::green_eval(p, t, s)}};
            } else if (*g_max) {
                report.command = "green max";
                report.payload = hlyap::to_json(hlyap::green_max(p));
                edge_warning(p, report.warnings);
            } else {
                if (grid_n < 2) throw UsageError("--n must be at least 2");
                if (grid_n > hlyap::kBruteForceGridCap) {
                    throw hlyap::Error(hlyap::ErrorKind::ResourceLimit, "--n exceeds grid cap");
                }
                std::ofstream out(grid_out, std::ios::binary);
                if (!out) throw UsageError("cannot open " + grid_out + " for writing");
                hlyap::write_green_grid(out, p, grid_n);
                out.close();
                if (!out) throw UsageError("failed writing " + grid_out);
                report.command = "green grid";
                report.payload = hlyap::Json{{"path", grid_out}, {"n", grid_n}, {"rows", grid_n * grid_n}};
            }
            return emit(report, json);
        }
        if (*eigen) {
            const hlyap::FracParams p = eigen_flags.get();
            if (eigen_n < 32) throw UsageError("--n must satisfy n >= 32");
            const hlyap::NystromResult r = hlyap::min_eigenvalue_modulus(p, static_cast<std::size_t>(eigen_n));
            report.command = "eigen";
            report.params = p;
            report.payload = hlyap::to_json(r);
            if (!r.dominant_is_real) {
                report.warnings.emplace_back("dominant eigenvalue is a complex pair; lambda_min uses its modulus");
            }
            if (!r.satisfied) report.warnings.emplace_back("lambda_min is below eigen_bound");
            emit(report, json);
            return r.satisfied ? kOk : kBoundViolated;
        }
        if (*selftest) {
            namespace acc = hlyap::acceptance;
            acc::Options opt;
            opt.scale = full ? acc::Scale::Full : acc::Scale::Fast;
            opt.seed = static_cast<std::uint64_t>(seed);
            opt.filter = filter;
            const auto results = acc::run(opt);
            if (results.empty()) throw UsageError("no criterion matches filter '" + filter + "'");
            std::size_t passed = 0;
            hlyap::Json rows = hlyap::Json::array();
            for (const auto& r : results) {
                passed += r.passed ? 1 : 0;
                rows.push_back(hlyap::Json{{"id", r.id},
                                           {"name", r.name},
                                           {"module", r.module},
                                           {"passed", r.passed},
                                           {"seconds", r.seconds},
                                           {"limit_seconds", r.limit_seconds},
                                           {"detail", r.detail}});
            }
            report.command = "selftest";
            report.payload = hlyap::Json{{"scale", full ? "full" : "fast"},
                                         {"seed", seed},
                                         {"passed", passed},
                                         {"total", results.size()},
                                         {"results", rows}};
            if (json) {
                std::cout << report.to_json().dump(2) << "\n";
            } else {
                for (const auto& r : results) std::cout << acc::format_line(r) << "\n";
                std::cout << passed << "/" << results.size() << " criteria passed\n";
            }
            return passed == results.size() ? kOk : kSelftestFailed;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const hlyap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
