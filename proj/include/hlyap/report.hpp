#pragma once

// JSON and plain-text rendering of command results.
//
// Reals go through nlohmann's shortest round-trip formatting, so parsing the
// output and dumping it again reproduces the same bytes.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hlyap/fredholm_verifier.hpp"
#include "hlyap/green_kernel.hpp"
#include "hlyap/lyapunov_bounds.hpp"
#include "hlyap/params.hpp"

namespace hlyap {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline Json to_json(const FracParams& p) {
    return Json{{"sigma", p.sigma()}, {"kappa", p.kappa()}, {"t1", p.t1()}, {"t2", p.t2()}};
}

inline Json to_json(const GreenMaxReport& r) {
    return Json{{"delta", r.delta},   {"x1", r.x1},       {"x2", r.x2},
                {"t_star", r.t_star}, {"t_hat", r.t_hat}, {"omega", r.omega},
                {"mho", r.mho},       {"gamma_sk", r.gamma_sk}, {"max_abs_g", r.max_abs_g},
                {"branch", to_string(r.branch)}};
}

inline Json to_json(const Verdict& v) {
    return Json{{"verdict", to_string(v.kind)}, {"q_integral", v.q_integral}, {"bound", v.bound}};
}

inline Json to_json(const LyapunovReport& r) {
    Json j{{"bound", r.bound}, {"eigen_bound", r.eigen_bound}, {"omega", r.omega}, {"mho", r.mho},
           {"x2", r.x2},       {"delta", r.delta},             {"gamma_sk", r.gamma_sk}};
    if (r.q_integral) j["q_integral"] = *r.q_integral;
    if (r.verdict) j["verdict"] = to_string(r.verdict->kind);
    return j;
}

inline Json to_json(const NystromResult& r) {
    return Json{{"n", r.n},
                {"dominant_mu", r.dominant_mu},
                {"mu_real", r.mu_real},
                {"mu_imag", r.mu_imag},
                {"dominant_is_real", r.dominant_is_real},
                {"lambda_min", r.lambda_min},
                {"analytic_bound", r.analytic_bound},
                {"constant_q_bound", r.constant_q_bound},
                {"satisfied", r.satisfied},
                {"eigenvector_boundary_residual", r.eigenvector_boundary_residual},
                {"iterations", r.iterations},
                {"transpose_mu", r.transpose_mu}};
}

struct RunReport {
    std::string command;
    std::optional<FracParams> params;
    Json payload = Json::object();
    std::vector<std::string> warnings;
    std::string version = kVersion;

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["params"] = params ? hlyap::to_json(*params) : Json(nullptr);
        j["payload"] = payload;
        j["warnings"] = warnings;
        j["version"] = version;
        return j;
    }
};

namespace detail {

inline std::string format_scalar(const Json& v) {
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) return d != d ? "nan" : (d > 0 ? "inf" : "-inf");
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline void flatten(const Json& v, const std::string& prefix, std::string& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
        return;
    }
    if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
        return;
    }
    out += prefix + ": " + format_scalar(v) + "\n";
}

}  // namespace detail

/// `key: value` lines, reals at 17 significant digits.
inline std::string render_text(const RunReport& r) {
    std::string out = "command: " + r.command + "\n";
    if (r.params) detail::flatten(hlyap::to_json(*r.params), "params", out);
    detail::flatten(r.payload, "", out);
    for (const auto& w : r.warnings) out += "warning: " + w + "\n";
    return out;
}

}  // namespace hlyap
