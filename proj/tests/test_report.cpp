#include <gtest/gtest.h>

#include "hlyap/report.hpp"

using namespace hlyap;

TEST(Report, SchemaKeys) {
    const auto p = validate(1.75, 0.5, 1.0, 2.718281828459045);
    RunReport r;
    r.command = "bound";
    r.params = p;
    r.payload = to_json(lyapunov_report(p));
    const Json j = r.to_json();
    for (const char* key : {"command", "params", "payload", "warnings", "version"}) EXPECT_TRUE(j.contains(key)) << key;
    for (const char* key : {"sigma", "kappa", "t1", "t2"}) EXPECT_TRUE(j["params"].contains(key)) << key;
    EXPECT_EQ(j["version"], kVersion);
    EXPECT_TRUE(j["warnings"].is_array());
}

TEST(Report, RoundTripIsByteIdenticalAndLossless) {
    const auto p = validate(1.6180339887498949, 0.123456789012345678, 1.0 / 3.0, 7.0 / 3.0);
    RunReport r;
    r.command = "green max";
    r.params = p;
    r.payload = to_json(green_max(p));
    r.warnings = {"a warning"};
    const std::string text = r.to_json().dump(2);
    const Json back = Json::parse(text);
    EXPECT_EQ(back.dump(2), text);
    EXPECT_EQ(back["params"]["kappa"].get<double>(), p.kappa());
    EXPECT_EQ(back["payload"]["omega"].get<double>(), omega(p));
}

TEST(Report, TextRendering) {
    const auto p = validate(1.75, 0.5, 1.0, 2.718281828459045);
    RunReport r;
    r.command = "green max";
    r.params = p;
    r.payload = to_json(green_max(p));
    r.warnings = {"w"};
    const std::string text = render_text(r);
    EXPECT_NE(text.find("branch: LeftEdge"), std::string::npos) << text;
    EXPECT_NE(text.find("params.t2: 2.7182818284590451"), std::string::npos) << text;
    EXPECT_NE(text.find("warning: w"), std::string::npos);
}

TEST(Report, NystromFields) {
    NystromResult n;
    n.n = 400;
    n.satisfied = true;
    const Json j = to_json(n);
    for (const char* key : {"n", "dominant_mu", "lambda_min", "analytic_bound", "satisfied",
                            "eigenvector_boundary_residual"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
}
