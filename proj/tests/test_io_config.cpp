#include <cstdio>
#include <fstream>

#include <gtest/gtest.h>

#include "fractal_zeta/config.hpp"
#include "fractal_zeta/io.hpp"

using namespace fzeta;

TEST(Io, ZetaResultJsonKeysInOrder) {
  ZetaResult r;
  r.value = {1.0 / 3.0, -2.0};
  r.abs_error = 1e-12;
  r.method = Method::continued;
  r.terms_used = 42;
  r.meta.push_back({"depth_m", "17"});
  EXPECT_EQ(to_json(r).dump(),
            R"({"re":0.333333333333333,"im":-2.0,"abs_error":1e-12,"method":"continued","terms":42,"meta":{"depth_m":"17"}})");
}

TEST(Io, FifteenDigits) {
  EXPECT_EQ(fmt15(kPi), "3.14159265358979");
  EXPECT_EQ(num(2.0 / 3.0).dump(), "0.666666666666667");
  EXPECT_TRUE(num(std::numeric_limits<double>::infinity()).is_null());
}

TEST(Io, SpectrumCsv) {
  const BranchSystem bs = build_branch_system(RealPolynomial{0.0, 4.0, -2.0});
  const std::string csv = spectrum_csv(enumerate(bs, 0.0, 100.0));
  EXPECT_EQ(csv.rfind("lambda,multiplicity,depth,word\n19.7392088021787,2,1,2\n78.956835208714", 0), 0u);
  EXPECT_EQ(csv.substr(csv.size() - 9), ",2,2,2.1\n");
}

TEST(Io, ErrorJsonCarriesPoleLattice) {
  const PoleError e("near a pole", "1 - 5^(-s/2)", 0.0, 7.8);
  const Json j = error_json(e);
  EXPECT_EQ(j["error"], "pole");
  EXPECT_EQ(j["factor"], "1 - 5^(-s/2)");
  EXPECT_EQ(error_json(ResourceError("x", 12.5))["reachable"], 12.5);
}

TEST(Io, DecimationReportJson) {
  const Json j = to_json(verify_decimation(make_model("sg"), 1, 1e-9));
  EXPECT_EQ(j["family"], "sierpinski_gasket");
  EXPECT_EQ(j["boundary_mode"], "neumann");
  EXPECT_TRUE(j["verdict"].get<bool>());
  EXPECT_TRUE(j["mode_findings"]["neumann"].get<bool>());
  EXPECT_FALSE(j["mode_findings"]["dirichlet"].get<bool>());
}

TEST(Io, PolesCsv) {
  const std::string csv = poles_csv(complex_dimensions(StringSpec::cantor()), 1);
  EXPECT_NE(csv.find("\"riemann\",1,0,0,1,0,false"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Config, FullDocument) {
  const auto cfg = parse_config(nlohmann::json::parse(R"({
    "family": "interval_weighted", "p": 0.3, "generators": [0.3, 1.7],
    "cutoff": 500, "tolerances": {"zeta": 1e-9, "decimation": 1e-7}})"));
  EXPECT_EQ(cfg.model.family, Family::interval_weighted);
  EXPECT_DOUBLE_EQ(cfg.model.p, 0.3);
  EXPECT_DOUBLE_EQ(cfg.model.tol, 1e-9);
  EXPECT_DOUBLE_EQ(cfg.decimation_tol, 1e-7);
  EXPECT_DOUBLE_EQ(cfg.cutoff, 500.0);
}

TEST(Config, Strings) {
  const auto c = parse_config(nlohmann::json::parse(R"({"family": "fractal_string", "string": {"c": 0.5, "r": 2, "N": 1}})"));
  EXPECT_TRUE(c.model.string->self_similar);
  const auto e = parse_config(nlohmann::json::parse(R"({"family": "string", "string": {"lengths": [0.5, 0.25]}})"));
  EXPECT_EQ(e.model.string->lengths.size(), 2u);
}

TEST(Config, Rejections) {
  auto bad = [](const char* text) { return parse_config(nlohmann::json::parse(text)); };
  EXPECT_THROW(bad(R"({"p": 0.3})"), ValidationError);
  EXPECT_THROW(bad(R"({"family": "sg", "colour": 1})"), ValidationError);
  EXPECT_THROW(bad(R"({"family": "sg", "generators": [0.75]})"), ValidationError);
  EXPECT_THROW(bad(R"({"family": "sg", "cutoff": -4})"), ValidationError);
  EXPECT_THROW(bad(R"({"family": "weighted", "p": 2})"), ValidationError);
  EXPECT_THROW(bad(R"({"family": "sg", "tolerances": {"zeta": 0}})"), ValidationError);
  EXPECT_THROW(bad(R"({"family": "nonesuch"})"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ValidationError);
}

TEST(Config, ShippedExamplesLoad) {
  for (const char* name : {"sg.json", "weighted_p03.json", "quadratic.json", "cantor_string.json", "explicit_string.json"})
    EXPECT_NO_THROW(load_config(std::string(FZ_CONFIG_DIR) + "/" + name)) << name;
}
