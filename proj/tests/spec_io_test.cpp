#include <string>

#include <gtest/gtest.h>

#include "maxpsh/maxpsh.hpp"
#include "maxpsh/spec_io.hpp"

using namespace maxpsh;

namespace {

std::string fixture(const std::string& name) { return std::string(MAXPSH_FIXTURES_DIR) + "/" + name; }

}  // namespace

TEST(SpecIO, LoadsEveryFixtureKind) {
  EXPECT_TRUE(load_model(fixture("strip1d.json")).is<Strip1D>());
  EXPECT_TRUE(load_model(fixture("disc1d.json")).is<Disc1D>());
  const Model iv = load_model(fixture("interval_tube.json"));
  ASSERT_TRUE(iv.is<EllipticTube>());
  EXPECT_EQ(iv.dim(), 1);
  const Model sq = load_model(fixture("square_tube.json"));
  ASSERT_NE(sq.body(), nullptr);
  EXPECT_TRUE(sq.body()->is_polytope());
  const Model ns = load_model(fixture("nonsymmetric_strip.json"));
  ASSERT_TRUE(ns.is<StripTube>());
  EXPECT_NEAR(metric_E(ns, RealVector::Zero(1), RealVector::Constant(1, -1.0)), 1.0, 1e-15);
  const Model se = load_model(fixture("superellipse_tube.json"));
  ASSERT_NE(se.body(), nullptr);
  EXPECT_TRUE(se.body()->is_smooth());
}

TEST(SpecIO, BareBodyIsAnEllipticTube) {
  const Model m = model_from_json(parse_json_text(R"({"type":"ellipsoid","Q":[[1,0],[0,4]]})"));
  EXPECT_TRUE(m.is<EllipticTube>());
  EXPECT_EQ(m.dim(), 2);
}

TEST(SpecIO, RejectsBadInput) {
  EXPECT_THROW(load_model(fixture("malformed.json")), SpecError);
  EXPECT_THROW(load_model(fixture("unknown_model.json")), SpecError);
  EXPECT_THROW(load_model(fixture("does_not_exist.json")), SpecError);
  EXPECT_THROW(load_model(fixture("indefinite.json")), SpecError);
  EXPECT_THROW(model_from_json(parse_json_text(R"({"model":"striptube"})")), SpecError);
  EXPECT_THROW(model_from_json(parse_json_text(R"({"type":"ellipsoid","Q":[[1,0],[0]]})")), SpecError);
  EXPECT_THROW(model_from_json(parse_json_text(R"({"type":"polytope","halfspaces":[{"a":[1]}]})")), SpecError);
}

TEST(SpecIO, ReportRoundTrip) {
  CheckReport r{"psh", "disc1d", 10, 1e-3, 1e-6, ComplexPoint::scalar({0.1, 0.2}), -1e-9, true};
  const json j = report_to_json(r);
  EXPECT_EQ(j["check"], "psh");
  EXPECT_EQ(j["samples"], 10);
  EXPECT_EQ(j["pass"], true);
  EXPECT_DOUBLE_EQ(j["worst_point"]["im"][0].get<double>(), 0.2);
  for (const char* key : {"check", "model", "samples", "h", "tol", "worst_point", "worst_value", "pass"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}
