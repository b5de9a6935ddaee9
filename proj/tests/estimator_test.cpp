#include <gtest/gtest.h>

#include <cmath>

#include "mapconst/errors.hpp"
#include "mapconst/estimator.hpp"
#include "mapconst/symbolic.hpp"

using namespace mapconst;

namespace {

constexpr Precision kPrec = 256;

BigFloat dec(const char* text) { return BigFloat::from_string(text, kPrec); }

EstimateRequest request(const char* map, const char* x0, std::uint64_t n) {
  EstimateRequest req;
  req.map_id = map;
  req.x0 = ScalarExpr::parse(x0);
  req.n = n;
  return req;
}

}  // namespace

TEST(Newton, RecoversPlantedConstant) {
  // x_k is manufactured from the template itself, so the solve must return C.
  for (const char* id : {"m1", "m2", "m3", "m4"}) {
    const AsymptoticTemplate t = derive_coefficients(make_map(id), 4).tmpl;
    const BigFloat planted = dec("0.8137");
    const std::uint64_t k = 50000;
    const BigFloat xk = eval_template(t, planted, k, kPrec);
    const NewtonSolution sol = solve_constant(t, k, xk, kPrec);
    EXPECT_LT(abs(sol.c - planted), power_of_two(-120, kPrec)) << id;
    EXPECT_LE(sol.iterations, 10) << id;
  }
}

TEST(Newton, ScaledTemplateRecoversPlantedConstant) {
  const AsymptoticTemplate t = derive_coefficients(make_map("m5"), 3).tmpl;
  const BigFloat planted = dec("0.66");
  const BigFloat xk = eval_template(t, planted, 20000, kPrec);
  EXPECT_LT(abs(solve_constant(t, 20000, xk, kPrec).c - planted), power_of_two(-120, kPrec));
}

TEST(EstimateRequest, ValidationRejectsBadRuns) {
  EstimateRequest req = request("m1", "1/2", 99);
  EXPECT_THROW(req.validate(), std::invalid_argument);
  req.n = 1000;
  req.precision = 64;
  EXPECT_THROW(req.validate(), std::invalid_argument);
  req.precision = 256;
  req.depth = 7;
  EXPECT_THROW(req.validate(), std::invalid_argument);
  req.depth = 4;
  EXPECT_NO_THROW(req.validate());
}

TEST(Estimate, M1ConstantAtModerateN) {
  // Error bar at N = 10^5 is about 5e-11; the reference value is the published constant.
  const EstimateResult r = estimate_constant(request("m1", "1/2", 100000));
  EXPECT_NEAR(r.c.to_double(), 1.025737030693254, 1e-9);
  EXPECT_LT(r.error_bar.to_double(), 1e-9);
  EXPECT_LE(r.newton_iterations, 10);
  EXPECT_FALSE(r.note.has_value());
}

TEST(Estimate, ErrorBarBoundsTheActualError) {
  const EstimateResult coarse = estimate_constant(request("m1", "1/2", 20000));
  const EstimateResult fine = estimate_constant(request("m1", "1/2", 400000));
  EXPECT_LT(abs(coarse.c - fine.c), coarse.error_bar * 2);
}

TEST(Estimate, DomainErrorPropagates) {
  EXPECT_THROW(estimate_constant(request("m1", "2", 1000)), DomainError);
}

TEST(Estimate, MapsWithoutExpansionAreRejected) {
  EXPECT_THROW(estimate_constant(request("rcf", "1", 1000)), TemplateError);
}

TEST(Estimate, M5IsMarkedWithoutReference) {
  EstimateRequest req = request("m5", "1", 20000);
  req.depth = 3;
  const EstimateResult r = estimate_constant(req);
  EXPECT_EQ(r.note, std::optional<std::string>("[no reference]"));
  EXPECT_GT(r.c.to_double(), 0.0);
}

TEST(Estimate, ReportedDigitsRespectErrorBar) {
  EstimateResult r;
  r.precision = 256;
  r.c = dec("1.234567891234");
  r.error_bar = dec("3e-7");
  EXPECT_EQ(r.reported_decimals(), 6);
  EXPECT_EQ(r.c_text(), "1.234567");
  r.error_bar = BigFloat(0, kPrec);
  EXPECT_EQ(r.reported_decimals(), 74);
}

TEST(Estimate, IrrationalParameterUsesScaledTemplate) {
  const MapSpec map = make_map("m4", ScalarExpr::parse("sqrt(2)"));
  const AsymptoticTemplate t = template_for(map, 4, TemplateSource::Derived);
  ASSERT_TRUE(t.scale.has_value());
  // S_a(k; C) = sqrt(a) S_1(k; C / sqrt(a)).
  const AsymptoticTemplate base = derive_coefficients(make_map("m4"), 4).tmpl;
  const BigFloat c = dec("0.7");
  const BigFloat ra = sqrt(sqrt(BigFloat(2, kPrec)));
  const BigFloat lhs = eval_template(t, c, 1000, kPrec);
  const BigFloat rhs = ra * eval_template(base, c / ra, 1000, kPrec);
  EXPECT_LT(abs(lhs - rhs), power_of_two(-200, kPrec));
}

TEST(Estimate, BuiltinTemplateSelection) {
  const MapSpec m2 = make_map("m2");
  EXPECT_EQ(template_for(m2, 4, TemplateSource::Builtin).source, "builtin");
  EXPECT_EQ(template_for(m2, 4, TemplateSource::Derived).source, "derived");
  EXPECT_THROW(template_for(make_map("m5"), 4, TemplateSource::Builtin), TemplateError);
  EXPECT_EQ(parse_template_source("builtin"), TemplateSource::Builtin);
  EXPECT_THROW(parse_template_source("other"), std::invalid_argument);
}

TEST(Table, SmallTableRowMinimaAndSymmetry) {
  const ConstantTable table = build_table(20000, kPrec);
  ASSERT_EQ(table.cells.size(), 3u);
  EXPECT_TRUE(table.starred(0, 0));
  EXPECT_TRUE(table.starred(1, 1));
  EXPECT_TRUE(table.starred(2, 2));
  const CheckReport report = verify_table_identities(table, 1e-6);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.entries.size(), 15u);
}

TEST(Table, CitedValuesComparedAtTheirOwnPrecision) {
  EXPECT_TRUE(matches_cited(dec("1.3615711875"), "1.36157"));
  EXPECT_FALSE(matches_cited(dec("1.3615751"), "1.36157"));
  EXPECT_TRUE(matches_cited(dec("0.5389343224"), "0.538934322"));
  EXPECT_FALSE(matches_cited(dec("0.5389343244"), "0.538934322"));
}

TEST(Table, ReferenceLayout) {
  const ReferenceTable& ref = reference_table();
  ASSERT_EQ(ref.values.size(), 3u);
  EXPECT_EQ(ref.values[1][1], "0.609222829204782");
  EXPECT_EQ(ref.starred, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ExactIdentities, HoldAtSmallCaps) {
  ExactIdentityOptions options;
  options.m4_k = 8;
  options.logistic_k = 8;
  options.m2_k = 8;
  const CheckReport report = verify_exact_identities(options);
  for (const auto& e : report.entries) EXPECT_TRUE(e.passed) << e.name << ": " << e.detail;
  EXPECT_GE(report.entries.size(), 12u);
}

TEST(Oracles, AllOracleChecksPass) {
  const CheckReport report = check_oracles(kPrec);
  for (const auto& e : report.entries) EXPECT_TRUE(e.passed) << e.name << ": " << e.detail;
}

TEST(Limits, ClassicalLimitsConverge) {
  const CheckReport report = check_classical_limits(kPrec);
  for (const auto& e : report.entries) EXPECT_TRUE(e.passed) << e.name << ": " << e.detail;
}

TEST(Residual, ScanFallsLikeTheNextBlock) {
  const ResidualScan scan = residual_scan(request("m1", "1/2", 100000));
  ASSERT_EQ(scan.rows.size(), 3u);
  EXPECT_EQ(scan.rows.front().first, 1000u);
  EXPECT_LT(scan.rows[1].second, scan.rows[0].second);
  EXPECT_LT(scan.rows[2].second, scan.rows[1].second);
}

TEST(FitSlope, ExactLine) {
  EXPECT_NEAR(fit_slope({1, 2, 3, 4}, {3, 1, -1, -3}), -2.0, 1e-12);
}

TEST(Properties, ErrorBarShrinksLikeCubeOfN) {
  // Scaled-down property run; the full run is part of the acceptance suite.
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::uint64_t n : {10000ULL, 40000ULL, 160000ULL}) {
    const EstimateResult r = estimate_constant(request("m3", "1/2", n));
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(r.error_bar.to_double()));
  }
  EXPECT_NEAR(fit_slope(lx, ly), -3.0, 0.4);
}
