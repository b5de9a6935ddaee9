#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mapconst/errors.hpp"
#include "mapconst/symbolic.hpp"

using namespace mapconst;

namespace {

std::string read_golden(const std::string& relative) {
  std::ifstream in(std::string(MAPCONST_GOLDEN_DIR) + "/" + relative);
  if (!in) throw std::runtime_error("missing golden file " + relative);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

MapSpec map_for(const std::string& stem) {
  if (stem == "m4_a1_2") return make_map("m4", ScalarExpr::parse("1/2"));
  if (stem == "m4_a1" || stem == "m4_display") return make_map("m4", ScalarExpr::parse("1"));
  if (stem == "m4_a2") return make_map("m4", ScalarExpr::parse("2"));
  return make_map(stem);
}

struct GoldenCase {
  std::string stem;
  int depth;
};

class DerivedGolden : public ::testing::TestWithParam<GoldenCase> {};

}  // namespace

// The derived/ files come from an independent sympy coefficient-matching solve.
TEST_P(DerivedGolden, MatchesIndependentSolve) {
  const auto& param = GetParam();
  const Derivation d = derive_coefficients(map_for(param.stem), param.depth);
  EXPECT_EQ(d.tmpl.canonical_text(), read_golden("derived/" + param.stem + ".txt"));
  EXPECT_TRUE(d.report.ok()) << d.report.str();
}

INSTANTIATE_TEST_SUITE_P(Maps, DerivedGolden,
                         ::testing::Values(GoldenCase{"m1", 4}, GoldenCase{"m2", 4}, GoldenCase{"m3", 4},
                                           GoldenCase{"m4_a1_2", 4}, GoldenCase{"m4_a1", 4}, GoldenCase{"m4_a2", 4},
                                           GoldenCase{"m5", 2}),
                         [](const auto& info) { return info.param.stem; });

// The published/ files transcribe the printed tables in sympy; the builtin
// templates must carry exactly those values.
TEST(BuiltinTemplate, MatchesPublishedTranscription) {
  for (const char* stem : {"m1", "m2", "m3", "m4_a1_2", "m4_a1", "m4_a2"}) {
    EXPECT_EQ(builtin_template(map_for(stem)).canonical_text(), read_golden(std::string("published/") + stem + ".txt"))
        << stem;
  }
}

TEST(BuiltinTemplate, GeneralDisplayAtOneEqualsSpecialCase) {
  EXPECT_EQ(read_golden("published/m4_a1.txt"), read_golden("published/m4_display.txt"));
}

TEST(Derivation, VerifyBuiltinAgreesWhereTablesAreConsistent) {
  EXPECT_TRUE(verify_builtin(make_map("m1")).match);
  EXPECT_TRUE(verify_builtin(make_map("m3")).match);
  EXPECT_TRUE(verify_builtin(make_map("m4")).match);
}

TEST(Derivation, VerifyBuiltinLocatesTheM2Block) {
  const TemplateComparison cmp = verify_builtin(make_map("m2"));
  EXPECT_FALSE(cmp.match);
  ASSERT_TRUE(cmp.first_mismatch.has_value());
  EXPECT_EQ(cmp.first_mismatch->first, Rational(4));
  EXPECT_EQ(cmp.mismatches.size(), 4u);
}

TEST(Derivation, DeeperTemplatesExtendShallowerOnes) {
  for (const char* id : {"m1", "m2", "m3", "m4"}) {
    const MapSpec map = make_map(id);
    const AsymptoticTemplate d6 = derive_coefficients(map, 6).tmpl;
    const AsymptoticTemplate d3 = derive_coefficients(map, 3).tmpl;
    EXPECT_TRUE(compare_templates(d3, d6.truncated(3)).match) << id;
    EXPECT_EQ(d6.terms.size(), 21u) << id;
  }
}

TEST(Derivation, ReportRecordsEveryEquation) {
  const Derivation d = derive_coefficients(make_map("m1"), 4);
  const auto& r = d.report;
  EXPECT_TRUE(r.free_constant_unconstrained);
  EXPECT_TRUE(r.free_slot_identically_zero);
  EXPECT_TRUE(r.residual_vanishes);
  EXPECT_EQ(r.checked_through, Rational(5));
  // One identically satisfied slot plus one solved slot per unknown coefficient.
  std::size_t solved = 0;
  for (const auto& s : r.slots) solved += s.status == SlotRecord::Status::Solved ? 1 : 0;
  EXPECT_EQ(solved, 8u);
  EXPECT_EQ(r.slots.size(), 9u);
  EXPECT_NE(r.str().find("free constant unconstrained: true"), std::string::npos);
}

TEST(Derivation, ResidualOfDerivedTemplateVanishes) {
  // Independent of the derivation: expand S(k+1) - f(S(k)) from the finished template.
  const MapSpec map = make_map("m3");
  const AsymptoticTemplate t = derive_coefficients(map, 4).tmpl;
  LogLaurentSeries s(t.grid);
  for (const auto& term : t.terms) s.add(s.tick_of(term.exponent), term.log_power, term.coeff);
  const Rational top = t.leading().exponent + t.depth;
  const LogLaurentSeries lhs = shift_expand(s, top);
  const LogLaurentSeries rhs = apply_map(map, s, top);
  const LogLaurentSeries diff = lhs - rhs;
  EXPECT_TRUE(diff.truncated(s.tick_of(top)).is_zero()) << diff.truncated(s.tick_of(top)).str();
  // One block further the truncated template no longer balances.
  const Rational beyond = top + 1;
  EXPECT_FALSE((shift_expand(s, beyond) - apply_map(map, s, beyond)).is_zero());
}

TEST(Derivation, M5UsesCubeRootScale) {
  const Derivation d = derive_coefficients(make_map("m5"), 2);
  ASSERT_TRUE(d.tmpl.scale.has_value());
  EXPECT_EQ(d.tmpl.scale->str(), "3^(1/3)");
  EXPECT_EQ(d.tmpl.leading().exponent, ratio(-1, 3));
  const TemplateTerm* log_term = d.tmpl.find(ratio(2, 3), 1);
  ASSERT_NE(log_term, nullptr);
  EXPECT_EQ(log_term->coeff, CoefficientPoly(QSqrt2(ratio(1, 9))));
}

TEST(Derivation, RejectsUnsupportedRequests) {
  EXPECT_THROW(derive_coefficients(make_map("rcf"), 4), TemplateError);
  EXPECT_THROW(derive_coefficients(make_map("m1"), 1), std::invalid_argument);
  EXPECT_THROW(derive_coefficients(make_map("m1"), 7), std::invalid_argument);
  EXPECT_THROW(derive_coefficients(make_map("m4", ScalarExpr::parse("sqrt(3)")), 4), TemplateError);
}

TEST(Derivation, ApplyMapRejectsInitialConditionMaps) {
  LogLaurentSeries s(1);
  s.add(1, 0, QSqrt2(1));
  EXPECT_THROW(apply_map(make_map("rcf"), s, Rational(3)), std::invalid_argument);
}

TEST(Derivation, CompareTemplatesReportsOffsetDifference) {
  const AsymptoticTemplate a = builtin_template(make_map("m1"));
  AsymptoticTemplate b = a;
  b.offset = QSqrt2(1);
  EXPECT_FALSE(compare_templates(a, b).match);
  EXPECT_TRUE(compare_templates(a, a).match);
}
