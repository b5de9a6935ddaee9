#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mapconst/estimator.hpp"
#include "mapconst/symbolic.hpp"

using namespace mapconst;

namespace {

constexpr Precision kPrec = 256;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& note) {
    passed = passed && ok;
    notes.push_back((ok ? "ok: " : "FAILED: ") + note);
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

BigFloat dec(const std::string& text, Precision prec = kPrec) { return BigFloat::from_string(text, prec); }

std::string sci(const BigFloat& x) { return x.to_scientific(3); }

EstimateResult run_estimate(const char* map, const char* x0, std::uint64_t n, const char* a = nullptr) {
  EstimateRequest req;
  req.map_id = map;
  req.x0 = ScalarExpr::parse(x0);
  if (a != nullptr) req.a = ScalarExpr::parse(a);
  req.n = n;
  req.precision = kPrec;
  req.depth = 4;
  return estimate_constant(req);
}

void expect_constant(Outcome& out, const char* label, const char* map, const char* x0, const char* reference,
                     double tolerance, double time_limit, std::uint64_t n = 1'000'000, const char* a = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  const EstimateResult r = run_estimate(map, x0, n, a);
  const double elapsed = seconds_since(start);
  const BigFloat diff = abs(r.c - dec(reference));
  out.check(diff.to_double() <= tolerance, std::string(label) + " |C - " + reference + "| = " + sci(diff));
  out.check(elapsed < time_limit, std::string(label) + " runtime " + std::to_string(elapsed) + " s");
}

std::string read_golden(const std::string& relative) {
  std::ifstream in(std::string(MAPCONST_GOLDEN_DIR) + "/" + relative);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void add_report(Outcome& out, const CheckReport& report) {
  for (const auto& e : report.entries) out.check(e.passed, e.name + " (" + e.detail + ")");
}

Outcome constants_m1() {
  Outcome out;
  expect_constant(out, "m1 x0=1/2", "m1", "1/2", "1.025737030693254", 1e-12, 10.0);
  expect_constant(out, "m1 x0=1/3", "m1", "1/3", "0.787336122933677", 1e-12, 10.0);
  return out;
}

Outcome constant_m2() {
  Outcome out;
  expect_constant(out, "m2 x0=0", "m2", "0", "1.354567323982625", 1e-12, 10.0);
  const EstimateResult m1 = run_estimate("m1", "1/2", 1'000'000);
  const BigFloat diff = abs(m1.c * 8 - dec("8.205896246"));
  out.check(diff.to_double() <= 1e-8, "|8 C_m1(1/2) - 8.205896246| = " + sci(diff));
  return out;
}

Outcome constants_m3() {
  Outcome out;
  expect_constant(out, "m3 x0=1/2", "m3", "1/2", "1.709211474227594", 1e-12, 10.0);
  expect_constant(out, "m3 x0=1/sqrt(3)", "m3", "1/sqrt(3)", "1.574672245867354", 1e-12, 10.0);
  const EstimateResult r = run_estimate("m3", "1/sqrt(3)", 1'000'000);
  const std::string five = r.c.to_scientific(5);
  out.check(five.rfind("1.5747", 0) == 0 && dec("1.57468").to_scientific(5).rfind("1.5747", 0) == 0,
            "5 significant digits " + five + " vs 1.57468");
  return out;
}

Outcome constant_m4() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const EstimateResult r = run_estimate("m4", "1", 10'000'000, "1");
  const double elapsed = seconds_since(start);
  const std::string digits = r.c.to_fixed_truncated(15);
  out.check(digits == "0.609222829204782", "first 15 digits " + digits);
  const BigFloat diff = abs(r.c - dec("0.6092228292047829402293060"));
  out.check(diff.to_double() < 1e-15, "|C - 0.6092228292047829402293060| = " + sci(diff));
  out.check(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s");
  return out;
}

Outcome table() {
  Outcome out;
  const ConstantTable t = build_table(1'000'000, kPrec);
  add_report(out, verify_table(t, 1e-10));
  // Cells against values typed in here, independent of reference_table().
  const char* expected[3][3] = {{"0.430785593784355", "0.538934324436812", "0.930785593784355"},
                                {"0.762168230846922", "0.609222829204782", "0.762168230846922"},
                                {"1.861571187568711", "1.077868648873625", "0.861571187568711"}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const BigFloat diff = abs(t.at(i, j).c - dec(expected[i][j]));
      out.check(diff.to_double() <= 1e-10 + 1e-15, "cell " + t.a_labels[i] + "," + t.b_labels[j] + " " + sci(diff));
    }
    out.check(t.starred(i, i), "star on diagonal of row " + t.a_labels[i]);
  }
  return out;
}

Outcome derivation() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    const char* stem;
    const char* map;
    const char* a;
  };
  const Case cases[] = {{"m1", "m1", nullptr},     {"m2", "m2", nullptr},  {"m3", "m3", nullptr},
                        {"m4_a1_2", "m4", "1/2"},  {"m4_a1", "m4", "1"},   {"m4_a2", "m4", "2"}};
  for (const Case& c : cases) {
    const MapSpec map = c.a ? make_map(c.map, ScalarExpr::parse(c.a)) : make_map(c.map);
    const std::string derived = derive_coefficients(map, 4).tmpl.canonical_text();
    out.check(derived == read_golden(std::string("published/") + c.stem + ".txt"),
              std::string("derived ") + c.stem + " equals published golden file");
  }
  const std::string a1 = derive_coefficients(make_map("m4", ScalarExpr::parse("1")), 4).tmpl.canonical_text();
  out.check(a1 == read_golden("published/m4_display.txt"), "derived m4 a=1 equals the a=1 display");
  const double elapsed = seconds_since(start);
  out.check(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
  return out;
}

Outcome exact_identities() {
  Outcome out;
  add_report(out, verify_exact_identities());
  return out;
}

Outcome oracles() {
  Outcome out;
  const Rational x0 = ratio(3, 5);
  const auto rcf = run_exact(make_map("rcf"), x0, 200);
  bool rcf_ok = rcf.values.size() == 201;
  for (std::size_t k = 0; rcf_ok && k <= 200; ++k) rcf_ok = rcf.values[k] == x0 / (1 + Rational(k) * x0 * x0);
  out.check(rcf_ok, "rcf equals x0/(1+k x0^2) for k <= 200");
  const Rational s0 = ratio(5, 3);
  const auto sq = run_exact(make_map("sq"), s0, 12);
  bool sq_ok = sq.values.size() == 13;
  for (std::size_t k = 0; sq_ok && k <= 12; ++k) {
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), mpz_class(5).get_mpz_t(), 1UL << k);
    mpz_pow_ui(den.get_mpz_t(), mpz_class(3).get_mpz_t(), 1UL << k);
    sq_ok = sq.values[k] == Rational(num, den);
  }
  out.check(sq_ok, "sq equals x0^(2^k) for k <= 12");

  std::vector<std::uint64_t> every(100);
  for (std::uint64_t k = 0; k < 100; ++k) every[k] = k + 1;
  auto reaches = [&](const char* name, const char* x0_text, const BigFloat& limit) {
    const Trajectory t = iterate(make_map(name), ScalarExpr::parse(x0_text), 100, kPrec, every);
    std::uint64_t hit = 0;
    for (const auto& [k, x] : t.checkpoints) {
      if (abs(x - limit) < dec("1e-30")) {
        hit = k;
        break;
      }
    }
    out.check(hit != 0, std::string(name) + " within 1e-30 of its limit at k=" + std::to_string(hit));
  };
  const BigFloat two(2, kPrec);
  // Positive root of L^2 = 2L + 1.
  reaches("cf", "2", sqrt(two) + 1);
  // 1 + 2^(1/3) + 2^(2/3).
  const BigFloat cbrt2 = exp(log(two) / 3);
  reaches("bcf", "3", cbrt2 * cbrt2 + cbrt2 + 1);
  add_report(out, check_oracles(kPrec));
  return out;
}

Outcome newton_limits() {
  Outcome out;
  constexpr Precision p = 512;
  // Direct iteration of x -> x/2 + r/(2x) (Newton for sqrt r), independent of the map registry.
  auto run = [&](long radicand, long base_int, long base_root) {
    const BigFloat s = sqrt(BigFloat(radicand, p));
    const BigFloat target = s * 2;
    const BigFloat base = s * base_root + base_int;
    BigFloat x(2, p);
    std::vector<BigFloat> products;
    for (long n = 0; n <= 7; ++n) {
      products.push_back((x - s) * pow(base, 1L << n));
      x = x / 2 + BigFloat(radicand, p) / (x * 2);
    }
    const BigFloat rel = abs(products[6] - target) / target;
    out.check(rel < dec("1e-20", p), "sqrt(" + std::to_string(radicand) + ") product at n=6 relative error " + sci(rel));
    for (std::size_t n = 1; n + 2 < products.size(); ++n) {
      const BigFloat d0 = abs(products[n] - products[n - 1]);
      const BigFloat d1 = abs(products[n + 1] - products[n]);
      const BigFloat q = d1 / (d0 * d0);
      out.check(q < 10, "sqrt(" + std::to_string(radicand) + ") d_" + std::to_string(n + 1) + "/d_" +
                            std::to_string(n) + "^2 = " + sci(q));
    }
  };
  run(2, 3, 2);
  run(3, 7, 4);
  add_report(out, check_classical_limits(p));
  return out;
}

Outcome properties() {
  Outcome out;
  add_report(out, check_scaling_properties());
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 m1 constants", constants_m1},
      {"2 m2 constant and cross-check", constant_m2},
      {"3 m3 constants", constants_m3},
      {"4 m4 constant at N=1e7", constant_m4},
      {"5 C(a,b) table", table},
      {"6 symbolic derivation vs published coefficients", derivation},
      {"7 exact identities", exact_identities},
      {"8 oracles", oracles},
      {"9 Newton limits", newton_limits},
      {"10 property suite", properties},
  };
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome.check(false, std::string("exception: ") + e.what());
    }
    all = all && outcome.passed;
    std::cout << (outcome.passed ? "PASS " : "FAIL ") << name << "\n";
    for (const auto& note : outcome.notes) {
      if (!outcome.passed || note.rfind("FAILED", 0) == 0) std::cout << "    " << note << "\n";
    }
    std::cout.flush();
  }
  return all ? 0 : 1;
}
