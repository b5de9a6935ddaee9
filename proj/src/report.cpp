#include "mapconst/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mapconst {

namespace {

using Json = nlohmann::ordered_json;

Json header(std::string_view command) {
  Json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["command"] = command;
  return doc;
}

void add_timing(Json& doc, const Timing& millis) {
  if (millis) doc["timing"] = Json{{"runtimeMillis", *millis}};
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string md_cell(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

Json request_json(const EstimateRequest& req) {
  Json r;
  r["map"] = req.map_id;
  r["x0"] = req.x0.text();
  if (req.a) r["a"] = req.a->text();
  r["N"] = req.n;
  r["precision"] = req.precision;
  r["depth"] = req.depth;
  r["template"] = to_string(req.source);
  return r;
}

std::string timing_line(const Timing& millis) {
  return millis ? "\nruntime: " + std::to_string(*millis) + " ms\n" : std::string();
}

bool sqrt2_multiple(const CoefficientPoly& coeff) {
  if (coeff.is_zero()) return false;
  return std::all_of(coeff.coefficients().begin(), coeff.coefficients().end(),
                     [](const QSqrt2& c) { return c.rational_part() == 0; });
}

}  // namespace

std::string to_string(Format format) {
  switch (format) {
    case Format::Json:
      return "json";
    case Format::Markdown:
      return "md";
    case Format::Csv:
      return "csv";
  }
  return "json";
}

Format parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "md") return Format::Markdown;
  if (text == "csv") return Format::Csv;
  throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected json, md or csv)");
}

std::string render_estimate(const EstimateRequest& req, const EstimateResult& result, Format format,
                            const Timing& millis) {
  switch (format) {
    case Format::Json: {
      Json doc = header("estimate");
      doc["request"] = request_json(req);
      Json r;
      r["C"] = result.c_text();
      r["errorBar"] = result.error_bar_text();
      r["decimals"] = result.reported_decimals();
      r["newtonIterations"] = result.newton_iterations;
      r["residualAtN"] = result.residual_text();
      if (result.note) r["reference"] = *result.note;
      doc["result"] = r;
      add_timing(doc, millis);
      return dump(doc);
    }
    case Format::Markdown: {
      std::ostringstream os;
      os << "| field | value |\n|---|---|\n";
      os << "| map | " << req.map_id << " |\n";
      if (req.a) os << "| a | " << req.a->text() << " |\n";
      os << "| x0 | " << req.x0.text() << " |\n";
      os << "| N | " << req.n << " |\n";
      os << "| precision | " << req.precision << " |\n";
      os << "| depth | " << req.depth << " |\n";
      os << "| template | " << to_string(req.source) << " |\n";
      os << "| C | " << result.c_text() << " ± " << result.error_bar_text() << " |\n";
      os << "| Newton iterations | " << result.newton_iterations << " |\n";
      os << "| residual at N | " << result.residual_text() << " |\n";
      if (result.note) os << "| reference | " << *result.note << " |\n";
      os << timing_line(millis);
      return os.str();
    }
    case Format::Csv: {
      std::ostringstream os;
      os << "map,a,x0,N,precision,depth,template,C,error_bar,newton_iterations,residual_at_N\n";
      os << req.map_id << ',' << csv_field(req.a ? req.a->text() : "") << ',' << csv_field(req.x0.text()) << ','
         << req.n << ',' << req.precision << ',' << req.depth << ',' << to_string(req.source) << ','
         << result.c_text() << ',' << result.error_bar_text() << ',' << result.newton_iterations << ','
         << result.residual_text() << '\n';
      return os.str();
    }
  }
  return {};
}

std::string render_table(std::uint64_t n, Precision prec, TemplateSource source, const ConstantTable& table,
                         Format format, const Timing& millis) {
  const std::size_t rows = table.a_labels.size();
  const std::size_t cols = table.b_labels.size();
  switch (format) {
    case Format::Json: {
      Json doc = header("table");
      doc["request"] = Json{{"N", n}, {"precision", prec}, {"template", to_string(source)}};
      Json out_rows = Json::array();
      for (std::size_t i = 0; i < rows; ++i) {
        Json cells = Json::array();
        for (std::size_t j = 0; j < cols; ++j) {
          const auto& cell = table.at(i, j);
          cells.push_back(Json{{"b", table.b_labels[j]},
                               {"C", cell.c_text()},
                               {"errorBar", cell.error_bar_text()},
                               {"star", table.starred(i, j)}});
        }
        out_rows.push_back(Json{{"a", table.a_labels[i]}, {"cells", cells}});
      }
      doc["result"] = Json{{"rows", out_rows}};
      add_timing(doc, millis);
      return dump(doc);
    }
    case Format::Markdown: {
      std::ostringstream os;
      os << "| a \\ b |";
      for (const auto& b : table.b_labels) os << ' ' << b << " |";
      os << "\n|---|";
      for (std::size_t j = 0; j < cols; ++j) os << "---|";
      os << '\n';
      for (std::size_t i = 0; i < rows; ++i) {
        os << "| " << table.a_labels[i] << " |";
        for (std::size_t j = 0; j < cols; ++j) {
          const auto& cell = table.at(i, j);
          os << ' ' << cell.c_text() << (table.starred(i, j) ? "*" : "") << " ± " << cell.error_bar_text() << " |";
        }
        os << '\n';
      }
      os << timing_line(millis);
      return os.str();
    }
    case Format::Csv: {
      std::ostringstream os;
      os << "a,b,C,error_bar,star\n";
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          const auto& cell = table.at(i, j);
          os << table.a_labels[i] << ',' << table.b_labels[j] << ',' << cell.c_text() << ','
             << cell.error_bar_text() << ',' << (table.starred(i, j) ? "true" : "false") << '\n';
        }
      }
      return os.str();
    }
  }
  return {};
}

std::string render_checks(const CheckReport& report, Format format, const Timing& millis) {
  const auto passed = std::count_if(report.entries.begin(), report.entries.end(),
                                    [](const CheckEntry& e) { return e.passed; });
  switch (format) {
    case Format::Json: {
      Json doc = header("verify");
      doc["request"] = Json{{"suite", report.suite}};
      Json entries = Json::array();
      for (const auto& e : report.entries) {
        entries.push_back(Json{{"name", e.name}, {"passed", e.passed}, {"detail", e.detail}});
      }
      doc["result"] = Json{{"suite", report.suite},
                           {"passed", report.passed()},
                           {"passedCount", passed},
                           {"total", report.entries.size()},
                           {"entries", entries}};
      add_timing(doc, millis);
      return dump(doc);
    }
    case Format::Markdown: {
      std::ostringstream os;
      os << "| check | result | detail |\n|---|---|---|\n";
      for (const auto& e : report.entries) {
        os << "| " << md_cell(e.name) << " | " << (e.passed ? "PASS" : "FAIL") << " | " << md_cell(e.detail) << " |\n";
      }
      os << "\n" << report.suite << ": " << passed << "/" << report.entries.size() << " passed\n";
      os << timing_line(millis);
      return os.str();
    }
    case Format::Csv: {
      std::ostringstream os;
      os << "check,passed,detail\n";
      for (const auto& e : report.entries) {
        os << csv_field(e.name) << ',' << (e.passed ? "true" : "false") << ',' << csv_field(e.detail) << '\n';
      }
      return os.str();
    }
  }
  return {};
}

std::string render_residual(const EstimateRequest& req, const ResidualScan& scan, Format format,
                            const Timing& millis) {
  constexpr int kDigits = 20;
  switch (format) {
    case Format::Json: {
      Json doc = header("residual");
      doc["request"] = request_json(req);
      Json rows = Json::array();
      for (const auto& [k, r] : scan.rows) rows.push_back(Json{{"k", k}, {"abs_residual", r.to_scientific(kDigits)}});
      doc["result"] = Json{{"C", scan.c.to_scientific(kDigits)}, {"rows", rows}};
      add_timing(doc, millis);
      return dump(doc);
    }
    case Format::Markdown: {
      std::ostringstream os;
      os << "| k | abs_residual |\n|---|---|\n";
      for (const auto& [k, r] : scan.rows) os << "| " << k << " | " << r.to_scientific(kDigits) << " |\n";
      os << timing_line(millis);
      return os.str();
    }
    case Format::Csv: {
      std::ostringstream os;
      os << "k,abs_residual\n";
      for (const auto& [k, r] : scan.rows) os << k << ',' << r.to_scientific(kDigits) << '\n';
      return os.str();
    }
  }
  return {};
}

std::string display_coefficient(const CoefficientPoly& coeff) {
  if (!sqrt2_multiple(coeff)) return coeff.str();
  const CoefficientPoly scaled = coeff * QSqrt2::sqrt2();
  const std::string body = scaled.str();
  return (body.find(' ') == std::string::npos ? body : "(" + body + ")") + "·(1/sqrt2)";
}

std::string render_derivation(const Derivation& derivation, const std::optional<TemplateComparison>& check,
                              std::optional<Format> format) {
  const AsymptoticTemplate& t = derivation.tmpl;
  std::vector<std::string> report_lines;
  {
    std::istringstream is(derivation.report.str());
    for (std::string line; std::getline(is, line);) report_lines.push_back(line);
  }
  switch (format.value_or(Format::Markdown)) {
    case Format::Json: {
      Json doc = header("derive");
      Json request{{"map", t.map_id}};
      if (t.parameter) request["a"] = *t.parameter;
      request["depth"] = t.depth;
      doc["request"] = request;
      Json result;
      result["template"] = Json::parse(template_to_json(t));
      result["consistency"] = report_lines;
      result["consistent"] = derivation.report.ok();
      if (check) {
        result["builtinMatch"] = check->match;
        result["mismatches"] = check->mismatches;
      }
      doc["result"] = result;
      return dump(doc);
    }
    case Format::Csv: {
      std::ostringstream os;
      os << "exponent,log_power,name,coefficient\n";
      for (std::size_t i = 0; i < t.terms.size(); ++i) {
        const auto& term = t.terms[i];
        os << to_string(term.exponent) << ',' << term.log_power << ',' << t.coefficient_name(i) << ','
           << csv_field(term.coeff.str()) << '\n';
      }
      return os.str();
    }
    case Format::Markdown:
      break;
  }
  std::ostringstream os;
  os << t.canonical_text();
  for (std::size_t i = 0; i < t.terms.size(); ++i) {
    const std::string name = t.coefficient_name(i);
    if (!name.empty()) os << name << " = " << display_coefficient(t.terms[i].coeff) << '\n';
  }
  for (const auto& line : report_lines) os << line << '\n';
  if (check) {
    for (const auto& m : check->mismatches) os << "mismatch " << m << '\n';
    os << "builtin match: " << (check->match ? "true" : "false") << '\n';
  }
  if (format) return "```text\n" + os.str() + "```\n";
  return os.str();
}

}  // namespace mapconst
