#include <cstdio>
#include <map>
#include <sstream>

#include "ermstab/cli.hpp"
#include "ermstab/errors.hpp"

namespace ermstab::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> split_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n') ++k;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        records.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw ValidationError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  return records;
}

double parse_double(const std::string& s, const std::string& column, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line) + ": column " + column + " is not a number: '" + s + "'");
  }
}

std::uint64_t parse_count(const std::string& s, const std::string& column, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("line " + std::to_string(line) + ": column " + column + " is not a count: '" + s + "'");
  }
  return std::stoull(s);
}

}  // namespace

std::string write_csv(const std::vector<SeriesRow>& rows, bool rational_column) {
  std::ostringstream out;
  bool first = true;
  for (const char* c : kSeriesColumns) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  if (rational_column) out << ",delta_rational";
  out << '\n';
  for (const auto& r : rows) {
    out << quote(r.scenario) << ',' << r.notion << ',' << quote(r.beta) << ',' << r.m << ',' << format_double(r.delta)
        << ',' << (r.ci_lo ? format_double(*r.ci_lo) : "") << ',' << (r.ci_hi ? format_double(*r.ci_hi) : "") << ','
        << r.engine << ',' << r.trials << ',' << (r.seed ? std::to_string(*r.seed) : "") << ',' << r.i_policy;
    if (rational_column) out << ',' << (r.delta_rational ? *r.delta_rational : "");
    out << '\n';
  }
  return out.str();
}

std::vector<SeriesRow> read_csv(const std::string& text) {
  auto records = split_records(text);
  if (records.empty()) throw ValidationError("empty CSV");
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < records[0].size(); ++k) col[records[0][k]] = k;
  for (const char* c : {"m", "delta"}) {
    if (!col.count(c)) throw ValidationError(std::string("CSV lacks a '") + c + "' column");
  }
  std::vector<SeriesRow> rows;
  for (std::size_t line = 1; line < records.size(); ++line) {
    const auto& rec = records[line];
    if (rec.size() != records[0].size()) {
      throw ValidationError("line " + std::to_string(line + 1) + " has " + std::to_string(rec.size()) +
                            " fields; header has " + std::to_string(records[0].size()));
    }
    auto get = [&](const char* name) -> std::string {
      auto it = col.find(name);
      return it == col.end() ? std::string() : rec[it->second];
    };
    SeriesRow r;
    r.scenario = get("scenario");
    r.notion = get("notion");
    r.beta = get("beta");
    r.m = static_cast<std::size_t>(parse_count(get("m"), "m", line + 1));
    r.delta = parse_double(get("delta"), "delta", line + 1);
    if (auto s = get("ci_lo"); !s.empty()) r.ci_lo = parse_double(s, "ci_lo", line + 1);
    if (auto s = get("ci_hi"); !s.empty()) r.ci_hi = parse_double(s, "ci_hi", line + 1);
    r.engine = get("engine");
    if (auto s = get("trials"); !s.empty()) r.trials = parse_count(s, "trials", line + 1);
    if (auto s = get("seed"); !s.empty()) r.seed = parse_count(s, "seed", line + 1);
    r.i_policy = get("i_policy");
    if (auto s = get("delta_rational"); !s.empty()) r.delta_rational = s;
    rows.push_back(std::move(r));
  }
  return rows;
}

RateSeries series_from_rows(const std::vector<SeriesRow>& rows) {
  RateSeries s;
  for (const auto& r : rows) {
    RatePoint p;
    p.m = static_cast<double>(r.m);
    p.delta = r.delta;
    p.ci_lower = r.ci_lo;
    p.ci_upper = r.ci_hi;
    p.exact = r.engine != "mc";
    s.points.push_back(p);
  }
  return s;
}

json fit_report(const RateSeries& series, const ClassifyConfig& config) {
  const RateSeries used = series.fittable();
  const RateFit fit = classify(used, config);
  return json{
      {"classification", to_string(fit.classification)},
      {"power_law", {{"model", "delta = c * m^(-alpha)"}, {"c", fit.power.coefficient}, {"alpha", fit.power.exponent},
                     {"rss", fit.power.rss}}},
      {"exponential", {{"model", "delta = a * exp(-b * m)"}, {"a", fit.exponential.coefficient},
                       {"b", fit.exponential.rate}, {"rss", fit.exponential.rss}}},
      {"thresholds",
       {{"rss_ratio", config.rss_ratio},
        {"min_exponent", config.min_exponent},
        {"max_exponent", config.max_exponent},
        {"min_span", config.min_span},
        {"min_points", config.min_points},
        {"weighting", config.weighting == Weighting::Unweighted ? "none" : "interval"}}},
      {"points_used", used.points.size()},
      {"points_dropped", series.points.size() - used.points.size()}};
}

}  // namespace ermstab::cli
