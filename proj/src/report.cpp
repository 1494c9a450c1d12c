#include "romi/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "romi/digest.hpp"
#include "romi/errors.hpp"

namespace romi {

namespace {

std::string fmt_full(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt1(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string fmt_hex(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s, const char* what) {
  if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError(std::string("CSV field \"") + s + "\" is not a valid " + what);
  return v;
}

const char* kCsvHeader =
    "scenario,design,reps,indication,pct_high,pct_low,pct_none,se_high,se_low,"
    "se_none,pct_dropped_stage1,pct_terminated_interim,pct_no_acceptable,avg_n,"
    "csp,csp_se,avg_total_n,digest";

}  // namespace

std::string report_markdown(const std::vector<OperatingCharacteristics>& rows) {
  std::ostringstream out;
  std::string cur_scenario;
  bool first = true;
  for (const auto& oc : rows) {
    if (first || oc.scenario != cur_scenario) {
      cur_scenario = oc.scenario;
      if (!first) out << "\n";
      first = false;
      out << "### Scenario " << cur_scenario << " (" << oc.n_reps
          << " replications)\n\n";
      out << "| Design |";
      for (const auto& io : oc.indications)
        out << " " << io.name << ": %d_H | " << io.name << ": %d_L |";
      out << " CSP | N |\n";
      out << "|---|";
      for (size_t i = 0; i < oc.indications.size(); ++i) out << "---|---|";
      out << "---|---|\n";
    }
    out << "| " << oc.design << " |";
    for (const auto& io : oc.indications)
      out << " " << fmt1(io.pct_high) << " | " << fmt1(io.pct_low) << " |";
    out << " " << fmt1(oc.csp) << " | " << fmt1(oc.avg_total_n) << " |\n";
  }
  return out.str();
}

std::string report_csv(const std::vector<OperatingCharacteristics>& rows) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& oc : rows) {
    for (const auto& io : oc.indications) {
      out << csv_escape(oc.scenario) << ',' << csv_escape(oc.design) << ','
          << oc.n_reps << ',' << csv_escape(io.name) << ','
          << fmt_full(io.pct_high) << ',' << fmt_full(io.pct_low) << ','
          << fmt_full(io.pct_none) << ',' << fmt_full(io.se_high) << ','
          << fmt_full(io.se_low) << ',' << fmt_full(io.se_none) << ','
          << fmt_full(io.pct_dropped_stage1) << ','
          << fmt_full(io.pct_terminated_interim) << ','
          << fmt_full(io.pct_no_acceptable) << ',' << fmt_full(io.avg_n) << ','
          << fmt_full(oc.csp) << ',' << fmt_full(oc.csp_se) << ','
          << fmt_full(oc.avg_total_n) << ',' << fmt_hex(oc.digest) << "\n";
    }
  }
  return out.str();
}

std::vector<OperatingCharacteristics> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ConfigError("CSV header does not match the report schema");
  std::vector<OperatingCharacteristics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 18)
      throw ConfigError("CSV row has " + std::to_string(f.size()) +
                        " fields, expected 18");
    bool new_block = out.empty() || out.back().scenario != f[0] ||
                     out.back().design != f[1];
    if (new_block) {
      OperatingCharacteristics oc;
      oc.scenario = f[0];
      oc.design = f[1];
      oc.n_reps = std::strtol(f[2].c_str(), nullptr, 10);
      oc.csp = parse_num(f[14], "csp");
      oc.csp_se = parse_num(f[15], "csp_se");
      oc.avg_total_n = parse_num(f[16], "avg_total_n");
      oc.digest = std::strtoull(f[17].c_str(), nullptr, 16);
      out.push_back(oc);
    }
    IndicationOC io;
    io.name = f[3];
    io.pct_high = parse_num(f[4], "pct_high");
    io.pct_low = parse_num(f[5], "pct_low");
    io.pct_none = parse_num(f[6], "pct_none");
    io.se_high = parse_num(f[7], "se_high");
    io.se_low = parse_num(f[8], "se_low");
    io.se_none = parse_num(f[9], "se_none");
    io.pct_dropped_stage1 = parse_num(f[10], "pct_dropped_stage1");
    io.pct_terminated_interim = parse_num(f[11], "pct_terminated_interim");
    io.pct_no_acceptable = parse_num(f[12], "pct_no_acceptable");
    io.avg_n = parse_num(f[13], "avg_n");
    out.back().indications.push_back(io);
  }
  return out;
}

std::string run_manifest(const RunConfig& rc, const std::vector<std::string>& outputs,
                         std::string_view version) {
  std::string canonical = canonical_run_json(rc);
  nlohmann::ordered_json j;
  j["version"] = std::string(version);
  j["seed"] = rc.seed;
  j["reps"] = rc.n_reps;
  j["config_hash"] = "fnv64:" + fmt_hex(fnv64(canonical));
  j["config"] = nlohmann::ordered_json::parse(canonical);
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

}  // namespace romi
