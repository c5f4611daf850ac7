/*
 * Copyright 2026 The pivotci Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PIVOTCI_IO_HPP_
#define PIVOTCI_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pivotci/censoring.hpp"
#include "pivotci/pivot.hpp"
#include "pivotci/simulation.hpp"

namespace pivotci {

/// Version stamped into every JSON document this library writes.
inline constexpr int kSchemaVersion = 1;

/// Text form of a number: `inf`, `-inf`, `nan` or %.{precision}g.
inline std::string format_number(double x, int precision = 10) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

/// JSON value of a number rounded to `precision` significant digits; null
/// for NaN and infinities, which JSON cannot represent.
inline nlohmann::json json_number(double x, int precision = 10) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x, precision));
}

/// A life-test outcome together with the scheme it was observed under:
/// {"schema_version", "n", "T", "r"?, "d", "stop_time", "failures"}.
struct OutcomeRecord {
  int n = 1;
  double T = 1.0;
  std::optional<int> r;
  LifeTestOutcome outcome;
};

inline nlohmann::json to_json(const OutcomeRecord& rec) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = rec.n;
  j["T"] = rec.T;
  if (rec.r) j["r"] = *rec.r;
  j["d"] = rec.outcome.d();
  j["stop_time"] = rec.outcome.stop_time;
  j["failures"] = rec.outcome.failures;
  return j;
}

inline OutcomeRecord outcome_from_json(const nlohmann::json& j) {
  try {
    OutcomeRecord rec;
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
      throw std::invalid_argument("unsupported schema_version");
    rec.n = j.at("n").get<int>();
    rec.T = j.at("T").get<double>();
    if (j.contains("r") && !j.at("r").is_null()) rec.r = j.at("r").get<int>();
    rec.outcome.failures = j.at("failures").get<std::vector<double>>();
    std::sort(rec.outcome.failures.begin(), rec.outcome.failures.end());
    rec.outcome.stop_time = j.contains("stop_time") ? j.at("stop_time").get<double>() : rec.T;
    if (j.contains("d") && j.at("d").get<int>() != rec.outcome.d())
      throw std::invalid_argument("field d disagrees with the number of failures");
    rec.outcome.validate();
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed life-test outcome: ") + e.what());
  }
}

inline nlohmann::json to_json(const ConfidenceResult& ci, int precision = 10) {
  auto clamp_name = [](Clamp c) {
    return c == Clamp::none ? "none" : c == Clamp::at_lower ? "lower_bound" : "upper_bound";
  };
  nlohmann::json j;
  j["lower"] = json_number(ci.lower, precision);
  j["upper"] = json_number(ci.upper, precision);
  j["lower_infinite"] = std::isinf(ci.lower);
  j["upper_infinite"] = std::isinf(ci.upper);
  j["lower_clamped"] = ci.lower_clamped();
  j["upper_clamped"] = ci.upper_clamped();
  j["lower_clamp"] = clamp_name(ci.lower_clamp);
  j["upper_clamp"] = clamp_name(ci.upper_clamp);
  j["degenerate"] = ci.degenerate();
  j["empty"] = ci.empty();
  j["alpha1"] = json_number(ci.alpha1, precision);
  j["alpha2"] = json_number(ci.alpha2, precision);
  return j;
}

inline nlohmann::json to_json(const StudyReport& r, int precision = 10) {
  nlohmann::json j;
  j["coverage_hat"] = json_number(r.coverage_hat, precision);
  j["coverage_se"] = json_number(r.coverage_se, precision);
  j["p_infty_hat"] = json_number(r.p_infty_hat, precision);
  j["p_empty_hat"] = json_number(r.p_empty_hat, precision);
  j["envelope_bound"] = json_number(r.envelope_bound, precision);
  j["mean_finite_width"] = json_number(r.mean_finite_width, precision);
  j["proper_fraction"] = json_number(r.proper_fraction, precision);
  j["replications_used"] = r.replications_used;
  j["rejected_draws"] = r.rejected_draws;
  return j;
}

/// Column order of the one-row CSV form of a StudyReport.
inline const std::vector<std::string>& study_csv_columns() {
  static const std::vector<std::string> cols{"coverage_hat",   "coverage_se",       "p_infty_hat",
                                             "p_empty_hat",    "envelope_bound",    "mean_finite_width",
                                             "proper_fraction", "replications_used"};
  return cols;
}

/// Header line plus one data row.
inline std::string to_csv(const StudyReport& r, int precision = 10) {
  std::string out;
  const auto& cols = study_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  const double values[] = {r.coverage_hat,   r.coverage_se,       r.p_infty_hat,     r.p_empty_hat,
                           r.envelope_bound, r.mean_finite_width, r.proper_fraction};
  for (double v : values) out += format_number(v, precision) + ",";
  out += std::to_string(r.replications_used) + '\n';
  return out;
}

} // namespace pivotci

#endif // PIVOTCI_IO_HPP_
