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

// pivotci: exact confidence intervals from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pivotci/pivotci.hpp"

namespace {

using namespace pivotci;
using nlohmann::json;

enum Exit { kOk = 0, kValidation = 1, kDegenerate = 2, kNoMle = 3 };

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string model;
  std::optional<int> n, r, d0;
  std::optional<double> T, theta, y, x;
  std::optional<std::string> failures, data;
  double alpha = 0.05;
  std::optional<double> alpha1, alpha2;
  std::string t1 = "-inf", t2 = "inf";
  std::optional<double> restrict_lower, restrict_upper;
  std::string format = "json";
  int precision = 10;
  std::uint64_t seed = 1;
  std::int64_t reps = 100000;
  int streams = 1;
};

double parse_real(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError(what + ": cannot parse '" + s + "' as a number");
  }
  if (pos != s.size()) throw ValidationError(what + ": cannot parse '" + s + "' as a number");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(parse_real(item.substr(b, e - b + 1), "--failures"));
  }
  return out;
}

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw ValidationError(std::string("missing required option ") + flag);
  return *v;
}

bool is_lifetime(const std::string& m) { return m == "type1" || m == "hybrid"; }
bool is_truncated(const std::string& m) { return m == "trunc-normal" || m == "trunc-logistic"; }

std::string fmt(double v, int precision) { return format_number(v, precision); }

// Model resolved from the options.
struct Model {
  std::string name;
  std::optional<TypeIScheme> type1;
  std::optional<HybridTypeIScheme> hybrid;
  int binomial_n = 0;
  PivotedFamily family;
};

Model build_model(const Options& o) {
  Model m;
  m.name = o.model;
  if (o.model == "type1") {
    TypeIScheme s{need(o.n, "--n"), need(o.T, "--T"), o.d0.value_or(1)};
    s.validate();
    m.type1 = s;
    m.family = type1_family(s);
  } else if (o.model == "hybrid") {
    HybridTypeIScheme s{need(o.n, "--n"), need(o.T, "--T"), need(o.r, "--r")};
    s.validate();
    m.hybrid = s;
    m.family = hybrid_family(s);
  } else if (o.model == "binomial") {
    m.binomial_n = need(o.n, "--n");
    m.family = binomial_family(m.binomial_n);
  } else if (is_truncated(o.model)) {
    const auto base = o.model == "trunc-normal" ? LocationBase::normal : LocationBase::logistic;
    m.family = truncated_location_family(base, parse_real(o.t1, "--t1"), parse_real(o.t2, "--t2"));
  } else {
    throw ValidationError("unknown model '" + o.model + "'");
  }
  if (o.restrict_lower || o.restrict_upper) {
    m.family = restricted_family(m.family, o.restrict_lower.value_or(m.family.space.lower),
                                 o.restrict_upper.value_or(m.family.space.upper));
  }
  return m;
}

std::vector<ClosedInterval> model_support(const Model& m) {
  if (m.type1) return support_set(*m.type1);
  if (m.hybrid) return support_set(*m.hybrid);
  throw ValidationError("support is defined for the type1 and hybrid models");
}

// Statistic for ci: theta_hat for lifetime models, x for binomial, y otherwise.
double statistic(const Options& o, const Model& m) {
  if (m.name == "binomial") return need(o.x, "--x");
  if (!is_lifetime(m.name)) return need(o.y, "--y");

  if (o.y && !o.failures && !o.data) return *o.y;
  if (static_cast<int>(o.failures.has_value()) + static_cast<int>(o.data.has_value()) != 1)
    throw ValidationError("give exactly one of --failures, --data or --y");

  std::vector<double> times;
  if (o.failures) {
    times = parse_list(*o.failures);
  } else {
    std::ifstream in(*o.data);
    if (!in) throw ValidationError("cannot open data file " + *o.data);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("data file is not valid JSON: ") + e.what());
    }
    const auto rec = outcome_from_json(j);
    const int n = m.type1 ? m.type1->n : m.hybrid->n;
    const double T = m.type1 ? m.type1->T : m.hybrid->T;
    if (rec.n != n || rec.T != T) throw ValidationError("data file n/T disagree with --n/--T");
    if (m.hybrid && rec.r && *rec.r != m.hybrid->r) throw ValidationError("data file r disagrees with --r");
    times = rec.outcome.failures;
  }

  if (m.type1) {
    const auto out = make_type1_outcome(times, *m.type1);
    if (out.d() == 0) throw NoMleExists();
    if (out.d() < m.type1->d0)
      throw ValidationError("observed " + std::to_string(out.d()) + " failures, fewer than d0 = " +
                            std::to_string(m.type1->d0));
    return mle(out, *m.type1).theta_hat;
  }
  const auto out = make_hybrid_outcome(times, *m.hybrid);
  if (out.d() == 0) throw NoMleExists();
  return mle(out, *m.hybrid).theta_hat;
}

void warn_stability(const Model& m, double y, double theta) {
  if (!std::isfinite(theta) || !(theta > 0.0)) return;
  MixtureEvaluation e{};
  if (m.type1) e = cdf_type1_eval(y, theta, *m.type1);
  else if (m.hybrid) e = cdf_hybrid_eval(y, theta, *m.hybrid);
  else return;
  if (e.stability_warning)
    std::cerr << "warning: CDF evaluation at theta = " << theta
              << " lost precision to cancellation or exceeds the validated range of n\n";
}

json header(const std::string& command, const Options& o) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"model", o.model}};
}

int cmd_ci(const Options& o) {
  const Model m = build_model(o);
  const double stat = statistic(o, m);
  const double a1 = o.alpha1.value_or(o.alpha / 2.0);
  const double a2 = o.alpha2.value_or(o.alpha / 2.0);

  if (is_lifetime(m.name) && !in_support(stat, model_support(m)))
    std::cerr << "warning: statistic " << fmt(stat, o.precision) << " lies outside the support of the MLE\n";

  const ConfidenceResult ci = m.name == "binomial" ? interval_discrete(m.family, a1, a2, stat)
                                                   : interval_continuous(m.family, a1, a2, stat);
  warn_stability(m, stat, ci.lower);
  warn_stability(m, stat, ci.upper);

  if (o.format == "json") {
    json j = header("ci", o);
    j["statistic"] = json_number(stat, o.precision);
    j["interval"] = to_json(ci, o.precision);
    std::cout << j.dump() << '\n';
  } else if (o.format == "csv") {
    std::cout << "statistic,lower,upper,lower_clamped,upper_clamped,degenerate\n"
              << fmt(stat, o.precision) << ',' << fmt(ci.lower, o.precision) << ',' << fmt(ci.upper, o.precision)
              << ',' << ci.lower_clamped() << ',' << ci.upper_clamped() << ',' << ci.degenerate() << '\n';
  } else {
    std::cout << '[' << fmt(ci.lower, o.precision) << ", " << fmt(ci.upper, o.precision) << "]\n";
  }
  if (ci.degenerate()) {
    std::cerr << "interval degenerates at the parameter-space boundary\n";
    return kDegenerate;
  }
  return kOk;
}

int cmd_cdf(const Options& o) {
  const Model m = build_model(o);
  const double theta = need(o.theta, "--theta");
  const double y = m.name == "binomial" ? need(o.x, "--x") : need(o.y, "--y");
  if (!m.family.space.contains(theta)) throw ValidationError("--theta lies outside the parameter space");
  bool warning = false;
  double value = 0.0;
  if (m.type1 && !(o.restrict_lower || o.restrict_upper)) {
    const auto e = cdf_type1_eval(y, theta, *m.type1);
    value = e.value;
    warning = e.stability_warning;
  } else if (m.hybrid && !(o.restrict_lower || o.restrict_upper)) {
    const auto e = cdf_hybrid_eval(y, theta, *m.hybrid);
    value = e.value;
    warning = e.stability_warning;
  } else {
    value = m.family.cdf(y, theta);
  }
  if (warning) std::cerr << "warning: CDF evaluation lost precision to cancellation\n";

  if (o.format == "json") {
    json j = header("cdf", o);
    j["y"] = json_number(y, o.precision);
    j["theta"] = json_number(theta, o.precision);
    j["value"] = json_number(value, o.precision);
    j["stability_warning"] = warning;
    std::cout << j.dump() << '\n';
  } else if (o.format == "csv") {
    std::cout << "y,theta,value\n"
              << fmt(y, o.precision) << ',' << fmt(theta, o.precision) << ',' << fmt(value, o.precision) << '\n';
  } else {
    std::cout << fmt(value, o.precision) << '\n';
  }
  return kOk;
}

int cmd_limits(const Options& o) {
  const Model m = build_model(o);
  const double y = m.name == "binomial" ? need(o.x, "--x") : need(o.y, "--y");
  const double lo = m.family.limit_low(y);
  const double hi = m.family.limit_high(y);
  if (o.format == "json") {
    json j = header("limits", o);
    j["y"] = json_number(y, o.precision);
    j["limit_low"] = json_number(lo, o.precision);
    j["limit_high"] = json_number(hi, o.precision);
    std::cout << j.dump() << '\n';
  } else if (o.format == "csv") {
    std::cout << "y,limit_low,limit_high\n"
              << fmt(y, o.precision) << ',' << fmt(lo, o.precision) << ',' << fmt(hi, o.precision) << '\n';
  } else {
    std::cout << "limit_low " << fmt(lo, o.precision) << "\nlimit_high " << fmt(hi, o.precision) << '\n';
  }
  return kOk;
}

int cmd_support(const Options& o) {
  const Model m = build_model(o);
  const auto parts = model_support(m);
  if (o.format == "json") {
    json j = header("support", o);
    j["intervals"] = json::array();
    for (const auto& p : parts)
      j["intervals"].push_back({json_number(p.lo, o.precision), json_number(p.hi, o.precision)});
    std::cout << j.dump() << '\n';
  } else if (o.format == "csv") {
    std::cout << "lower,upper\n";
    for (const auto& p : parts) std::cout << fmt(p.lo, o.precision) << ',' << fmt(p.hi, o.precision) << '\n';
  } else {
    for (const auto& p : parts) std::cout << '[' << fmt(p.lo, o.precision) << ", " << fmt(p.hi, o.precision) << "]\n";
  }
  return kOk;
}

int cmd_simulate(const Options& o) {
  StudyConfig c;
  const int n = o.n.value_or(10);
  const double T = o.T.value_or(1.0);
  if (o.model == "type1") c.scheme = TypeIScheme{n, T, o.d0.value_or(1)};
  else if (o.model == "hybrid") c.scheme = HybridTypeIScheme{n, T, need(o.r, "--r")};
  else throw ValidationError("simulate supports the type1 and hybrid models");
  c.theta_true = o.theta.value_or(1.0);
  c.alpha1 = o.alpha1.value_or(o.alpha / 2.0);
  c.alpha2 = o.alpha2.value_or(o.alpha / 2.0);
  c.replications = o.reps;
  c.seed = o.seed;
  c.workers = o.streams;
  c.validate();
  const auto r = run_coverage_study(c);

  if (o.format == "json") {
    json j = header("simulate", o);
    j["config"] = {{"n", n},
                   {"T", T},
                   {"theta", c.theta_true},
                   {"alpha1", c.alpha1},
                   {"alpha2", c.alpha2},
                   {"replications", c.replications},
                   {"seed", c.seed}};
    if (o.model == "type1") j["config"]["d0"] = o.d0.value_or(1);
    else j["config"]["r"] = *o.r;
    j["report"] = to_json(r, o.precision);
    std::cout << j.dump() << '\n';
  } else if (o.format == "csv") {
    std::cout << to_csv(r, o.precision);
  } else {
    const auto& cols = study_csv_columns();
    const double values[] = {r.coverage_hat,   r.coverage_se,       r.p_infty_hat,     r.p_empty_hat,
                             r.envelope_bound, r.mean_finite_width, r.proper_fraction};
    for (std::size_t i = 0; i < 7; ++i) std::cout << cols[i] << ' ' << fmt(values[i], o.precision) << '\n';
    std::cout << cols[7] << ' ' << r.replications_used << '\n';
  }
  return kOk;
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "type1 | hybrid | binomial | trunc-normal | trunc-logistic")
      ->required()
      ->check(CLI::IsMember({"type1", "hybrid", "binomial", "trunc-normal", "trunc-logistic"}));
  sub->add_option("--n", o.n, "Items on test, or binomial trials");
  sub->add_option("--T", o.T, "Censoring time");
  sub->add_option("--r", o.r, "Failure count that stops a hybrid test");
  sub->add_option("--d0", o.d0, "Condition on at least d0 failures (type1, default 1)");
  sub->add_option("--t1", o.t1, "Lower truncation point (default -inf)");
  sub->add_option("--t2", o.t2, "Upper truncation point (default inf)");
  sub->add_option("--restrict-lower", o.restrict_lower, "Restrict the parameter space from below");
  sub->add_option("--restrict-upper", o.restrict_upper, "Restrict the parameter space from above");
  sub->add_option("--format", o.format, "json | csv | plain")->check(CLI::IsMember({"json", "csv", "plain"}));
  sub->add_option("--precision", o.precision, "Significant digits")->check(CLI::Range(1, 17));
}

void add_alpha_options(CLI::App* sub, Options& o) {
  sub->add_option("--alpha", o.alpha, "Total error, split equally (default 0.05)");
  sub->add_option("--alpha1", o.alpha1, "Error below the lower endpoint");
  sub->add_option("--alpha2", o.alpha2, "Error above the upper endpoint");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact confidence intervals by inverting a CDF in its parameter"};
  app.require_subcommand(1);
  Options o;

  auto* ci = app.add_subcommand("ci", "Confidence interval for an observed statistic");
  add_model_options(ci, o);
  add_alpha_options(ci, o);
  ci->add_option("--failures", o.failures, "Comma-separated failure times");
  ci->add_option("--data", o.data, "JSON file with a life-test outcome");
  ci->add_option("--y", o.y, "Observed statistic (theta_hat for lifetime models)");
  ci->add_option("--x", o.x, "Binomial success count");

  auto* cdf = app.add_subcommand("cdf", "Evaluate F(y; theta)");
  add_model_options(cdf, o);
  cdf->add_option("--theta", o.theta, "Parameter value");
  cdf->add_option("--y", o.y, "Point of evaluation");
  cdf->add_option("--x", o.x, "Binomial count");

  auto* limits = app.add_subcommand("limits", "Limits of F(y; theta) at the ends of the parameter space");
  add_model_options(limits, o);
  limits->add_option("--y", o.y, "Point of evaluation");
  limits->add_option("--x", o.x, "Binomial count");

  auto* support = app.add_subcommand("support", "Support of the MLE");
  add_model_options(support, o);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage study");
  add_model_options(sim, o);
  add_alpha_options(sim, o);
  sim->add_option("--theta", o.theta, "True mean lifetime (default 1)");
  sim->add_option("--reps", o.reps, "Replications (default 100000)");
  sim->add_option("--seed", o.seed, "Random seed (default 1)");
  sim->add_option("--streams", o.streams, "Worker threads; results do not depend on it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*ci) return cmd_ci(o);
    if (*cdf) return cmd_cdf(o);
    if (*limits) return cmd_limits(o);
    if (*support) return cmd_support(o);
    return cmd_simulate(o);
  } catch (const NoMleExists& e) {
    std::cerr << e.what() << '\n';
    return kNoMle;
  } catch (const BracketFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}
