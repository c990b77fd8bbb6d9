// Copyright 2026 The survproj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "survproj/report.hpp"

#include "survproj/errors.hpp"
#include "survproj/partialrank.hpp"
#include "survproj/transmodel.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace survproj {

using Json = nlohmann::ordered_json;

std::string to_string(Format format) {
  switch (format) {
    case Format::json:
      return "json";
    case Format::csv:
      return "csv";
    case Format::text:
      return "text";
  }
  return "?";
}

Format parse_format(const std::string& text) {
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  if (text == "text" || text == "table" || text == "text-table") return Format::text;
  throw ValidationError("unknown format '" + text + "' (expected json, csv or text)");
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string sig6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw NumericalError("report field '" + what + "' is not finite");
}

void require_finite_tree(const Json& j, const std::string& path) {
  if (j.is_number_float()) require_finite(j.get<double>(), path);
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) require_finite_tree(value, path.empty() ? key : path + "." + key);
  }
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) require_finite_tree(j[k], path + "[" + std::to_string(k) + "]");
  }
}

// ---- building -------------------------------------------------------------

void add_coefficients(AnalysisReport& r, const SurvivalDataset& ds, const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& gamma, const Eigen::VectorXd* se) {
  for (Index k = 0; k < beta.size(); ++k) {
    CoefficientRow row{ds.x_names()[static_cast<std::size_t>(k)], "x", beta(k), std::nullopt};
    if (se) row.se = (*se)(k);
    r.coefficients.push_back(row);
  }
  for (Index k = 0; k < gamma.size(); ++k) {
    CoefficientRow row{ds.z_names()[static_cast<std::size_t>(k)], "z", gamma(k), std::nullopt};
    if (se) row.se = (*se)(beta.size() + k);
    r.coefficients.push_back(row);
  }
}

void add_routes(AnalysisReport& r, const SurvivalDataset& ds, const AnalysisConfig& config,
                const RouteResults& routes) {
  switch (config.method) {
    case Method::pl_cpe:
      r.enhanced = routes.cpe->enhanced;
      r.projected = routes.cpe->projected;
      r.m_tau = routes.transform->m_tau;
      break;
    case Method::pl_wci:
      r.enhanced = routes.wci_pl;
      r.projected = routes.wci_pl_projected;
      break;
    case Method::pr_wci:
      r.enhanced = routes.wci_pr;
      r.projected = routes.wci_pr_projected;
      break;
  }
  if (config.method == Method::pr_wci) {
    r.coefficient_source = "smoothed partial rank";
    add_coefficients(r, ds, routes.rank->beta(), routes.rank->gamma, nullptr);
  } else if (config.beta) {
    r.coefficient_source = "fixed";
    add_coefficients(r, ds, *config.beta, config.gamma ? *config.gamma : Eigen::VectorXd::Zero(ds.q()), nullptr);
  } else {
    r.coefficient_source = "partial likelihood";
    add_coefficients(r, ds, routes.cox->beta, routes.cox->gamma, &routes.cox->se);
  }
}

}  // namespace

AnalysisReport analyze(const std::string& command, const SurvivalDataset& ds, const AnalysisConfig& config) {
  config.validate(ds);
  AnalysisReport r;
  r.command = command;
  r.n = ds.n();
  r.p = ds.p();
  r.q = ds.q();
  r.events = ds.events();
  r.tau = config.tau;
  r.method = to_string(config.method);
  r.family = to_string(config.family);
  r.seed = config.seed;

  if (command == "fit") {
    const RouteOptions options = route_options(config, ds);
    if (config.method == Method::pr_wci) {
      const CoxFit cox = cox_fit(ds, true);
      PartialRankOptions pro;
      pro.anchor = options.anchor;
      pro.g = options.g;
      pro.restarts = options.pr_restarts;
      pro.seed = options.seed;
      const PartialRankFit rank = pr_fit(ds, pro, &cox);
      r.coefficient_source = "smoothed partial rank";
      add_coefficients(r, ds, rank.beta(), rank.gamma, nullptr);
    } else {
      Eigen::VectorXd beta, gamma;
      if (config.beta) {
        beta = *config.beta;
        gamma = config.gamma ? *config.gamma : Eigen::VectorXd::Zero(ds.q());
        r.coefficient_source = "fixed";
        add_coefficients(r, ds, beta, gamma, nullptr);
      } else {
        if (config.family != Family::ph) {
          throw ValidationError("family " + to_string(config.family) + " needs fixed beta/gamma in the config");
        }
        const CoxFit cox = cox_fit(ds, true);
        beta = cox.beta;
        gamma = cox.gamma;
        r.coefficient_source = "partial likelihood";
        add_coefficients(r, ds, beta, gamma, &cox.se);
      }
      r.m_tau = make_transform_fit(ds, config.family, beta, gamma, config.tau).m_tau;
    }
  } else if (command == "ph-test") {
    const CoxFit cox = cox_fit(ds, true);
    r.coefficient_source = "partial likelihood";
    add_coefficients(r, ds, cox.beta, cox.gamma, &cox.se);
    const PhTestResult test = ph_test(cox, config.ph_transform);
    r.ph_transform = to_string(test.transform);
    for (std::size_t k = 0; k < test.names.size(); ++k) {
      r.ph_test.push_back({test.names[k], test.chisq(static_cast<Index>(k)), 1.0,
                           test.p_value(static_cast<Index>(k))});
    }
    r.ph_test.push_back({"GLOBAL", test.global_chisq, static_cast<double>(test.global_df), test.global_p_value});
  } else if (command == "concordance" || command == "impact") {
    const RouteResults routes = evaluate_routes(ds, {config.method}, route_options(config, ds));
    add_routes(r, ds, config, routes);
    if (command == "impact") r.impact = impact(ds, config);
  } else {
    throw ValidationError("unknown analysis command '" + command + "'");
  }
  return r;
}

// ---- analysis report: JSON ------------------------------------------------

namespace {

Json interval_json(const Interval& i) { return Json{{"se", i.se}, {"lower", i.lower}, {"upper", i.upper}}; }

Json estimate_json(const ConcordanceEstimate& e) {
  Json j{{"estimator", to_string(e.estimator)}, {"value", e.value}, {"tau", e.tau}};
  if (e.pi_hat) j["pi_hat"] = *e.pi_hat;
  j["pairs"] = e.n_pairs_used;
  return j;
}

Json impact_json(const ImpactEstimate& e) {
  Json j{{"method", to_string(e.method)},
         {"family", to_string(e.family)},
         {"tau", e.tau},
         {"kappa_enhanced", e.kappa_enhanced},
         {"kappa_projected", e.kappa_projected},
         {"xi", e.xi}};
  if (e.enhanced_ci) j["enhanced_ci"] = interval_json(*e.enhanced_ci);
  if (e.projected_ci) j["projected_ci"] = interval_json(*e.projected_ci);
  if (e.xi_ci) j["xi_ci"] = interval_json(*e.xi_ci);
  j["bootstrap_reps"] = e.bootstrap_reps;
  if (e.bootstrap_reps > 0) j["bootstrap_failures"] = e.bootstrap_failures;
  j["seed"] = e.seed;
  if (e.baseline_misspecified) j["baseline_misspecified"] = true;
  return j;
}

Json analysis_json(const AnalysisReport& r) {
  Json j;
  j["command"] = r.command;
  j["input"] = Json{{"n", r.n}, {"p", r.p}, {"q", r.q}, {"events", r.events}, {"tau", r.tau},
                    {"method", r.method}, {"family", r.family}};
  if (!r.coefficients.empty()) {
    Json rows = Json::array();
    for (const auto& c : r.coefficients) {
      Json row{{"name", c.name}, {"block", c.block}, {"estimate", c.estimate}};
      if (c.se) row["se"] = *c.se;
      rows.push_back(row);
    }
    j["coefficient_source"] = r.coefficient_source;
    j["coefficients"] = rows;
  }
  if (r.m_tau) j["m_tau"] = *r.m_tau;
  if (!r.ph_test.empty()) {
    Json rows = Json::array();
    for (const auto& t : r.ph_test) {
      rows.push_back(Json{{"name", t.name}, {"chisq", t.chisq}, {"df", t.df}, {"p_value", t.p_value}});
    }
    j["ph_test"] = Json{{"transform", r.ph_transform.value_or("identity")}, {"rows", rows}};
  }
  if (r.enhanced) j["enhanced"] = estimate_json(*r.enhanced);
  if (r.projected) j["projected"] = estimate_json(*r.projected);
  if (r.impact) j["impact"] = impact_json(*r.impact);
  j["version"] = r.version;
  j["seed"] = r.seed;
  return j;
}

Estimator parse_estimator(const std::string& s) {
  for (Estimator e : {Estimator::cpe, Estimator::wci, Estimator::cpe_projected, Estimator::wci_projected}) {
    if (to_string(e) == s) return e;
  }
  throw ValidationError("unknown estimator '" + s + "'");
}

ConcordanceEstimate estimate_from(const Json& j) {
  ConcordanceEstimate e;
  e.estimator = parse_estimator(j.at("estimator").get<std::string>());
  e.value = j.at("value").get<double>();
  e.tau = j.at("tau").get<double>();
  if (j.contains("pi_hat")) e.pi_hat = j.at("pi_hat").get<double>();
  e.n_pairs_used = j.at("pairs").get<Index>();
  return e;
}

Interval interval_from(const Json& j) {
  return Interval{j.at("se").get<double>(), j.at("lower").get<double>(), j.at("upper").get<double>()};
}

ImpactEstimate impact_from(const Json& j) {
  ImpactEstimate e;
  e.method = parse_method(j.at("method").get<std::string>());
  e.family = parse_family(j.at("family").get<std::string>());
  e.tau = j.at("tau").get<double>();
  e.kappa_enhanced = j.at("kappa_enhanced").get<double>();
  e.kappa_projected = j.at("kappa_projected").get<double>();
  e.xi = j.at("xi").get<double>();
  if (j.contains("enhanced_ci")) e.enhanced_ci = interval_from(j.at("enhanced_ci"));
  if (j.contains("projected_ci")) e.projected_ci = interval_from(j.at("projected_ci"));
  if (j.contains("xi_ci")) e.xi_ci = interval_from(j.at("xi_ci"));
  e.bootstrap_reps = j.at("bootstrap_reps").get<int>();
  e.bootstrap_failures = j.value("bootstrap_failures", 0);
  e.seed = j.at("seed").get<std::uint64_t>();
  e.baseline_misspecified = j.value("baseline_misspecified", false);
  return e;
}

// ---- analysis report: CSV and text ----------------------------------------

struct Line {
  std::string section;
  std::string key;
  std::string value;
};

void push_num(std::vector<Line>& out, const std::string& section, const std::string& key, double v) {
  out.push_back({section, key, format_double(v)});
}

void interval_lines(std::vector<Line>& out, const std::string& name, const Interval& i) {
  push_num(out, "impact", name + ".se", i.se);
  push_num(out, "impact", name + ".lower", i.lower);
  push_num(out, "impact", name + ".upper", i.upper);
}

std::vector<Line> analysis_lines(const AnalysisReport& r) {
  std::vector<Line> out;
  out.push_back({"input", "command", r.command});
  push_num(out, "input", "n", static_cast<double>(r.n));
  push_num(out, "input", "p", static_cast<double>(r.p));
  push_num(out, "input", "q", static_cast<double>(r.q));
  push_num(out, "input", "events", static_cast<double>(r.events));
  push_num(out, "input", "tau", r.tau);
  out.push_back({"input", "method", r.method});
  out.push_back({"input", "family", r.family});
  if (!r.coefficients.empty()) out.push_back({"coefficients", "source", r.coefficient_source});
  for (const auto& c : r.coefficients) {
    push_num(out, "coefficients", c.block + "." + c.name + ".estimate", c.estimate);
    if (c.se) push_num(out, "coefficients", c.block + "." + c.name + ".se", *c.se);
  }
  if (r.m_tau) push_num(out, "model", "m_tau", *r.m_tau);
  if (!r.ph_test.empty()) out.push_back({"ph_test", "transform", r.ph_transform.value_or("identity")});
  for (const auto& t : r.ph_test) {
    push_num(out, "ph_test", t.name + ".chisq", t.chisq);
    push_num(out, "ph_test", t.name + ".df", t.df);
    push_num(out, "ph_test", t.name + ".p_value", t.p_value);
  }
  for (const auto* pair : {&r.enhanced, &r.projected}) {
    if (!*pair) continue;
    const std::string section = pair == &r.enhanced ? "enhanced" : "projected";
    const ConcordanceEstimate& e = **pair;
    out.push_back({section, "estimator", to_string(e.estimator)});
    push_num(out, section, "value", e.value);
    push_num(out, section, "tau", e.tau);
    if (e.pi_hat) push_num(out, section, "pi_hat", *e.pi_hat);
    push_num(out, section, "pairs", static_cast<double>(e.n_pairs_used));
  }
  if (r.impact) {
    const ImpactEstimate& e = *r.impact;
    out.push_back({"impact", "method", to_string(e.method)});
    out.push_back({"impact", "family", to_string(e.family)});
    push_num(out, "impact", "tau", e.tau);
    push_num(out, "impact", "kappa_enhanced", e.kappa_enhanced);
    push_num(out, "impact", "kappa_projected", e.kappa_projected);
    push_num(out, "impact", "xi", e.xi);
    if (e.enhanced_ci) interval_lines(out, "enhanced_ci", *e.enhanced_ci);
    if (e.projected_ci) interval_lines(out, "projected_ci", *e.projected_ci);
    if (e.xi_ci) interval_lines(out, "xi_ci", *e.xi_ci);
    push_num(out, "impact", "bootstrap_reps", e.bootstrap_reps);
    if (e.bootstrap_reps > 0) push_num(out, "impact", "bootstrap_failures", e.bootstrap_failures);
    out.push_back({"impact", "seed", std::to_string(e.seed)});
    if (e.baseline_misspecified) out.push_back({"impact", "baseline_misspecified", "true"});
  }
  out.push_back({"meta", "version", r.version});
  out.push_back({"meta", "seed", std::to_string(r.seed)});
  return out;
}

std::string text_value(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec == std::errc() && res.ptr == s.data() + s.size() && s.find_first_of(".eE") != std::string::npos) {
    return sig6(v);
  }
  return s;
}

void validate_numbers(const AnalysisReport& r) {
  require_finite(r.tau, "tau");
  for (const auto& c : r.coefficients) {
    require_finite(c.estimate, c.name);
    if (c.se) require_finite(*c.se, c.name + ".se");
  }
  if (r.m_tau) require_finite(*r.m_tau, "m_tau");
  for (const auto& t : r.ph_test) require_finite(t.chisq, "ph_test " + t.name);
  if (r.enhanced) require_finite(r.enhanced->value, "enhanced");
  if (r.projected) require_finite(r.projected->value, "projected");
  if (r.impact) require_finite(r.impact->xi, "xi");
}

}  // namespace

std::string render(const AnalysisReport& report, Format format) {
  validate_numbers(report);
  if (format == Format::json) return analysis_json(report).dump(2) + "\n";
  const std::vector<Line> lines = analysis_lines(report);
  std::ostringstream os;
  if (format == Format::csv) {
    os << "section,key,value\n";
    for (const auto& l : lines) os << csv_field(l.section) << ',' << csv_field(l.key) << ',' << csv_field(l.value) << '\n';
    return os.str();
  }
  std::string section;
  for (const auto& l : lines) {
    if (l.section != section) {
      section = l.section;
      os << (os.tellp() > 0 ? "\n" : "") << "[" << section << "]\n";
    }
    os << "  " << l.key;
    for (std::size_t pad = l.key.size(); pad < 28; ++pad) os << ' ';
    os << ' ' << text_value(l.value) << '\n';
  }
  return os.str();
}

AnalysisReport analysis_report_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report JSON: ") + e.what());
  }
  try {
    AnalysisReport r;
    r.command = j.at("command").get<std::string>();
    const Json& in = j.at("input");
    r.n = in.at("n").get<Index>();
    r.p = in.at("p").get<Index>();
    r.q = in.at("q").get<Index>();
    r.events = in.at("events").get<Index>();
    r.tau = in.at("tau").get<double>();
    r.method = in.at("method").get<std::string>();
    r.family = in.at("family").get<std::string>();
    if (j.contains("coefficients")) {
      r.coefficient_source = j.at("coefficient_source").get<std::string>();
      for (const auto& row : j.at("coefficients")) {
        CoefficientRow c{row.at("name").get<std::string>(), row.at("block").get<std::string>(),
                         row.at("estimate").get<double>(), std::nullopt};
        if (row.contains("se")) c.se = row.at("se").get<double>();
        r.coefficients.push_back(c);
      }
    }
    if (j.contains("m_tau")) r.m_tau = j.at("m_tau").get<double>();
    if (j.contains("ph_test")) {
      r.ph_transform = j.at("ph_test").at("transform").get<std::string>();
      for (const auto& row : j.at("ph_test").at("rows")) {
        r.ph_test.push_back({row.at("name").get<std::string>(), row.at("chisq").get<double>(),
                             row.at("df").get<double>(), row.at("p_value").get<double>()});
      }
    }
    if (j.contains("enhanced")) r.enhanced = estimate_from(j.at("enhanced"));
    if (j.contains("projected")) r.projected = estimate_from(j.at("projected"));
    if (j.contains("impact")) r.impact = impact_from(j.at("impact"));
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report JSON: ") + e.what());
  }
}

// ---- simulation reports ---------------------------------------------------

namespace {

Json scenario_json(const SimScenario& s) {
  Json methods = Json::array();
  for (Method m : s.methods) methods.push_back(to_string(m));
  return Json{{"name", s.name},
              {"model", to_string(s.model)},
              {"beta", std::vector<double>(s.beta.data(), s.beta.data() + s.beta.size())},
              {"gamma", std::vector<double>(s.gamma.data(), s.gamma.data() + s.gamma.size())},
              {"tau", s.tau},
              {"censor_bound", s.censor_bound},
              {"n", s.n},
              {"iterations", s.iterations},
              {"bootstrap_reps", s.bootstrap_reps},
              {"seed", s.seed},
              {"frailty_shape", s.frailty_shape},
              {"frailty_rate", s.frailty_rate},
              {"methods", methods},
              {"ph_transform", to_string(s.ph_transform)},
              {"pr_restarts", s.pr_restarts}};
}

Json population_json(const PopulationParams& p) {
  return Json{{"kappa", p.kappa},
              {"kappa_projected", p.kappa_projected},
              {"xi", p.xi},
              {"kappa_projected_direct", p.kappa_projected_direct},
              {"pi", p.pi},
              {"kappa_mc_se", p.kappa_mc_se},
              {"kappa_projected_mc_se", p.kappa_projected_mc_se},
              {"iterations", p.iterations},
              {"n", p.n}};
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string opt_text(const std::optional<double>& v) { return v ? sig6(*v) : std::string("-"); }

Json sim_json(const SimReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row{{"quantity", to_string(r.quantity)}, {"method", to_string(r.method)}, {"truth", r.truth},
             {"mean", r.mean},  {"bias", r.bias},   {"sd", r.sd},  {"rmse", r.rmse}};
    if (r.relative_efficiency) row["relative_efficiency"] = *r.relative_efficiency;
    if (r.se_ratio) row["se_ratio"] = *r.se_ratio;
    if (r.coverage) row["coverage"] = *r.coverage;
    row["count"] = r.count;
    rows.push_back(row);
  }
  Json j{{"scenario", scenario_json(report.scenario)},
         {"population", population_json(report.population)},
         {"iterations", report.iterations},
         {"failures", report.failures},
         {"censoring", report.censoring}};
  if (report.ph_rejection) j["ph_rejection"] = *report.ph_rejection;
  j["bootstrap_failures"] = report.bootstrap_failures;
  j["rows"] = rows;
  j["version"] = kVersion;
  return j;
}

}  // namespace

std::string render(const SimReport& report, Format format) {
  const Json j = sim_json(report);
  require_finite_tree(j, "");
  if (format == Format::json) return j.dump(2) + "\n";
  std::ostringstream os;
  if (format == Format::csv) {
    os << "scenario,quantity,method,censoring,truth,mean,bias,sd,rmse,RE,SE_ratio,coverage,count,ph_rejection\n";
    for (const auto& r : report.rows) {
      os << csv_field(report.scenario.name) << ',' << to_string(r.quantity) << ',' << to_string(r.method) << ','
         << format_double(report.censoring) << ',' << format_double(r.truth) << ',' << format_double(r.mean) << ','
         << format_double(r.bias) << ',' << format_double(r.sd) << ',' << format_double(r.rmse) << ','
         << opt_cell(r.relative_efficiency) << ',' << opt_cell(r.se_ratio) << ',' << opt_cell(r.coverage) << ','
         << r.count << ',' << opt_cell(report.ph_rejection) << '\n';
    }
    return os.str();
  }
  char buf[256];
  os << "scenario " << report.scenario.name << " (" << to_string(report.scenario.model) << ", n=" << report.scenario.n
     << ", iterations=" << report.iterations << ", failures=" << report.failures << ")\n";
  os << "censoring " << sig6(report.censoring) << ", PH test rejection " << opt_text(report.ph_rejection) << "\n";
  os << "truth: kappa " << sig6(report.population.kappa) << ", projected " << sig6(report.population.kappa_projected)
     << ", xi " << sig6(report.population.xi) << "\n\n";
  std::snprintf(buf, sizeof buf, "%-11s %-7s %12s %12s %12s %12s %12s\n", "quantity", "method", "mean", "bias", "RE",
                "SE ratio", "coverage");
  os << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%-11s %-7s %12s %12s %12s %12s %12s\n", to_string(r.quantity).c_str(),
                  to_string(r.method).c_str(), sig6(r.mean).c_str(), sig6(r.bias).c_str(),
                  opt_text(r.relative_efficiency).c_str(), opt_text(r.se_ratio).c_str(), opt_text(r.coverage).c_str());
    os << buf;
  }
  return os.str();
}

std::string render(const SimScenario& scenario, const PopulationParams& p, Format format) {
  if (format == Format::json) {
    Json j{{"scenario", scenario_json(scenario)}, {"population", population_json(p)}, {"version", kVersion}};
    require_finite_tree(j, "");
    return j.dump(2) + "\n";
  }
  const std::vector<std::pair<std::string, double>> fields{
      {"kappa", p.kappa},
      {"kappa_projected", p.kappa_projected},
      {"xi", p.xi},
      {"kappa_projected_direct", p.kappa_projected_direct},
      {"pi", p.pi},
      {"kappa_mc_se", p.kappa_mc_se},
      {"kappa_projected_mc_se", p.kappa_projected_mc_se},
      {"iterations", static_cast<double>(p.iterations)},
      {"n", static_cast<double>(p.n)}};
  std::ostringstream os;
  if (format == Format::csv) {
    os << "scenario,key,value\n";
    for (const auto& [k, v] : fields) os << csv_field(scenario.name) << ',' << k << ',' << format_double(v) << '\n';
    return os.str();
  }
  os << "scenario " << scenario.name << " (" << to_string(scenario.model) << ")\n";
  for (const auto& [k, v] : fields) {
    os << "  " << k;
    for (std::size_t pad = k.size(); pad < 24; ++pad) os << ' ';
    os << ' ' << sig6(v) << '\n';
  }
  return os.str();
}

}  // namespace survproj
