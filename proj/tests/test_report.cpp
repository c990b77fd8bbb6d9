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

#include "support.hpp"

#include "survproj/errors.hpp"
#include "survproj/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace survproj;

namespace {

AnalysisConfig config_for(const SurvivalDataset& ds, Method method, int reps) {
  AnalysisConfig c;
  c.columns.x = ds.x_names();
  c.columns.z = ds.z_names();
  c.tau = 1.2;
  c.method = method;
  c.bootstrap_reps = reps;
  c.seed = 77;
  c.pr_restarts = 0;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  for (double v : {1.0 / 3.0, 6.02214076e23, -1e-300, 0.7000000000000001}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(parse_format("table") == Format::text);
  CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}

TEST_CASE("analysis JSON round-trips exactly") {
  const SurvivalDataset ds = testing::random_dataset(80, 2, 1, 4, 2.0);
  for (Method m : {Method::pl_cpe, Method::pl_wci}) {
    const AnalysisReport r = analyze("impact", ds, config_for(ds, m, 8));
    const std::string json = render(r, Format::json);
    const AnalysisReport back = analysis_report_from_json(json);
    CHECK(render(back, Format::json) == json);
    REQUIRE(back.impact.has_value());
    CHECK(back.impact->xi == r.impact->xi);
    CHECK(back.impact->xi_ci->se == r.impact->xi_ci->se);
    CHECK(back.seed == 77);
  }
  for (const char* cmd : {"fit", "ph-test", "concordance"}) {
    const AnalysisReport r = analyze(cmd, ds, config_for(ds, Method::pl_cpe, 0));
    const std::string json = render(r, Format::json);
    CHECK(render(analysis_report_from_json(json), Format::json) == json);
  }
}

TEST_CASE("absent intervals are omitted rather than null") {
  const SurvivalDataset ds = testing::random_dataset(80, 2, 1, 4, 2.0);
  const std::string json = render(analyze("impact", ds, config_for(ds, Method::pl_wci, 0)), Format::json);
  const nlohmann::json j = nlohmann::json::parse(json);
  CHECK_FALSE(j.at("impact").contains("xi_ci"));
  CHECK_FALSE(j.at("impact").contains("bootstrap_failures"));
  CHECK(json.find("null") == std::string::npos);
  CHECK(j.at("version") == kVersion);
}

TEST_CASE("reports are byte-identical across runs") {
  const SurvivalDataset ds = testing::random_dataset(80, 2, 1, 4, 2.0);
  const AnalysisConfig c = config_for(ds, Method::pl_wci, 6);
  for (Format f : {Format::json, Format::csv, Format::text}) {
    CHECK(render(analyze("impact", ds, c), f) == render(analyze("impact", ds, c), f));
  }
}

TEST_CASE("ph-test report ends with the global row") {
  const SurvivalDataset ds = testing::random_dataset(150, 2, 1, 9, 2.0);
  const AnalysisReport r = analyze("ph-test", ds, config_for(ds, Method::pl_cpe, 0));
  REQUIRE(r.ph_test.size() == 4);
  CHECK(r.ph_test.back().name == "GLOBAL");
  CHECK(r.ph_test.back().df == 3.0);
  for (const PhTestRow& row : r.ph_test) CHECK((row.p_value >= 0.0 && row.p_value <= 1.0));
}

TEST_CASE("analysis CSV is long format with parseable values") {
  const SurvivalDataset ds = testing::random_dataset(80, 2, 1, 4, 2.0);
  const AnalysisReport r = analyze("fit", ds, config_for(ds, Method::pl_cpe, 0));
  const std::vector<std::string> rows = lines(render(r, Format::csv));
  CHECK(rows.front() == "section,key,value");
  bool found = false;
  for (const std::string& row : rows) {
    CHECK(std::count(row.begin(), row.end(), ',') == 2);
    if (row.rfind("coefficients,x.x1.estimate,", 0) == 0) {
      found = true;
      CHECK(std::stod(row.substr(row.rfind(',') + 1)) == r.coefficients.front().estimate);
    }
  }
  CHECK(found);
}

TEST_CASE("simulation CSV has one row per quantity and method") {
  SimReport rep;
  rep.scenario = preset_scenario(DataModel::ph, 0.05, 0);
  rep.iterations = 10;
  SimRow row;
  row.truth = 0.05;
  row.mean = 0.051;
  row.count = 10;
  rep.rows.push_back(row);
  row.method = Method::pl_wci;
  row.relative_efficiency = 1.3;
  rep.rows.push_back(row);
  const std::vector<std::string> rows = lines(render(rep, Format::csv));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "scenario,quantity,method,censoring,truth,mean,bias,sd,rmse,RE,SE_ratio,coverage,count,ph_rejection");
  CHECK(rows[1].rfind("PH-xi0.05-c0,projection,PL/CPE,", 0) == 0);
  CHECK(rows[2].find(",1.3,") != std::string::npos);
  CHECK(rows[1].substr(rows[1].size() - 1) == ",");

  rep.rows[0].mean = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(render(rep, Format::json), NumericalError);
}
