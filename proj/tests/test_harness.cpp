#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoinet/harness.hpp"
#include "support/testutil.hpp"

using namespace aoinet;

namespace {

// Two nodes, one unit link, one declared flow of each class.
const char* kTinyScenario = R"({
  "links": [{"id": "ab", "src": "A", "dst": "B", "capacity_bps": 1.0}],
  "flows": [
    {"id": "r", "class": "LDA", "path": ["ab"], "size_bits": 0.1,
     "rate_bps": 0.5},
    {"id": "m", "class": "AoI", "path": ["ab"], "size_bits": 0.1,
     "freq_hz": 0.5}
  ],
  "objective": "lac",
  "lambda": 0.125,
  "sim": {"scheduler": "sdm", "duration_s": 120.0, "warmup_s": 12.0, "seed": 7}
})";

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("generate_traffic is seed-deterministic and respects probabilities") {
  Network net = testutil::make_chain({1.0, 1.0, 1.0});
  TrafficTemplate tmpl;
  tmpl.lda_pair_prob = 0.5;
  tmpl.aoi_pair_prob = 0.5;
  tmpl.lda_size_bits = 2.0;
  tmpl.aoi_size_bits = 1.0;

  auto a = generate_traffic(net, tmpl, 11);
  auto b = generate_traffic(net, tmpl, 11);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].path == b[i].path);
  }
  auto c = generate_traffic(net, tmpl, 12);
  bool different = c.size() != a.size();
  for (size_t i = 0; !different && i < a.size(); ++i)
    different = a[i].id != c[i].id;
  CHECK(different);

  tmpl.lda_pair_prob = 0.0;
  tmpl.aoi_pair_prob = 0.0;
  CHECK(generate_traffic(net, tmpl, 11).empty());

  // chain: only forward-reachable ordered pairs can host flows
  tmpl.lda_pair_prob = 1.0;
  tmpl.aoi_pair_prob = 1.0;
  auto full = generate_traffic(net, tmpl, 11);
  CHECK(full.size() == 2 * 6);  // 6 reachable ordered pairs on a 4-node chain
  for (const FlowSpec& f : full) {
    CHECK(!f.path.empty());
    double want = f.cls == FlowClass::Lda ? 2.0 : 1.0;
    CHECK(f.size_bits == doctest::Approx(want));
  }
}

TEST_CASE("scenario json loads and instantiates") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  CHECK(sf.objective == Objective::Lac);
  CHECK(sf.lambda == doctest::Approx(0.125));
  CHECK(sf.sim.scheduler == SchedulerKind::Sdm);
  CHECK(sf.sim.duration_s == doctest::Approx(120.0));
  CHECK(sf.sim.seed == 7);

  instantiate(&sf);
  CHECK(sf.sim.net.links.size() == 1);
  CHECK(sf.sim.flows.size() == 2);
}

TEST_CASE("scenario json rejects lambda without objective") {
  const char* text = R"({
    "links": [{"id": "ab", "src": "A", "dst": "B", "capacity_bps": 1.0}],
    "flows": [{"id": "r", "class": "LDA", "path": ["ab"], "size_bits": 1}],
    "lambda": 0.5
  })";
  CHECK_THROWS(load_scenario_json(text));
}

TEST_CASE("scenario json rejects unknown scheduler and objective") {
  std::string bad1 = kTinyScenario;
  bad1.replace(bad1.find("\"sdm\""), 5, "\"xyz\"");
  CHECK_THROWS(load_scenario_json(bad1));
  std::string bad2 = kTinyScenario;
  bad2.replace(bad2.find("\"lac\""), 5, "\"abc\"");
  CHECK_THROWS(load_scenario_json(bad2));
}

TEST_CASE("traffic template is applied once per instantiation") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  TrafficTemplate tmpl;
  tmpl.lda_pair_prob = 1.0;
  tmpl.aoi_pair_prob = 0.0;
  tmpl.lda_size_bits = 4.0;
  sf.traffic = tmpl;
  instantiate(&sf);
  CHECK(sf.sim.flows.size() == 3);  // 2 explicit + 1 generated (A->B)
  CHECK(sf.sim.flows[2].size_bits == doctest::Approx(4.0));
}

TEST_CASE("predictions match the allocation") {
  Network net = testutil::make_chain({1.0}, {0.25});
  std::vector<FlowSpec> flows = {
      testutil::make_flow("r", FlowClass::Lda, net, {0}, 1.0),
      testutil::make_flow("m", FlowClass::Aoi, net, {0}, 1.0)};
  RateAllocation alloc;
  alloc.value = {0.75, 0.25};
  alloc.finalize(net, flows);
  CHECK(predicted_lda_throughput(flows, alloc) == doctest::Approx(0.75));
  // 1/(2*0.25) + (0.25 latency + 1 bit / 1 bps)
  CHECK(predicted_total_aoi(net, flows, alloc) == doctest::Approx(3.25));
  alloc.value[1] = 0.0;
  CHECK(predicted_total_aoi(net, flows, alloc) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("run_cell with declared rates skips the solver") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  sf.use_declared_rates = true;
  SweepRow row = run_cell(sf, Objective::Lac, 0.125, SchedulerKind::Sdm, 7,
                          /*simulate=*/true);
  CHECK(row.status == "ok");
  CHECK(row.total_lda_throughput_bps == doctest::Approx(0.5).epsilon(0.02));
  CHECK(row.total_aoi_s > 1.0);  // 1/(2*0.5) + delays
  CHECK(row.total_aoi_s < 2.0);
}

TEST_CASE("run_cell without simulation reports solver predictions") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  SweepRow row = run_cell(sf, Objective::Lac, 0.125, SchedulerKind::Sdm, 7,
                          /*simulate=*/false);
  CHECK(row.status == "ok");
  REQUIRE(row.alloc);
  // stationarity: lambda/(2 mu^2) = s gives mu = sqrt(lambda/(2 s)), s = 0.1
  double mu = std::sqrt(0.125 / (2.0 * 0.1));
  CHECK(row.total_lda_throughput_bps ==
        doctest::Approx(1.0 - 0.1 * mu).epsilon(1e-4));
  CHECK(row.total_aoi_s ==
        doctest::Approx(1.0 / (2.0 * mu) + 0.1).epsilon(1e-3));
}

TEST_CASE("sweep emits sorted csv with the pinned header") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  SweepSpec spec;
  spec.objectives = {Objective::MaxThroughput, Objective::Lac};
  spec.lambdas = {0.25, 0.125};
  spec.schedulers = {SchedulerKind::Sdm};
  spec.seeds = {7};
  spec.simulate = false;

  TradeoffCurve curve = run_sweep(sf, spec);
  REQUIRE(curve.rows.size() == 4);
  std::string csv = curve_to_csv(curve);
  auto lines = split_lines(csv);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] ==
        "objective,lambda,scheduler,seed,total_lda_throughput_bps,"
        "total_aoi_s,status");
  // lac rows first (enum order), lambdas ascending within
  CHECK(lines[1].rfind("lac,0.125,", 0) == 0);
  CHECK(lines[2].rfind("lac,0.25,", 0) == 0);
  CHECK(lines[3].rfind("max_throughput,0.125,", 0) == 0);
  for (const auto& line : lines)
    CHECK(line.find("failed") == std::string::npos);
}

TEST_CASE("sweep rows fold failures into status") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  sf.sim.duration_s = -1.0;  // breaks the simulation, not the solver
  SweepSpec spec;
  spec.lambdas = {0.125};
  TradeoffCurve curve = run_sweep(sf, spec);
  REQUIRE(curve.rows.size() == 1);
  CHECK(curve.rows[0].status.rfind("failed: ", 0) == 0);
  std::string csv = curve_to_csv(curve);
  CHECK(csv.find("failed: ") != std::string::npos);
  CHECK(csv.find("inf") != std::string::npos);  // aoi column
}

TEST_CASE("csv quotes fields containing commas") {
  TradeoffCurve curve;
  SweepRow row;
  row.status = "failed: bad, worse";
  curve.rows.push_back(row);
  std::string csv = curve_to_csv(curve);
  CHECK(csv.find("\"failed: bad, worse\"") != std::string::npos);
}

TEST_CASE("compare runs the scheduler cross product at one lambda") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  sf.sim.duration_s = 60.0;
  sf.sim.warmup_s = 6.0;
  TradeoffCurve curve =
      run_compare(sf, 0.125, {Objective::Lac, Objective::MaxThroughput},
                  {SchedulerKind::Sdm, SchedulerKind::FifoBaseline});
  REQUIRE(curve.rows.size() == 4);
  for (const SweepRow& row : curve.rows) {
    CHECK(row.lambda == doctest::Approx(0.125));
    CHECK(row.status == "ok");
    CHECK(row.seed == 7);
  }
}

TEST_CASE("curve json mirrors the rows") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  SweepSpec spec;
  spec.lambdas = {0.125};
  spec.simulate = false;
  TradeoffCurve curve = run_sweep(sf, spec);
  std::string js = curve_to_json(curve);
  CHECK(js.find("\"objective\"") != std::string::npos);
  CHECK(js.find("\"lac\"") != std::string::npos);
}

TEST_CASE("analyze produces the gamma grid") {
  SingleLinkParams p;
  p.capacity_bps = 1.0;
  p.ti_s = 2.0;
  p.dt_s = 1.0;
  p.frame_s = 10.0;
  std::string csv = analyze_gamma_csv(p, 0.125, 9);
  auto lines = split_lines(csv);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] ==
        "gamma,tdm_throughput_bps,tdm_aoi_s,sdm_throughput_bps,sdm_aoi_s,"
        "objective");
  CHECK(lines[5].rfind("0.5,0.7,3.8,0.5,", 0) == 0);
  CHECK_THROWS_AS(analyze_gamma_csv(p, 0.125, 1), std::invalid_argument);
}

TEST_CASE("single_link_params maps a one-link scenario") {
  ScenarioFile sf = load_scenario_json(kTinyScenario);
  instantiate(&sf);
  SingleLinkParams p = single_link_params(sf);
  CHECK(p.capacity_bps == doctest::Approx(1.0));
  CHECK(p.ti_s == doctest::Approx(2.0));    // 1 / freq
  CHECK(p.dt_s == doctest::Approx(0.1));    // size / capacity
  CHECK(p.frame_s == doctest::Approx(1.0));  // sim default
}
