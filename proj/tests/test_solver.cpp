#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "aoinet/rng.hpp"
#include "aoinet/solver.hpp"
#include "support/grid_oracle.hpp"
#include "support/testutil.hpp"

using namespace aoinet;

namespace {

// One link of capacity 1, one LDA flow and one AoI flow of size 1.
struct OneLink {
  Network net = testutil::make_chain({1.0});
  std::vector<FlowSpec> flows = {
      testutil::make_flow("r", FlowClass::Lda, net, {0}, 1.0),
      testutil::make_flow("m", FlowClass::Aoi, net, {0}, 1.0)};
};

}  // namespace

TEST_CASE("lac on one link splits capacity by the freshness weight") {
  OneLink in;
  SolverDiagnostics diag;
  RateAllocation a = solve_lac(in.net, in.flows, 0.125, {}, &diag);
  CHECK(diag.status == SolveStatus::Optimal);
  // stationarity: 1 = lambda/(2 mu^2) and r + mu = 1 give mu = 1/4
  CHECK(a.value[0] == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(a.value[1] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(a.objective == doctest::Approx(0.75 - 0.125 / 0.5).epsilon(1e-6));
  CHECK(a.gamma[0] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(kkt_residual(in.net, in.flows, a, Objective::Lac, 0.125, 1.0, {})
            .residual() <= 1e-6);
}

TEST_CASE("lac with lambda zero pins aoi flows to zero") {
  OneLink in;
  RateAllocation a = solve_lac(in.net, in.flows, 0.0, {}, nullptr);
  CHECK(a.value[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a.value[1] == 0.0);
  CHECK(kkt_residual(in.net, in.flows, a, Objective::Lac, 0.0, 1.0, {})
            .residual() <= 1e-6);
}

TEST_CASE("lac rejects invalid input") {
  OneLink in;
  CHECK_THROWS_AS(solve_lac(in.net, in.flows, -0.5, {}, nullptr),
                  std::invalid_argument);
  in.flows[0].size_bits = 0.0;
  CHECK_THROWS_AS(solve_lac(in.net, in.flows, 0.125, {}, nullptr),
                  std::invalid_argument);
}

TEST_CASE("min aoi splits by the square-root rule") {
  OneLink in;
  RateAllocation a = solve_min_aoi(in.net, in.flows, 4.0, {}, nullptr);
  // 4/(2r) + 1/(2 mu), r + mu = 1: r/mu = sqrt(4) gives r = 2/3
  CHECK(a.value[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(a.value[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(a.objective == doctest::Approx(3.0 + 1.5).epsilon(1e-6));
  CHECK(kkt_residual(in.net, in.flows, a, Objective::MinAoi, 0.0, 4.0, {})
            .residual() <= 1e-6);
}

TEST_CASE("max throughput picks the least-norm optimal point") {
  OneLink in;
  RateAllocation a = solve_max_throughput(in.net, in.flows, {}, nullptr);
  // every split of the unit link is throughput-optimal; least-norm is even
  CHECK(a.value[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(a.value[1] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(a.objective == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kkt_residual(in.net, in.flows, a, Objective::MaxThroughput, 0.0, 1.0,
                     {})
            .residual() <= 1e-6);
}

TEST_CASE("lou2020 maximizes freshness only") {
  OneLink in;
  RateAllocation a = solve_lou2020(in.net, in.flows, {}, nullptr);
  CHECK(a.value[0] == 0.0);  // lda pinned
  CHECK(a.value[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kkt_residual(in.net, in.flows, a, Objective::Lou2020, 0.0, 1.0, {})
            .residual() <= 1e-6);
}

TEST_CASE("kkt residual reacts to perturbation") {
  OneLink in;
  RateAllocation a = solve_lac(in.net, in.flows, 0.125, {}, nullptr);
  a.value[1] += 0.1;
  a.finalize(in.net, in.flows);
  KktReport rep =
      kkt_residual(in.net, in.flows, a, Objective::Lac, 0.125, 1.0, {});
  CHECK(rep.residual() > 0.1);
}

TEST_CASE("aoi upper bound uses hop count and propagation only") {
  Network net = testutil::make_chain({1.0});
  FlowSpec f = testutil::make_flow("m", FlowClass::Aoi, net, {0}, 1.0);
  CHECK(aoi_upper_bound(net, f, 0.25) == doctest::Approx(6.0));

  Network net2 = testutil::make_chain({1.0, 1.0}, {0.2, 0.3});
  FlowSpec g = testutil::make_flow("m2", FlowClass::Aoi, net2, {0, 1}, 1.0);
  CHECK(aoi_upper_bound(net2, g, 0.25) == doctest::Approx(10.5));
}

TEST_CASE("link_loads sums per class") {
  Network net = testutil::make_chain({1.0, 1.0});
  std::vector<FlowSpec> flows = {
      testutil::make_flow("r", FlowClass::Lda, net, {0, 1}, 1.0),
      testutil::make_flow("m", FlowClass::Aoi, net, {1}, 4.0)};
  std::vector<double> x = {0.5, 0.1};  // mu 0.1 of size 4 = 0.4 bps
  LinkLoads loads = link_loads(net, flows, x);
  CHECK(loads.lda_bps[0] == doctest::Approx(0.5));
  CHECK(loads.aoi_bps[0] == doctest::Approx(0.0));
  CHECK(loads.lda_bps[1] == doctest::Approx(0.5));
  CHECK(loads.aoi_bps[1] == doctest::Approx(0.4));
}

TEST_CASE("lac scale covariance") {
  Network net = testutil::make_chain({0.8, 1.3});
  std::vector<FlowSpec> flows = {
      testutil::make_flow("r0", FlowClass::Lda, net, {0, 1}, 1.0),
      testutil::make_flow("m0", FlowClass::Aoi, net, {0}, 1.0),
      testutil::make_flow("m1", FlowClass::Aoi, net, {1}, 2.0)};
  double lambda = 0.2, k = 3.0;
  RateAllocation base = solve_lac(net, flows, lambda, {}, nullptr);

  Network scaled = net;
  for (Link& l : scaled.links) l.capacity_bps *= k;
  RateAllocation big = solve_lac(scaled, flows, k * k * lambda, {}, nullptr);
  for (size_t f = 0; f < flows.size(); ++f)
    CHECK(big.value[f] == doctest::Approx(k * base.value[f]).epsilon(1e-5));
  CHECK(big.objective == doctest::Approx(k * base.objective).epsilon(1e-5));
}

TEST_CASE("lambda sweep trades throughput for freshness monotonically") {
  Network net = testutil::make_chain({1.0, 1.0});
  std::vector<FlowSpec> flows = {
      testutil::make_flow("r0", FlowClass::Lda, net, {0, 1}, 1.0),
      testutil::make_flow("m0", FlowClass::Aoi, net, {0, 1}, 1.0),
      testutil::make_flow("m1", FlowClass::Aoi, net, {1}, 1.0)};
  double prev_thr = 1e300, prev_pen = 1e300;
  for (double lambda : {0.02, 0.1, 0.5, 2.0}) {
    RateAllocation a = solve_lac(net, flows, lambda, {}, nullptr);
    double thr = a.value[0];
    double pen = 1.0 / (2.0 * a.value[1]) + 1.0 / (2.0 * a.value[2]);
    CHECK(thr <= prev_thr);
    CHECK(pen <= prev_pen);
    prev_thr = thr;
    prev_pen = pen;
  }
}

TEST_CASE("solver matches the grid oracle on random small instances") {
  Rng rng(42);
  for (int inst = 0; inst < 12; ++inst) {
    uint32_t nl = 1 + rng.integer(3);
    std::vector<double> caps(nl);
    for (double& c : caps) c = rng.uniform(0.4, 1.2);
    Network net = testutil::make_chain(caps);

    uint32_t nf = 1 + rng.integer(3);
    std::vector<FlowSpec> flows;
    for (uint32_t f = 0; f < nf; ++f) {
      uint32_t first = rng.integer(nl);
      uint32_t len = 1 + rng.integer(nl - first);
      FlowClass cls = rng.bernoulli(0.5) ? FlowClass::Lda : FlowClass::Aoi;
      flows.push_back(testutil::make_flow("f" + std::to_string(f), cls, net,
                                          testutil::span(first, len),
                                          rng.uniform(0.5, 2.0)));
    }
    double lambda = rng.uniform(0.05, 0.5);
    double s_lda = rng.uniform(0.5, 2.0);

    SolverDiagnostics diag;
    RateAllocation lac = solve_lac(net, flows, lambda, {}, &diag);
    REQUIRE(diag.status == SolveStatus::Optimal);
    double ref = gridoracle::lac_value(net, flows, lambda);
    CHECK(std::fabs(lac.objective - ref) <= 1e-3);
    CHECK(kkt_residual(net, flows, lac, Objective::Lac, lambda, s_lda, {})
              .residual() <= 1e-6);

    RateAllocation ma = solve_min_aoi(net, flows, s_lda, {}, &diag);
    REQUIRE(diag.status == SolveStatus::Optimal);
    double ref2 = gridoracle::min_aoi_value(net, flows, s_lda);
    CHECK(std::fabs(ma.objective - ref2) <= 1e-3);
    CHECK(kkt_residual(net, flows, ma, Objective::MinAoi, 0.0, s_lda, {})
              .residual() <= 1e-6);
  }
}

TEST_CASE("objective names round trip") {
  for (Objective o : {Objective::Lac, Objective::MaxThroughput,
                      Objective::MinAoi, Objective::Lou2020}) {
    Objective back;
    REQUIRE(objective_from_string(to_string(o), &back));
    CHECK(back == o);
  }
  Objective ignored;
  CHECK(!objective_from_string("nonsense", &ignored));
}
