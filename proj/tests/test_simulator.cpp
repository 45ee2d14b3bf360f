#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "landmarkbm/distance_sde.hpp"
#include "landmarkbm/parallel.hpp"
#include "landmarkbm/simulator.hpp"

using namespace landmarkbm;

namespace {

LandmarkConfig line(std::initializer_list<double> v) {
  Eigen::VectorXd q(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) q[i++] = x;
  return {1, q};
}

}  // namespace

TEST_CASE("min pairwise distance") {
  CHECK(min_pairwise_distance(line({0, 1})) == 1.0);
  CHECK(min_pairwise_distance(line({0, 1, 3})) == 1.0);
  CHECK(min_pairwise_distance(LandmarkConfig::from_points({{0, 0}, {3, 4}})) == 5.0);
}

TEST_CASE("collision monitor") {
  const CollisionThresholds th;
  const std::vector<double> flat(10, 1.0);
  CHECK_FALSE(collision_monitor(flat, 1.0, th));
  std::vector<double> drop;
  for (int i = 0; i < 10; ++i) drop.push_back(1e-2 * std::pow(1e-4, i / 9.0));
  CHECK(collision_monitor(drop, 1.0, th) == StopReason::CollisionRapidDecrease);
  const std::vector<double> tiny{1.0, 0.5e-8};
  CHECK(collision_monitor(tiny, 1.0, th) == StopReason::CollisionSmallDistance);
  // relative threshold alone
  CollisionThresholds rel_only = th;
  rel_only.eps_abs = 0.0;
  rel_only.decades = 100.0;
  CHECK(collision_monitor(std::vector<double>{1e-3, 0.9e-9}, 1e-3, rel_only) == StopReason::CollisionSmallDistance);
  CHECK_FALSE(collision_monitor(std::vector<double>{1e-3, 1.1e-9}, 1e-3, rel_only));
  // exactly three decades is not more than three
  CHECK_FALSE(collision_monitor(std::vector<double>{1.0, 1e-3}, 1.0, th));
  // a drop spread over more than the window is ignored
  std::vector<double> slow;
  for (int i = 0; i < 40; ++i) slow.push_back(std::pow(10.0, -i / 10.0));
  CHECK_FALSE(collision_monitor(slow, 1.0, th));
  CHECK_FALSE(collision_monitor(std::vector<double>{}, 1.0, th));
}

TEST_CASE("stop reason text") {
  for (auto r : {StopReason::Completed, StopReason::CollisionSmallDistance, StopReason::CollisionRapidDecrease,
                 StopReason::NumericalFailure})
    CHECK(parse_stop_reason(to_string(r)) == r);
  CHECK_THROWS(parse_stop_reason("Exploded"));
}

TEST_CASE("em step without noise") {
  for (const auto& k : {preset_k12(), preset_k32(), preset_gaussian()})
    for (double s : {0.2, 0.5, 1.0}) {
      const double dt = 1e-3;
      const auto next = em_step(line({-s, s}), k, dt, std::vector<double>{0.0, 0.0});
      const double mid = 0.5 * (next.flat()[0] + next.flat()[1]);
      CHECK(std::abs(mid) <= 1e-15);
      const double du = (next.flat()[1] - next.flat()[0]) - 2 * s;
      const double b = drift({k, 1}, 2 * s);
      CHECK(du == doctest::Approx(b * dt).epsilon(1e-9));
    }
}

TEST_CASE("em step continuity and translation covariance") {
  const auto q = LandmarkConfig::from_points({{0.1, 0.3}, {1.0, -0.2}, {0.4, 0.9}});
  const std::vector<double> xi{0.3, -1.1, 0.7, 0.2, -0.5, 1.4};
  double prev = INFINITY;
  for (double dt : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double move = (em_step(q, preset_gaussian(), dt, xi).flat() - q.flat()).norm();
    CHECK(move < prev);
    prev = move;
  }
  CHECK(prev < 1e-3);
  Eigen::VectorXd shifted = q.flat();
  for (int i = 0; i < 3; ++i) shifted.segment<2>(2 * i) += Eigen::Vector2d(5.0, -2.0);
  const auto a = em_step(q, preset_k32(), 1e-3, xi);
  const auto b = em_step(LandmarkConfig(2, shifted), preset_k32(), 1e-3, xi);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(b.flat()[2 * i] - a.flat()[2 * i] - 5.0) <= 1e-12);
    CHECK(std::abs(b.flat()[2 * i + 1] - a.flat()[2 * i + 1] + 2.0) <= 1e-12);
  }
  CHECK_THROWS(em_step(q, preset_k32(), 0.0, xi));
  CHECK_THROWS(em_step(q, preset_k32(), 1e-3, std::vector<double>{1.0}));
}

TEST_CASE("steps=0 ensemble") {
  SimulationParams p;
  p.steps = 0;
  p.t_max = 1.0;
  p.paths = 1;
  p.keep_states = true;
  const auto ens = simulate(p);
  REQUIRE(ens.paths.size() == 1);
  CHECK(ens.paths[0].states.size() == 1);
  CHECK(ens.paths[0].stop.reason == StopReason::Completed);
  CHECK(ens.paths[0].stop.step == 0);
}

TEST_CASE("fig1-style ensembles") {
  SimulationParams p;
  p.initial = line({0, 1});
  p.steps = 10000;
  p.paths = 20;
  p.seed = 0;
  p.kernel = preset_k12();
  const auto k12 = simulate(p);
  std::size_t collisions = 0;
  for (const auto& path : k12.paths) {
    const bool coll = is_collision(path.stop.reason);
    collisions += coll;
    CHECK((path.stop.reason == StopReason::Completed) == (path.stop.step == p.steps));
    CHECK(path.min_distance.size() == path.stop.step + 1);
    // recorded states stay above the small-distance threshold
    for (double m : path.min_distance) CHECK(m >= p.thresholds.eps_abs);
  }
  CHECK(collisions >= 1);
  p.kernel = preset_gaussian();
  for (const auto& path : simulate(p).paths) CHECK(path.stop.reason == StopReason::Completed);
}

TEST_CASE("crossing in one dimension counts as collision") {
  // with dt comparable to the separation the noise often swaps the landmarks
  SimulationParams p;
  p.initial = line({0, 0.01});
  p.kernel = preset_k12();
  p.steps = 1;
  p.t_max = 0.01;
  p.thresholds.eps_abs = 0.0;
  p.thresholds.eps_rel = 0.0;
  p.thresholds.decades = 100;
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    p.seed = seed;
    p.thresholds.detect_crossing = true;
    const auto path = simulate_path(p, 0);
    if (path.stop.reason != StopReason::CollisionSmallDistance) continue;
    ++seen;
    CHECK(path.stop.step == 0);
    CHECK(path.min_distance.size() == 1);
    p.thresholds.detect_crossing = false;
    const auto unchecked = simulate_path(p, 0);
    CHECK(unchecked.stop.reason == StopReason::Completed);
    REQUIRE(unchecked.states.empty());
  }
  CHECK(seen > 0);
}

TEST_CASE("results do not depend on the worker count") {
  SimulationParams p;
  p.initial = LandmarkConfig::from_points({{0, 0}, {1, 0}, {2, 0}});
  p.kernel = preset_k12();
  p.steps = 500;
  p.paths = 8;
  p.seed = 99;
  p.keep_states = true;
  std::ostringstream a, b;
  setenv("LANDMARKBM_THREADS", "1", 1);
  write_trajectory_csv(a, simulate(p));
  setenv("LANDMARKBM_THREADS", "5", 1);
  write_trajectory_csv(b, simulate(p));
  unsetenv("LANDMARKBM_THREADS");
  CHECK(a.str() == b.str());
}

TEST_CASE("trajectory csv") {
  SimulationParams p;
  p.initial = LandmarkConfig::from_points({{0, 0}, {1, 0}, {2, 0}});
  p.steps = 3;
  p.t_max = 0.3;
  p.paths = 2;
  p.keep_states = true;
  std::ostringstream out;
  write_trajectory_csv(out, simulate(p));
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "path_id,step,t,x_1_1,x_1_2,x_2_1,x_2_2,x_3_1,x_3_2,min_dist,stop_reason");
  std::string row;
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    const auto fields = std::count(row.begin(), row.end(), ',') + 1;
    CHECK(fields == 5 + 3 * 2);
    if (rows == 4) CHECK(row.substr(row.rfind(',') + 1) == "Completed");
    if (rows == 1) CHECK(row.rfind("0,0,0,0,0,1,0,2,0,1,", 0) == 0);
  }
  CHECK(rows == 8);

  p.keep_states = false;
  std::ostringstream bad;
  CHECK_THROWS_AS(write_trajectory_csv(bad, simulate(p)), std::logic_error);
  std::ostringstream md;
  write_min_distance_csv(md, simulate(p));
  CHECK(md.str().rfind("path_id,step,t,min_dist\n0,0,0,1\n", 0) == 0);
}

TEST_CASE("invalid simulation input") {
  SimulationParams p;
  p.paths = 0;
  CHECK_THROWS(simulate(p));
  p.paths = 1;
  p.kernel = make_asymptotic(1.0, 1.0);
  CHECK_THROWS(simulate(p));
}
