#include <cmath>
#include <sstream>

#include "doctest.h"
#include "landmarkbm/distance_sde.hpp"
#include "oracles.hpp"

using namespace landmarkbm;

TEST_CASE("sigma examples") {
  const DistanceCoefficients g{preset_gaussian(), 1};
  CHECK(sigma(g, 0.0) == 0.0);
  CHECK(sigma(g, 1.0) == doctest::Approx(std::sqrt(2.0 * (1.0 - std::exp(-1.0)))).epsilon(1e-15));
  CHECK(sigma(g, 1.0) == doctest::Approx(1.1243).epsilon(1e-4));
  CHECK(std::abs(sigma(g, 50.0) - std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(sigma({preset_k12(), 2}, 50.0) - std::sqrt(2.0)) < 1e-9);
  CHECK_THROWS(sigma(g, -1.0));
}

TEST_CASE("drift examples") {
  const double e1 = std::exp(-1.0);
  CHECK(drift({preset_gaussian(), 2}, 1.0) == doctest::Approx((e1 - 1.0) * (-2.0 * e1) / (1.0 + e1)).epsilon(1e-14));
  CHECK(drift({preset_gaussian(), 2}, 1.0) == doctest::Approx(0.3400).epsilon(1e-3));
  CHECK(drift({preset_gaussian(), 1}, 1.0) == doctest::Approx(2.0 * e1 / (1.0 + e1)).epsilon(1e-14));
  CHECK(drift({preset_gaussian(), 1}, 1.0) == doctest::Approx(0.5379).epsilon(1e-3));
  CHECK_THROWS(drift({preset_gaussian(), 1}, 0.0));
}

TEST_CASE("d=1 drift identity") {
  for (const auto& k : {preset_k12(), preset_k32(), make_matern(2.5), make_matern(3.5), preset_gaussian()}) {
    const DistanceCoefficients c{k, 1};
    for (int i = 0; i < 1000; ++i) {
      const double r = 1e-3 * std::pow(5e4, i / 999.0);
      CHECK(std::abs(drift(c, r) + k.lambda() * k.eval_derivative(r) / (k.lambda() + k.eval(r))) <= 1e-12);
    }
  }
}

TEST_CASE("radial term") {
  const DistanceCoefficients plain{preset_k12(), 2};
  const DistanceCoefficients radial{preset_k12(), 2, true};
  for (double r : {1e-3, 0.5, 2.0})
    CHECK(drift(radial, r) - drift(plain, r) == doctest::Approx(preset_k12().gap(r) / r).epsilon(1e-12));
  CHECK(drift({preset_k12(), 1, true}, 0.5) == drift({preset_k12(), 1}, 0.5));
}

TEST_CASE("zero steps gives the initial value") {
  DistanceSdeParams p;
  p.r0 = 0.8;
  p.t_max = 0.0;
  p.steps = 0;
  const auto path = simulate_distance_path({preset_gaussian(), 1}, p, 0);
  REQUIRE(path.values.size() == 1);
  CHECK(path.values[0] == 0.8);
  CHECK_FALSE(path.absorbed_at);
}

TEST_CASE("determinism and absorption") {
  DistanceSdeParams p;
  p.r0 = 1.0;
  p.t_max = 1.0;
  p.steps = 10000;
  p.paths = 200;
  p.seed = 5;
  p.absorb_eps = 1e-4;
  const DistanceCoefficients c{preset_k12(), 1};
  const auto a = simulate_distance(c, p);
  const auto b = simulate_distance(c, p);
  std::ostringstream sa, sb;
  write_distance_csv(sa, a);
  write_distance_csv(sb, b);
  CHECK(sa.str() == sb.str());

  std::size_t absorbed = 0;
  for (const auto& path : a) {
    CHECK(path.values[0] == 1.0);
    CHECK(path.values.size() == p.steps + 1);
    if (path.absorbed_at) {
      ++absorbed;
      for (std::size_t k = *path.absorbed_at; k < path.values.size(); ++k) CHECK(path.values[k] == 0.0);
      CHECK(path.values[*path.absorbed_at - 1] > 1e-4);
    }
  }
  CHECK(absorbed > 0);

  // common noise: a higher absorption level absorbs at least as many paths
  std::size_t prev = 0;
  for (double eps : {1e-8, 1e-6, 1e-4, 1e-2}) {
    p.absorb_eps = eps;
    std::size_t count = 0;
    for (const auto& path : simulate_distance(c, p)) count += path.absorbed_at.has_value();
    CHECK(count >= prev);
    prev = count;
  }
}

TEST_CASE("gaussian paths are not absorbed") {
  DistanceSdeParams p;
  p.steps = 10000;
  p.paths = 50;
  p.absorb_eps = 1e-4;
  for (int d : {1, 2})
    for (const auto& path : simulate_distance({preset_gaussian(), d}, p)) CHECK_FALSE(path.absorbed_at);
}

TEST_CASE("distance csv format") {
  DistanceSdeParams p;
  p.steps = 2;
  p.paths = 2;
  p.t_max = 0.5;
  std::ostringstream out;
  write_distance_csv(out, simulate_distance({preset_gaussian(), 1}, p));
  const std::string s = out.str();
  CHECK(s.rfind("path_id,step,t,r,absorbed\n", 0) == 0);
  CHECK(s.find("\n0,0,0,1,0\n") != std::string::npos);
  CHECK(s.find("\n1,2,0.5,") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : s) lines += ch == '\n';
  CHECK(lines == 7);
}

TEST_CASE("invalid parameters") {
  DistanceSdeParams p;
  p.r0 = -1.0;
  CHECK_THROWS(simulate_distance_path({preset_gaussian(), 1}, p, 0));
  p.r0 = 1.0;
  p.t_max = -1.0;
  CHECK_THROWS(simulate_distance_path({preset_gaussian(), 1}, p, 0));
  p.t_max = 1.0;
  CHECK_THROWS(simulate_distance_path({preset_gaussian(), 0}, p, 0));
}
