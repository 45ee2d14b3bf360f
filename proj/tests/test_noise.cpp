#include <cmath>
#include <thread>
#include <vector>

#include "doctest.h"
#include "landmarkbm/noise.hpp"
#include "landmarkbm/parallel.hpp"

using namespace landmarkbm;

TEST_CASE("philox known answers") {
  // Random123 kat_vectors for philox4x32_10
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("noise is addressable and reproducible") {
  const NoiseStream a(42), b(42), c(43);
  CHECK(a.normal(3, 17, 5) == b.normal(3, 17, 5));
  CHECK(a.normal(3, 17, 5) != c.normal(3, 17, 5));
  CHECK(a.normal(3, 17, 5) != a.normal(4, 17, 5));
  CHECK(a.normal(3, 17, 5) != a.normal(3, 18, 5));
  std::vector<double> v(7);
  a.fill(2, 9, v);
  for (std::uint32_t i = 0; i < 7; ++i) CHECK(v[i] == a.normal(2, 9, i));
}

TEST_CASE("noise moments") {
  const NoiseStream s(1);
  double m1 = 0, m2 = 0, m4 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal(0, static_cast<std::uint64_t>(i), static_cast<std::uint32_t>(i % 3));
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(m1) < 0.01);
  CHECK(std::abs(m2 - 1.0) < 0.01);
  CHECK(std::abs(m4 - 3.0) < 0.06);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }, 3),
                  std::runtime_error);
  parallel_for(0, [](std::size_t) { FAIL("no work expected"); }, 2);
}
