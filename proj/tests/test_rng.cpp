// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/rng.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

using dtln::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the exact draw sequence") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(1234), d(1234);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal(0.0, 1.0) == d.normal(0.0, 1.0));
  }
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniform stays in [0,1) and fills the range") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("uniform(lo,hi) respects its bounds and mean") {
  Rng rng(11);
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(-25.0, 0.0);
    CHECK(u >= -25.0);
    CHECK(u < 0.0);
    acc += u;
  }
  CHECK(std::abs(acc / n - (-12.5)) < 0.1);
}

TEST_CASE("normal matches its first two moments") {
  Rng rng(42);
  const int n = 400000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal(3.0, 2.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 3.0) < 0.02);
  CHECK(std::abs(std::sqrt(var) - 2.0) < 0.02);
}

TEST_CASE("normal tail mass is two-sided") {
  Rng rng(5);
  int above = 0, below = 0;
  for (int i = 0; i < 100000; ++i) {
    const double v = rng.normal(0.0, 1.0);
    if (v > 1.0) ++above;
    if (v < -1.0) ++below;
  }
  // P(Z > 1) = 0.1587
  CHECK(above > 14000);
  CHECK(above < 18000);
  CHECK(below > 14000);
  CHECK(below < 18000);
}

TEST_CASE("bernoulli hit rate tracks p") {
  Rng rng(99);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    if (rng.bernoulli(0.9)) ++hits;
  const double rate = static_cast<double>(hits) / n;
  CHECK(rate > 0.89);
  CHECK(rate < 0.91);
}

TEST_CASE("split streams are deterministic and decorrelated") {
  CHECK(Rng::split(123, 0) == Rng::split(123, 0));
  CHECK(Rng::split(123, 0) != Rng::split(123, 1));
  CHECK(Rng::split(123, 0) != Rng::split(124, 0));

  // Neighboring seeds with neighboring streams must not collide.
  std::vector<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    for (std::uint64_t stream = 0; stream < 8; ++stream)
      seen.push_back(Rng::split(seed, stream));
  for (std::size_t i = 0; i < seen.size(); ++i)
    for (std::size_t j = i + 1; j < seen.size(); ++j)
      CHECK(seen[i] != seen[j]);
}

}  // TEST_SUITE
