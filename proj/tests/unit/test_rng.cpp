#include <cmath>
#include <doctest.h>
#include <vector>

#include "refsde/rng.hpp"

using refsde::RngStream;

TEST_CASE("same seed and stream reproduce the sequence bitwise") {
  RngStream a(1234, 7);
  RngStream b(1234, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(1234, 7);
  RngStream d(1234, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("different seeds or streams decorrelate") {
  RngStream a(1234, 0);
  RngStream b(1235, 0);
  RngStream c(1234, 1);
  bool seed_differs = false;
  bool stream_differs = false;
  RngStream a2(1234, 0);
  for (int i = 0; i < 16; ++i) {
    const auto va = a.next_u64();
    if (va != b.next_u64()) seed_differs = true;
    if (a2.next_u64() != c.next_u64()) stream_differs = true;
  }
  CHECK(seed_differs);
  CHECK(stream_differs);
}

TEST_CASE("uniforms lie strictly inside (0,1) with the right mean") {
  RngStream rng(99);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double se = 1.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(sum / n - 0.5) < 5.0 * se);
}

TEST_CASE("normal moments match theory") {
  RngStream rng(2718);
  const int n = 200000;
  long double s = 0.0L, s2 = 0.0L, s4 = 0.0L;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  const double mean = static_cast<double>(s / n);
  const double var = static_cast<double>(s2 / n) - mean * mean;
  const double kurt = static_cast<double>(s4 / n);
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 6.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(kurt - 3.0) < 6.0 * std::sqrt(96.0 / n));
}
