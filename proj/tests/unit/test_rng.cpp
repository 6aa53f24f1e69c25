#include <doctest.h>

#include <cmath>
#include <set>

#include "injphase/rng.hpp"

using namespace injphase;

TEST_CASE("Philox4x64-10 known answers") {
  // Reference vectors of the Random123 distribution (also reproduced by
  // numpy.random.Philox).
  const auto zero = Philox4x64::generate({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x16554d9eca36314cULL);
  CHECK(zero[1] == 0xdb20fe9d672d0fdcULL);
  CHECK(zero[2] == 0xd7e772cee186176bULL);
  CHECK(zero[3] == 0x7e68b68aec7ba23bULL);

  const auto pi = Philox4x64::generate(
      {0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
      {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
  CHECK(pi[0] == 0xa528f45403e61d95ULL);
  CHECK(pi[1] == 0x38c72dbd566e9788ULL);
  CHECK(pi[2] == 0xa5a1610e72fd18b5ULL);
  CHECK(pi[3] == 0x57bd43b5e52b7fe6ULL);
}

TEST_CASE("normal triples") {
  // Box-Muller on numpy's raw Philox words for key (42, 7), counter (123, 1, 0, 0).
  const NoiseStream s(42, 7);
  const auto n = s.normals(123, 1);
  CHECK(n[0] == doctest::Approx(-0.2306654684028371).epsilon(1e-15));
  CHECK(n[1] == doctest::Approx(-1.284284629860149).epsilon(1e-15));
  CHECK(n[2] == doctest::Approx(-0.4075119561904225).epsilon(1e-15));

  CHECK(s.normals(5, 0) == NoiseStream(42, 7).normals(5, 0));
  CHECK(s.normals(5, 0) != s.normals(5, 1));
  CHECK(s.normals(5, 0) != NoiseStream(42, 8).normals(5, 0));
}

TEST_CASE("normal moments") {
  const NoiseStream s(1, 0);
  const int n = 200000;
  double m[3] = {}, v[3] = {}, c01 = 0, c02 = 0;
  for (int k = 0; k < n; ++k) {
    const auto x = s.normals(k, 0);
    for (int i = 0; i < 3; ++i) m[i] += x[i], v[i] += x[i] * x[i];
    c01 += x[0] * x[1];
    c02 += x[0] * x[2];
  }
  const double tol = 5.0 / std::sqrt(n);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(m[i] / n) < tol);
    CHECK(std::abs(v[i] / n - 1.0) < 2 * tol);
  }
  CHECK(std::abs(c01 / n) < tol);
  CHECK(std::abs(c02 / n) < tol);
}

TEST_CASE("derived streams are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a)
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_stream(a, b));
  CHECK(seen.size() == 2500);
  CHECK(derive_stream(3, 4) == derive_stream(3, 4));
}
