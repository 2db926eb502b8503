#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "meclab/rng.hpp"
#include "meclab/simd/kernels.hpp"

using meclab::RandomStream;
namespace simd = meclab::simd;

namespace {

std::vector<double> random_vec(std::size_t n, RandomStream& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-3.0, 3.0);
  return v;
}

bool close(double a, double b, double tol = 1e-12) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

// Runs every kernel on both tables and compares. Covers tail handling by
// sweeping lengths around the vector width.
void check_equivalence(const simd::KernelTable& ref,
                       const simd::KernelTable& alt, std::uint64_t seed) {
  RandomStream rng(seed);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 64u, 301u}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    const double s = rng.uniform(-2.0, 2.0);

    std::vector<double> r1(n), r2(n);
    ref.add(r1.data(), a.data(), b.data(), n);
    alt.add(r2.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));

    ref.sub(r1.data(), a.data(), b.data(), n);
    alt.sub(r2.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));

    ref.mul(r1.data(), a.data(), b.data(), n);
    alt.mul(r2.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));

    r1 = a;
    r2 = a;
    ref.mul_acc(r1.data(), a.data(), b.data(), n);
    alt.mul_acc(r2.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));

    ref.scale(r1.data(), a.data(), s, n);
    alt.scale(r2.data(), a.data(), s, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));

    r1 = b;
    r2 = b;
    ref.axpy(r1.data(), s, a.data(), n);
    alt.axpy(r2.data(), s, a.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));

    CHECK(close(ref.dot(a.data(), b.data(), n), alt.dot(a.data(), b.data(), n)));
    CHECK(close(ref.sum(a.data(), n), alt.sum(a.data(), n)));

    ref.relu(r1.data(), a.data(), n);
    alt.relu(r2.data(), a.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));

    r1.assign(n, 0.1);
    r2.assign(n, 0.1);
    ref.relu_grad_acc(r1.data(), a.data(), b.data(), n);
    alt.relu_grad_acc(r2.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i]));
  }
}

}  // namespace

TEST_CASE("scalar reference sanity") {
  const auto& k = simd::scalar_kernels();
  const double a[4] = {1, 2, 3, 4};
  const double b[4] = {10, 20, 30, 40};
  double out[4];
  k.add(out, a, b, 4);
  CHECK(out[0] == 11.0);
  CHECK(out[3] == 44.0);
  CHECK(k.dot(a, b, 4) == doctest::Approx(300.0));
  CHECK(k.sum(a, 4) == 10.0);
  const double neg[3] = {-1.0, 0.0, 2.5};
  double r[3];
  k.relu(r, neg, 3);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == 2.5);
}

TEST_CASE("vector variants match the scalar reference") {
  bool checked_any = false;
  for (simd::Isa isa : {simd::Isa::avx2, simd::Isa::neon}) {
    const simd::KernelTable* table = simd::kernels_for(isa);
    if (table == nullptr) continue;
    INFO("isa: " << simd::isa_name(isa));
    check_equivalence(simd::scalar_kernels(), *table, 0x5eed0 + int(isa));
    checked_any = true;
  }
  // On a plain CPU the dispatcher falls back to scalar; that is fine, but
  // record which path the suite exercised.
  MESSAGE("active isa: " << simd::isa_name(simd::active_isa()));
  if (!checked_any) {
    CHECK(simd::active_isa() == simd::Isa::scalar);
  }
}

TEST_CASE("force_isa switches and rejects unsupported") {
  const simd::Isa original = simd::active_isa();
  simd::force_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  if (simd::kernels_for(simd::Isa::avx2) == nullptr) {
    CHECK_THROWS_AS(simd::force_isa(simd::Isa::avx2), std::invalid_argument);
  }
  simd::force_isa(original);
  CHECK(simd::active_isa() == original);
}
