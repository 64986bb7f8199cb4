#include <doctest.h>

#include <cmath>

#include "tsq/tsallis.hpp"

using namespace tsq;

namespace {

CMatrix diag_matrix(std::initializer_list<double> d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (double x : d) m(k, k) = x, ++k;
  return m;
}

DensityMatrix diag_state(std::initializer_list<double> d) {
  return validate_density(diag_matrix(d), Dims::single(static_cast<int>(d.size())));
}

// Fixtures shared with tests/oracles/derive_values.py.
DensityMatrix rho3() {
  CMatrix m(3, 3);
  m << 0.5, cplx(0.1, 0.05), 0.02,
       cplx(0.1, -0.05), 0.3, cplx(0, -0.04),
       0.02, cplx(0, 0.04), 0.2;
  return validate_density(m, Dims::single(3));
}

DensityMatrix sigma3() {
  CMatrix m(3, 3);
  m << 0.4, 0.05, 0.0,
       0.05, 0.35, cplx(0, 0.03),
       0.0, cplx(0, -0.03), 0.25;
  return validate_density(m, Dims::single(3));
}

}  // namespace

TEST_CASE("q domain") {
  CHECK_NOTHROW(TsallisQ(0.5));
  CHECK_NOTHROW(TsallisQ(2.0));
  for (double bad : {0.0, -0.5, 1.0, 1.0 + 1e-10, 2.0 + 1e-9, 3.0}) {
    CHECK_THROWS_AS(TsallisQ{bad}, Error);
  }
  CHECK(TsallisQ(0.5).prefactor() == doctest::Approx(2.0));
}

TEST_CASE("Tsallis entropy values") {
  for (double q : {0.3, 0.5, 1.5, 2.0}) {
    CHECK(std::abs(tsallis_entropy(random_pure(Dims::single(3), 9).projector(), TsallisQ(q))) < 1e-12);
  }
  CHECK(tsallis_entropy(diag_state({0.5, 0.5}), TsallisQ(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  // (1 - (sqrt 0.75 + sqrt 0.25)) / (0.5 - 1)
  CHECK(tsallis_entropy(diag_state({0.75, 0.25}), TsallisQ(0.5)) == doctest::Approx(0.7320508075688772).epsilon(1e-13));
  // Frozen from the numpy/scipy oracle.
  CHECK(tsallis_entropy(rho3(), TsallisQ(0.5)) == doctest::Approx(1.370045264926803).epsilon(1e-12));
  CHECK(tsallis_entropy(rho3(), TsallisQ(2.0)) == doctest::Approx(0.591).epsilon(1e-12));
}

TEST_CASE("Tsallis relative entropy values") {
  const TsallisQ q2(2.0);
  const TsallisQ qh(0.5);
  for (double q : {0.3, 0.5, 1.5, 2.0}) {
    const DensityMatrix r = random_density(Dims::single(3), 2, 4);
    CHECK(std::abs(tsallis_relative_entropy(r, r, TsallisQ(q)).value()) < 1e-12);
  }
  CHECK(tsallis_relative_entropy(diag_state({1, 0}), diag_state({0.5, 0.5}), q2).value() == doctest::Approx(1.0));
  CHECK(tsallis_relative_entropy(diag_state({1, 0}), diag_state({0.5, 0.5}), qh).value() ==
        doctest::Approx(0.5857864376269049).epsilon(1e-13));
  CHECK(tsallis_relative_entropy(diag_state({1, 0}), diag_state({0, 1}), q2).is_infinite());
  // q < 1 stays finite on disjoint supports: (0 - 1)/(q - 1).
  CHECK(tsallis_relative_entropy(diag_state({1, 0}), diag_state({0, 1}), qh).value() == doctest::Approx(2.0));

  CHECK(tsallis_relative_entropy(rho3(), sigma3(), qh).value() == doctest::Approx(0.026505527820346764).epsilon(1e-11));
  CHECK(tsallis_relative_entropy(rho3(), sigma3(), q2).value() == doctest::Approx(0.1008125826841102).epsilon(1e-11));

  CHECK_THROWS_AS(tsallis_relative_entropy(diag_state({1, 0}), diag_state({1, 0, 0}), q2), Error);
}

TEST_CASE("relative entropy is non-negative and vanishes only at equality") {
  for (int s = 0; s < 50; ++s) {
    const int d = 2 + s % 3;
    const DensityMatrix r = random_density(Dims::single(d), 1 + s % d, 1000 + s);
    const DensityMatrix t = random_density(Dims::single(d), d, 2000 + s);
    for (double q : {0.3, 0.5, 1.5, 2.0}) {
      const ExtendedReal v = tsallis_relative_entropy(r, t, TsallisQ(q));
      CHECK(v.value() >= -1e-10);
      CHECK(v.value() > 1e-8);
    }
  }
}

TEST_CASE("support leak threshold for q > 1") {
  // Weight 5e-11 on ker(sigma) stays finite, 1e-9 does not.
  CMatrix small = diag_matrix({1 - 5e-11, 5e-11});
  CMatrix large = diag_matrix({1 - 1e-9, 1e-9});
  const CMatrix sigma = diag_matrix({1, 0});
  CHECK(tsallis_relative_entropy_unnormalized(small, sigma, TsallisQ(2.0)).is_finite());
  CHECK(tsallis_relative_entropy_unnormalized(large, sigma, TsallisQ(2.0)).is_infinite());
}

TEST_CASE("data processing and joint convexity on random inputs") {
  for (int s = 0; s < 60; ++s) {
    const int d = 2 + s % 3;
    const Dims dims = Dims::single(d);
    const DensityMatrix r = random_density(dims, 1 + s % d, 3000 + s);
    const DensityMatrix t = random_density(dims, d, 4000 + s);
    const Channel phi = random_cptp(d, 1 + s % 3, 5000 + s);
    const DensityMatrix r2 = random_density(dims, d, 6000 + s);
    const DensityMatrix t2 = random_density(dims, d, 7000 + s);
    const double p = 0.2 + 0.6 * (s % 7) / 6.0;
    const DensityMatrix rm = validate_density(p * r.matrix() + (1 - p) * r2.matrix(), dims);
    const DensityMatrix tm = validate_density(p * t.matrix() + (1 - p) * t2.matrix(), dims);
    for (double qv : {0.3, 0.5, 1.5, 2.0}) {
      const TsallisQ q(qv);
      const double before = tsallis_relative_entropy(r, t, q).value();
      const double after = tsallis_relative_entropy(apply_channel(phi, r), apply_channel(phi, t), q).value();
      CHECK(after <= before + 1e-9);
      const double mix = tsallis_relative_entropy(rm, tm, q).value();
      const double avg = p * before + (1 - p) * tsallis_relative_entropy(r2, t2, q).value();
      CHECK(mix <= avg + 1e-9);
    }
  }
}

TEST_CASE("unnormalized form agrees with the normalized one on states") {
  const DensityMatrix r = random_density(Dims::single(3), 3, 1);
  const DensityMatrix t = random_density(Dims::single(3), 3, 2);
  for (double q : {0.3, 1.5}) {
    CHECK(tsallis_relative_entropy_unnormalized(r.matrix(), t.matrix(), TsallisQ(q)).value() ==
          doctest::Approx(tsallis_relative_entropy(r, t, TsallisQ(q)).value()).epsilon(1e-14));
  }
}
