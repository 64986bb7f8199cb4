#include <doctest.h>

#include <cmath>
#include <random>

#include "tsq/coherence.hpp"

using namespace tsq;

namespace {

PureState qubit(double x) {
  CVector v(2);
  v << std::sqrt(1 - x), std::sqrt(x);
  return PureState::from_amplitudes(v, Dims::single(2));
}

DensityMatrix rho3() {
  CMatrix m(3, 3);
  m << 0.5, cplx(0.1, 0.05), 0.02,
       cplx(0.1, -0.05), 0.3, cplx(0, -0.04),
       0.02, cplx(0, 0.04), 0.2;
  return validate_density(m, Dims::single(3));
}

double offdiag_mass(const CMatrix& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j) s += std::abs(m(i, j));
    }
  }
  return s;
}

const BasisSet kComp2 = BasisSet::computational(2);

}  // namespace

TEST_CASE("C_I and C_II reference values") {
  const TsallisQ qh(0.5);
  const DensityMatrix p = qubit(0.1).projector();
  CHECK(coherence_I(p, kComp2, qh) == doctest::Approx((1 - std::sqrt(0.82)) / 0.5).epsilon(1e-13));
  CHECK(coherence_II(p, kComp2, qh) == doctest::Approx(0.36).epsilon(1e-13));
  CHECK(coherence_II(qubit(0.5).projector(), kComp2, qh) == doctest::Approx(1.0).epsilon(1e-13));

  // Frozen from the numpy/scipy oracle.
  const BasisSet comp3 = BasisSet::computational(3);
  CHECK(coherence_I(rho3(), comp3, qh) == doctest::Approx(0.02009582212233707).epsilon(1e-11));
  CHECK(coherence_II(rho3(), comp3, qh) == doctest::Approx(0.03998972321128802).epsilon(1e-11));
  CHECK(coherence_I(rho3(), comp3, TsallisQ(2.0)) == doctest::Approx(0.08227003252617848).epsilon(1e-11));
  CHECK(coherence_II(rho3(), comp3, TsallisQ(2.0)) == doctest::Approx(0.04032208114899616).epsilon(1e-11));
}

TEST_CASE("maximally coherent state in dimension D") {
  for (int d : {2, 3, 4}) {
    const PureState plus = PureState::normalized(CVector::Ones(d), Dims::single(d));
    for (double qv : {0.3, 0.5, 1.5, 2.0}) {
      const double expected = (1 - std::pow(d, qv - 1)) / (1 - qv);
      CHECK(coherence_I(plus.projector(), BasisSet::computational(d), TsallisQ(qv)) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("C_I is the distance to the closest incoherent state") {
  for (int s = 0; s < 30; ++s) {
    const int d = 2 + s % 3;
    const DensityMatrix r = random_density(Dims::single(d), 1 + s % d, 40 + s);
    const BasisSet basis = BasisSet::from_unitary(haar_unitary(d, 90 + s));
    for (double qv : {0.3, 0.5, 1.5, 2.0}) {
      const TsallisQ q(qv);
      const DensityMatrix delta = closest_incoherent(r, basis, q);
      CHECK(tsallis_relative_entropy(r, delta, q).value() == doctest::Approx(coherence_I(r, basis, q)).epsilon(1e-9));
      // Any other incoherent state is at least as far.
      RVector w = RVector::Random(d).cwiseAbs().array() + 0.05;
      w /= w.sum();
      const CMatrix other = basis.unitary() * w.cast<cplx>().asDiagonal() * basis.unitary().adjoint();
      CHECK(tsallis_relative_entropy(r, validate_density(other, r.dims()), q).value() >= coherence_I(r, basis, q) - 1e-10);
    }
  }
}

TEST_CASE("closest incoherent state examples") {
  const TsallisQ qh(0.5);
  CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  for (double qv : {0.3, 2.0}) {
    CHECK(max_abs(closest_incoherent(validate_density(plus, Dims::single(2)), kComp2, TsallisQ(qv)).matrix() -
                  CMatrix::Identity(2, 2) * 0.5) < 1e-14);
  }
  const RVector pops = RVector::LinSpaced(3, 0.2, 0.4) / 0.9;
  const DensityMatrix diag = validate_density(CMatrix(pops.cast<cplx>().asDiagonal()), Dims::single(3));
  CHECK(max_abs(closest_incoherent(diag, BasisSet::computational(3), qh).matrix() - diag.matrix()) < 1e-14);

  const CMatrix delta = closest_incoherent(qubit(0.1).projector(), kComp2, qh).matrix();
  CHECK(delta(0, 0).real() == doctest::Approx(0.81 / 0.82).epsilon(1e-13));
  CHECK(delta(1, 1).real() == doctest::Approx(0.01 / 0.82).epsilon(1e-13));
}

TEST_CASE("faithfulness: zero exactly on incoherent states") {
  for (int s = 0; s < 40; ++s) {
    const int d = 2 + s % 3;
    const DensityMatrix r = random_density(Dims::single(d), 1 + s % d, 700 + s);
    const BasisSet comp = BasisSet::computational(d);
    const CMatrix diag_only = CMatrix(r.matrix().diagonal().asDiagonal());
    const DensityMatrix dephased = validate_density(diag_only, r.dims());
    for (double qv : {0.3, 0.5, 1.5, 2.0}) {
      const TsallisQ q(qv);
      CHECK(std::abs(coherence_I(dephased, comp, q)) <= 1e-10);
      CHECK(std::abs(coherence_II(dephased, comp, q)) <= 1e-10);
      const bool coherent = offdiag_mass(r.matrix()) > 1e-8;
      CHECK((coherence_I(r, comp, q) > 1e-10) == coherent);
      CHECK((coherence_II(r, comp, q) > 1e-10) == coherent);
    }
  }
}

TEST_CASE("pure functionals") {
  const TsallisQ qh(0.5);
  for (auto v : {PureVariant::III, PureVariant::IV, PureVariant::V}) {
    for (int j = 0; j < 3; ++j) {
      CVector e = CVector::Zero(3);
      e(j) = 1.0;
      CHECK(std::abs(coherence_pure(v, PureState::from_amplitudes(e, Dims::single(3)), BasisSet::computational(3), qh)) <
            1e-14);
    }
  }
  CHECK(coherence_pure(PureVariant::III, qubit(0.1), kComp2, qh) ==
        doctest::Approx((std::sqrt(0.9) + std::sqrt(0.1) - 1) / 0.5).epsilon(1e-13));
  CHECK(coherence_pure(PureVariant::III, qubit(0.5), kComp2, qh) ==
        doctest::Approx(2 * std::sqrt(2.0) - 2).epsilon(1e-13));
  // Non-comparability of C_II and C_III.
  CHECK(coherence_II(qubit(0.5).projector(), kComp2, qh) > coherence_pure(PureVariant::III, qubit(0.5), kComp2, qh));
  CHECK(coherence_II(qubit(0.1).projector(), kComp2, qh) < coherence_pure(PureVariant::III, qubit(0.1), kComp2, qh));

  // IV and V coincide with C_I and C_II on pure states.
  for (int s = 0; s < 20; ++s) {
    const PureState psi = random_pure(Dims::single(3), 50 + s);
    const BasisSet basis = BasisSet::from_unitary(haar_unitary(3, 60 + s));
    for (double qv : {0.3, 2.0}) {
      const TsallisQ q(qv);
      CHECK(coherence_pure(PureVariant::IV, psi, basis, q) == doctest::Approx(coherence_I(psi.projector(), basis, q)));
      CHECK(coherence_pure(PureVariant::V, psi, basis, q) == doctest::Approx(coherence_II(psi.projector(), basis, q)));
      // Functional evaluated on populations agrees with the state route.
      const CVector amps = basis.unitary().adjoint() * psi.amplitudes();
      CHECK(PureCoherenceFunctional(PureVariant::IV, q).of_amplitudes(amps) ==
            doctest::Approx(coherence_I(psi.projector(), basis, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("C_I <= C_III on pure states for q < 1") {
  for (int s = 0; s < 200; ++s) {
    const int d = 2 + s % 3;
    const PureState psi = random_pure(Dims::single(d), 9000 + s);
    for (double qv : {0.3, 0.5, 0.9}) {
      const TsallisQ q(qv);
      const BasisSet comp = BasisSet::computational(d);
      CHECK(coherence_pure(PureVariant::IV, psi, comp, q) <= coherence_pure(PureVariant::III, psi, comp, q) + 1e-10);
    }
  }
}

TEST_CASE("C_I <= C_II for q < 1 and reversed for q > 1") {
  for (int s = 0; s < 200; ++s) {
    const int d = 2 + s % 3;
    const DensityMatrix r = random_density(Dims::single(d), 1 + s % d, 8000 + s);
    const BasisSet comp = BasisSet::computational(d);
    for (double qv : {0.3, 0.5}) {
      CHECK(coherence_I(r, comp, TsallisQ(qv)) <= coherence_II(r, comp, TsallisQ(qv)) + 1e-10);
    }
    for (double qv : {1.5, 2.0}) {
      CHECK(coherence_I(r, comp, TsallisQ(qv)) >= coherence_II(r, comp, TsallisQ(qv)) - 1e-10);
    }
  }
}

TEST_CASE("convex roof") {
  const TsallisQ qh(0.5);
  RoofConfig rc;
  rc.restarts = 4;

  const PureState psi = random_pure(Dims::single(3), 5);
  const BasisSet comp3 = BasisSet::computational(3);
  for (auto v : {PureVariant::III, PureVariant::IV, PureVariant::V}) {
    CHECK(coherence_roof(v, psi.projector(), comp3, qh, rc).value ==
          doctest::Approx(coherence_pure(v, psi, comp3, qh)).epsilon(1e-12));
  }

  CMatrix diag = CMatrix::Zero(3, 3);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.3;
  diag(2, 2) = 0.2;
  for (auto v : {PureVariant::III, PureVariant::IV, PureVariant::V}) {
    const RoofResult r = coherence_roof(v, validate_density(diag, Dims::single(3)), comp3, qh, rc);
    CHECK(std::abs(r.value) <= 1e-6);
    CHECK(max_abs(r.ensemble.reconstruct() - diag) < 1e-10);
  }
}

TEST_CASE("roof of C_III matches a random ensemble search") {
  // rho = (|+><+| + |0><0|) / 2
  CMatrix m(2, 2);
  m << 0.75, 0.25, 0.25, 0.25;
  const DensityMatrix rho = validate_density(m, Dims::single(2));
  const TsallisQ qh(0.5);
  RoofConfig rc;
  rc.restarts = 8;
  rc.seed = 3;
  const double roof = coherence_roof(PureVariant::III, rho, kComp2, qh, rc).value;

  // Oracle: 10^5 random size-4 decompositions. The first half are Haar
  // isometries; the rest perturb the incumbent with a shrinking step.
  const SpectralDecomposition sd = eigh(rho);
  const PureCoherenceFunctional f(PureVariant::III, qh);
  auto evaluate = [&](const CMatrix& v) {
    const Ensemble ens = ensemble_from_isometry(sd, v);
    double value = 0.0;
    for (int n = 0; n < ens.size(); ++n) value += ens.weights[n] * f.of_amplitudes(ens.states[n]);
    return value;
  };
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  CMatrix incumbent = haar_unitary(4, 777000).leftCols(2);
  double best = evaluate(incumbent);
  for (int s = 1; s < 100000; ++s) {
    CMatrix v;
    if (s < 50000) {
      v = haar_unitary(4, 777000 + s).leftCols(2);
    } else {
      const double step = 0.3 * std::pow(1e-4, (s - 50000) / 50000.0);
      CMatrix h(4, 2);
      for (Eigen::Index k = 0; k < h.size(); ++k) h(k) = cplx(normal(gen), normal(gen)) * step;
      v = (incumbent + h).householderQr().householderQ() * CMatrix::Identity(4, 2);
    }
    const double value = evaluate(v);
    if (value < best) best = value, incumbent = v;
  }
  CHECK(roof <= best + 1e-9);
  CHECK(std::abs(roof - best) <= 1e-3);
}

TEST_CASE("roof bounds the distance-based measures") {
  RoofConfig rc;
  rc.restarts = 2;
  rc.max_iters = 400;
  for (int s = 0; s < 12; ++s) {
    const int d = 2 + s % 3;
    const DensityMatrix r = random_density(Dims::single(d), 1 + s % 2, 300 + s);
    const BasisSet comp = BasisSet::computational(d);
    for (double qv : {0.5, 2.0}) {
      const TsallisQ q(qv);
      const RoofResult r4 = coherence_roof(PureVariant::IV, r, comp, q, rc);
      const RoofResult r5 = coherence_roof(PureVariant::V, r, comp, q, rc);
      CHECK(coherence_I(r, comp, q) <= r4.value + 1e-10);
      CHECK(coherence_II(r, comp, q) <= r5.value + 1e-10);
      CHECK(max_abs(r4.ensemble.reconstruct() - r.matrix()) < 1e-10);
    }
  }
}

TEST_CASE("C_II strong monotonicity and convexity under incoherent channels") {
  for (int s = 0; s < 100; ++s) {
    const int d = 2 + s % 3;
    const DensityMatrix r = random_density(Dims::single(d), 1 + s % d, 20000 + s);
    const DensityMatrix t = random_density(Dims::single(d), d, 21000 + s);
    const Channel ch = random_incoherent_channel(d, 2 + s % 3, 22000 + s);
    const BasisSet comp = BasisSet::computational(d);
    for (double qv : {0.5, 2.0}) {
      const TsallisQ q(qv);
      double avg = 0.0;
      for (const auto& o : channel_outcomes(ch, r)) {
        if (o.post_state) avg += o.probability * coherence_II(*o.post_state, comp, q);
      }
      CHECK(avg <= coherence_II(r, comp, q) + 1e-9);
      const DensityMatrix mix = validate_density(0.3 * r.matrix() + 0.7 * t.matrix(), r.dims());
      CHECK(coherence_II(mix, comp, q) <= 0.3 * coherence_II(r, comp, q) + 0.7 * coherence_II(t, comp, q) + 1e-9);
    }
  }
}

TEST_CASE("basis dimension must match") {
  CHECK_THROWS_AS(coherence_I(qubit(0.1).projector(), BasisSet::computational(3), TsallisQ(0.5)), Error);
}
