#include "tsq/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "tsq/coherence.hpp"
#include "tsq/discord.hpp"
#include "tsq/tsallis.hpp"

namespace tsq {

using nlohmann::ordered_json;

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TSQ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  const int workers = static_cast<int>(std::min<long>(std::max(threads, 1), std::max(n, 1L)));
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (long i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void SuiteConfig::validate() const {
  if (samples < 0) throw Error(ErrorCode::BadLength, "samples must be non-negative");
  if (dims) {
    if (!dims->is_bipartite() || dims->a() > 4 || dims->b() > 4) {
      throw Error(ErrorCode::DimMismatch, fmt::format("dims {}: need AxB with both sides <= 4", dims->to_string()));
    }
  }
  if (qs.empty()) throw Error(ErrorCode::QOutOfRange, "empty q list");
  for (double q : qs) (void)TsallisQ(q);
}

namespace {

// Per-sample excess values, one list per claim. Aggregation runs in sample
// order after all workers finish, so reports do not depend on scheduling.
using Excess = std::vector<std::vector<double>>;

struct Claim {
  const char* id;
  const char* anchor;
  double tolerance;
  bool asserted;
};

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t stream, long i) {
  return derive_seed(derive_seed(seed, stream), static_cast<std::uint64_t>(i));
}

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

std::vector<double> random_probabilities(int n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& x : p) total += (x = 0.05 + uniform01(g));
  for (double& x : p) x /= total;
  return p;
}

int coherence_dim(long i) { return 2 + static_cast<int>(i % 3); }

Dims bipartite_dims(const SuiteConfig& c, long i) {
  if (c.dims) return *c.dims;
  return i % 2 == 0 ? Dims::bipartite(2, 2) : Dims::bipartite(2, 3);
}

int cycled_rank(long i, int stride, int d) { return 1 + static_cast<int>((i / stride) % d); }

std::vector<Excess> run_samples(long n, int threads, std::size_t n_claims,
                                const std::function<void(long, Excess&)>& sample) {
  std::vector<Excess> out(static_cast<std::size_t>(n), Excess(n_claims));
  parallel_for(n, worker_count(threads), [&](long i) { sample(i, out[static_cast<std::size_t>(i)]); });
  return out;
}

std::vector<Tally> tally(const std::vector<Claim>& claims, const std::vector<Excess>& per_sample) {
  std::vector<Tally> t;
  for (const auto& c : claims) t.emplace_back(c.tolerance);
  for (const auto& s : per_sample) {
    for (std::size_t k = 0; k < claims.size(); ++k) {
      for (double e : s[k]) t[k].add(e);
    }
  }
  return t;
}

std::vector<CheckRecord> finish_all(const std::vector<Claim>& claims, const std::vector<Tally>& t) {
  std::vector<CheckRecord> out;
  for (std::size_t k = 0; k < claims.size(); ++k) out.push_back(t[k].finish(claims[k].id, claims[k].anchor, claims[k].asserted));
  return out;
}

ordered_json config_echo(const SuiteConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["qs"] = c.qs;
  j["coherence_dims"] = {2, 3, 4};
  ordered_json bip = ordered_json::array();
  if (c.dims) {
    bip.push_back(c.dims->to_string());
  } else {
    bip.push_back("2x2");
    bip.push_back("2x3");
  }
  j["bipartite_dims"] = std::move(bip);
  j["basis_restarts"] = c.basis_restarts;
  j["roof_restarts"] = c.roof_restarts;
  j["roof_max_iters"] = c.roof_max_iters;
  j["d3_restarts"] = c.d3_restarts;
  return j;
}

RoofConfig roof_config(const SuiteConfig& c, std::uint64_t seed) {
  RoofConfig rc;
  rc.restarts = c.roof_restarts;
  rc.max_iters = c.roof_max_iters;
  rc.seed = seed;
  return rc;
}

DiscordConfig discord_config(const SuiteConfig& c, std::uint64_t seed) {
  DiscordConfig dc;
  dc.bases.restarts = c.basis_restarts;
  dc.bases.seed = seed;
  dc.d3_restarts = c.d3_restarts;
  return dc;
}

DensityMatrix local_rotation(const DensityMatrix& rho, std::uint64_t seed) {
  const CMatrix u = kron(haar_unitary(rho.dims().a(), derive_seed(seed, 0)), haar_unitary(rho.dims().b(), derive_seed(seed, 1)));
  return validate_density(u * rho.matrix() * u.adjoint(), rho.dims());
}

PureState bell_state() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState::normalized(v, Dims::bipartite(2, 2));
}

PureState qubit_state(double x) {
  CVector v(2);
  v(0) = std::sqrt(1.0 - x);
  v(1) = std::sqrt(x);
  return PureState::from_amplitudes(v, Dims::single(2));
}

template <typename Fn>
double timed(bool enabled, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  if (!enabled) return 0.0;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Excess of `lhs <= rhs` where +inf on the right always holds.
// Divergence excess in units of max(1, |rhs|): near-singular sigma pushes
// D_q into the 1e4 range, where absolute 1e-9 is below double resolution.
double excess(const ExtendedReal& lhs, const ExtendedReal& rhs) {
  if (rhs.is_infinite()) return 0.0;
  return (lhs.value() - rhs.value()) / std::max(1.0, std::abs(rhs.value()));
}

}  // namespace

// ---------------------------------------------------------------------------

SuiteReport suite_inequalities(const SuiteConfig& config) {
  config.validate();
  enum : std::size_t {
    kIvsII, kIvsIIHigh, kIvsIII, kIvsIIIHigh, kIvsIV, kIIvsV, kIVvsV, kIVvsVHigh, kQvsD, kQIIvsDII, kDvsDII,
    kDvsDIIHigh, kDvsDIII, kDvsDIIIHigh, kBoundI, kBoundII, kLocalUnitary, kBell, kRemark, kCount
  };
  // Orderings derived from C_I <= C_II or C_I <= C_III hold for q in (0,1).
  // For q > 1 the first is reversed (C_I >= 0 forces sum_j c_j^(1/q) >= 1),
  // so those records are kept observational there.
  const std::vector<Claim> claims{
      {"eq-I-II", "C_I(rho) <= C_II(rho), q in (0,1)", 1e-10, true},
      {"eq-I-II-q-gt-1", "C_I(rho) vs C_II(rho), q in (1,2]", 1e-10, false},
      {"thm-I-III", "C_I(psi) <= C_III(psi), q in (0,1)", 1e-10, true},
      {"thm-I-III-q-gt-1", "C_I(psi) vs C_III(psi), q in (1,2]", 1e-10, false},
      {"thm-I-IV", "C_I(rho) <= C_IV(rho) (roof estimate)", 1e-10, true},
      {"thm-II-V", "C_II(rho) <= C_V(rho) (roof estimate)", 1e-10, true},
      {"roof-IV-le-V", "C_IV(rho) <= C_V(rho), q in (0,1) (both roof estimates, matched budget)", 1e-6, true},
      {"roof-IV-le-V-q-gt-1", "C_IV(rho) vs C_V(rho), q in (1,2] (roof estimates)", 1e-6, false},
      {"Q-le-D", "Q_q(rho) <= D_q(rho)", 1e-6, true},
      {"lemma-QD2", "Q_q^II(rho) <= D_q^II(rho)", 1e-6, true},
      {"D-le-DII", "D_q(rho) <= D_q^II(rho) at the shared optimal bases, q in (0,1)", 1e-10, true},
      {"D-le-DII-q-gt-1", "D_q(rho) vs D_q^II(rho), q in (1,2]", 1e-10, false},
      {"D-le-DIII", "D_q(rho) <= D_q^III(rho), q in (0,1), support rank <= 2", 1e-6, true},
      {"D-le-DIII-q-gt-1", "D_q(rho) vs D_q^III(rho), q in (1,2], support rank <= 2", 1e-6, false},
      {"bound-chain-I", "D_q <= (1 - d^(2(q-1)) Tr rho^q)/(1-q) <= (1 - d^(2(q-1)))/(1-q)", 1e-9, true},
      {"bound-chain-II", "D_q^II <= (1 - d^(2(q-1)/q) (Tr rho^q)^(1/q))/(1-q) <= (1 - d^(2(q-1)/q))/(1-q)", 1e-9, true},
      {"local-unitary-invariance", "|D_q, Q_q of (U_A x U_B) rho (U_A x U_B)^dag minus those of rho|", 2e-6, true},
      {"bell-spot", "Bell state, q=2: D = 1, D_II = sqrt2 - 1, D_III = 1/2, Q = 1", 1e-6, true},
      {"remark-II-III", "pure qubit, q=1/2: C_II >= C_III at x=1/2, C_II <= C_III at x=1/10", 1e-9, true},
  };

  SuiteReport report;
  report.suite = "inequalities";
  report.config = config_echo(config);
  std::vector<Excess> samples;
  report.wall_time = timed(config.timing, [&] {
    samples = run_samples(config.samples, config.threads, kCount, [&](long i, Excess& out) {
      const int d = coherence_dim(i);
      const BasisSet comp = BasisSet::computational(d);
      const DensityMatrix rho = random_density(Dims::single(d), cycled_rank(i, 3, d), sample_seed(config.seed, 1, i));
      const PureState psi = random_pure(Dims::single(d), sample_seed(config.seed, 2, i));

      const Dims bd = bipartite_dims(config, i);
      const int rank = cycled_rank(i, 2, std::min(bd.total(), 4));
      const DensityMatrix rab = random_density(bd, rank, sample_seed(config.seed, 3, i));
      const DensityMatrix rotated = local_rotation(rab, sample_seed(config.seed, 4, i));

      for (std::size_t qi = 0; qi < config.qs.size(); ++qi) {
        const TsallisQ q(config.qs[qi]);
        const std::uint64_t opt_seed = derive_seed(sample_seed(config.seed, 5, i), qi);

        const double c1 = coherence_I(rho, comp, q);
        const double c2 = coherence_II(rho, comp, q);
        const bool low = q.below_one();
        out[low ? kIvsII : kIvsIIHigh].push_back(c1 - c2);

        const double p4 = coherence_pure(PureVariant::IV, psi, comp, q);
        const double p3 = coherence_pure(PureVariant::III, psi, comp, q);
        out[q.below_one() ? kIvsIII : kIvsIIIHigh].push_back(p4 - p3);

        const RoofConfig rc = roof_config(config, opt_seed);
        const double r4 = coherence_roof(PureVariant::IV, rho, comp, q, rc).value;
        const double r5 = coherence_roof(PureVariant::V, rho, comp, q, rc).value;
        out[kIvsIV].push_back(c1 - r4);
        out[kIIvsV].push_back(c2 - r5);
        out[low ? kIVvsV : kIVvsVHigh].push_back(r4 - r5);

        const DiscordConfig dc = discord_config(config, opt_seed);
        const auto [d1, d2] = discord_pair(rab, q, dc);
        const auto [q1, q2] = correlation_pair(rab, q, dc);
        out[kQvsD].push_back(q1.value - d1.value);
        out[kQIIvsDII].push_back(q2.value - d2.value);
        out[low ? kDvsDII : kDvsDIIHigh].push_back(d1.value - d2.value);
        if (rank <= 2 && bd.total() <= dc.d3_max_dim) {
          out[low ? kDvsDIII : kDvsDIIIHigh].push_back(d1.value - discord(DiscordVariant::III, rab, q, dc).value);
        }
        if (bd.a() == bd.b()) {
          const UpperBound u1 = upper_bound(BoundVariant::I, rab, q);
          const UpperBound u2 = upper_bound(BoundVariant::II, rab, q);
          out[kBoundI].push_back(std::max(d1.value - u1.state_dependent, u1.state_dependent - u1.state_independent));
          out[kBoundII].push_back(std::max(d2.value - u2.state_dependent, u2.state_dependent - u2.state_independent));
        }
        const double d1r = discord_pair(rotated, q, dc).first.value;
        const double q1r = correlation_pair(rotated, q, dc).first.value;
        out[kLocalUnitary].push_back(std::max(std::abs(d1r - d1.value), std::abs(q1r - q1.value)));
      }

      if (i == 0) {
        const TsallisQ q2(2.0);
        const DensityMatrix bell = bell_state().projector();
        DiscordConfig dc = discord_config(config, config.seed);
        const auto [d1, d2] = discord_pair(bell, q2, dc);
        const double d3 = discord(DiscordVariant::III, bell, q2, dc).value;
        const double qq = correlation_pair(bell, q2, dc).first.value;
        out[kBell].push_back(std::max({std::abs(d1.value - 1.0), std::abs(d2.value - (std::sqrt(2.0) - 1.0)),
                                       std::abs(d3 - 0.5), std::abs(qq - 1.0)}));

        const TsallisQ qh(0.5);
        const BasisSet comp2 = BasisSet::computational(2);
        auto c3_formula = [](double x) { return (std::sqrt(1.0 - x) + std::sqrt(x) - 1.0) / 0.5; };
        auto c2_formula = [](double x) { return (1.0 - ((1.0 - x) * (1.0 - x) + x * x)) / 0.5; };
        for (double x : {0.5, 0.1}) {
          const DensityMatrix r = qubit_state(x).projector();
          const double c2v = coherence_II(r, comp2, qh);
          const double c3v = coherence_pure(PureVariant::III, qubit_state(x), comp2, qh);
          const double order = x == 0.5 ? c3v - c2v : c2v - c3v;
          out[kRemark].push_back(std::max({std::abs(c2v - c2_formula(x)), std::abs(c3v - c3_formula(x)), order}));
        }
      }
    });
  });

  const std::vector<Tally> t = tally(claims, samples);
  report.checks = finish_all(claims, t);
  // Direction counts for the observational q > 1 records.
  for (std::size_t k : {kIvsIIHigh, kIvsIIIHigh, kIVvsVHigh, kDvsDIIHigh, kDvsDIIIHigh}) {
    long above = 0;
    long below = 0;
    for (const auto& s : samples) {
      for (double e : s[k]) (e > 0.0 ? above : below) += 1;
    }
    report.checks[k].details["lhs_above_rhs"] = above;
    report.checks[k].details["lhs_at_or_below_rhs"] = below;
  }
  report.checks[kDvsDIII].details["rank_limit"] = 2;
  report.checks[kDvsDIIIHigh].details["rank_limit"] = 2;
  return report;
}

// ---------------------------------------------------------------------------

SuiteReport suite_monotonicity(const SuiteConfig& config) {
  config.validate();
  enum : std::size_t {
    kDataProcessing, kJointConvexity, kKraus, kIdentity, kStrongMono, kConvexity, kDephasing, kLocalB, kCount
  };
  const std::vector<Claim> claims{
      {"dq-data-processing", "D_q(Phi(rho) || Phi(sigma)) <= D_q(rho || sigma)", 1e-9, true},
      {"dq-joint-convexity", "D_q(sum p_n rho_n || sum p_n sigma_n) <= sum p_n D_q(rho_n || sigma_n)", 1e-9, true},
      {"kraus-inequality",
       "sum_n D_q(K_n rho K_n^dag || K_n sigma K_n^dag) >= sum_n p_n^q q_n^(1-q) D_q(rho_n || sigma_n), literal "
       "evaluation on unnormalized blocks",
       1e-9, false},
      {"identity-channel", "plumbing", 1e-12, true},
      {"c2-strong-monotonicity", "C_II(rho) >= sum_n p_n C_II(rho_n), selective incoherent channel", 1e-9, true},
      {"c2-convexity", "C_II(sum p_n rho_n) <= sum p_n C_II(rho_n)", 1e-9, true},
      {"dephasing-zero", "plumbing", 1e-12, true},
      {"q-local-b-monotonicity", "Q_q(rho_AB) >= Q_q((1 x Phi_B)(rho_AB))", 1e-6, true},
  };

  SuiteReport report;
  report.suite = "monotonicity";
  report.config = config_echo(config);
  std::vector<Excess> samples;
  report.wall_time = timed(config.timing, [&] {
    samples = run_samples(config.samples, config.threads, kCount, [&](long i, Excess& out) {
      const int d = coherence_dim(i);
      const Dims single = Dims::single(d);
      const BasisSet comp = BasisSet::computational(d);
      const DensityMatrix rho = random_density(single, cycled_rank(i, 3, d), sample_seed(config.seed, 11, i));
      const DensityMatrix sigma = random_density(single, d, sample_seed(config.seed, 12, i));
      const Channel phi = random_cptp(d, 1 + static_cast<int>(i % 3), sample_seed(config.seed, 13, i));
      const DensityMatrix phi_rho = apply_channel(phi, rho);
      const DensityMatrix phi_sigma = apply_channel(phi, sigma);
      const Channel id = identity_channel(d);

      const int n_mix = 2 + static_cast<int>(i % 3);
      const std::vector<double> p = random_probabilities(n_mix, sample_seed(config.seed, 14, i));
      std::vector<DensityMatrix> rhos;
      std::vector<DensityMatrix> sigmas;
      CMatrix rho_mix = CMatrix::Zero(d, d);
      CMatrix sigma_mix = CMatrix::Zero(d, d);
      for (int n = 0; n < n_mix; ++n) {
        const std::uint64_t s = derive_seed(sample_seed(config.seed, 15, i), static_cast<std::uint64_t>(n));
        rhos.push_back(random_density(single, 1 + n % d, derive_seed(s, 0)));
        sigmas.push_back(random_density(single, d, derive_seed(s, 1)));
        rho_mix += p[static_cast<std::size_t>(n)] * rhos.back().matrix();
        sigma_mix += p[static_cast<std::size_t>(n)] * sigmas.back().matrix();
      }
      const DensityMatrix rho_avg = validate_density(rho_mix, single);
      const DensityMatrix sigma_avg = validate_density(sigma_mix, single);

      const Channel incoherent = random_incoherent_channel(d, 2 + static_cast<int>(i % 2), sample_seed(config.seed, 16, i));
      const std::vector<ChannelOutcome> outcomes = channel_outcomes(incoherent, rho);
      const DensityMatrix dephased = apply_channel(dephasing_channel(CMatrix::Identity(d, d)), rho);

      const Dims bd = bipartite_dims(config, i);
      const DensityMatrix rab = random_density(bd, cycled_rank(i, 2, std::min(bd.total(), 4)), sample_seed(config.seed, 17, i));
      const Channel local_b = random_cptp(bd.b(), 1 + static_cast<int>(i % 3), sample_seed(config.seed, 18, i));
      const DensityMatrix rab_out = apply_channel(extend_to_b(local_b, bd.a()), rab);

      for (std::size_t qi = 0; qi < config.qs.size(); ++qi) {
        const TsallisQ q(config.qs[qi]);
        const ExtendedReal before = tsallis_relative_entropy(rho, sigma, q);
        out[kDataProcessing].push_back(excess(tsallis_relative_entropy(phi_rho, phi_sigma, q), before));
        const ExtendedReal same = tsallis_relative_entropy(apply_channel(id, rho), apply_channel(id, sigma), q);
        out[kIdentity].push_back(before.is_infinite() ? (same.is_infinite() ? 0.0 : 1.0)
                                                      : std::abs(same.value() - before.value()));

        double mixed_rhs = 0.0;
        bool rhs_infinite = false;
        for (int n = 0; n < n_mix; ++n) {
          const ExtendedReal dn = tsallis_relative_entropy(rhos[static_cast<std::size_t>(n)], sigmas[static_cast<std::size_t>(n)], q);
          rhs_infinite = rhs_infinite || dn.is_infinite();
          mixed_rhs += p[static_cast<std::size_t>(n)] * dn.value();
        }
        out[kJointConvexity].push_back(
            excess(tsallis_relative_entropy(rho_avg, sigma_avg, q), rhs_infinite ? ExtendedReal::infinity() : ExtendedReal(mixed_rhs)));

        // Kraus inequality, literal form; blocks with vanishing trace are skipped.
        double lhs = 0.0;
        double rhs = 0.0;
        bool lhs_infinite = false;
        bool kraus_rhs_infinite = false;
        for (const CMatrix& k : phi.kraus()) {
          const CMatrix a = k * rho.matrix() * k.adjoint();
          const CMatrix b = k * sigma.matrix() * k.adjoint();
          const double pn = a.trace().real();
          const double qn = b.trace().real();
          if (pn <= 1e-12 || qn <= 1e-12) continue;
          const ExtendedReal l = tsallis_relative_entropy_unnormalized((a + a.adjoint()) * 0.5, (b + b.adjoint()) * 0.5, q);
          lhs_infinite = lhs_infinite || l.is_infinite();
          lhs += l.is_finite() ? l.value() : 0.0;
          const ExtendedReal r = tsallis_relative_entropy(validate_density(a / pn, single), validate_density(b / qn, single), q);
          kraus_rhs_infinite = kraus_rhs_infinite || r.is_infinite();
          rhs += std::pow(pn, q.value()) * std::pow(qn, 1.0 - q.value()) * (r.is_finite() ? r.value() : 0.0);
        }
        if (!lhs_infinite) out[kKraus].push_back(kraus_rhs_infinite ? 1.0 : rhs - lhs);

        const double c2 = coherence_II(rho, comp, q);
        double avg = 0.0;
        for (const auto& o : outcomes) {
          if (o.post_state) avg += o.probability * coherence_II(*o.post_state, comp, q);
        }
        out[kStrongMono].push_back(avg - c2);

        double c2_avg = 0.0;
        for (int n = 0; n < n_mix; ++n) c2_avg += p[static_cast<std::size_t>(n)] * coherence_II(rhos[static_cast<std::size_t>(n)], comp, q);
        out[kConvexity].push_back(coherence_II(rho_avg, comp, q) - c2_avg);
        out[kDephasing].push_back(std::abs(coherence_II(dephased, comp, q)));

        const DiscordConfig dc = discord_config(config, derive_seed(sample_seed(config.seed, 19, i), qi));
        const double q_before = correlation_pair(rab, q, dc).first.value;
        const double q_after = correlation_pair(rab_out, q, dc).first.value;
        out[kLocalB].push_back(q_after - q_before);
      }
    });
  });
  report.checks = finish_all(claims, tally(claims, samples));
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// Spectrum (a, a, b, b) on 2x2 with a Haar eigenbasis, then an independent
// Haar rotation inside each degenerate eigenspace.
SpectralDecomposition degenerate_spectrum(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  const double a = 0.3 + 0.15 * uniform01(g);
  SpectralDecomposition sd;
  sd.values = RVector(4);
  sd.values << a, a, 0.5 - a, 0.5 - a;
  sd.vectors = haar_unitary(4, derive_seed(seed, 1));
  for (int block = 0; block < 2; ++block) {
    const CMatrix w = haar_unitary(2, derive_seed(seed, 2 + static_cast<std::uint64_t>(block)));
    sd.vectors.middleCols(2 * block, 2) = (sd.vectors.middleCols(2 * block, 2) * w).eval();
  }
  return sd;
}

SpectralDecomposition maximally_mixed_bell() {
  const double s = 1.0 / std::sqrt(2.0);
  SpectralDecomposition sd;
  sd.values = RVector::Constant(4, 0.25);
  sd.vectors = CMatrix::Zero(4, 4);
  sd.vectors(0, 0) = s;
  sd.vectors(3, 0) = s;
  sd.vectors(0, 1) = s;
  sd.vectors(3, 1) = -s;
  sd.vectors(1, 2) = s;
  sd.vectors(2, 2) = s;
  sd.vectors(1, 3) = s;
  sd.vectors(2, 3) = -s;
  return sd;
}

}  // namespace

SuiteReport suite_claim_audit(const SuiteConfig& config) {
  config.validate();
  enum : std::size_t { kAudit, kPureLemma, kLowerPure, kLowerMixed, kCounterexample, kSaturation, kThreeWay, kCount };
  const std::vector<Claim> claims{
      {"lemma-2-audit", "N_Q(rho) = sum_ik lambda_k m_ik^(1/q), mixed states", 1e-10, false},
      {"lemma-2-pure", "N_Q(psi) = sum_i m_i^(1/q)", 1e-10, true},
      {"thm-lower-pure", "lower bound = closed form on pure states", 1e-10, true},
      {"thm-lower-mixed", "lower bound <= Q_q(rho), mixed states", 1e-6, false},
      {"lemma-2-counterexample", "I/4 in the Bell eigenbasis, q=1/2: formula vs direct N_Q", 1e-10, false},
      {"thm-upper-saturation", "state-independent bound attained on sum_ij (1/d)|ij>", 1e-6, false},
      {"remark-three-way", "C_I = D_q = Q_q on sum_ij (1/d)|ij>", 1e-6, false},
  };

  SuiteReport report;
  report.suite = "claim-audit";
  report.config = config_echo(config);

  struct AuditSplit {
    long degenerate_mismatch = 0;
    long nondegenerate_mismatch = 0;
    double degenerate_max = 0.0;
    double nondegenerate_max = 0.0;
  };
  std::vector<AuditSplit> splits(static_cast<std::size_t>(config.samples));
  ordered_json fixed = ordered_json::object();

  std::vector<Excess> samples;
  report.wall_time = timed(config.timing, [&] {
    samples = run_samples(config.samples, config.threads, kCount, [&](long i, Excess& out) {
      const Dims bd = bipartite_dims(config, i);
      const BasisSet basis_a = BasisSet::from_unitary(haar_unitary(bd.a(), sample_seed(config.seed, 21, i)));
      const PureState psi = random_pure(bd, sample_seed(config.seed, 22, i));
      const DensityMatrix pure_rho = psi.projector();
      const DensityMatrix mixed = random_density(bd, bd.total(), sample_seed(config.seed, 23, i));
      const SpectralDecomposition mixed_sd = eigh(mixed);
      const bool square = bd.a() == 2 && bd.b() == 2;
      std::optional<SpectralDecomposition> degenerate;
      if (square) degenerate = degenerate_spectrum(sample_seed(config.seed, 24, i));
      AuditSplit& split = splits[static_cast<std::size_t>(i)];

      for (std::size_t qi = 0; qi < config.qs.size(); ++qi) {
        const TsallisQ q(config.qs[qi]);
        out[kPureLemma].push_back(std::abs(n_q_lemma2(pure_rho, basis_a, q) - n_q_direct(pure_rho, basis_a, q)));
        for (BoundVariant v : {BoundVariant::I, BoundVariant::II}) {
          const ClosedForm cf = v == BoundVariant::I ? ClosedForm::D : ClosedForm::D_II;
          out[kLowerPure].push_back(std::abs(lower_bound(v, pure_rho, q) - pure_closed_form(cf, psi, q)));
        }

        const double nd_gap = std::abs(n_q_lemma2(mixed_sd, bd, basis_a, q) - n_q_direct(mixed, basis_a, q));
        out[kAudit].push_back(nd_gap);
        if (nd_gap > 1e-10) ++split.nondegenerate_mismatch;
        split.nondegenerate_max = std::max(split.nondegenerate_max, nd_gap);
        if (degenerate) {
          const DensityMatrix rho_deg = validate_density(degenerate->reconstruct(), bd);
          const double gap = std::abs(n_q_lemma2(*degenerate, bd, basis_a, q) - n_q_direct(rho_deg, basis_a, q));
          out[kAudit].push_back(gap);
          if (gap > 1e-10) ++split.degenerate_mismatch;
          split.degenerate_max = std::max(split.degenerate_max, gap);
        }

        const DiscordConfig dc = discord_config(config, derive_seed(sample_seed(config.seed, 25, i), qi));
        const auto [q1, q2] = correlation_pair(mixed, q, dc);
        out[kLowerMixed].push_back(lower_bound(BoundVariant::I, mixed_sd, bd, q) - q1.value);
        out[kLowerMixed].push_back(lower_bound(BoundVariant::II, mixed_sd, bd, q) - q2.value);
      }

      if (i != 0) return;
      // Fixed states, evaluated once.
      const TsallisQ qh(0.5);
      const Dims two(Dims::bipartite(2, 2));
      const SpectralDecomposition bell_basis = maximally_mixed_bell();
      const DensityMatrix mixed4 = validate_density(CMatrix::Identity(4, 4) * 0.25, two);
      const BasisSet comp_a = BasisSet::computational(2);
      const double lemma2 = n_q_lemma2(bell_basis, two, comp_a, qh);
      const double direct = n_q_direct(mixed4, comp_a, qh);
      out[kCounterexample].push_back(std::abs(lemma2 - direct));
      ordered_json ce;
      ce["q"] = 0.5;
      ce["lemma2"] = lemma2;
      ce["direct"] = direct;
      ce["lower_bound_I"] = lower_bound(BoundVariant::I, bell_basis, two, qh);
      ce["discord_I"] = discord_pair(mixed4, qh, discord_config(config, config.seed)).first.value;
      fixed["counterexample"] = ce;

      CVector plus = CVector::Constant(4, 0.5);
      const DensityMatrix product = PureState::normalized(plus, two).projector();
      const BasisSet comp4 = BasisSet::computational(4);
      ordered_json sat = ordered_json::array();
      for (std::size_t qi = 0; qi < config.qs.size(); ++qi) {
        const TsallisQ q(config.qs[qi]);
        const DiscordConfig dc = discord_config(config, derive_seed(config.seed, 26 + qi));
        const double c1 = coherence_I(product, comp4, q);
        const double dq = discord_pair(product, q, dc).first.value;
        const double qq = correlation_pair(product, q, dc).first.value;
        const UpperBound ub = upper_bound(BoundVariant::I, product, q);
        out[kSaturation].push_back(std::abs(ub.state_independent - dq));
        out[kThreeWay].push_back(std::max({std::abs(c1 - dq), std::abs(c1 - qq), std::abs(dq - qq)}));
        ordered_json row;
        row["q"] = q.value();
        row["coherence_I"] = c1;
        row["discord_I"] = dq;
        row["correlation_Q"] = qq;
        row["upper_state_dependent"] = ub.state_dependent;
        row["upper_state_independent"] = ub.state_independent;
        sat.push_back(std::move(row));
      }
      fixed["saturation"] = std::move(sat);
    });
  });

  report.checks = finish_all(claims, tally(claims, samples));
  AuditSplit total;
  for (const auto& s : splits) {
    total.degenerate_mismatch += s.degenerate_mismatch;
    total.nondegenerate_mismatch += s.nondegenerate_mismatch;
    total.degenerate_max = std::max(total.degenerate_max, s.degenerate_max);
    total.nondegenerate_max = std::max(total.nondegenerate_max, s.nondegenerate_max);
  }
  auto& audit = report.checks[kAudit].details;
  audit["degenerate_mismatches"] = total.degenerate_mismatch;
  audit["degenerate_max_gap"] = total.degenerate_max;
  audit["nondegenerate_mismatches"] = total.nondegenerate_mismatch;
  audit["nondegenerate_max_gap"] = total.nondegenerate_max;
  if (fixed.contains("counterexample")) report.checks[kCounterexample].details = fixed["counterexample"];
  if (fixed.contains("saturation")) {
    report.checks[kSaturation].details["rows"] = fixed["saturation"];
    report.checks[kThreeWay].details["rows"] = fixed["saturation"];
  }
  return report;
}

}  // namespace tsq
