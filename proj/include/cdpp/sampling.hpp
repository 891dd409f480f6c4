#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <unordered_map>
#include <vector>

#include "cdpp/counting.hpp"
#include "cdpp/parallel.hpp"

namespace cdpp::sampling {

using counting::CountOptions;
using counting::LinearFamily;
using counting::Mass;
using genpoly::GenPolyOracle;

/// One exact draw together with the conditional probabilities that produced
/// it; the product of the chain factors (p or 1-p per decision) equals the
/// sampled set's probability under the constrained measure.
struct SampleOutcome {
  std::vector<int> subset;
  std::uint64_t mask = 0;
  std::vector<double> chain_probs;   // P(e in S | decisions so far)
  std::vector<bool> decisions;       // true = included
  std::uint64_t seed = 0;
};

namespace detail {

struct MaskPairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
    return static_cast<std::size_t>(mix_seed(k.first, k.second));
  }
};

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Cheap-to-seed generator for Monte-Carlo walks (mt19937_64 pays a ~1us
/// state initialization per seed, which dominates short walks).
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t operator()() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
};

// Exact Bernoulli decision for a rational probability: compare against a
// 128-bit dyadic uniform, so the residual bias is below 2^-128.
inline bool coin(std::mt19937_64& rng, const Rational& p) {
  if (p <= 0) {
    rng();
    rng();
    return false;
  }
  if (p >= 1) {
    rng();
    rng();
    return true;
  }
  Integer num(0);
  std::uint64_t hi = rng(), lo = rng();
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(hi), 0, 0, &hi);
  num <<= 64;
  Integer lo_z(0);
  mpz_import(lo_z.get_mpz_t(), 1, 1, sizeof(lo), 0, 0, &lo);
  num += lo_z;
  Integer den(1);
  den <<= 128;
  return Rational(num, den) < p;
}

inline bool coin(std::mt19937_64& rng, double p) {
  double hi = uniform_unit(rng);
  rng();  // keep the stream aligned with the exact backend
  return hi < p;
}

}  // namespace detail

/// Sequential-conditioning sampler over an oracle and a linear family.
/// Conditioned masses M(Y, N) are memoized across draws: the decision tree of
/// an instance has at most 2^{m+1} states, and repeated draws only pay for
/// states they visit first. Thread-safe; oracle evaluations stay pure.
template <class S>
class Sampler {
 public:
  Sampler(GenPolyOracle<S> oracle, LinearFamily fam, CountOptions opts = {})
      : oracle_(std::move(oracle)), fam_(std::move(fam)), opts_(opts) {
    require(oracle_.arity == fam_.arity, ErrorCode::ArityMismatch,
            "family arity does not match oracle");
    require(oracle_.arity <= 63, ErrorCode::TooLarge,
            "sampling uses 64-bit masks");
    m_ = oracle_.arity;
    if constexpr (!scalar_traits<S>::is_exact) {
      // Constrained float masses below noise level count as zero.
      std::vector<S> ones(static_cast<std::size_t>(m_),
                          scalar_traits<S>::from_long(1));
      double scale = std::abs(oracle_.eval(std::span<const S>(ones)));
      zero_floor_ = 1e-9 * std::max(1.0, scale);
    }
  }

  int ground_size() const { return m_; }

  /// M(Y, N): constrained mass of supersets of Y avoiding N.
  real_of_t<S> mass(std::uint64_t Y, std::uint64_t N) const {
    const std::pair<std::uint64_t, std::uint64_t> key{Y, N};
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    auto value = counting::conditioned_mass(oracle_, fam_, Y, N, opts_).value;
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, inserted] = memo_.emplace(key, std::move(value));
    return it->second;
  }

  real_of_t<S> total() const { return mass(0, 0); }

  /// P(e in S | Y subseteq S, N cap S = empty) under the constrained measure.
  real_of_t<S> inclusion_prob(std::uint64_t Y, std::uint64_t N, int e) const {
    require((Y & N) == 0, ErrorCode::VariableClash,
            "forced-in and forced-out sets overlap");
    if (Y >> e & 1ull) return real_of_t<S>(1);
    if (N >> e & 1ull) return real_of_t<S>(0);
    real_of_t<S> denom = mass(Y, N);
    if (is_zero(denom))
      fail(ErrorCode::NullMass, "conditioning on a null event");
    real_of_t<S> num = mass(Y | (1ull << e), N);
    return clamp_prob(num / denom);
  }

  SampleOutcome draw(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    real_of_t<S> denom = total();
    if (is_zero(denom))
      fail(ErrorCode::NullMass, "constrained family has zero total mass");
    SampleOutcome out;
    out.seed = seed;
    std::uint64_t Y = 0, N = 0;
    for (int e = 0; e < m_; ++e) {
      real_of_t<S> num = mass(Y | (1ull << e), N);
      real_of_t<S> p = clamp_prob(num / denom);
      bool include = detail::coin(rng, p);
      out.chain_probs.push_back(to_double_value(p));
      out.decisions.push_back(include);
      if (include) {
        Y |= 1ull << e;
        denom = num;
      } else {
        N |= 1ull << e;
        denom = denom - num;
        if constexpr (!scalar_traits<S>::is_exact) {
          if (denom < 0.0) denom = 0.0;
        }
      }
    }
    out.mask = Y;
    for (int e = 0; e < m_; ++e)
      if (Y >> e & 1ull) out.subset.push_back(e);
    require(satisfies_family(Y), ErrorCode::NumericalResolutionExceeded,
            "sampled set violates its constraints");
    return out;
  }

  bool satisfies_family(std::uint64_t mask) const {
    for (const auto& con : fam_.constraints) {
      long long cost = 0;
      for (int i = 0; i < m_; ++i)
        if (mask >> i & 1ull) cost += con.c[static_cast<std::size_t>(i)];
      if (!con.K.contains(cost)) return false;
    }
    return true;
  }

  using ProbSnapshot =
      std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double,
                         detail::MaskPairHash>;

  /// Monte-Carlo walk for estimator batches: per-state probabilities are
  /// derived once from the exact masses, cached as doubles, and the walk pays
  /// one hash lookup and one coin per element. The per-step rounding (one
  /// double quotient) is far below any statistical resolution. An optional
  /// read-only snapshot makes warm walks lock-free.
  std::uint64_t draw_mask_fast(std::uint64_t seed,
                               const ProbSnapshot* snapshot = nullptr) const {
    detail::SplitMix64 rng(seed);
    std::uint64_t Y = 0, N = 0;
    for (int e = 0; e < m_; ++e) {
      double p;
      if (snapshot) {
        auto it = snapshot->find({Y, N});
        p = it != snapshot->end() ? it->second : step_prob(Y, N, e);
      } else {
        p = step_prob(Y, N, e);
      }
      if (rng.unit() < p)
        Y |= 1ull << e;
      else
        N |= 1ull << e;
    }
    return Y;
  }

  ProbSnapshot snapshot_probs() const {
    std::lock_guard<std::mutex> lk(mu_);
    return prob_cache_;
  }

 private:
  double step_prob(std::uint64_t Y, std::uint64_t N, int e) const {
    const std::pair<std::uint64_t, std::uint64_t> key{Y, N};
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = prob_cache_.find(key);
      if (it != prob_cache_.end()) return it->second;
    }
    real_of_t<S> denom = mass(Y, N);
    if (is_zero(denom))
      fail(ErrorCode::NullMass, "conditioning on a null event");
    real_of_t<S> num = mass(Y | (1ull << e), N);
    double p = to_double_value(clamp_prob(num / denom));
    std::lock_guard<std::mutex> lk(mu_);
    prob_cache_.emplace(key, p);
    return p;
  }

  bool is_zero(const real_of_t<S>& v) const {
    if constexpr (scalar_traits<S>::is_exact)
      return v == 0;
    else
      return v <= zero_floor_;
  }
  static double to_double_value(const real_of_t<S>& v) {
    if constexpr (scalar_traits<S>::is_exact)
      return v.get_d();
    else
      return v;
  }
  real_of_t<S> clamp_prob(real_of_t<S> p) const {
    if constexpr (scalar_traits<S>::is_exact) {
      require(p >= 0 && p <= 1, ErrorCode::NumericalResolutionExceeded,
              "exact conditional probability outside [0,1]");
      return p;
    } else {
      require(p >= -1e-9 && p <= 1.0 + 1e-9,
              ErrorCode::NumericalResolutionExceeded,
              "conditional probability outside [0,1] beyond tolerance");
      return std::min(1.0, std::max(0.0, p));
    }
  }

  GenPolyOracle<S> oracle_;
  LinearFamily fam_;
  CountOptions opts_;
  int m_ = 0;
  double zero_floor_ = 0.0;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::pair<std::uint64_t, std::uint64_t>,
                             real_of_t<S>, detail::MaskPairHash>
      memo_;
  mutable std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double,
                             detail::MaskPairHash>
      prob_cache_;
};

/// P(e in S | Y subseteq S, N cap S = empty); one-shot convenience wrapper.
template <class S>
real_of_t<S> conditional_inclusion_prob(const GenPolyOracle<S>& oracle,
                                        const LinearFamily& fam,
                                        std::uint64_t Y, std::uint64_t N, int e,
                                        const CountOptions& opts = {}) {
  Sampler<S> session(oracle, fam, opts);
  return session.inclusion_prob(Y, N, e);
}

template <class S>
SampleOutcome sample(const GenPolyOracle<S>& oracle, const LinearFamily& fam,
                     std::uint64_t seed, const CountOptions& opts = {}) {
  Sampler<S> session(oracle, fam, opts);
  return session.draw(seed);
}

struct EstimatorOptions {
  double epsilon = 0.1;
  int confidence_log2 = 0;  // 0 = max(m, 7)
  std::size_t max_draws_per_estimate = 20'000'000;
};

struct EstimateReport {
  int iterations = 0;
  std::size_t draws = 0;
};

/// Reverse direction of the counting/sampling equivalence: estimates the
/// constrained total mass using only the sampler. Repeatedly conditions on
/// S subseteq U (zeroing the complement), strips elements whose removal
/// probability is large enough, accumulates the estimated removal factors,
/// and stops once U itself carries almost all of the conditioned mass.
template <class S>
class MassEstimator {
 public:
  MassEstimator(GenPolyOracle<S> oracle, LinearFamily fam,
                CountOptions opts = {})
      : oracle_(std::move(oracle)), fam_(std::move(fam)), opts_(opts) {
    m_ = oracle_.arity;
    require(m_ <= 63, ErrorCode::TooLarge, "estimator uses 64-bit masks");
  }

  Mass<real_of_t<S>> estimate(double epsilon, std::uint64_t seed,
                              EstimateReport* report = nullptr,
                              const EstimatorOptions& base_opts = {}) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::ParseError,
            "epsilon must lie in (0,1)");
    const std::uint64_t full = m_ == 0 ? 0ull : (1ull << m_) - 1ull;
    auto root = session(full);
    if (is_zero(root->total()))
      fail(ErrorCode::NullMass, "constrained family has zero total mass");

    const double md = std::max(1, m_);
    const int t = base_opts.confidence_log2 > 0
                      ? base_opts.confidence_log2
                      : std::max(m_, 7);
    // Union bound over at most 2(m+1) Hoeffding estimates keeps the overall
    // failure probability below 2^-t.
    const double log_term =
        (static_cast<double>(t) + 2.0) * std::log(2.0) +
        std::log(2.0 * (md + 1.0));
    const double theta = 1.0 - std::min(1.0 / (2.0 * md), epsilon / 4.0);
    const double delta_q = std::min(1.0 / (4.0 * md), epsilon / 8.0);
    const std::size_t n_q = draws_for(log_term, delta_q, base_opts);

    std::uint64_t U = full;
    real_of_t<S> X(1);
    int iter = 0;
    std::size_t draws_total = 0;
    while (true) {
      require(iter <= m_ + 1, ErrorCode::NonConvergence,
              "stripping loop exceeded the ground-set size");
      auto sess = session(U);
      Batch pilot = run_batch(sess, U, n_q, seed, 2 * iter);
      draws_total += pilot.draws;
      double q_hat = static_cast<double>(pilot.equal_count) /
                     static_cast<double>(pilot.draws);
      if (q_hat > theta || U == 0) break;
      int e = -1;
      std::size_t best = 0;
      for (int i = 0; i < m_; ++i)
        if (U >> i & 1ull) {
          std::size_t cnt = pilot.removal_counts[static_cast<std::size_t>(i)];
          if (e < 0 || cnt > best) {
            e = i;
            best = cnt;
          }
        }
      double p_hat = static_cast<double>(best) / static_cast<double>(pilot.draws);
      // The pilot batch localizes p within delta_q with the same confidence.
      double p_lb = std::max(p_hat - delta_q, 1.0 / (2.0 * md * md));
      double delta_e = (epsilon / (2.0 * md)) * p_lb;
      std::size_t n_e = draws_for(log_term, delta_e, base_opts);
      Batch refine = run_batch(sess, U, n_e, seed, 2 * iter + 1);
      draws_total += refine.draws;
      std::size_t removed = refine.removal_counts[static_cast<std::size_t>(e)];
      real_of_t<S> rho = ratio(removed, refine.draws, delta_e);
      X *= rho;
      U &= ~(1ull << e);
      ++iter;
    }
    // Telescoping: Z_{[m]} = Z_{U'} / prod_e p_e and Z_{U'} ~= mu(U') at
    // termination, so the total mass estimate is mu(U') divided by the
    // product of the removal-probability estimates.
    real_of_t<S> mu_u = root->mass(U, full & ~U);
    Mass<real_of_t<S>> out;
    out.value = mu_u / X;
    out.error_bound = 2.0 * epsilon * to_double_value(out.value);
    if (report) {
      report->iterations = iter;
      report->draws = draws_total;
    }
    return out;
  }

 private:
  struct Batch {
    std::size_t draws = 0;
    std::size_t equal_count = 0;
    std::vector<std::size_t> removal_counts;
  };

  std::shared_ptr<Sampler<S>> session(std::uint64_t U) {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = sessions_.find(U);
    if (it != sessions_.end()) return it->second;
    const std::uint64_t full = m_ == 0 ? 0ull : (1ull << m_) - 1ull;
    std::uint64_t outside = full & ~U;
    GenPolyOracle<S> restricted = oracle_;
    LinearFamily fam = fam_;
    if (outside != 0) {
      genpoly::TransformProgram zp;
      zp.source_arity = m_;
      std::vector<int> survivors;
      for (int i = 0; i < m_; ++i) {
        if (outside >> i & 1ull)
          zp.zeroed.push_back(i);
        else
          survivors.push_back(i);
      }
      restricted = genpoly::transform(oracle_, zp);
      LinearFamily sub;
      sub.arity = static_cast<int>(survivors.size());
      for (const auto& con : fam_.constraints) {
        counting::LinearConstraint rc;
        rc.K = con.K;
        for (int i : survivors)
          rc.c.push_back(con.c[static_cast<std::size_t>(i)]);
        sub.constraints.push_back(std::move(rc));
      }
      fam = std::move(sub);
    }
    auto sess = std::make_shared<Sampler<S>>(std::move(restricted),
                                             std::move(fam), opts_);
    sessions_.emplace(U, sess);
    return sess;
  }

  Batch run_batch(const std::shared_ptr<Sampler<S>>& sess, std::uint64_t U,
                  std::size_t n, std::uint64_t seed, int phase) {
    Batch batch;
    batch.draws = n;
    batch.removal_counts.assign(static_cast<std::size_t>(m_), 0);
    // Map restricted-slot masks back to original indices.
    std::vector<int> positions;
    for (int i = 0; i < m_; ++i)
      if (U >> i & 1ull) positions.push_back(i);
    const std::uint64_t restricted_full =
        positions.empty() ? 0ull : (1ull << positions.size()) - 1ull;
    std::vector<std::uint64_t> results(n);
    // Warm the probability cache serially, then walk lock-free on a snapshot.
    const std::size_t warm = std::min<std::size_t>(n, 1024);
    for (std::size_t i = 0; i < warm; ++i) {
      std::uint64_t s =
          mix_seed(seed, (static_cast<std::uint64_t>(phase) << 40) | i);
      results[i] = sess->draw_mask_fast(s);
    }
    auto snapshot = sess->snapshot_probs();
    parallel_for(n - warm, [&](std::size_t idx) {
      std::size_t i = idx + warm;
      std::uint64_t s =
          mix_seed(seed, (static_cast<std::uint64_t>(phase) << 40) | i);
      results[i] = sess->draw_mask_fast(s, &snapshot);
    });
    for (std::size_t i = 0; i < n; ++i) {
      if (results[i] == restricted_full) ++batch.equal_count;
      for (std::size_t s = 0; s < positions.size(); ++s)
        if (!(results[i] >> s & 1ull))
          ++batch.removal_counts[static_cast<std::size_t>(positions[s])];
    }
    return batch;
  }

  static std::size_t draws_for(double log_term, double delta,
                               const EstimatorOptions& opts) {
    double n = log_term / (2.0 * delta * delta);
    n = std::min(n, static_cast<double>(opts.max_draws_per_estimate));
    return static_cast<std::size_t>(std::max(64.0, std::ceil(n)));
  }

  static real_of_t<S> ratio(std::size_t num, std::size_t den, double floor_val) {
    if constexpr (scalar_traits<S>::is_exact) {
      Rational r(static_cast<long>(num), static_cast<long>(den));
      r.canonicalize();
      if (r == 0) r = rational_from_double(floor_val);
      return r;
    } else {
      double r = static_cast<double>(num) / static_cast<double>(den);
      return r == 0.0 ? floor_val : r;
    }
  }

  static bool is_zero(const real_of_t<S>& v) {
    if constexpr (scalar_traits<S>::is_exact)
      return v == 0;
    else
      return v <= 0.0;
  }
  static double to_double_value(const real_of_t<S>& v) {
    if constexpr (scalar_traits<S>::is_exact)
      return v.get_d();
    else
      return v;
  }

  GenPolyOracle<S> oracle_;
  LinearFamily fam_;
  CountOptions opts_;
  int m_ = 0;
  std::mutex mu_;
  std::unordered_map<std::uint64_t, std::shared_ptr<Sampler<S>>> sessions_;
};

/// One-shot convenience wrapper around MassEstimator.
template <class S>
Mass<real_of_t<S>> estimate_mass_via_sampler(const GenPolyOracle<S>& oracle,
                                             const LinearFamily& fam,
                                             double epsilon, std::uint64_t seed,
                                             const CountOptions& opts = {}) {
  MassEstimator<S> est(oracle, fam, opts);
  return est.estimate(epsilon, seed);
}

}  // namespace cdpp::sampling
