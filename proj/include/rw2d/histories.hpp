#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "rw2d/bigint.hpp"
#include "rw2d/excursion.hpp"
#include "rw2d/rng.hpp"

namespace rw2d {

/// Upcrossing-count vector m = (m_2, ..., m_n) of a first-passage level
/// history; |m| = 2 * sum m_j + 1 is the history length in level steps.
struct HistoryVector {
    int n = 2;
    std::vector<std::int64_t> m; // m[j] = m_{j+2}, size n-1

    std::int64_t m_at(int level) const { return m.at(static_cast<std::size_t>(level - 2)); }
    std::int64_t upcross_total() const;
    std::int64_t length() const { return 2 * upcross_total() + 1; } // |m|
    void validate() const;
};

/// Number of histories realizing m: prod_{l=2}^{n-1} C(m_{l+1}+m_l-1, m_l-1),
/// exact; the empty product (n = 2) is 1, and a factor with m_l = 0 is
/// 1 if m_{l+1} = 0 and 0 otherwise.
BigUint history_count(const HistoryVector& h);

/// Probability (1/2)^{|m| - m_n} of any single history realizing m under
/// the idealized level chain (fair up/down at levels 1..n-1, forced
/// descent at n, absorption at 0).
double history_probability(const HistoryVector& h);
Dyadic history_probability_dyadic(const HistoryVector& h);

struct ChainSample {
    HistoryVector history;
    bool truncated = false;
};

/// Samples the idealized level chain to absorption, recording upcrossings.
ChainSample level_chain_sample(int n, Rng& rng, std::uint64_t step_cap = 100'000'000ULL);

/// log of one joint-law factor C(m_next+m-1, m-1) (1/2)^{m_next+m}
/// (the m-fold negative binomial at p = 1/2; a point mass at 0 for m = 0).
double nb_factor_log(std::int64_t m, std::int64_t m_next);

/// Conditional pmf P(next = j | current = m) of the idealized chain.
double nb_conditional_pmf(std::int64_t m, std::int64_t j);

/// log joint pmf of (m_{l+1},...,m_n) given m_l for the idealized chain.
double excursion_joint_law_log(std::int64_t m_l, std::span<const std::int64_t> tail);

/// Admissible integer values of m_level under the success criterion:
/// {1} below k0, the integers of [frak - level, frak + level] from k0 up.
std::vector<std::int64_t> admissible_counts(const SuccessCriterion& c, int level);

/// log of the sum over admissible histories of
/// prod_{l=2}^{n-1} C(m_{l+1}+m_l-1, m_l-1) (1/2)^{m_{l+1}+m_l},
/// by a forward DP in log space. Returns -inf on an empty sum.
double successful_prob_dp(double a, int n);

/// The same sum by exact dyadic enumeration (oracle; small n only).
double log_qn_bruteforce(double a, int n, std::size_t max_terms = 2'000'000);

/// Central-band binomial mass against the k^{-3a-1}/sqrt(log k) scale.
double stirling_band(double a, int k);

/// I(lambda) = -(1+l)log(1+l) + l log l + l log 2 + log 2.
double rate_I(double lambda);

struct MinPhi {
    double value = 0.0;
    double argmin = 0.0;
    bool on_boundary = false; // beta < alpha: minimum clamped to phi = 0
};

/// inf_phi (phi*alpha - phi/(1+phi)*beta) = -(sqrt(beta)-sqrt(alpha))^2
/// at phi = sqrt(beta/alpha) - 1 (for beta >= alpha).
MinPhi min_phi(double alpha, double beta);

/// Paley-Zygmund: P(W >= lambda E W) >= (1-lambda)^2 (E W)^2 / E(W^2).
double pz_bound(double mean, double second_moment, double lambda);

} // namespace rw2d
