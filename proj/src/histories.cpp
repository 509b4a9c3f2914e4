#include "rw2d/histories.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rw2d/stats.hpp"

namespace rw2d {

static constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::int64_t HistoryVector::upcross_total() const {
    std::int64_t s = 0;
    for (const auto v : m) s += v;
    return s;
}

void HistoryVector::validate() const {
    if (n < 2) throw std::invalid_argument("HistoryVector: n must be >= 2");
    if (static_cast<int>(m.size()) != n - 1)
        throw std::invalid_argument("HistoryVector: need entries m_2..m_n");
    for (const auto v : m)
        if (v < 0) throw std::invalid_argument("HistoryVector: negative upcrossing count");
}

BigUint history_count(const HistoryVector& h) {
    h.validate();
    BigUint r(1);
    for (int l = 2; l <= h.n - 1; ++l) {
        const std::int64_t ml = h.m_at(l), mn = h.m_at(l + 1);
        if (ml == 0) {
            if (mn == 0) continue; // C(-1,-1) := 1
            return BigUint(0);     // nothing above a dead level
        }
        r = r * big_binomial(static_cast<std::uint64_t>(mn + ml - 1),
                             static_cast<std::uint64_t>(ml - 1));
        if (r.is_zero()) return r;
    }
    return r;
}

double history_probability(const HistoryVector& h) {
    h.validate();
    const std::int64_t exponent = h.length() - h.m.back();
    if (exponent > 1070) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(exponent));
}

Dyadic history_probability_dyadic(const HistoryVector& h) {
    h.validate();
    return Dyadic(BigUint(1), static_cast<std::size_t>(h.length() - h.m.back()));
}

ChainSample level_chain_sample(int n, Rng& rng, std::uint64_t step_cap) {
    if (n < 2) throw std::invalid_argument("level_chain_sample: n must be >= 2");
    ChainSample out;
    out.history.n = n;
    out.history.m.assign(static_cast<std::size_t>(n - 1), 0);
    int level = 1;
    for (std::uint64_t step = 0; step < step_cap; ++step) {
        if (level == 0) return out;
        if (level == n || !rng.coin()) {
            --level; // descent from the top level is forced
        } else {
            ++level;
            ++out.history.m[static_cast<std::size_t>(level - 2)];
        }
    }
    out.truncated = level != 0;
    return out;
}

double nb_factor_log(std::int64_t m, std::int64_t m_next) {
    if (m < 0 || m_next < 0) throw std::invalid_argument("nb_factor_log: negative count");
    if (m == 0) return m_next == 0 ? 0.0 : kNegInf;
    return log_choose(static_cast<double>(m_next + m - 1), static_cast<double>(m - 1)) -
           static_cast<double>(m_next + m) * M_LN2;
}

double nb_conditional_pmf(std::int64_t m, std::int64_t j) {
    return std::exp(nb_factor_log(m, j));
}

double excursion_joint_law_log(std::int64_t m_l, std::span<const std::int64_t> tail) {
    if (m_l < 1) throw std::invalid_argument("excursion_joint_law_log: m_l must be >= 1");
    double acc = 0.0;
    std::int64_t cur = m_l;
    for (const std::int64_t nxt : tail) {
        acc += nb_factor_log(cur, nxt);
        cur = nxt;
    }
    return acc;
}

std::vector<std::int64_t> admissible_counts(const SuccessCriterion& c, int level) {
    if (level < 2 || level > c.n) throw std::invalid_argument("admissible_counts: bad level");
    if (level < c.k0()) return {1};
    const double f = c.frak(level);
    const auto lo = static_cast<std::int64_t>(std::ceil(f - level));
    const auto hi = static_cast<std::int64_t>(std::floor(f + level));
    std::vector<std::int64_t> out;
    for (std::int64_t v = std::max<std::int64_t>(lo, 0); v <= hi; ++v) out.push_back(v);
    return out;
}

double successful_prob_dp(double a, int n) {
    if (!(a > 0.0 && a < 2.0)) throw std::invalid_argument("successful_prob_dp: need 0 < a < 2");
    if (n < 2) throw std::invalid_argument("successful_prob_dp: n must be >= 2");
    const SuccessCriterion crit{a, n};

    std::vector<std::int64_t> cur = admissible_counts(crit, 2);
    if (cur.empty()) return kNegInf;
    std::vector<double> w(cur.size(), 0.0);
    for (int level = 2; level < n; ++level) {
        const std::vector<std::int64_t> nxt = admissible_counts(crit, level + 1);
        if (nxt.empty()) return kNegInf;
        std::vector<double> wn(nxt.size(), kNegInf);
        std::vector<double> scratch(cur.size());
        for (std::size_t j = 0; j < nxt.size(); ++j) {
            for (std::size_t i = 0; i < cur.size(); ++i)
                scratch[i] = w[i] + nb_factor_log(cur[i], nxt[j]);
            wn[j] = log_sum_exp(scratch);
        }
        cur = nxt;
        w = std::move(wn);
    }
    return log_sum_exp(w);
}

double log_qn_bruteforce(double a, int n, std::size_t max_terms) {
    if (!(a > 0.0 && a < 2.0)) throw std::invalid_argument("log_qn_bruteforce: need 0 < a < 2");
    if (n < 2) throw std::invalid_argument("log_qn_bruteforce: n must be >= 2");
    const SuccessCriterion crit{a, n};

    std::vector<std::vector<std::int64_t>> bands;
    std::size_t combos = 1;
    for (int level = 2; level <= n; ++level) {
        bands.push_back(admissible_counts(crit, level));
        if (bands.back().empty()) return kNegInf;
        combos *= bands.back().size();
        if (combos > max_terms)
            throw std::invalid_argument("log_qn_bruteforce: admissible box too large");
    }

    Dyadic total;
    std::vector<std::size_t> idx(bands.size(), 0);
    for (;;) {
        // one exact product term
        Dyadic term = Dyadic::one();
        bool zero = false;
        for (std::size_t l = 0; l + 1 < bands.size(); ++l) {
            const std::int64_t ml = bands[l][idx[l]], mn = bands[l + 1][idx[l + 1]];
            if (ml == 0) {
                if (mn != 0) {
                    zero = true;
                    break;
                }
                continue;
            }
            term = term * Dyadic(big_binomial(static_cast<std::uint64_t>(mn + ml - 1),
                                              static_cast<std::uint64_t>(ml - 1)),
                                 static_cast<std::size_t>(mn + ml));
        }
        if (!zero) total += term;
        // odometer
        std::size_t d = 0;
        while (d < idx.size() && ++idx[d] == bands[d].size()) idx[d++] = 0;
        if (d == idx.size()) break;
    }
    if (total.is_zero()) return kNegInf;
    return total.log();
}

double stirling_band(double a, int k) {
    if (k < 2) throw std::invalid_argument("stirling_band: k must be >= 2");
    const SuccessCriterion crit{a, std::max(4, k + 1)};
    const auto round_half_up = [](double x) {
        return static_cast<std::int64_t>(std::floor(x + 0.5));
    };
    const std::int64_t m = round_half_up(crit.frak(k + 1));
    const std::int64_t l = round_half_up(crit.frak(k)) - 1;
    const double log_b = log_choose(static_cast<double>(m + l), static_cast<double>(l)) -
                         static_cast<double>(m + l + 1) * M_LN2;
    const double kk = static_cast<double>(k);
    const double log_scale = -(3.0 * a + 1.0) * std::log(kk) - 0.5 * std::log(std::log(kk));
    return std::exp(log_b - log_scale);
}

double rate_I(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rate_I: lambda must be > 0");
    return -(1.0 + lambda) * std::log1p(lambda) + lambda * std::log(lambda) +
           lambda * M_LN2 + M_LN2;
}

MinPhi min_phi(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("min_phi: alpha and beta must be > 0");
    MinPhi r;
    if (beta < alpha) {
        r.on_boundary = true; // interior stationary point would sit at phi < 0
        return r;
    }
    const double sa = std::sqrt(alpha), sb = std::sqrt(beta);
    r.value = -(sb - sa) * (sb - sa);
    r.argmin = sb / sa - 1.0;
    return r;
}

double pz_bound(double mean, double second_moment, double lambda) {
    if (!(mean > 0.0) || !(second_moment >= mean * mean))
        throw std::invalid_argument("pz_bound: need second_moment >= mean^2 > 0");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("pz_bound: lambda must be in (0,1)");
    return (1.0 - lambda) * (1.0 - lambda) * mean * mean / second_moment;
}

} // namespace rw2d
