#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bmstr/channel.hpp"
#include "bmstr/code_spec.hpp"
#include "bmstr/rng.hpp"
#include "bmstr/wef.hpp"

// Analytic MAP BER bounds and the bound-driven code construction. The upper
// bound comes from list decoding on hard decisions of the systematic part
// (two-term expression minimized over the list radius r*); the lower bound
// from a genie-aided two-codeword test at the per-bit minimum distances or,
// for the ensemble, at the generator row weights.

namespace bmstr {

// Gaussian tail probability.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Inverse of q_function on (0, 0.5), by bisection.
inline double q_function_inv(double p) {
    if (p <= 0.0 || p >= 0.5) throw std::invalid_argument("q_function_inv: p must be in (0, 0.5)");
    double lo = 0.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (q_function(mid) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Binary entropy in bits.
inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

namespace detail {

// Nodes/weights of n-point Gauss-Hermite quadrature (weight e^{-x^2}),
// computed by Newton iteration on the Hermite recurrence.
struct GaussHermite {
    std::vector<double> x, w;

    explicit GaussHermite(int n) : x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n)) {
        const double pim4 = 0.7511255444649425;  // pi^{-1/4}
        double z = 0.0;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            if (i == 0) z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
            else if (i == 1) z -= 1.14 * std::pow(n, 0.426) / z;
            else if (i == 2) z = 1.86 * z - 0.86 * x[0];
            else if (i == 3) z = 1.91 * z - 0.91 * x[1];
            else z = 2.0 * z - x[static_cast<std::size_t>(i) - 2];
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = pim4, p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
                }
                pp = std::sqrt(2.0 * n) * p2;
                const double dz = p1 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[static_cast<std::size_t>(i)] = z;
            x[static_cast<std::size_t>(n - 1 - i)] = -z;
            w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
            w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
        }
    }
};

inline const GaussHermite& gauss_hermite_96() {
    static const GaussHermite gh(96);
    return gh;
}

}  // namespace detail

// Capacity of the binary-input AWGN channel (BPSK, noise std sigma), in bits
// per channel use: C = 1 - E_z[log2(1 + exp(-2(1+z)/sigma^2))], z ~ N(0, s^2).
inline double biawgn_capacity(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("biawgn_capacity: sigma must be positive");
    const auto& gh = detail::gauss_hermite_96();
    const double ln2 = std::log(2.0);
    double e = 0.0;
    for (std::size_t i = 0; i < gh.x.size(); ++i) {
        const double z = std::sqrt(2.0) * sigma * gh.x[i];
        const double u = 2.0 * (1.0 + z) / (sigma * sigma);
        const double v = u > 0.0 ? std::log1p(std::exp(-u)) : -u + std::log1p(std::exp(u));
        e += gh.w[i] * v / ln2;
    }
    e /= std::sqrt(M_PI);
    return 1.0 - e;
}

// Smallest SNR (dB) at which the binary-input AWGN capacity reaches
// R (1 - H2(p)): the Shannon limit for rate R at target BER p.
inline double shannon_limit_snr_db(double rate, double target_ber) {
    if (rate <= 0.0 || rate >= 1.0) throw std::invalid_argument("shannon_limit_snr_db: rate must be in (0, 1)");
    if (target_ber <= 0.0 || target_ber >= 0.5)
        throw std::invalid_argument("shannon_limit_snr_db: target BER must be in (0, 0.5)");
    const double target = rate * (1.0 - binary_entropy(target_ber));
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (biawgn_capacity(sigma_from_snr_db(mid)) >= target ? hi : lo) = mid;
    }
    return hi;
}

// Single-radius evaluation of the list-decoding upper bound on MAP BER:
// union-style term over input weights i <= 2 r* plus the BSC tail with
// epsilon = Q(1/sigma). The binomial tail is evaluated in the log domain.
inline double upper_bound_at(const IRWEFTable& table, long long k, double sigma, int r_star) {
    if (r_star < 0) throw std::invalid_argument("upper_bound_at: r* must be nonnegative");
    const double eps = q_function(1.0 / sigma);
    double term1 = 0.0;
    for (int i = 1; i <= std::min<long long>(2LL * r_star, table.T); ++i) {
        const WeightPoly& row = table.rows[static_cast<std::size_t>(i)];
        double qsum = 0.0;
        for (int j = 0; j <= row.degree(); ++j) {
            const double a = row.at(j);
            if (a > 0.0) qsum += a * q_function(std::sqrt(static_cast<double>(i + j)) / sigma);
        }
        term1 += static_cast<double>(i) / static_cast<double>(k) * qsum;
    }
    double term2 = 0.0;
    if (eps > 0.0) {
        const double log_eps = std::log(eps);
        const double log_1meps = std::log1p(-eps);
        for (long long i = r_star + 1; i <= k; ++i) {
            const double lp = log_choose(k, i) + static_cast<double>(i) * log_eps +
                              static_cast<double>(k - i) * log_1meps;
            if (lp < -745.0) {
                // past the mode the summands only shrink; stop once negligible
                if (static_cast<double>(i) > eps * static_cast<double>(k)) break;
                continue;
            }
            term2 += static_cast<double>(std::min(i + r_star, k)) / static_cast<double>(k) * std::exp(lp);
        }
    }
    return term1 + term2;
}

struct UpperBoundResult {
    double ber = 0.0;
    int r_star = 0;
};

// Tightest truncated-IRWEF upper bound: minimize over 0 <= r* <= T/2.
inline UpperBoundResult upper_bound_truncated(const IRWEFTable& table, long long k, double sigma) {
    UpperBoundResult best;
    best.ber = std::numeric_limits<double>::infinity();
    for (int r = 0; r <= table.T / 2; ++r) {
        const double v = upper_bound_at(table, k, sigma, r);
        if (v < best.ber) {
            best.ber = v;
            best.r_star = r;
        }
    }
    return best;
}

// Ensemble lower bound on MAP BER: the i-th generator row weight is
// N + m(N-2) - 1 + l with l ~ Binomial(m+1, 1-theta) surviving replicas on
// the punctured branch.
inline double lower_bound_ensemble(int N, int m, double theta, double sigma) {
    if (theta < 0.0 || theta >= 1.0) throw std::invalid_argument("lower_bound_ensemble: theta must be in [0, 1)");
    double s = 0.0;
    for (int l = 0; l <= m + 1; ++l) {
        const double w = choose(m + 1, l) * std::pow(theta, m + 1 - l) * std::pow(1.0 - theta, l);
        if (w > 0.0) s += w * q_function(std::sqrt(static_cast<double>(N + m * (N - 2) - 1 + l)) / sigma);
    }
    return s;
}

// Genie-aided lower bound from per-bit minimum distances:
// (1/k) sum_i Q(sqrt(d_min,i)/sigma).
inline double lower_bound_per_bit(std::span<const int> dmin_list, double sigma) {
    if (dmin_list.empty()) throw std::invalid_argument("lower_bound_per_bit: empty distance list");
    double s = 0.0;
    for (int d : dmin_list) {
        if (d <= 0) throw std::invalid_argument("lower_bound_per_bit: distances must be positive");
        s += q_function(std::sqrt(static_cast<double>(d)) / sigma);
    }
    return s / static_cast<double>(dmin_list.size());
}

// Looser variant from the overall minimum distance: (1/k) Q(sqrt(dmin)/sigma).
inline double lower_bound_dmin(long long k, int dmin, double sigma) {
    return q_function(std::sqrt(static_cast<double>(dmin)) / sigma) / static_cast<double>(k);
}

// Row-weight variant (row weights are codewords, so this is a valid lower
// bound too, and the only one available without enumeration).
inline double lower_bound_row_weights(std::span<const int> row_weights, double sigma) {
    return lower_bound_per_bit(row_weights, sigma);
}

// Smallest encoding memory whose ensemble lower bound meets target_ber at the
// given SNR.
inline int required_memory(int N, double theta, double snr_db, double target_ber, int m_cap = 256) {
    if (target_ber <= 0.0 || target_ber >= 0.5)
        throw std::invalid_argument("required_memory: target BER must be in (0, 0.5)");
    const double sigma = sigma_from_snr_db(snr_db);
    for (int m = 0; m <= m_cap; ++m)
        if (lower_bound_ensemble(N, m, theta, sigma) <= target_ber) return m;
    throw std::runtime_error("required_memory: memory cap exceeded");
}

struct PlanResult {
    CodeSpec spec;                   // planned code instance, seeds included
    double theta = 0.0;              // requested puncturing fraction N - 1/R
    double achieved_rate = 0.0;      // terminated rate R_L of the instance
    double rate_loss = 0.0;          // R - R_L
    double shannon_limit_db = 0.0;   // SNR limit for (R, target BER)
    double predicted_floor = 0.0;    // ensemble lower bound at the limit
};

// Bound-driven construction: pick N = ceil(1/R) and theta = N - 1/R, find the
// Shannon limit for (R, target BER), then the smallest m whose lower bound
// meets the target there. Requires no optimization.
inline PlanResult plan_code(double rate, double target_ber, int K, int L, std::uint64_t seed) {
    if (rate <= 0.0 || rate >= 1.0) throw std::invalid_argument("plan_code: rate must be in (0, 1)");
    PlanResult r;
    const int N = static_cast<int>(std::ceil(1.0 / rate - 1e-12));
    const double theta = std::max(0.0, N - 1.0 / rate);
    r.theta = theta;
    r.spec.repetition_degree = std::max(N, 2);
    r.spec.info_block_len = K;
    r.spec.puncture_len = static_cast<int>(std::lround(theta * K));
    r.spec.data_blocks = L;
    r.spec.interleaver_seed = derive_stream(seed, 1);
    r.spec.puncture_seed = derive_stream(seed, 2);
    r.shannon_limit_db = shannon_limit_snr_db(rate, target_ber);
    r.spec.memory = required_memory(r.spec.repetition_degree, theta, r.shannon_limit_db, target_ber);
    validate(r.spec);
    r.achieved_rate = terminated_rate(r.spec).value();
    r.rate_loss = rate - r.achieved_rate;
    r.predicted_floor =
        lower_bound_ensemble(r.spec.repetition_degree, r.spec.memory, theta, sigma_from_snr_db(r.shannon_limit_db));
    return r;
}

}  // namespace bmstr
