#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bmstr/bounds.hpp"

using namespace bmstr;

namespace {

CodeSpec make_spec(int N, int K, int Kp, int L, int m) {
    CodeSpec s;
    s.repetition_degree = N;
    s.info_block_len = K;
    s.puncture_len = Kp;
    s.data_blocks = L;
    s.memory = m;
    return s;
}

}  // namespace

TEST_CASE("q_function") {
    REQUIRE(q_function(0.0) == Catch::Approx(0.5));
    REQUIRE(q_function(1.0) == Catch::Approx(0.158655).margin(1e-6));
    for (double x : {0.3, 1.7, 4.2}) REQUIRE(q_function(-x) == Catch::Approx(1.0 - q_function(x)).margin(1e-12));
    REQUIRE(q_function_inv(q_function(2.5)) == Catch::Approx(2.5).margin(1e-9));
}

TEST_CASE("biawgn capacity and Shannon limit") {
    // rate-1/2 limit at vanishing BER is Eb/N0 = 0.187 dB (equal to SNR here)
    const double snr = shannon_limit_snr_db(0.5, 1e-5);
    REQUIRE(snr == Catch::Approx(0.187).margin(0.02));
    REQUIRE(biawgn_capacity(sigma_from_snr_db(snr)) == Catch::Approx(0.5 * (1 - binary_entropy(1e-5))).margin(1e-5));
    // monotone increasing in R
    double prev = -100.0;
    for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const double s = shannon_limit_snr_db(r, 1e-5);
        REQUIRE(s > prev);
        prev = s;
    }
    // smaller rate, smaller limit (towards -inf as R -> 0)
    REQUIRE(shannon_limit_snr_db(0.01, 1e-4) < -15.0);
}

TEST_CASE("ensemble lower bound special cases") {
    for (double sigma : {0.4, 0.8, 1.2}) {
        // theta = 0: single row weight N + m(N-1)
        for (int N : {2, 3})
            for (int m : {0, 2, 5})
                REQUIRE(lower_bound_ensemble(N, m, 0.0, sigma) ==
                        Catch::Approx(q_function(std::sqrt(N + m * (N - 1)) / sigma)).margin(1e-15));
        // m=0, N=2: Q(sqrt(2)/sigma)
        REQUIRE(lower_bound_ensemble(2, 0, 0.0, sigma) ==
                Catch::Approx(q_function(std::sqrt(2.0) / sigma)).margin(1e-15));
        // convex combination bracketed by its extreme terms
        const int N = 3, m = 4;
        const double theta = 0.35;
        const double lo = q_function(std::sqrt(N + m * (N - 2) - 1 + (m + 1.0)) / sigma);
        const double hi = q_function(std::sqrt(N + m * (N - 2) - 1.0) / sigma);
        const double v = lower_bound_ensemble(N, m, theta, sigma);
        REQUIRE(v >= lo);
        REQUIRE(v <= hi);
    }
}

TEST_CASE("per-bit lower bound variants") {
    const std::vector<int> uniform(10, 3);
    for (double sigma : {0.5, 1.0})
        REQUIRE(lower_bound_per_bit(uniform, sigma) ==
                Catch::Approx(q_function(std::sqrt(3.0) / sigma)).margin(1e-15));
    // toy product code: exact MAP BER strictly exceeds the d_min-only bound
    for (double sigma : {0.4, 0.7, 1.0, 1.5}) {
        const double exact = (1.0 / 10000) * q_function(1.0 / sigma) +
                             (9999.0 / 10000) * q_function(std::sqrt(2.0) / sigma);
        const double loose = lower_bound_dmin(10000, 1, sigma);
        REQUIRE(exact > loose);
    }
}

TEST_CASE("upper bound: r*=0 equals Q(1/sigma), r*=k recovers the union bound") {
    // small complete table so T covers everything
    const auto spec = make_spec(2, 3, 0, 2, 1);
    const long long k = 6;
    const auto table = compute_irwef(spec, static_cast<int>(k));
    for (double sigma : {0.6, 1.0, 1.4}) {
        REQUIRE(upper_bound_at(table, k, sigma, 0) ==
                Catch::Approx(q_function(1.0 / sigma)).epsilon(1e-9));
        // r* = k: tail term vanishes, union-style term remains
        double union_bound = 0.0;
        for (int i = 1; i <= static_cast<int>(k); ++i) {
            const auto& row = table.rows[static_cast<std::size_t>(i)];
            for (int j = 0; j <= row.degree(); ++j)
                union_bound += static_cast<double>(i) / static_cast<double>(k) * row.at(j) *
                               q_function(std::sqrt(static_cast<double>(i + j)) / sigma);
        }
        REQUIRE(upper_bound_at(table, k, sigma, static_cast<int>(k)) ==
                Catch::Approx(union_bound).epsilon(1e-12));
    }
}

TEST_CASE("upper bound dominated by the weight-1 term at high SNR") {
    // T large enough that the BSC tail term vanishes at the optimal radius
    const auto spec = make_spec(2, 30, 0, 20, 1);
    const auto table = compute_irwef(spec, 60, {.y_cap = 80});
    const long long k = 600;
    const double sigma = 0.25;
    const int d1 = 1 + (spec.memory + 1) * (spec.repetition_degree - 1);
    const double i1_term = q_function(std::sqrt(static_cast<double>(d1)) / sigma);  // (LK/k) = 1
    const auto ub = upper_bound_truncated(table, k, sigma);
    REQUIRE(ub.ber == Catch::Approx(i1_term).epsilon(0.01));
    REQUIRE(ub.ber >= i1_term);
}

TEST_CASE("bound ordering and monotonicity on an SNR grid") {
    const auto spec = make_spec(2, 8, 0, 4, 1);
    const auto table = compute_irwef(spec, 8);
    const long long k = 32;
    double prev_lo = 1.0, prev_hi = 2.0;
    for (double snr = 0.0; snr <= 8.0; snr += 0.5) {
        const double sigma = sigma_from_snr_db(snr);
        const double lo = lower_bound_ensemble(2, 1, 0.0, sigma);
        const double hi = upper_bound_truncated(table, k, sigma).ber;
        REQUIRE(lo <= hi + 1e-15);
        REQUIRE(lo <= prev_lo + 1e-15);
        REQUIRE(hi <= prev_hi + 1e-12);
        prev_lo = lo;
        prev_hi = hi;
    }
}

TEST_CASE("required_memory reproduces reference cells and is monotone") {
    const double snr_half = shannon_limit_snr_db(0.5, 1e-5);
    REQUIRE(required_memory(2, 0.0, snr_half, 1e-5) == 16);
    const double snr_third = shannon_limit_snr_db(1.0 / 3.0, 1e-3);
    REQUIRE(required_memory(3, 0.0, snr_third, 1e-3) == 7);
    int prev = 0;
    for (double ber : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const int m = required_memory(2, 0.0, shannon_limit_snr_db(0.5, ber), ber);
        REQUIRE(m >= prev);
        prev = m;
    }
    REQUIRE_THROWS_AS(required_memory(2, 0.0, -20.0, 1e-6, 8), std::runtime_error);
}

TEST_CASE("plan_code picks N and theta from the target rate") {
    const auto half = plan_code(0.5, 1e-5, 100, 100, 1);
    REQUIRE(half.spec.repetition_degree == 2);
    REQUIRE(half.theta == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(half.spec.memory == 16);
    REQUIRE(half.predicted_floor <= 1e-5);

    const auto two_fifths = plan_code(0.4, 1e-5, 100, 100, 1);
    REQUIRE(two_fifths.spec.repetition_degree == 3);
    REQUIRE(two_fifths.theta == Catch::Approx(0.5).margin(1e-12));

    const auto two_thirds = plan_code(2.0 / 3.0, 1e-5, 100, 100, 1);
    REQUIRE(two_thirds.spec.repetition_degree == 2);
    REQUIRE(two_thirds.theta == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(two_thirds.spec.puncture_len == 50);

    REQUIRE(half.achieved_rate < 0.5);
    REQUIRE(half.rate_loss > 0.0);
}
