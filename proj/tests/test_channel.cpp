#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bmstr/bounds.hpp"
#include "bmstr/channel.hpp"

using namespace bmstr;

TEST_CASE("bpsk mapping") {
    REQUIRE(bpsk_modulate({0})[0] == 1.0);
    REQUIRE(bpsk_modulate({1})[0] == -1.0);
    const auto s = bpsk_modulate(std::vector<std::uint8_t>(16, 0));
    for (double v : s) REQUIRE(v == 1.0);
}

TEST_CASE("snr/sigma and ebn0 conversions round-trip") {
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const double snr = -10.0 + 20.0 * rng.uniform();
        REQUIRE(snr_db_from_sigma(sigma_from_snr_db(snr)) == Catch::Approx(snr).epsilon(1e-12));
        const double rate = 0.05 + 0.9 * rng.uniform();
        REQUIRE(snr_db_from_ebn0_db(ebn0_db_from_snr_db(snr, rate), rate) ==
                Catch::Approx(snr).epsilon(1e-12));
    }
    // R = 1/2: 2R = 1 so the scales coincide
    REQUIRE(ebn0_db_from_snr_db(0.0, 0.5) == Catch::Approx(0.0).margin(1e-15));
    // R = 1/2 at Eb/N0 = 0.187 dB: 1/sigma^2 ~ 1.044
    const double sigma = sigma_from_snr_db(snr_db_from_ebn0_db(0.187, 0.5));
    REQUIRE(1.0 / (sigma * sigma) == Catch::Approx(1.044).margin(5e-4));
}

TEST_CASE("awgn noise statistics and near-noiseless limit") {
    Rng noise(11);
    const std::vector<double> sym(1000000, 1.0);
    const double sigma = 0.7;
    const auto r = awgn_transmit(sym, sigma, noise);
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < r.y.size(); ++i) mean += r.y[i] - sym[i];
    mean /= static_cast<double>(r.y.size());
    for (std::size_t i = 0; i < r.y.size(); ++i) {
        const double d = r.y[i] - sym[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(r.y.size());
    REQUIRE(var == Catch::Approx(sigma * sigma).epsilon(0.01));
    for (double a : r.a) REQUIRE(a == 1.0);

    Rng noise2(11);
    const auto tiny = awgn_transmit(std::vector<double>{1, -1, 1, -1}, 1e-6, noise2);
    for (std::size_t i = 0; i < 4; ++i)
        REQUIRE(std::abs(tiny.y[i] - std::vector<double>{1, -1, 1, -1}[i]) < 1e-4);
}

TEST_CASE("fixed seeds reproduce noise exactly; streams are independent") {
    const std::vector<double> sym(64, 1.0);
    Rng n1(21), n2(21);
    const auto a = awgn_transmit(sym, 1.0, n1);
    const auto b = awgn_transmit(sym, 1.0, n2);
    REQUIRE(a.y == b.y);

    // changing the noise seed must leave the fading stream bit-identical
    Rng na(1), fa(5);
    Rng nb(2), fb(5);
    const auto fr_a = block_fading_transmit(sym, 1.0, 8, na, fa);
    const auto fr_b = block_fading_transmit(sym, 1.0, 8, nb, fb);
    REQUIRE(fr_a.a == fr_b.a);
    REQUIRE(fr_a.y != fr_b.y);
}

TEST_CASE("block fading coherence structure and power") {
    const long long Bf = 100;
    const std::size_t n = 1000000;
    Rng noise(31), fading(32);
    const auto r = block_fading_transmit(std::vector<double>(n, 1.0), 1.0, Bf, noise, fading);
    double power = 0.0;
    std::size_t periods = 0;
    for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(Bf)) {
        for (long long j = 1; j < Bf; ++j) REQUIRE(r.a[i + static_cast<std::size_t>(j)] == r.a[i]);
        power += r.a[i] * r.a[i];
        ++periods;
    }
    REQUIRE(power / static_cast<double>(periods) == Catch::Approx(1.0).epsilon(0.01));

    // coherence covering the whole frame gives one coefficient
    Rng n2(1), f2(2);
    const auto one = block_fading_transmit(std::vector<double>(50, 1.0), 1.0, 50, n2, f2);
    for (double a : one.a) REQUIRE(a == one.a[0]);
}

TEST_CASE("llr values, erasure, clipping") {
    ReceivedFrame r;
    r.y = {1.0, 0.0, 1000.0};
    r.a = {1.0, 1.0, 1.0};
    const auto l = compute_llrs(r, 1.0);
    REQUIRE(l[0] == Catch::Approx(2.0));
    REQUIRE(l[1] == 0.0);
    REQUIRE(l[2] == kLlrClip);
}

TEST_CASE("hard-decision error rate equals Q(1/sigma)") {
    // BPSK all-zero over AWGN at sigma = 1: sign errors at rate Q(1)
    Rng noise(777);
    const std::size_t n = 1000000;
    const auto r = awgn_transmit(std::vector<double>(n, 1.0), 1.0, noise);
    std::size_t errors = 0;
    for (double y : r.y) errors += y < 0.0;
    const double p = static_cast<double>(errors) / static_cast<double>(n);
    REQUIRE(p == Catch::Approx(q_function(1.0)).margin(0.002));
}
