#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bmstr/rng.hpp"

// BPSK over AWGN and block Rayleigh fading, with coherent LLR computation.
// SNR convention: snr_db = 10 log10(1/sigma^2) for unit-energy symbols.

namespace bmstr {

// LLR magnitudes are clipped here to protect downstream arithmetic.
inline constexpr double kLlrClip = 50.0;

inline double clip_llr(double v) {
    if (v > kLlrClip) return kLlrClip;
    if (v < -kLlrClip) return -kLlrClip;
    return v;
}

inline double snr_db_from_sigma(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    return -20.0 * std::log10(sigma);
}

inline double sigma_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 20.0); }

// E_b/N_0 = (1/sigma^2) / (2R) in linear scale.
inline double ebn0_db_from_snr_db(double snr_db, double rate) {
    if (rate <= 0.0 || rate >= 1.0) throw std::invalid_argument("rate must be in (0, 1)");
    return snr_db - 10.0 * std::log10(2.0 * rate);
}

inline double snr_db_from_ebn0_db(double ebn0_db, double rate) {
    if (rate <= 0.0 || rate >= 1.0) throw std::invalid_argument("rate must be in (0, 1)");
    return ebn0_db + 10.0 * std::log10(2.0 * rate);
}

struct ChannelParams {
    double sigma = 1.0;
    long long coherence_len = 1;  // B_f symbols per fading coefficient
    std::uint64_t noise_seed = 0;
    std::uint64_t fading_seed = 0;
};

struct ReceivedFrame {
    std::vector<double> y;  // received samples
    std::vector<double> a;  // fading coefficients (all ones on AWGN)
};

// 0 -> +1, 1 -> -1.
inline std::vector<double> bpsk_modulate(const std::vector<std::uint8_t>& bits) {
    std::vector<double> s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? -1.0 : 1.0;
    return s;
}

inline ReceivedFrame awgn_transmit(const std::vector<double>& symbols, double sigma, Rng& noise) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    ReceivedFrame r;
    r.y.resize(symbols.size());
    r.a.assign(symbols.size(), 1.0);
    for (std::size_t i = 0; i < symbols.size(); ++i) r.y[i] = symbols[i] + sigma * noise.gaussian();
    return r;
}

// Rayleigh coefficients with E[a^2] = 1, constant over runs of B_f symbols,
// i.i.d. across runs. The receiver knows a exactly (perfect CSI).
inline ReceivedFrame block_fading_transmit(const std::vector<double>& symbols, double sigma,
                                           long long coherence_len, Rng& noise, Rng& fading) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    if (coherence_len < 1) throw std::invalid_argument("coherence_len must be at least 1");
    ReceivedFrame r;
    r.y.resize(symbols.size());
    r.a.resize(symbols.size());
    double a = 0.0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i % static_cast<std::size_t>(coherence_len) == 0) a = fading.rayleigh_unit_power();
        r.a[i] = a;
        r.y[i] = a * symbols[i] + sigma * noise.gaussian();
    }
    return r;
}

// Coherent per-bit LLRs, positive favoring bit 0: 2 a y / sigma^2, clipped.
inline std::vector<double> compute_llrs(const ReceivedFrame& r, double sigma) {
    if (r.y.size() != r.a.size()) throw std::invalid_argument("llr: length mismatch");
    std::vector<double> l(r.y.size());
    const double scale = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < r.y.size(); ++i) l[i] = clip_llr(scale * r.a[i] * r.y[i]);
    return l;
}

}  // namespace bmstr
