#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "bmstr/channel.hpp"
#include "bmstr/code_spec.hpp"
#include "bmstr/decoder.hpp"
#include "bmstr/encoder.hpp"
#include "bmstr/rng.hpp"

// Monte Carlo link simulation: encode random frames, transmit, decode,
// accumulate error counts per SNR point until the bit-error budget or the
// frame cap is reached. Every stream derives from (master_seed, snr_index,
// frame_index), so adding grid points never perturbs existing ones and any
// frame partition across workers reproduces the same counts.

namespace bmstr {

enum class ChannelKind { awgn, block_fading };
enum class DecoderKind { window, hard_decision };

struct SweepConfig {
    CodeSpec spec;
    DecoderConfig decoder;
    std::vector<double> snr_db;
    long long min_bit_errors = 100;
    long long max_frames = 10000;
    std::uint64_t master_seed = 1;
    ChannelKind channel = ChannelKind::awgn;
    long long coherence_len = 1;
    DecoderKind decoder_kind = DecoderKind::window;
};

struct SimRecord {
    double snr_db = 0.0;
    double ebn0_db = 0.0;
    long long frames = 0;
    long long bit_errors = 0;
    long long frame_errors = 0;
    long long word_errors = 0;  // per-layer message blocks decoded with >= 1 bit error
    double ber = 0.0;
    double fer = 0.0;
    double wer = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    bool stopped_on_errors = false;  // which stopping rule ended the point
};

inline std::vector<SimRecord> run_sweep(const SweepConfig& cfg) {
    validate(cfg.spec);
    validate(cfg.decoder);
    if (cfg.snr_db.empty()) throw std::invalid_argument("run_sweep: SNR grid must be nonempty");
    if (cfg.min_bit_errors < 1) throw std::invalid_argument("run_sweep: min_bit_errors must be >= 1");

    const FrameLayout lay = frame_layout(cfg.spec);
    const double rate = terminated_rate(cfg.spec).value();
    const int K = lay.K;
    const int L = lay.L;

    Encoder enc(cfg.spec);
    const auto puncture = enc.puncture_pattern();
    SlidingWindowDecoder dec(cfg.spec, cfg.decoder);

    std::vector<SimRecord> records;
    records.reserve(cfg.snr_db.size());
    for (std::size_t point = 0; point < cfg.snr_db.size(); ++point) {
        const auto t0 = std::chrono::steady_clock::now();
        SimRecord rec;
        rec.snr_db = cfg.snr_db[point];
        rec.ebn0_db = ebn0_db_from_snr_db(rec.snr_db, rate);
        rec.seed = derive_stream(cfg.master_seed, point);
        const double sigma = sigma_from_snr_db(rec.snr_db);

        while (rec.frames < cfg.max_frames && rec.bit_errors < cfg.min_bit_errors) {
            const std::uint64_t frame_seed = derive_stream(rec.seed, static_cast<std::uint64_t>(rec.frames));
            Rng msg_rng(derive_stream(frame_seed, 0));
            Rng noise_rng(derive_stream(frame_seed, 1));
            Rng fading_rng(derive_stream(frame_seed, 2));

            std::vector<BitBlock> message(static_cast<std::size_t>(L));
            for (auto& block : message) {
                block.resize(static_cast<std::size_t>(K));
                for (auto& b : block) b = static_cast<std::uint8_t>(msg_rng.next_u64() & 1u);
            }

            enc.reset();
            std::vector<std::uint8_t> tx;
            tx.reserve(static_cast<std::size_t>(lay.total_bits));
            for (const auto& u : message) append_block(tx, enc.encode_block(u));
            for (const auto& b : enc.terminate()) append_block(tx, b);

            const auto symbols = bpsk_modulate(tx);
            const ReceivedFrame rx = cfg.channel == ChannelKind::awgn
                                         ? awgn_transmit(symbols, sigma, noise_rng)
                                         : block_fading_transmit(symbols, sigma, cfg.coherence_len,
                                                                 noise_rng, fading_rng);
            const LlrFrame llrs = LlrFrame::from_flat(cfg.spec, compute_llrs(rx, sigma), puncture);

            const std::vector<std::uint8_t> decided = cfg.decoder_kind == DecoderKind::window
                                                          ? dec.decode(llrs)
                                                          : hard_decision_decode(llrs);

            long long frame_bit_errors = 0;
            for (int t = 0; t < L; ++t) {
                long long block_errors = 0;
                for (int p = 0; p < K; ++p)
                    block_errors += decided[static_cast<std::size_t>(t) * K + p] !=
                                    message[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
                if (block_errors > 0) ++rec.word_errors;
                frame_bit_errors += block_errors;
            }
            rec.bit_errors += frame_bit_errors;
            if (frame_bit_errors > 0) ++rec.frame_errors;
            ++rec.frames;
        }

        rec.stopped_on_errors = rec.bit_errors >= cfg.min_bit_errors;
        rec.ber = static_cast<double>(rec.bit_errors) /
                  (static_cast<double>(lay.info_bits) * static_cast<double>(rec.frames));
        rec.fer = static_cast<double>(rec.frame_errors) / static_cast<double>(rec.frames);
        rec.wer = static_cast<double>(rec.word_errors) /
                  (static_cast<double>(L) * static_cast<double>(rec.frames));
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        records.push_back(rec);
    }
    return records;
}

inline std::string format_sig6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string emit_csv(const std::vector<SimRecord>& records) {
    std::ostringstream out;
    out << "snr_db,ebn0_db,frames,bit_errors,frame_errors,word_errors,ber,fer,wer,seconds,seed\n";
    for (const auto& r : records) {
        out << format_sig6(r.snr_db) << ',' << format_sig6(r.ebn0_db) << ',' << r.frames << ','
            << r.bit_errors << ',' << r.frame_errors << ',' << r.word_errors << ','
            << format_sig6(r.ber) << ',' << format_sig6(r.fer) << ',' << format_sig6(r.wer) << ','
            << format_sig6(r.wall_seconds) << ',' << r.seed << '\n';
    }
    return out.str();
}

// Parses emit_csv output back into records (stopped_on_errors is not part of
// the CSV and comes back defaulted).
inline std::vector<SimRecord> parse_csv(const std::string& text) {
    std::vector<SimRecord> records;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) return records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SimRecord r;
        std::istringstream row(line);
        std::string field;
        auto next = [&]() {
            if (!std::getline(row, field, ',')) throw std::invalid_argument("parse_csv: short row");
            return field;
        };
        r.snr_db = std::stod(next());
        r.ebn0_db = std::stod(next());
        r.frames = std::stoll(next());
        r.bit_errors = std::stoll(next());
        r.frame_errors = std::stoll(next());
        r.word_errors = std::stoll(next());
        r.ber = std::stod(next());
        r.fer = std::stod(next());
        r.wer = std::stod(next());
        r.wall_seconds = std::stod(next());
        r.seed = std::stoull(next());
        records.push_back(r);
    }
    return records;
}

}  // namespace bmstr
