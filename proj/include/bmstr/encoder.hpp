#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "bmstr/code_spec.hpp"
#include "bmstr/interleaver.hpp"

// Systematic BMST-R encoding. Each information block u^(t) is transmitted
// directly as branch 0; parity branch i (1 <= i <= N-1) is the mod-2 sum of
// the m+1 interleaved replicas Pi_{i,j}(u^(t-j)), j = 0..m, with blocks before
// t = 0 taken as zero. Branch N-1 is punctured at a fixed per-instance
// pattern. Termination feeds m zero blocks and transmits parity only.

namespace bmstr {

using BitBlock = std::vector<std::uint8_t>;

struct CodewordBlock {
    BitBlock systematic;              // K bits on data layers, empty on tail layers
    std::vector<BitBlock> parity;     // N-1 blocks; the last has K - K_p bits
};

class Encoder {
  public:
    explicit Encoder(const CodeSpec& spec)
        : spec_(validate(spec)),
          pi_(build_interleavers(spec)),
          puncture_(build_puncture_pattern(spec)) {
        reset();
    }

    const CodeSpec& spec() const { return spec_; }
    const std::vector<Interleaver>& interleavers() const { return pi_; }
    const std::vector<std::uint32_t>& puncture_pattern() const { return puncture_; }

    // Back to the zero state (as after construction or a full terminate()).
    void reset() {
        history_.assign(static_cast<std::size_t>(spec_.memory),
                        BitBlock(static_cast<std::size_t>(spec_.info_block_len), 0));
    }

    bool in_zero_state() const {
        for (const auto& b : history_)
            for (auto bit : b)
                if (bit) return false;
        return true;
    }

    CodewordBlock encode_block(const BitBlock& u) {
        if (static_cast<int>(u.size()) != spec_.info_block_len)
            throw std::invalid_argument("encode_block: wrong block length");
        CodewordBlock out;
        out.systematic = u;
        out.parity = make_parity(u);
        push_history(u);
        return out;
    }

    // Emits the m tail blocks (parity only) and returns to the zero state.
    std::vector<CodewordBlock> terminate() {
        const BitBlock zero(static_cast<std::size_t>(spec_.info_block_len), 0);
        std::vector<CodewordBlock> tail;
        tail.reserve(static_cast<std::size_t>(spec_.memory));
        for (int t = 0; t < spec_.memory; ++t) {
            CodewordBlock b;
            b.parity = make_parity(zero);
            push_history(zero);
            tail.push_back(std::move(b));
        }
        return tail;
    }

  private:
    const Interleaver& pi(int branch, int offset) const {
        return pi_[static_cast<std::size_t>((branch - 1) * (spec_.memory + 1) + offset)];
    }

    std::vector<BitBlock> make_parity(const BitBlock& u) const {
        const int K = spec_.info_block_len;
        const int N = spec_.repetition_degree;
        std::vector<BitBlock> parity;
        parity.reserve(static_cast<std::size_t>(N - 1));
        for (int i = 1; i < N; ++i) {
            BitBlock c(static_cast<std::size_t>(K), 0);
            for (int j = 0; j <= spec_.memory; ++j) {
                const BitBlock& v = (j == 0) ? u : history_[static_cast<std::size_t>(j - 1)];
                const auto& fwd = pi(i, j).fwd;
                for (int s = 0; s < K; ++s) c[static_cast<std::size_t>(s)] ^= v[fwd[static_cast<std::size_t>(s)]];
            }
            if (i == N - 1 && spec_.puncture_len > 0) c = puncture(c);
            parity.push_back(std::move(c));
        }
        return parity;
    }

    BitBlock puncture(const BitBlock& c) const {
        BitBlock kept;
        kept.reserve(c.size() - puncture_.size());
        std::size_t next = 0;
        for (std::uint32_t s = 0; s < c.size(); ++s) {
            if (next < puncture_.size() && puncture_[next] == s) {
                ++next;
                continue;
            }
            kept.push_back(c[s]);
        }
        return kept;
    }

    void push_history(const BitBlock& u) {
        if (spec_.memory == 0) return;
        history_.pop_back();
        history_.push_front(u);  // history_[j-1] holds u^(t-j)
    }

    CodeSpec spec_;
    std::vector<Interleaver> pi_;
    std::vector<std::uint32_t> puncture_;
    std::deque<BitBlock> history_;
};

struct Frame {
    std::vector<std::uint8_t> bits;  // layer-major: [sys][par 1..N-1] per layer
    FrameLayout layout;
};

inline void append_block(std::vector<std::uint8_t>& bits, const CodewordBlock& b) {
    bits.insert(bits.end(), b.systematic.begin(), b.systematic.end());
    for (const auto& p : b.parity) bits.insert(bits.end(), p.begin(), p.end());
}

// Encodes exactly L information blocks plus the termination tail.
inline Frame encode_frame(const CodeSpec& spec, const std::vector<BitBlock>& blocks) {
    validate(spec);
    if (static_cast<int>(blocks.size()) != spec.data_blocks)
        throw std::invalid_argument("encode_frame: expected exactly L blocks");
    Encoder enc(spec);
    Frame f;
    f.layout = frame_layout(spec);
    f.bits.reserve(static_cast<std::size_t>(f.layout.total_bits));
    for (const auto& u : blocks) append_block(f.bits, enc.encode_block(u));
    for (const auto& b : enc.terminate()) append_block(f.bits, b);
    if (static_cast<long long>(f.bits.size()) != f.layout.total_bits)
        throw std::logic_error("encode_frame: layout mismatch");
    return f;
}

}  // namespace bmstr
