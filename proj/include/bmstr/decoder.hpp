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
#include "bmstr/interleaver.hpp"

// Iterative sliding-window decoding over the layered normal graph. Layer t
// holds one equality node (the information block and its replicas), N-1
// parity-check nodes with channel half-edges, and the interleaver edges to
// layers t..t+m. The window spans d+1 layers; flooding iterations run until
// the iteration cap or the entropy stopping rule fires, then the target
// (oldest) layer is decided and the window slides by one layer. Messages from
// already-decided layers stay frozen at their final values; messages from
// layers beyond the window are zero until the window reaches them.

namespace bmstr {

// LLR-domain combining for a parity constraint,
// boxplus(a, b) = 2 atanh(tanh(a/2) tanh(b/2)), in the numerically stable
// sign-magnitude form with exact log1p corrections. +inf is the identity.
inline double boxplus(double a, double b) {
    const double sign = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
    const double mag = std::min(std::abs(a), std::abs(b));
    double v = sign * mag;
    const double apb = std::abs(a + b);
    const double amb = std::abs(a - b);
    if (std::isfinite(apb)) v += std::log1p(std::exp(-apb));
    if (std::isfinite(amb)) v -= std::log1p(std::exp(-amb));
    return v;
}

// Parity-node update: outgoing on each edge is the boxplus of all other
// incoming values (channel half-edge included among the inputs).
inline std::vector<double> check_node_update(std::span<const double> incoming) {
    const std::size_t n = incoming.size();
    std::vector<double> out(n);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prefix(n + 1, inf), suffix(n + 1, inf);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = boxplus(prefix[i], incoming[i]);
    for (std::size_t i = n; i > 0; --i) suffix[i - 1] = boxplus(suffix[i], incoming[i - 1]);
    for (std::size_t i = 0; i < n; ++i) out[i] = boxplus(prefix[i], suffix[i + 1]);
    return out;
}

// Equality-node update: outgoing on each edge is the sum of all other
// incoming values; the posterior is the full sum. Everything clipped.
struct EqualityUpdate {
    std::vector<double> outgoing;
    double posterior = 0.0;
};

inline EqualityUpdate equality_node_update(std::span<const double> incoming) {
    double total = 0.0;
    for (double v : incoming) total += v;
    EqualityUpdate r;
    r.outgoing.resize(incoming.size());
    for (std::size_t i = 0; i < incoming.size(); ++i) r.outgoing[i] = clip_llr(total - incoming[i]);
    r.posterior = clip_llr(total);
    return r;
}

struct DecoderConfig {
    int delay = 0;                    // d future layers in the window
    int max_iterations = 18;
    double entropy_threshold = 1e-6;  // stop when mean entropy moves less than this
};

inline const DecoderConfig& validate(const DecoderConfig& c) {
    if (c.delay < 0) throw std::invalid_argument("DecoderConfig: delay must be nonnegative");
    if (c.max_iterations < 1) throw std::invalid_argument("DecoderConfig: max_iterations must be >= 1");
    if (!(c.entropy_threshold > 0.0))
        throw std::invalid_argument("DecoderConfig: entropy_threshold must be positive");
    return c;
}

// Stops once the mean binary entropy of the window posteriors changes by less
// than the threshold between consecutive iterations. Never fires on the first
// iteration.
class EntropyStop {
  public:
    explicit EntropyStop(double threshold) : threshold_(threshold) {}

    bool should_stop(double mean_entropy) {
        const bool stop = has_prev_ && std::abs(mean_entropy - prev_) < threshold_;
        prev_ = mean_entropy;
        has_prev_ = true;
        return stop;
    }

    void reset() { has_prev_ = false; }

  private:
    double threshold_;
    double prev_ = 0.0;
    bool has_prev_ = false;
};

// Binary entropy (bits) of the bit probability implied by a posterior LLR.
inline double llr_entropy(double llr) {
    const double p0 = 1.0 / (1.0 + std::exp(-llr));
    if (p0 <= 0.0 || p0 >= 1.0) return 0.0;
    return -p0 * std::log2(p0) - (1.0 - p0) * std::log2(1.0 - p0);
}

// Channel LLRs of one terminated frame, organized by layer and branch.
// Punctured positions of branch N-1 carry LLR exactly 0.
struct LlrFrame {
    int K = 0, N = 0, L = 0, m = 0;
    std::vector<double> sys;  // L x K, layer-major
    std::vector<double> par;  // (L+m) x (N-1) x K, punctured slots zeroed

    double sys_at(int t, int p) const { return sys[static_cast<std::size_t>(t) * K + p]; }
    double& par_at(int t, int branch, int p) {
        return par[(static_cast<std::size_t>(t) * (N - 1) + (branch - 1)) * K + p];
    }
    double par_at(int t, int branch, int p) const {
        return par[(static_cast<std::size_t>(t) * (N - 1) + (branch - 1)) * K + p];
    }

    // Unpacks a flat LLR vector in transmitted-frame order (the FrameLayout
    // order produced by encode_frame).
    static LlrFrame from_flat(const CodeSpec& spec, std::span<const double> flat,
                              const std::vector<std::uint32_t>& puncture) {
        const FrameLayout lay = frame_layout(spec);
        if (static_cast<long long>(flat.size()) != lay.total_bits)
            throw std::invalid_argument("LlrFrame: flat length does not match layout");
        LlrFrame f;
        f.K = lay.K;
        f.N = lay.N;
        f.L = lay.L;
        f.m = lay.m;
        f.sys.assign(static_cast<std::size_t>(lay.L) * lay.K, 0.0);
        f.par.assign(static_cast<std::size_t>(lay.L + lay.m) * (lay.N - 1) * lay.K, 0.0);
        std::size_t pos = 0;
        for (int t = 0; t < lay.L + lay.m; ++t) {
            if (t < lay.L)
                for (int p = 0; p < lay.K; ++p) f.sys[static_cast<std::size_t>(t) * lay.K + p] = flat[pos++];
            for (int i = 1; i < lay.N; ++i) {
                if (i < lay.N - 1) {
                    for (int p = 0; p < lay.K; ++p) f.par_at(t, i, p) = flat[pos++];
                } else {
                    std::size_t next = 0;
                    for (int p = 0; p < lay.K; ++p) {
                        if (next < puncture.size() && puncture[next] == static_cast<std::uint32_t>(p)) {
                            ++next;  // punctured: LLR stays 0
                            continue;
                        }
                        f.par_at(t, i, p) = flat[pos++];
                    }
                }
            }
        }
        return f;
    }
};

// Hard decisions on the systematic channel LLRs alone; parity ignored.
// Posterior tie (LLR exactly 0) decides bit 0.
inline std::vector<std::uint8_t> hard_decision_decode(const LlrFrame& f) {
    std::vector<std::uint8_t> bits(f.sys.size());
    for (std::size_t i = 0; i < f.sys.size(); ++i) bits[i] = f.sys[i] < 0.0 ? 1 : 0;
    return bits;
}

class SlidingWindowDecoder {
  public:
    SlidingWindowDecoder(const CodeSpec& spec, DecoderConfig cfg)
        : spec_(validate(spec)), cfg_(validate(cfg)), pi_(build_interleavers(spec)) {
        if (spec_.memory > 62)
            throw std::invalid_argument("SlidingWindowDecoder: memory above 62 unsupported");
    }

    // Decodes one frame; optionally reports the final posterior LLR of every
    // message bit (layer-major).
    std::vector<std::uint8_t> decode(const LlrFrame& frame, std::vector<double>* posteriors = nullptr) {
        const int K = spec_.info_block_len;
        const int N = spec_.repetition_degree;
        const int m = spec_.memory;
        const int L = spec_.data_blocks;
        if (frame.K != K || frame.N != N || frame.L != L || frame.m != m)
            throw std::invalid_argument("decode: frame does not match spec");

        const std::size_t edges = static_cast<std::size_t>(L + m) * (N - 1) * (m + 1) * K;
        e2c_.assign(edges, 0.0);
        c2e_.assign(edges, 0.0);
        post_.assign(static_cast<std::size_t>(L) * K, 0.0);

        std::vector<std::uint8_t> bits(static_cast<std::size_t>(L) * K, 0);
        EntropyStop stopper(cfg_.entropy_threshold);

        for (int target = 0; target < L; ++target) {
            const int hi = std::min(target + cfg_.delay, L + m - 1);
            stopper.reset();
            for (int it = 0; it < cfg_.max_iterations; ++it) {
                for (int t = target; t <= hi; ++t) update_checks(frame, t);
                for (int t = target; t <= std::min(hi, L - 1); ++t) update_equality(frame, t);
                if (stopper.should_stop(window_entropy(target, std::min(hi, L - 1)))) break;
            }
            for (int p = 0; p < K; ++p) {
                const double v = post_[static_cast<std::size_t>(target) * K + p];
                bits[static_cast<std::size_t>(target) * K + p] = v < 0.0 ? 1 : 0;
            }
        }
        if (posteriors) *posteriors = post_;
        return bits;
    }

  private:
    // Edge (t, i, j) joins the equality node of layer t-j to check node
    // (t, i) through Pi_{i,j}; both directed messages are stored in the
    // u-domain of layer t-j. Sources outside [0, L) are known-zero blocks
    // (encoder initialization or the termination tail) and are skipped
    // exactly: a known-zero summand drops out of the parity constraint.
    std::size_t edge_index(int t, int branch, int j, int p) const {
        const int K = spec_.info_block_len;
        const int m = spec_.memory;
        const int N = spec_.repetition_degree;
        return ((static_cast<std::size_t>(t) * (N - 1) + (branch - 1)) * (m + 1) + j) * K + p;
    }

    bool source_is_data(int t, int j) const {
        const int src = t - j;
        return src >= 0 && src < spec_.data_blocks;
    }

    const Interleaver& pi(int branch, int j) const {
        return pi_[static_cast<std::size_t>((branch - 1) * (spec_.memory + 1) + j)];
    }

    void update_checks(const LlrFrame& frame, int t) {
        const int K = spec_.info_block_len;
        const int N = spec_.repetition_degree;
        const int m = spec_.memory;
        const double inf = std::numeric_limits<double>::infinity();
        for (int i = 1; i < N; ++i) {
            int js[64];
            int nj = 0;
            for (int j = 0; j <= m; ++j)
                if (source_is_data(t, j)) js[nj++] = j;
            for (int s = 0; s < K; ++s) {
                const double ch = frame.par_at(t, i, s);
                // leave-one-out boxplus over [channel, edge values] via
                // prefix/suffix products
                double in[64];
                for (int a = 0; a < nj; ++a)
                    in[a] = e2c_[edge_index(t, i, js[a], static_cast<int>(pi(i, js[a]).fwd[static_cast<std::size_t>(s)]))];
                double pre[65];
                pre[0] = ch;
                for (int a = 0; a < nj; ++a) pre[a + 1] = boxplus(pre[a], in[a]);
                double suf = inf;
                for (int a = nj - 1; a >= 0; --a) {
                    const double out = boxplus(pre[a], suf);
                    c2e_[edge_index(t, i, js[a], static_cast<int>(pi(i, js[a]).fwd[static_cast<std::size_t>(s)]))] =
                        clip_llr(out);
                    suf = boxplus(suf, in[a]);
                }
            }
        }
    }

    void update_equality(const LlrFrame& frame, int t) {
        const int K = spec_.info_block_len;
        const int N = spec_.repetition_degree;
        const int m = spec_.memory;
        const int L = spec_.data_blocks;
        for (int p = 0; p < K; ++p) {
            double total = frame.sys_at(t, p);
            for (int j = 0; j <= m && t + j < L + m; ++j)
                for (int i = 1; i < N; ++i) total += c2e_[edge_index(t + j, i, j, p)];
            for (int j = 0; j <= m && t + j < L + m; ++j)
                for (int i = 1; i < N; ++i) {
                    const std::size_t e = edge_index(t + j, i, j, p);
                    e2c_[e] = clip_llr(total - c2e_[e]);
                }
            post_[static_cast<std::size_t>(t) * K + p] = clip_llr(total);
        }
    }

    double window_entropy(int lo, int hi) const {
        const int K = spec_.info_block_len;
        double h = 0.0;
        int n = 0;
        for (int t = lo; t <= hi; ++t)
            for (int p = 0; p < K; ++p, ++n) h += llr_entropy(post_[static_cast<std::size_t>(t) * K + p]);
        return n > 0 ? h / n : 0.0;
    }

    CodeSpec spec_;
    DecoderConfig cfg_;
    std::vector<Interleaver> pi_;
    std::vector<double> e2c_, c2e_, post_;
};

}  // namespace bmstr
