#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bmstr/code_spec.hpp"
#include "bmstr/encoder.hpp"
#include "bmstr/interleaver.hpp"
#include "bmstr/rng.hpp"
#include "bmstr/wef.hpp"

// Brute-force ground truth at tiny scale: exhaustive codebooks, exact
// MAP/ML/list decoding, per-bit minimum distances and exhaustive ensemble
// averaging. Used by the test suite and the hidden `oracle` CLI subcommand,
// never by production paths. All guards fail loudly.

namespace bmstr {

struct ExplicitCode {
    CodeSpec spec;
    std::vector<Interleaver> pi;
    std::vector<std::uint32_t> puncture;
    FrameLayout layout;
};

inline ExplicitCode make_explicit(const CodeSpec& spec) {
    validate(spec);
    return ExplicitCode{spec, build_interleavers(spec), build_puncture_pattern(spec), frame_layout(spec)};
}

// Flat positions of the systematic bits inside the transmitted frame,
// message-bit order (bit t*K + p).
inline std::vector<std::size_t> systematic_positions(const FrameLayout& lay) {
    std::vector<std::size_t> pos;
    pos.reserve(static_cast<std::size_t>(lay.info_bits));
    std::size_t off = 0;
    for (int t = 0; t < lay.L; ++t) {
        for (int p = 0; p < lay.K; ++p) pos.push_back(off + static_cast<std::size_t>(p));
        off += static_cast<std::size_t>(lay.data_layer_bits);
    }
    return pos;
}

struct Codebook {
    int k = 0;
    int n = 0;
    std::vector<std::vector<std::uint8_t>> codewords;  // indexed by message, bit i = (msg >> i) & 1
};

// Every message encoded through the production encoder. Message bit i is
// information bit (t, p) with i = t*K + p.
inline Codebook enumerate_codebook(const ExplicitCode& code) {
    const FrameLayout& lay = code.layout;
    if (lay.info_bits > 16) throw std::invalid_argument("enumerate_codebook: K*L must be at most 16");
    Codebook book;
    book.k = static_cast<int>(lay.info_bits);
    book.n = static_cast<int>(lay.total_bits);
    book.codewords.reserve(1u << book.k);
    const int K = lay.K;
    for (std::uint32_t msg = 0; msg < (1u << book.k); ++msg) {
        std::vector<BitBlock> blocks(static_cast<std::size_t>(lay.L), BitBlock(static_cast<std::size_t>(K), 0));
        for (int i = 0; i < book.k; ++i)
            blocks[static_cast<std::size_t>(i / K)][static_cast<std::size_t>(i % K)] =
                static_cast<std::uint8_t>((msg >> i) & 1u);
        book.codewords.push_back(encode_frame(code.spec, blocks).bits);
    }
    return book;
}

inline int hamming_weight(const std::vector<std::uint8_t>& v) {
    int w = 0;
    for (auto b : v) w += b;
    return w;
}

// d_min,i: minimum codeword weight over messages with bit i set.
inline std::vector<int> dmin_per_bit(const Codebook& book) {
    std::vector<int> d(static_cast<std::size_t>(book.k), std::numeric_limits<int>::max());
    for (std::uint32_t msg = 1; msg < book.codewords.size(); ++msg) {
        const int w = hamming_weight(book.codewords[msg]);
        for (int i = 0; i < book.k; ++i)
            if ((msg >> i) & 1u) d[static_cast<std::size_t>(i)] = std::min(d[static_cast<std::size_t>(i)], w);
    }
    return d;
}

inline int dmin(const Codebook& book) {
    const auto d = dmin_per_bit(book);
    return *std::min_element(d.begin(), d.end());
}

// Exact IRWEF of one specific code, by codebook enumeration (input weight i,
// redundancy weight = codeword weight - i for systematic codes).
inline IRWEFTable irwef_from_codebook(const Codebook& book) {
    IRWEFTable t;
    t.T = book.k;
    t.k = book.k;
    t.y_cap = -1;
    t.rows.assign(static_cast<std::size_t>(book.k) + 1, WeightPoly{});
    for (std::uint32_t msg = 0; msg < book.codewords.size(); ++msg) {
        const int i = static_cast<int>(std::popcount(msg));
        const int j = hamming_weight(book.codewords[msg]) - i;
        WeightPoly& row = t.rows[static_cast<std::size_t>(i)];
        row += WeightPoly::monomial(j, 1.0);
    }
    return t;
}

struct MapResult {
    std::vector<double> posterior0;  // Pr(U_i = 0 | y)
    std::vector<std::uint8_t> bits;  // ties (posterior exactly 1/2) decide 0
};

namespace detail {

inline double logsumexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-(std::abs(a - b))));
}

}  // namespace detail

// Exact bitwise MAP by summation over the whole codebook, log-domain.
inline MapResult map_decode(const std::vector<double>& y, const Codebook& book, double sigma) {
    if (static_cast<int>(y.size()) != book.n) throw std::invalid_argument("map_decode: length mismatch");
    const double inv = 1.0 / (sigma * sigma);
    MapResult r;
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> l0(static_cast<std::size_t>(book.k), ninf), l1(static_cast<std::size_t>(book.k), ninf);
    for (std::uint32_t msg = 0; msg < book.codewords.size(); ++msg) {
        const auto& c = book.codewords[msg];
        double ll = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) ll += (c[j] ? -y[j] : y[j]) * inv;
        for (int i = 0; i < book.k; ++i) {
            auto& acc = ((msg >> i) & 1u) ? l1[static_cast<std::size_t>(i)] : l0[static_cast<std::size_t>(i)];
            acc = detail::logsumexp(acc, ll);
        }
    }
    r.posterior0.resize(static_cast<std::size_t>(book.k));
    r.bits.resize(static_cast<std::size_t>(book.k));
    for (int i = 0; i < book.k; ++i) {
        const double d = l1[static_cast<std::size_t>(i)] - l0[static_cast<std::size_t>(i)];
        r.posterior0[static_cast<std::size_t>(i)] = 1.0 / (1.0 + std::exp(d));
        r.bits[static_cast<std::size_t>(i)] = d > 0.0 ? 1 : 0;
    }
    return r;
}

// Maximum-likelihood codeword; exact ties resolved by a seeded uniform pick.
inline std::vector<std::uint8_t> ml_decode(const std::vector<double>& y, const Codebook& book, Rng& tie_rng) {
    if (static_cast<int>(y.size()) != book.n) throw std::invalid_argument("ml_decode: length mismatch");
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> ties;
    for (std::uint32_t msg = 0; msg < book.codewords.size(); ++msg) {
        const auto& c = book.codewords[msg];
        double corr = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) corr += c[j] ? -y[j] : y[j];
        if (corr > best) {
            best = corr;
            ties.assign(1, msg);
        } else if (corr == best) {
            ties.push_back(msg);
        }
    }
    const std::uint32_t pick = ties[static_cast<std::size_t>(tie_rng.uniform_below(ties.size()))];
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(book.k));
    for (int i = 0; i < book.k; ++i) bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((pick >> i) & 1u);
    return bits;
}

// List decoding for analysis: hard-decide the systematic part, re-encode
// every message within Hamming radius r* of it, output the closest codeword's
// information part. r* = 0 is the plain hard-decision decoder; r* = k is a
// full search equivalent to ML.
inline std::vector<std::uint8_t> list_decode(const std::vector<double>& y, const ExplicitCode& code,
                                             int r_star, Rng& tie_rng) {
    const FrameLayout& lay = code.layout;
    const int k = static_cast<int>(lay.info_bits);
    if (k > 24) throw std::invalid_argument("list_decode: K*L too large");
    if (static_cast<long long>(y.size()) != lay.total_bits)
        throw std::invalid_argument("list_decode: length mismatch");
    if (r_star < 0) throw std::invalid_argument("list_decode: r* must be nonnegative");
    r_star = std::min(r_star, k);
    double sphere = 0.0;
    for (int w = 0; w <= r_star; ++w) sphere += choose(k, w);
    if (sphere > static_cast<double>(1u << 22)) throw std::invalid_argument("list_decode: sphere too large");

    const auto sys_pos = systematic_positions(lay);
    std::vector<std::uint8_t> center(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) center[static_cast<std::size_t>(i)] = y[sys_pos[static_cast<std::size_t>(i)]] < 0.0;

    Encoder enc(code.spec);
    const int K = lay.K;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::uint8_t>> ties;

    std::vector<std::uint8_t> cand = center;
    std::vector<int> flips;
    auto evaluate = [&]() {
        std::vector<BitBlock> blocks(static_cast<std::size_t>(lay.L), BitBlock(static_cast<std::size_t>(K), 0));
        for (int i = 0; i < k; ++i) blocks[static_cast<std::size_t>(i / K)][static_cast<std::size_t>(i % K)] = cand[static_cast<std::size_t>(i)];
        enc.reset();
        std::vector<std::uint8_t> tx;
        tx.reserve(static_cast<std::size_t>(lay.total_bits));
        for (const auto& u : blocks) append_block(tx, enc.encode_block(u));
        for (const auto& b : enc.terminate()) append_block(tx, b);
        double corr = 0.0;
        for (std::size_t j = 0; j < tx.size(); ++j) corr += tx[j] ? -y[j] : y[j];
        if (corr > best) {
            best = corr;
            ties.assign(1, cand);
        } else if (corr == best) {
            ties.push_back(cand);
        }
    };
    // enumerate all flip sets of size <= r*
    auto rec = [&](auto&& self, int start, int remaining) -> void {
        evaluate();
        if (remaining == 0) return;
        for (int i = start; i < k; ++i) {
            cand[static_cast<std::size_t>(i)] ^= 1u;
            self(self, i + 1, remaining - 1);
            cand[static_cast<std::size_t>(i)] ^= 1u;
        }
    };
    // note: evaluate() fires once per prefix; dedupe not needed because each
    // flip set is visited exactly once (subsets enumerated by increasing index)
    rec(rec, 0, r_star);
    return ties[static_cast<std::size_t>(tie_rng.uniform_below(ties.size()))];
}

// --- exhaustive ensemble averaging -----------------------------------------

// Average IRWEF over the uniform-interleaver ensemble: every interleaver is
// redrawn independently and uniformly at each layer, and with K_p > 0 the
// puncture pattern is redrawn per layer. Pure enumeration, independent of the
// trellis recursion it validates.
inline IRWEFTable ensemble_irwef_exhaustive(const CodeSpec& spec) {
    validate(spec);
    const int K = spec.info_block_len;
    const int N = spec.repetition_degree;
    const int m = spec.memory;
    const int L = spec.data_blocks;
    const int Kp = spec.puncture_len;
    const int k = K * L;
    if (k > 12) throw std::invalid_argument("ensemble_irwef_exhaustive: K*L must be at most 12");

    // all permutations of {0..K-1}, as mask-transform tables
    std::vector<std::vector<int>> perms;
    {
        std::vector<int> p(static_cast<std::size_t>(K));
        for (int i = 0; i < K; ++i) p[static_cast<std::size_t>(i)] = i;
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    std::vector<std::vector<std::uint16_t>> permap(perms.size(),
                                                   std::vector<std::uint16_t>(1u << K, 0));
    for (std::size_t pi = 0; pi < perms.size(); ++pi)
        for (std::uint32_t x = 0; x < (1u << K); ++x) {
            std::uint16_t out = 0;
            for (int s = 0; s < K; ++s)
                if ((x >> perms[pi][static_cast<std::size_t>(s)]) & 1u) out |= static_cast<std::uint16_t>(1u << s);
            permap[pi][x] = out;
        }

    // interleaver slots that act on data blocks: (t, i, j) with 0 <= t-j < L
    struct Slot {
        int t, i, j;
    };
    std::vector<Slot> slots;
    for (int t = 0; t < L + m; ++t)
        for (int i = 1; i < N; ++i)
            for (int j = 0; j <= m; ++j)
                if (t - j >= 0 && t - j < L) slots.push_back({t, i, j});

    // puncture patterns (masks of kept positions) per layer
    std::vector<std::uint16_t> keep_masks;
    if (Kp > 0) {
        for (std::uint32_t mset = 0; mset < (1u << K); ++mset)
            if (std::popcount(mset) == Kp) keep_masks.push_back(static_cast<std::uint16_t>(~mset & ((1u << K) - 1)));
    } else {
        keep_masks.push_back(static_cast<std::uint16_t>((1u << K) - 1));
    }

    double tuples = 1.0;
    for (std::size_t s = 0; s < slots.size(); ++s) tuples *= static_cast<double>(perms.size());
    double pcombos = std::pow(static_cast<double>(keep_masks.size()), L + m);
    const double work = tuples * pcombos * std::pow(2.0, k);
    if (work > 6.0e7) throw std::invalid_argument("ensemble_irwef_exhaustive: enumeration too large");

    IRWEFTable table;
    table.T = k;
    table.k = k;
    table.y_cap = -1;
    table.rows.assign(static_cast<std::size_t>(k) + 1, WeightPoly{});
    const double weight = 1.0 / (tuples * pcombos);

    std::vector<std::size_t> assign(slots.size(), 0);
    std::vector<std::size_t> pat(static_cast<std::size_t>(L + m), 0);
    const std::uint32_t msg_count = 1u << k;

    auto run_messages = [&]() {
        for (std::uint32_t msg = 0; msg < msg_count; ++msg) {
            int iw = 0, jw = 0;
            for (int t = 0; t < L; ++t) iw += std::popcount((msg >> (t * K)) & ((1u << K) - 1));
            for (int t = 0; t < L + m; ++t) {
                for (int i = 1; i < N; ++i) {
                    std::uint16_t c = 0;
                    for (std::size_t s = 0; s < slots.size(); ++s) {
                        if (slots[s].t != t || slots[s].i != i) continue;
                        const std::uint32_t block = (msg >> ((t - slots[s].j) * K)) & ((1u << K) - 1);
                        c ^= permap[assign[s]][block];
                    }
                    if (i == N - 1) c &= keep_masks[pat[static_cast<std::size_t>(t)]];
                    jw += std::popcount(static_cast<std::uint32_t>(c));
                }
            }
            table.rows[static_cast<std::size_t>(iw)] += WeightPoly::monomial(jw, weight);
        }
    };

    // odometer over puncture-pattern combinations, then interleaver tuples
    auto run_patterns = [&]() {
        while (true) {
            run_messages();
            std::size_t d = 0;
            while (d < pat.size()) {
                if (++pat[d] < keep_masks.size()) break;
                pat[d] = 0;
                ++d;
            }
            if (d == pat.size()) break;
        }
    };

    while (true) {
        run_patterns();
        std::size_t d = 0;
        while (d < assign.size()) {
            if (++assign[d] < perms.size()) break;
            assign[d] = 0;
            ++d;
        }
        if (d == assign.size()) break;
    }
    return table;
}

// --- exact MAP / minimum distances on the block trellis --------------------

// Exact bitwise MAP (forward-backward over the 2^{mK}-state encoder trellis)
// and exhaustive per-bit minimum distances, for codes whose codebook is too
// large to enumerate but whose block state space is small. Cross-checked
// against the codebook oracle on tiny instances.
class BlockTrellis {
  public:
    explicit BlockTrellis(const ExplicitCode& code) : code_(code) {
        const int K = code.layout.K;
        const int m = code.layout.m;
        const int N = code.layout.N;
        if (K > 14 || m * K > 16 || (m + 1) * K > 24)
            throw std::invalid_argument("BlockTrellis: state space too large");
        ptab_.assign(static_cast<std::size_t>((N - 1) * (m + 1)), std::vector<std::uint32_t>(1u << K, 0));
        for (int i = 1; i < N; ++i)
            for (int j = 0; j <= m; ++j) {
                auto& tab = ptab_[static_cast<std::size_t>((i - 1) * (m + 1) + j)];
                const auto& fwd = code.pi[static_cast<std::size_t>((i - 1) * (m + 1) + j)].fwd;
                for (std::uint32_t x = 0; x < (1u << K); ++x) {
                    std::uint32_t out = 0;
                    for (int s = 0; s < K; ++s)
                        if ((x >> fwd[static_cast<std::size_t>(s)]) & 1u) out |= 1u << s;
                    tab[x] = out;
                }
            }
        punct_mask_ = 0;
        for (auto p : code.puncture) punct_mask_ |= 1u << p;
    }

    // Parity word of branch i given current block u and state s (previous
    // blocks packed oldest-highest).
    std::uint32_t parity_word(int i, std::uint32_t s, std::uint32_t u) const {
        const int K = code_.layout.K;
        const int m = code_.layout.m;
        std::uint32_t x = ptab_[static_cast<std::size_t>((i - 1) * (m + 1))][u];
        for (int j = 1; j <= m; ++j)
            x ^= ptab_[static_cast<std::size_t>((i - 1) * (m + 1) + j)][(s >> ((j - 1) * K)) & block_mask()];
        return x;
    }

    MapResult map_decode(const std::vector<double>& y, double sigma) const {
        const FrameLayout& lay = code_.layout;
        const int K = lay.K, N = lay.N, m = lay.m, L = lay.L;
        if (static_cast<long long>(y.size()) != lay.total_bits)
            throw std::invalid_argument("BlockTrellis: length mismatch");
        const std::size_t S = 1u << (m * K);
        const std::uint32_t U = 1u << K;
        const double inv = 1.0 / (sigma * sigma);

        // per-stage, per-branch word likelihood tables, exp-normalized
        std::vector<std::vector<double>> esys(static_cast<std::size_t>(L));
        std::vector<std::vector<std::vector<double>>> epar(static_cast<std::size_t>(L + m));
        std::size_t pos = 0;
        for (int t = 0; t < L + m; ++t) {
            if (t < L) {
                esys[static_cast<std::size_t>(t)] = word_table(&y[pos], K, 0u, inv);
                pos += static_cast<std::size_t>(K);
            }
            epar[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(N - 1));
            for (int i = 1; i < N; ++i) {
                const bool punct = (i == N - 1) && code_.spec.puncture_len > 0;
                epar[static_cast<std::size_t>(t)][static_cast<std::size_t>(i - 1)] =
                    word_table(&y[pos], K, punct ? punct_mask_ : 0u, inv);
                pos += static_cast<std::size_t>(K) - (punct ? code_.spec.puncture_len : 0);
            }
        }

        // forward/backward in probability domain with per-stage normalization
        std::vector<std::vector<double>> alpha(static_cast<std::size_t>(L + m) + 1,
                                               std::vector<double>(S, 0.0));
        alpha[0][0] = 1.0;
        for (int t = 0; t < L + m; ++t) {
            auto& a = alpha[static_cast<std::size_t>(t)];
            auto& an = alpha[static_cast<std::size_t>(t) + 1];
            const std::uint32_t umax = (t < L) ? U : 1;
            for (std::uint32_t s = 0; s < S; ++s) {
                if (a[s] == 0.0) continue;
                for (std::uint32_t u = 0; u < umax; ++u)
                    an[next_state(s, u)] += a[s] * gamma(t, s, u, esys, epar);
            }
            normalize(an);
        }
        std::vector<std::vector<double>> beta(static_cast<std::size_t>(L + m) + 1,
                                              std::vector<double>(S, 0.0));
        beta[static_cast<std::size_t>(L + m)].assign(S, 1.0);
        for (int t = L + m - 1; t >= 0; --t) {
            auto& b = beta[static_cast<std::size_t>(t)];
            auto& bn = beta[static_cast<std::size_t>(t) + 1];
            const std::uint32_t umax = (t < L) ? U : 1;
            for (std::uint32_t s = 0; s < S; ++s) {
                double acc = 0.0;
                for (std::uint32_t u = 0; u < umax; ++u)
                    acc += gamma(t, s, u, esys, epar) * bn[next_state(s, u)];
                b[s] = acc;
            }
            normalize(b);
        }

        MapResult r;
        r.posterior0.resize(static_cast<std::size_t>(lay.info_bits));
        r.bits.resize(static_cast<std::size_t>(lay.info_bits));
        std::vector<double> ju(U);
        for (int t = 0; t < L; ++t) {
            std::fill(ju.begin(), ju.end(), 0.0);
            const auto& a = alpha[static_cast<std::size_t>(t)];
            const auto& bn = beta[static_cast<std::size_t>(t) + 1];
            for (std::uint32_t s = 0; s < S; ++s) {
                if (a[s] == 0.0) continue;
                for (std::uint32_t u = 0; u < U; ++u)
                    ju[u] += a[s] * gamma(t, s, u, esys, epar) * bn[next_state(s, u)];
            }
            for (int b = 0; b < K; ++b) {
                double p0 = 0.0, p1 = 0.0;
                for (std::uint32_t u = 0; u < U; ++u) ((u >> b) & 1u ? p1 : p0) += ju[u];
                const std::size_t idx = static_cast<std::size_t>(t) * K + b;
                r.posterior0[idx] = p0 / (p0 + p1);
                r.bits[idx] = p1 > p0 ? 1 : 0;
            }
        }
        return r;
    }

    // Exhaustive d_min,i by a weight Viterbi pass constrained to bit i = 1.
    std::vector<int> dmin_per_bit() const {
        const FrameLayout& lay = code_.layout;
        const int K = lay.K, N = lay.N, m = lay.m, L = lay.L;
        const std::size_t S = 1u << (m * K);
        const std::uint32_t U = 1u << K;
        const int INF = std::numeric_limits<int>::max() / 2;

        // parity weight per word, with and without the puncture mask
        std::vector<int> wword(1u << K, 0);
        for (std::uint32_t x = 0; x < (1u << K); ++x) wword[x] = std::popcount(x);
        std::vector<int> wword_punct(1u << K, 0);
        for (std::uint32_t x = 0; x < (1u << K); ++x)
            wword_punct[x] = std::popcount(x & ~punct_mask_);

        std::vector<int> result(static_cast<std::size_t>(lay.info_bits), INF);
        for (int tb = 0; tb < L; ++tb)
            for (int bb = 0; bb < K; ++bb) {
                std::vector<int> dist(S, INF), nd(S, INF);
                dist[0] = 0;
                for (int t = 0; t < L + m; ++t) {
                    std::fill(nd.begin(), nd.end(), INF);
                    const std::uint32_t umax = (t < L) ? U : 1;
                    for (std::uint32_t s = 0; s < S; ++s) {
                        if (dist[s] >= INF) continue;
                        for (std::uint32_t u = 0; u < umax; ++u) {
                            if (t == tb && !((u >> bb) & 1u)) continue;
                            int w = (t < L) ? std::popcount(u) : 0;
                            for (int i = 1; i < N; ++i) {
                                const std::uint32_t x = parity_word(i, s, u);
                                w += (i == N - 1) ? wword_punct[x] : wword[x];
                            }
                            const std::uint32_t s2 = next_state(s, u);
                            nd[s2] = std::min(nd[s2], dist[s] + w);
                        }
                    }
                    dist.swap(nd);
                }
                result[static_cast<std::size_t>(tb) * K + bb] = dist[0];
            }
        return result;
    }

  private:
    std::uint32_t block_mask() const { return (1u << code_.layout.K) - 1; }

    std::uint32_t next_state(std::uint32_t s, std::uint32_t u) const {
        const int K = code_.layout.K;
        const int m = code_.layout.m;
        if (m == 0) return 0;
        return ((s << K) | u) & ((1u << (m * K)) - 1);
    }

    double gamma(int t, std::uint32_t s, std::uint32_t u, const std::vector<std::vector<double>>& esys,
                 const std::vector<std::vector<std::vector<double>>>& epar) const {
        const int N = code_.layout.N;
        double g = (t < code_.layout.L) ? esys[static_cast<std::size_t>(t)][u] : 1.0;
        for (int i = 1; i < N; ++i)
            g *= epar[static_cast<std::size_t>(t)][static_cast<std::size_t>(i - 1)][parity_word(i, s, u)];
        return g;
    }

    // exp-normalized likelihood of every K-bit word from consecutive samples;
    // positions set in mask were punctured (absent from y) and contribute
    // nothing to the metric.
    static std::vector<double> word_table(const double* y, int K, std::uint32_t mask, double inv) {
        std::vector<double> yfull(static_cast<std::size_t>(K), 0.0);
        std::size_t idx = 0;
        for (int b = 0; b < K; ++b) {
            if ((mask >> b) & 1u) continue;
            yfull[static_cast<std::size_t>(b)] = y[idx++];
        }
        std::vector<double> ll(1u << K, 0.0);
        for (std::uint32_t x = 1; x < (1u << K); ++x) {
            const int b = std::countr_zero(x);
            ll[x] = ll[x & (x - 1)] - 2.0 * yfull[static_cast<std::size_t>(b)] * inv;
        }
        double base = 0.0;
        for (int b = 0; b < K; ++b) base += yfull[static_cast<std::size_t>(b)] * inv;
        return finish_table(ll, base);
    }

    static std::vector<double> finish_table(std::vector<double>& ll, double base) {
        double mx = -std::numeric_limits<double>::infinity();
        for (auto& v : ll) {
            v += base;
            mx = std::max(mx, v);
        }
        for (auto& v : ll) v = std::exp(v - mx);
        return ll;
    }

    static void normalize(std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        if (s > 0.0)
            for (double& x : v) x /= s;
    }

    ExplicitCode code_;
    std::vector<std::vector<std::uint32_t>> ptab_;
    std::uint32_t punct_mask_ = 0;
};

}  // namespace bmstr
