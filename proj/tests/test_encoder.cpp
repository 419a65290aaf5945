#include <catch2/catch_amalgamated.hpp>

#include "bmstr/encoder.hpp"
#include "bmstr/rng.hpp"

using namespace bmstr;

namespace {

CodeSpec make_spec(int N, int K, int Kp, int L, int m, std::uint64_t iseed = 1, std::uint64_t pseed = 2) {
    CodeSpec s;
    s.repetition_degree = N;
    s.info_block_len = K;
    s.puncture_len = Kp;
    s.data_blocks = L;
    s.memory = m;
    s.interleaver_seed = iseed;
    s.puncture_seed = pseed;
    return s;
}

std::vector<BitBlock> random_message(const CodeSpec& s, Rng& rng) {
    std::vector<BitBlock> blocks(static_cast<std::size_t>(s.data_blocks),
                                 BitBlock(static_cast<std::size_t>(s.info_block_len)));
    for (auto& b : blocks)
        for (auto& bit : b) bit = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return blocks;
}

std::vector<std::uint8_t> xor_bits(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    std::vector<std::uint8_t> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
    return r;
}

}  // namespace

TEST_CASE("interleavers are deterministic, bijective, identity at K=1") {
    const auto s = make_spec(3, 16, 0, 4, 2, 77);
    const auto a = build_interleavers(s);
    const auto b = build_interleavers(s);
    REQUIRE(a.size() == static_cast<std::size_t>(num_interleavers(s)));
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].fwd == b[i].fwd);
        for (std::uint32_t p = 0; p < a[i].fwd.size(); ++p) REQUIRE(a[i].inv[a[i].fwd[p]] == p);
    }
    for (const auto& pi : build_interleavers(make_spec(4, 1, 0, 2, 3)))
        REQUIRE(pi.fwd == std::vector<std::uint32_t>{0});
}

TEST_CASE("puncture pattern cardinality and determinism") {
    REQUIRE(build_puncture_pattern(make_spec(2, 8, 0, 2, 0)).empty());
    const auto s = make_spec(3, 4, 3, 2, 0, 1, 9);
    const auto p = build_puncture_pattern(s);
    REQUIRE(p.size() == 3);
    REQUIRE(p == build_puncture_pattern(s));
    for (std::size_t i = 1; i < p.size(); ++i) REQUIRE(p[i - 1] < p[i]);
}

TEST_CASE("hand-computed K=2 frame with identity interleavers") {
    // K=1 forces identity permutations, so emulate K=2 identity interleavers
    // by scanning seeds until both permutations come out identity.
    auto s = make_spec(2, 2, 0, 2, 1);
    bool found = false;
    for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
        s.interleaver_seed = seed;
        const auto pis = build_interleavers(s);
        found = pis[0].fwd == std::vector<std::uint32_t>{0, 1} && pis[1].fwd == std::vector<std::uint32_t>{0, 1};
    }
    REQUIRE(found);

    Encoder enc(s);
    const auto b0 = enc.encode_block({1, 1});
    REQUIRE(b0.systematic == BitBlock{1, 1});
    REQUIRE(b0.parity[0] == BitBlock{1, 1});
    const auto b1 = enc.encode_block({0, 1});
    REQUIRE(b1.systematic == BitBlock{0, 1});
    REQUIRE(b1.parity[0] == BitBlock{1, 0});
    const auto tail = enc.terminate();
    REQUIRE(tail.size() == 1);
    REQUIRE(tail[0].systematic.empty());
    REQUIRE(tail[0].parity[0] == BitBlock{0, 1});
    REQUIRE(enc.in_zero_state());

    const auto frame = encode_frame(s, {{1, 1}, {0, 1}});
    REQUIRE(frame.bits.size() == 10);  // rate 4/10 = 1/(2 + 1/2)
    REQUIRE(frame.bits == std::vector<std::uint8_t>{1, 1, 1, 1, 0, 1, 1, 0, 0, 1});
}

TEST_CASE("m=0 is plain interleaved repetition") {
    const auto s = make_spec(2, 8, 0, 1, 0, 5);
    Encoder enc(s);
    const auto pi = enc.interleavers()[0].fwd;
    BitBlock u = {1, 0, 0, 1, 1, 0, 1, 0};
    const auto b = enc.encode_block(u);
    for (int p = 0; p < 8; ++p) REQUIRE(b.parity[0][static_cast<std::size_t>(p)] == u[pi[static_cast<std::size_t>(p)]]);
}

TEST_CASE("frame bit counts and zero input") {
    const auto s = make_spec(2, 30, 0, 20, 2);
    const auto lay = frame_layout(s);
    REQUIRE(lay.total_bits == 600 + 30 * 22);
    std::vector<BitBlock> zeros(20, BitBlock(30, 0));
    const auto f = encode_frame(s, zeros);
    for (auto b : f.bits) REQUIRE(b == 0);
}

TEST_CASE("encoder properties on randomized small specs") {
    Rng rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const int N = 2 + static_cast<int>(rng.uniform_below(3));
        const int K = 2 + static_cast<int>(rng.uniform_below(7));
        const int m = static_cast<int>(rng.uniform_below(3));
        const int L = 1 + static_cast<int>(rng.uniform_below(5));
        const int Kp = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(K)));
        const auto s = make_spec(N, K, Kp, L, m, rng.next_u64(), rng.next_u64());
        const auto lay = frame_layout(s);

        const auto u = random_message(s, rng);
        const auto v = random_message(s, rng);
        const auto fu = encode_frame(s, u).bits;
        const auto fv = encode_frame(s, v).bits;
        REQUIRE(static_cast<long long>(fu.size()) == lay.total_bits);

        // systematic property
        std::size_t off = 0;
        for (int t = 0; t < L; ++t) {
            for (int p = 0; p < K; ++p)
                REQUIRE(fu[off + static_cast<std::size_t>(p)] ==
                        u[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
            off += static_cast<std::size_t>(lay.data_layer_bits);
        }

        // linearity over GF(2)
        std::vector<BitBlock> w(u.size());
        for (std::size_t t = 0; t < u.size(); ++t) w[t] = xor_bits(u[t], v[t]);
        REQUIRE(encode_frame(s, w).bits == xor_bits(fu, fv));

        // termination returns to the zero state; a further zero block has
        // all-zero parity
        Encoder enc(s);
        for (const auto& blk : u) enc.encode_block(blk);
        enc.terminate();
        REQUIRE(enc.in_zero_state());
        const auto z = enc.encode_block(BitBlock(static_cast<std::size_t>(K), 0));
        for (const auto& par : z.parity)
            for (auto bit : par) REQUIRE(bit == 0);
    }
}

TEST_CASE("single-bit messages have codeword weight N + m(N-1) at theta=0") {
    Rng rng(7);
    for (int rep = 0; rep < 40; ++rep) {
        const int N = 2 + static_cast<int>(rng.uniform_below(3));
        const int K = 2 + static_cast<int>(rng.uniform_below(6));
        const int m = static_cast<int>(rng.uniform_below(3));
        const int L = 1 + static_cast<int>(rng.uniform_below(4));
        const auto s = make_spec(N, K, 0, L, m, rng.next_u64());
        const int t = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(L)));
        const int p = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(K)));
        std::vector<BitBlock> u(static_cast<std::size_t>(L), BitBlock(static_cast<std::size_t>(K), 0));
        u[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] = 1;
        int weight = 0;
        for (auto b : encode_frame(s, u).bits) weight += b;
        REQUIRE(weight == N + m * (N - 1));
    }
}

TEST_CASE("encoder rejects wrong block length and wrong L") {
    const auto s = make_spec(2, 4, 0, 2, 1);
    Encoder enc(s);
    REQUIRE_THROWS_AS(enc.encode_block(BitBlock(3, 0)), std::invalid_argument);
    REQUIRE_THROWS_AS(encode_frame(s, std::vector<BitBlock>(3, BitBlock(4, 0))), std::invalid_argument);
}
