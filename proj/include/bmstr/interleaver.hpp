#pragma once

#include <cstdint>
#include <vector>

#include "bmstr/code_spec.hpp"
#include "bmstr/rng.hpp"

namespace bmstr {

// Permutation of {0..K-1}. Interleaving maps out[s] = in[fwd[s]]; inv is the
// inverse permutation (inv[fwd[s]] == s).
struct Interleaver {
    std::vector<std::uint32_t> fwd;
    std::vector<std::uint32_t> inv;

    static Interleaver from_fwd(std::vector<std::uint32_t> f) {
        Interleaver p;
        p.inv.resize(f.size());
        for (std::uint32_t s = 0; s < f.size(); ++s) p.inv[f[s]] = s;
        p.fwd = std::move(f);
        return p;
    }
};

// The (m+1)(N-1) interleavers Pi_{i,j} of a code instance, drawn once from
// interleaver_seed by sequential Fisher-Yates, stored in (i, j) order:
// index (i-1)*(m+1) + j for branch i in 1..N-1 and offset j in 0..m.
inline std::vector<Interleaver> build_interleavers(const CodeSpec& spec) {
    validate(spec);
    Rng rng(spec.interleaver_seed);
    std::vector<Interleaver> out;
    out.reserve(static_cast<std::size_t>(num_interleavers(spec)));
    for (int i = 1; i < spec.repetition_degree; ++i)
        for (int j = 0; j <= spec.memory; ++j)
            out.push_back(Interleaver::from_fwd(
                random_permutation(static_cast<std::size_t>(spec.info_block_len), rng)));
    return out;
}

// K_p distinct positions in [0, K), sorted, drawn from puncture_seed. The same
// pattern applies to branch N-1 of every layer.
inline std::vector<std::uint32_t> build_puncture_pattern(const CodeSpec& spec) {
    validate(spec);
    Rng rng(spec.puncture_seed);
    return random_subset_sorted(static_cast<std::size_t>(spec.info_block_len),
                                static_cast<std::size_t>(spec.puncture_len), rng);
}

}  // namespace bmstr
