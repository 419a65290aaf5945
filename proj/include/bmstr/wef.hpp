#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "bmstr/code_spec.hpp"
#include "bmstr/weight_poly.hpp"

// Ensemble weight-enumerator machinery. Under the uniform-interleaver
// ensemble (every interleaver redrawn uniformly at each layer, puncture
// pattern redrawn per layer), parity weights depend only on block weights,
// which admits a trellis over weight vectors with (K+1)^m states. The forward
// pass accumulates the input-redundancy weight enumerator A(X, Y); rows with
// input weight above the truncation parameter T are dropped, as are branches
// whose weight window q0 + sum(p) exceeds T.

namespace bmstr {

// Binomial coefficient as a double (exact to ~1 ulp per factor).
inline double choose(long long n, long long k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (long long i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

inline double log_choose(long long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// g(r|p,q): weight distribution of the superposition of two independently and
// uniformly permuted length-K vectors of weights p and q. With w = p + q - r,
// g = C(q, w/2) C(K-q, p-w/2) / C(K, p) for even w, else 0.
inline WeightPoly superpose_dist(int K, int p, int q) {
    if (p < 0 || p > K || q < 0 || q > K) throw std::invalid_argument("superpose_dist: weight out of range");
    std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
    const double denom = choose(K, p);
    for (int r = 0; r <= K; ++r) {
        const int w = p + q - r;
        if (w < 0 || (w & 1)) continue;
        const int s = w / 2;
        const double num = choose(q, s) * choose(K - q, p - s);
        if (num > 0.0) out[static_cast<std::size_t>(r)] = num / denom;
    }
    return WeightPoly(std::move(out));
}

// f(r|p,q0): iterated superposition of a weight-q0 block with the m history
// weights in p. Starts from the point mass at q0 and folds in each p_j.
inline WeightPoly branch_dist(int K, std::span<const int> history, int q0) {
    std::vector<double> a(static_cast<std::size_t>(K) + 1, 0.0);
    a[static_cast<std::size_t>(q0)] = 1.0;
    for (int pj : history) {
        std::vector<double> b(static_cast<std::size_t>(K) + 1, 0.0);
        for (int l = 0; l <= K; ++l) {
            const double al = a[static_cast<std::size_t>(l)];
            if (al == 0.0) continue;
            const WeightPoly gl = superpose_dist(K, l, pj);
            for (int r = 0; r <= gl.degree(); ++r) b[static_cast<std::size_t>(r)] += al * gl.at(r);
        }
        a = std::move(b);
    }
    return WeightPoly(std::move(a));
}

// Hypergeometric thinning by K_p random punctures: weight r maps to r - w
// with probability C(r, w) C(K-r, K_p-w) / C(K, K_p). Out-of-range binomials
// are zero, which makes the single expression cover all K_p.
inline WeightPoly puncture_thin(int K, int Kp, const WeightPoly& f) {
    if (Kp < 0 || Kp > K) throw std::invalid_argument("puncture_thin: K_p out of range");
    if (Kp == 0) return f;
    std::vector<double> out(static_cast<std::size_t>(f.degree()) + 1, 0.0);
    const double denom = choose(K, Kp);
    for (int r = 0; r <= f.degree(); ++r) {
        const double fr = f.at(r);
        if (fr == 0.0) continue;
        for (int w = 0; w <= std::min(r, Kp); ++w) {
            const double h = choose(r, w) * choose(K - r, Kp - w);
            if (h > 0.0) out[static_cast<std::size_t>(r - w)] += fr * h / denom;
        }
    }
    return WeightPoly(std::move(out));
}

inline WeightPoly punctured_branch_dist(int K, int Kp, std::span<const int> history, int q0) {
    return puncture_thin(K, Kp, branch_dist(K, history, q0));
}

// Weight enumerator of a punctured weight-w point mass (B_1, B_2, ... of the
// closed-form CRWEFs).
inline WeightPoly puncture_point_mass(int K, int Kp, int w) {
    return puncture_thin(K, Kp, WeightPoly::monomial(w));
}

struct IRWEFTable {
    int T = 0;            // truncation: rows i = 0..T
    long long k = 0;      // information length K*L
    int y_cap = -1;       // redundancy weights above this were dropped (-1: exact)
    std::vector<WeightPoly> rows;

    double entry(int i, int j) const {
        return (i >= 0 && i <= T) ? rows[static_cast<std::size_t>(i)].at(j) : 0.0;
    }
    double row_sum(int i) const {
        return (i >= 0 && i <= T) ? rows[static_cast<std::size_t>(i)].sum() : 0.0;
    }
};

struct IrwefOptions {
    int y_cap = -1;                      // drop redundancy weights above this
    std::size_t max_states = 1u << 20;   // (K+1)^m guard
    std::size_t max_rows = 1u << 22;     // states x (T+1) guard
};

namespace detail {

struct VecIntHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ULL;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace detail

// Forward trellis pass (beta recursion) over L+m stages. Branch p -> q carries
// C(K, q0) X^{q0} gamma~ gamma^{N-2}; termination forces q0 = 0 on the last m
// stages, and the all-zero final state collects A(X, Y).
inline IRWEFTable compute_irwef(const CodeSpec& spec, int T, IrwefOptions opts = {}) {
    validate(spec);
    if (T < 0) throw std::invalid_argument("compute_irwef: T must be nonnegative");
    const int K = spec.info_block_len;
    const int N = spec.repetition_degree;
    const int Kp = spec.puncture_len;
    const int m = spec.memory;
    const int L = spec.data_blocks;

    std::size_t state_count = 1;
    for (int j = 0; j < m; ++j) {
        if (state_count > opts.max_states / static_cast<std::size_t>(K + 1))
            throw std::runtime_error("compute_irwef: state budget exceeded ((K+1)^m too large)");
        state_count *= static_cast<std::size_t>(K + 1);
    }
    if (state_count * static_cast<std::size_t>(T + 1) > opts.max_rows)
        throw std::runtime_error("compute_irwef: truncation budget exceeded (states x rows too large)");

    const std::size_t shift = state_count / static_cast<std::size_t>(m > 0 ? (K + 1) : 1);

    // Branch kernels keyed by the multiset {q0, p_0..p_{m-1}}: branch_dist is
    // symmetric in its weights, so sorting the key maximizes cache reuse.
    std::unordered_map<std::vector<int>, WeightPoly, detail::VecIntHash> kernels;
    auto kernel_for = [&](std::vector<int> key) -> const WeightPoly& {
        std::sort(key.begin(), key.end());
        auto it = kernels.find(key);
        if (it != kernels.end()) return it->second;
        const int q0 = key.back();  // any element works; pick one, rest are history
        std::vector<int> hist(key.begin(), key.end() - 1);
        const WeightPoly f = branch_dist(K, hist, q0);
        WeightPoly kern = puncture_thin(K, Kp, f);
        if (N > 2) {
            for (int i = 0; i < N - 2; ++i) {
                WeightPoly next;
                next.add_scaled_product(kern, f, 1.0, opts.y_cap);
                kern = std::move(next);
            }
        } else {
            kern.truncate(opts.y_cap);
        }
        return kernels.emplace(std::move(key), std::move(kern)).first->second;
    };

    using Rows = std::vector<WeightPoly>;  // index: input weight i (empty = absent)
    std::vector<Rows> cur(state_count), nxt(state_count);
    std::vector<int> state_sum(state_count, 0);
    for (std::size_t s = 0; s < state_count; ++s) {
        std::size_t v = s;
        int sum = 0;
        for (int j = 0; j < m; ++j) {
            sum += static_cast<int>(v % static_cast<std::size_t>(K + 1));
            v /= static_cast<std::size_t>(K + 1);
        }
        state_sum[s] = sum;
    }
    cur[0].assign(static_cast<std::size_t>(T) + 1, WeightPoly{});
    cur[0][0] = WeightPoly::one();

    std::vector<int> key(static_cast<std::size_t>(m) + 1);
    for (int t = 0; t < L + m; ++t) {
        const int q0_max = (t < L) ? K : 0;
        for (auto& r : nxt) r.clear();
        for (std::size_t ps = 0; ps < state_count; ++ps) {
            const Rows& rows = cur[ps];
            if (rows.empty()) continue;
            // decode p into key[1..m]
            {
                std::size_t v = ps;
                for (int j = 0; j < m; ++j) {
                    key[static_cast<std::size_t>(j) + 1] = static_cast<int>(v % static_cast<std::size_t>(K + 1));
                    v /= static_cast<std::size_t>(K + 1);
                }
            }
            for (int q0 = 0; q0 <= q0_max; ++q0) {
                if (q0 + state_sum[ps] > T) break;
                key[0] = q0;
                const WeightPoly& kern = kernel_for(key);
                const double binc = choose(K, q0);
                const std::size_t qs = m > 0 ? static_cast<std::size_t>(q0) + (ps % shift) * static_cast<std::size_t>(K + 1)
                                             : 0;
                Rows& tgt = nxt[qs];
                if (tgt.empty()) tgt.assign(static_cast<std::size_t>(T) + 1, WeightPoly{});
                for (int i = 0; i + q0 <= T && i <= T; ++i) {
                    const WeightPoly& row = rows[static_cast<std::size_t>(i)];
                    if (row.empty()) continue;
                    tgt[static_cast<std::size_t>(i + q0)].add_scaled_product(row, kern, binc, opts.y_cap);
                }
            }
        }
        cur.swap(nxt);
    }

    IRWEFTable table;
    table.T = T;
    table.k = static_cast<long long>(K) * L;
    table.y_cap = opts.y_cap;
    table.rows = cur[0].empty() ? Rows(static_cast<std::size_t>(T) + 1) : std::move(cur[0]);
    return table;
}

// Closed-form CRWEFs for input weights 1 and 2, with puncturing handled by
// the weight-1/weight-2 puncturing enumerators B1, B2. The three A2 cases:
// both bits in one layer; layers with gap 1..m (overlapping replica windows);
// gap above m (disjoint windows).
struct Crwefs {
    WeightPoly a1;
    WeightPoly a2;
};

inline Crwefs crwef_closed_form(const CodeSpec& spec) {
    validate(spec);
    const int K = spec.info_block_len;
    const int N = spec.repetition_degree;
    const int Kp = spec.puncture_len;
    const int m = spec.memory;
    const int L = spec.data_blocks;
    const double Kd = static_cast<double>(K);

    const WeightPoly B1 = puncture_point_mass(K, Kp, 1);
    const WeightPoly B2 = puncture_point_mass(K, Kp, 2);

    Crwefs out;
    // A1 = L K Y^{(m+1)(N-2)} B1^{m+1}
    out.a1 = WeightPoly::monomial((m + 1) * (N - 2), static_cast<double>(L) * Kd) * B1.pow(m + 1);

    // A2, same layer: (K(K-1)L/2) Y^{2(m+1)(N-2)} B2^{m+1}
    out.a2 = WeightPoly::monomial(2 * (m + 1) * (N - 2), Kd * (Kd - 1.0) * L / 2.0) * B2.pow(m + 1);

    // 1/K + (K-1)/K Y^2 : one unpunctured branch-layer seen by both bits.
    WeightPoly collide(std::vector<double>{1.0 / Kd, 0.0, (Kd - 1.0) / Kd});
    // 1/K + (K-1)/K B2(Y) : same, on the punctured branch.
    WeightPoly collide_p = B2;
    collide_p.scale((Kd - 1.0) / Kd);
    collide_p += WeightPoly::monomial(0, 1.0 / Kd);

    for (int l = 1; l <= std::min(m, L - 1); ++l) {
        WeightPoly term = WeightPoly::monomial(2 * l * (N - 2), static_cast<double>(L - l) * Kd * Kd);
        term = term * B1.pow(2 * l);
        term = term * collide.pow((m + 1 - l) * (N - 2));
        term = term * collide_p.pow(m + 1 - l);
        out.a2 += term;
    }
    for (int l = m + 1; l <= L - 1; ++l) {
        WeightPoly term = WeightPoly::monomial(2 * (m + 1) * (N - 2), static_cast<double>(L - l) * Kd * Kd);
        term = term * B1.pow(2 * (m + 1));
        out.a2 += term;
    }
    return out;
}

// BER-weighted spectrum D_s = sum_i (i/k) A_{i, s-i} for 0 < s <= T.
inline std::vector<double> spectrum(const IRWEFTable& table, long long k) {
    std::vector<double> d(static_cast<std::size_t>(table.T) + 1, 0.0);
    for (int i = 1; i <= table.T; ++i) {
        const WeightPoly& row = table.rows[static_cast<std::size_t>(i)];
        for (int j = 0; j <= row.degree(); ++j) {
            const long long s = static_cast<long long>(i) + j;
            if (s > table.T) break;
            d[static_cast<std::size_t>(s)] += static_cast<double>(i) / static_cast<double>(k) * row.at(j);
        }
    }
    return d;
}

inline std::vector<double> spectrum(const IRWEFTable& table) { return spectrum(table, table.k); }

}  // namespace bmstr
