// Command-line front end: code planning, encoding, decoding, Monte Carlo
// sweeps, weight enumerators, spectra and BER bounds.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmstr/bounds.hpp"
#include "bmstr/channel.hpp"
#include "bmstr/code_spec.hpp"
#include "bmstr/decoder.hpp"
#include "bmstr/encoder.hpp"
#include "bmstr/oracle.hpp"
#include "bmstr/simulator.hpp"
#include "bmstr/wef.hpp"

using namespace bmstr;

namespace {

CodeSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--spec", "cannot open " + path);
    nlohmann::json j;
    in >> j;
    CodeSpec s = spec_from_json(j);
    validate(s);
    return s;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw CLI::ValidationError("--out", "cannot open " + path);
    out << text;
}

// "a:b:step" (inclusive of b up to rounding) or a single value
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() == 1) return parts;
    if (parts.size() != 3 || parts[2] <= 0.0)
        throw CLI::ValidationError("grid", "expected a single value or a:b:step with step > 0");
    std::vector<double> grid;
    for (double v = parts[0]; v <= parts[1] + 1e-9; v += parts[2]) grid.push_back(v);
    return grid;
}

std::vector<std::uint8_t> parse_bits(const std::string& text, bool hex, std::size_t expected) {
    std::vector<std::uint8_t> bits;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (hex) {
            const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                          : (std::tolower(c) >= 'a' && std::tolower(c) <= 'f')
                              ? std::tolower(c) - 'a' + 10
                              : -1;
            if (v < 0) throw CLI::ValidationError("--in", std::string("bad hex digit '") + c + "'");
            for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
        } else {
            if (c != '0' && c != '1') throw CLI::ValidationError("--in", std::string("bad bit '") + c + "'");
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }
    if (hex) {
        if (bits.size() < expected || bits.size() - expected >= 4)
            throw CLI::ValidationError("--in", "hex message must cover exactly K*L bits");
        for (std::size_t i = expected; i < bits.size(); ++i)
            if (bits[i]) throw CLI::ValidationError("--in", "hex padding bits must be zero");
        bits.resize(expected);
    } else if (bits.size() != expected) {
        throw CLI::ValidationError("--in", "expected exactly " + std::to_string(expected) + " message bits, got " +
                                              std::to_string(bits.size()));
    }
    return bits;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--in", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string bits_to_text(const std::vector<std::uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size() + 1);
    for (auto b : bits) s.push_back(b ? '1' : '0');
    s.push_back('\n');
    return s;
}

std::vector<BitBlock> bits_to_blocks(const std::vector<std::uint8_t>& bits, int K, int L) {
    std::vector<BitBlock> blocks(static_cast<std::size_t>(L), BitBlock(static_cast<std::size_t>(K)));
    for (std::size_t i = 0; i < bits.size(); ++i)
        blocks[i / static_cast<std::size_t>(K)][i % static_cast<std::size_t>(K)] = bits[i];
    return blocks;
}

std::string irwef_csv(const IRWEFTable& table) {
    std::ostringstream out;
    out << "i,j,A_ij\n";
    for (int i = 0; i <= table.T; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        for (int j = 0; j <= row.degree(); ++j)
            if (row.at(j) != 0.0) out << i << ',' << j << ',' << format_sig6(row.at(j)) << '\n';
    }
    return out.str();
}

std::string spectrum_csv(const IRWEFTable& table) {
    std::ostringstream out;
    out << "s,D_s\n";
    const auto d = spectrum(table);
    for (int s = 1; s <= table.T; ++s) out << s << ',' << format_sig6(d[static_cast<std::size_t>(s)]) << '\n';
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"systematic BMST-R coding toolkit"};
    app.require_subcommand(1);

    std::string spec_path, in_path, out_path;
    std::uint64_t seed = 1;

    // --- plan ---
    auto* plan = app.add_subcommand("plan", "construct code parameters for a target rate and BER");
    double plan_rate = 0.5, plan_ber = 1e-5;
    int plan_K = 2500, plan_L = 1000;
    plan->add_option("--rate", plan_rate, "target code rate in (0,1)")->required();
    plan->add_option("--target-ber", plan_ber, "target bit error rate")->required();
    plan->add_option("--block-len", plan_K, "information block length K");
    plan->add_option("--data-blocks", plan_L, "data blocks per frame L");
    plan->add_option("--seed", seed, "seed for interleaver/puncture generation");
    plan->add_option("--out", out_path, "output JSON path (default stdout)");

    // --- encode ---
    auto* encode = app.add_subcommand("encode", "encode message bits into one terminated frame");
    bool hex = false;
    encode->add_option("--spec", spec_path, "code spec JSON")->required();
    encode->add_option("--in", in_path, "message bits file (binary text; --hex for hex)")->required();
    encode->add_flag("--hex", hex, "message file holds hex digits");
    encode->add_option("--out", out_path, "frame bits output (JSON sidecar alongside)");

    // --- decode ---
    auto* decode = app.add_subcommand("decode", "sliding-window decode an LLR file");
    int delay = 0, max_iter = 18;
    double threshold = 1e-6;
    decode->add_option("--spec", spec_path, "code spec JSON")->required();
    decode->add_option("--in", in_path, "LLR file, one float per line in frame order")->required();
    decode->add_option("--delay", delay, "decoding delay d (window spans d+1 layers)")->required();
    decode->add_option("--max-iter", max_iter, "iteration cap per window position");
    decode->add_option("--threshold", threshold, "entropy stopping threshold");
    decode->add_option("--out", out_path, "decided bits output (default stdout)");

    // --- simulate ---
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo BER/FER/WER sweep");
    std::string snr_grid, ebn0_grid;
    bool fading = false, hard = false;
    long long coherence = 1, min_errors = 100, max_frames = 10000;
    simulate->add_option("--spec", spec_path, "code spec JSON")->required();
    auto* snr_opt = simulate->add_option("--snr-db", snr_grid, "SNR grid a:b:step or single value");
    auto* ebn0_opt = simulate->add_option("--ebn0-db", ebn0_grid, "Eb/N0 grid a:b:step or single value");
    snr_opt->excludes(ebn0_opt);
    ebn0_opt->excludes(snr_opt);
    simulate->add_option("--delay", delay, "decoding delay d")->required();
    simulate->add_option("--max-iter", max_iter, "iteration cap per window position");
    simulate->add_flag("--fading", fading, "block Rayleigh fading instead of AWGN");
    simulate->add_option("--coherence", coherence, "fading coherence length B_f in symbols");
    simulate->add_option("--min-errors", min_errors, "stop a point after this many bit errors");
    simulate->add_option("--max-frames", max_frames, "frame cap per point");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_flag("--hard", hard, "hard-decision decoder (systematic bits only)");
    simulate->add_option("--out", out_path, "CSV output (default stdout)");

    // --- wef ---
    auto* wef = app.add_subcommand("wef", "ensemble IRWEF table (and optional spectrum)");
    int trunc = 20, y_cap = -1;
    std::string spectrum_out;
    wef->add_option("--spec", spec_path, "code spec JSON")->required();
    wef->add_option("--trunc", trunc, "input-weight truncation T");
    wef->add_option("--y-cap", y_cap, "drop redundancy weights above this (-1: exact)");
    wef->add_option("--out", out_path, "IRWEF CSV output (default stdout)");
    wef->add_option("--spectrum-out", spectrum_out, "also write the spectrum CSV here");

    // --- spectrum ---
    auto* spectrum_cmd = app.add_subcommand("spectrum", "BER-weighted distance spectrum D_s");
    spectrum_cmd->add_option("--spec", spec_path, "code spec JSON")->required();
    spectrum_cmd->add_option("--trunc", trunc, "truncation T (spectrum covers s <= T)");
    spectrum_cmd->add_option("--out", out_path, "CSV output (default stdout)");

    // --- bounds ---
    auto* bounds_cmd = app.add_subcommand("bounds", "MAP BER bound curves over an SNR grid");
    bounds_cmd->add_option("--spec", spec_path, "code spec JSON")->required();
    bounds_cmd->add_option("--trunc", trunc, "IRWEF truncation T for the upper bound");
    auto* bsnr = bounds_cmd->add_option("--snr-db", snr_grid, "SNR grid a:b:step or single value");
    auto* bebn0 = bounds_cmd->add_option("--ebn0-db", ebn0_grid, "Eb/N0 grid a:b:step or single value");
    bsnr->excludes(bebn0);
    bebn0->excludes(bsnr);
    bounds_cmd->add_option("--out", out_path, "CSV output (default stdout)");

    // --- oracle (debugging; hidden from help) ---
    auto* oracle = app.add_subcommand("oracle", "brute-force oracles at tiny scale");
    std::string mode = "codebook";
    oracle->add_option("--spec", spec_path, "code spec JSON")->required();
    oracle->add_option("--mode", mode, "codebook | dmin | irwef | ensemble");
    oracle->add_option("--out", out_path, "output (default stdout)");
    oracle->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*plan) {
            const PlanResult r = plan_code(plan_rate, plan_ber, plan_K, plan_L, seed);
            nlohmann::json j{
                {"repetition_degree", r.spec.repetition_degree},
                {"memory", r.spec.memory},
                {"theta", r.theta},
                {"puncture_len", r.spec.puncture_len},
                {"achieved_rate", r.achieved_rate},
                {"rate_loss", r.rate_loss},
                {"shannon_limit_snr_db", r.shannon_limit_db},
                {"predicted_floor", r.predicted_floor},
                {"spec", spec_to_json(r.spec)},
            };
            write_text(out_path, j.dump(2) + "\n");
        } else if (*encode) {
            const CodeSpec spec = load_spec(spec_path);
            const FrameLayout lay = frame_layout(spec);
            const auto bits = parse_bits(read_file(in_path), hex, static_cast<std::size_t>(lay.info_bits));
            const Frame frame = encode_frame(spec, bits_to_blocks(bits, lay.K, lay.L));
            write_text(out_path, bits_to_text(frame.bits));
            nlohmann::json sidecar{
                {"spec", spec_to_json(spec)},
                {"total_bits", lay.total_bits},
                {"info_bits", lay.info_bits},
                {"data_layer_bits", lay.data_layer_bits},
                {"tail_layer_bits", lay.tail_layer_bits},
                {"puncture_positions", build_puncture_pattern(spec)},
                {"rate", terminated_rate(spec).value()},
            };
            if (!out_path.empty() && out_path != "-") write_text(out_path + ".json", sidecar.dump(2) + "\n");
        } else if (*decode) {
            const CodeSpec spec = load_spec(spec_path);
            std::vector<double> llrs;
            std::istringstream in(read_file(in_path));
            double v;
            while (in >> v) llrs.push_back(v);
            const auto frame = LlrFrame::from_flat(spec, llrs, build_puncture_pattern(spec));
            SlidingWindowDecoder dec(spec, {.delay = delay, .max_iterations = max_iter,
                                            .entropy_threshold = threshold});
            write_text(out_path, bits_to_text(dec.decode(frame)));
        } else if (*simulate) {
            const CodeSpec spec = load_spec(spec_path);
            SweepConfig cfg;
            cfg.spec = spec;
            cfg.decoder = {.delay = delay, .max_iterations = max_iter};
            if (!snr_grid.empty()) {
                cfg.snr_db = parse_grid(snr_grid);
            } else if (!ebn0_grid.empty()) {
                const double rate = terminated_rate(spec).value();
                for (double e : parse_grid(ebn0_grid)) cfg.snr_db.push_back(snr_db_from_ebn0_db(e, rate));
            } else {
                throw CLI::ValidationError("simulate", "one of --snr-db or --ebn0-db is required");
            }
            cfg.min_bit_errors = min_errors;
            cfg.max_frames = max_frames;
            cfg.master_seed = seed;
            cfg.channel = fading ? ChannelKind::block_fading : ChannelKind::awgn;
            cfg.coherence_len = coherence;
            cfg.decoder_kind = hard ? DecoderKind::hard_decision : DecoderKind::window;
            write_text(out_path, emit_csv(run_sweep(cfg)));
        } else if (*wef) {
            const CodeSpec spec = load_spec(spec_path);
            const auto table = compute_irwef(spec, trunc, {.y_cap = y_cap});
            write_text(out_path, irwef_csv(table));
            if (!spectrum_out.empty()) write_text(spectrum_out, spectrum_csv(table));
        } else if (*spectrum_cmd) {
            const CodeSpec spec = load_spec(spec_path);
            const auto table = compute_irwef(spec, trunc, {.y_cap = trunc});
            write_text(out_path, spectrum_csv(table));
        } else if (*bounds_cmd) {
            const CodeSpec spec = load_spec(spec_path);
            std::vector<double> grid;
            if (!snr_grid.empty()) {
                grid = parse_grid(snr_grid);
            } else if (!ebn0_grid.empty()) {
                const double rate = terminated_rate(spec).value();
                for (double e : parse_grid(ebn0_grid)) grid.push_back(snr_db_from_ebn0_db(e, rate));
            } else {
                throw CLI::ValidationError("bounds", "one of --snr-db or --ebn0-db is required");
            }
            const auto table = compute_irwef(spec, trunc);
            const FrameLayout lay = frame_layout(spec);
            const double theta = puncture_fraction(spec);
            std::ostringstream out;
            out << "snr_db,lower,upper,r_star\n";
            for (double snr : grid) {
                const double sigma = sigma_from_snr_db(snr);
                const double lo = lower_bound_ensemble(spec.repetition_degree, spec.memory, theta, sigma);
                const auto ub = upper_bound_truncated(table, lay.info_bits, sigma);
                out << format_sig6(snr) << ',' << format_sig6(std::min(lo, 1.0)) << ','
                    << format_sig6(std::min(ub.ber, 1.0)) << ',' << ub.r_star << '\n';
            }
            write_text(out_path, out.str());
        } else if (*oracle) {
            const CodeSpec spec = load_spec(spec_path);
            std::ostringstream out;
            if (mode == "codebook") {
                const auto book = enumerate_codebook(make_explicit(spec));
                out << "message,codeword\n";
                for (std::uint32_t msg = 0; msg < book.codewords.size(); ++msg) {
                    out << msg << ',';
                    for (auto b : book.codewords[msg]) out << (b ? '1' : '0');
                    out << '\n';
                }
            } else if (mode == "dmin") {
                const auto book = enumerate_codebook(make_explicit(spec));
                const auto d = dmin_per_bit(book);
                out << "bit,dmin\n";
                for (std::size_t i = 0; i < d.size(); ++i) out << i << ',' << d[i] << '\n';
            } else if (mode == "irwef") {
                out << irwef_csv(irwef_from_codebook(enumerate_codebook(make_explicit(spec))));
            } else if (mode == "ensemble") {
                out << irwef_csv(ensemble_irwef_exhaustive(spec));
            } else {
                throw CLI::ValidationError("--mode", "unknown oracle mode " + mode);
            }
            write_text(out_path, out.str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
