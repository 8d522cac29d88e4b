// Command-line front end: compile circuits to measurement patterns, schedule
// their rounds, run shots, and verify a circuit end to end against the
// brute-force oracle.
//
// Exit codes: 0 ok, 1 verify failure, 2 parse error, 3 compile error,
// 4 dependency cycle, 5 size limit, 6 oracle limit.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbqc/pattern_io.hpp"
#include "mbqc/runtime.hpp"

namespace {

using namespace mbqc;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Parses JSON and turns nlohmann's byte offset into line/column diagnostics.
nlohmann::json parse_json(const std::string& text, const std::string& path) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw parse_error(path + ": malformed JSON at line " + std::to_string(line) +
                          ", column " + std::to_string(column) + ": " + e.what());
    }
}

void write_output(const nlohmann::json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw error("cannot write file: " + out_path);
    out << text;
}

int cmd_compile(const std::string& in, const std::string& out, bool embed_rect) {
    Circuit c = circuit_from_json(parse_json(read_file(in), in));
    CompileOptions opt;
    opt.embed_rect = embed_rect;
    CompiledPattern p = compile(c, opt);
    ConeSets cones = compute_cones(p);
    Schedule sched = build_schedule(p, cones);
    write_output(pattern_to_json(p), out);
    std::cerr << "compiled " << c.gates.size() << " gates onto " << p.sites.size()
              << " sites, " << p.graph.edges.size() << " edges; |Q_0| = "
              << sched.rounds[0].size() << ", t_max = " << sched.t_max() << "\n";
    return 0;
}

int cmd_schedule(const std::string& in, const std::string& out) {
    CompiledPattern p = pattern_from_json(parse_json(read_file(in), in));
    ConeSets cones = compute_cones(p);
    Schedule sched = build_schedule(p, cones);
    std::cerr << "t_max = " << sched.t_max() << "\n";
    for (int t = 0; t <= sched.t_max(); ++t) {
        std::cerr << "  Q_" << t << " (" << sched.rounds[t].size() << "):";
        for (int site : sched.rounds[t]) std::cerr << " " << site;
        std::cerr << "\n";
    }
    write_output(schedule_to_json(sched), out);
    return 0;
}

int cmd_run(const std::string& in, long shots, std::uint64_t seed, const std::string& mode,
            int threads, int max_qubits, const std::string& trace_path,
            const std::string& out) {
    CompiledPattern p = pattern_from_json(parse_json(read_file(in), in));
    ConeSets cones = compute_cones(p);
    Schedule sched = build_schedule(p, cones);
    RunContext ctx{p, cones, sched};

    ExperimentOptions opts;
    opts.threads = threads;
    opts.run.max_qubits = max_qubits;
    opts.trace = !trace_path.empty();
    const RunMode m = mode == "full" ? RunMode::Full : RunMode::Streamed;
    Summary sum = run_context_experiment(ctx, shots, seed, m, opts);
    if (opts.trace) {
        std::ofstream tr(trace_path, std::ios::binary);
        if (!tr) throw error("cannot write trace file: " + trace_path);
        for (const auto& line : sum.trace) tr << line.dump() << "\n";
    }
    write_output(sum.to_json(), out);
    return 0;
}

struct CheckRow {
    std::string name;
    int status; // 0 pass, 1 fail, 2 skip
    std::string detail;
};

int cmd_verify(const std::string& in, long shots, std::uint64_t seed,
               const std::string& pattern_path, int threads, int max_qubits) {
    Circuit c = circuit_from_json(parse_json(read_file(in), in));
    if (c.n > kOracleMaxQubits)
        throw oracle_limit_error("verify: " + std::to_string(c.n) +
                                 " wires exceed the oracle limit of " +
                                 std::to_string(kOracleMaxQubits));
    CompiledPattern p = pattern_path.empty()
                            ? compile(c)
                            : pattern_from_json(parse_json(read_file(pattern_path), pattern_path));
    ConeSets cones = compute_cones(p);
    Schedule sched = build_schedule(p, cones);
    RunContext ctx{p, cones, sched};

    std::vector<CheckRow> rows;
    auto add = [&](const std::string& name, int status, const std::string& detail) {
        rows.push_back({name, status, detail});
    };

    const bool full_possible = static_cast<int>(p.graph.size()) <= max_qubits;
    const long full_shots = std::min<long>(shots, 100);
    std::map<std::uint64_t, long> full_counts;
    if (full_possible) {
        auto oracle = oracle_state(p.circuit);
        double min_fid = 1.0;
        bool readout_ok = true;
        for (long i = 0; i < full_shots; ++i) {
            auto rec = run_shot_full(ctx, seed, std::uint64_t(i), oracle);
            min_fid = std::min(min_fid, rec.final_fidelity);
            if (rec.result != corrected_readout(p, rec)) readout_ok = false;
            ++full_counts[pack_bits(rec.result)];
        }
        std::ostringstream d;
        d << "min over " << full_shots << " shots = " << min_fid;
        add("full_state_fidelity", min_fid >= 1.0 - 1e-9 ? 0 : 1, d.str());
        add("result_equals_corrected_readout", readout_ok ? 0 : 1,
            std::to_string(full_shots) + " shots, bit-for-bit");
    } else {
        add("full_state_fidelity", 2,
            "cluster needs " + std::to_string(p.graph.size()) + " qubits > limit");
        add("result_equals_corrected_readout", 2, "full mode skipped");
    }

    ExperimentOptions sopts;
    sopts.threads = threads;
    Summary streamed = run_context_experiment(ctx, shots, seed + 1, RunMode::Streamed, sopts);
    {
        std::ostringstream d;
        d << "tv = " << streamed.tv_distance_to_oracle << ", bound = " << streamed.tv_bound;
        add("streamed_tv_distance",
            streamed.tv_distance_to_oracle <= streamed.tv_bound ? 0 : 1, d.str());
        std::ostringstream d2;
        d2 << "p = " << streamed.chi2_pvalue;
        add("streamed_chi2", streamed.chi2_pvalue > 0.001 ? 0 : 1, d2.str());
    }
    if (full_possible) {
        std::map<std::uint64_t, long> scounts;
        for (const auto& [k, cnt] : streamed.counts) {
            std::uint64_t packed = 0;
            for (std::size_t w = 0; w < k.size(); ++w)
                if (k[w] == '1') packed |= std::uint64_t{1} << w;
            scounts[packed] = cnt;
        }
        const double pv = chi2_two_sample_pvalue(full_counts, full_shots, scounts, shots);
        std::ostringstream d;
        d << "p = " << pv;
        add("mode_agreement", pv > 0.001 ? 0 : 1, d.str());
    } else {
        add("mode_agreement", 2, "full mode skipped");
    }

    bool clifford = true;
    for (const auto& g : c.gates)
        if (g.kind == GateKind::Rot) clifford = false;
    if (clifford)
        add("clifford_unit_depth", sched.t_max() == 0 ? 0 : 1,
            "t_max = " + std::to_string(sched.t_max()));
    else
        add("clifford_unit_depth", 2, "circuit has generic rotations");

    {
        const long d_shots = std::min<long>(shots, 300);
        ExperimentOptions one;
        auto a = run_context_experiment(ctx, d_shots, seed, RunMode::Streamed, one);
        auto b = run_context_experiment(ctx, d_shots, seed, RunMode::Streamed, one);
        add("determinism", a.to_json().dump() == b.to_json().dump() ? 0 : 1,
            std::to_string(d_shots) + " shots, byte-identical summaries");
    }

    const char* tag[3] = {"PASS", "FAIL", "SKIP"};
    bool failed = false;
    for (const auto& r : rows) {
        std::cout << tag[r.status] << "  " << r.name << "  (" << r.detail << ")\n";
        if (r.status == 1) failed = true;
    }
    if (failed) {
        for (const auto& r : rows)
            if (r.status == 1) {
                std::cout << "VERIFY FAILED: " << r.name << "\n";
                break;
            }
        return 1;
    }
    std::cout << "VERIFY OK\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-way quantum computer: compile, schedule, run, verify"};
    app.require_subcommand(1);

    std::string in, out, trace_path, mode = "streamed", pattern_path;
    long shots = 1000;
    std::uint64_t seed = 0;
    int threads = 1, max_qubits = mbqc::kDefaultMaxQubits;
    bool embed_rect = false;

    auto* c_compile = app.add_subcommand("compile", "lower a circuit file to a pattern file");
    c_compile->add_option("circuit", in, "circuit JSON file")->required();
    c_compile->add_option("-o,--out", out, "pattern output path (default stdout)");
    c_compile->add_flag("--embed-rect", embed_rect,
                        "fill the bounding box with Z-measured filler sites");

    auto* c_schedule = app.add_subcommand("schedule", "compute the measurement rounds");
    c_schedule->add_option("pattern", in, "pattern JSON file")->required();
    c_schedule->add_option("-o,--out", out, "schedule output path (default stdout)");

    auto* c_run = app.add_subcommand("run", "execute shots of a compiled pattern");
    c_run->add_option("pattern", in, "pattern JSON file")->required();
    c_run->add_option("--shots", shots, "number of shots");
    c_run->add_option("--seed", seed, "base RNG seed");
    c_run->add_option("--mode", mode, "streamed|full")
        ->check(CLI::IsMember({"streamed", "full"}));
    c_run->add_option("--threads", threads, "shot-level parallelism");
    c_run->add_option("--max-qubits", max_qubits, "dense-state qubit limit");
    c_run->add_option("--trace", trace_path, "write per-round JSONL trace here");
    c_run->add_option("-o,--out", out, "summary output path (default stdout)");

    auto* c_verify = app.add_subcommand("verify", "compile, run both modes, compare to oracle");
    c_verify->add_option("circuit", in, "circuit JSON file")->required();
    c_verify->add_option("--shots", shots, "streamed shot count");
    c_verify->add_option("--seed", seed, "base RNG seed");
    c_verify->add_option("--threads", threads, "shot-level parallelism");
    c_verify->add_option("--max-qubits", max_qubits, "dense-state qubit limit");
    c_verify->add_option("--pattern", pattern_path,
                         "run this pattern file instead of compiling the circuit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_compile->parsed()) return cmd_compile(in, out, embed_rect);
        if (c_schedule->parsed()) return cmd_schedule(in, out);
        if (c_run->parsed())
            return cmd_run(in, shots, seed, mode, threads, max_qubits, trace_path, out);
        if (c_verify->parsed())
            return cmd_verify(in, shots, seed, pattern_path, threads, max_qubits);
    } catch (const mbqc::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mbqc::compile_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mbqc::cycle_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const mbqc::size_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const mbqc::oracle_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
