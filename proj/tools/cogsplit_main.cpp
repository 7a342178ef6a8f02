#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cogsplit/audit.hpp"
#include "cogsplit/error.hpp"
#include "cogsplit/graph.hpp"
#include "cogsplit/manifest.hpp"
#include "cogsplit/serialize.hpp"
#include "cogsplit/split.hpp"
#include "cogsplit/synthetic.hpp"
#include "cogsplit/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace cogsplit;

constexpr int kExitClean = 0;
constexpr int kExitUsage = 2;
constexpr int kExitLeakage = 3;

std::string out_dir() {
    const char* env = std::getenv("COGSPLIT_OUT_DIR");
    return env && *env ? env : ".";
}

uint32_t parse_count(const std::string& text, const char* what) {
    uint32_t value = 0;
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::BadArgument,
                    std::string("invalid ") + what + " '" + text + "'");
    }
    return value;
}

uint64_t parse_seed_value(const std::string& text) {
    uint64_t value = 0;
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::BadArgument, "invalid seed '" + text + "'");
    }
    return value;
}

std::string default_path(const std::string& name) { return out_dir() + "/" + name; }

std::string join_args(int argc, char** argv) {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
        if (i) joined += ' ';
        joined += argv[i];
    }
    return joined;
}

void emit_run_record(const std::string& command_line, const std::string& config_digest,
                     const std::map<std::string, std::string>& inputs,
                     const std::map<std::string, std::string>& outputs,
                     const std::string& path) {
    RunRecord record = make_run_record(command_line);
    record.config_digest = config_digest;
    record.input_digests = inputs;
    record.output_digests = outputs;
    write_text_file(path, write_run_record(record));
}

struct GenOptions {
    SynthSpec spec;
    std::string segments = "1";
    std::string exposure = "complete";
    std::string out;
};

void run_gen(const GenOptions& opt, const std::string& command_line) {
    SynthSpec spec = opt.spec;
    const auto dash = opt.segments.find('-');
    spec.segments_min = parse_count(opt.segments.substr(0, dash), "segment count");
    spec.segments_max = dash == std::string::npos
                            ? spec.segments_min
                            : parse_count(opt.segments.substr(dash + 1), "segment count");
    spec.exposure = parse_exposure(opt.exposure);
    if (const auto colon = opt.exposure.find(':'); colon != std::string::npos) {
        try {
            spec.bernoulli_p = std::stod(opt.exposure.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadArgument, "invalid exposure '" + opt.exposure + "'");
        }
    }

    const DatasetManifest manifest = generate(spec);
    const std::string out = opt.out.empty() ? default_path("dataset.manifest") : opt.out;
    const std::string text = write_manifest(manifest);
    write_text_file(out, text);
    std::cout << "wrote " << out << " (" << manifest.recordings.size() << " recordings, "
              << manifest.stories.size() << " stories)\n";

    std::string config = std::string("gen subjects=") + std::to_string(spec.subjects) +
                         " stories=" + std::to_string(spec.stories) + " segments=" +
                         opt.segments + " exposure=" + opt.exposure +
                         " seed=" + std::to_string(spec.seed);
    emit_run_record(command_line, digest_string(config), {},
                    {{out, digest_string(text)}}, out + ".run.json");
}

struct SplitOptions {
    std::string manifest_path;
    std::string method;
    std::string modality = "eeg";
    std::string ratio = "8:1:1";
    uint32_t window = 10;
    uint64_t seed = 0;
    std::string out;
};

void run_cmd_split(const SplitOptions& opt, const std::string& command_line) {
    SplitConfig config;
    config.method = parse_method(opt.method);
    config.modality = parse_modality(opt.modality);
    config.ratio = Ratio::parse(opt.ratio);
    config.window_length = opt.window;
    config.seed = opt.seed;

    const std::string manifest_text = read_text_file(opt.manifest_path);
    const DatasetGraph graph = build_graph(parse_manifest_text(manifest_text));
    const SplitAssignment split = run_split(graph, config);

    const std::string out =
        opt.out.empty() ? default_path(std::string("split_") + method_name(config.method) + "_" +
                                       modality_name(config.modality) + "_s" +
                                       std::to_string(config.seed) + ".json")
                        : opt.out;
    const std::string manifest_digest = digest_string(manifest_text);
    const std::string text = write_split_file(split, graph, manifest_digest);
    write_text_file(out, text);
    std::cout << render_split_summary(split);
    std::cout << "wrote " << out << "\n";

    const std::string config_echo = std::string("split method=") + method_name(config.method) +
                                    " modality=" + modality_name(config.modality) +
                                    " ratio=" + config.ratio.to_string() +
                                    " window=" + std::to_string(config.window_length) +
                                    " seed=" + std::to_string(config.seed);
    emit_run_record(command_line, digest_string(config_echo),
                    {{opt.manifest_path, manifest_digest}}, {{out, digest_string(text)}},
                    out + ".run.json");
}

struct AuditOptions {
    std::string manifest_path;
    std::string split_path;
    std::string out;
};

int run_cmd_audit(const AuditOptions& opt, const std::string& command_line) {
    const std::string manifest_text = read_text_file(opt.manifest_path);
    const DatasetGraph graph = build_graph(parse_manifest_text(manifest_text));
    const std::string manifest_digest = digest_string(manifest_text);
    const std::string split_text = read_text_file(opt.split_path);
    const SplitAssignment split = read_split_file(split_text, graph, manifest_digest);

    const LeakageReport report = audit(split, graph);
    const std::string out = opt.out.empty() ? opt.split_path + ".report.json" : opt.out;
    const std::string text = write_report_file(report, graph);
    write_text_file(out, text);
    std::cout << render_audit_row(report) << "\n";

    emit_run_record(command_line, digest_string(split_text),
                    {{opt.manifest_path, manifest_digest},
                     {opt.split_path, digest_string(split_text)}},
                    {{out, digest_string(text)}}, out + ".run.json");
    return report.any_leak() ? kExitLeakage : kExitClean;
}

struct BenchOptions {
    std::string manifest_path;
    std::string methods = "a,b,c,d,e,f";
    std::string seeds = "1,2,3,4";
    std::string modality = "eeg";
    std::string ratio = "8:1:1";
    uint32_t window = 10;
    std::string out;
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void run_cmd_bench(const BenchOptions& opt, const std::string& command_line) {
    const std::string manifest_text = read_text_file(opt.manifest_path);
    const DatasetGraph graph = build_graph(parse_manifest_text(manifest_text));
    const Modality modality = parse_modality(opt.modality);
    const Ratio ratio = Ratio::parse(opt.ratio);

    std::vector<Method> methods;
    for (const auto& name : split_csv(opt.methods)) methods.push_back(parse_method(name));
    std::vector<uint64_t> seeds;
    for (const auto& text : split_csv(opt.seeds)) seeds.push_back(parse_seed_value(text));
    if (seeds.empty()) throw Error(ErrorCode::BadArgument, "no seeds given");

    struct Cell {
        double bslr = 0.0, tslr = 0.0;
        bool ok = false;
    };
    std::vector<Cell> cells(methods.size() * seeds.size());

    // (method, seed) cells are independent; results land in indexed slots so
    // assembly order is fixed.
    const int64_t total = static_cast<int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (int64_t flat = 0; flat < total; ++flat) {
        const size_t m = static_cast<size_t>(flat) / seeds.size();
        const size_t s = static_cast<size_t>(flat) % seeds.size();
        SplitConfig config{methods[m], modality, ratio, opt.window, seeds[s]};
        try {
            const SplitAssignment split = run_split(graph, config);
            const LeakageReport report = audit(split, graph, Exec::Serial);
            cells[static_cast<size_t>(flat)] = {report.worst.bslr, report.worst.tslr, true};
        } catch (const Error&) {
            // Method not applicable to this dataset/modality; rendered "/".
        }
    }

    std::vector<BenchCell> rows;
    for (size_t m = 0; m < methods.size(); ++m) {
        BenchCell row;
        row.method = methods[m];
        double bslr_sum = 0, tslr_sum = 0;
        uint32_t runs = 0;
        for (size_t s = 0; s < seeds.size(); ++s) {
            const auto& cell = cells[m * seeds.size() + s];
            if (!cell.ok) continue;
            bslr_sum += cell.bslr;
            tslr_sum += cell.tslr;
            ++runs;
        }
        row.applicable = runs == seeds.size();
        if (row.applicable) {
            row.runs = runs;
            row.bslr_mean = bslr_sum / runs;
            row.tslr_mean = tslr_sum / runs;
            double bslr_var = 0, tslr_var = 0;
            for (size_t s = 0; s < seeds.size(); ++s) {
                const auto& cell = cells[m * seeds.size() + s];
                bslr_var += (cell.bslr - row.bslr_mean) * (cell.bslr - row.bslr_mean);
                tslr_var += (cell.tslr - row.tslr_mean) * (cell.tslr - row.tslr_mean);
            }
            row.bslr_sd = std::sqrt(bslr_var / runs);
            row.tslr_sd = std::sqrt(tslr_var / runs);
        }
        rows.push_back(row);
    }

    const std::string out = opt.out.empty() ? default_path("bench.json") : opt.out;
    const std::string text = write_bench_file(rows, seeds, modality);
    write_text_file(out, text);
    std::cout << render_bench_table(rows);
    std::cout << "wrote " << out << "\n";

    emit_run_record(command_line, digest_string(opt.methods + "|" + opt.seeds),
                    {{opt.manifest_path, digest_string(manifest_text)}},
                    {{out, digest_string(text)}}, out + ".run.json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cogsplit: leakage-aware dataset splitting and auditing for "
                 "stimulus-response cognitive datasets"};
    app.set_version_flag("--version", cogsplit::kToolVersion);
    app.require_subcommand(1);
    const std::string command_line = join_args(argc, argv);

    GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset manifest");
    gen->add_option("--subjects", gen_opt.spec.subjects, "number of subjects")->required();
    gen->add_option("--stories", gen_opt.spec.stories, "number of stories")->required();
    gen->add_option("--segments", gen_opt.segments, "segments per story: N or MIN-MAX")
        ->required();
    gen->add_option("--exposure", gen_opt.exposure, "complete | bernoulli:P | disjoint");
    gen->add_option("--seed", gen_opt.spec.seed, "generator seed (mandatory)")->required();
    gen->add_option("--out", gen_opt.out, "output manifest path");

    SplitOptions split_opt;
    auto* split = app.add_subcommand("split", "split a manifest into train/val/test");
    split->add_option("manifest", split_opt.manifest_path, "input manifest")->required();
    split->add_option("--method", split_opt.method, "splitting method a..f")->required();
    split->add_option("--modality", split_opt.modality, "eeg | fmri");
    split->add_option("--ratio", split_opt.ratio, "train:val:test, e.g. 8:1:1");
    split->add_option("--window", split_opt.window, "fMRI window length");
    split->add_option("--seed", split_opt.seed, "split seed (mandatory)")->required();
    split->add_option("--out", split_opt.out, "output split path");

    AuditOptions audit_opt;
    auto* audit_cmd = app.add_subcommand("audit", "audit a split file for data leakage");
    audit_cmd->add_option("manifest", audit_opt.manifest_path, "input manifest")->required();
    audit_cmd->add_option("split", audit_opt.split_path, "split file to audit")->required();
    audit_cmd->add_option("--out", audit_opt.out, "report path");

    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "leakage metrics across methods and seeds");
    bench->add_option("manifest", bench_opt.manifest_path, "input manifest")->required();
    bench->add_option("--methods", bench_opt.methods, "comma list of methods (default a..f)");
    bench->add_option("--seeds", bench_opt.seeds, "comma list of seeds (default 1,2,3,4)");
    bench->add_option("--modality", bench_opt.modality, "eeg | fmri");
    bench->add_option("--ratio", bench_opt.ratio, "train:val:test");
    bench->add_option("--window", bench_opt.window, "fMRI window length");
    bench->add_option("--out", bench_opt.out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitClean : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            run_gen(gen_opt, command_line);
            return kExitClean;
        }
        if (split->parsed()) {
            run_cmd_split(split_opt, command_line);
            return kExitClean;
        }
        if (audit_cmd->parsed()) {
            return run_cmd_audit(audit_opt, command_line);
        }
        if (bench->parsed()) {
            run_cmd_bench(bench_opt, command_line);
            return kExitClean;
        }
    } catch (const cogsplit::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitClean;
}
