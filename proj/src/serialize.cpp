#include "cogsplit/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "cogsplit/error.hpp"
#include "cogsplit/version.hpp"

namespace cogsplit {

using ordered_json = nlohmann::ordered_json;

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t hash = 14695981039346656037ULL;
    for (const char ch : bytes) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string digest_string(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "short write to '" + path + "'");
}

std::string digest_file(const std::string& path) {
    return digest_string(read_text_file(path));
}

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Metric values as fixed 4-decimal strings inside documents: byte-stable and
// diff-friendly, unlike shortest-round-trip doubles.
std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

ordered_json config_json(const SplitConfig& config) {
    ordered_json j;
    j["method"] = method_name(config.method);
    j["modality"] = modality_name(config.modality);
    j["ratio"] = config.ratio.to_string();
    j["window"] = config.window_length;
    j["seed"] = config.seed;
    return j;
}

SplitConfig config_from_json(const ordered_json& j) {
    SplitConfig config;
    config.method = parse_method(j.at("method").get<std::string>());
    config.modality = parse_modality(j.at("modality").get<std::string>());
    config.ratio = Ratio::parse(j.at("ratio").get<std::string>());
    config.window_length = j.at("window").get<uint32_t>();
    config.seed = j.at("seed").get<uint64_t>();
    return config;
}

std::string segment_name(const DatasetGraph& graph, uint64_t segment_id) {
    const auto [story, pos] = graph.segment_of(segment_id);
    return graph.story_label(story) + ":" + std::to_string(pos);
}

ordered_json pair_report_json(const PairReport& pr, const DatasetGraph& graph) {
    ordered_json j;
    j["pair"] = std::string(part_name(pr.reference)) + "/" + part_name(pr.held_out);
    j["brain_leak"] = pr.brain_leak;
    j["text_leak"] = pr.text_leak;
    j["bslr"] = fixed4(pr.bslr);
    j["tslr"] = fixed4(pr.tslr);
    ordered_json subjects = ordered_json::array();
    for (const uint32_t i : pr.leaking_subjects) subjects.push_back(graph.subject_label(i));
    j["leaking_subjects"] = std::move(subjects);
    ordered_json segments = ordered_json::array();
    for (const uint64_t u : pr.leaking_segments) segments.push_back(segment_name(graph, u));
    j["leaking_segments"] = std::move(segments);
    ordered_json subject_ratios = ordered_json::object();
    for (const auto& [i, r] : pr.subject_ratios) subject_ratios[graph.subject_label(i)] = fixed4(r);
    j["subject_ratios"] = std::move(subject_ratios);
    ordered_json segment_ratios = ordered_json::object();
    for (const auto& [u, r] : pr.segment_ratios) segment_ratios[segment_name(graph, u)] = fixed4(r);
    j["segment_ratios"] = std::move(segment_ratios);
    return j;
}

constexpr const char* kSplitFormat = "cogsplit-split/1";
constexpr const char* kReportFormat = "cogsplit-report/1";
constexpr const char* kBenchFormat = "cogsplit-bench/1";
constexpr const char* kRunFormat = "cogsplit-run/1";

}  // namespace

std::string write_split_file(const SplitAssignment& split, const DatasetGraph& graph,
                             const std::string& manifest_digest) {
    ordered_json doc;
    doc["format"] = kSplitFormat;
    doc["config"] = config_json(split.config());
    doc["manifest_digest"] = manifest_digest;

    ordered_json partitions;
    const Part order[] = {Part::Train, Part::Val, Part::Test, Part::Discarded};
    for (const Part p : order) {
        ordered_json rows = ordered_json::array();
        for (const uint32_t s : split.part_indices(p)) {
            const auto& w = split.samples()[s];
            rows.push_back(ordered_json::array({graph.subject_label(w.subject),
                                                graph.story_label(w.story), w.position,
                                                w.length}));
        }
        partitions[part_name(p)] = std::move(rows);
    }
    doc["partitions"] = std::move(partitions);

    ordered_json summary;
    const auto total = static_cast<double>(split.samples().size());
    summary["samples"] = split.samples().size();
    ordered_json counts, realized;
    for (const Part p : order) {
        counts[part_name(p)] = split.part_size(p);
        realized[part_name(p)] = fixed4(total == 0 ? 0.0 : split.part_size(p) / total);
    }
    summary["counts"] = std::move(counts);
    summary["realized_ratios"] = std::move(realized);
    summary["warnings"] = split.warnings();
    doc["summary"] = std::move(summary);

    doc["digest"] = "";
    doc["digest"] = digest_string(doc.dump(2));
    return doc.dump(2) + "\n";
}

SplitAssignment read_split_file(const std::string& text, const DatasetGraph& graph,
                                const std::string& manifest_digest) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw Error(ErrorCode::BadSplitFile, std::string("invalid split file: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != kSplitFormat) {
        throw Error(ErrorCode::BadSplitFile, "missing or unsupported format marker");
    }
    if (doc.value("manifest_digest", "") != manifest_digest) {
        throw Error(ErrorCode::DigestMismatch,
                    "split was produced from a different manifest (recorded " +
                        doc.value("manifest_digest", std::string("<none>")) + ", actual " +
                        manifest_digest + ")");
    }
    {
        ordered_json copy = doc;
        const std::string recorded = copy.value("digest", "");
        copy["digest"] = "";
        if (digest_string(copy.dump(2)) != recorded) {
            throw Error(ErrorCode::DigestMismatch, "split file content digest mismatch");
        }
    }

    SplitConfig config;
    try {
        config = config_from_json(doc.at("config"));
    } catch (const ordered_json::exception& e) {
        throw Error(ErrorCode::BadSplitFile, std::string("malformed config echo: ") + e.what());
    }
    auto samples = std::make_shared<const std::vector<SampleWindow>>(enumerate_samples(
        graph, config.modality, config.modality == Modality::FMRI ? config.window_length : 0));

    std::unordered_map<std::string, uint32_t> subject_index;
    for (uint32_t i = 0; i < graph.subject_count(); ++i) subject_index[graph.subject_label(i)] = i;
    std::unordered_map<std::string, uint32_t> story_index;
    for (uint32_t k = 0; k < graph.story_count(); ++k) story_index[graph.story_label(k)] = k;

    std::vector<Part> assignment(samples->size(), Part::Discarded);
    std::vector<bool> seen(samples->size(), false);
    size_t assigned = 0;
    if (!doc.contains("partitions") || !doc["partitions"].is_object()) {
        throw Error(ErrorCode::BadSplitFile, "missing partitions section");
    }
    const Part order[] = {Part::Train, Part::Val, Part::Test, Part::Discarded};
    for (const Part p : order) {
        if (!doc["partitions"].contains(part_name(p))) {
            throw Error(ErrorCode::BadSplitFile,
                        std::string("missing partition '") + part_name(p) + "'");
        }
        const auto& rows = doc["partitions"][part_name(p)];
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != 4 || !row[0].is_string() ||
                !row[1].is_string() || !row[2].is_number_unsigned() ||
                !row[3].is_number_unsigned()) {
                throw Error(ErrorCode::BadSplitFile,
                            "partition rows must be [subject, story, position, length]");
            }
            const auto subject_label = row[0].get<std::string>();
            const auto story_label = row[1].get<std::string>();
            const auto position = row[2].get<uint32_t>();
            const auto length = row[3].get<uint32_t>();
            const auto sub = subject_index.find(subject_label);
            if (sub == subject_index.end()) {
                throw Error(ErrorCode::UnknownSubject, "'" + subject_label + "' not in manifest");
            }
            const auto story = story_index.find(story_label);
            if (story == story_index.end()) {
                throw Error(ErrorCode::UnknownStory, "'" + story_label + "' not in manifest");
            }
            const SampleWindow key{sub->second, story->second, position, 0};
            const auto it = std::lower_bound(
                samples->begin(), samples->end(), key, [](const auto& a, const auto& b) {
                    return std::tie(a.subject, a.story, a.position) <
                           std::tie(b.subject, b.story, b.position);
                });
            if (it == samples->end() || it->subject != key.subject || it->story != key.story ||
                it->position != key.position) {
                throw Error(ErrorCode::UnknownRecording,
                            "(" + subject_label + ", " + story_label + ", " +
                                std::to_string(position) + ") is not an enumerated sample");
            }
            if (it->length != length) {
                throw Error(ErrorCode::BadSplitFile,
                            "window length mismatch for (" + subject_label + ", " + story_label +
                                ", " + std::to_string(position) + ")");
            }
            const auto index = static_cast<size_t>(it - samples->begin());
            if (seen[index]) {
                throw Error(ErrorCode::BadSplitFile, "sample assigned to two partitions");
            }
            seen[index] = true;
            ++assigned;
            assignment[index] = p;
        }
    }
    if (assigned != samples->size()) {
        throw Error(ErrorCode::BadSplitFile,
                    "split covers " + std::to_string(assigned) + " of " +
                        std::to_string(samples->size()) + " samples");
    }
    return SplitAssignment(config, std::move(samples), std::move(assignment));
}

std::string write_report_file(const LeakageReport& report, const DatasetGraph& graph) {
    ordered_json doc;
    doc["format"] = kReportFormat;
    doc["modality"] = modality_name(report.modality);
    doc["window"] = report.window_length;
    const auto worst = pair_report_json(report.worst, graph);
    for (const auto& [key, value] : worst.items()) doc[key] = value;
    ordered_json pairs = ordered_json::array();
    for (const auto& pr : report.pairs) pairs.push_back(pair_report_json(pr, graph));
    doc["pairs"] = std::move(pairs);
    doc["skipped"] = report.skipped;
    return doc.dump(2) + "\n";
}

std::string render_audit_row(const LeakageReport& report) {
    std::ostringstream os;
    os << "BSLR " << fixed2(report.worst.bslr) << " / TSLR " << fixed2(report.worst.tslr)
       << "  brain-leak=" << (report.worst.brain_leak ? "yes" : "no")
       << " text-leak=" << (report.worst.text_leak ? "yes" : "no") << " (pair "
       << part_name(report.worst.reference) << "/" << part_name(report.worst.held_out) << ")";
    for (const auto& note : report.skipped) os << "\n# " << note;
    return os.str();
}

std::string render_split_summary(const SplitAssignment& split) {
    std::ostringstream os;
    const auto& c = split.config();
    os << "method=" << method_name(c.method) << " modality=" << modality_name(c.modality)
       << " ratio=" << c.ratio.to_string();
    if (c.modality == Modality::FMRI) os << " window=" << c.window_length;
    os << " seed=" << c.seed << "\n";
    const auto total = static_cast<double>(split.samples().size());
    const Part order[] = {Part::Train, Part::Val, Part::Test, Part::Discarded};
    for (const Part p : order) {
        char line[64];
        std::snprintf(line, sizeof(line), "%-10s %10zu  %6.2f%%", part_name(p),
                      split.part_size(p),
                      total == 0 ? 0.0 : 100.0 * split.part_size(p) / total);
        os << line << "\n";
    }
    for (const auto& warning : split.warnings()) os << "warning: " << warning << "\n";
    return os.str();
}

std::string render_bench_table(const std::vector<BenchCell>& cells) {
    std::ostringstream os;
    os << "Metric    Method        Mean        Std\n";
    os << "-----------------------------------------\n";
    const char* metrics[] = {"BSLR(%)", "TSLR(%)"};
    for (int m = 0; m < 2; ++m) {
        for (const auto& cell : cells) {
            char line[96];
            if (!cell.applicable) {
                std::snprintf(line, sizeof(line), "%-9s (%s)     %10s %10s", metrics[m],
                              method_name(cell.method), "/", "/");
            } else {
                const double mean = m == 0 ? cell.bslr_mean : cell.tslr_mean;
                const double sd = m == 0 ? cell.bslr_sd : cell.tslr_sd;
                std::snprintf(line, sizeof(line), "%-9s (%s)     %10.2f %10.2f", metrics[m],
                              method_name(cell.method), mean, sd);
            }
            os << line << "\n";
        }
        if (m == 0) os << "-----------------------------------------\n";
    }
    return os.str();
}

std::string write_bench_file(const std::vector<BenchCell>& cells,
                             const std::vector<uint64_t>& seeds, Modality modality) {
    ordered_json doc;
    doc["format"] = kBenchFormat;
    doc["modality"] = modality_name(modality);
    doc["seeds"] = seeds;
    ordered_json rows = ordered_json::array();
    for (const auto& cell : cells) {
        ordered_json row;
        row["method"] = method_name(cell.method);
        row["applicable"] = cell.applicable;
        if (cell.applicable) {
            row["runs"] = cell.runs;
            row["bslr_mean"] = fixed4(cell.bslr_mean);
            row["bslr_sd"] = fixed4(cell.bslr_sd);
            row["tslr_mean"] = fixed4(cell.tslr_mean);
            row["tslr_sd"] = fixed4(cell.tslr_sd);
        }
        rows.push_back(std::move(row));
    }
    doc["methods"] = std::move(rows);
    return doc.dump(2) + "\n";
}

RunRecord make_run_record(const std::string& command_line) {
    RunRecord record;
    record.command_line = command_line;
    record.tool_version = kToolVersion;
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    record.timestamp_utc = stamp;
    return record;
}

std::string write_run_record(const RunRecord& record) {
    ordered_json doc;
    doc["format"] = kRunFormat;
    doc["command"] = record.command_line;
    doc["tool_version"] = record.tool_version;
    doc["config_digest"] = record.config_digest;
    doc["input_digests"] = record.input_digests;
    doc["output_digests"] = record.output_digests;
    doc["timestamp_utc"] = record.timestamp_utc;
    return doc.dump(2) + "\n";
}

}  // namespace cogsplit
