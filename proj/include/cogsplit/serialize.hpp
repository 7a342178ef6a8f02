#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cogsplit/audit.hpp"
#include "cogsplit/split.hpp"

namespace cogsplit {

// Content digests are 64-bit FNV-1a, rendered "fnv1a64:<16 hex>". Not
// cryptographic; they pin golden files and catch manifest/split mismatches.
uint64_t fnv1a64(std::string_view bytes);
std::string digest_string(std::string_view bytes);
std::string digest_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Split files: structured-object form with per-partition rows of
// (subject_label, story_label, segment_position, window_length), a config
// echo, the manifest digest, a realized-ratio summary, and a content digest.
// Byte-identical for identical (manifest, config, seed).
std::string write_split_file(const SplitAssignment& split, const DatasetGraph& graph,
                             const std::string& manifest_digest);

// Rebuilds the assignment against `graph`, verifying the recorded manifest
// digest, the embedded content digest, and that every row resolves to an
// enumerated sample exactly once. Errors: BadSplitFile, DigestMismatch,
// UnknownRecording, UnknownSubject, UnknownStory.
SplitAssignment read_split_file(const std::string& text, const DatasetGraph& graph,
                                const std::string& manifest_digest);

std::string write_report_file(const LeakageReport& report, const DatasetGraph& graph);

// One-line summary for cmd_audit stdout, e.g. "BSLR 0.00 / TSLR 0.00 ...".
std::string render_audit_row(const LeakageReport& report);

// Realized-ratio summary for cmd_split stdout.
std::string render_split_summary(const SplitAssignment& split);

struct BenchCell {
    Method method;
    bool applicable = true;
    double bslr_mean = 0.0, bslr_sd = 0.0;
    double tslr_mean = 0.0, tslr_sd = 0.0;
    uint32_t runs = 0;
};

// Fixed-width method x metric table (mean +- sd columns).
std::string render_bench_table(const std::vector<BenchCell>& cells);
std::string write_bench_file(const std::vector<BenchCell>& cells,
                             const std::vector<uint64_t>& seeds, Modality modality);

struct RunRecord {
    std::string command_line;
    std::string tool_version;
    std::string config_digest;
    std::map<std::string, std::string> input_digests;
    std::map<std::string, std::string> output_digests;
    std::string timestamp_utc;
};

RunRecord make_run_record(const std::string& command_line);
std::string write_run_record(const RunRecord& record);

}  // namespace cogsplit
