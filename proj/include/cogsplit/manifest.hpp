#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cogsplit {

// A dataset manifest names recordings; it never touches the signal payloads.
// Two encodings of the same record stream are accepted:
//
//   columnar (canonical for golden tests):
//     # comment
//     @story,<story_label>,<segment_count>
//     <subject_label>,<story_label>,<segment_position>,<payload_locator>
//
//   object form: one JSON object per line,
//     {"story": "...", "segments": N}
//     {"subject": "...", "story": "...", "position": N, "locator": "..."}

struct ManifestStory {
    std::string label;
    uint32_t segment_count = 0;
};

struct ManifestRecording {
    std::string subject;
    std::string story;
    uint32_t position = 0;
    std::string locator;
};

struct DatasetManifest {
    std::vector<ManifestStory> stories;
    std::vector<ManifestRecording> recordings;
};

DatasetManifest parse_manifest(std::istream& in);
DatasetManifest parse_manifest_text(const std::string& text);
DatasetManifest load_manifest(const std::string& path);

// Canonical columnar form: stories in declaration order, recordings in
// original row order. parse(write(m)) reproduces m field for field.
std::string write_manifest(const DatasetManifest& manifest);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

}  // namespace cogsplit
