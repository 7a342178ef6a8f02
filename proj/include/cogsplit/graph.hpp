#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cogsplit/manifest.hpp"

namespace cogsplit {

enum class Modality { EEG, FMRI };

const char* modality_name(Modality m);
Modality parse_modality(const std::string& text);

// One edge of the dataset multigraph: subject `subject` responded to segment
// `position` of story `story`. Indices are dense, assigned by first
// appearance in the manifest (stories by header order), which pins every
// seeded algorithm downstream.
struct RecordingRef {
    uint32_t subject = 0;
    uint32_t story = 0;
    uint32_t position = 0;

    friend bool operator==(const RecordingRef&, const RecordingRef&) = default;
    friend auto operator<=>(const RecordingRef&, const RecordingRef&) = default;
};

// A sample: a start recording plus `length` future segments of the same
// story (0 for EEG). Covered segment positions are [position, position+length].
struct SampleWindow {
    uint32_t subject = 0;
    uint32_t story = 0;
    uint32_t position = 0;
    uint32_t length = 0;

    uint32_t last_position() const { return position + length; }
    friend bool operator==(const SampleWindow&, const SampleWindow&) = default;
    friend auto operator<=>(const SampleWindow&, const SampleWindow&) = default;
};

// Immutable after build_graph returns; safe to share across threads.
class DatasetGraph {
public:
    // Vertex categories. Segments are flattened: global id = segment_base(k) + j.
    size_t subject_count() const { return subject_labels_.size(); }
    size_t story_count() const { return story_labels_.size(); }
    uint64_t segment_count() const { return segment_base_.back(); }
    size_t recording_count() const { return recordings_.size(); }

    const std::string& subject_label(uint32_t i) const { return subject_labels_[i]; }
    const std::string& story_label(uint32_t k) const { return story_labels_[k]; }
    uint32_t story_segments(uint32_t k) const { return segments_per_story_[k]; }
    uint64_t segment_id(uint32_t story, uint32_t position) const {
        return segment_base_[story] + position;
    }
    std::pair<uint32_t, uint32_t> segment_of(uint64_t segment_id) const;

    const std::vector<RecordingRef>& recordings() const { return recordings_; }
    const std::string& locator(size_t recording_index) const {
        return locators_[recording_index];
    }

    // Stories subject i has heard, ascending.
    const std::vector<uint32_t>& exposure(uint32_t subject) const {
        return exposure_[subject];
    }
    // Contiguous recorded interval of (subject, story); {1,0} when unexposed.
    struct PositionSpan {
        uint32_t first = 1;
        uint32_t last = 0;
        bool empty() const { return first > last; }
    };
    PositionSpan recorded_span(uint32_t subject, uint32_t story) const;

    // Subjects with an edge on the unit, ascending. Used by core selection.
    const std::vector<uint32_t>& segment_subjects(uint64_t segment_id) const {
        return segment_subjects_[segment_id];
    }
    const std::vector<uint32_t>& story_subjects(uint32_t story) const {
        return story_subjects_[story];
    }

    int32_t find_subject(const std::string& label) const;
    int32_t find_story(const std::string& label) const;
    // Index into recordings() for (i,k,j), or -1.
    int64_t find_recording(uint32_t subject, uint32_t story, uint32_t position) const;

    DatasetManifest to_manifest() const;

    friend DatasetGraph build_graph(const DatasetManifest& manifest);

private:
    std::vector<std::string> subject_labels_;
    std::vector<std::string> story_labels_;
    std::vector<uint32_t> segments_per_story_;
    std::vector<uint64_t> segment_base_;  // size K+1
    std::vector<RecordingRef> recordings_;  // sorted by (subject, story, position)
    std::vector<std::string> locators_;     // parallel to recordings_
    std::vector<std::vector<uint32_t>> exposure_;
    std::vector<std::vector<PositionSpan>> spans_;  // parallel to exposure_
    std::vector<std::vector<uint32_t>> segment_subjects_;
    std::vector<std::vector<uint32_t>> story_subjects_;
};

// Validates and indexes a manifest. Errors: EmptyDataset, UnknownStory,
// SegmentGap (position >= declared count), DuplicateRecording,
// NonContiguousExposure, BadManifest (empty labels).
DatasetGraph build_graph(const DatasetManifest& manifest);

// EEG: one zero-length window per recording. fMRI: one window per recording,
// covering up to `window_length` future segments of the same story, truncated
// at the story boundary. Output is ordered by (subject, story, position).
// Errors: NonPositiveL; MissingContinuation when a window needs a future
// segment the subject never recorded (a gap, not a story boundary).
std::vector<SampleWindow> enumerate_samples(const DatasetGraph& graph,
                                            Modality modality,
                                            uint32_t window_length);

}  // namespace cogsplit
