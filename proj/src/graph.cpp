#include "cogsplit/graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "cogsplit/error.hpp"

namespace cogsplit {

const char* modality_name(Modality m) {
    return m == Modality::EEG ? "eeg" : "fmri";
}

Modality parse_modality(const std::string& text) {
    if (text == "eeg") return Modality::EEG;
    if (text == "fmri") return Modality::FMRI;
    throw Error(ErrorCode::BadArgument, "unknown modality '" + text + "'");
}

std::pair<uint32_t, uint32_t> DatasetGraph::segment_of(uint64_t segment_id) const {
    const auto it = std::upper_bound(segment_base_.begin(), segment_base_.end(), segment_id);
    const auto story = static_cast<uint32_t>(it - segment_base_.begin() - 1);
    return {story, static_cast<uint32_t>(segment_id - segment_base_[story])};
}

DatasetGraph::PositionSpan DatasetGraph::recorded_span(uint32_t subject, uint32_t story) const {
    const auto& stories = exposure_[subject];
    const auto it = std::lower_bound(stories.begin(), stories.end(), story);
    if (it == stories.end() || *it != story) return {};
    return spans_[subject][static_cast<size_t>(it - stories.begin())];
}

int32_t DatasetGraph::find_subject(const std::string& label) const {
    for (size_t i = 0; i < subject_labels_.size(); ++i) {
        if (subject_labels_[i] == label) return static_cast<int32_t>(i);
    }
    return -1;
}

int32_t DatasetGraph::find_story(const std::string& label) const {
    for (size_t k = 0; k < story_labels_.size(); ++k) {
        if (story_labels_[k] == label) return static_cast<int32_t>(k);
    }
    return -1;
}

int64_t DatasetGraph::find_recording(uint32_t subject, uint32_t story,
                                     uint32_t position) const {
    const RecordingRef key{subject, story, position};
    const auto it = std::lower_bound(recordings_.begin(), recordings_.end(), key);
    if (it == recordings_.end() || *it != key) return -1;
    return it - recordings_.begin();
}

DatasetManifest DatasetGraph::to_manifest() const {
    DatasetManifest manifest;
    manifest.stories.reserve(story_labels_.size());
    for (size_t k = 0; k < story_labels_.size(); ++k) {
        manifest.stories.push_back({story_labels_[k], segments_per_story_[k]});
    }
    manifest.recordings.reserve(recordings_.size());
    for (size_t r = 0; r < recordings_.size(); ++r) {
        manifest.recordings.push_back({subject_labels_[recordings_[r].subject],
                                       story_labels_[recordings_[r].story],
                                       recordings_[r].position, locators_[r]});
    }
    return manifest;
}

DatasetGraph build_graph(const DatasetManifest& manifest) {
    DatasetGraph g;

    std::unordered_map<std::string, uint32_t> story_index;
    for (const auto& story : manifest.stories) {
        if (story.label.empty()) throw Error(ErrorCode::BadManifest, "empty story label");
        if (story.segment_count == 0) {
            throw Error(ErrorCode::BadManifest, "story '" + story.label + "' declares 0 segments");
        }
        if (!story_index.emplace(story.label, static_cast<uint32_t>(g.story_labels_.size()))
                 .second) {
            throw Error(ErrorCode::BadManifest, "story '" + story.label + "' declared twice");
        }
        g.story_labels_.push_back(story.label);
        g.segments_per_story_.push_back(story.segment_count);
    }
    g.segment_base_.resize(g.story_labels_.size() + 1, 0);
    for (size_t k = 0; k < g.segments_per_story_.size(); ++k) {
        g.segment_base_[k + 1] = g.segment_base_[k] + g.segments_per_story_[k];
    }

    if (manifest.recordings.empty()) {
        throw Error(ErrorCode::EmptyDataset, "manifest has no recordings");
    }

    std::unordered_map<std::string, uint32_t> subject_index;
    std::vector<RecordingRef> refs;
    refs.reserve(manifest.recordings.size());
    for (const auto& rec : manifest.recordings) {
        if (rec.subject.empty()) throw Error(ErrorCode::BadManifest, "empty subject label");
        const auto story_it = story_index.find(rec.story);
        if (story_it == story_index.end()) {
            throw Error(ErrorCode::UnknownStory,
                        "recording references undeclared story '" + rec.story + "'");
        }
        const uint32_t story = story_it->second;
        if (rec.position >= g.segments_per_story_[story]) {
            throw Error(ErrorCode::SegmentGap,
                        "recording (" + rec.subject + ", " + rec.story + ", " +
                            std::to_string(rec.position) + ") exceeds declared segment count " +
                            std::to_string(g.segments_per_story_[story]));
        }
        const auto [sub_it, inserted] =
            subject_index.emplace(rec.subject, static_cast<uint32_t>(g.subject_labels_.size()));
        if (inserted) g.subject_labels_.push_back(rec.subject);
        refs.push_back({sub_it->second, story, rec.position});
    }

    // Sort edges by (subject, story, position); locators follow.
    std::vector<uint32_t> order(refs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return refs[a] < refs[b]; });
    g.recordings_.reserve(refs.size());
    g.locators_.reserve(refs.size());
    for (const uint32_t idx : order) {
        if (!g.recordings_.empty() && g.recordings_.back() == refs[idx]) {
            const auto& r = refs[idx];
            throw Error(ErrorCode::DuplicateRecording,
                        "(" + g.subject_labels_[r.subject] + ", " + g.story_labels_[r.story] +
                            ", " + std::to_string(r.position) + ") appears twice");
        }
        g.recordings_.push_back(refs[idx]);
        g.locators_.push_back(manifest.recordings[idx].locator);
    }

    // Exposure sets plus the contiguity check: a subject's recordings within
    // one story must form an unbroken position interval.
    g.exposure_.resize(g.subject_labels_.size());
    g.spans_.resize(g.subject_labels_.size());
    g.segment_subjects_.resize(g.segment_base_.back());
    g.story_subjects_.resize(g.story_labels_.size());
    size_t r = 0;
    while (r < g.recordings_.size()) {
        const uint32_t subject = g.recordings_[r].subject;
        const uint32_t story = g.recordings_[r].story;
        const uint32_t first = g.recordings_[r].position;
        uint32_t last = first;
        size_t run = r + 1;
        while (run < g.recordings_.size() && g.recordings_[run].subject == subject &&
               g.recordings_[run].story == story) {
            if (g.recordings_[run].position != last + 1) {
                throw Error(ErrorCode::NonContiguousExposure,
                            "subject '" + g.subject_labels_[subject] + "' in story '" +
                                g.story_labels_[story] + "' skips position " +
                                std::to_string(last + 1));
            }
            last = g.recordings_[run].position;
            ++run;
        }
        g.exposure_[subject].push_back(story);
        g.spans_[subject].push_back({first, last});
        g.story_subjects_[story].push_back(subject);
        for (uint32_t j = first; j <= last; ++j) {
            g.segment_subjects_[g.segment_id(story, j)].push_back(subject);
        }
        r = run;
    }
    for (auto& subjects : g.story_subjects_) {
        std::sort(subjects.begin(), subjects.end());
    }
    // segment_subjects_ entries are already ascending: edges were visited in
    // subject order.

    return g;
}

std::vector<SampleWindow> enumerate_samples(const DatasetGraph& graph, Modality modality,
                                            uint32_t window_length) {
    std::vector<SampleWindow> samples;
    samples.reserve(graph.recording_count());
    if (modality == Modality::EEG) {
        for (const auto& rec : graph.recordings()) {
            samples.push_back({rec.subject, rec.story, rec.position, 0});
        }
        return samples;
    }
    if (window_length == 0) {
        throw Error(ErrorCode::NonPositiveL, "fMRI windows need a positive length");
    }
    for (const auto& rec : graph.recordings()) {
        const uint32_t story_end = graph.story_segments(rec.story) - 1;
        const uint32_t target_end =
            std::min<uint64_t>(static_cast<uint64_t>(rec.position) + window_length, story_end);
        const auto span = graph.recorded_span(rec.subject, rec.story);
        if (span.last < target_end) {
            throw Error(ErrorCode::MissingContinuation,
                        "subject '" + graph.subject_label(rec.subject) + "' window at (" +
                            graph.story_label(rec.story) + ", " + std::to_string(rec.position) +
                            ") needs segment " + std::to_string(span.last + 1) +
                            " which was never recorded");
        }
        samples.push_back({rec.subject, rec.story, rec.position,
                           static_cast<uint32_t>(target_end - rec.position)});
    }
    return samples;
}

}  // namespace cogsplit
