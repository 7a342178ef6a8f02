#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogsplit/split.hpp"

namespace cogsplit {

// Execution policy for the counting kernels. Parallel uses OpenMP with
// per-thread tallies merged in fixed order; results are bit-identical to
// Serial, which stays as the reference implementation for tests and the
// kernel benchmark.
enum class Exec { Serial, Parallel, Auto };

// Per-subject and per-segment tallies for one (reference, held-out) pair.
// Segment tallies count coverage: the start segment for EEG, every window
// member for fMRI.
struct PairCounts {
    std::vector<uint64_t> ref_subject_samples;
    std::vector<uint64_t> held_subject_samples;
    std::vector<uint64_t> ref_segment_cover;
    std::vector<uint64_t> held_segment_cover;
    uint64_t ref_samples = 0;
    uint64_t held_samples = 0;
    // fMRI only: sum over held-out windows of how many of their covered
    // segments the reference side also covers.
    uint64_t overlap_volume = 0;

    bool operator==(const PairCounts&) const = default;
};

PairCounts count_pair(const SplitAssignment& split, const DatasetGraph& graph,
                      Part reference, Part held_out, Exec exec = Exec::Auto);

// True iff some subject has samples on both sides; offenders ascending.
std::pair<bool, std::vector<uint32_t>> detect_brain_leakage(
    const SplitAssignment& split, const DatasetGraph& graph,
    Part reference = Part::Train, Part held_out = Part::Test,
    Exec exec = Exec::Auto);

// True iff some segment is covered on both sides; offenders are global
// segment ids, ascending.
std::pair<bool, std::vector<uint64_t>> detect_text_leakage(
    const SplitAssignment& split, const DatasetGraph& graph,
    Part reference = Part::Train, Part held_out = Part::Test,
    Exec exec = Exec::Auto);

// Mean over held-out subjects of min(1, held_i / ref_i), as a percentage;
// subjects absent from the reference side contribute 0. Errors: EmptyTest.
double bslr(const SplitAssignment& split, const DatasetGraph& graph,
            Part reference = Part::Train, Part held_out = Part::Test,
            Exec exec = Exec::Auto);

// Same per-unit form over distinct held-out segments. Errors: EmptyTest.
double tslr_eeg(const SplitAssignment& split, const DatasetGraph& graph,
                Part reference = Part::Train, Part held_out = Part::Test,
                Exec exec = Exec::Auto);

// Windowed form: 100 * tau * min(1, overlap_volume / (held_samples * L)),
// where overlap_volume counts, over held-out windows, covered segments the
// reference side also covers, and tau is 0 without any overlap and
// min(1, ref-covered-count / overlap-count) otherwise.
// Errors: EmptyTest, NonPositiveL.
double tslr_fmri(const SplitAssignment& split, const DatasetGraph& graph,
                 uint32_t window_length, Part reference = Part::Train,
                 Part held_out = Part::Test, Exec exec = Exec::Auto);

struct PairReport {
    Part reference = Part::Train;
    Part held_out = Part::Test;
    bool brain_leak = false;
    bool text_leak = false;
    double bslr = 0.0;
    double tslr = 0.0;
    std::vector<uint32_t> leaking_subjects;
    std::vector<uint64_t> leaking_segments;
    // Diagnostic capped ratios, only for offending units.
    std::vector<std::pair<uint32_t, double>> subject_ratios;
    std::vector<std::pair<uint64_t, double>> segment_ratios;
};

struct LeakageReport {
    Modality modality = Modality::EEG;
    uint32_t window_length = 0;
    // Audited pairs: (train,val) then (train,test), minus skipped ones.
    std::vector<PairReport> pairs;
    std::vector<std::string> skipped;  // e.g. "val empty, train/val pair skipped"
    // Worst audited pair (largest bslr+tslr), echoed at top level.
    PairReport worst;

    bool any_leak() const { return worst.brain_leak || worst.text_leak; }
};

// Runs both detectors and both metrics for the (train,val) and (train,test)
// pairs, skipping a pair when its held-out side is empty.
LeakageReport audit(const SplitAssignment& split, const DatasetGraph& graph,
                    Exec exec = Exec::Auto);

}  // namespace cogsplit
