#include "cogsplit/audit.hpp"

#include <algorithm>
#include <cmath>

#include "cogsplit/error.hpp"

namespace cogsplit {

namespace detail {

PairCounts count_pair_serial(const SplitAssignment& split, const DatasetGraph& graph,
                             Part reference, Part held_out) {
    PairCounts c;
    c.ref_subject_samples.assign(graph.subject_count(), 0);
    c.held_subject_samples.assign(graph.subject_count(), 0);
    c.ref_segment_cover.assign(graph.segment_count(), 0);
    c.held_segment_cover.assign(graph.segment_count(), 0);

    const auto& samples = split.samples();
    for (size_t s = 0; s < samples.size(); ++s) {
        const Part p = split.part_of(s);
        const bool in_ref = p == reference;
        const bool in_held = p == held_out;
        if (!in_ref && !in_held) continue;
        const auto& w = samples[s];
        const uint64_t base = graph.segment_id(w.story, w.position);
        if (in_ref) {
            ++c.ref_samples;
            ++c.ref_subject_samples[w.subject];
            for (uint32_t j = 0; j <= w.length; ++j) ++c.ref_segment_cover[base + j];
        } else {
            ++c.held_samples;
            ++c.held_subject_samples[w.subject];
            for (uint32_t j = 0; j <= w.length; ++j) ++c.held_segment_cover[base + j];
        }
    }
    for (size_t s = 0; s < samples.size(); ++s) {
        if (split.part_of(s) != held_out) continue;
        const auto& w = samples[s];
        const uint64_t base = graph.segment_id(w.story, w.position);
        for (uint32_t j = 0; j <= w.length; ++j) {
            if (c.ref_segment_cover[base + j] > 0) ++c.overlap_volume;
        }
    }
    return c;
}

PairCounts count_pair_parallel(const SplitAssignment& split, const DatasetGraph& graph,
                               Part reference, Part held_out);

}  // namespace detail

PairCounts count_pair(const SplitAssignment& split, const DatasetGraph& graph,
                      Part reference, Part held_out, Exec exec) {
#ifdef _OPENMP
    const bool parallel = exec != Exec::Serial;
#else
    const bool parallel = exec == Exec::Parallel;
#endif
    return parallel ? detail::count_pair_parallel(split, graph, reference, held_out)
                    : detail::count_pair_serial(split, graph, reference, held_out);
}

namespace {

std::vector<uint32_t> shared_subjects(const PairCounts& c) {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < c.ref_subject_samples.size(); ++i) {
        if (c.ref_subject_samples[i] > 0 && c.held_subject_samples[i] > 0) out.push_back(i);
    }
    return out;
}

std::vector<uint64_t> shared_segments(const PairCounts& c) {
    std::vector<uint64_t> out;
    for (uint64_t u = 0; u < c.ref_segment_cover.size(); ++u) {
        if (c.ref_segment_cover[u] > 0 && c.held_segment_cover[u] > 0) out.push_back(u);
    }
    return out;
}

double capped_ratio(uint64_t held, uint64_t ref) {
    return std::min(1.0, static_cast<double>(held) / static_cast<double>(ref));
}

double bslr_from(const PairCounts& c) {
    if (c.held_samples == 0) throw Error(ErrorCode::EmptyTest, "held-out partition is empty");
    uint64_t held_subjects = 0;
    double sum = 0.0;
    for (size_t i = 0; i < c.held_subject_samples.size(); ++i) {
        if (c.held_subject_samples[i] == 0) continue;
        ++held_subjects;
        if (c.ref_subject_samples[i] > 0) {
            sum += capped_ratio(c.held_subject_samples[i], c.ref_subject_samples[i]);
        }
    }
    return 100.0 * sum / static_cast<double>(held_subjects);
}

double tslr_eeg_from(const PairCounts& c) {
    if (c.held_samples == 0) throw Error(ErrorCode::EmptyTest, "held-out partition is empty");
    uint64_t held_segments = 0;
    double sum = 0.0;
    for (size_t u = 0; u < c.held_segment_cover.size(); ++u) {
        if (c.held_segment_cover[u] == 0) continue;
        ++held_segments;
        if (c.ref_segment_cover[u] > 0) {
            sum += capped_ratio(c.held_segment_cover[u], c.ref_segment_cover[u]);
        }
    }
    return 100.0 * sum / static_cast<double>(held_segments);
}

double tslr_fmri_from(const PairCounts& c, uint32_t window_length) {
    if (window_length == 0) throw Error(ErrorCode::NonPositiveL, "window length must be positive");
    if (c.held_samples == 0) throw Error(ErrorCode::EmptyTest, "held-out partition is empty");
    uint64_t overlap_set = 0;
    uint64_t ref_covered = 0;
    for (size_t u = 0; u < c.ref_segment_cover.size(); ++u) {
        if (c.ref_segment_cover[u] > 0) {
            ++ref_covered;
            if (c.held_segment_cover[u] > 0) ++overlap_set;
        }
    }
    if (overlap_set == 0) return 0.0;
    const double tau =
        std::min(1.0, static_cast<double>(ref_covered) / static_cast<double>(overlap_set));
    const double volume = static_cast<double>(c.overlap_volume) /
                          (static_cast<double>(c.held_samples) * window_length);
    return 100.0 * tau * std::min(1.0, volume);
}

}  // namespace

std::pair<bool, std::vector<uint32_t>> detect_brain_leakage(const SplitAssignment& split,
                                                            const DatasetGraph& graph,
                                                            Part reference, Part held_out,
                                                            Exec exec) {
    const auto counts = count_pair(split, graph, reference, held_out, exec);
    auto offenders = shared_subjects(counts);
    return {!offenders.empty(), std::move(offenders)};
}

std::pair<bool, std::vector<uint64_t>> detect_text_leakage(const SplitAssignment& split,
                                                           const DatasetGraph& graph,
                                                           Part reference, Part held_out,
                                                           Exec exec) {
    const auto counts = count_pair(split, graph, reference, held_out, exec);
    auto offenders = shared_segments(counts);
    return {!offenders.empty(), std::move(offenders)};
}

double bslr(const SplitAssignment& split, const DatasetGraph& graph, Part reference,
            Part held_out, Exec exec) {
    return bslr_from(count_pair(split, graph, reference, held_out, exec));
}

double tslr_eeg(const SplitAssignment& split, const DatasetGraph& graph, Part reference,
                Part held_out, Exec exec) {
    return tslr_eeg_from(count_pair(split, graph, reference, held_out, exec));
}

double tslr_fmri(const SplitAssignment& split, const DatasetGraph& graph,
                 uint32_t window_length, Part reference, Part held_out, Exec exec) {
    return tslr_fmri_from(count_pair(split, graph, reference, held_out, exec), window_length);
}

LeakageReport audit(const SplitAssignment& split, const DatasetGraph& graph, Exec exec) {
    LeakageReport report;
    report.modality = split.config().modality;
    report.window_length =
        split.config().modality == Modality::FMRI ? split.config().window_length : 0;

    for (const Part held : {Part::Val, Part::Test}) {
        if (split.part_size(held) == 0) {
            report.skipped.push_back(std::string(part_name(held)) +
                                     " empty, train/" + part_name(held) + " pair skipped");
            continue;
        }
        const auto counts = count_pair(split, graph, Part::Train, held, exec);
        PairReport pr;
        pr.reference = Part::Train;
        pr.held_out = held;
        pr.leaking_subjects = shared_subjects(counts);
        pr.leaking_segments = shared_segments(counts);
        pr.brain_leak = !pr.leaking_subjects.empty();
        pr.text_leak = !pr.leaking_segments.empty();
        if (counts.ref_samples > 0) {
            pr.bslr = bslr_from(counts);
            pr.tslr = report.modality == Modality::FMRI
                          ? tslr_fmri_from(counts, report.window_length)
                          : tslr_eeg_from(counts);
        }
        for (const uint32_t i : pr.leaking_subjects) {
            pr.subject_ratios.emplace_back(
                i, capped_ratio(counts.held_subject_samples[i], counts.ref_subject_samples[i]));
        }
        for (const uint64_t u : pr.leaking_segments) {
            pr.segment_ratios.emplace_back(
                u, capped_ratio(counts.held_segment_cover[u], counts.ref_segment_cover[u]));
        }
        report.pairs.push_back(std::move(pr));
    }

    if (!report.pairs.empty()) {
        const auto* worst = &report.pairs.front();
        for (const auto& pr : report.pairs) {
            if (pr.bslr + pr.tslr >= worst->bslr + worst->tslr) worst = &pr;
        }
        report.worst = *worst;
    }
    return report;
}

}  // namespace cogsplit
