#include "cogsplit/audit.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cogsplit::detail {

PairCounts count_pair_serial(const SplitAssignment& split, const DatasetGraph& graph,
                             Part reference, Part held_out);

#ifdef _OPENMP

// Same tallies as the serial reference: each thread accumulates into private
// arrays which are then added into the shared result. Integer addition is
// order-free, so the outcome is bit-identical for any thread count; tests
// assert equality against count_pair_serial.
PairCounts count_pair_parallel(const SplitAssignment& split, const DatasetGraph& graph,
                               Part reference, Part held_out) {
    PairCounts c;
    const size_t subjects = graph.subject_count();
    const size_t segments = graph.segment_count();
    c.ref_subject_samples.assign(subjects, 0);
    c.held_subject_samples.assign(subjects, 0);
    c.ref_segment_cover.assign(segments, 0);
    c.held_segment_cover.assign(segments, 0);

    const auto& samples = split.samples();
    const int64_t n = static_cast<int64_t>(samples.size());
    uint64_t ref_samples = 0;
    uint64_t held_samples = 0;

#pragma omp parallel reduction(+ : ref_samples, held_samples)
    {
        std::vector<uint64_t> ref_subject(subjects, 0), held_subject(subjects, 0);
        std::vector<uint64_t> ref_segment(segments, 0), held_segment(segments, 0);
#pragma omp for schedule(static) nowait
        for (int64_t s = 0; s < n; ++s) {
            const Part p = split.part_of(static_cast<size_t>(s));
            const bool in_ref = p == reference;
            if (!in_ref && p != held_out) continue;
            const auto& w = samples[static_cast<size_t>(s)];
            const uint64_t base = graph.segment_id(w.story, w.position);
            auto& subject_tally = in_ref ? ref_subject : held_subject;
            auto& segment_tally = in_ref ? ref_segment : held_segment;
            if (in_ref) {
                ++ref_samples;
            } else {
                ++held_samples;
            }
            ++subject_tally[w.subject];
            for (uint32_t j = 0; j <= w.length; ++j) ++segment_tally[base + j];
        }
#pragma omp critical(cogsplit_count_merge)
        {
            for (size_t i = 0; i < subjects; ++i) {
                c.ref_subject_samples[i] += ref_subject[i];
                c.held_subject_samples[i] += held_subject[i];
            }
            for (size_t u = 0; u < segments; ++u) {
                c.ref_segment_cover[u] += ref_segment[u];
                c.held_segment_cover[u] += held_segment[u];
            }
        }
    }
    c.ref_samples = ref_samples;
    c.held_samples = held_samples;

    uint64_t overlap = 0;
#pragma omp parallel for schedule(static) reduction(+ : overlap)
    for (int64_t s = 0; s < n; ++s) {
        if (split.part_of(static_cast<size_t>(s)) != held_out) continue;
        const auto& w = samples[static_cast<size_t>(s)];
        const uint64_t base = graph.segment_id(w.story, w.position);
        for (uint32_t j = 0; j <= w.length; ++j) {
            if (c.ref_segment_cover[base + j] > 0) ++overlap;
        }
    }
    c.overlap_volume = overlap;
    return c;
}

#else

PairCounts count_pair_parallel(const SplitAssignment& split, const DatasetGraph& graph,
                               Part reference, Part held_out) {
    return count_pair_serial(split, graph, reference, held_out);
}

#endif

}  // namespace cogsplit::detail
