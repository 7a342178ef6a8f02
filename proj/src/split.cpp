#include "cogsplit/split.hpp"

#include <algorithm>
#include <numeric>

#include "cogsplit/error.hpp"
#include "cogsplit/leakfree.hpp"
#include "cogsplit/rng.hpp"

namespace cogsplit {

const char* method_name(Method m) {
    switch (m) {
        case Method::A: return "a";
        case Method::B: return "b";
        case Method::C: return "c";
        case Method::D: return "d";
        case Method::E: return "e";
        case Method::F: return "f";
    }
    return "?";
}

Method parse_method(const std::string& text) {
    if (text.size() == 1 && text[0] >= 'a' && text[0] <= 'f') {
        return static_cast<Method>(text[0] - 'a');
    }
    throw Error(ErrorCode::BadArgument, "unknown method '" + text + "' (expected a..f)");
}

const char* part_name(Part p) {
    switch (p) {
        case Part::Train: return "train";
        case Part::Val: return "val";
        case Part::Test: return "test";
        case Part::Discarded: return "discarded";
    }
    return "?";
}

SplitAssignment::SplitAssignment(SplitConfig config,
                                 std::shared_ptr<const std::vector<SampleWindow>> samples,
                                 std::vector<Part> assignment,
                                 std::vector<std::string> warnings)
    : config_(config),
      samples_(std::move(samples)),
      assignment_(std::move(assignment)),
      warnings_(std::move(warnings)) {
    if (assignment_.size() != samples_->size()) {
        throw std::logic_error("assignment size mismatch");
    }
    for (const Part p : assignment_) ++sizes_[static_cast<size_t>(p)];
}

std::vector<uint32_t> SplitAssignment::part_indices(Part p) const {
    std::vector<uint32_t> indices;
    indices.reserve(part_size(p));
    for (size_t i = 0; i < assignment_.size(); ++i) {
        if (assignment_[i] == p) indices.push_back(static_cast<uint32_t>(i));
    }
    return indices;
}

namespace {

std::shared_ptr<const std::vector<SampleWindow>> enumerate_shared(const DatasetGraph& graph,
                                                                  const SplitConfig& config) {
    return std::make_shared<const std::vector<SampleWindow>>(
        enumerate_samples(graph, config.modality,
                          config.modality == Modality::FMRI ? config.window_length : 0));
}

// Shuffle unit ids, cut train|val|test by `counts`, return per-unit part.
std::vector<Part> cut_units(size_t unit_count, const std::array<uint64_t, 3>& counts,
                            uint64_t seed) {
    std::vector<uint32_t> order(unit_count);
    std::iota(order.begin(), order.end(), 0);
    rng::shuffle_seeded(order, seed);
    std::vector<Part> part(unit_count, Part::Train);
    size_t at = 0;
    for (int p = 0; p < 3; ++p) {
        for (uint64_t n = 0; n < counts[p]; ++n, ++at) {
            part[order[at]] = static_cast<Part>(p);
        }
    }
    return part;
}

SplitAssignment split_by_unit_of_sample(const DatasetGraph& graph, const SplitConfig& config,
                                        bool by_subject) {
    const size_t unit_count = by_subject ? graph.subject_count() : graph.story_count();
    if (unit_count < static_cast<size_t>(nonzero_partitions(config.ratio))) {
        throw Error(by_subject ? ErrorCode::TooFewSubjects : ErrorCode::TooFewStories,
                    std::string(by_subject ? "subjects" : "stories") + " available: " +
                        std::to_string(unit_count) + ", partitions demanded: " +
                        std::to_string(nonzero_partitions(config.ratio)));
    }
    const auto counts = apportion_units(unit_count, config.ratio);
    const auto unit_part = cut_units(unit_count, counts, config.seed);

    auto samples = enumerate_shared(graph, config);
    std::vector<Part> assignment(samples->size());
    for (size_t s = 0; s < samples->size(); ++s) {
        const auto& w = (*samples)[s];
        assignment[s] = unit_part[by_subject ? w.subject : w.story];
    }
    return SplitAssignment(config, std::move(samples), std::move(assignment));
}

// Assign `indices` (already in cut order) by sample-level apportionment.
void cut_samples(const std::vector<uint32_t>& indices, const Ratio& ratio,
                 std::vector<Part>& assignment) {
    const auto counts = apportion_samples(indices.size(), ratio);
    size_t at = 0;
    for (int p = 0; p < 3; ++p) {
        for (uint64_t n = 0; n < counts[p]; ++n, ++at) {
            assignment[indices[at]] = static_cast<Part>(p);
        }
    }
}

}  // namespace

SplitAssignment split_by_subject(const DatasetGraph& graph, const SplitConfig& config) {
    return split_by_unit_of_sample(graph, config, /*by_subject=*/true);
}

SplitAssignment split_by_story(const DatasetGraph& graph, const SplitConfig& config) {
    return split_by_unit_of_sample(graph, config, /*by_subject=*/false);
}

SplitAssignment split_random(const DatasetGraph& graph, const SplitConfig& config) {
    auto samples = enumerate_shared(graph, config);
    std::vector<uint32_t> order(samples->size());
    std::iota(order.begin(), order.end(), 0);
    rng::shuffle_seeded(order, config.seed);
    std::vector<Part> assignment(samples->size(), Part::Train);
    cut_samples(order, config.ratio, assignment);
    return SplitAssignment(config, std::move(samples), std::move(assignment));
}

SplitAssignment split_random_within_story(const DatasetGraph& graph,
                                          const SplitConfig& config) {
    auto samples = enumerate_shared(graph, config);
    std::vector<std::vector<uint32_t>> by_story(graph.story_count());
    for (size_t s = 0; s < samples->size(); ++s) {
        by_story[(*samples)[s].story].push_back(static_cast<uint32_t>(s));
    }
    std::vector<Part> assignment(samples->size(), Part::Train);
    for (uint32_t k = 0; k < graph.story_count(); ++k) {
        if (by_story[k].empty()) continue;
        // Independent substream per story: the per-story loop can run in any
        // order (or in parallel) with identical output.
        rng::shuffle_seeded(by_story[k], rng::substream(config.seed, k));
        cut_samples(by_story[k], config.ratio, assignment);
    }
    return SplitAssignment(config, std::move(samples), std::move(assignment));
}

SplitAssignment split_contiguous_within_story(const DatasetGraph& graph,
                                              const SplitConfig& config) {
    if (config.modality != Modality::FMRI) {
        throw Error(ErrorCode::WrongModality,
                    "contiguous-within-story splitting is defined for fmri only");
    }
    auto samples = enumerate_shared(graph, config);
    std::vector<Part> assignment(samples->size(), Part::Train);
    // Samples arrive ordered by (subject, story, position); each (subject,
    // story) run is one temporal sequence, cut train -> val -> test.
    size_t s = 0;
    while (s < samples->size()) {
        size_t run_end = s + 1;
        while (run_end < samples->size() &&
               (*samples)[run_end].subject == (*samples)[s].subject &&
               (*samples)[run_end].story == (*samples)[s].story) {
            ++run_end;
        }
        std::vector<uint32_t> run(run_end - s);
        std::iota(run.begin(), run.end(), static_cast<uint32_t>(s));
        cut_samples(run, config.ratio, assignment);
        s = run_end;
    }
    return SplitAssignment(config, std::move(samples), std::move(assignment));
}

SplitAssignment run_split(const DatasetGraph& graph, const SplitConfig& config) {
    switch (config.method) {
        case Method::A: return split_by_subject(graph, config);
        case Method::B: return split_by_story(graph, config);
        case Method::C: return split_random(graph, config);
        case Method::D: return split_random_within_story(graph, config);
        case Method::E: return split_contiguous_within_story(graph, config);
        case Method::F: return split_leakfree(graph, config);
    }
    throw std::logic_error("unreachable method");
}

}  // namespace cogsplit
