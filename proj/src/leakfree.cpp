#include "cogsplit/leakfree.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cogsplit/error.hpp"
#include "cogsplit/rng.hpp"

namespace cogsplit {

CoreSubgraph select_core(const DatasetGraph& graph, CoreUnit unit, uint64_t /*seed*/) {
    CoreSubgraph core;
    core.unit = unit;
    core.load.assign(graph.subject_count(), 0);

    const uint64_t unit_count =
        unit == CoreUnit::Segment ? graph.segment_count() : graph.story_count();
    core.edges.reserve(unit_count);

    for (uint64_t u = 0; u < unit_count; ++u) {
        const auto& candidates = unit == CoreUnit::Segment
                                     ? graph.segment_subjects(u)
                                     : graph.story_subjects(static_cast<uint32_t>(u));
        if (candidates.empty()) {
            if (unit == CoreUnit::Segment) {
                const auto [story, pos] = graph.segment_of(u);
                throw Error(ErrorCode::UncoveredUnit,
                            "segment (" + graph.story_label(story) + ", " +
                                std::to_string(pos) + ") was heard by no subject");
            }
            throw Error(ErrorCode::UncoveredUnit,
                        "story '" + graph.story_label(static_cast<uint32_t>(u)) +
                            "' was heard by no subject");
        }
        // Candidates are ascending, so a strict comparison keeps the lowest
        // subject index on ties.
        uint32_t best = candidates.front();
        for (const uint32_t i : candidates) {
            if (core.load[i] < core.load[best]) best = i;
        }
        ++core.load[best];
        if (unit == CoreUnit::Segment) {
            const auto [story, pos] = graph.segment_of(u);
            core.edges.push_back({best, story, pos});
        } else {
            const auto story = static_cast<uint32_t>(u);
            core.edges.push_back({best, story, graph.recorded_span(best, story).first});
        }
    }
    return core;
}

namespace {

std::vector<uint32_t> core_subjects(const CoreSubgraph& core) {
    std::vector<uint32_t> subjects;
    for (uint32_t i = 0; i < core.load.size(); ++i) {
        if (core.load[i] > 0) subjects.push_back(i);
    }
    return subjects;
}

}  // namespace

PartitionSets partition_core_eeg(const CoreSubgraph& core, const DatasetGraph& graph,
                                 const Ratio& ratio, uint64_t seed) {
    auto subjects = core_subjects(core);
    if (subjects.size() < static_cast<size_t>(nonzero_partitions(ratio))) {
        throw Error(ErrorCode::TooFewSubjects,
                    "core has " + std::to_string(subjects.size()) + " subjects but " +
                        std::to_string(nonzero_partitions(ratio)) + " partitions are demanded");
    }
    rng::shuffle_seeded(subjects, seed);
    const auto counts = apportion_units(subjects.size(), ratio);

    PartitionSets parts;
    parts.unit = CoreUnit::Segment;
    parts.part_of_subject.assign(graph.subject_count(), Part::Discarded);
    size_t at = 0;
    for (int p = 0; p < 3; ++p) {
        for (uint64_t n = 0; n < counts[p]; ++n, ++at) {
            parts.part_of_subject[subjects[at]] = static_cast<Part>(p);
        }
    }
    // Each segment has exactly one core edge; it follows its subject.
    parts.part_of_unit.assign(graph.segment_count(), Part::Discarded);
    for (uint64_t u = 0; u < core.edges.size(); ++u) {
        parts.part_of_unit[u] = parts.part_of_subject[core.edges[u].subject];
    }
    return parts;
}

PartitionSets partition_core_fmri(const CoreSubgraph& core, const DatasetGraph& graph,
                                  const Ratio& ratio, uint64_t seed) {
    // Stories grouped by their core subject; a group moves as one unit, so a
    // subject's stories can never straddle partitions.
    std::map<uint32_t, std::vector<uint32_t>> by_subject;
    for (uint32_t k = 0; k < core.edges.size(); ++k) {
        by_subject[core.edges[k].subject].push_back(k);
    }
    std::vector<std::pair<uint32_t, std::vector<uint32_t>>> groups(by_subject.begin(),
                                                                   by_subject.end());
    const size_t nonzero = static_cast<size_t>(nonzero_partitions(ratio));
    if (groups.size() < nonzero) {
        throw Error(ErrorCode::TooFewGroups,
                    "core yields " + std::to_string(groups.size()) + " subject groups but " +
                        std::to_string(nonzero) + " partitions are demanded");
    }
    rng::shuffle_seeded(groups, seed);

    const auto story_targets = apportion_units(graph.story_count(), ratio);
    std::vector<Part> fill_order;
    fill_order.push_back(Part::Train);
    if (ratio.val > 0) fill_order.push_back(Part::Val);
    if (ratio.test > 0) fill_order.push_back(Part::Test);

    PartitionSets parts;
    parts.unit = CoreUnit::Story;
    parts.part_of_subject.assign(graph.subject_count(), Part::Discarded);
    parts.part_of_unit.assign(graph.story_count(), Part::Discarded);

    // Sequential fill against story-count targets. Later partitions keep a
    // reserve of one group each, and the final partition takes the rest.
    size_t g = 0;
    for (size_t idx = 0; idx < fill_order.size(); ++idx) {
        const Part p = fill_order[idx];
        const uint64_t target = story_targets[static_cast<size_t>(p)];
        const size_t reserve = fill_order.size() - idx - 1;
        const bool last = reserve == 0;
        uint64_t filled = 0;
        size_t taken = 0;
        while (g < groups.size()) {
            if (!last) {
                const bool can_take = groups.size() - g > reserve;
                if (taken > 0 && (filled >= target || !can_take)) break;
            }
            const auto& [subject, stories] = groups[g];
            parts.part_of_subject[subject] = p;
            for (const uint32_t k : stories) parts.part_of_unit[k] = p;
            filled += stories.size();
            ++taken;
            ++g;
        }
    }
    return parts;
}

SplitAssignment expand_partitions(const PartitionSets& parts, const DatasetGraph& graph,
                                  const SplitConfig& config) {
    auto samples = std::make_shared<const std::vector<SampleWindow>>(
        enumerate_samples(graph, config.modality,
                          config.modality == Modality::FMRI ? config.window_length : 0));
    std::vector<Part> assignment(samples->size(), Part::Discarded);
    for (size_t s = 0; s < samples->size(); ++s) {
        const auto& w = (*samples)[s];
        const Part sp = parts.part_of_subject[w.subject];
        if (sp == Part::Discarded) continue;
        const Part up = parts.unit == CoreUnit::Segment
                            ? parts.part_of_unit[graph.segment_id(w.story, w.position)]
                            : parts.part_of_unit[w.story];
        if (sp == up) assignment[s] = sp;
    }

    std::array<size_t, 3> kept{};
    for (const Part p : assignment) {
        if (p != Part::Discarded) ++kept[static_cast<size_t>(p)];
    }
    std::vector<std::string> warnings;
    const std::array<uint32_t, 3> shares{config.ratio.train, config.ratio.val,
                                         config.ratio.test};
    for (int p = 0; p < 3; ++p) {
        if (shares[p] > 0 && kept[p] == 0) {
            warnings.push_back(std::string("partition '") + part_name(static_cast<Part>(p)) +
                               "' expanded to zero samples");
        }
    }
    return SplitAssignment(config, std::move(samples), std::move(assignment),
                           std::move(warnings));
}

SplitAssignment split_leakfree(const DatasetGraph& graph, const SplitConfig& config) {
    const CoreUnit unit =
        config.modality == Modality::EEG ? CoreUnit::Segment : CoreUnit::Story;
    const CoreSubgraph core = select_core(graph, unit, config.seed);
    const PartitionSets parts =
        unit == CoreUnit::Segment
            ? partition_core_eeg(core, graph, config.ratio, config.seed)
            : partition_core_fmri(core, graph, config.ratio, config.seed);
    return expand_partitions(parts, graph, config);
}

}  // namespace cogsplit
