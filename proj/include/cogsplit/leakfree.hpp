#pragma once

#include <cstdint>
#include <vector>

#include "cogsplit/split.hpp"

namespace cogsplit {

// Method (f): pick a one-edge-per-unit core with balanced subject load,
// partition the core so subjects (and for fMRI whole stories) never straddle
// partitions, then expand each partition with every edge whose subject AND
// unit both landed inside it. Everything else is discarded.

enum class CoreUnit { Segment, Story };  // EEG loads segments, fMRI stories

struct CoreSubgraph {
    CoreUnit unit = CoreUnit::Segment;
    // One selected edge per unit, in unit order (global segment id order for
    // Segment, story index order for Story).
    std::vector<RecordingRef> edges;
    // Per-subject count of selected edges.
    std::vector<uint32_t> load;
};

struct PartitionSets {
    CoreUnit unit = CoreUnit::Segment;
    // part_of_subject[i] / part_of_unit[u] in {Train, Val, Test}; Discarded
    // marks subjects/units outside the core partitions.
    std::vector<Part> part_of_subject;
    std::vector<Part> part_of_unit;
};

// Greedy balanced selection: units in deterministic order; each picks the
// incident subject with minimal current load, ties to the lowest subject
// index. The seed is accepted for interface symmetry; selection itself is
// deterministic. Errors: UncoveredUnit.
CoreSubgraph select_core(const DatasetGraph& graph, CoreUnit unit, uint64_t seed);

// Core subjects are seeded-shuffled and unit-apportioned; each core segment
// follows its subject. Errors: TooFewSubjects.
PartitionSets partition_core_eeg(const CoreSubgraph& core, const DatasetGraph& graph,
                                 const Ratio& ratio, uint64_t seed);

// Stories grouped by their core subject; groups seeded-shuffled, then
// sequentially filled against story-count targets (train, val, test), with a
// reservation so every nonzero-ratio partition receives a group. A subject's
// stories therefore never straddle partitions. Errors: TooFewGroups.
PartitionSets partition_core_fmri(const CoreSubgraph& core, const DatasetGraph& graph,
                                  const Ratio& ratio, uint64_t seed);

// Total over all samples: a sample joins partition P iff its subject and its
// unit are both in P; everything else lands in Discarded.
SplitAssignment expand_partitions(const PartitionSets& parts, const DatasetGraph& graph,
                                  const SplitConfig& config);

// select_core -> partition_core_{eeg,fmri} -> expand_partitions.
SplitAssignment split_leakfree(const DatasetGraph& graph, const SplitConfig& config);

}  // namespace cogsplit
