#pragma once

#include <cstdint>
#include <utility>

#include "cogsplit/split.hpp"

namespace cogsplit {

// Reference implementations, deliberately independent of the counting
// kernels in audit.hpp: plain pairwise comparison of samples. Ground truth
// for detector-equivalence tests; quadratic, desk scale only.

// (brain leak, text leak) for one partition pair.
std::pair<bool, bool> oracle_pair_leakage(const SplitAssignment& split,
                                          Part reference, Part held_out);

// Worst case over the (train,val) and (train,test) pairs.
std::pair<bool, bool> oracle_leakage(const SplitAssignment& split);

// Strongest form for zero-leakage claims: no subject and no covered segment
// shared between ANY two of train/val/test; for fMRI additionally no story.
bool oracle_disjoint_all_pairs(const SplitAssignment& split);

// Minimum discarded-sample count over every assignment of samples into
// {train, test, discard} (val folded into test) with non-empty train and
// test and zero leakage, by exhaustive 3^n enumeration. Returns UINT32_MAX
// when no such assignment exists (e.g. a single-subject dataset).
// Errors: TooLarge when there are more than 16 samples, or more than 64
// subjects or segments (the enumeration uses 64-bit occupancy masks).
uint32_t oracle_min_discard(const DatasetGraph& graph, Modality modality,
                            uint32_t window_length);

}  // namespace cogsplit
