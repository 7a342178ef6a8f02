#pragma once

#include <cstdint>
#include <string>

#include "cogsplit/manifest.hpp"

namespace cogsplit {

enum class Exposure { Complete, Bernoulli, DisjointBlocks };

const char* exposure_name(Exposure e);
Exposure parse_exposure(const std::string& text);  // accepts "bernoulli:0.4"

// Parameterized synthetic dataset. Complete: every subject hears every
// story. Bernoulli: each (subject, story) pair heard with probability p,
// re-rolled (bounded) so every story keeps a listener and every subject a
// story. DisjointBlocks: subject i hears exactly story i mod K, so subject
// blocks of different stories never intersect.
struct SynthSpec {
    uint32_t subjects = 1;
    uint32_t stories = 1;
    uint32_t segments_min = 1;
    uint32_t segments_max = 1;  // == min for a fixed count
    Exposure exposure = Exposure::Complete;
    double bernoulli_p = 0.5;
    uint64_t seed = 0;
};

// Deterministic for identical arguments; output always passes build_graph
// validation. Errors: ExposureInfeasible after the retry bound, BadManifest
// on zero counts or p outside (0,1].
DatasetManifest generate(const SynthSpec& spec);

}  // namespace cogsplit
