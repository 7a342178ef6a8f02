#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cogsplit/graph.hpp"
#include "cogsplit/ratio.hpp"

namespace cogsplit {

enum class Method { A, B, C, D, E, F };

const char* method_name(Method m);  // "a".."f"
Method parse_method(const std::string& text);

struct SplitConfig {
    Method method = Method::F;
    Modality modality = Modality::EEG;
    Ratio ratio;
    uint32_t window_length = 10;  // fMRI only
    uint64_t seed = 0;

    bool operator==(const SplitConfig&) const = default;
};

enum class Part : uint8_t { Train = 0, Val = 1, Test = 2, Discarded = 3 };
inline constexpr size_t kPartCount = 4;

const char* part_name(Part p);

// A total assignment of the enumerated samples. Each sample belongs to
// exactly one part by construction; methods (a)-(e) never discard.
class SplitAssignment {
public:
    SplitAssignment(SplitConfig config,
                    std::shared_ptr<const std::vector<SampleWindow>> samples,
                    std::vector<Part> assignment,
                    std::vector<std::string> warnings = {});

    const SplitConfig& config() const { return config_; }
    const std::vector<SampleWindow>& samples() const { return *samples_; }
    std::shared_ptr<const std::vector<SampleWindow>> samples_ptr() const {
        return samples_;
    }
    Part part_of(size_t sample_index) const { return assignment_[sample_index]; }
    const std::vector<Part>& assignment() const { return assignment_; }

    size_t part_size(Part p) const { return sizes_[static_cast<size_t>(p)]; }
    // Sample indices of one part, ascending (canonical sample order).
    std::vector<uint32_t> part_indices(Part p) const;

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    SplitConfig config_;
    std::shared_ptr<const std::vector<SampleWindow>> samples_;
    std::vector<Part> assignment_;
    std::array<size_t, kPartCount> sizes_{};
    std::vector<std::string> warnings_;
};

// Method (a): seeded shuffle of subjects, unit-level cut; samples follow
// their subject. Errors: TooFewSubjects.
SplitAssignment split_by_subject(const DatasetGraph& graph, const SplitConfig& config);

// Method (b): same over stories. Errors: TooFewStories.
SplitAssignment split_by_story(const DatasetGraph& graph, const SplitConfig& config);

// Method (c): global seeded shuffle of all samples, sample-level cut.
SplitAssignment split_random(const DatasetGraph& graph, const SplitConfig& config);

// Method (d): per-story seeded shuffle and cut (independent substream per
// story), unioned.
SplitAssignment split_random_within_story(const DatasetGraph& graph,
                                          const SplitConfig& config);

// Method (e), fMRI only: within each story, each subject's ordered window
// sequence is cut into contiguous train/val/test blocks in segment order.
// Errors: WrongModality.
SplitAssignment split_contiguous_within_story(const DatasetGraph& graph,
                                              const SplitConfig& config);

// Dispatch on config.method, including method (f) from leakfree.hpp.
SplitAssignment run_split(const DatasetGraph& graph, const SplitConfig& config);

}  // namespace cogsplit
