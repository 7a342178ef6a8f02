#include <doctest.h>

#include <random>
#include <set>

#include "cogsplit/audit.hpp"
#include "cogsplit/error.hpp"
#include "cogsplit/leakfree.hpp"
#include "cogsplit/oracle.hpp"
#include "cogsplit/rng.hpp"
#include "testing_support.hpp"

using namespace cogsplit;
using testing::complete_graph;
using testing::make_config;

namespace {

// Hand-built assignment over the enumerated samples of `graph`.
SplitAssignment manual_split(const DatasetGraph& graph, const SplitConfig& config,
                             std::vector<Part> assignment) {
    auto samples = std::make_shared<const std::vector<SampleWindow>>(enumerate_samples(
        graph, config.modality, config.modality == Modality::FMRI ? config.window_length : 0));
    return SplitAssignment(config, samples, std::move(assignment));
}

std::vector<Part> random_assignment(size_t n, std::mt19937_64& gen, bool with_discard) {
    std::vector<Part> assignment(n);
    for (auto& p : assignment) {
        p = static_cast<Part>(rng::bounded(gen, with_discard ? 4 : 3));
    }
    return assignment;
}

}  // namespace

TEST_CASE("per-subject leakage rate on a hand-built 8/2 split") {
    const auto g = complete_graph(1, 1, 10);
    std::vector<Part> assignment(10, Part::Train);
    assignment[8] = Part::Test;
    assignment[9] = Part::Test;
    const auto split = manual_split(g, make_config(Method::C, Modality::EEG, "8:0:2", 0, 0),
                                    std::move(assignment));
    CHECK(bslr(split, g) == doctest::Approx(25.0));  // min(1, 2/8) * 100
}

TEST_CASE("per-subject rate caps at one") {
    const auto g = complete_graph(1, 1, 10);
    std::vector<Part> assignment(10, Part::Test);
    assignment[0] = Part::Train;
    const auto split = manual_split(g, make_config(Method::C, Modality::EEG, "1:0:9", 0, 0),
                                    std::move(assignment));
    CHECK(bslr(split, g) == doctest::Approx(100.0));  // min(1, 9/1)
}

TEST_CASE("subjects absent from train contribute zero") {
    const auto g = complete_graph(2, 1, 4);
    // S1 entirely in train, S2 entirely in test.
    std::vector<Part> assignment(8, Part::Train);
    for (size_t s = 4; s < 8; ++s) assignment[s] = Part::Test;
    const auto split = manual_split(g, make_config(Method::C, Modality::EEG, "1:0:1", 0, 0),
                                    std::move(assignment));
    CHECK(bslr(split, g) == doctest::Approx(0.0));
    const auto [leak, offenders] = detect_brain_leakage(split, g);
    CHECK_FALSE(leak);
    CHECK(offenders.empty());
}

TEST_CASE("empty test partition raises EmptyTest on direct metric calls") {
    const auto g = complete_graph(2, 1, 4);
    const auto split =
        run_split(g, make_config(Method::C, Modality::EEG, "1:0:0", 0, 1));
    CHECK_THROWS_WITH_AS(bslr(split, g), doctest::Contains("EmptyTest"), Error);
    CHECK_THROWS_WITH_AS(tslr_eeg(split, g), doctest::Contains("EmptyTest"), Error);
    CHECK_THROWS_WITH_AS(tslr_fmri(split, g, 10), doctest::Contains("EmptyTest"), Error);
    // The detectors stay quiet on an empty pair.
    CHECK_FALSE(detect_brain_leakage(split, g).first);
    CHECK_FALSE(detect_text_leakage(split, g).first);
}

TEST_CASE("segment-level rate for a 9/1/2 subject split on twelve subjects") {
    const auto g = complete_graph(12, 1, 50);
    const auto split = run_split(g, make_config(Method::A, Modality::EEG, "9:1:2", 0, 4));
    // Every segment: two test samples over nine train samples.
    CHECK(tslr_eeg(split, g) == doctest::Approx(100.0 * 2.0 / 9.0));
    CHECK(bslr(split, g) == doctest::Approx(0.0));
}

TEST_CASE("segments never seen in train contribute zero") {
    const auto g = complete_graph(2, 1, 2);
    // Train: S1 on segment 0. Test: S2 on segments 0 and 1.
    std::vector<Part> assignment(4, Part::Discarded);
    // samples sorted (subject, story, position): (0,0,0)=0 (0,0,1)=1 (1,0,0)=2 (1,0,1)=3
    assignment[0] = Part::Train;
    assignment[2] = Part::Test;
    assignment[3] = Part::Test;
    const auto split = manual_split(g, make_config(Method::C, Modality::EEG, "1:0:1", 0, 0),
                                    std::move(assignment));
    // Segment 0 leaks fully (1 test / 1 train, capped); segment 1 contributes 0.
    CHECK(tslr_eeg(split, g) == doctest::Approx(50.0));
}

TEST_CASE("windowed text rate hits 100 exactly on fully shared subject splits") {
    const auto g = complete_graph(6, 2, 200);
    const auto split = run_split(g, make_config(Method::A, Modality::FMRI, "8:1:1", 10, 2));
    CHECK(tslr_fmri(split, g, 10) == 100.0);
    CHECK(bslr(split, g) == 0.0);
}

TEST_CASE("windowed text rate on the 30-segment contiguous instance") {
    const auto g = complete_graph(1, 1, 30);
    const auto cfg_e = make_config(Method::E, Modality::FMRI, "8:1:1", 10, 3);
    const auto split_e = run_split(g, cfg_e);

    // Exhaustive window-overlap counting, independently of the kernels:
    // train covers every segment, test windows start at 27, 28, 29.
    uint64_t overlap_volume = 0;
    uint64_t test_windows = 0;
    std::set<uint64_t> train_covered;
    for (size_t s = 0; s < split_e.samples().size(); ++s) {
        if (split_e.part_of(s) != Part::Train) continue;
        const auto& w = split_e.samples()[s];
        for (uint32_t j = w.position; j <= w.last_position(); ++j) train_covered.insert(j);
    }
    for (size_t s = 0; s < split_e.samples().size(); ++s) {
        if (split_e.part_of(s) != Part::Test) continue;
        ++test_windows;
        const auto& w = split_e.samples()[s];
        for (uint32_t j = w.position; j <= w.last_position(); ++j) {
            if (train_covered.count(j)) ++overlap_volume;
        }
    }
    REQUIRE(test_windows == 3);
    CHECK(overlap_volume == 6);  // window sizes 3+2+1, all train-covered
    const double expected = 100.0 * static_cast<double>(overlap_volume) /
                            (static_cast<double>(test_windows) * 10.0);
    const double value_e = tslr_fmri(split_e, g, 10);
    CHECK(value_e == doctest::Approx(expected));
    CHECK(value_e == doctest::Approx(20.0));

    // Strictly between zero and the random-split value on the same graph.
    const auto split_c = run_split(g, make_config(Method::C, Modality::FMRI, "8:1:1", 10, 3));
    const double value_c = tslr_fmri(split_c, g, 10);
    CHECK(value_e > 0.0);
    CHECK(value_e < value_c);
}

TEST_CASE("window overlap is what trips the text detector for contiguous splits") {
    const auto g = complete_graph(1, 1, 30);
    const auto split = run_split(g, make_config(Method::E, Modality::FMRI, "8:1:1", 10, 3));
    const auto [text, offenders] = detect_text_leakage(split, g);
    CHECK(text);
    // Offending segments are exactly the test-covered ones 27..29.
    REQUIRE(offenders.size() == 3);
    CHECK(offenders[0] == 27);
    CHECK(offenders[2] == 29);
}

TEST_CASE("story splits carry no text leakage for fMRI windows") {
    const auto g = complete_graph(4, 5, 20);
    const auto split = run_split(g, make_config(Method::B, Modality::FMRI, "1:1:1", 10, 8));
    CHECK_FALSE(detect_text_leakage(split, g).first);
    CHECK(detect_brain_leakage(split, g).first);
    CHECK(tslr_fmri(split, g, 10) == 0.0);
}

TEST_CASE("audit aggregates pairs and notes skipped ones") {
    const auto g = complete_graph(4, 2, 10);
    const auto split = run_split(g, make_config(Method::C, Modality::EEG, "1:0:1", 0, 12));
    const auto report = audit(split, g);
    CHECK(report.pairs.size() == 1);
    REQUIRE(report.skipped.size() == 1);
    CHECK(report.skipped[0] == "val empty, train/val pair skipped");
    CHECK(report.worst.held_out == Part::Test);
    CHECK(report.any_leak());
    CHECK(report.worst.bslr > 0.0);

    const auto leakfree = run_split(g, make_config(Method::F, Modality::EEG, "1:1:1", 0, 12));
    const auto clean = audit(leakfree, g);
    CHECK_FALSE(clean.any_leak());
    CHECK(clean.worst.bslr == 0.0);
    CHECK(clean.worst.tslr == 0.0);
    CHECK(clean.pairs.size() == 2);
}

TEST_CASE("the worst pair wins the top-level report") {
    const auto g = complete_graph(3, 1, 4);
    // Samples in (subject, position) order: S1 at 0..3, S2 at 4..7, S3 at
    // 8..11. Val re-uses S1 (brain leak); test gets S3 on a segment the
    // train side never covers (clean pair).
    std::vector<Part> assignment(12, Part::Discarded);
    assignment[0] = assignment[1] = Part::Train;  // S1, segments 0 and 1
    assignment[2] = Part::Val;                    // S1, segment 2
    assignment[10] = Part::Test;                  // S3, segment 2
    const auto split = manual_split(g, make_config(Method::C, Modality::EEG, "1:1:1", 0, 0),
                                    std::move(assignment));
    const auto report = audit(split, g);
    REQUIRE(report.pairs.size() == 2);
    // Val pair: S1 on both sides -> brain leak; test pair: S3 vs S1, and
    // test's segment 2 is not covered by train (train covers 0,1) -> clean.
    CHECK(report.worst.held_out == Part::Val);
    CHECK(report.worst.brain_leak);
    CHECK(report.pairs[1].held_out == Part::Test);
    CHECK_FALSE(report.pairs[1].brain_leak);
    CHECK_FALSE(report.pairs[1].text_leak);
}

TEST_CASE("metric/detector consistency on fuzzed assignments") {
    std::mt19937_64 gen(424242);
    for (int round = 0; round < 80; ++round) {
        const auto spec = testing::random_spec(gen, {});
        const auto g = testing::graph_from(spec);
        const Modality modality = round % 2 == 0 ? Modality::EEG : Modality::FMRI;
        const auto cfg = make_config(Method::C, modality, "8:1:1", 4, 0);
        auto split = manual_split(g, cfg, random_assignment(g.recording_count(), gen, true));
        for (const Part held : {Part::Val, Part::Test}) {
            if (split.part_size(held) == 0 || split.part_size(Part::Train) == 0) continue;
            const bool brain = detect_brain_leakage(split, g, Part::Train, held).first;
            const bool text = detect_text_leakage(split, g, Part::Train, held).first;
            const double b = bslr(split, g, Part::Train, held);
            const double t = modality == Modality::FMRI
                                 ? tslr_fmri(split, g, 4, Part::Train, held)
                                 : tslr_eeg(split, g, Part::Train, held);
            CHECK(brain == (b > 0.0));
            CHECK(text == (t > 0.0));
            CHECK(b >= 0.0);
            CHECK(b <= 100.0);
            CHECK(t >= 0.0);
            CHECK(t <= 100.0);
        }
    }
}

TEST_CASE("fast detectors agree with the pairwise oracle") {
    std::mt19937_64 gen(987);
    for (int round = 0; round < 60; ++round) {
        const auto spec = testing::random_spec(gen, {});
        const auto g = testing::graph_from(spec);
        const Modality modality = round % 2 == 0 ? Modality::EEG : Modality::FMRI;
        const auto cfg = make_config(Method::C, modality, "8:1:1", 3, 0);
        auto split = manual_split(g, cfg, random_assignment(g.recording_count(), gen, true));
        for (const Part held : {Part::Val, Part::Test}) {
            const auto [brain_o, text_o] = oracle_pair_leakage(split, Part::Train, held);
            CHECK(detect_brain_leakage(split, g, Part::Train, held).first == brain_o);
            CHECK(detect_text_leakage(split, g, Part::Train, held).first == text_o);
        }
    }
}

TEST_CASE("parallel kernel tallies match the serial reference bit for bit") {
    std::mt19937_64 gen(314159);
    for (int round = 0; round < 40; ++round) {
        const auto spec = testing::random_spec(gen, {});
        const auto g = testing::graph_from(spec);
        const Modality modality = round % 2 == 0 ? Modality::EEG : Modality::FMRI;
        const auto cfg = make_config(Method::C, modality, "8:1:1", 5, 0);
        auto split = manual_split(g, cfg, random_assignment(g.recording_count(), gen, true));
        const auto serial = count_pair(split, g, Part::Train, Part::Test, Exec::Serial);
        const auto parallel = count_pair(split, g, Part::Train, Part::Test, Exec::Parallel);
        CHECK(serial == parallel);
    }
}

TEST_CASE("adding a leaking sample for a unit already in test never lowers the rate") {
    std::mt19937_64 gen(777);
    int moved = 0;
    for (int round = 0; round < 200 && moved < 40; ++round) {
        const auto spec = testing::random_spec(gen, {});
        const auto g = testing::graph_from(spec);
        const auto cfg = make_config(Method::C, Modality::EEG, "8:1:1", 0, 0);
        auto assignment = random_assignment(g.recording_count(), gen, true);
        auto split = manual_split(g, cfg, assignment);
        if (split.part_size(Part::Test) == 0) continue;

        const auto before_counts = count_pair(split, g, Part::Train, Part::Test);
        for (size_t d = 0; d < assignment.size(); ++d) {
            if (assignment[d] != Part::Discarded) continue;
            const auto& w = split.samples()[d];
            // Restrict to subjects already present on both sides; a leaking
            // sample of a brand-new test subject can dilute the average.
            if (before_counts.ref_subject_samples[w.subject] == 0 ||
                before_counts.held_subject_samples[w.subject] == 0) {
                continue;
            }
            auto moved_assignment = assignment;
            moved_assignment[d] = Part::Test;
            const auto moved_split = manual_split(g, cfg, std::move(moved_assignment));
            CHECK(bslr(moved_split, g) >= bslr(split, g) - 1e-12);
            ++moved;
            break;
        }
    }
    CHECK(moved >= 20);
}

TEST_CASE("leak-free splits audit to all-zero reports") {
    std::mt19937_64 gen(606);
    for (int round = 0; round < 30; ++round) {
        SynthSpec spec;
        spec.subjects = 3 + static_cast<uint32_t>(gen() % 8);
        spec.stories = 3 + static_cast<uint32_t>(gen() % 4);
        spec.segments_min = spec.segments_max = 2 + static_cast<uint32_t>(gen() % 10);
        spec.seed = gen();
        const auto g = testing::graph_from(spec);
        for (const Modality modality : {Modality::EEG, Modality::FMRI}) {
            const auto split =
                run_split(g, make_config(Method::F, modality, "8:1:1", 10, gen()));
            const auto report = audit(split, g);
            CHECK_FALSE(report.any_leak());
            CHECK(report.worst.bslr == 0.0);
            CHECK(report.worst.tslr == 0.0);
        }
    }
}
