#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "cogsplit/audit.hpp"
#include "cogsplit/error.hpp"
#include "cogsplit/graph.hpp"
#include "cogsplit/split.hpp"
#include "cogsplit/synthetic.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

// Times the OpenMP counting kernel against the serial reference on one
// synthetic split and verifies they produce identical tallies.

namespace {

using namespace cogsplit;
using Clock = std::chrono::steady_clock;

double best_of(int repeat, const SplitAssignment& split, const DatasetGraph& graph,
               Exec exec, PairCounts& out) {
    double best_ms = 1e300;
    for (int r = 0; r < repeat; ++r) {
        const auto t0 = Clock::now();
        out = count_pair(split, graph, Part::Train, Part::Test, exec);
        const auto t1 = Clock::now();
        best_ms = std::min(best_ms, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best_ms;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compare serial and OpenMP leakage-count kernels"};
    uint32_t subjects = 40, stories = 10, segments = 250, window = 10;
    uint64_t seed = 1;
    int repeat = 5;
    std::string modality_text = "fmri";
    std::string method_text = "c";
    app.add_option("--subjects", subjects);
    app.add_option("--stories", stories);
    app.add_option("--segments", segments);
    app.add_option("--modality", modality_text);
    app.add_option("--method", method_text);
    app.add_option("--window", window);
    app.add_option("--seed", seed);
    app.add_option("--repeat", repeat);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        SynthSpec spec;
        spec.subjects = subjects;
        spec.stories = stories;
        spec.segments_min = spec.segments_max = segments;
        spec.seed = seed;
        const DatasetGraph graph = build_graph(generate(spec));

        SplitConfig config;
        config.method = parse_method(method_text);
        config.modality = parse_modality(modality_text);
        config.window_length = window;
        config.seed = seed;
        const SplitAssignment split = run_split(graph, config);

        PairCounts serial, parallel;
        const double serial_ms = best_of(repeat, split, graph, Exec::Serial, serial);
        const double parallel_ms = best_of(repeat, split, graph, Exec::Parallel, parallel);
        if (!(serial == parallel)) {
            std::fprintf(stderr, "kernel mismatch: parallel tallies differ from serial\n");
            return 1;
        }

        int threads = 1;
#ifdef _OPENMP
        threads = omp_get_max_threads();
#endif
        std::printf("samples:        %zu\n", split.samples().size());
        std::printf("threads:        %d\n", threads);
        std::printf("serial kernel:  %8.3f ms\n", serial_ms);
        std::printf("openmp kernel:  %8.3f ms\n", parallel_ms);
        std::printf("speedup:        %8.2fx\n", serial_ms / parallel_ms);
        std::printf("tallies match:  yes\n");
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    return 0;
}
