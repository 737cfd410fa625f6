#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cavmeas/sim/trajectory.hpp"

namespace cavmeas::sim {

struct BatchOptions {
    std::uint64_t stream = 0;  // distinguishes batches sharing one seed
    unsigned workers = 1;      // 0 = hardware concurrency
};

// Runs body(i) for i in [0, n) on `workers` threads in contiguous chunks.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

// Outcome i depends only on (seed, options.stream, prepared, i), so the
// sequence is identical for any worker count.
std::vector<TrajectoryOutcome> run_batch(std::size_t n, TweezerState prepared, const MethodConfig& config,
                                         const RateModel& model, std::uint64_t seed,
                                         const BatchOptions& options = {});

}  // namespace cavmeas::sim
