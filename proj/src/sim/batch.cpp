#include "cavmeas/sim/batch.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

namespace cavmeas::sim {

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t begin = w * chunk;
                const std::size_t end = std::min(n, begin + chunk);
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<TrajectoryOutcome> run_batch(std::size_t n, TweezerState prepared, const MethodConfig& config,
                                         const RateModel& model, std::uint64_t seed,
                                         const BatchOptions& options) {
    if (n == 0) throw std::invalid_argument("batch size must be >= 1");
    config.validate();
    model.validate(config.method);
    std::vector<TrajectoryOutcome> out(n);
    const std::uint64_t stream = options.stream * 8 + static_cast<std::uint64_t>(prepared);
    parallel_for(n, options.workers, [&](std::size_t i) {
        Rng rng({seed, stream, i});
        out[i] = simulate_measurement(prepared, config, model, rng);
        out[i].seed_index = i;
    });
    return out;
}

}  // namespace cavmeas::sim
