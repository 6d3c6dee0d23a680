// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------

#ifndef O2I_PARALLEL_HPP
#define O2I_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace o2i {

/// Trials are cut into fixed-size blocks; block b always draws from the
/// same sub-stream, so results do not depend on how blocks are assigned.
inline constexpr std::uint64_t kTrialBlock = 2048;

struct RunOptions {
    std::uint64_t trials = 10000;
    unsigned workers = 1;
};

/// Runs `body(block_index, first_trial, count) -> Acc` for every block across
/// `workers` threads and folds the per-block results in block order with
/// `merge(Acc&, const Acc&)`.
template <typename Acc, typename Body, typename Merge>
Acc run_blocks(std::uint64_t trials, unsigned workers, Acc init, Body&& body, Merge&& merge) {
    const std::uint64_t n_blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Acc> partial(n_blocks, init);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto work = [&] {
        try {
            for (std::uint64_t b = next++; b < n_blocks; b = next++) {
                const std::uint64_t first = b * kTrialBlock;
                const std::uint64_t count = std::min(kTrialBlock, trials - first);
                partial[b] = body(b, first, count);
            }
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = n_blocks;
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_blocks)));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    Acc total = std::move(init);
    for (const auto& p : partial) merge(total, p);
    return total;
}

} // namespace o2i

#endif
