#include "lahreg/util/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lahreg::util {

int max_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("LAHREG_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, cap);
        } catch (...) {
            // Unparseable value: ignore the cap.
        }
    }
    return n;
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;

    const int workers = static_cast<int>(
        std::min<std::int64_t>(max_threads(), count));
    if (workers <= 1) {
        chunk(begin, end);
        return;
    }

    const std::int64_t per = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = begin + w * per;
        const std::int64_t hi = std::min(end, lo + per);
        if (lo >= hi) break;
        threads.emplace_back([&chunk, lo, hi] { chunk(lo, hi); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace lahreg::util
