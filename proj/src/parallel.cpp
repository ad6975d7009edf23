#include <astroimg/parallel.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace astroimg {

namespace {
std::atomic<int> gThreads{1};
}

void setThreadCount(int n) { gThreads.store(std::max(1, n)); }

int threadCount() { return gThreads.load(); }

void parallelFor(int n, const std::function<void(int, int)>& body) {
    if (n <= 0) return;
    const int workers = std::min(threadCount(), n);
    if (workers <= 1) {
        body(0, n);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
            const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
            pool.emplace_back([&, w, begin, end] {
                try {
                    body(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace astroimg
