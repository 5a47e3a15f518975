#pragma once

// Compensated (double-double) accumulation, a fixed-shape pairwise reduction,
// and a small work-sharing loop. Results never depend on the worker count:
// workers only decide who fills which slot, the reduction order is fixed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace hsum {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    DoubleDouble() = default;
    DoubleDouble(double v) : hi(v) {}  // NOLINT
    DoubleDouble(double h, double l) : hi(h), lo(l) {}

    // Knuth TwoSum
    static DoubleDouble two_sum(double a, double b) {
        const double s = a + b;
        const double bb = s - a;
        const double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }

    DoubleDouble& operator+=(double x) {
        const DoubleDouble s = two_sum(hi, x);
        const double lo2 = lo + s.lo;
        *this = two_sum(s.hi, lo2);
        return *this;
    }

    DoubleDouble& operator+=(const DoubleDouble& x) {
        const DoubleDouble s = two_sum(hi, x.hi);
        const double lo2 = lo + x.lo + s.lo;
        *this = two_sum(s.hi, lo2);
        return *this;
    }

    DoubleDouble scaled(double factor) const {
        // exact for powers of two, which is the only use inside the library
        return {hi * factor, lo * factor};
    }

    double value() const { return hi + lo; }
    long double long_value() const { return static_cast<long double>(hi) + static_cast<long double>(lo); }
};

/// Balanced binary-tree sum whose shape depends only on values.size().
inline DoubleDouble pairwise_sum(std::span<const DoubleDouble> values) {
    if (values.empty()) return {};
    if (values.size() == 1) return values[0];
    const std::size_t mid = values.size() / 2;
    DoubleDouble left = pairwise_sum(values.first(mid));
    left += pairwise_sum(values.subspan(mid));
    return left;
}

/**
 * Calls fn(i) for i in [0, count) on up to `workers` threads. The first
 * exception thrown by any call is rethrown on the calling thread.
 */
inline void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    pool.clear();  // joins
    if (failure) std::rethrow_exception(failure);
}

} // namespace hsum
