#pragma once

// Compensated accumulation and an order-stable parallel reduction.
//
// Work is split into blocks whose boundaries never depend on the number of
// workers; each block is reduced sequentially and the block partials are then
// combined in block order. Results are therefore bit-identical for any
// worker count.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace lhmf {

/// Neumaier (improved Kahan-Babuska) summation of doubles.
class compensated_sum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class compensated_complex_sum {
public:
    void add(std::complex<double> z)
    {
        re_.add(z.real());
        im_.add(z.imag());
    }

    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    compensated_sum re_;
    compensated_sum im_;
};

/// Worker count, capped by the LHMF_NUM_THREADS environment variable.
inline unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("LHMF_NUM_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception &) {
        }
    }
    return n;
}

/// Evaluate `block(i)` for i in [0, n_blocks) on the worker pool and return
/// the results in index order. Exceptions thrown by any block are rethrown
/// (the one from the lowest block index wins).
template <class Result, class Fn>
std::vector<Result> parallel_blocks(std::size_t n_blocks, Fn &&block)
{
    std::vector<Result> out(n_blocks);
    std::vector<std::exception_ptr> errors(n_blocks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(n_blocks, 1)));
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < n_blocks; i += workers) {
            try {
                out[i] = block(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace lhmf
