#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace plad {

// Deterministic reductions: terms are accumulated serially inside fixed-size
// blocks and the block sums are combined in index order. Only the block loop
// is parallelized, so the floating-point result is independent of the thread
// count (and matches the serial reference in plad::ref bit for bit).
inline constexpr std::size_t kReduceBlock = 4096;

template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(n, lo + kReduceBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

// max is exactly associative, so a plain OpenMP reduction is already
// deterministic; kept in the same style for symmetry.
template <class Term>
double max_reduce(std::size_t n, Term&& term) {
    double m = term(0);
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::ptrdiff_t i = 1; i < static_cast<std::ptrdiff_t>(n); ++i)
        m = std::max(m, term(static_cast<std::size_t>(i)));
    return m;
}

namespace ref {

// Serial reference with the identical blocked accumulation order.
template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = std::min(n, lo + kReduceBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

template <class Term>
double max_reduce(std::size_t n, Term&& term) {
    double m = term(0);
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, term(i));
    return m;
}

}  // namespace ref
}  // namespace plad
