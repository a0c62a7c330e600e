#pragma once

#include <cstddef>

#include "plad/errors.hpp"

namespace plad {

// Uniform cell-centered grid on [-L, L]^d with d in {1, 2} and n cells per
// axis. Cell centers sit at -L + (i + 1/2) dx. Storage is row-major with the
// first axis slow: linear index = i1 * n + i2 for d = 2.
struct Grid {
    int d = 1;
    int n = 0;
    double half_width = 0.0;

    double dx() const { return 2.0 * half_width / n; }
    std::size_t size() const { return d == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n); }
    double coord(int i) const { return -half_width + (i + 0.5) * dx(); }
    std::size_t index(int i1, int i2 = 0) const {
        return d == 1 ? std::size_t(i1) : std::size_t(i1) * std::size_t(n) + std::size_t(i2);
    }
    bool operator==(const Grid&) const = default;
};

inline Grid make_grid(int d, int n, double half_width) {
    if (d != 1 && d != 2) fail(ErrorCode::InvalidDimension, "grid dimension must be 1 or 2");
    if (n < 4) fail(ErrorCode::BadArgument, "grid needs at least 4 cells per axis");
    if (!(half_width > 0.0)) fail(ErrorCode::BadArgument, "grid half width must be positive");
    return Grid{d, n, half_width};
}

}  // namespace plad
