#include "plad/convolution.hpp"

#include <cmath>
#include <cstring>

#include "plad/errors.hpp"

namespace plad {
namespace {

void check_kernel(const KernelSpec& kernel) {
    if (!(kernel.alpha > 0.0)) fail(ErrorCode::AlphaOutOfRange, "kernel alpha must be positive");
    if (!(kernel.eps > 0.0)) fail(ErrorCode::BadArgument, "kernel eps must be positive (resolve defaults first)");
}

// |z|^{-alpha} clamped to eps^{-alpha} inside the regularization radius;
// this magnitude multiplies z itself for the vector kernel, so K(0) = 0.
double vector_magnitude(const KernelSpec& k, double r) {
    return std::pow(r >= k.eps ? r : k.eps, -k.alpha);
}

// Kernel values over every cell offset, so the O(N^2) sum never re-evaluates
// pow. Offset o in [-(n-1), n-1] per axis lives at o + n - 1.
std::vector<double> offset_table_1d(const Grid& g, const KernelSpec& k, int comp) {
    const int n = g.n;
    std::vector<double> tab(static_cast<std::size_t>(2 * n - 1));
#pragma omp parallel for schedule(static)
    for (int o = -(n - 1); o <= n - 1; ++o) {
        const double z = o * g.dx();
        tab[static_cast<std::size_t>(o + n - 1)] = comp == 0 ? z * vector_magnitude(k, std::abs(z)) : 0.0;
    }
    return tab;
}

std::vector<double> offset_table_2d(const Grid& g, const KernelSpec& k, int comp) {
    const int n = g.n;
    const int w = 2 * n - 1;
    std::vector<double> tab(static_cast<std::size_t>(w) * static_cast<std::size_t>(w));
#pragma omp parallel for schedule(static)
    for (int o1 = -(n - 1); o1 <= n - 1; ++o1) {
        for (int o2 = -(n - 1); o2 <= n - 1; ++o2) {
            const double z1 = o1 * g.dx(), z2 = o2 * g.dx();
            const double mag = vector_magnitude(k, std::hypot(z1, z2));
            tab[static_cast<std::size_t>(o1 + n - 1) * w + static_cast<std::size_t>(o2 + n - 1)] =
                (comp == 0 ? z1 : z2) * mag;
        }
    }
    return tab;
}

template <bool Parallel>
VectorField direct_velocity(const DensityField& field, const KernelSpec& kernel) {
    check_kernel(kernel);
    const Grid& g = field.grid;
    VectorField out = make_vector_field(g);
    const double cell = std::pow(g.dx(), g.d);
    const int n = g.n;
    if (g.d == 1) {
        const std::vector<double> tab = offset_table_1d(g, kernel, 0);
#pragma omp parallel for schedule(static) if (Parallel)
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = tab.data() + (i + n - 1);
            for (int j = 0; j < n; ++j) acc += row[-j] * field.v[static_cast<std::size_t>(j)];
            out.comp[0][static_cast<std::size_t>(i)] = acc * cell;
        }
        return out;
    }
    const std::vector<double> tab0 = offset_table_2d(g, kernel, 0);
    const std::vector<double> tab1 = offset_table_2d(g, kernel, 1);
    const int w = 2 * n - 1;
#pragma omp parallel for schedule(static) if (Parallel)
    for (int i1 = 0; i1 < n; ++i1) {
        for (int i2 = 0; i2 < n; ++i2) {
            double acc0 = 0.0, acc1 = 0.0;
            for (int j1 = 0; j1 < n; ++j1) {
                const std::size_t trow = static_cast<std::size_t>(i1 - j1 + n - 1) * w + (i2 + n - 1);
                const double* t0 = tab0.data() + trow;
                const double* t1 = tab1.data() + trow;
                const double* rho = field.v.data() + static_cast<std::size_t>(j1) * n;
                for (int j2 = 0; j2 < n; ++j2) {
                    acc0 += t0[-j2] * rho[j2];
                    acc1 += t1[-j2] * rho[j2];
                }
            }
            const std::size_t idx = g.index(i1, i2);
            out.comp[0][idx] = acc0 * cell;
            out.comp[1][idx] = acc1 * cell;
        }
    }
    return out;
}

}  // namespace

VectorField attraction_velocity(const DensityField& field, const KernelSpec& kernel) {
    return direct_velocity<true>(field, kernel);
}

namespace ref {
VectorField attraction_velocity(const DensityField& field, const KernelSpec& kernel) {
    return direct_velocity<false>(field, kernel);
}
}  // namespace ref

ConvolutionEngine::ConvolutionEngine(const Grid& grid, const KernelSpec& kernel) : grid_(grid), kernel_(kernel) {
    check_kernel(kernel_);
    m_ = 2 * grid_.n;
    const std::size_t m = static_cast<std::size_t>(m_);
    if (grid_.d == 1) {
        nreal_ = m;
        ncplx_ = m / 2 + 1;
    } else {
        nreal_ = m * m;
        ncplx_ = m * (m / 2 + 1);
    }
    pad_ = fftw_alloc_real(nreal_);
    spec_density_ = fftw_alloc_complex(ncplx_);
    spec_product_ = fftw_alloc_complex(ncplx_);
    if (!pad_ || !spec_density_ || !spec_product_) fail(ErrorCode::InternalError, "fftw allocation failed");
    if (grid_.d == 1) {
        fwd_ = fftw_plan_dft_r2c_1d(m_, pad_, spec_density_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(m_, spec_product_, pad_, FFTW_ESTIMATE);
    } else {
        fwd_ = fftw_plan_dft_r2c_2d(m_, m_, pad_, spec_density_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_2d(m_, m_, spec_product_, pad_, FFTW_ESTIMATE);
    }
    if (!fwd_ || !inv_) fail(ErrorCode::InternalError, "fftw planning failed");
    for (int a = 0; a < grid_.d; ++a) kernel_spectrum(a);
}

ConvolutionEngine::~ConvolutionEngine() {
    for (auto* s : spec_kernel_)
        if (s) fftw_free(s);
    if (fwd_) fftw_destroy_plan(fwd_);
    if (inv_) fftw_destroy_plan(inv_);
    if (pad_) fftw_free(pad_);
    if (spec_density_) fftw_free(spec_density_);
    if (spec_product_) fftw_free(spec_product_);
}

fftw_complex* ConvolutionEngine::kernel_spectrum(int comp) {
    const int slot = comp < 0 ? 2 : comp;
    if (spec_kernel_[slot]) return spec_kernel_[slot];
    fftw_complex* spec = fftw_alloc_complex(ncplx_);
    if (!spec) fail(ErrorCode::InternalError, "fftw allocation failed");

    // Sample the kernel on offsets (-n, n) per axis, wrapped periodically
    // into the padded array; index n (offset +-n) is never used and stays 0.
    std::memset(pad_, 0, nreal_ * sizeof(double));
    const int n = grid_.n;
    const double dx = grid_.dx();
    auto wrapped = [&](int o) { return static_cast<std::size_t>((o + m_) % m_); };
    if (grid_.d == 1) {
        for (int o = -(n - 1); o <= n - 1; ++o) {
            const double z = o * dx;
            const double r = std::abs(z);
            double val;
            if (comp < 0)
                val = r == 0.0 ? std::pow(kernel_.eps, -kernel_.alpha) : std::pow(r, -kernel_.alpha);
            else
                val = z * vector_magnitude(kernel_, r);
            pad_[wrapped(o)] = val;
        }
    } else {
        for (int o1 = -(n - 1); o1 <= n - 1; ++o1) {
            for (int o2 = -(n - 1); o2 <= n - 1; ++o2) {
                const double z1 = o1 * dx, z2 = o2 * dx;
                const double r = std::hypot(z1, z2);
                double val;
                if (comp < 0)
                    val = r == 0.0 ? std::pow(kernel_.eps, -kernel_.alpha) : std::pow(r, -kernel_.alpha);
                else
                    val = (comp == 0 ? z1 : z2) * vector_magnitude(kernel_, r);
                pad_[wrapped(o1) * m_ + wrapped(o2)] = val;
            }
        }
    }
    fftw_execute_dft_r2c(fwd_, pad_, spec);
    spec_kernel_[slot] = spec;
    return spec;
}

void ConvolutionEngine::forward_density(const DensityField& field) {
    if (!(field.grid == grid_)) fail(ErrorCode::BadArgument, "field grid does not match convolution engine");
    std::memset(pad_, 0, nreal_ * sizeof(double));
    const int n = grid_.n;
    if (grid_.d == 1) {
        std::memcpy(pad_, field.v.data(), static_cast<std::size_t>(n) * sizeof(double));
    } else {
        for (int i = 0; i < n; ++i)
            std::memcpy(pad_ + static_cast<std::size_t>(i) * m_, field.v.data() + static_cast<std::size_t>(i) * n,
                        static_cast<std::size_t>(n) * sizeof(double));
    }
    fftw_execute(fwd_);
}

void ConvolutionEngine::inverse_into(std::vector<double>& out) {
    fftw_execute(inv_);
    const int n = grid_.n;
    const double scale = std::pow(grid_.dx(), grid_.d) / static_cast<double>(nreal_);
    out.resize(grid_.size());
    if (grid_.d == 1) {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = pad_[i] * scale;
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out[grid_.index(i, j)] = pad_[static_cast<std::size_t>(i) * m_ + j] * scale;
    }
}

VectorField ConvolutionEngine::velocity(const DensityField& field) {
    forward_density(field);
    VectorField out = make_vector_field(grid_);
    for (int a = 0; a < grid_.d; ++a) {
        const fftw_complex* ks = kernel_spectrum(a);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ncplx_); ++i) {
            const double ar = spec_density_[i][0], ai = spec_density_[i][1];
            const double br = ks[i][0], bi = ks[i][1];
            spec_product_[i][0] = ar * br - ai * bi;
            spec_product_[i][1] = ar * bi + ai * br;
        }
        inverse_into(out.comp[static_cast<std::size_t>(a)]);
    }
    return out;
}

std::vector<double> ConvolutionEngine::potential(const DensityField& field) {
    forward_density(field);
    const fftw_complex* ks = kernel_spectrum(-1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ncplx_); ++i) {
        const double ar = spec_density_[i][0], ai = spec_density_[i][1];
        const double br = ks[i][0], bi = ks[i][1];
        spec_product_[i][0] = ar * br - ai * bi;
        spec_product_[i][1] = ar * bi + ai * br;
    }
    std::vector<double> out;
    inverse_into(out);
    return out;
}

}  // namespace plad
