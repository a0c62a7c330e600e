#pragma once

#include <vector>

#include <fftw3.h>

#include "plad/field.hpp"
#include "plad/grid.hpp"

namespace plad {

// Attraction kernel K(z) = z / |z|^alpha, regularized inside radius eps to
// K(z) = z * eps^{-alpha} (so K(0) = 0). eps <= 0 in a config means "use the
// default 2 dx", resolved before construction.
struct KernelSpec {
    double alpha = 0.0;
    double eps = 0.0;
};

// Direct O(N^2) discrete free-space convolution
//     v(x_i) = sum_j K(x_i - x_j) rho_j dx^d
// via a precomputed kernel table over all cell offsets. Parallel over target
// cells with a serial inner sum in fixed index order, so the result is bit
// identical to the serial reference below.
VectorField attraction_velocity(const DensityField& field, const KernelSpec& kernel);

namespace ref {
VectorField attraction_velocity(const DensityField& field, const KernelSpec& kernel);
}

// Zero-padded FFT convolution on the same sampled kernels. Padding to 2n per
// axis makes the circular convolution equal the free-space sum exactly; the
// only disagreement with the direct path is roundoff (<= 1e-10 relative).
// Plans use FFTW_ESTIMATE so planning is deterministic; one engine serves
// one grid/kernel pair and is not thread-safe.
class ConvolutionEngine {
  public:
    ConvolutionEngine(const Grid& grid, const KernelSpec& kernel);
    ~ConvolutionEngine();
    ConvolutionEngine(const ConvolutionEngine&) = delete;
    ConvolutionEngine& operator=(const ConvolutionEngine&) = delete;

    const KernelSpec& kernel() const { return kernel_; }

    // (K * rho)(x_i) with the vector kernel above; includes the dx^d weight.
    VectorField velocity(const DensityField& field);

    // (W * rho)(x_i) with the scalar kernel W(z) = |z|^{-alpha} for z != 0
    // and W(0) = eps^{-alpha}; feeds the interaction-energy fast path.
    std::vector<double> potential(const DensityField& field);

  private:
    void forward_density(const DensityField& field);
    fftw_complex* kernel_spectrum(int comp);  // comp 0/1 = vector, -1 = scalar
    void inverse_into(std::vector<double>& out);

    Grid grid_;
    KernelSpec kernel_;
    int m_ = 0;               // padded axis length (2n)
    std::size_t nreal_ = 0;   // padded real array size
    std::size_t ncplx_ = 0;   // r2c spectrum size
    double* pad_ = nullptr;
    fftw_complex* spec_density_ = nullptr;
    fftw_complex* spec_product_ = nullptr;
    fftw_complex* spec_kernel_[3] = {nullptr, nullptr, nullptr};  // [2] = scalar
    fftw_plan fwd_ = nullptr;
    fftw_plan inv_ = nullptr;
};

}  // namespace plad
