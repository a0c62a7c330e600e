// Timing harness for the OpenMP kernels against their serial reference
// implementations, plus direct vs FFT convolution. Each pair reports the
// best-of-repeats wall time, the speedup, and the worst disagreement
// (the parallel reductions are designed to be bit-identical to the serial
// ones; the FFT path is only roundoff-close to the direct sum).
//
// Usage: plad_bench [n] [repeats]     (defaults: n = 128, repeats = 5)

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "plad/convolution.hpp"
#include "plad/field.hpp"
#include "plad/functionals.hpp"
#include "plad/regime.hpp"
#include "plad/rng.hpp"
#include "plad/solver.hpp"

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double time_best(int repeats, const std::function<void()>& fn) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const double t0 = now_s();
        fn();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

void report(const std::string& name, double t_ref, double t_par, double max_diff) {
    std::printf("%-28s serial %10.4f ms   parallel %10.4f ms   speedup %5.2fx   max|diff| %.3e\n", name.c_str(),
                1e3 * t_ref, 1e3 * t_par, t_ref / t_par, max_diff);
}

double field_diff(const plad::DensityField& a, const plad::DensityField& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
    return worst;
}

double vector_diff(const plad::VectorField& a, const plad::VectorField& b, int d) {
    double worst = 0.0;
    for (int c = 0; c < d; ++c)
        for (std::size_t i = 0; i < a.comp[c].size(); ++i)
            worst = std::max(worst, std::abs(a.comp[c][i] - b.comp[c][i]));
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 128;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
    std::printf("d=2 grid %dx%d, %d repeats, omp_get_max_threads=%d\n\n", n, n, repeats, omp_get_max_threads());

    const plad::Grid grid = plad::make_grid(2, n, 8.0);
    plad::CounterRng rng{12345, 0};
    const plad::DensityField field = plad::discretize(plad::Profile{plad::random_gaussian_mixture(rng, 2)}, grid);
    const plad::KernelSpec kernel{1.0, 2.0 * grid.dx()};
    const double p = 5.0 / 3.0;

    {
        double mp = 0, mr = 0;
        const double tp = time_best(repeats, [&] { mp = plad::mass(field); });
        const double tr = time_best(repeats, [&] { mr = plad::ref::mass(field); });
        report("mass (blocked sum)", tr, tp, std::abs(mp - mr));
    }
    {
        plad::VectorField gp, gr;
        const double tp = time_best(repeats, [&] { gp = plad::gradient(field); });
        const double tr = time_best(repeats, [&] { gr = plad::ref::gradient(field); });
        report("gradient", tr, tp, vector_diff(gp, gr, 2));
    }
    {
        double ep = 0, er = 0;
        const double tp = time_best(repeats, [&] { ep = plad::entropy(field); });
        const double tr = time_best(repeats, [&] { er = plad::ref::entropy(field); });
        report("entropy", tr, tp, std::abs(ep - er));
    }
    {
        double fp = 0, fr = 0;
        const double tp = time_best(repeats, [&] { fp = plad::p_fisher(field, p); });
        const double tr = time_best(repeats, [&] { fr = plad::ref::p_fisher(field, p); });
        report("p-Fisher", tr, tp, std::abs(fp - fr));
    }
    {
        plad::FaceFlux dp, dr;
        const double tp = time_best(repeats, [&] { dp = plad::diffusive_flux(field, p, 1e-8); });
        const double tr = time_best(repeats, [&] { dr = plad::ref::diffusive_flux(field, p, 1e-8); });
        double worst = 0.0;
        for (int axis = 0; axis < 2; ++axis)
            for (std::size_t i = 0; i < dp.axis[axis].size(); ++i)
                worst = std::max(worst, std::abs(dp.axis[axis][i] - dr.axis[axis][i]));
        report("diffusive flux", tr, tp, worst);
    }
    {
        plad::VectorField vp, vr;
        const double tp = time_best(repeats, [&] { vp = plad::attraction_velocity(field, kernel); });
        const double tr = time_best(repeats, [&] { vr = plad::ref::attraction_velocity(field, kernel); });
        report("velocity (direct O(N^2))", tr, tp, vector_diff(vp, vr, 2));
    }
    {
        plad::ConvolutionEngine engine(grid, kernel);
        plad::VectorField vf;
        const double tf = time_best(repeats, [&] { vf = engine.velocity(field); });
        const plad::VectorField vd = plad::attraction_velocity(field, kernel);
        std::printf("%-28s direct %10.4f ms   fft      %10.4f ms   max|diff| %.3e\n", "velocity (fft vs direct)",
                    1e3 * time_best(repeats, [&] { plad::attraction_velocity(field, kernel); }), 1e3 * tf,
                    vector_diff(vf, vd, 2));
    }
    {
        double ip = 0, ir = 0;
        const double tp = time_best(repeats, [&] { ip = plad::interaction_energy(field, kernel); });
        const double tr = time_best(repeats, [&] { ir = plad::ref::interaction_energy(field, kernel); });
        report("interaction (direct)", tr, tp, std::abs(ip - ir));
        plad::ConvolutionEngine engine(grid, kernel);
        double iff = 0;
        const double tf = time_best(repeats, [&] { iff = plad::interaction_energy(field, engine); });
        std::printf("%-28s direct %10.4f ms   fft      %10.4f ms   rel diff  %.3e\n", "interaction (fft vs direct)",
                    1e3 * tp, 1e3 * tf, std::abs(iff - ip) / std::abs(ip));
    }
    {
        plad::SolverConfig cfg;
        cfg.params = plad::validate(2, p, 1.0, 1.0);
        cfg.grid = grid;
        cfg.t_end = 1.0;  // unused by single steps
        const double delta = 1e-8 * plad::max_value(field) / grid.dx();
        const plad::VectorField vel = plad::attraction_velocity(field, kernel);
        const double dt = plad::cfl_dt(field, cfg, delta, &vel);
        plad::DensityField sp, sr;
        const double tp = time_best(repeats, [&] { sp = plad::step(field, cfg, dt, &vel, delta); });
        const double tr = time_best(repeats, [&] { sr = plad::ref::step(field, cfg, dt, &vel, delta); });
        report("full solver step", tr, tp, field_diff(sp, sr));
    }
    return 0;
}
