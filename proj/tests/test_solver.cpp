#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plad/convolution.hpp"
#include "plad/field.hpp"
#include "plad/functionals.hpp"
#include "plad/regime.hpp"
#include "plad/rng.hpp"
#include "plad/solver.hpp"

using namespace plad;
namespace fs = std::filesystem;

namespace {

template <class F>
ErrorCode thrown_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected plad::Error");
    return ErrorCode::InternalError;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "plad_test_solver") { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DensityField gaussian_field(int d, int n, double L, double sigma, double mass_target,
                            std::array<double, 2> center = {0.0, 0.0}) {
    GaussianMixture mix;
    mix.components.push_back(GaussianComponent{center, sigma, mass_target});
    return discretize(Profile{mix}, make_grid(d, n, L));
}

// Pure p-Laplacian flows at exponents outside the coupled model's admissible
// window (for example the plain heat equation p = 2 in one dimension) are
// still well-defined discrete flows; build the parameter record directly.
RegimeParams manual_params(int d, double p, double alpha, double lambda) {
    RegimeParams rp;
    rp.d = d;
    rp.p = p;
    rp.alpha = alpha;
    rp.lambda = lambda;
    rp.p_conj = p / (p - 1.0);
    rp.alpha_p = alpha_p(d, p);
    rp.k_lo = 0.0;
    rp.k_hi = 1.0;
    return rp;
}

double second_moment_1d(const DensityField& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        const double x = f.grid.coord(static_cast<int>(i));
        s += f.v[i] * x * x;
    }
    return s * f.grid.dx();
}

double mean_abs_x_1d(const DensityField& f) {
    double s = 0.0, m = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        s += f.v[i] * std::abs(f.grid.coord(static_cast<int>(i)));
        m += f.v[i];
    }
    return s / m;
}

}  // namespace

TEST_CASE("heat-equation steps grow the second moment by exactly 2 M dt") {
    // p = 2 makes the diffusive flux the plain central-difference heat
    // stencil; summation by parts then gives, for fields whose support does
    // not touch the boundary, an exact discrete identity per explicit step:
    //   sum x^2 rho dx increases by 2 * mass * dt.
    const Grid g = make_grid(1, 128, 8.0);
    IndicatorProfile box;
    box.lo = {-1.0, 0.0};
    box.hi = {1.0, 0.0};
    box.mass = 1.0;
    DensityField f = discretize(Profile{box}, g);

    SolverConfig cfg;
    cfg.params = manual_params(1, 2.0, 0.0, 0.0);
    cfg.grid = g;
    cfg.t_end = 1.0;  // unused by step()

    for (int s = 0; s < 3; ++s) {
        const double dt = cfl_dt(f, cfg, 0.0, nullptr);
        CHECK(dt == doctest::Approx(0.45 * g.dx() * g.dx() / 2.0).epsilon(1e-15));
        const double m2_before = second_moment_1d(f);
        const double m_before = mass(f);
        f = step(f, cfg, dt, nullptr, 0.0);
        CHECK(second_moment_1d(f) - m2_before == doctest::Approx(2.0 * m_before * dt).epsilon(1e-12));
        CHECK(mass(f) == doctest::Approx(m_before).epsilon(1e-14));
    }
}

TEST_CASE("cfl bound switches to the advective limit under fast transport") {
    // constant density: every face gradient vanishes, so with delta > 0 the
    // diffusive mobility is delta^(p-2) exactly, and with delta = 0 the
    // diffusive bound drops out entirely
    const Grid g = make_grid(1, 64, 8.0);
    DensityField flat = make_field(g);
    for (double& x : flat.v) x = 1.0;

    SolverConfig cfg;
    cfg.params = manual_params(1, 1.4, 0.5, 30.0);
    cfg.grid = g;

    const double delta = 0.1;
    const double phi0 = std::pow(delta * delta, 0.5 * (1.4 - 2.0));
    CHECK(cfl_dt(flat, cfg, delta, nullptr) ==
          doctest::Approx(0.45 * g.dx() * g.dx() / (2.0 * phi0)).epsilon(1e-14));

    VectorField vel = make_vector_field(g);
    for (double& x : vel.comp[0]) x = 2.0;
    CHECK(cfl_dt(flat, cfg, 0.0, &vel) == doctest::Approx(0.45 * g.dx() / (30.0 * 2.0)).epsilon(1e-12));
    CHECK(cfl_dt(flat, cfg, delta, &vel) ==
          doctest::Approx(0.45 * std::min(g.dx() * g.dx() / (2.0 * phi0), g.dx() / 60.0)).epsilon(1e-12));

    // the cap wins when both physical bounds are slack
    SolverConfig capped = cfg;
    capped.dt_cap = 1e-5;
    CHECK(cfl_dt(flat, capped, delta, nullptr) == 1e-5);
}

TEST_CASE("runs conserve mass to roundoff and keep the density nonnegative") {
    CounterRng rng{42, 0};
    const Grid g2 = make_grid(2, 48, 8.0);
    DensityField init2 = discretize(Profile{random_gaussian_mixture(rng, 2)}, g2);

    SolverConfig cfg2;
    cfg2.params = validate(2, 5.0 / 3.0, 1.0, 1.0);
    cfg2.grid = g2;
    cfg2.t_end = 1e-4;
    cfg2.diag_every = 2;
    const Trajectory tr2 = run(init2, cfg2);
    CHECK(tr2.status == RunStatus::ReachedTEnd);
    CHECK(tr2.t_final == doctest::Approx(1e-4).epsilon(1e-12));
    const double m0 = mass(init2);
    REQUIRE(tr2.rows.size() >= 2);
    for (std::size_t i = 0; i < tr2.rows.size(); ++i) {
        const auto& r = tr2.rows[i];
        CHECK(std::abs(r.mass - m0) <= 1e-12 * m0);
        CHECK(r.min_density >= 0.0);  // negatives beyond -1e-13 max throw; the rest are clipped
        if (i > 0) CHECK(r.t > tr2.rows[i - 1].t);
    }
    CHECK(tr2.rows.front().t == 0.0);
    CHECK(mass(tr2.final_field) == doctest::Approx(m0).epsilon(1e-12));
    CHECK(!tr2.boundary_mass_flagged);

    // same checks on a 1d aggregation run
    const Grid g1 = make_grid(1, 256, 8.0);
    DensityField init1 = gaussian_field(1, 256, 8.0, 0.8, 1.5);
    SolverConfig cfg1;
    cfg1.params = validate(1, 1.4, 0.5, 0.8);
    cfg1.grid = g1;
    cfg1.t_end = 5e-5;
    const Trajectory tr1 = run(init1, cfg1);
    CHECK(tr1.status == RunStatus::ReachedTEnd);
    const double m1 = mass(init1);
    for (const auto& r : tr1.rows) {
        CHECK(std::abs(r.mass - m1) <= 1e-12 * m1);
        CHECK(r.min_density >= 0.0);
    }
}

TEST_CASE("pure p-diffusion never increases the discrete entropy") {
    DensityField init = gaussian_field(1, 128, 8.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.params = p_heat_params(1, 1.4);
    cfg.grid = init.grid;
    cfg.t_end = 5e-4;
    cfg.diag_every = 3;
    const Trajectory tr = run(init, cfg);
    CHECK(tr.status == RunStatus::ReachedTEnd);
    REQUIRE(tr.rows.size() >= 4);
    for (std::size_t i = 1; i < tr.rows.size(); ++i)
        CHECK(tr.rows[i].entropy <= tr.rows[i - 1].entropy + 1e-12);
}

TEST_CASE("resolved run parameters follow the documented defaults") {
    DensityField init = gaussian_field(1, 128, 8.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.params = validate(1, 1.4, 0.5, 1.0);
    cfg.grid = init.grid;
    cfg.t_end = 1e-6;
    const Trajectory tr = run(init, cfg);
    CHECK(tr.eps_used == 2.0 * init.grid.dx());
    CHECK(tr.delta_used == doctest::Approx(1e-8 * max_value(init) / init.grid.dx()).epsilon(1e-15));
    CHECK(tr.k_used == doctest::Approx(0.5 * (cfg.params.k_lo + cfg.params.k_hi)).epsilon(1e-15));

    SolverConfig explicit_cfg = cfg;
    explicit_cfg.kernel_eps = 0.3;
    explicit_cfg.delta = 1e-5;
    explicit_cfg.moment_k = 0.7;
    const Trajectory tre = run(init, explicit_cfg);
    CHECK(tre.eps_used == 0.3);
    CHECK(tre.delta_used == 1e-5);
    CHECK(tre.k_used == 0.7);
}

TEST_CASE("density crossing rho_max stops the run with the blow-up indicator") {
    // strong attraction, mild p = 2 diffusion: the peak grows within a step
    DensityField init = gaussian_field(1, 64, 8.0, 0.5, 5.0);
    SolverConfig cfg;
    cfg.params = manual_params(1, 2.0, 0.5, 5.0);
    cfg.grid = init.grid;
    cfg.t_end = 0.5;
    cfg.moment_k = 1.0;
    cfg.rho_max = 1.02 * max_value(init);
    cfg.diag_every = 1;
    const Trajectory tr = run(init, cfg);
    CHECK(tr.status == RunStatus::BlowUpIndicator);
    CHECK(tr.t_final < 0.5);
    CHECK(tr.steps >= 1);
    CHECK(tr.rows.back().max_density > cfg.rho_max);
}

TEST_CASE("a time step below dt_min stops the run as a collapse") {
    DensityField init = gaussian_field(1, 64, 8.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.params = manual_params(1, 2.0, 0.0, 0.0);
    cfg.grid = init.grid;
    cfg.t_end = 1.0;
    cfg.moment_k = 1.0;
    cfg.dt_min = 1.0;  // above any admissible explicit step
    const Trajectory tr = run(init, cfg);
    CHECK(tr.status == RunStatus::DtCollapse);
    CHECK(tr.steps == 0);
    CHECK(tr.t_final == 0.0);
    CHECK(tr.rows.size() == 1);
}

TEST_CASE("two separated bumps drift toward each other under aggregation") {
    GaussianMixture mix;
    mix.components.push_back(GaussianComponent{{-2.0, 0.0}, 0.3, 3.0});
    mix.components.push_back(GaussianComponent{{2.0, 0.0}, 0.3, 3.0});
    DensityField init = discretize(Profile{mix}, make_grid(1, 128, 8.0));

    SolverConfig cfg;
    cfg.params = validate(1, 1.4, 0.5, 10.0);
    cfg.grid = init.grid;
    cfg.t_end = 5e-3;
    cfg.delta = 1e-4;  // keep the diffusive CFL bound from dwarfing the advective one
    const Trajectory tr = run(init, cfg);
    CHECK(tr.status == RunStatus::ReachedTEnd);
    CHECK(mean_abs_x_1d(tr.final_field) < mean_abs_x_1d(init) - 1e-3);
    CHECK(mass(tr.final_field) == doctest::Approx(mass(init)).epsilon(1e-12));
}

TEST_CASE("mass reaching the outermost cells raises the boundary flag") {
    // sigma = 4 on a half-width-8 box: the edge cells carry ~0.7% of the mass
    DensityField wide = gaussian_field(1, 64, 8.0, 4.0, 1.0);
    SolverConfig cfg;
    cfg.params = p_heat_params(1, 1.4);
    cfg.grid = wide.grid;
    cfg.t_end = 1e-4;
    cfg.delta = 1e-3;
    const Trajectory tr = run(wide, cfg);
    CHECK(tr.boundary_mass_flagged);
    CHECK(tr.boundary_mass_peak >= 1e-3);

    DensityField contained = gaussian_field(1, 64, 8.0, 0.5, 1.0);
    const Trajectory trc = run(contained, cfg);
    CHECK(!trc.boundary_mass_flagged);
    CHECK(trc.boundary_mass_peak < 1e-10);
}

TEST_CASE("snapshots capture the first state at or past each requested time") {
    DensityField init = gaussian_field(1, 128, 8.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.params = p_heat_params(1, 1.4);
    cfg.grid = init.grid;
    cfg.t_end = 1e-4;
    cfg.snapshot_times = {5e-5, 0.0, 2.0};  // unsorted on purpose; 2.0 is past t_end
    const Trajectory tr = run(init, cfg);
    CHECK(tr.status == RunStatus::ReachedTEnd);
    REQUIRE(tr.snapshots.size() == 2);
    CHECK(tr.snapshots[0].first == 0.0);
    CHECK(tr.snapshots[0].second.v == init.v);  // captured before any step
    CHECK(tr.snapshots[1].first >= 5e-5 * (1.0 - 1e-12));
    CHECK(tr.snapshots[1].first <= tr.t_final);
    CHECK(mass(tr.snapshots[1].second) == doctest::Approx(mass(init)).epsilon(1e-12));
}

TEST_CASE("mass sweep rescales to each multiple of the critical mass in order") {
    DensityField init = gaussian_field(2, 48, 8.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.params = validate(2, 5.0 / 3.0, 1.0, 1.0);
    cfg.grid = init.grid;
    cfg.t_end = 1e-5;
    const std::vector<double> mult = {0.5, 2.0, 1.0};
    const std::vector<SweepRow> rows = sweep_masses(init, cfg, mult);
    REQUIRE(rows.size() == 3);
    const double mc = critical_mass(cfg.params).m_c;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].multiplier == mult[i]);
        CHECK(rows[i].m0 == doctest::Approx(mult[i] * mc).epsilon(1e-12));
        CHECK(rows[i].m0_over_mc == doctest::Approx(mult[i]).epsilon(1e-12));
        CHECK(rows[i].status == RunStatus::ReachedTEnd);
        CHECK(rows[i].t_final == doctest::Approx(1e-5).epsilon(1e-12));
        CHECK(rows[i].max_density > 0.0);
    }
    CHECK(thrown_code([&] { sweep_masses(init, cfg, {}); }) == ErrorCode::BadArgument);
    CHECK(thrown_code([&] { sweep_masses(init, cfg, {1.0, -2.0}); }) == ErrorCode::BadArgument);
}

TEST_CASE("trajectory and sweep csv files carry the documented layout") {
    TempDir tmp;
    DensityField init = gaussian_field(1, 64, 8.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.params = p_heat_params(1, 1.4);
    cfg.grid = init.grid;
    cfg.t_end = 5e-5;
    cfg.diag_every = 2;
    const Trajectory tr = run(init, cfg);

    const fs::path csv = tmp.path / "traj.csv";
    write_trajectory_csv(csv.string(), tr, "cafe0123");
    const std::vector<std::string> lines = read_lines(csv);
    REQUIRE(lines.size() == tr.rows.size() + 2);
    CHECK(lines[0] == "t,dt,mass,min_density,max_density,entropy,p_fisher,moment_k,interaction,residual,status");
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        const bool last_row = i + 2 == lines.size();
        CHECK(lines[i].find(last_row ? ",ReachedTEnd" : ",Running") != std::string::npos);
    }
    CHECK(lines.back().rfind("# config_hash=cafe0123 status=ReachedTEnd steps=", 0) == 0);
    CHECK(lines.back().find(" boundary_mass_peak=") != std::string::npos);

    // identical inputs produce byte-identical output
    const Trajectory tr2 = run(init, cfg);
    CHECK(tr2.final_field.v == tr.final_field.v);
    const fs::path csv2 = tmp.path / "traj2.csv";
    write_trajectory_csv(csv2.string(), tr2, "cafe0123");
    CHECK(slurp(csv2) == slurp(csv));

    DensityField init2 = gaussian_field(2, 32, 8.0, 1.0, 1.0);
    SolverConfig scfg;
    scfg.params = validate(2, 5.0 / 3.0, 1.0, 1.0);
    scfg.grid = init2.grid;
    scfg.t_end = 1e-5;
    const std::vector<SweepRow> rows = sweep_masses(init2, scfg, {0.5, 1.0});
    const fs::path sweep = tmp.path / "sweep.csv";
    write_sweep_csv(sweep.string(), rows, "beef4567");
    const std::vector<std::string> slines = read_lines(sweep);
    REQUIRE(slines.size() == 4);
    CHECK(slines[0] == "multiplier,m0,m0_over_mc,status,max_entropy,max_density,t_final,boundary_mass_flagged");
    CHECK(slines[1].rfind("0.5,", 0) == 0);
    CHECK(slines[2].rfind("1,", 0) == 0);
    CHECK(slines[3].rfind("# config_hash=beef4567", 0) == 0);
}

TEST_CASE("serial reference fluxes and steps agree bit for bit") {
    CounterRng rng{7, 0};
    const Grid g = make_grid(2, 32, 8.0);
    DensityField f = discretize(Profile{random_gaussian_mixture(rng, 2)}, g);
    ConvolutionEngine engine(g, KernelSpec{1.0, 2.0 * g.dx()});
    const VectorField vel = engine.velocity(f);

    const FaceFlux fd = diffusive_flux(f, 5.0 / 3.0, 1e-6);
    const FaceFlux fdr = ref::diffusive_flux(f, 5.0 / 3.0, 1e-6);
    CHECK(fd.axis[0] == fdr.axis[0]);
    CHECK(fd.axis[1] == fdr.axis[1]);

    const FaceFlux fa = aggregation_flux(f, vel, 1.0);
    const FaceFlux far = ref::aggregation_flux(f, vel, 1.0);
    CHECK(fa.axis[0] == far.axis[0]);
    CHECK(fa.axis[1] == far.axis[1]);

    SolverConfig cfg;
    cfg.params = validate(2, 5.0 / 3.0, 1.0, 1.0);
    cfg.grid = g;
    cfg.t_end = 1.0;
    const DensityField s = step(f, cfg, 1e-6, &vel, 1e-6);
    const DensityField sr = ref::step(f, cfg, 1e-6, &vel, 1e-6);
    CHECK(s.v == sr.v);
}

TEST_CASE("ill-posed solver configurations are rejected up front") {
    DensityField init = gaussian_field(1, 64, 8.0, 1.0, 1.0);
    SolverConfig good;
    good.params = p_heat_params(1, 1.4);
    good.grid = init.grid;
    good.t_end = 1e-4;

    auto with = [&](auto&& tweak) {
        SolverConfig c = good;
        tweak(c);
        return thrown_code([&] { run(init, c); });
    };
    CHECK(with([&](SolverConfig& c) { c.grid = make_grid(1, 32, 8.0); }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.params = validate(2, 5.0 / 3.0, 1.0, 1.0); }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.t_end = 0.0; }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.cfl = 0.0; }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.cfl = 1.5; }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.dt_min = 0.0; }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.dt_cap = 0.0; }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.diag_every = 0; }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.rho_max = max_value(init); }) == ErrorCode::BadArgument);
    CHECK(with([&](SolverConfig& c) { c.params.lambda = -1.0; }) == ErrorCode::NonpositiveLambda);

    DensityField zero = make_field(init.grid);
    CHECK(thrown_code([&] { run(zero, good); }) == ErrorCode::BadArgument);

    // flux-level guards
    CHECK(thrown_code([&] { diffusive_flux(init, 1.0, 0.0); }) == ErrorCode::POutOfWindow);
    CHECK(thrown_code([&] { diffusive_flux(init, 1.4, -1.0); }) == ErrorCode::BadArgument);
    VectorField vel = make_vector_field(make_grid(1, 32, 8.0));
    CHECK(thrown_code([&] { aggregation_flux(init, vel, 1.0); }) == ErrorCode::BadArgument);
}
