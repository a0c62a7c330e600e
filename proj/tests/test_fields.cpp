#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "plad/field.hpp"
#include "plad/field_io.hpp"
#include "plad/rng.hpp"

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

DensityField unit_gaussian(int d, int n, double L) {
    GaussianMixture mix;
    mix.components.push_back(GaussianComponent{{0.0, 0.0}, 1.0, 1.0});
    return discretize(Profile{mix}, make_grid(d, n, L));
}

struct TempDir {
    fs::path dir;
    TempDir() : dir(fs::temp_directory_path() / "plad_test_fields") { fs::create_directories(dir); }
    ~TempDir() { std::error_code ec; fs::remove_all(dir, ec); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::string& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("grid geometry and construction guards") {
    const Grid g = make_grid(1, 8, 4.0);
    CHECK(g.dx() == 1.0);
    CHECK(g.coord(0) == -3.5);
    CHECK(g.coord(7) == 3.5);
    CHECK(g.size() == 8);

    const Grid h = make_grid(2, 16, 8.0);
    CHECK(h.dx() == 1.0);
    CHECK(h.size() == 256);
    CHECK(h.index(3, 5) == 3 * 16 + 5);

    CHECK(thrown_code([] { make_grid(3, 8, 4.0); }) == ErrorCode::InvalidDimension);
    CHECK(thrown_code([] { make_grid(0, 8, 4.0); }) == ErrorCode::InvalidDimension);
    CHECK(thrown_code([] { make_grid(1, 3, 4.0); }) == ErrorCode::BadArgument);
    CHECK(thrown_code([] { make_grid(1, 8, 0.0); }) == ErrorCode::BadArgument);
    CHECK(thrown_code([] { make_grid(1, 8, -1.0); }) == ErrorCode::BadArgument);
}

TEST_CASE("gaussian discretization hits the analytic mass") {
    // midpoint sampling of a well-resolved Gaussian is accurate far beyond
    // second order (Poisson summation), and the sigma = 1 tail beyond the
    // [-8, 8] box is ~1e-15 of the mass
    const DensityField f1 = unit_gaussian(1, 128, 8.0);
    CHECK(mass(f1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(max_value(f1) <= 1.0 / std::sqrt(2.0 * 3.14159265358979323846));
    CHECK(max_value(f1) > 0.99 / std::sqrt(2.0 * 3.14159265358979323846));
    CHECK(min_value(f1) >= 0.0);

    const DensityField f2 = unit_gaussian(2, 64, 8.0);
    CHECK(mass(f2) == doctest::Approx(1.0).epsilon(1e-9));

    // two shifted bumps with masses 0.75 + 1.5
    GaussianMixture mix;
    mix.components.push_back(GaussianComponent{{-1.0, 0.5}, 0.6, 0.75});
    mix.components.push_back(GaussianComponent{{1.2, -0.4}, 0.8, 1.5});
    const DensityField fm = discretize(Profile{mix}, make_grid(2, 96, 8.0));
    CHECK(mass(fm) == doctest::Approx(2.25).epsilon(1e-9));
}

TEST_CASE("indicator and ring profiles") {
    // box edges at +-1 fall between cell centers, so the discrete mass is exact
    IndicatorProfile box;
    box.lo = {-1.0, -1.0};
    box.hi = {1.0, 1.0};
    box.mass = 1.0;
    const DensityField b1 = discretize(Profile{box}, make_grid(1, 128, 8.0));
    CHECK(mass(b1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_value(b1) == doctest::Approx(0.5).epsilon(1e-14));  // mass / (2-volume)
    const DensityField b2 = discretize(Profile{box}, make_grid(2, 128, 8.0));
    CHECK(mass(b2) == doctest::Approx(1.0).epsilon(1e-14));

    RingProfile ring;
    ring.radius = 2.0;
    ring.width = 0.3;
    ring.mass = 2.5;
    const DensityField r2 = discretize(Profile{ring}, make_grid(2, 128, 8.0));
    CHECK(mass(r2) == doctest::Approx(2.5).epsilon(1e-13));  // normalized on the grid
    // the shell peaks near |x| = radius: compare a cell near the ring to the center
    const Grid& g = r2.grid;
    CHECK(r2.v[g.index(64, 80)] > 100.0 * r2.v[g.index(64, 64)]);  // x ~ (0, 2) vs (0, 0)

    CHECK(thrown_code([] {
        GaussianMixture empty;
        discretize(Profile{empty}, make_grid(1, 16, 4.0));
    }) == ErrorCode::BadArgument);
    CHECK(thrown_code([] {
        GaussianMixture bad;
        bad.components.push_back(GaussianComponent{{0.0, 0.0}, -1.0, 1.0});
        discretize(Profile{bad}, make_grid(1, 16, 4.0));
    }) == ErrorCode::BadArgument);
    CHECK(thrown_code([] {
        GaussianMixture bad;
        bad.components.push_back(GaussianComponent{{0.0, 0.0}, 1.0, 0.0});
        discretize(Profile{bad}, make_grid(1, 16, 4.0));
    }) == ErrorCode::BadArgument);
    CHECK(thrown_code([] {
        IndicatorProfile bad;
        bad.lo = {1.0, -1.0};
        bad.hi = {-1.0, 1.0};
        discretize(Profile{bad}, make_grid(2, 16, 4.0));
    }) == ErrorCode::BadArgument);
    CHECK(thrown_code([] {
        RingProfile bad;
        bad.width = 0.0;
        discretize(Profile{bad}, make_grid(2, 16, 4.0));
    }) == ErrorCode::BadArgument);
}

TEST_CASE("mass rescaling") {
    DensityField f = unit_gaussian(1, 128, 8.0);
    rescale_to_mass(f, 3.7);
    CHECK(mass(f) == doctest::Approx(3.7).epsilon(1e-14));
    rescale_to_mass(f, 0.05);
    CHECK(mass(f) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(thrown_code([&] { rescale_to_mass(f, 0.0); }) == ErrorCode::BadArgument);
    CHECK(thrown_code([&] { rescale_to_mass(f, -2.0); }) == ErrorCode::BadArgument);
    DensityField zero = make_field(make_grid(1, 16, 4.0));
    CHECK(thrown_code([&] { rescale_to_mass(zero, 1.0); }) == ErrorCode::BadArgument);
}

TEST_CASE("gradient is exact on quadratics including the boundary stencils") {
    const Grid g = make_grid(1, 32, 4.0);
    DensityField f = make_field(g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        f.v[static_cast<std::size_t>(i)] = 2.0 + 0.5 * x + 3.0 * x * x;
    }
    const VectorField grad = gradient(f);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        CHECK(grad.comp[0][static_cast<std::size_t>(i)] == doctest::Approx(0.5 + 6.0 * x).epsilon(1e-12));
    }

    const Grid g2 = make_grid(2, 24, 3.0);
    DensityField h = make_field(g2);
    for (int i = 0; i < g2.n; ++i)
        for (int j = 0; j < g2.n; ++j) {
            const double x = g2.coord(i), y = g2.coord(j);
            h.v[g2.index(i, j)] = x * x + x * y - 2.0 * y;
        }
    const VectorField gh = gradient(h);
    for (int i = 0; i < g2.n; ++i)
        for (int j = 0; j < g2.n; ++j) {
            const double x = g2.coord(i), y = g2.coord(j);
            CHECK(gh.comp[0][g2.index(i, j)] == doctest::Approx(2.0 * x + y).epsilon(1e-11));
            CHECK(gh.comp[1][g2.index(i, j)] == doctest::Approx(x - 2.0).epsilon(1e-11));
        }
}

TEST_CASE("gradient converges at second order on a gaussian") {
    auto max_err = [](int n) {
        const DensityField f = unit_gaussian(1, n, 8.0);
        const VectorField grad = gradient(f);
        const Grid& g = f.grid;
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i) {
            const double x = g.coord(i);
            const double exact = -x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
            worst = std::max(worst, std::abs(grad.comp[0][static_cast<std::size_t>(i)] - exact));
        }
        return worst;
    };
    const double e64 = max_err(64), e128 = max_err(128);
    CHECK(e64 / e128 > 3.5);
    CHECK(e64 / e128 < 4.5);
}

TEST_CASE("serial reference reductions match bit for bit") {
    CounterRng rng{123, 0};
    const DensityField f = discretize(Profile{random_gaussian_mixture(rng, 2)}, make_grid(2, 64, 8.0));
    CHECK(mass(f) == ref::mass(f));
    const VectorField a = gradient(f), b = ref::gradient(f);
    CHECK(a.comp[0] == b.comp[0]);
    CHECK(a.comp[1] == b.comp[1]);
}

TEST_CASE("snapshot round trip is bitwise") {
    TempDir tmp;
    CounterRng rng{9, 0};
    const DensityField f = discretize(Profile{random_gaussian_mixture(rng, 2)}, make_grid(2, 32, 6.0));
    const std::string path = tmp.path("f.plad");
    write_snapshot(path, f);
    const DensityField back = read_snapshot(path);
    CHECK(back.grid == f.grid);
    CHECK(back.v == f.v);

    const DensityField f1 = unit_gaussian(1, 16, 4.0);
    const std::string path1 = tmp.path("f1.plad");
    write_snapshot(path1, f1);
    const DensityField back1 = read_snapshot(path1);
    CHECK(back1.grid == f1.grid);
    CHECK(back1.v == f1.v);
}

TEST_CASE("snapshot reader rejects malformed files") {
    TempDir tmp;
    const DensityField f = unit_gaussian(1, 16, 4.0);
    const std::string good = tmp.path("good.plad");
    write_snapshot(good, f);
    const std::vector<char> bytes = slurp(good);
    REQUIRE(bytes.size() == 4 + 4 + 3 * 8 + 16 * 8);

    CHECK(thrown_code([&] { read_snapshot(tmp.path("missing.plad")); }) == ErrorCode::IoError);

    auto corrupt = bytes;
    corrupt[0] = 'X';
    dump(tmp.path("magic.plad"), corrupt);
    CHECK(thrown_code([&] { read_snapshot(tmp.path("magic.plad")); }) == ErrorCode::IoError);

    corrupt = bytes;
    corrupt[4] = 2;  // unsupported version
    dump(tmp.path("version.plad"), corrupt);
    CHECK(thrown_code([&] { read_snapshot(tmp.path("version.plad")); }) == ErrorCode::IoError);

    corrupt = bytes;
    corrupt.resize(bytes.size() - 8);  // missing one cell
    dump(tmp.path("short.plad"), corrupt);
    CHECK(thrown_code([&] { read_snapshot(tmp.path("short.plad")); }) == ErrorCode::IoError);

    corrupt = bytes;
    corrupt.insert(corrupt.end(), 8, '\0');  // junk after the payload
    dump(tmp.path("long.plad"), corrupt);
    CHECK(thrown_code([&] { read_snapshot(tmp.path("long.plad")); }) == ErrorCode::IoError);
}

TEST_CASE("field csv export") {
    TempDir tmp;
    const DensityField f = unit_gaussian(1, 16, 4.0);
    const std::string path = tmp.path("f.csv");
    write_field_csv(path, f, "deadbeefdeadbeef");
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 1 + 16 + 1);  // header, cells, hash stamp
    CHECK(lines.front() == "i,x,value");
    CHECK(lines.back() == "# config_hash=deadbeefdeadbeef");
    CHECK(lines[1].substr(0, 2) == "0,");
}

TEST_CASE("counter rng is the splitmix64 stream") {
    CounterRng rng{0, 0};
    // state 0: first SplitMix64 output is a published reference value
    CHECK(rng.next_u64() == 0xE220A8397B1DCDAFull);

    CounterRng a{7, 0}, b{7, 0}, c{8, 0};
    for (int i = 0; i < 16; ++i) {
        const double va = a.next_unit();
        CHECK(va == b.next_unit());
        CHECK(va >= 0.0);
        CHECK(va < 1.0);
    }
    bool differs = false;
    CounterRng a2{7, 0};
    for (int i = 0; i < 16; ++i) differs = differs || (a2.next_unit() != c.next_unit());
    CHECK(differs);

    CounterRng d{42, 0};
    for (int i = 0; i < 100; ++i) {
        const int k = d.uniform_int(1, 4);
        CHECK(k >= 1);
        CHECK(k <= 4);
        const double u = d.uniform(-1.5, 1.5);
        CHECK(u >= -1.5);
        CHECK(u < 1.5);
    }
}

TEST_CASE("random mixtures are seed-deterministic and in documented ranges") {
    CounterRng r1{7, 0}, r2{7, 0};
    const GaussianMixture m1 = random_gaussian_mixture(r1, 2);
    const GaussianMixture m2 = random_gaussian_mixture(r2, 2);
    REQUIRE(m1.components.size() == m2.components.size());
    for (std::size_t i = 0; i < m1.components.size(); ++i) {
        CHECK(m1.components[i].center == m2.components[i].center);
        CHECK(m1.components[i].sigma == m2.components[i].sigma);
        CHECK(m1.components[i].mass == m2.components[i].mass);
    }

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        CounterRng rng{seed, 0};
        const int d = 1 + static_cast<int>(seed % 2);
        const GaussianMixture mix = random_gaussian_mixture(rng, d);
        CHECK(mix.components.size() >= 1);
        CHECK(mix.components.size() <= 4);
        for (const auto& comp : mix.components) {
            CHECK(std::abs(comp.center[0]) < 1.5);
            if (d == 1) CHECK(comp.center[1] == 0.0);
            CHECK(comp.sigma > 0.45);
            CHECK(comp.sigma < 1.1);
            CHECK(comp.mass > 0.2);
            CHECK(comp.mass < 2.0);
        }
    }

    CounterRng rng{3, 0};
    CHECK(thrown_code([&] { random_gaussian_mixture(rng, 3); }) == ErrorCode::InvalidDimension);
}
