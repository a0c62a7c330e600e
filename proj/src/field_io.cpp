#include "plad/field_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "plad/csv.hpp"
#include "plad/errors.hpp"

namespace plad {
namespace {

constexpr char kMagic[4] = {'P', 'L', 'A', 'D'};

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::ifstream& in, void* p, std::size_t n, const std::string& what) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n))
        fail(ErrorCode::IoError, "snapshot truncated while reading " + what);
}

}  // namespace

void write_snapshot(const std::string& path, const DensityField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot open for writing: " + path);
    write_bytes(out, kMagic, 4);
    const std::uint32_t version = kSnapshotVersion;
    write_bytes(out, &version, 4);
    const double header[3] = {static_cast<double>(field.grid.d), static_cast<double>(field.grid.n),
                              field.grid.half_width};
    write_bytes(out, header, sizeof header);
    write_bytes(out, field.v.data(), field.v.size() * sizeof(double));
    out.flush();
    if (!out) fail(ErrorCode::IoError, "write failed: " + path);
}

DensityField read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open for reading: " + path);
    char magic[4];
    read_bytes(in, magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0) fail(ErrorCode::IoError, "bad magic in " + path);
    std::uint32_t version = 0;
    read_bytes(in, &version, 4, "version");
    if (version != kSnapshotVersion) fail(ErrorCode::IoError, "unsupported snapshot version in " + path);
    double header[3];
    read_bytes(in, header, sizeof header, "header");
    const double dd = header[0], dn = header[1], L = header[2];
    if (dd != std::floor(dd) || dn != std::floor(dn))
        fail(ErrorCode::IoError, "non-integer dimension/size in " + path);
    const Grid grid = make_grid(static_cast<int>(dd), static_cast<int>(dn), L);
    DensityField field = make_field(grid);
    read_bytes(in, field.v.data(), field.v.size() * sizeof(double), "cell values");
    if (in.peek() != std::ifstream::traits_type::eof())
        fail(ErrorCode::IoError, "trailing bytes after cell values in " + path);
    return field;
}

void write_field_csv(const std::string& path, const DensityField& field, const std::string& config_hash) {
    CsvWriter csv(path);
    const Grid& g = field.grid;
    if (g.d == 1) {
        csv.row({"i", "x", "value"});
        for (int i = 0; i < g.n; ++i)
            csv.row({std::to_string(i), g17(g.coord(i)), g17(field.v[static_cast<std::size_t>(i)])});
    } else {
        csv.row({"i", "j", "x0", "x1", "value"});
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                csv.row({std::to_string(i), std::to_string(j), g17(g.coord(i)), g17(g.coord(j)),
                         g17(field.v[g.index(i, j)])});
    }
    csv.comment("config_hash=" + config_hash);
    csv.close(path);
}

}  // namespace plad
