#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "plad/errors.hpp"

namespace plad {

// Shortest-round-trip decimal formatting; every numeric CSV field goes
// through this so outputs are bit-reproducible across runs.
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Minimal CSV emitter: one header row, value rows, and trailing comment
// lines (used for the config-hash stamp every artifact carries).
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) fail(ErrorCode::IoError, "cannot open for writing: " + path);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void comment(const std::string& text) { out_ << "# " << text << '\n'; }

    void close(const std::string& path_for_errors = "") {
        out_.flush();
        if (!out_) fail(ErrorCode::IoError, "write failed" + (path_for_errors.empty() ? "" : ": " + path_for_errors));
        out_.close();
    }

  private:
    std::ofstream out_;
};

}  // namespace plad
