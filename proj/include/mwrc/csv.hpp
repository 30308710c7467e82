#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mwrc/errors.hpp"

namespace mwrc {

/// Formats with 10 significant digits, '.' decimal separator, C locale.
inline std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

/// Plain comma-separated output with a header row. Writing goes through an
/// in-memory buffer flushed once on close so reruns are byte-identical.
class CsvWriter {
public:
    explicit CsvWriter(std::string path) : path_(std::move(path)) {}

    void header(const std::vector<std::string>& columns) { row(columns); }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) buffer_ += ',';
            buffer_ += fields[i];
        }
        buffer_ += '\n';
    }

    void close() {
        std::ofstream out(path_, std::ios::binary);
        if (!out) throw Error("cannot write '" + path_ + "'");
        out << buffer_;
        if (!out) throw Error("write failed for '" + path_ + "'");
    }

private:
    std::string path_;
    std::string buffer_;
};

}  // namespace mwrc
