#include "clusterdd/csv.hpp"

#include <charconv>

#include "clusterdd/config.hpp"

namespace clusterdd {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) {
        throw IoError("cannot open output file: " + path.string());
    }
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
    if (!out_) {
        throw IoError("write failed: " + path_.string());
    }
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) {
        throw IoError("close failed: " + path_.string());
    }
}

}  // namespace clusterdd
