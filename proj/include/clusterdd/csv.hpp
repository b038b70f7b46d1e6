#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace clusterdd {

/// Shortest round-trip decimal form, '.' separator, locale-free.
std::string format_double(double v);

/// Minimal RFC-4180-style writer: comma separated, LF line endings, written
/// in binary mode so the bytes are platform-independent. Fields here never
/// contain separators or quotes, so no quoting is performed.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    void row(const std::vector<std::string>& fields);

    void close();

private:
    std::ofstream out_;
    std::filesystem::path path_;
};

}  // namespace clusterdd
