#pragma once

#include <filesystem>
#include <string>

namespace vring {

/// Shortest decimal form that round-trips a double exactly (%.17g).
std::string format_double(double v);

/// Writes content to path via a temporary file in the same directory followed
/// by an atomic rename, so readers never observe a partial file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace vring
