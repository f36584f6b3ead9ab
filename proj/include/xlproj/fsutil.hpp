#ifndef XLPROJ_FSUTIL_HPP_
#define XLPROJ_FSUTIL_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace xlproj {

// Reads a whole file as bytes; throws Error(kIo).
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`, so readers
// never observe a truncated file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace xlproj

#endif  // XLPROJ_FSUTIL_HPP_
