#pragma once

#include <string>
#include <vector>

namespace canarypack {

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory plus rename, so a crash cannot
// leave a torn manifest or release behind.
void write_file_atomic(const std::string& path, const std::string& contents);

// One non-empty line per entry; used for trigger phrase files.
std::vector<std::string> read_lines(const std::string& path);

} // namespace canarypack
