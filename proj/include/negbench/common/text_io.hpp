#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace negbench {

std::vector<std::string> split_tabs(std::string_view line);
std::string_view trim(std::string_view s);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames, so readers never observe a
// half-written file.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace negbench
