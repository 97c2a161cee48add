#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mtom {

std::string read_text_file(const std::filesystem::path& path);  // throws FormatError
void write_text_file(const std::filesystem::path& path, const std::string& content);

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& data);

}  // namespace mtom
