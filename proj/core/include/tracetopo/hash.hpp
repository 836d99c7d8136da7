#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace tracetopo {

// Hex-encoded SHA-256. Used for embedding-cache keys and run-manifest
// input digests.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace tracetopo
