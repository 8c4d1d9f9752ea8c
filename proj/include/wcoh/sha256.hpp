#ifndef WCOH_SHA256_HPP
#define WCOH_SHA256_HPP

#include <cstdint>
#include <filesystem>
#include <string>

namespace wcoh {

// Hex digest of a byte string / file, used for input provenance in run manifests.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace wcoh

#endif
