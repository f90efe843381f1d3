#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dpmlc {

/// FNV-1a 64-bit. Used for provenance hashes and seed derivation, not security.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v);

/// Hash of a whole file's bytes as a 16-char lowercase hex string.
/// Throws std::runtime_error when the file cannot be read.
std::string hash_file(const std::string& path);

}  // namespace dpmlc
