#pragma once

#include <cstdint>
#include <string>

namespace rslab {

// FNV-1a over raw bytes; used to chain derived caches to their producers.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

// Returns the hash of a file's content, or throws ValidationError if missing.
std::uint64_t hash_file(const std::string& path);

std::string read_text_file(const std::string& path);

// Write-to-temp + rename so a crashed writer never leaves a torn cache.
void atomic_write_text(const std::string& path, const std::string& content);

bool file_exists(const std::string& path);

} // namespace rslab
