#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kisched {

/// Reproducibility sidecar written next to every output artifact: the
/// subcommand, its full flag set, the seeds, and digests of the inputs.
/// Re-running the recorded command on the same binary reproduces the outputs
/// byte for byte, so no timestamps or host data belong in here.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> flags;
    std::map<std::string, std::uint64_t> seeds;
    std::map<std::string, std::string> input_digests; // path -> fnv1a64 hex
    std::string tool_version;

    std::string to_json() const;
};

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

void write_manifest(const RunManifest& manifest, const std::string& path);

} // namespace kisched
