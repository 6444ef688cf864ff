#include "kisched/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "kisched/errors.hpp"
#include "kisched/version.hpp"

namespace kisched {

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["tool"] = kToolName;
    j["version"] = tool_version.empty() ? kToolVersion : tool_version;
    j["subcommand"] = subcommand;
    j["flags"] = flags;
    j["seeds"] = seeds;
    j["inputs"] = input_digests;
    return j.dump(2) + "\n";
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("digest: cannot open: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("manifest: cannot open for writing: " + path);
    out << manifest.to_json();
    if (!out) throw FormatError("manifest: write failed: " + path);
}

} // namespace kisched
