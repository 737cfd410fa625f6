#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cavmeas/harness/config.hpp"

namespace cavmeas::harness {

std::string sha256_hex(const std::string& data);

struct FileDigest {
    std::string name;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string tool = "cavmeas";
    std::string version;
    std::string command;
    json config;  // fully resolved
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double duration_s = 0.0;
    std::vector<FileDigest> files;
};

json manifest_json(const RunManifest& m);
RunManifest parse_manifest(const json& j);

// Collects output files of one command; every write is digested.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir);

    const std::filesystem::path& path() const { return dir_; }
    void write(const std::string& name, const std::string& content);
    const std::vector<FileDigest>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<FileDigest> files_;
};

inline constexpr const char* kManifestName = "manifest.json";

void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

// Re-reads dir/manifest.json, checks every listed digest and that the
// stored config re-parses. Throws IoError or ConfigError on mismatch.
RunManifest validate_manifest(const std::filesystem::path& dir);

}  // namespace cavmeas::harness
