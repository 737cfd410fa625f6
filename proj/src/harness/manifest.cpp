#include "cavmeas/harness/manifest.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

#include "cavmeas/errors.hpp"

namespace cavmeas::harness {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read '" + p.string() + "'");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    out << content;
    out.close();
    if (!out) throw IoError("write failed for '" + p.string() + "'");
}

}  // namespace

json manifest_json(const RunManifest& m) {
    json files = json::array();
    for (const auto& f : m.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {
        {"tool", m.tool},       {"version", m.version},       {"command", m.command},
        {"seed", m.seed},       {"workers", m.workers},       {"duration_s", m.duration_s},
        {"config", m.config},   {"files", files},
    };
}

RunManifest parse_manifest(const json& j) {
    RunManifest m;
    try {
        m.tool = j.at("tool").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.workers = j.at("workers").get<unsigned>();
        m.duration_s = j.at("duration_s").get<double>();
        m.config = j.at("config");
        for (const auto& f : j.at("files")) {
            m.files.push_back({f.at("name").get<std::string>(), f.at("sha256").get<std::string>(),
                               f.at("bytes").get<std::uintmax_t>()});
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

OutputDir::OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory '" + dir_.string() + "'");
}

void OutputDir::write(const std::string& name, const std::string& content) {
    write_file(dir_ / name, content);
    files_.push_back({name, sha256_hex(content), content.size()});
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
    write_file(dir / kManifestName, manifest_json(m).dump(2) + "\n");
}

RunManifest validate_manifest(const fs::path& dir) {
    const std::string text = read_file(dir / kManifestName);
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError("manifest is not valid JSON");
    RunManifest m = parse_manifest(j);
    for (const auto& f : m.files) {
        const std::string content = read_file(dir / f.name);
        if (content.size() != f.bytes || sha256_hex(content) != f.sha256) {
            throw IoError("digest mismatch for '" + f.name + "'");
        }
    }
    const RunConfig c = from_json(m.config);
    if (c.seed != m.seed) throw IoError("manifest seed differs from its config");
    return m;
}

}  // namespace cavmeas::harness
