#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace laplab {

// Run plumbing: full-precision CSV, flat key=value configs with strict key
// checking, and run manifests with file checksums.

// Shortest representation that round-trips a double (17 significant digits).
std::string format_full(double x);

// Comma separated, '.' decimal, header row, LF line endings.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::vector<std::string>* header = nullptr);

using KeyValues = std::map<std::string, std::string>;

// key=value lines; '#' starts a comment, blank lines ignored.
KeyValues parse_key_values(const std::string& text);
KeyValues load_config(const std::filesystem::path& path);

// Rejects any key outside `allowed`, naming the offender.
void require_keys(const KeyValues& kv, const std::vector<std::string>& allowed);

// Typed lookups; throw std::invalid_argument naming the key on a missing
// required value or a parse failure.
double get_double(const KeyValues& kv, const std::string& key);
double get_double(const KeyValues& kv, const std::string& key, double fallback);
std::uint64_t get_u64(const KeyValues& kv, const std::string& key, std::uint64_t fallback);
std::string get_string(const KeyValues& kv, const std::string& key, const std::string& fallback);

// FNV-1a over the raw bytes.
std::uint64_t checksum_bytes(const std::string& bytes);
std::uint64_t checksum_file(const std::filesystem::path& path);

struct RunManifest {
    std::string command;
    std::string version;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    KeyValues config;
    std::map<std::string, std::string> diagnostics;
    std::vector<std::pair<std::string, std::uint64_t>> files;  // name, checksum
};

// Records the file's checksum in the manifest (path relative to dir).
void manifest_add_file(RunManifest& man, const std::filesystem::path& dir,
                       const std::string& name);
void write_manifest(const std::filesystem::path& path, const RunManifest& man);

// $LAPLAB_OUT if set, "." otherwise.
std::filesystem::path default_output_root();

} // namespace laplab
