#include "laplab/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace laplab {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
    for (std::size_t k = 0; k < header.size(); ++k)
        out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width does not match the header");
        for (std::size_t k = 0; k < row.size(); ++k)
            out << (k ? "," : "") << format_full(row[k]);
        out << '\n';
    }
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::vector<std::string>* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file");
    if (header) {
        header->clear();
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header->push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::stringstream ss(text);
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw std::invalid_argument("config: empty key");
        if (kv.count(key)) throw std::invalid_argument("config: duplicate key: " + key);
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

void require_keys(const KeyValues& kv, const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : kv)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("config: unknown key: " + key);
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double x;
    try {
        x = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key " + key + " is not a number: " + value);
    }
    if (used != value.size())
        throw std::invalid_argument("config: key " + key + " is not a number: " + value);
    return x;
}

} // namespace

double get_double(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("config: missing required key: " + key);
    return parse_double(key, it->second);
}

double get_double(const KeyValues& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_double(key, it->second);
}

std::uint64_t get_u64(const KeyValues& kv, const std::string& key, std::uint64_t fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key " + key + " is not an integer: " + it->second);
    }
}

std::string get_string(const KeyValues& kv, const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

std::uint64_t checksum_bytes(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t checksum_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checksum_file: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return checksum_bytes(ss.str());
}

void manifest_add_file(RunManifest& man, const std::filesystem::path& dir,
                       const std::string& name) {
    man.files.emplace_back(name, checksum_file(dir / name));
}

void write_manifest(const std::filesystem::path& path, const RunManifest& man) {
    nlohmann::ordered_json j;
    j["command"] = man.command;
    j["version"] = man.version;
    j["seed"] = man.seed;
    j["wall_seconds"] = man.wall_seconds;
    j["config"] = man.config;
    j["diagnostics"] = man.diagnostics;
    auto& files = j["files"] = nlohmann::ordered_json::object();
    for (const auto& [name, sum] : man.files) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(sum));
        files[name] = buf;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path.string());
    out << j.dump(2) << '\n';
}

std::filesystem::path default_output_root() {
    const char* env = std::getenv("LAPLAB_OUT");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

} // namespace laplab
