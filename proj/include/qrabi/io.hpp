#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "qrabi/common.hpp"

namespace qrabi {

// Writes via a sibling temp file + rename so readers never observe a
// partially written file. LF line endings are the caller's responsibility
// (streams are opened in binary mode).
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir, ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("cannot open for writing: " + tmp.string());
        out << text;
        out.flush();
        if (!out) fail("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail("cannot rename into place: " + path.string());
    }
}

// Flat key=value config; blank lines and lines starting with # are ignored.
// Whitespace around keys and values is trimmed. Duplicate keys: last wins.
inline std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_valid("cannot open config file: " + path.string());
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    };
    std::map<std::string, std::string> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            fail_valid("config line " + std::to_string(lineno) + " is not key=value: " + t);
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) fail_valid("config line " + std::to_string(lineno) + " has empty key");
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

}  // namespace qrabi
