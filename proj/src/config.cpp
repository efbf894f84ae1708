#include "porefill/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "porefill/core.hpp"

namespace porefill::wf {

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw Error(ErrorCode::CONFIG_ERROR,
                            "malformed section header at line " + std::to_string(lineno));
            }
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::CONFIG_ERROR,
                        "expected key=value at line " + std::to_string(lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw Error(ErrorCode::CONFIG_ERROR,
                        "empty key at line " + std::to_string(lineno));
        }
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) return false;
    return sec->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) return fallback;
    const auto it = sec->second.find(key);
    return it == sec->second.end() ? fallback : it->second;
}

std::string Config::require(const std::string& section, const std::string& key) const {
    if (!has(section, key)) {
        throw Error(ErrorCode::CONFIG_ERROR,
                    "missing required config key [" + section + "] " + key);
    }
    return get(section, key, "");
}

namespace {

double parse_double(const std::string& section, const std::string& key,
                    const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw Error(ErrorCode::CONFIG_ERROR,
                    "[" + section + "] " + key + ": not a number: '" + text + "'");
    }
    return v;
}

}  // namespace

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    return parse_double(section, key, get(section, key, ""));
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
    if (!has(section, key)) return fallback;
    const double v = parse_double(section, key, get(section, key, ""));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw Error(ErrorCode::CONFIG_ERROR,
                    "[" + section + "] " + key + ": expected an integer");
    }
    return i;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    const std::string text = get(section, key, "");
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0') {
        throw Error(ErrorCode::CONFIG_ERROR,
                    "[" + section + "] " + key + ": expected an unsigned integer");
    }
    return static_cast<std::uint64_t>(v);
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error(ErrorCode::CONFIG_ERROR,
                "[" + section + "] " + key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<double> out;
    for (const auto& tok : split(get(section, key, ""), ' ')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        out.push_back(parse_double(section, key, t));
    }
    return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    sections_[section][key] = value;
}

std::uint64_t Config::section_hash(const std::string& section) const {
    Fnv1a64 h;
    const auto sec = sections_.find(section);
    if (sec != sections_.end()) {
        for (const auto& [key, value] : sec->second) {
            h.update(key.data(), key.size());
            h.update("=", 1);
            h.update(value.data(), value.size());
            h.update("\n", 1);
        }
    }
    return h.digest();
}

}  // namespace porefill::wf
