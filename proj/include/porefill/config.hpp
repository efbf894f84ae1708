// Plain-text configuration: "[section]" headers and "key = value" lines,
// '#' comments. Values holding lists are whitespace-separated.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace porefill::wf {

class Config {
  public:
    static Config load(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::string require(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    // Whitespace-separated doubles; an explicitly empty value yields {}.
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    void set(const std::string& section, const std::string& key,
             const std::string& value);

    // FNV-1a over the section's sorted key=value pairs.
    std::uint64_t section_hash(const std::string& section) const;

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace porefill::wf
