#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sib {

// Flat key = value config file; '#' starts a comment, whitespace is trimmed.
class KeyValueConfig {
  public:
    static KeyValueConfig load(const std::filesystem::path& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string str(const std::string& key) const;  // throws if missing
    std::string str_or(const std::string& key, const std::string& fallback) const;
    double num_or(const std::string& key, double fallback) const;
    int int_or(const std::string& key, int fallback) const;
    std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> num_list(const std::string& key) const;
    std::vector<std::string> str_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const {
        return entries_;
    }

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace sib
