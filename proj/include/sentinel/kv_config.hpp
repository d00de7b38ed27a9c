#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>

namespace sentinel {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Plain-text `key = value` lines. Blank lines and lines starting with '#'
/// are skipped; whitespace around keys and values is trimmed. Duplicate keys
/// and lines without '=' raise ConfigError.
KeyValues parse_key_values(std::istream& in);
KeyValues load_key_values(const std::filesystem::path& path);

double parse_double(std::string_view key, std::string_view text);
std::uint64_t parse_uint(std::string_view key, std::string_view text);
bool parse_bool(std::string_view key, std::string_view text);

}  // namespace sentinel
