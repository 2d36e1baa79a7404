#pragma once

#include <map>
#include <string>
#include <vector>

namespace kflow {

/// Sectioned key = value text. Lines starting with '#' or ';' are comments.
/// Section headers are [name]; keys must be unique within a section.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long get_int(const std::string& section, const std::string& key) const;
  long get_int_or(const std::string& section, const std::string& key,
                  long fallback) const;
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;

  /// Every (section, key) present in the file must appear in `allowed`
  /// (pairs of section and key); anything else is a config error.
  void require_known_keys(
      const std::vector<std::pair<std::string, std::string>>& allowed) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace kflow
