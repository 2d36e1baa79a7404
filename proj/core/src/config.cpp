#include "kflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kflow/errors.hpp"

namespace kflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw config_error("line " + std::to_string(lineno) +
                           ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw config_error("line " + std::to_string(lineno) +
                           ": empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) +
                         ": expected key = value");
    if (section.empty())
      throw config_error("line " + std::to_string(lineno) +
                         ": key outside of any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key");
    auto& sec = cfg.sections_[section];
    if (sec.count(key))
      throw config_error("duplicate key '" + key + "' in section [" + section +
                         "]");
    sec[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section,
                            const std::string& key) const {
  if (!has(section, key))
    throw config_error("missing key '" + key + "' in section [" + section + "]");
  return sections_.at(section).at(key);
}

std::string ConfigFile::get_or(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key) const {
  const std::string v = get(section, key);
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw config_error("key '" + key + "' is not a number: " + v);
  }
  if (pos != v.size())
    throw config_error("key '" + key + "' has trailing characters: " + v);
  return d;
}

double ConfigFile::get_double_or(const std::string& section,
                                 const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long ConfigFile::get_int(const std::string& section,
                         const std::string& key) const {
  const std::string v = get(section, key);
  std::size_t pos = 0;
  long d = 0;
  try {
    d = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw config_error("key '" + key + "' is not an integer: " + v);
  }
  if (pos != v.size())
    throw config_error("key '" + key + "' has trailing characters: " + v);
  return d;
}

long ConfigFile::get_int_or(const std::string& section, const std::string& key,
                            long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
  std::istringstream in(get(section, key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw config_error("key '" + key + "' has a non-numeric entry: " + tok);
    }
  }
  if (out.empty()) throw config_error("key '" + key + "' is empty");
  return out;
}

void ConfigFile::require_known_keys(
    const std::vector<std::pair<std::string, std::string>>& allowed) const {
  for (const auto& [section, keys] : sections_) {
    for (const auto& [key, value] : keys) {
      const bool known =
          std::any_of(allowed.begin(), allowed.end(), [&](const auto& a) {
            return a.first == section && a.second == key;
          });
      if (!known)
        throw config_error("unknown key '" + key + "' in section [" + section +
                           "]");
    }
  }
}

}  // namespace kflow
