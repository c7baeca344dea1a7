#ifndef SUBANN_CONFIG_HPP
#define SUBANN_CONFIG_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace subann {

/// Minimal key-value config: one `key = value [value ...]` per line,
/// '#' starts a comment. Used for hyper grids, sweeps and generators.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        if (line.find_first_not_of(" \t\r") != std::string::npos)
          throw std::runtime_error("config line " + std::to_string(lineno) +
                                   ": expected 'key = value'");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": empty key");
      cfg.entries_[key] = val;
    }
    return cfg;
  }

  static KeyValueConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse(in);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& dflt = "") const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? dflt : it->second;
  }

  double get_double(const std::string& key, double dflt) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? dflt : parse_double(key, it->second);
  }

  std::int64_t get_int(const std::string& key, std::int64_t dflt) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return dflt;
    return static_cast<std::int64_t>(parse_double(key, it->second));
  }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    const auto it = entries_.find(key);
    if (it == entries_.end()) return out;
    std::istringstream ss(it->second);
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(key, tok));
    return out;
  }

  std::vector<std::string> get_strings(const std::string& key) const {
    std::vector<std::string> out;
    const auto it = entries_.find(key);
    if (it == entries_.end()) return out;
    std::istringstream ss(it->second);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static double parse_double(const std::string& key, const std::string& tok) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("config key '" + key + "': bad number '" + tok + "'");
    }
    if (used != tok.size())
      throw std::runtime_error("config key '" + key + "': bad number '" + tok + "'");
    return v;
  }

  std::map<std::string, std::string> entries_;
};

}  // namespace subann

#endif  // SUBANN_CONFIG_HPP
