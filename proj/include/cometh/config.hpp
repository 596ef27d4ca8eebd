#ifndef COMETH_CONFIG_HPP_
#define COMETH_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cometh/types.hpp"

namespace cometh {

/**
 * Flat sectioned key=value configuration. Grammar:
 *
 *   # comment
 *   [section]
 *   key = value
 *
 * Keys are addressed as "section.key". CLI flags override file values via
 * set(). dump() emits the effective configuration in a form that parses
 * back identically.
 */
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_str(const std::string& key, const std::string& fallback) const;
  std::string require_str(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  Real get_real(const std::string& key, Real fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::uint64_t require_u64(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  std::string dump() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cometh

#endif  // COMETH_CONFIG_HPP_
