#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace acrn {

// Thrown for malformed invocations: bad config files, unknown keys, missing
// inputs. The CLI maps it to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat "key = value" file, one pair per line, '#' starts a comment.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& dflt) const;
  // "name:scale,name:scale" pairs.
  std::vector<std::pair<std::string, double>> get_scaled_list(
      const std::string& key, const std::vector<std::pair<std::string, double>>& dflt) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  // Fail-closed: every present key must be in the known set.
  void validate_keys(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> kv_;
};

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(const std::string& s);
// Streaming file hash used by the golden-checksum tests.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace acrn
