#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ppg {

/// Line-delimited "key: value" report with insertion-ordered keys, so runs
/// diff cleanly and downstream tools can parse without a schema.
class ReportWriter {
 public:
  void add(const std::string& key, const std::string& value);
  // Keeps string literals away from the bool overload.
  void add(const std::string& key, const char* value);
  void add(const std::string& key, long value);
  void add(const std::string& key, bool value);

  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

/// FNV-1a, used to fingerprint inputs inside reports.
std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t value);

}  // namespace ppg
