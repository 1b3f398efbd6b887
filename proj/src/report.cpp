#include "ppg/report.hpp"

#include <fstream>

#include "ppg/errors.hpp"

namespace ppg {

void ReportWriter::add(const std::string& key, const std::string& value) {
  lines_.emplace_back(key, value);
}

void ReportWriter::add(const std::string& key, const char* value) {
  lines_.emplace_back(key, std::string(value));
}

void ReportWriter::add(const std::string& key, long value) {
  lines_.emplace_back(key, std::to_string(value));
}

void ReportWriter::add(const std::string& key, bool value) {
  lines_.emplace_back(key, value ? "pass" : "fail");
}

std::string ReportWriter::str() const {
  std::string out;
  for (const auto& [key, value] : lines_) out += key + ": " + value + "\n";
  return out;
}

void ReportWriter::write(const std::string& path) const {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path + " for writing");
  file << str();
  if (!file) throw Error("write to " + path + " failed");
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

}  // namespace ppg
