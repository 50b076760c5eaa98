#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace issuelens {

// Input could not be read or failed validation. Maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags or configuration values. Maps to exit code 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Half-open byte range into some text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(const Span& other) const { return begin <= other.begin && other.end <= end; }
  auto operator<=>(const Span&) const = default;
};

std::string to_lower_ascii(std::string_view s);
bool iequals_ascii(std::string_view a, std::string_view b);
bool istarts_with_ascii(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Number of UTF-8 code points; invalid lead bytes count as one each.
std::size_t utf8_length(std::string_view s);

// Escapes tab, newline, carriage return and backslash so a value fits in one TSV cell.
std::string tsv_escape(std::string_view s);
std::string tsv_unescape(std::string_view s);

// Fixed-precision rendering for reproducible tabular output.
std::string format_fixed(double value, int decimals = 6);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view data);

// Fisher-Yates driven by mt19937_64 raw output with rejection sampling, so the
// permutation is identical across standard library implementations.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto below = [&engine](std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    return draw % bound;
  };
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace issuelens
