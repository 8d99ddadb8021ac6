#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dagbandit {

/// Binary-labelled examples with real-valued features, stored row-major.
struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> labels;  // 0 or 1
  std::vector<std::string> feature_names;

  double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
  std::size_t positives() const;

  /// Throws InputError on shape mismatch, non-finite values, labels outside
  /// {0,1}, or a single class.
  void validate() const;
};

/// CSV with a header row; the final column must be named `y` and hold 0/1.
Dataset read_csv(std::istream& in);
Dataset load_csv(const std::string& path);
void write_csv(const Dataset& data, std::ostream& out);

/// Madelon format: whitespace-separated integer matrix plus a labels file
/// of +1/-1 (mapped to 1/0).
Dataset load_madelon(const std::string& data_path, const std::string& labels_path);

/// FNV-1a 64-bit checksum of a file, as 16 hex digits.
std::string file_checksum(const std::string& path);

}  // namespace dagbandit
