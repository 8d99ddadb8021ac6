#include "dagbandit/dataset.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dagbandit/errors.hpp"

namespace dagbandit {

std::size_t Dataset::positives() const {
  std::size_t count = 0;
  for (auto y : labels) count += y;
  return count;
}

void Dataset::validate() const {
  if (rows == 0 || cols == 0) throw InputError("dataset is empty");
  if (values.size() != rows * cols || labels.size() != rows) throw InputError("dataset shape mismatch");
  if (!feature_names.empty() && feature_names.size() != cols) throw InputError("feature name count mismatch");
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("dataset contains a missing or non-finite value");
  }
  for (auto y : labels) {
    if (y > 1) throw InputError("labels must be 0 or 1");
  }
  const std::size_t pos = positives();
  if (pos == 0 || pos == rows) throw InputError("dataset must contain both classes");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t start = cell.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? std::string{} : cell.substr(start));
  }
  return out;
}

double parse_number(const std::string& text, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InputError("line " + std::to_string(line_no) + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV is empty");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y") throw InputError("CSV header must end with column 'y'");

  Dataset data;
  data.cols = header.size() - 1;
  data.feature_names.assign(header.begin(), header.end() - 1);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " columns");
    }
    for (std::size_t c = 0; c < data.cols; ++c) data.values.push_back(parse_number(cells[c], line_no));
    const double y = parse_number(cells.back(), line_no);
    if (y != 0.0 && y != 1.0) throw InputError("line " + std::to_string(line_no) + ": label must be 0 or 1");
    data.labels.push_back(static_cast<std::uint8_t>(y));
    ++data.rows;
  }
  data.validate();
  return data;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset: " + path);
  return read_csv(in);
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t c = 0; c < data.cols; ++c) {
    out << (data.feature_names.empty() ? "f" + std::to_string(c) : data.feature_names[c]) << ',';
  }
  out << "y\n";
  const auto flags = out.flags();
  out << std::setprecision(17);
  for (std::size_t r = 0; r < data.rows; ++r) {
    for (std::size_t c = 0; c < data.cols; ++c) out << data.at(r, c) << ',';
    out << static_cast<int>(data.labels[r]) << '\n';
  }
  out.flags(flags);
}

Dataset load_madelon(const std::string& data_path, const std::string& labels_path) {
  std::ifstream din(data_path);
  if (!din) throw InputError("cannot open Madelon data: " + data_path);
  std::ifstream lin(labels_path);
  if (!lin) throw InputError("cannot open Madelon labels: " + labels_path);

  Dataset data;
  std::string line;
  while (std::getline(din, line)) {
    std::stringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (row.empty()) continue;
    if (data.cols == 0) data.cols = row.size();
    if (row.size() != data.cols) throw InputError("Madelon rows have inconsistent widths");
    data.values.insert(data.values.end(), row.begin(), row.end());
    ++data.rows;
  }
  int label;
  while (lin >> label) {
    if (label != 1 && label != -1) throw InputError("Madelon labels must be +1 or -1");
    data.labels.push_back(label == 1 ? 1 : 0);
  }
  for (std::size_t c = 0; c < data.cols; ++c) data.feature_names.push_back("f" + std::to_string(c));
  data.validate();
  return data;
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace dagbandit
