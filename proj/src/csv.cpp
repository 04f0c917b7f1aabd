#include "sis/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sis/errors.hpp"

namespace sis {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

void split(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_number(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size() &&
         std::isfinite(v);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text, std::string_view response) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("line 1: missing header");

  std::vector<std::string_view> fields;
  split(lines[0], fields);
  std::vector<std::string> header;
  for (auto f : fields) header.emplace_back(unquote(f));
  const std::size_t width = header.size();
  if (width < 2) {
    throw ParseError("line 1: need a response and at least one feature column");
  }

  std::size_t response_col = width;
  if (response.empty()) {
    response_col = width - 1;
    for (std::size_t c = 0; c < width; ++c) {
      if (header[c] == "y") response_col = c;
    }
  } else {
    for (std::size_t c = 0; c < width; ++c) {
      if (header[c] == response) response_col = c;
    }
    if (response_col == width && all_digits(response)) {
      response_col = std::stoul(std::string(response));
    }
    if (response_col >= width) {
      throw ArgumentError("response column '" + std::string(response) +
                          "' not found in header");
    }
  }

  const std::size_t rows = lines.size() - 1;
  Dataset ds;
  ds.response_name = header[response_col];
  for (std::size_t c = 0; c < width; ++c) {
    if (c != response_col) ds.feature_names.push_back(header[c]);
  }
  ds.X.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width - 1));
  ds.y.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t line_no = r + 2;
    split(lines[r + 1], fields);
    if (fields.size() != width) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::size_t feature = 0;
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.0;
      if (!parse_number(fields[c], v)) {
        throw ParseError("line " + std::to_string(line_no) + " (row " +
                         std::to_string(r + 1) + "), column '" + header[c] +
                         "': '" + std::string(fields[c]) + "' is not a finite number");
      }
      if (c == response_col) {
        ds.y[r] = v;
      } else {
        ds.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(feature++)) = v;
      }
    }
  }
  return ds;
}

Dataset read_dataset_csv(const std::filesystem::path& path,
                         std::string_view response) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open input file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset_csv(buf.str(), response);
}

void write_dataset_csv(const std::filesystem::path& path,
                       const Eigen::MatrixXd& X, std::span<const double> y) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ArgumentError("response length does not match row count");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open output file " + path.string());
  std::string line;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    line += 'x' + std::to_string(j + 1) + ',';
  }
  line += "y\n";
  out << line;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      line += format_roundtrip(X(i, j));
      line += ',';
    }
    line += format_roundtrip(y[static_cast<std::size_t>(i)]);
    line += '\n';
    out << line;
  }
  if (!out) throw ArgumentError("write failed for " + path.string());
}

std::string format_sig6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string format_roundtrip(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace sis
