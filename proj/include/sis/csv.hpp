#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sis {

struct Dataset {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd X;
  std::string response_name;
  std::vector<double> y;
};

/// Reads a headed CSV. `response` is a column name or 0-based index; empty
/// selects the column named "y", else the last column. Every other column
/// must be numeric. Throws ParseError naming the line (and column) at fault.
Dataset read_dataset_csv(const std::filesystem::path& path,
                         std::string_view response = {});

/// Same, from an in-memory buffer.
Dataset parse_dataset_csv(std::string_view text, std::string_view response = {});

/// Header x1..xp,y; values in shortest round-trip form.
void write_dataset_csv(const std::filesystem::path& path,
                       const Eigen::MatrixXd& X, std::span<const double> y);

/// printf("%.6g").
std::string format_sig6(double value);

/// Shortest decimal that parses back to the same double.
std::string format_roundtrip(double value);

}  // namespace sis
