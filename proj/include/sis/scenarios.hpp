#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sis/data_gen.hpp"

namespace sis {

/// What a named scenario reproduces.
enum class ScenarioKind {
  /// Minimum-model-size table row (Tables 2-5).
  mms,
  /// Maximum sample-covariance eigenvalue (Table 1).
  eigen,
  /// Oracle-model minimum |t| (Figure 1).
  tstat
};

std::string_view to_string(ScenarioKind kind);

/// Published value as "median(rsd)".
struct ReportedValue {
  double median = 0.0;
  double rsd = 0.0;
};

struct Scenario {
  std::string name;
  /// "t1" .. "t5" or "f1".
  std::string table;
  ScenarioKind kind = ScenarioKind::mms;
  SimSetting setting;
  /// mms: SIS-MLR then SIS-MMLE; eigen: one value; tstat: none.
  std::vector<ReportedValue> reported;
  std::string note;
};

/// Builds the canonical scenario name from a table id and a setting:
///   t1:       t1-p2000-n600-s1q15-rho0
///   t2..t5:   t2-s1-q15-rho02-s3    (S3 rows: t3-s3-s6)
///   f1:       f1-s1-q15-rho04-s12
/// rho is encoded as tenths with a leading zero ("02" for 0.2, "0" for 0).
std::string scenario_name(std::string_view table, const SimSetting& setting);

/// All scenarios transcribed from the published tables and figure.
const std::vector<Scenario>& scenario_registry();

/// Throws ArgumentError listing the available names when `name` is unknown.
const Scenario& find_scenario(std::string_view name);

}  // namespace sis
