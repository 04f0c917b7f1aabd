#include "sis/scenarios.hpp"

#include <cmath>
#include <string>

#include "sis/errors.hpp"

namespace sis {

namespace {

// Table captions print the s=6 pattern of the p=40000 tables as
// "(1,1,3,1,...)"; it is read as the (1,1.3) motif used everywhere else.
constexpr const char* kMotifNote =
    "caption prints (1,1,3,1,...); read as (1,1.3,...)";

std::string rho_code(double rho) {
  const long tenths = std::lround(rho * 10.0);
  return tenths == 0 ? "0" : "0" + std::to_string(tenths);
}

struct MmsRow {
  double rho;
  std::size_t n;
  double mlr, mlr_rsd, mmle, mmle_rsd;
};

struct MmsBlock {
  const char* table;
  Design design;
  Family family;
  std::size_t p;
  std::size_t q;
  std::size_t s;
  const char* pattern;
  std::vector<MmsRow> rows;
  const char* note = "";
};

struct EigenRow {
  std::size_t p;
  std::size_t n;
  Design design;
  std::size_t q;
  double values[5][2];
};

constexpr double kRhos[5] = {0.0, 0.2, 0.4, 0.6, 0.8};

SimSetting make_setting(Design design, Family family, std::size_t n,
                        std::size_t p, std::size_t q, double rho,
                        std::size_t s, const char* pattern) {
  SimSetting st;
  st.design = design;
  st.family = family;
  st.n = n;
  st.p = p;
  st.q = q;
  st.rho = rho;
  st.s = s;
  st.beta_pattern = BetaPattern::parse(pattern);
  return st;
}

std::vector<MmsBlock> mms_blocks() {
  const Family L = Family::bernoulli;
  const Family G = Family::gaussian;
  const Design S1 = Design::s1, S2 = Design::s2, S3 = Design::s3;
  return {
      // Logistic, p = 40000.
      {"t2", S1, L, 40000, 15, 3, "(1,1.3,1)",
       {{0.0, 300, 87.5, 381, 89, 375}, {0.2, 200, 3, 0, 3, 0},
        {0.4, 200, 3, 0, 3, 0}, {0.6, 200, 3, 1, 3, 1}, {0.8, 200, 4, 1, 4, 1}}},
      {"t2", S1, L, 40000, 15, 6, "(1,1.3,...)",
       {{0.0, 300, 47, 164, 50, 170}, {0.2, 300, 6, 0, 6, 0},
        {0.4, 300, 7, 1, 7, 1}, {0.6, 300, 8, 1, 8, 2}, {0.8, 300, 9, 3, 9, 3}},
       kMotifNote},
      {"t2", S1, L, 40000, 15, 12, "(1,1.3,...)",
       {{0.0, 500, 297, 589, 302.5, 597}, {0.2, 300, 13, 1, 13, 1},
        {0.4, 300, 14, 1, 14, 1}, {0.6, 300, 14, 1, 14, 1},
        {0.8, 300, 14, 1, 14, 1}}},
      {"t2", S1, L, 40000, 15, 15, "(1,1.3,...)",
       {{0.0, 600, 350, 607, 359.5, 612}, {0.2, 300, 15, 0, 15, 0},
        {0.4, 300, 15, 0, 15, 0}, {0.6, 300, 15, 0, 15, 0},
        {0.8, 300, 15, 0, 15, 0}}},
      {"t2", S2, L, 40000, 50, 3, "(1,1.3,1)",
       {{0.0, 300, 84.5, 376, 88.5, 383}, {0.2, 300, 3, 0, 3, 0},
        {0.4, 300, 3, 0, 3, 0}, {0.6, 300, 3, 1, 3, 1}, {0.8, 300, 5, 4, 5, 4}}},
      {"t2", S2, L, 40000, 50, 6, "(1,1.3,1,...)",
       {{0.0, 500, 6, 1, 6, 1}, {0.2, 500, 6, 0, 6, 0}, {0.4, 500, 6, 1, 6, 1},
        {0.6, 500, 8.5, 4, 9, 5}, {0.8, 500, 13.5, 8, 14, 8}}},
      {"t2", S2, L, 40000, 50, 12, "(1,1.3,...)",
       {{0.0, 600, 77, 114, 78.5, 118}, {0.2, 500, 18, 7, 18, 7},
        {0.4, 500, 25, 8, 25, 10}, {0.6, 500, 32, 9, 31, 8},
        {0.8, 500, 36, 8, 35, 9}}},
      {"t2", S2, L, 40000, 50, 15, "(1,1.3,...)",
       {{0.0, 800, 46, 82, 47, 83}, {0.2, 500, 26, 6, 26, 6},
        {0.4, 500, 34, 7, 33, 8}, {0.6, 500, 39, 7, 38, 7},
        {0.8, 500, 40, 6, 42, 7}}},
      // Logistic, p = 5000 (S1) and 2000 (S2, S3).
      {"t3", S1, L, 5000, 15, 3, "(1,1.3,1)",
       {{0.0, 300, 3, 0, 3, 0}, {0.2, 300, 3, 0, 3, 0}, {0.4, 300, 3, 0, 3, 0},
        {0.6, 300, 3, 0, 3, 0}, {0.8, 300, 3, 1, 3, 1}}},
      {"t3", S1, L, 5000, 15, 6, "(1,1.3,...)",
       {{0.0, 300, 12.5, 15, 13, 16}, {0.2, 300, 6, 0, 6, 0},
        {0.4, 300, 6, 1, 6, 1}, {0.6, 300, 7, 2, 7, 2}, {0.8, 300, 9, 2, 9, 3}}},
      {"t3", S1, L, 5000, 15, 12, "(1,1.3,...)",
       {{0.0, 300, 297.5, 359, 300, 361}, {0.2, 300, 13, 1, 13, 1},
        {0.4, 300, 14, 1, 14, 1}, {0.6, 300, 14, 1, 14, 1},
        {0.8, 300, 14, 1, 14, 1}}},
      {"t3", S1, L, 5000, 15, 15, "(3,4,...)",
       {{0.0, 300, 479, 622, 482, 615}, {0.2, 300, 15, 0, 15, 0},
        {0.4, 300, 15, 0, 15, 0}, {0.6, 300, 15, 0, 15, 0},
        {0.8, 300, 15, 0, 15, 0}}},
      {"t3", S2, L, 2000, 50, 3, "(3,4,3)",
       {{0.0, 200, 3, 0, 3, 0}, {0.2, 200, 3, 0, 3, 0}, {0.4, 200, 3, 0, 3, 0},
        {0.6, 200, 3, 1, 3, 1}, {0.8, 200, 5, 5, 5.5, 5}}},
      {"t3", S2, L, 2000, 50, 6, "(3,-3,...)",
       {{0.0, 200, 8, 6, 9, 7}, {0.2, 200, 18, 38, 20, 39},
        {0.4, 200, 51, 77, 64.5, 76}, {0.6, 300, 77.5, 139, 77.5, 132},
        {0.8, 400, 306.5, 347, 313, 336}}},
      {"t3", S2, L, 2000, 50, 12, "(3,4,...)",
       {{0.0, 600, 13, 6, 13, 7}, {0.2, 600, 19, 6, 19, 6},
        {0.4, 600, 32, 10, 30, 10}, {0.6, 600, 38, 9, 38, 10},
        {0.8, 600, 38, 7, 39, 8}}},
      {"t3", S2, L, 2000, 50, 24, "(3,4,...)",
       {{0.0, 600, 180, 240, 182, 238}, {0.2, 600, 45, 4, 45, 4},
        {0.4, 600, 46, 3, 47, 2}, {0.6, 600, 48, 2, 48, 2},
        {0.8, 600, 48, 1, 48, 1}}},
      {"t3", S3, L, 2000, 0, 3, "(1,-1,...)", {{0.0, 600, 3, 0, 3, 0}}},
      {"t3", S3, L, 2000, 0, 6, "(1,-1,...)", {{0.0, 600, 56, 0, 56, 0}}},
      {"t3", S3, L, 2000, 0, 12, "(1,-1,...)", {{0.0, 600, 63, 6, 63, 6}}},
      {"t3", S3, L, 2000, 0, 24, "(1,-1,...)", {{0.0, 600, 214.5, 93, 208.5, 82}}},
      // Linear, p = 40000.
      {"t4", S1, G, 40000, 15, 3, "(1,1.3,1)",
       {{0.0, 80, 12, 18, 12, 18}, {0.2, 80, 3, 0, 3, 0}, {0.4, 80, 3, 0, 3, 0},
        {0.6, 80, 3, 0, 3, 0}, {0.8, 80, 3, 0, 3, 0}}},
      {"t4", S1, G, 40000, 15, 6, "(1,1.3,...)",
       {{0.0, 150, 42, 157, 42, 157}, {0.2, 150, 6, 0, 6, 0},
        {0.4, 150, 6.5, 1, 6.5, 1}, {0.6, 150, 6, 1, 6, 1},
        {0.8, 150, 7, 1, 7, 1}},
       kMotifNote},
      {"t4", S1, G, 40000, 15, 12, "(1,1.3,...)",
       {{0.0, 300, 143, 282, 143, 282}, {0.2, 200, 13, 1, 13, 1},
        {0.4, 200, 13, 1, 13, 1}, {0.6, 200, 13, 1, 13, 1},
        {0.8, 200, 13, 1, 13, 1}}},
      {"t4", S1, G, 40000, 15, 15, "(1,1.3,...)",
       {{0.0, 400, 135.5, 167, 135.5, 167}, {0.2, 200, 15, 0, 15, 0},
        {0.4, 200, 15, 0, 15, 0}, {0.6, 200, 15, 0, 15, 0},
        {0.8, 200, 15, 0, 15, 0}}},
      {"t4", S2, G, 40000, 50, 3, "(1,1.3,1)",
       {{0.0, 100, 3, 2, 3, 2}, {0.2, 100, 3, 0, 3, 0}, {0.4, 100, 3, 0, 3, 0},
        {0.6, 100, 3, 0, 3, 0}, {0.8, 100, 3, 1, 3, 1}}},
      {"t4", S2, G, 40000, 50, 6, "(1,1.3,1,...)",
       {{0.0, 200, 7.5, 7, 7.5, 7}, {0.2, 200, 6, 1, 6, 1},
        {0.4, 200, 7, 1, 7, 1}, {0.6, 200, 7, 2, 7, 2}, {0.8, 200, 8, 4, 8, 4}}},
      {"t4", S2, G, 40000, 50, 12, "(1,1.3,...)",
       {{0.0, 400, 22, 27, 22, 27}, {0.2, 300, 16, 5, 16, 5},
        {0.4, 300, 19, 8, 19, 8}, {0.6, 300, 25, 8, 25, 8},
        {0.8, 300, 24, 7, 24, 7}}},
      {"t4", S2, G, 40000, 50, 15, "(1,1.3,...)",
       {{0.0, 500, 35, 52, 35, 52}, {0.2, 300, 24, 7, 24, 7},
        {0.4, 300, 30, 10, 30, 10}, {0.6, 300, 33.5, 7, 33.5, 7},
        {0.8, 300, 35, 8, 35, 8}}},
      // Linear, p = 5000 (S1) and 2000 (S2, S3).
      {"t5", S1, G, 5000, 15, 3, "(0.5,0.67,0.5)",
       {{0.0, 100, 12, 40, 12, 40}, {0.2, 100, 3, 1, 3, 1},
        {0.4, 100, 3, 0, 3, 0}, {0.6, 100, 3, 1, 3, 1}, {0.8, 100, 4, 2, 4, 2}}},
      {"t5", S1, G, 5000, 15, 6, "(0.5,0.67,...)",
       {{0.0, 100, 210.5, 422, 210.5, 422}, {0.2, 100, 7, 2, 7, 2},
        {0.4, 100, 7, 2, 7, 2}, {0.6, 100, 8, 2, 8, 2}, {0.8, 100, 9, 3, 9, 3}}},
      {"t5", S1, G, 5000, 15, 12, "(0.5,0.67,...)",
       {{0.0, 300, 49, 76, 49, 76}, {0.2, 100, 14, 2, 14, 2},
        {0.4, 100, 14, 1, 14, 1}, {0.6, 100, 14, 1, 14, 1},
        {0.8, 100, 14, 1, 14, 1}}},
      {"t5", S1, G, 5000, 15, 15, "(0.5,0.67,...)",
       {{0.0, 300, 199, 251, 199, 251}, {0.2, 100, 17, 5, 17, 5},
        {0.4, 100, 15, 0, 15, 0}, {0.6, 100, 15, 0, 15, 0},
        {0.8, 100, 15, 0, 15, 0}}},
      {"t5", S2, G, 2000, 50, 3, "(0.6,0.8,0.6)",
       {{0.0, 100, 5, 14, 6, 16}, {0.2, 100, 3, 1, 3, 1}, {0.4, 100, 3, 1, 4, 1},
        {0.6, 100, 5, 3, 7, 5}, {0.8, 100, 7, 7, 14, 12}}},
      {"t5", S2, G, 2000, 50, 6, "(3,-3,...)",
       {{0.0, 100, 15, 43, 18, 47}, {0.2, 100, 42, 116, 47, 99},
        {0.4, 100, 143, 207, 129, 226}, {0.6, 200, 47, 93, 49, 110},
        {0.8, 200, 360, 470, 376.5, 486}}},
      {"t5", S2, G, 2000, 50, 12, "(0.6,0.8,...)",
       {{0.0, 200, 151, 212, 140, 207}, {0.2, 100, 37.5, 10, 36, 12},
        {0.4, 100, 39, 7, 40.5, 8}, {0.6, 100, 41, 7, 42, 6},
        {0.8, 100, 44, 5, 46, 6}}},
      {"t5", S2, G, 2000, 50, 24, "(3,4,...)",
       {{0.0, 400, 229, 283, 227, 279}, {0.2, 100, 61, 43, 67, 46},
        {0.4, 100, 48, 2, 47, 2}, {0.6, 100, 48, 2, 49, 2},
        {0.8, 100, 49, 2, 49, 1}}},
      {"t5", S3, G, 2000, 0, 3, "(1,-1,...)", {{0.0, 600, 3, 0, 3, 0}}},
      {"t5", S3, G, 2000, 0, 6, "(1,-1,...)", {{0.0, 600, 56, 0, 56, 0}}},
      {"t5", S3, G, 2000, 0, 12, "(1,-1,...)", {{0.0, 600, 62, 0, 62, 0}}},
      {"t5", S3, G, 2000, 0, 24, "(1,-1,...)", {{0.0, 600, 81, 19, 81, 23}}},
  };
}

std::vector<EigenRow> eigen_rows() {
  const Design S1 = Design::s1, S2 = Design::s2;
  return {
      {40000, 80, S1, 15,
       {{549.9, 1.42}, {550.1, 1.36}, {550.1, 1.31}, {550.1, 1.29}, {550.1, 1.40}}},
      {40000, 80, S2, 50,
       {{550.0, 1.42}, {550.1, 1.38}, {550.4, 1.48}, {552.9, 1.77}, {558.5, 2.35}}},
      {40000, 300, S1, 15,
       {{157.3, 0.36}, {157.4, 0.36}, {157.4, 0.37}, {157.4, 0.31}, {157.7, 0.41}}},
      {40000, 300, S2, 50,
       {{157.4, 0.36}, {157.5, 0.37}, {160.9, 1.22}, {168.2, 1.03}, {176.9, 1.01}}},
      {5000, 300, S1, 15,
       {{25.68, 0.15}, {25.68, 0.17}, {26.18, 0.24}, {27.99, 0.39}, {30.28, 0.37}}},
      {5000, 300, S1, 50,
       {{25.69, 0.14}, {29.06, 0.48}, {37.98, 0.73}, {47.49, 0.72}, {57.17, 0.45}}},
      {2000, 600, S1, 15,
       {{7.92, 0.07}, {8.32, 0.15}, {10.5, 0.26}, {13.09, 0.25}, {15.79, 0.20}}},
      {2000, 600, S1, 50,
       {{7.93, 0.07}, {14.62, 0.40}, {23.95, 0.65}, {33.90, 0.60}, {43.56, 0.45}}},
      {2000, 600, S2, 50,
       {{7.93, 0.07}, {14.62, 0.40}, {23.95, 0.65}, {33.90, 0.60}, {43.56, 0.45}}},
  };
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> out;
  for (const auto& row : eigen_rows()) {
    for (int k = 0; k < 5; ++k) {
      Scenario sc;
      sc.table = "t1";
      sc.kind = ScenarioKind::eigen;
      sc.setting = make_setting(row.design, Family::bernoulli, row.n, row.p,
                                row.q, kRhos[k], 3, "(1,1.3,1)");
      sc.reported = {{row.values[k][0], row.values[k][1]}};
      sc.name = scenario_name(sc.table, sc.setting);
      out.push_back(std::move(sc));
    }
  }
  for (const auto& block : mms_blocks()) {
    for (const auto& row : block.rows) {
      Scenario sc;
      sc.table = block.table;
      sc.kind = ScenarioKind::mms;
      sc.setting = make_setting(block.design, block.family, row.n, block.p,
                                block.q, row.rho, block.s, block.pattern);
      sc.reported = {{row.mlr, row.mlr_rsd}, {row.mmle, row.mmle_rsd}};
      sc.note = block.note;
      sc.name = scenario_name(sc.table, sc.setting);
      out.push_back(std::move(sc));
    }
  }
  // Figure 1 panels with s <= q.
  const std::pair<std::size_t, std::size_t> panels[] = {{12, 15}, {12, 50}, {24, 50}};
  for (const auto& [s, q] : panels) {
    for (double rho : kRhos) {
      Scenario sc;
      sc.table = "f1";
      sc.kind = ScenarioKind::tstat;
      sc.setting = make_setting(Design::s1, Family::bernoulli, 600, 2000, q, rho,
                                s, "(3,4,...)");
      sc.name = scenario_name(sc.table, sc.setting);
      out.push_back(std::move(sc));
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::mms:
      return "mms";
    case ScenarioKind::eigen:
      return "eigen";
    case ScenarioKind::tstat:
      return "tstat";
  }
  return "unknown";
}

std::string scenario_name(std::string_view table, const SimSetting& setting) {
  const std::string design =
      setting.design == Design::s1 ? "s1" : setting.design == Design::s2 ? "s2" : "s3";
  const std::string rho = "rho" + rho_code(setting.rho);
  std::string name(table);
  if (table == "t1") {
    return name + "-p" + std::to_string(setting.p) + "-n" +
           std::to_string(setting.n) + "-" + design + "q" +
           std::to_string(setting.q) + "-" + rho;
  }
  if (setting.design == Design::s3) {
    return name + "-s3-s" + std::to_string(setting.s);
  }
  return name + "-" + design + "-q" + std::to_string(setting.q) + "-" + rho +
         "-s" + std::to_string(setting.s);
}

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = build_registry();
  return registry;
}

const Scenario& find_scenario(std::string_view name) {
  for (const auto& sc : scenario_registry()) {
    if (sc.name == name) return sc;
  }
  std::string msg = "unknown scenario '" + std::string(name) + "'; available:";
  for (const auto& sc : scenario_registry()) msg += "\n  " + sc.name;
  throw ArgumentError(msg);
}

}  // namespace sis
