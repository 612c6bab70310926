#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "obstacle/partition.hpp"
#include "obstacle/problem.hpp"

namespace obstacle {

// Flat-file emission.  Every file starts with a header line carrying the
// tool version and the config hash so a reader can tell which run and
// which build produced it.  All numbers are written with enough digits to
// round trip exactly, so identical runs give byte-identical files.

std::string format_hash(std::uint64_t h); // 16 hex digits

// One row per node, row-major order.  Columns: x1[,x2],u,phi,psi,f,regime.
void write_solution_csv(const std::string& path, const ProblemSpec& problem,
                        const ScalarField& u, const RegimePartition& partition,
                        std::uint64_t config_hash);

struct SolutionTable {
  std::string version;
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> numeric; // one vector per numeric column
  std::vector<std::string> regime;          // last column
};

SolutionTable read_solution_csv(const std::string& path);

struct AnalysisRow {
  std::string metric;
  std::string label;
  double value;
};

void write_analysis_csv(const std::string& path,
                        const std::vector<AnalysisRow>& rows,
                        std::uint64_t config_hash);

std::vector<AnalysisRow> read_analysis_csv(const std::string& path);

// The report is JSON; the version and config hash become its first two
// keys, which puts them on the leading lines of the pretty-printed file.
void write_report_json(const std::string& path,
                       const nlohmann::ordered_json& body,
                       std::uint64_t config_hash);

nlohmann::ordered_json read_report_json(const std::string& path);

std::string read_text_file(const std::string& path);

} // namespace obstacle
