#include "obstacle/artifacts.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "obstacle/version.hpp"

namespace obstacle {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header_line(std::uint64_t config_hash) {
  return std::string("# obstacle ") + kVersion +
         " config=" + format_hash(config_hash) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

const char* regime_name(const Grid& g, const RegimePartition& part,
                        std::size_t k) {
  if (g.is_boundary(k)) return "boundary";
  switch (part.label[k]) {
    case Regime::Lower: return "lower";
    case Regime::Upper: return "upper";
    case Regime::Pde: return "pde";
  }
  return "pde";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

// "# obstacle <version> config=<hex>"
void parse_header(const std::string& line, std::string& version,
                  std::string& hash, const std::string& path) {
  std::istringstream is(line);
  std::string mark, tool, cfg;
  is >> mark >> tool >> version >> cfg;
  if (mark != "#" || tool != "obstacle" || cfg.rfind("config=", 0) != 0)
    throw std::runtime_error("'" + path + "': missing version header line");
  hash = cfg.substr(7);
}

} // namespace

std::string format_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void write_solution_csv(const std::string& path, const ProblemSpec& problem,
                        const ScalarField& u, const RegimePartition& partition,
                        std::uint64_t config_hash) {
  const Grid& g = problem.grid;
  if (partition.label.size() != g.size() || u.v.size() != g.size())
    throw std::invalid_argument("write_solution_csv: size mismatch");

  std::string out = header_line(config_hash);
  out += g.dim == 1 ? "x1,u,phi,psi,f,regime\n" : "x1,x2,u,phi,psi,f,regime\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.coord(k);
    out += g17(x[0]);
    if (g.dim == 2) {
      out += ',';
      out += g17(x[1]);
    }
    out += ',';
    out += g17(u.v[k]);
    out += ',';
    out += g17(problem.phi.v[k]);
    out += ',';
    out += g17(problem.psi.v[k]);
    out += ',';
    out += g17(problem.f.v[k]);
    out += ',';
    out += regime_name(g, partition, k);
    out += '\n';
  }
  write_file(path, out);
}

SolutionTable read_solution_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  SolutionTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path + "': empty file");
  parse_header(line, table.version, table.config_hash, path);
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path + "': missing column header");
  table.columns = split(line, ',');
  if (table.columns.empty() || table.columns.back() != "regime")
    throw std::runtime_error("'" + path + "': unexpected columns");
  const std::size_t numeric_cols = table.columns.size() - 1;
  table.numeric.resize(numeric_cols);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> parts = split(line, ',');
    if (parts.size() != table.columns.size())
      throw std::runtime_error("'" + path + "': ragged row '" + line + "'");
    for (std::size_t c = 0; c < numeric_cols; ++c)
      table.numeric[c].push_back(std::strtod(parts[c].c_str(), nullptr));
    table.regime.push_back(parts.back());
  }
  return table;
}

void write_analysis_csv(const std::string& path,
                        const std::vector<AnalysisRow>& rows,
                        std::uint64_t config_hash) {
  std::string out = header_line(config_hash);
  out += "metric,label,value\n";
  for (const AnalysisRow& r : rows) {
    out += r.metric;
    out += ',';
    out += r.label;
    out += ',';
    out += g17(r.value);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<AnalysisRow> read_analysis_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line, version, hash;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path + "': empty file");
  parse_header(line, version, hash, path);
  if (!std::getline(in, line) || line != "metric,label,value")
    throw std::runtime_error("'" + path + "': unexpected columns");
  std::vector<AnalysisRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> parts = split(line, ',');
    if (parts.size() != 3)
      throw std::runtime_error("'" + path + "': ragged row '" + line + "'");
    rows.push_back({parts[0], parts[1], std::strtod(parts[2].c_str(), nullptr)});
  }
  return rows;
}

void write_report_json(const std::string& path,
                       const nlohmann::ordered_json& body,
                       std::uint64_t config_hash) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = format_hash(config_hash);
  for (const auto& [key, value] : body.items()) j[key] = value;
  write_file(path, j.dump(2) + "\n");
}

nlohmann::ordered_json read_report_json(const std::string& path) {
  return nlohmann::ordered_json::parse(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace obstacle
