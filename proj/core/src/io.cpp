#include "sglimit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sglimit/errors.hpp"

namespace sglimit {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_ensemble_csv(const std::string& path, const PathEnsemble& ens) {
  auto out = open_out(path);
  out << 't';
  for (std::size_t r = 0; r < ens.replicates; ++r) out << ",rep_" << r;
  out << '\n';
  const double alpha = static_cast<double>(ens.alpha);
  for (std::size_t k = 0; k <= ens.alpha; ++k) {
    out << format_double(static_cast<double>(k) / alpha);
    for (std::size_t r = 0; r < ens.replicates; ++r) out << ',' << format_double(ens.row(r)[k]);
    out << '\n';
  }
  if (!out) throw NumericError("write failed for '" + path + "'");
}

PathEnsemble read_ensemble_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open ensemble '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("ensemble file is empty");
  const auto header = split_commas(line);
  if (header.size() < 2 || header[0] != "t") throw ConfigError("ensemble header must start with t,rep_0");
  const std::size_t R = header.size() - 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != R + 1) throw ConfigError("ensemble row has the wrong number of columns");
    std::vector<double> v;
    for (std::size_t i = 1; i < cells.size(); ++i) v.push_back(std::stod(cells[i]));
    rows.push_back(std::move(v));
  }
  if (rows.size() < 2) throw ConfigError("ensemble needs at least two grid times");
  PathEnsemble ens;
  ens.replicates = R;
  ens.alpha = rows.size() - 1;
  ens.values.resize(R * rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t r = 0; r < R; ++r) ens.row(r)[k] = rows[k][r];
  }
  return ens;
}

void write_key_values(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv) {
  auto out = open_out(path);
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

void write_distance_csv(const std::string& path, const std::vector<DistanceRow>& rows) {
  auto out = open_out(path);
  out << "method,value,stderr_or_resolution,replicates,labelA,labelB\n";
  for (const auto& row : rows) {
    out << row.estimate.method << ',' << format_double(row.estimate.value) << ','
        << format_double(row.estimate.uncertainty()) << ',' << row.estimate.replicates << ',' << row.labelA << ','
        << row.labelB << '\n';
  }
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace sglimit
