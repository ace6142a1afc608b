#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sglimit/path_functional.hpp"
#include "sglimit/sgld_sim.hpp"

namespace sglimit {

/// 17 significant digits, shortest "%g"-style form.
std::string format_double(double v);

/// Header `t,rep_0,...,rep_{R-1}`, one row per grid time.
void write_ensemble_csv(const std::string& path, const PathEnsemble& ens);
PathEnsemble read_ensemble_csv(const std::string& path);

/// key=value lines, in the given order.
void write_key_values(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);

struct DistanceRow {
  DistanceEstimate estimate;
  std::string labelA;
  std::string labelB;
};

/// Header `method,value,stderr_or_resolution,replicates,labelA,labelB`.
void write_distance_csv(const std::string& path, const std::vector<DistanceRow>& rows);

/// Generic CSV table.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

}  // namespace sglimit
