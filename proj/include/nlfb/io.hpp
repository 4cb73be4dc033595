#pragma once

#include <string>
#include <vector>

#include "nlfb/simulate.hpp"

namespace nlfb {

/// One row of a CSV report; fields are quoted on demand when written.
using CsvRow = std::vector<std::string>;

/// Writes header + rows to path, RFC-4180 quoting fields that need it.
void write_csv(const std::string& path, const CsvRow& header,
               const std::vector<CsvRow>& rows);

/// Recorded series as t,h,supU,mass rows.
void write_series_csv(const std::string& path, const Trajectory& traj);

/// One file per snapshot (u000.csv, u001.csv, ...) under dir, each holding
/// "# t = <time>" then x,u rows (x,u1,u2 for two species).
void write_snapshot_csvs(const std::string& dir, const Trajectory& traj);

/// Run summary as structured key = value text: grid and step, stop reason,
/// classification hint, terminal front data, and speed estimates when the
/// series supports them.
void write_meta(const std::string& path, const Trajectory& traj);

}  // namespace nlfb
