#pragma once

#include <string>
#include <vector>

#include "nlfb/config.hpp"

namespace nlfb {

/// Result row for one sweep job.
struct SweepResult {
  std::string name;
  std::string target;
  std::string status;  // "ok" | "error"
  std::string value;   // headline number or verdict, empty on error
  std::string detail;  // secondary numbers, evidence, or the error message
};

/// Runs every job in the plan on a fixed pool of workers, then writes
/// report.csv plus one artifact directory per job under out_dir. Results
/// keep plan order regardless of scheduling, and each job is evaluated in
/// a fixed order internally, so reports are deterministic. Per-job
/// failures become status=error rows; the sweep always continues.
/// workers=0 picks the hardware thread count.
std::vector<SweepResult> run_sweep(const SweepPlan& plan,
                                   const std::string& out_dir,
                                   unsigned workers = 0);

}  // namespace nlfb
