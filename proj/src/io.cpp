#include "nlfb/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nlfb {
namespace {

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::string quoted_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    q += c;
    if (c == '"') q += '"';
  }
  q += '"';
  return q;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_row(std::ofstream& out, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << quoted_field(row[i]);
  }
  out << '\n';
}

}  // namespace

void write_csv(const std::string& path, const CsvRow& header,
               const std::vector<CsvRow>& rows) {
  std::ofstream out = open_out(path);
  write_row(out, header);
  for (const auto& row : rows) write_row(out, row);
}

void write_series_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,h,supU,mass\n";
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    out << num(traj.t[i]) << ',' << num(traj.h[i]) << ',' << num(traj.sup[i])
        << ',' << num(traj.mass[i]) << '\n';
}

void write_snapshot_csvs(const std::string& dir, const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const FrontState& s = traj.snapshots[k];
    char name[16];
    std::snprintf(name, sizeof name, "u%03zu.csv", k);
    std::ofstream out((std::filesystem::path(dir) / name).string());
    if (!out) throw std::runtime_error("cannot write snapshot in '" + dir + "'");
    out << "# t = " << num(s.t) << '\n';
    out << (s.two_species() ? "x,u1,u2\n" : "x,u\n");
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << num(static_cast<double>(i) * s.dx) << ',' << num(s.u1[i]);
      if (s.two_species()) out << ',' << num(s.u2[i]);
      out << '\n';
    }
  }
}

void write_meta(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "[run]\n";
  out << "dx = " << num(traj.dx) << '\n';
  out << "dt = " << num(traj.dt) << '\n';
  out << "t_final = " << num(traj.t.back()) << '\n';
  out << "h_final = " << num(traj.h.back()) << '\n';
  out << "sup_final = " << num(traj.sup.back()) << '\n';
  out << "mass_final = " << num(traj.mass.back()) << '\n';
  out << "snapshots = " << traj.snapshots.size() << '\n';
  out << '\n';
  out << "[verdict]\n";
  out << "hint = " << traj.hint << '\n';
  out << "stop_reason = " << traj.stop_reason << '\n';
  if (traj.spread_threshold > 0.0)
    out << "spread_threshold = " << num(traj.spread_threshold) << '\n';
  out << '\n';
  out << "[speed]\n";
  try {
    const SpeedEstimate sp = front_speed(traj);
    out << "slope = " << num(sp.slope) << '\n';
    out << "secant = " << num(sp.secant) << '\n';
    out << "window_samples = " << sp.window_samples << '\n';
  } catch (const std::invalid_argument&) {
    out << "slope = unavailable (series too short)\n";
  }
  try {
    const AccelerationReport ar = acceleration_probe(traj);
    out << "dyadic_flag = " << ar.flag << '\n';
  } catch (const std::invalid_argument&) {
    out << "dyadic_flag = unavailable (run too short)\n";
  }
}

}  // namespace nlfb
