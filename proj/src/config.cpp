#include "nlfb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlfb {
namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "config line " << line << ": " << what;
  throw std::invalid_argument(os.str());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string key, value;
  std::size_t line = 0;
  mutable bool used = false;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;

  const Entry* find(const std::string& key) const {
    for (const auto& e : entries)
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    return nullptr;
  }
};

// Raw scan: section headers, key = value lines, comments at '#' or ';'.
std::vector<Section> scan(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    if (cut != std::string::npos) raw.erase(cut);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) fail(line, "empty section name");
      sections.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for key '" + key + "'");
    if (sections.empty()) fail(line, "key '" + key + "' outside any section");
    for (const auto& e : sections.back().entries)
      if (e.key == key)
        fail(line, "duplicate key '" + key + "' in [" + sections.back().name +
                       "]");
    sections.back().entries.push_back({key, value, line, false});
  }
  return sections;
}

double to_double(const Entry& e) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    fail(e.line, "could not parse '" + e.value + "' as a number");
  }
  if (trim(e.value.substr(pos)) != "")
    fail(e.line, "trailing text after number in '" + e.value + "'");
  return v;
}

std::size_t to_size(const Entry& e) {
  const double v = to_double(e);
  if (v < 0.0 || v != std::floor(v))
    fail(e.line, "'" + e.value + "' is not a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool to_bool(const Entry& e) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(e.line, "'" + e.value + "' is not a boolean");
}

std::vector<double> number_list(const Entry& e, const std::string& head) {
  std::istringstream in(e.value.substr(head.size()));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      fail(e.line, "could not parse '" + tok + "' as a number");
    }
    if (pos != tok.size())
      fail(e.line, "could not parse '" + tok + "' as a number");
    out.push_back(v);
  }
  return out;
}

std::string head_word(const std::string& value) {
  const auto sp = value.find_first_of(" \t");
  return sp == std::string::npos ? value : value.substr(0, sp);
}

// Wraps a kernel/reaction factory call so its own validation errors carry
// the config line number.
template <typename Fn>
auto lined(std::size_t line, Fn&& make) -> decltype(make()) {
  try {
    return make();
  } catch (const std::invalid_argument& err) {
    fail(line, err.what());
  } catch (const std::domain_error& err) {
    fail(line, err.what());
  }
}

Kernel to_kernel(const Entry& e) {
  const std::string fam = head_word(e.value);
  const std::vector<double> p = number_list(e, fam);
  if (fam == "laplace") {
    if (p.size() > 1) fail(e.line, "laplace takes at most one parameter");
    return lined(e.line, [&] { return Kernel::laplace(p.empty() ? 1.0 : p[0]); });
  }
  if (fam == "polynomial") {
    if (p.size() > 1) fail(e.line, "polynomial takes at most one parameter");
    return lined(e.line,
                 [&] { return Kernel::polynomial_compact(p.empty() ? 1.0 : p[0]); });
  }
  if (fam == "algebraic") {
    if (p.size() != 1) fail(e.line, "algebraic needs exactly one parameter");
    return lined(e.line, [&] { return Kernel::algebraic_tail(p[0]); });
  }
  if (fam == "table") {
    if (p.size() < 4 || p.size() % 2 != 0)
      fail(e.line, "kernel table needs x j pairs");
    std::vector<double> xs, js;
    for (std::size_t i = 0; i < p.size(); i += 2) {
      xs.push_back(p[i]);
      js.push_back(p[i + 1]);
    }
    return lined(e.line, [&] { return Kernel::from_table(xs, js); });
  }
  fail(e.line, "unknown kernel family '" + fam +
                   "' (laplace | polynomial | algebraic | table)");
}

Reaction to_reaction(const Entry& e) {
  const std::string kind = head_word(e.value);
  const std::vector<double> p = number_list(e, kind);
  if (kind != "logistic")
    fail(e.line, "unknown reaction '" + kind + "' (logistic <a> <b>)");
  if (p.size() != 2) fail(e.line, "logistic needs exactly two parameters");
  return lined(e.line, [&] { return Reaction::logistic(p[0], p[1]); });
}

InitialProfile to_profile(const Entry& e) {
  const std::string kind = head_word(e.value);
  const std::vector<double> p = number_list(e, kind);
  InitialProfile prof;
  if (kind == "cosine-bump") {
    if (p.size() != 1) fail(e.line, "cosine-bump needs one parameter");
    prof.preset = InitialProfile::Preset::cosine_bump;
    prof.amplitude = p[0];
    return prof;
  }
  if (kind == "constant-cap") {
    if (p.empty() || p.size() > 2)
      fail(e.line, "constant-cap needs one or two parameters");
    prof.preset = InitialProfile::Preset::constant_cap;
    prof.amplitude = p[0];
    prof.ramp = p.size() == 2 ? p[1] : 0.0;
    return prof;
  }
  if (kind == "table") {
    if (p.size() < 4 || p.size() % 2 != 0)
      fail(e.line, "profile table needs x v pairs");
    prof.preset = InitialProfile::Preset::table;
    for (std::size_t i = 0; i < p.size(); i += 2) {
      prof.xs.push_back(p[i]);
      prof.vals.push_back(p[i + 1]);
    }
    return prof;
  }
  fail(e.line,
       "unknown profile '" + kind + "' (cosine-bump | constant-cap | table)");
}

const Section* find_section(const std::vector<Section>& sections,
                            const std::string& name) {
  const Section* hit = nullptr;
  for (const auto& s : sections)
    if (s.name == name) {
      if (hit) fail(s.line, "duplicate section [" + name + "]");
      hit = &s;
    }
  return hit;
}

const Entry& require_key(const Section& s, const std::string& key) {
  const Entry* e = s.find(key);
  if (!e) fail(s.line, "missing key '" + key + "' in [" + s.name + "]");
  return *e;
}

void reject_unused(const Section& s) {
  for (const auto& e : s.entries)
    if (!e.used) fail(e.line, "unknown key '" + e.key + "' in [" + s.name + "]");
}

}  // namespace

SimConfig parse_sim_config(const std::string& text) {
  const std::vector<Section> sections = scan(text);
  for (const auto& s : sections)
    if (s.name != "model" && s.name != "initial" && s.name != "grid" &&
        s.name != "time" && s.name != "stopping")
      fail(s.line, "unknown section [" + s.name + "]");

  const Section* model = find_section(sections, "model");
  const Section* initial = find_section(sections, "initial");
  if (!model) throw std::invalid_argument("config: missing [model] section");
  if (!initial)
    throw std::invalid_argument("config: missing [initial] section");

  SimConfig cfg;
  const Entry& variant = require_key(*model, "variant");
  const bool pair = variant.value == "predprey";
  if (variant.value == "dirichlet" || variant.value == "neumann") {
    ScalarSpec sc;
    sc.boundary = variant.value == "dirichlet" ? Boundary::dirichlet
                                               : Boundary::neumann;
    sc.kernel = to_kernel(require_key(*model, "kernel"));
    sc.reaction = to_reaction(require_key(*model, "reaction"));
    if (const Entry* e = model->find("d")) sc.d = to_double(*e);
    if (const Entry* e = model->find("mu")) sc.mu = to_double(*e);
    cfg.model = sc;
  } else if (pair) {
    PredPreySpec pp;
    pp.kernel1 = to_kernel(require_key(*model, "kernel1"));
    pp.kernel2 = to_kernel(require_key(*model, "kernel2"));
    pp.a1 = to_double(require_key(*model, "a1"));
    pp.b1 = to_double(require_key(*model, "b1"));
    pp.c1 = to_double(require_key(*model, "c1"));
    pp.a2 = to_double(require_key(*model, "a2"));
    pp.b2 = to_double(require_key(*model, "b2"));
    pp.c2 = to_double(require_key(*model, "c2"));
    if (const Entry* e = model->find("d1")) pp.d1 = to_double(*e);
    if (const Entry* e = model->find("d2")) pp.d2 = to_double(*e);
    if (const Entry* e = model->find("mu1")) pp.mu1 = to_double(*e);
    if (const Entry* e = model->find("mu2")) pp.mu2 = to_double(*e);
    cfg.model = pp;
  } else {
    fail(variant.line, "unknown variant '" + variant.value +
                           "' (dirichlet | neumann | predprey)");
  }
  reject_unused(*model);

  cfg.init.h0 = to_double(require_key(*initial, "h0"));
  cfg.init.u1 = to_profile(require_key(*initial, "u1"));
  if (const Entry* e = initial->find("u2")) {
    if (!pair) fail(e->line, "u2 is only meaningful for variant predprey");
    cfg.init.u2 = to_profile(*e);
  }
  reject_unused(*initial);

  if (const Section* grid = find_section(sections, "grid")) {
    if (const Entry* e = grid->find("dx")) cfg.dx = to_double(*e);
    reject_unused(*grid);
  }
  if (const Section* time = find_section(sections, "time")) {
    if (const Entry* e = time->find("t_max")) cfg.t_max = to_double(*e);
    if (const Entry* e = time->find("dt")) cfg.dt = to_double(*e);
    if (const Entry* e = time->find("series_stride"))
      cfg.series_stride = to_size(*e);
    if (const Entry* e = time->find("snapshot_count"))
      cfg.snapshot_count = to_size(*e);
    reject_unused(*time);
  }
  if (const Section* stop = find_section(sections, "stopping")) {
    if (const Entry* e = stop->find("spread_h")) cfg.spread_h = to_double(*e);
    if (const Entry* e = stop->find("spread_margin"))
      cfg.spread_margin = to_double(*e);
    if (const Entry* e = stop->find("stop_on_spread"))
      cfg.stop_on_spread = to_bool(*e);
    if (const Entry* e = stop->find("eps_vanish"))
      cfg.eps_vanish = to_double(*e);
    if (const Entry* e = stop->find("stall_window"))
      cfg.stall_window = to_double(*e);
    if (const Entry* e = stop->find("eps_stall")) cfg.eps_stall = to_double(*e);
    if (const Entry* e = stop->find("stop_on_vanish"))
      cfg.stop_on_vanish = to_bool(*e);
    reject_unused(*stop);
  }
  return cfg;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str());
}

SweepPlan parse_sweep_plan(const std::string& text,
                           const std::string& base_dir) {
  const std::vector<Section> sections = scan(text);
  SweepPlan plan;
  for (const auto& s : sections) {
    if (s.name.rfind("job ", 0) != 0)
      fail(s.line, "sweep sections must look like [job <name>]");
    SweepJob job;
    job.name = trim(s.name.substr(4));
    if (job.name.empty()) fail(s.line, "empty job name");
    for (const auto& other : plan.jobs)
      if (other.name == job.name)
        fail(s.line, "duplicate job name '" + job.name + "'");

    const Entry& config = require_key(s, "config");
    std::filesystem::path p(config.value);
    job.config_path =
        p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p)
                                           .lexically_normal()
                                           .string();
    const Entry& target = require_key(s, "target");
    job.target = target.value;
    if (job.target != "speed" && job.target != "outcome" &&
        job.target != "mu_star" && job.target != "l_star" &&
        job.target != "c0")
      fail(target.line, "unknown target '" + job.target +
                            "' (speed | outcome | mu_star | l_star | c0)");
    if (const Entry* e = s.find("rel_tol")) job.rel_tol = to_double(*e);
    if (const Entry* e = s.find("mu2_ratio")) job.mu2_ratio = to_double(*e);
    if (const Entry* e = s.find("window_frac"))
      job.window_frac = to_double(*e);
    if (const Entry* e = s.find("mass_cap")) job.mass_cap = to_double(*e);
    reject_unused(s);
    plan.jobs.push_back(std::move(job));
  }
  return plan;
}

SweepPlan load_sweep_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("plan: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sweep_plan(buf.str(),
                          std::filesystem::path(path).parent_path().string());
}

}  // namespace nlfb
