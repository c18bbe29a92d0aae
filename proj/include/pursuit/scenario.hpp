#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "pursuit/controls.hpp"
#include "pursuit/dynamics.hpp"
#include "pursuit/policies.hpp"
#include "pursuit/reachability.hpp"
#include "pursuit/strategy.hpp"

namespace pursuit {

/// Lossless decimal rendering of a double (17 significant digits).
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct OutputRequest {
  bool report = true;
  bool trajectory = false;
  bool chain = false;

  friend bool operator==(const OutputRequest&, const OutputRequest&) = default;
};

/// One fully validated run configuration.
struct Scenario {
  GameParams params;
  PolicySpec policy;
  std::size_t grid_n = 256;
  OutputRequest outputs;
  std::string label;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(std::string key, std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": key '" + key + "': " + message),
        key_(std::move(key)),
        line_(line) {}

  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

namespace detail {

struct RawEntry {
  std::string value;
  std::size_t line = 0;
};

struct RawBlock {
  std::map<std::string, RawEntry> entries;
  std::size_t first_line = 0;
};

inline std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

/// Split a config document into '---'-separated blocks of key = value lines.
inline std::vector<RawBlock> split_blocks(std::string_view text) {
  std::vector<RawBlock> blocks;
  RawBlock current;
  bool current_has_content = false;
  std::size_t line_no = 0;

  std::istringstream stream{std::string(text)};
  std::string raw_line;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    const std::string line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    if (line == "---") {
      if (current_has_content) blocks.push_back(std::move(current));
      current = RawBlock{};
      current_has_content = false;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioParseError(line, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ScenarioParseError(line, line_no, "empty key");
    if (!current_has_content) current.first_line = line_no;
    current_has_content = true;
    if (!current.entries.emplace(key, RawEntry{value, line_no}).second)
      throw ScenarioParseError(key, line_no, "duplicate key");
  }
  if (current_has_content) blocks.push_back(std::move(current));
  return blocks;
}

inline double parse_number(const std::string& key, const RawEntry& entry) {
  const char* begin = entry.value.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value))
    throw ScenarioParseError(key, entry.line, "expected a finite number, got '" + entry.value +
                                                  "'");
  return value;
}

inline std::uint64_t parse_unsigned(const std::string& key, const RawEntry& entry) {
  if (entry.value.empty() || entry.value.front() == '-')
    throw ScenarioParseError(key, entry.line, "expected a non-negative integer");
  try {
    std::size_t consumed = 0;
    const std::uint64_t value = std::stoull(entry.value, &consumed);
    if (consumed != entry.value.size())
      throw ScenarioParseError(key, entry.line, "expected an integer");
    return value;
  } catch (const ScenarioParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ScenarioParseError(key, entry.line, "expected an integer, got '" + entry.value + "'");
  }
}

inline std::vector<std::string> parse_list(const std::string& key, const RawEntry& entry) {
  const std::string& v = entry.value;
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ScenarioParseError(key, entry.line, "expected an array like [a, b]");
  std::vector<std::string> items;
  std::string body = v.substr(1, v.size() - 2);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = body.find(',', pos);
    const std::string item =
        trim(comma == std::string::npos ? body.substr(pos) : body.substr(pos, comma - pos));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return items;
}

inline StateVector parse_vector(const std::string& key, const RawEntry& entry) {
  const std::vector<std::string> items = parse_list(key, entry);
  if (items.empty()) throw ScenarioParseError(key, entry.line, "vector must not be empty");
  std::vector<double> coords;
  coords.reserve(items.size());
  for (const std::string& item : items)
    coords.push_back(parse_number(key, RawEntry{item, entry.line}));
  return StateVector(std::move(coords));
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "label",  "phi",    "gamma",  "upsilon",        "dim",     "p0",
      "e_pos0", "e_vel0", "grid_n", "policy",         "direction", "target",
      "seed",   "budget_fraction", "outputs"};
  return keys;
}

inline Scenario scenario_from_block(const RawBlock& block) {
  for (const auto& [key, entry] : block.entries)
    if (!known_keys().count(key)) throw ScenarioParseError(key, entry.line, "unknown key");

  const auto require = [&](const std::string& key) -> const RawEntry& {
    const auto it = block.entries.find(key);
    if (it == block.entries.end())
      throw ScenarioParseError(key, block.first_line, "missing required key");
    return it->second;
  };
  const auto find = [&](const std::string& key) -> const RawEntry* {
    const auto it = block.entries.find(key);
    return it == block.entries.end() ? nullptr : &it->second;
  };

  const RawEntry& label_entry = require("label");
  if (label_entry.value.empty())
    throw ScenarioParseError("label", label_entry.line, "label must not be empty");

  const auto positive = [&](const std::string& key) {
    const RawEntry& entry = require(key);
    const double value = parse_number(key, entry);
    if (!(value > 0.0)) throw ScenarioParseError(key, entry.line, "must be > 0");
    return value;
  };
  const double phi = positive("phi");
  const double gamma = positive("gamma");
  const double upsilon = positive("upsilon");

  const RawEntry& dim_entry = require("dim");
  const std::uint64_t dim = parse_unsigned("dim", dim_entry);
  if (dim < 1 || dim > kMaxDimension)
    throw ScenarioParseError("dim", dim_entry.line,
                             "must be in [1, " + std::to_string(kMaxDimension) + "]");

  const auto state_vector = [&](const std::string& key) {
    const RawEntry& entry = require(key);
    StateVector v = parse_vector(key, entry);
    if (v.dim() != dim)
      throw ScenarioParseError(key, entry.line,
                               "expected " + std::to_string(dim) + " coordinates, got " +
                                   std::to_string(v.dim()));
    return v;
  };
  const GameParams params(phi, gamma, upsilon, state_vector("p0"), state_vector("e_pos0"),
                          state_vector("e_vel0"));

  std::size_t grid_n = 256;
  if (const RawEntry* entry = find("grid_n")) {
    const std::uint64_t n = parse_unsigned("grid_n", *entry);
    if (n < 1 || n > kMaxSteps)
      throw ScenarioParseError("grid_n", entry->line,
                               "must be in [1, " + std::to_string(kMaxSteps) + "]");
    grid_n = n;
  }

  const RawEntry& policy_entry = require("policy");
  const std::optional<PolicyKind> kind = parse_policy_kind(policy_entry.value);
  if (!kind)
    throw ScenarioParseError("policy", policy_entry.line,
                             "unknown policy '" + policy_entry.value + "'");

  PolicySpec policy;
  policy.kind = *kind;
  const auto reject_unless = [&](const std::string& key, bool allowed) {
    const RawEntry* entry = find(key);
    if (entry && !allowed)
      throw ScenarioParseError(key, entry->line,
                               std::string("not allowed for policy '") +
                                   policy_kind_name(*kind) + "'");
    return entry;
  };
  const RawEntry* direction = reject_unless("direction", *kind == PolicyKind::constant);
  const RawEntry* target = reject_unless("target", *kind == PolicyKind::radial_extremal);
  const RawEntry* seed = reject_unless("seed", *kind == PolicyKind::random_admissible);
  const RawEntry* fraction =
      reject_unless("budget_fraction", *kind == PolicyKind::constant ||
                                           *kind == PolicyKind::random_admissible);

  if (fraction) {
    policy.budget_fraction = parse_number("budget_fraction", *fraction);
    if (!(policy.budget_fraction >= 0.0 && policy.budget_fraction <= 1.0))
      throw ScenarioParseError("budget_fraction", fraction->line, "must be in [0, 1]");
  }
  if (seed) policy.seed = parse_unsigned("seed", *seed);

  if (*kind == PolicyKind::constant) {
    if (!direction)
      throw ScenarioParseError("direction", block.first_line,
                               "missing required key for policy 'constant'");
    policy.direction = parse_vector("direction", *direction);
    if (policy.direction->dim() != dim)
      throw ScenarioParseError("direction", direction->line, "dimension mismatch");
    if (norm(*policy.direction) == 0.0)
      throw ScenarioParseError("direction", direction->line, "must be non-zero");
  }
  if (*kind == PolicyKind::radial_extremal) {
    if (!target)
      throw ScenarioParseError("target", block.first_line,
                               "missing required key for policy 'radial-extremal'");
    policy.target = parse_vector("target", *target);
    if (policy.target->dim() != dim)
      throw ScenarioParseError("target", target->line, "dimension mismatch");
    const ReachSpec ball = attainability_ball(params, Role::evader);
    if (!in_ball(*policy.target, ball.center, ball.radius))
      throw ScenarioParseError("target", target->line,
                               "outside the evader attainability ball");
  }
  if (*kind == PolicyKind::z_boundary &&
      norm(params.reduced_e0() - params.p0()) == 0.0)
    throw ScenarioParseError("policy", policy_entry.line,
                             "z-boundary needs distinct reduced initial states");

  OutputRequest outputs;
  if (const RawEntry* entry = find("outputs")) {
    outputs = OutputRequest{false, false, false};
    for (const std::string& item : parse_list("outputs", *entry)) {
      if (item == "report") outputs.report = true;
      else if (item == "trajectory") outputs.trajectory = true;
      else if (item == "chain") outputs.chain = true;
      else
        throw ScenarioParseError("outputs", entry->line, "unknown artifact '" + item + "'");
    }
  }

  return Scenario{params, std::move(policy), grid_n, outputs, label_entry.value};
}

inline std::string format_vector(const StateVector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out + "]";
}

}  // namespace detail

/// Parse a document holding exactly one scenario.
inline Scenario parse_scenario(std::string_view text) {
  const std::vector<detail::RawBlock> blocks = detail::split_blocks(text);
  if (blocks.empty()) throw ScenarioParseError("document", 1, "no scenario found");
  if (blocks.size() > 1)
    throw ScenarioParseError("document", blocks[1].first_line,
                             "expected a single scenario, found " +
                                 std::to_string(blocks.size()));
  return detail::scenario_from_block(blocks.front());
}

inline std::string serialize_scenario(const Scenario& s) {
  std::string out;
  out += "label = " + s.label + "\n";
  out += "phi = " + format_double(s.params.phi()) + "\n";
  out += "gamma = " + format_double(s.params.gamma()) + "\n";
  out += "upsilon = " + format_double(s.params.upsilon()) + "\n";
  out += "dim = " + std::to_string(s.params.dim()) + "\n";
  out += "p0 = " + detail::format_vector(s.params.p0()) + "\n";
  out += "e_pos0 = " + detail::format_vector(s.params.e_pos0()) + "\n";
  out += "e_vel0 = " + detail::format_vector(s.params.e_vel0()) + "\n";
  out += "grid_n = " + std::to_string(s.grid_n) + "\n";
  out += std::string("policy = ") + policy_kind_name(s.policy.kind) + "\n";
  if (s.policy.kind == PolicyKind::constant) {
    out += "direction = " + detail::format_vector(*s.policy.direction) + "\n";
    out += "budget_fraction = " + format_double(s.policy.budget_fraction) + "\n";
  }
  if (s.policy.kind == PolicyKind::radial_extremal)
    out += "target = " + detail::format_vector(*s.policy.target) + "\n";
  if (s.policy.kind == PolicyKind::random_admissible) {
    out += "seed = " + std::to_string(s.policy.seed) + "\n";
    out += "budget_fraction = " + format_double(s.policy.budget_fraction) + "\n";
  }
  std::string artifacts;
  if (s.outputs.report) artifacts += "report";
  if (s.outputs.trajectory) artifacts += artifacts.empty() ? "trajectory" : ", trajectory";
  if (s.outputs.chain) artifacts += artifacts.empty() ? "chain" : ", chain";
  out += "outputs = [" + artifacts + "]\n";
  return out;
}

// ---------------------------------------------------------------------------
// Batch execution

/// Parse outcome for one block of a batch document.
struct BatchItem {
  std::size_t index = 0;
  std::string label;
  std::optional<Scenario> scenario;
  std::string error;  // parse error, empty when scenario is set
};

/// Split a batch document into items; per-block parse failures become error
/// items instead of aborting the whole batch.
inline std::vector<BatchItem> parse_batch(std::string_view text) {
  std::vector<detail::RawBlock> blocks = detail::split_blocks(text);
  std::vector<BatchItem> items;
  items.reserve(blocks.size());
  std::set<std::string> seen_labels;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    BatchItem item;
    item.index = i;
    const auto label_it = blocks[i].entries.find("label");
    item.label = label_it != blocks[i].entries.end() && !label_it->second.value.empty()
                     ? label_it->second.value
                     : "scenario-" + std::to_string(i + 1);
    try {
      Scenario scenario = detail::scenario_from_block(blocks[i]);
      if (!seen_labels.insert(scenario.label).second)
        throw ScenarioParseError("label", label_it->second.line,
                                 "duplicate label '" + scenario.label + "'");
      item.scenario = std::move(scenario);
    } catch (const ScenarioParseError& err) {
      item.error = err.what();
    }
    items.push_back(std::move(item));
  }
  return items;
}

struct BatchEntry {
  std::size_t index = 0;
  std::string label;
  bool ok = false;          // parsed, ran, and captured
  double gamma_sq = 0.0;    // pursuer budget energy of the scenario that ran
  std::string error;        // parse or run error
  std::optional<PursuitReport> report;
};

struct BatchSummary {
  std::vector<BatchEntry> entries;

  bool all_ok() const {
    for (const BatchEntry& e : entries)
      if (!e.ok) return false;
    return true;
  }
};

/// Run every parsed scenario through the pursuit; results keep batch order so
/// summaries are deterministic regardless of the worker count.
inline BatchSummary run_batch(const std::vector<BatchItem>& items, unsigned parallelism) {
  BatchSummary summary;
  summary.entries.resize(items.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      const BatchItem& item = items[i];
      BatchEntry& entry = summary.entries[i];
      entry.index = item.index;
      entry.label = item.label;
      if (!item.scenario) {
        entry.error = item.error;
        continue;
      }
      try {
        const Scenario& s = *item.scenario;
        const ControlSignal nu = build_policy(s.policy, s.params, s.grid_n);
        entry.report = run_pursuit(s.params, nu);
        entry.gamma_sq = s.params.gamma() * s.params.gamma();
        entry.ok = entry.report->captured;
        if (!entry.ok) entry.error = "not captured";
      } catch (const std::exception& err) {
        entry.error = std::string("run error: ") + err.what();
      }
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(items.size())));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  return summary;
}

// ---------------------------------------------------------------------------
// File artifacts

namespace detail {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace detail

inline std::string trajectory_csv(const Trajectory& traj) {
  const std::size_t dim = traj.p.front().dim();
  std::string out = "t";
  for (std::size_t i = 1; i <= dim; ++i) out += ",p_" + std::to_string(i);
  for (std::size_t i = 1; i <= dim; ++i) out += ",e_" + std::to_string(i);
  out += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out += format_double(traj.times[k]);
    for (std::size_t i = 0; i < dim; ++i) out += "," + format_double(traj.p[k][i]);
    for (std::size_t i = 0; i < dim; ++i) out += "," + format_double(traj.e[k][i]);
    out += "\n";
  }
  return out;
}

inline void emit_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  detail::write_text_file(path, trajectory_csv(traj));
}

/// Parse a trajectory CSV back into grid states (inverse of emit_trajectory).
inline Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty trajectory file");
  std::size_t columns = 1;
  for (char c : header) columns += c == ',';
  if (columns < 3 || (columns - 1) % 2 != 0)
    throw std::runtime_error("malformed trajectory header: " + header);
  const std::size_t dim = (columns - 1) / 2;

  Trajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = line.find(',', pos);
      const std::string cell =
          comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
      fields.push_back(std::strtod(cell.c_str(), nullptr));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != columns)
      throw std::runtime_error("malformed trajectory row: " + line);
    traj.times.push_back(fields[0]);
    traj.p.emplace_back(std::vector<double>(fields.begin() + 1, fields.begin() + 1 + dim));
    traj.e.emplace_back(std::vector<double>(fields.begin() + 1 + dim, fields.end()));
  }
  return traj;
}

/// Per-step rows of coordinates, preceded by the horizon.
inline std::string control_csv(const ControlSignal& u) {
  std::string out = "horizon," + format_double(u.horizon()) + "\n";
  for (std::size_t i = 1; i <= u.dim(); ++i)
    out += (i == 1 ? "u_" : ",u_") + std::to_string(i);
  out += "\n";
  for (std::size_t k = 0; k < u.steps(); ++k) {
    for (std::size_t i = 0; i < u.dim(); ++i)
      out += (i == 0 ? "" : ",") + format_double(u.value(k)[i]);
    out += "\n";
  }
  return out;
}

inline void emit_control(const ControlSignal& u, const std::filesystem::path& path) {
  detail::write_text_file(path, control_csv(u));
}

inline ControlSignal read_control_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("horizon,", 0) != 0)
    throw std::runtime_error("malformed control file: missing horizon");
  const double horizon = std::strtod(line.c_str() + 8, nullptr);
  if (!std::getline(in, line)) throw std::runtime_error("malformed control file: no header");
  std::vector<StateVector> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> coords;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = line.find(',', pos);
      const std::string cell =
          comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
      coords.push_back(std::strtod(cell.c_str(), nullptr));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    values.emplace_back(std::move(coords));
  }
  return ControlSignal(std::move(values), horizon);
}

namespace detail {

inline std::string chain_line_text(const char* name, const ChainLine& line) {
  return std::string(name) + ": lhs=" + format_double(line.lhs) +
         " rhs=" + format_double(line.rhs) + " pass=" + (line.pass ? "true" : "false") + "\n";
}

}  // namespace detail

inline std::string chain_text(const ChainDiagnostic& chain) {
  std::string out;
  out += detail::chain_line_text("z_margin", chain.z_margin);
  out += detail::chain_line_text("cauchy_schwarz", chain.cauchy_schwarz);
  out += detail::chain_line_text("quartic_budget", chain.quartic_budget);
  out += detail::chain_line_text("conclusion", chain.conclusion);
  return out;
}

inline std::string report_text(const Scenario& scenario, const PursuitReport& report) {
  std::string out;
  out += "label: " + scenario.label + "\n";
  out += std::string("policy: ") + policy_kind_name(scenario.policy.kind) + "\n";
  out += "grid_n: " + std::to_string(scenario.grid_n) + "\n";
  out += std::string("captured: ") + (report.captured ? "true" : "false") + "\n";
  out += "miss: " + format_double(report.miss) + "\n";
  out += "strategy_energy: " + format_double(report.strategy_energy) + "\n";
  out += "gamma_sq: " + format_double(scenario.params.gamma() * scenario.params.gamma()) + "\n";
  out += std::string("strategy_admissible: ") +
         (report.strategy_admissible ? "true" : "false") + "\n";
  out += std::string("evader_admissible: ") + (report.evader_admissible ? "true" : "false") +
         "\n";
  out += std::string("z_satisfied: ") +
         (report.z_satisfied ? (*report.z_satisfied ? "true" : "false") : "n/a") + "\n";
  out += std::string("chain_passes: ") + (report.chain.all_pass() ? "true" : "false") + "\n";
  return out;
}

inline std::string summary_csv(const BatchSummary& summary) {
  std::string out = "label,captured,miss,strategy_energy,gamma_sq,z_satisfied,chain_passes,error\n";
  for (const BatchEntry& entry : summary.entries) {
    out += detail::csv_escape(entry.label) + ",";
    if (entry.report) {
      const PursuitReport& r = *entry.report;
      out += std::string(r.captured ? "true" : "false") + ",";
      out += format_double(r.miss) + ",";
      out += format_double(r.strategy_energy) + ",";
      out += format_double(entry.gamma_sq) + ",";
      out += std::string(r.z_satisfied ? (*r.z_satisfied ? "true" : "false") : "n/a") + ",";
      out += std::string(r.chain.all_pass() ? "true" : "false") + ",";
    } else {
      out += ",,,,,,";
    }
    out += detail::csv_escape(entry.error) + "\n";
  }
  return out;
}

}  // namespace pursuit
