#include "selfsim/trajectory_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "selfsim/errors.hpp"
#include "selfsim/format.hpp"

namespace selfsim {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string opt(const std::optional<double>& x) { return x ? shortest(*x) : std::string{}; }

}  // namespace

json to_json(const Params& k) {
  json j{{"n", k.n}, {"p", k.p}, {"alpha", k.alpha}, {"beta", k.beta}, {"gamma", k.gamma}, {"kappa", k.kappa}};
  j["L"] = k.amplitude ? json(*k.amplitude) : json(nullptr);
  return j;
}

json to_json(const IntegrationOptions& o) {
  json j{{"rel_tol", o.rel_tol},
         {"abs_tol", o.abs_tol},
         {"r_end", o.r_end},
         {"samples_per_decade", o.samples_per_decade},
         {"max_steps", o.max_steps},
         {"detect_departure", o.detect_departure}};
  j["value_floor"] = o.value_floor ? json(*o.value_floor) : json(nullptr);
  j["value_ceiling"] = o.value_ceiling ? json(*o.value_ceiling) : json(nullptr);
  return j;
}

json to_json(const TrajectoryMeta& m) {
  json j{{"kind", to_string(m.kind)},
         {"frame", to_string(m.frame)},
         {"params", to_json(m.params)},
         {"termination", to_string(m.termination)},
         {"steps_accepted", m.steps_accepted},
         {"steps_rejected", m.steps_rejected}};
  j["options"] = m.options ? to_json(*m.options) : json(nullptr);
  j["termination_coord"] = m.termination_coord ? json(*m.termination_coord) : json(nullptr);
  return j;
}

TrajectoryMeta meta_from_json(const json& j) {
  try {
    TrajectoryMeta m;
    m.kind = parse_kind(j.at("kind").get<std::string>());
    m.frame = parse_frame(j.at("frame").get<std::string>());
    m.params = derived_constants(j.at("params").at("n").get<double>(), j.at("params").at("p").get<double>());
    m.termination = parse_termination(j.at("termination").get<std::string>());
    m.steps_accepted = j.at("steps_accepted").get<std::size_t>();
    m.steps_rejected = j.at("steps_rejected").get<std::size_t>();
    if (!j.at("termination_coord").is_null()) m.termination_coord = j["termination_coord"].get<double>();
    if (const auto& o = j.at("options"); !o.is_null()) {
      IntegrationOptions io;
      io.rel_tol = o.at("rel_tol").get<double>();
      io.abs_tol = o.at("abs_tol").get<double>();
      io.r_end = o.at("r_end").get<double>();
      io.samples_per_decade = o.at("samples_per_decade").get<int>();
      io.max_steps = o.at("max_steps").get<std::size_t>();
      io.detect_departure = o.at("detect_departure").get<bool>();
      io.value_floor = o.at("value_floor").is_null() ? std::nullopt : std::optional(o["value_floor"].get<double>());
      io.value_ceiling =
          o.at("value_ceiling").is_null() ? std::nullopt : std::optional(o["value_ceiling"].get<double>());
      m.options = io;
    }
    return m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("trajectory meta: ") + e.what());
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const bool curv = traj.has_curvature();
  out << (curv ? "coord,value,slope,curvature\n" : "coord,value,slope\n");
  for (const auto& s : traj.samples()) {
    out << shortest(s.coord) << ',' << shortest(s.value) << ',' << shortest(s.slope);
    if (curv) out << ',' << shortest(s.curvature);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in, const TrajectoryMeta& meta) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("trajectory csv: empty input");
  bool curv;
  if (line == "coord,value,slope,curvature") curv = true;
  else if (line == "coord,value,slope") curv = false;
  else throw InvalidArgument("trajectory csv line 1: unexpected header '" + line + "'");

  std::vector<Sample> samples;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != (curv ? 4u : 3u))
      throw InvalidArgument("trajectory csv line " + std::to_string(lineno) + ": wrong column count");
    try {
      Sample s{parse_double(cells[0]), parse_double(cells[1]), parse_double(cells[2]), 0.0};
      if (curv) s.curvature = parse_double(cells[3]);
      samples.push_back(s);
    } catch (const Error& e) {
      throw InvalidArgument("trajectory csv line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return Trajectory(std::move(samples), meta, curv);
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw Error("cannot write " + path.string());
  write_trajectory_csv(csv, traj);
  std::ofstream side(path.string() + ".json", std::ios::binary);
  if (!side) throw Error("cannot write " + path.string() + ".json");
  side << to_json(traj.meta()).dump(2) << '\n';
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream side(path.string() + ".json", std::ios::binary);
  if (!side) throw InvalidArgument("cannot read " + path.string() + ".json");
  json j;
  try {
    j = json::parse(side);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ".json: " + e.what());
  }
  std::ifstream csv(path, std::ios::binary);
  if (!csv) throw InvalidArgument("cannot read " + path.string());
  return read_trajectory_csv(csv, meta_from_json(j));
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "a,tag,terminal_value,ell,ell_converged\n";
  for (const auto& e : result.grid) {
    const auto& c = e.classification;
    out << shortest(e.a) << ',' << to_string(c.tag) << ',' << shortest(c.terminal.value) << ',';
    if (c.ell) out << shortest(c.ell->value) << ',' << (c.ell->converged ? "true" : "false");
    else out << ',';
    out << '\n';
  }
}

json sweep_summary(const SweepResult& result) {
  std::map<std::string, int> counts;
  for (const auto& e : result.grid) ++counts[std::string(to_string(e.classification.tag))];
  json brackets = json::array();
  for (const auto& [i, j] : result.brackets)
    brackets.push_back({{"a_lo", result.grid[i].a},
                        {"a_hi", result.grid[j].a},
                        {"tag_lo", to_string(result.grid[i].classification.tag)},
                        {"tag_hi", to_string(result.grid[j].classification.tag)}});
  return json{{"points", result.grid.size()}, {"tags", counts}, {"brackets", brackets}, {"duplicates", result.duplicates}};
}

void write_ledger_csv(std::ostream& out, const EnergyLedger& ledger) {
  out << "r,c,I,residual\n";
  for (const auto& e : ledger.entries)
    out << shortest(e.r) << ',' << shortest(e.c) << ',' << shortest(e.I) << ',' << shortest(e.residual) << '\n';
}

void write_probe_csv(std::ostream& out, const ProbeReport& report) {
  out << "delta,inward_termination,inward_exit_log_distance,outward_termination,outward_exit_radius,survivor,"
         "inconclusive\n";
  for (const auto& e : report.entries)
    out << shortest(e.delta) << ',' << to_string(e.inward_termination) << ',' << opt(e.inward_exit_log_distance) << ','
        << to_string(e.outward_termination) << ',' << opt(e.outward_exit_radius) << ',' << (e.survivor ? "true" : "false")
        << ',' << (e.inconclusive ? "true" : "false") << '\n';
}

json probe_summary(const ProbeReport& r) {
  json j{{"eps", r.eps},
         {"r_inner", r.r_inner},
         {"r_outer", r.r_outer},
         {"survivors", r.survivors},
         {"inconclusive", r.inconclusive},
         {"predicted_slope", r.predicted_slope}};
  j["exit_slope"] = r.exit_slope ? json(*r.exit_slope) : json(nullptr);
  return j;
}

}  // namespace selfsim
