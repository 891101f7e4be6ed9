#include "cli_app.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "selfsim/diagnostics.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/format.hpp"
#include "selfsim/integrator.hpp"
#include "selfsim/shooting.hpp"
#include "selfsim/trajectory_io.hpp"
#include "selfsim/verify.hpp"

namespace selfsim::cli {

namespace fs = std::filesystem;

namespace {

// Thrown for malformed user input; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json num(double x) {
  if (!std::isfinite(x)) return shortest(x);
  if (x == std::trunc(x) && std::abs(x) < 9007199254740992.0) return static_cast<std::int64_t>(x);
  return x;
}

json exponent_json(const Exponent& e) { return e.is_finite() ? num(e.value()) : json("inf"); }

fs::path default_out_dir() {
  if (const char* env = std::getenv("SELFSIM_OUT_DIR"); env && *env) return env;
  return ".";
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Run manifest, written on every exit path once the command has started.
class Manifest {
 public:
  Manifest(fs::path path, std::string command, bool deterministic)
      : path_(std::move(path)), deterministic_(deterministic), start_(std::chrono::steady_clock::now()) {
    body_["tool"] = "selfsim";
    body_["version"] = version;
    body_["command"] = std::move(command);
    body_["outputs"] = json::array({path_.filename().string()});
    body_["terminations"] = json::array();
    body_["error"] = nullptr;
  }

  json& operator[](const char* key) { return body_[key]; }
  void output(const fs::path& p) { body_["outputs"].push_back(p.filename().string()); }
  void termination(json t) { body_["terminations"].push_back(std::move(t)); }
  void fail(const std::string& message) { body_["error"] = message; }

  void write() {
    const double secs = deterministic_ ? 0.0
                                       : std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    body_["wall_clock_seconds"] = secs;
    write_text(path_, body_.dump(2) + "\n");
  }

 private:
  fs::path path_;
  bool deterministic_;
  std::chrono::steady_clock::time_point start_;
  json body_;
};

template <class F>
int with_manifest(Manifest& m, F&& body) {
  try {
    const int code = body();
    m.write();
    return code;
  } catch (const std::exception& e) {
    m.fail(e.what());
    m.write();
    throw;
  }
}

void emit_gnuplot(const fs::path& script, const fs::path& csv, const Trajectory& traj) {
  std::ostringstream gp;
  const bool log_x = traj.meta().frame != Frame::log_phase && traj.coord_min() > 0.0;
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << (traj.meta().frame == Frame::log_phase ? "s" : "r") << "'\n"
     << "set ylabel '" << to_string(traj.meta().frame) << "'\n";
  if (log_x) gp << "set logscale x\n";
  gp << "plot '" << csv.filename().string() << "' using 1:2 with lines\n";
  write_text(script, gp.str());
}

// ---------------------------------------------------------------- exponents

int cmd_exponents(double n, bool real_n, std::ostream& out, std::ostream& err) {
  if (!real_n && n != std::trunc(n)) throw UsageError("--n must be an integer (use --real-n for continuous n)");
  const ExponentTable t = exponent_table(n);
  const std::pair<const char*, const Exponent*> rows[] = {{"p_F", &t.fujita},
                                                           {"p_sg", &t.singular},
                                                           {"p_S", &t.sobolev},
                                                           {"p_JL", &t.joseph_lundgren},
                                                           {"p_JL*", &t.joseph_lundgren_dual},
                                                           {"p_L", &t.lepin}};
  json j{{"n", num(n)}};
  for (const auto& [name, e] : rows) {
    j[name] = exponent_json(*e);
    err << name << std::string(7 - std::string_view(name).size(), ' ') << e->to_string() << '\n';
  }
  out << j.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- shoot

struct ShootArgs {
  double n = 0, p = 0;
  std::string kind = "forward";
  std::optional<double> a, singular;
  int root = 1;
  double phase = 0.0;
  std::optional<double> eps;
  std::optional<double> r_end;
  double rel_tol = 1e-11, abs_tol = 1e-13;
  std::optional<std::string> frame;
  std::string out_dir, name = "shoot";
  bool gnuplot = false, deterministic = false;
};

int cmd_shoot(const ShootArgs& s, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  if (s.a.has_value() == s.singular.has_value()) throw UsageError("exactly one of --a or --singular is required");
  const EquationKind kind = parse_kind(s.kind);
  const Params k = derived_constants(s.n, s.p);
  const Frame out_frame = s.frame ? parse_frame(*s.frame) : (s.a ? Frame::physical_w : Frame::scaled_v);
  if (s.root != 1 && s.root != 2) throw UsageError("--root must be 1 or 2");

  ShotOptions o = default_shot_options(kind);
  o.integration.rel_tol = s.rel_tol;
  o.integration.abs_tol = s.abs_tol;
  if (s.r_end) o.integration.r_end = *s.r_end;
  o.start_radius = s.eps;
  o.integration.validate();

  const fs::path dir = s.out_dir.empty() ? default_out_dir() : fs::path(s.out_dir);
  fs::create_directories(dir);
  Manifest m(dir / (s.name + ".manifest.json"), "shoot", s.deterministic);
  m["argv"] = argv;
  m["params"] = to_json(k);
  m["kind"] = to_string(kind);
  m["frame"] = to_string(out_frame);
  m["options"] = to_json(o.integration);
  json config{{"n", s.n}, {"p", s.p}, {"kind", to_string(kind)}, {"frame", to_string(out_frame)},
              {"options", to_json(o.integration)}};
  config["a"] = s.a ? json(*s.a) : json(nullptr);
  config["singular"] = s.singular ? json(*s.singular) : json(nullptr);
  config["eps"] = s.eps ? json(*s.eps) : json(nullptr);
  config["root"] = s.root;
  config["phase"] = s.phase;
  m["config_digest"] = sha256_hex(config.dump());

  return with_manifest(m, [&] {
    ShotClassification c;
    std::optional<Trajectory> traj;
    if (s.a) {
      Shot shot = shoot(kind, k, *s.a, o);
      c = shot.classification;
      traj.emplace(std::move(shot.trajectory));
    } else {
      const double eps = s.eps.value_or(1e-2);
      const auto roots = indicial_roots(s.n, s.p);
      const ProfileState start = (*s.singular == 0.0 || roots.is_real())
                                     ? singular_start(kind, k, *s.singular, s.root, eps)
                                     : spiral_start(kind, k, *s.singular, s.phase, eps);
      traj.emplace(integrate(start, o.integration));
      switch (traj->meta().termination) {
        case Termination::hit_floor: c.tag = ShotTag::hits_zero; break;
        case Termination::hit_ceiling:
        case Termination::departure: c.tag = ShotTag::blowup; break;
        case Termination::span_end: c.tag = ShotTag::positive_decaying; break;
        default: c.tag = ShotTag::undetermined; break;
      }
      c.radius = traj->meta().termination_coord;
    }
    const double residual = traj->size() >= 3 ? residual_of(*traj) : NAN;
    const Trajectory shown = transform_trajectory(*traj, out_frame);

    const fs::path csv = dir / (s.name + ".csv");
    save_trajectory(csv, shown);
    m.output(csv);
    m.output(csv.string() + ".json");
    if (s.gnuplot) {
      const fs::path gp = dir / (s.name + ".gp");
      emit_gnuplot(gp, csv, shown);
      m.output(gp);
    }

    json t{{"tag", to_string(c.tag)},
           {"termination", to_string(traj->meta().termination)},
           {"steps_accepted", traj->meta().steps_accepted},
           {"steps_rejected", traj->meta().steps_rejected},
           {"residual", num(residual)}};
    t["radius"] = c.radius ? json(*c.radius) : json(nullptr);
    t["constant_profile"] = c.constant_profile;
    if (c.ell) t["ell"] = {{"value", c.ell->value}, {"converged", c.ell->converged}};
    m.termination(t);

    out << "tag: " << to_string(c.tag);
    if (c.radius) out << " at r = " << shortest(*c.radius);
    if (c.constant_profile) out << " (constant profile)";
    out << '\n';
    if (c.ell) out << "ell: " << shortest(c.ell->value) << (c.ell->converged ? " (converged)" : " (not converged)") << '\n';
    out << "residual: " << shortest(residual) << '\n';
    out << "samples: " << shown.size() << " written to " << csv.string() << '\n';
    if (c.tag == ShotTag::undetermined) {
      err << "undetermined: " << to_string(traj->meta().termination) << '\n';
      return 3;
    }
    return 0;
  });
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, const std::string& out_file, std::ostream& out, std::ostream& err) {
  std::vector<int> ids;
  try {
    ids = suite_criteria(suite);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const SuiteReport rep = run_suite(suite);
  const std::string text = rep.to_json().dump(2) + "\n";
  if (out_file.empty()) out << text;
  else write_text(out_file, text);
  for (const auto& c : rep.criteria)
    err << (c.pass() ? "PASS " : "FAIL ") << c.id << ' ' << c.title << '\n';
  return rep.pass() ? 0 : 1;
}

// ---------------------------------------------------------------- sweep

struct SweepConfig {
  double n = 0, p = 0;
  EquationKind kind = EquationKind::forward_profile;
  std::vector<double> a_grid, delta_grid;
  bool probe = false;
  std::optional<double> r_end, rel_tol, abs_tol, eps, r_inner;
  int root = 1;
  unsigned threads = 1;
  std::optional<std::string> name;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> UsageError {
    return UsageError("config line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw fail("duplicate key '" + key + "'");
    auto number = [&]() {
      try {
        return parse_double(value);
      } catch (const Error&) {
        throw fail("key '" + key + "': not a number: '" + std::string(value) + "'");
      }
    };
    auto list = [&]() {
      std::vector<double> xs;
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        if (item.empty()) throw fail("key '" + key + "': empty list item");
        try {
          xs.push_back(parse_double(item));
        } catch (const Error&) {
          throw fail("key '" + key + "': not a number: '" + std::string(item) + "'");
        }
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      if (xs.empty()) throw fail("key '" + key + "': empty grid");
      return xs;
    };
    if (key == "n") c.n = number();
    else if (key == "p") c.p = number();
    else if (key == "kind") {
      try {
        c.kind = parse_kind(value);
      } catch (const Error&) {
        throw fail("key 'kind': expected forward, backward or steady");
      }
    } else if (key == "a_grid") c.a_grid = list();
    else if (key == "delta_grid") {
      c.delta_grid = list();
      c.probe = true;
    } else if (key == "r_end") c.r_end = number();
    else if (key == "r_inner") c.r_inner = number();
    else if (key == "rel_tol") c.rel_tol = number();
    else if (key == "abs_tol") c.abs_tol = number();
    else if (key == "eps") c.eps = number();
    else if (key == "root") c.root = static_cast<int>(number());
    else if (key == "threads") {
      const double t = number();
      if (!(t >= 1.0) || t != std::trunc(t) || t > 1024) throw fail("key 'threads': expected an integer in [1, 1024]");
      c.threads = static_cast<unsigned>(t);
    } else if (key == "name") c.name = std::string(value);
    else throw fail("unknown key '" + key + "'");
  }
  for (const char* required : {"n", "p", "kind"})
    if (!seen.count(required)) throw UsageError(std::string("config: missing key '") + required + "'");
  if (seen.count("a_grid") == seen.count("delta_grid"))
    throw UsageError("config: exactly one of 'a_grid' or 'delta_grid' is required");
  return c;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, bool deterministic,
              const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const std::string bytes = read_file(config_path);
  const SweepConfig c = parse_sweep_config(bytes);
  Params k;
  try {
    k = derived_constants(c.n, c.p);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }

  const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
  fs::create_directories(dir);
  const std::string name = c.name.value_or(fs::path(config_path).stem().string());
  Manifest m(dir / (name + ".manifest.json"), "sweep", deterministic);
  m["argv"] = argv;
  m["config_file"] = fs::path(config_path).filename().string();
  m["config_digest"] = sha256_hex(bytes);
  m["params"] = to_json(k);
  m["kind"] = to_string(c.kind);
  m["threads"] = c.threads;

  return with_manifest(m, [&] {
    if (c.probe) {
      ProbeOptions po;
      po.kind = c.kind;
      if (c.eps) po.eps = *c.eps;
      if (c.r_inner) po.r_inner = *c.r_inner;
      if (c.r_end) po.r_outer = *c.r_end;
      if (c.rel_tol) po.rel_tol = *c.rel_tol;
      if (c.abs_tol) po.abs_tol = *c.abs_tol;
      po.root_index = c.root;
      std::vector<double> grid = c.delta_grid;
      std::sort(grid.begin(), grid.end());
      const auto last = std::unique(grid.begin(), grid.end());
      if (last != grid.end()) err << "warning: removed " << (grid.end() - last) << " duplicate grid value(s)\n";
      grid.erase(last, grid.end());
      const ProbeReport rep = uniqueness_probe(k, grid, po);
      std::ostringstream csv;
      write_probe_csv(csv, rep);
      const fs::path csv_path = dir / (name + ".csv");
      write_text(csv_path, csv.str());
      m.output(csv_path);
      const fs::path summary = dir / (name + ".summary.json");
      write_text(summary, probe_summary(rep).dump(2) + "\n");
      m.output(summary);
      for (const auto& e : rep.entries)
        m.termination({{"delta", e.delta},
                       {"inward", to_string(e.inward_termination)},
                       {"outward", to_string(e.outward_termination)}});
      out << "survivors: " << rep.survivors << "  inconclusive: " << rep.inconclusive << '\n';
      if (rep.exit_slope)
        out << "exit slope: " << shortest(*rep.exit_slope) << " (linear theory " << shortest(rep.predicted_slope) << ")\n";
      return 0;
    }

    ShotOptions o = default_shot_options(c.kind);
    if (c.r_end) o.integration.r_end = *c.r_end;
    if (c.rel_tol) o.integration.rel_tol = *c.rel_tol;
    if (c.abs_tol) o.integration.abs_tol = *c.abs_tol;
    o.start_radius = c.eps;
    try {
      o.integration.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
    const SweepResult r = sweep(c.kind, k, c.a_grid, o, c.threads);
    if (!r.duplicates.empty()) err << "warning: removed " << r.duplicates.size() << " duplicate grid value(s)\n";
    std::ostringstream csv;
    write_sweep_csv(csv, r);
    const fs::path csv_path = dir / (name + ".csv");
    write_text(csv_path, csv.str());
    m.output(csv_path);
    const fs::path summary = dir / (name + ".summary.json");
    write_text(summary, sweep_summary(r).dump(2) + "\n");
    m.output(summary);
    for (const auto& e : r.grid) {
      m.termination({{"a", e.a}, {"tag", to_string(e.classification.tag)}});
      out << shortest(e.a) << ' ' << to_string(e.classification.tag) << '\n';
    }
    return 0;
  });
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[digest[i] >> 4];
    s += hex[digest[i] & 0xF];
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial self-similar profiles of u_t - Laplace u = u^p", "selfsim"};
  app.set_version_flag("--version", version);
  app.require_subcommand(1);

  double exp_n = 0;
  bool real_n = false;
  auto* exp = app.add_subcommand("exponents", "Critical exponent table");
  exp->add_option("--n", exp_n, "Dimension")->required();
  exp->add_flag("--real-n", real_n, "Allow non-integer n");

  ShootArgs sh;
  auto* shoot_cmd = app.add_subcommand("shoot", "Integrate one profile and write its trajectory");
  shoot_cmd->add_option("--n", sh.n, "Dimension")->required();
  shoot_cmd->add_option("--p", sh.p, "Exponent")->required();
  shoot_cmd->add_option("--kind", sh.kind, "forward | backward | steady")->capture_default_str();
  auto* a_opt = shoot_cmd->add_option("--a", sh.a, "Center value w(0)");
  auto* sing_opt = shoot_cmd->add_option("--singular", sh.singular, "Perturbation of U_* at r = eps");
  a_opt->excludes(sing_opt);
  shoot_cmd->add_option("--root", sh.root, "Indicial root for --singular (1 or 2)")->capture_default_str();
  shoot_cmd->add_option("--phase", sh.phase, "Phase for complex indicial roots")->capture_default_str();
  shoot_cmd->add_option("--eps", sh.eps, "Start radius");
  shoot_cmd->add_option("--r-end", sh.r_end, "End of the span");
  shoot_cmd->add_option("--rel-tol", sh.rel_tol)->capture_default_str();
  shoot_cmd->add_option("--abs-tol", sh.abs_tol)->capture_default_str();
  shoot_cmd->add_option("--frame", sh.frame, "Output frame: w | v | h | log");
  shoot_cmd->add_option("--out-dir", sh.out_dir, "Output directory (default $SELFSIM_OUT_DIR or .)");
  shoot_cmd->add_option("--name", sh.name, "Output file stem")->capture_default_str();
  shoot_cmd->add_flag("--gnuplot", sh.gnuplot, "Also write a gnuplot script");
  shoot_cmd->add_flag("--deterministic", sh.deterministic, "Record zero wall-clock in the manifest");

  std::string suite, verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Run an acceptance suite");
  verify_cmd->add_option("suite", suite, "identities | exponents | lemma21 | dichotomy | uniqueness-probe | all")
      ->required();
  verify_cmd->add_option("--out", verify_out, "Write the JSON report to a file");

  std::string config_path, sweep_dir;
  bool sweep_det = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep described by a key = value config file");
  sweep_cmd->add_option("config", config_path, "Config file")->required();
  sweep_cmd->add_option("--out-dir", sweep_dir, "Output directory (default $SELFSIM_OUT_DIR or .)");
  sweep_cmd->add_flag("--deterministic", sweep_det, "Record zero wall-clock in the manifest");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*exp) return cmd_exponents(exp_n, real_n, out, err);
    if (*shoot_cmd) return cmd_shoot(sh, args, out, err);
    if (*verify_cmd) return cmd_verify(suite, verify_out, out, err);
    if (*sweep_cmd) return cmd_sweep(config_path, sweep_dir, sweep_det, args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace selfsim::cli
