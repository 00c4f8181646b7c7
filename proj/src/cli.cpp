#include "lagmove/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lagmove/errors.hpp"
#include "lagmove/validation.hpp"

namespace lagmove::cli {

namespace {

struct RawOptions {
  std::string scenario = "rotation";
  std::string mover = "m1";
  double dt = 0.05;
  std::vector<double> dts;
  std::optional<double> t_end;
  std::string gradient = "analytic";
  int terms = 5;
  double radius_factor = 1.0;
  std::string out;
  std::string summary;
  int stride = 1;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, RawOptions& raw, bool sweep) {
  sub->add_option("--scenario", raw.scenario, "Scenario name")
      ->check(CLI::IsMember(scenario_names()));
  if (sweep) {
    sub->add_option("--dts", raw.dts, "Comma-separated time steps")->delimiter(',');
  } else {
    sub->add_option("--dt", raw.dt, "Time step");
    sub->add_option("--mover", raw.mover, "Movement scheme")
        ->transform(CLI::IsMember({"m1", "m2", "m3", "m4"}, CLI::ignore_case));
  }
  sub->add_option("--t-end", raw.t_end, "Override the scenario end time");
  sub->add_option("--gradient", raw.gradient, "Velocity gradient source")
      ->check(CLI::IsMember({"analytic", "numeric"}));
  sub->add_option("--terms", raw.terms, "Series terms for m3/m4");
  sub->add_option("--radius-factor", raw.radius_factor, "Neighbour radius in units of h");
  sub->add_option("--out", raw.out, "Output CSV path (default stdout)");
  sub->add_option("--summary", raw.summary, "JSON summary path");
  sub->add_option("--stride", raw.stride, "Record every N steps");
  sub->add_option("--seed", raw.seed, "Seed for randomized sampling");
}

void require(bool ok, const std::string& flag, const std::string& what) {
  if (!ok) throw UsageError(flag + ": " + what);
}

std::string real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("failed writing '" + path + "'");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text(path, text);
  }
}

nlohmann::json record_json(const DiagnosticsRecord& r) {
  nlohmann::json centroid = nlohmann::json::array();
  for (int k = 0; k < r.centroid.size(); ++k) centroid.push_back(r.centroid(k));
  return {{"step", r.step},         {"time", r.time},       {"centroid", centroid},
          {"diameter", r.diameter}, {"hull_volume", r.hull_volume}, {"eps_dia", r.eps_dia},
          {"eps_x", r.eps_x},       {"eps_V", r.eps_V}};
}

nlohmann::json config_json(const CliConfig& c) {
  return {{"scenario", c.scenario},
          {"gradient", to_string(c.gradient_mode)},
          {"terms", c.mover.terms},
          {"radius_factor", c.radius_factor},
          {"seed", c.seed}};
}

}  // namespace

std::string usage() {
  return "usage: lagmove {run|sweep|validate} [options]\n"
         "  run      --scenario S --mover {m1|m2|m3|m4} --dt DT [--t-end T] [--gradient "
         "{analytic|numeric}]\n"
         "           [--terms K] [--radius-factor R] [--stride N] [--seed N] [--out CSV] "
         "[--summary JSON]\n"
         "  sweep    --scenario S --dts DT1,DT2,... [same options as run]\n"
         "  validate (runs the built-in property checks)\n"
         "scenarios: rotation, lissajous, modulated-rotation, linear-field\n";
}

CliConfig parse_args(const std::vector<std::string>& argv) {
  CLI::App app{"Point-cloud movement schemes for Lagrangian meshfree advection", "lagmove"};
  app.set_help_flag();
  app.require_subcommand(1, 1);
  RawOptions raw_run, raw_sweep;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario with one mover");
  auto* sweep_cmd = app.add_subcommand("sweep", "Run all movers over a list of time steps");
  auto* validate_cmd = app.add_subcommand("validate", "Run the built-in property checks");
  run_cmd->set_help_flag();
  sweep_cmd->set_help_flag();
  validate_cmd->set_help_flag();
  add_common(run_cmd, raw_run, false);
  add_common(sweep_cmd, raw_sweep, true);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CliConfig config;
  const RawOptions* raw = &raw_run;
  if (validate_cmd->parsed()) {
    config.subcommand = Subcommand::Validate;
    return config;
  }
  if (sweep_cmd->parsed()) {
    config.subcommand = Subcommand::Sweep;
    raw = &raw_sweep;
  }

  config.scenario = raw->scenario;
  config.mover.scheme = parse_scheme(raw->mover);
  config.mover.terms = raw->terms;
  config.dt = raw->dt;
  config.dts = raw->dts;
  config.t_end = raw->t_end;
  config.gradient_mode = parse_gradient_mode(raw->gradient);
  config.radius_factor = raw->radius_factor;
  config.out = raw->out;
  config.summary = raw->summary;
  config.stride = raw->stride;
  config.seed = raw->seed;

  require(raw->terms >= 1, "--terms", "must be >= 1");
  require(raw->stride >= 1, "--stride", "must be >= 1");
  require(raw->radius_factor > 0.0 && std::isfinite(raw->radius_factor), "--radius-factor",
          "must be positive");
  if (config.t_end) require(*config.t_end > 0.0 && std::isfinite(*config.t_end), "--t-end", "must be positive");
  if (config.subcommand == Subcommand::Sweep) {
    if (config.dts.empty()) config.dts = {0.2, 0.1, 0.05, 0.025};
    for (double dt : config.dts) require(dt > 0.0 && std::isfinite(dt), "--dts", "entries must be positive");
  } else {
    require(config.dt > 0.0 && std::isfinite(config.dt), "--dt", "must be positive");
  }
  return config;
}

Scenario scenario_for(const CliConfig& config) {
  Scenario s = make_scenario(config.scenario);
  if (config.t_end) s.t_end = *config.t_end;
  return s;
}

RunConfig run_config_for(const CliConfig& config) {
  RunConfig rc;
  rc.mover = config.mover;
  rc.dt = config.dt;
  rc.gradient_mode = config.gradient_mode;
  rc.radius_factor = config.radius_factor;
  rc.stride = config.stride;
  rc.seed = config.seed;
  return rc;
}

std::string format_csv(const std::vector<DiagnosticsRecord>& records) {
  if (records.empty()) throw StructuralError("no diagnostics records to write");
  const bool three_d = records.front().centroid.size() == 3;
  std::string out = three_d
                        ? "step,time,centroid_x,centroid_y,centroid_z,diameter,hull_volume,eps_dia,eps_x,eps_V\n"
                        : "step,time,centroid_x,centroid_y,diameter,hull_volume,eps_dia,eps_x,eps_V\n";
  for (const auto& r : records) {
    out += std::to_string(r.step);
    out += ',' + real(r.time);
    for (int k = 0; k < r.centroid.size(); ++k) out += ',' + real(r.centroid(k));
    out += ',' + real(r.diameter) + ',' + real(r.hull_volume) + ',' + real(r.eps_dia) + ',' +
           real(r.eps_x) + ',' + real(r.eps_V) + '\n';
  }
  return out;
}

void write_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  write_text(path, format_csv(records));
}

std::vector<DiagnosticsRecord> read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(is, line)) throw IoError("'" + path + "' is empty");
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  const int dim = columns == 10 ? 3 : 2;
  if (columns != 9 && columns != 10) throw IoError("unexpected diagnostics header in '" + path + "'");

  std::vector<DiagnosticsRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (static_cast<long>(cells.size()) != columns) throw IoError("malformed row in '" + path + "'");
    auto num = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
    DiagnosticsRecord r;
    r.step = std::stoll(cells[0]);
    r.time = num(cells[1]);
    r.centroid = Vector(dim);
    for (int k = 0; k < dim; ++k) r.centroid(k) = num(cells[2 + k]);
    r.diameter = num(cells[2 + dim]);
    r.hull_volume = num(cells[3 + dim]);
    r.eps_dia = num(cells[4 + dim]);
    r.eps_x = num(cells[5 + dim]);
    r.eps_V = num(cells[6 + dim]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "mover,dt,status,eps_dia,eps_x,eps_V\n";
  for (const auto& r : rows) {
    out += to_string(r.mover) + ',' + real(r.dt) + ',' + (r.ok ? "ok" : "failed") + ',' +
           real(r.eps_dia) + ',' + real(r.eps_x) + ',' + real(r.eps_V) + '\n';
  }
  return out;
}

int thread_budget() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("LAGMOVE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<long>(n, cap);
  }
  return n;
}

int main_entry(const std::vector<std::string>& argv) {
  if (argv.empty() || argv.front() == "--help" || argv.front() == "-h" || argv.front() == "help") {
    std::cout << usage();
    return argv.empty() ? kExitUsage : kExitOk;
  }
  CliConfig config;
  try {
    config = parse_args(argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n' << usage();
    return kExitUsage;
  }

  try {
    switch (config.subcommand) {
      case Subcommand::Validate: {
        const bool ok = report(run_validation(), std::cout);
        return ok ? kExitOk : kExitValidation;
      }
      case Subcommand::Run: {
        const Scenario scenario = scenario_for(config);
        const auto records = run(scenario, run_config_for(config));
        emit(config.out, format_csv(records));
        if (!config.summary.empty()) {
          nlohmann::json j = config_json(config);
          j["subcommand"] = "run";
          j["mover"] = to_string(config.mover.scheme);
          j["dt"] = config.dt;
          j["t_end"] = scenario.t_end;
          j["final"] = record_json(records.back());
          write_text(config.summary, j.dump(2) + "\n");
        }
        return kExitOk;
      }
      case Subcommand::Sweep: {
        const Scenario scenario = scenario_for(config);
        const auto rows = convergence_sweep(scenario, run_config_for(config), config.dts,
                                            {Scheme::M1, Scheme::M2, Scheme::M3, Scheme::M4},
                                            thread_budget());
        emit(config.out, format_sweep_csv(rows));
        bool all_ok = true;
        if (!config.summary.empty()) {
          nlohmann::json j = config_json(config);
          j["subcommand"] = "sweep";
          j["t_end"] = scenario.t_end;
          j["rows"] = nlohmann::json::array();
          for (const auto& r : rows) {
            nlohmann::json row = {{"mover", to_string(r.mover)}, {"dt", r.dt}, {"ok", r.ok},
                                  {"eps_dia", r.eps_dia},        {"eps_x", r.eps_x},
                                  {"eps_V", r.eps_V}};
            if (!r.ok) row["error"] = r.error;
            j["rows"].push_back(row);
          }
          write_text(config.summary, j.dump(2) + "\n");
        }
        for (const auto& r : rows) {
          if (!r.ok) {
            all_ok = false;
            std::cerr << "error: " << to_string(r.mover) << " dt=" << r.dt << ": " << r.error << '\n';
          }
        }
        return all_ok ? kExitOk : kExitRuntime;
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace lagmove::cli
