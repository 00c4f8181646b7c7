#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lagmove/cloud.hpp"
#include "lagmove/diagnostics.hpp"
#include "lagmove/fields.hpp"
#include "lagmove/gfdm.hpp"
#include "lagmove/movers.hpp"

namespace lagmove {

struct DiscSpec {
  Vector center = make_vector(0.0, 0.0);
  double radius = 1.0;
  int n = 222;
};

/// A prescribed-field advection experiment on a sampled disc.
///
/// Exact references (diameter, centre, volume) are obtained by pushing the
/// initial cloud through the field's exact flow map.
struct Scenario {
  std::string name;
  FieldKind field;
  DiscSpec disc;
  double t_end = 1.0;
  double t_start = 0.0;
  /// Smoothing length h; <= 0 picks 3x the mean point spacing of the disc.
  double smoothing_length = 0.0;

  [[nodiscard]] double resolved_smoothing_length() const;
};

enum class GradientMode { Analytic, Numeric };

std::string to_string(GradientMode mode);
GradientMode parse_gradient_mode(const std::string& name);

struct RunConfig {
  MoverKind mover;
  double dt = 0.05;
  GradientMode gradient_mode = GradientMode::Analytic;
  /// Neighbour search radius as a multiple of h.
  double radius_factor = 1.0;
  /// Record every `stride` steps (the final step is always recorded).
  int stride = 1;
  /// Reserved for randomized sampling; the built-in disc layout is deterministic.
  std::uint64_t seed = 0;
  WlsqOptions wlsq;
};

/// Built-in scenarios: rotation, lissajous, modulated-rotation, linear-field.
Scenario make_scenario(const std::string& name);
std::vector<std::string> scenario_names();

/// Golden-angle (sunflower) interior with an evenly spaced boundary ring
/// made of antipodal pairs, so the sampled diameter equals 2*radius.
std::vector<Vector> sample_disc(const Vector& center, double radius, int n);

/// Initial cloud of a scenario: sampled disc, field velocity and gradient
/// at t_start, no history.
PointCloud initial_cloud(const Scenario& scenario, const RunConfig& config);

/// Velocity gradients for the cloud's current level in the configured mode.
std::vector<Matrix> current_gradients(const PointCloud& cloud, const Scenario& scenario,
                                      const RunConfig& config);

/// One full step of size cloud.dt(): gradients at the current level, move,
/// sample the field at the new positions and time, advance history.
PointCloud step(const PointCloud& cloud, const Scenario& scenario, const RunConfig& config);

/// Same as step() but ends at t_next (used for a shortened final step).
PointCloud step_to(const PointCloud& cloud, const Scenario& scenario, const RunConfig& config,
                   double t_next);

/// Measures the cloud against the exact flow of `initial` to the cloud time.
DiagnosticsRecord measure(const PointCloud& cloud, const PointCloud& initial,
                          const Scenario& scenario);

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  PointCloud initial;
  PointCloud final;
  /// Positions at every step (index-aligned with points), only filled when
  /// requested.
  std::vector<std::vector<Vector>> trajectory;
};

RunResult run_detailed(const Scenario& scenario, const RunConfig& config,
                       bool keep_trajectory = false);

std::vector<DiagnosticsRecord> run(const Scenario& scenario, const RunConfig& config);

struct SweepRow {
  Scheme mover = Scheme::M1;
  double dt = 0.0;
  bool ok = false;
  std::string error;
  double eps_dia = 0.0;
  double eps_x = 0.0;
  double eps_V = 0.0;
};

/// Runs every (mover, dt) pair independently; rows sorted by (mover, dt).
/// A failing cell is marked and the sweep continues. `threads` <= 1 runs
/// serially.
std::vector<SweepRow> convergence_sweep(const Scenario& scenario, const RunConfig& base,
                                        const std::vector<double>& dts,
                                        const std::vector<Scheme>& movers = {Scheme::M1, Scheme::M2,
                                                                             Scheme::M3, Scheme::M4},
                                        int threads = 1);

}  // namespace lagmove
