#include "lagmove/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <numbers>
#include <thread>

#include "lagmove/errors.hpp"
#include "lagmove/neighbors.hpp"

namespace lagmove {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // pi * (3 - sqrt(5))

double initial_payload(const Vector& x) { return 1.0 + x.x() - 0.5 * x.y() * x.y(); }

void validate(const Scenario& s, const RunConfig& c) {
  if (s.disc.n < 3) throw NumericInputError("scenario needs at least 3 points");
  if (!(s.disc.radius > 0.0)) throw NumericInputError("disc radius must be positive");
  if (!(s.t_end > s.t_start)) throw NumericInputError("t_end must exceed the start time");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw NumericInputError("dt must be positive");
  if (c.dt > s.t_end - s.t_start) throw NumericInputError("dt must not exceed the run length");
  if (c.stride < 1) throw NumericInputError("output stride must be >= 1");
  if (!(c.radius_factor > 0.0)) throw NumericInputError("radius factor must be positive");
  if (c.mover.terms < 1) throw NumericInputError("series terms must be >= 1");
}

std::vector<Vector> sample_field(const VelocityField& field, const std::vector<Vector>& xs,
                                 double t) {
  std::vector<Vector> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(field.evaluate(x, t));
  return out;
}

std::vector<Matrix> sample_gradient(const VelocityField& field, const std::vector<Vector>& xs,
                                    double t) {
  std::vector<Matrix> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(field.gradient(x, t));
  return out;
}

PointCloud advance(const PointCloud& cloud, const Scenario& scenario, const RunConfig& config,
                   double dt, std::optional<double> time_override) {
  // (1) gradients of the current level
  PointCloud current = cloud;
  const auto grads = current_gradients(cloud, scenario, config);
  for (std::size_t i = 0; i < current.size(); ++i) current[i].grad_velocity = grads[i];

  // (2)-(4) move
  std::vector<Vector> moves;
  moves.reserve(current.size());
  for (const auto& p : current.points()) {
    moves.push_back(displacement(config.mover, make_context(p, dt)));
  }
  const PointCloud moved = apply_displacements(current, moves);

  // (5) field at the new level, (6) history shift
  const VelocityField field(scenario.field);
  const double t_next = time_override ? *time_override : cloud.time() + dt;
  const auto xs = moved.positions();
  const auto v_next = sample_field(field, xs, t_next);
  const auto g_next = sample_gradient(field, xs, t_next);
  if (time_override) return advance_history(moved, v_next, g_next, *time_override);
  return advance_history(moved, v_next, g_next);
}

}  // namespace

double Scenario::resolved_smoothing_length() const {
  if (smoothing_length > 0.0) return smoothing_length;
  const double spacing = std::sqrt(std::numbers::pi * disc.radius * disc.radius / disc.n);
  return 3.0 * spacing;
}

std::string to_string(GradientMode mode) {
  return mode == GradientMode::Analytic ? "analytic" : "numeric";
}

GradientMode parse_gradient_mode(const std::string& name) {
  if (name == "analytic") return GradientMode::Analytic;
  if (name == "numeric") return GradientMode::Numeric;
  throw UsageError("unknown gradient mode '" + name + "' (expected analytic or numeric)");
}

std::vector<std::string> scenario_names() {
  return {"rotation", "lissajous", "modulated-rotation", "linear-field"};
}

Scenario make_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "rotation") {
    s.field = RigidRotation{make_vector(0.0, 0.0), 1.0};
    s.t_end = 4.0 * std::numbers::pi;  // two full rotations
  } else if (name == "lissajous") {
    s.field = Lissajous{};
    s.t_end = 3.0;
  } else if (name == "modulated-rotation") {
    s.field = ModulatedRotation{make_vector(0.0, 0.0), 1.0, 0.5};
    s.t_end = 10.0;
  } else if (name == "linear-field") {
    // Trace-free, so the exact flow preserves area.
    s.field = Linear{make_matrix(0.5, -1.0, 1.0, -0.5), make_vector(0.1, 0.0)};
    s.t_end = 5.0;
  } else {
    throw UsageError("unknown scenario '" + name + "'");
  }
  return s;
}

std::vector<Vector> sample_disc(const Vector& center, double radius, int n) {
  if (center.size() != 2) throw DimensionError("disc sampling is 2D");
  if (n < 3) throw NumericInputError("disc sampling needs n >= 3");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw NumericInputError("disc radius must be positive and finite");
  }

  int ring = n;
  if (n >= 8) {
    ring = 2 * static_cast<int>(std::lround(std::sqrt(std::numbers::pi * n)));
    ring = std::min(ring, (n - 1) / 2 * 2);
  }

  std::vector<Vector> pts;
  pts.reserve(n);
  // Scaled a hair inside so |x - c| <= radius survives rounding.
  const double ring_radius = radius * (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
  if (ring % 2 == 0) {
    const int half = ring / 2;
    std::vector<Vector> second;
    for (int k = 0; k < half; ++k) {
      const double a = 2.0 * std::numbers::pi * k / ring;
      const double cx = ring_radius * std::cos(a);
      const double cy = ring_radius * std::sin(a);
      pts.push_back(make_vector(center.x() + cx, center.y() + cy));
      second.push_back(make_vector(center.x() - cx, center.y() - cy));
    }
    pts.insert(pts.end(), second.begin(), second.end());
  } else {
    for (int k = 0; k < ring; ++k) {
      const double a = 2.0 * std::numbers::pi * k / ring;
      pts.push_back(make_vector(center.x() + ring_radius * std::cos(a),
                                center.y() + ring_radius * std::sin(a)));
    }
  }

  const int interior = n - ring;
  if (interior > 0) {
    const double inner = radius * (1.0 - std::numbers::pi / ring);
    for (int k = 0; k < interior; ++k) {
      const double r = inner * std::sqrt((k + 0.5) / interior);
      const double a = k * kGoldenAngle;
      pts.push_back(make_vector(center.x() + r * std::cos(a), center.y() + r * std::sin(a)));
    }
  }
  return pts;
}

PointCloud initial_cloud(const Scenario& scenario, const RunConfig& config) {
  validate(scenario, config);
  const VelocityField field(scenario.field);
  const auto xs = sample_disc(scenario.disc.center, scenario.disc.radius, scenario.disc.n);
  std::vector<Point> points;
  points.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Point p;
    p.id = static_cast<std::int64_t>(i);
    p.position = xs[i];
    p.velocity = field.evaluate(xs[i], scenario.t_start);
    p.grad_velocity = field.gradient(xs[i], scenario.t_start);
    p.velocity_prev = Vector::Zero(2);
    p.grad_velocity_prev = Matrix::Zero(2, 2);
    p.payload = initial_payload(xs[i]);
    points.push_back(std::move(p));
  }
  return PointCloud(std::move(points), scenario.resolved_smoothing_length(), config.dt,
                    scenario.t_start);
}

std::vector<Matrix> current_gradients(const PointCloud& cloud, const Scenario& scenario,
                                      const RunConfig& config) {
  if (config.gradient_mode == GradientMode::Analytic) {
    const VelocityField field(scenario.field);
    return sample_gradient(field, cloud.positions(), cloud.time());
  }
  const auto index = build_index(cloud, config.radius_factor * cloud.smoothing_length());
  GradientBatchOptions opts;
  opts.wlsq = config.wlsq;
  return all_gradients(cloud, index, opts);
}

PointCloud step(const PointCloud& cloud, const Scenario& scenario, const RunConfig& config) {
  return advance(cloud, scenario, config, cloud.dt(), std::nullopt);
}

PointCloud step_to(const PointCloud& cloud, const Scenario& scenario, const RunConfig& config,
                   double t_next) {
  const double dt = t_next - cloud.time();
  if (!(dt > 0.0)) throw NumericInputError("step_to: target time must lie ahead of the cloud");
  return advance(cloud, scenario, config, dt, t_next);
}

DiagnosticsRecord measure(const PointCloud& cloud, const PointCloud& initial,
                          const Scenario& scenario) {
  const VelocityField field(scenario.field);
  std::vector<Vector> exact;
  exact.reserve(initial.size());
  for (const auto& p : initial.points()) {
    exact.push_back(field.flow(p.position, initial.time(), cloud.time()));
  }
  const auto pts = cloud.positions();

  DiagnosticsRecord rec;
  rec.step = cloud.step();
  rec.time = cloud.time();
  rec.centroid = centroid(std::span<const Vector>(pts));
  rec.diameter = diameter(std::span<const Vector>(pts));
  rec.hull_volume = hull_volume(std::span<const Vector>(pts));
  rec.eps_dia = std::abs(rec.diameter - diameter(std::span<const Vector>(exact)));
  rec.eps_x = (rec.centroid - centroid(std::span<const Vector>(exact))).norm();
  rec.eps_V = eps_V(hull_volume(initial), rec.hull_volume);
  return rec;
}

RunResult run_detailed(const Scenario& scenario, const RunConfig& config, bool keep_trajectory) {
  RunResult result;
  result.initial = initial_cloud(scenario, config);

  const double span = scenario.t_end - scenario.t_start;
  const double ratio = span / config.dt;
  auto full_steps = static_cast<std::int64_t>(std::floor(ratio));
  bool short_last = true;
  const double tol = 1e-12 * std::max(1.0, std::abs(scenario.t_end));
  if (std::abs(scenario.t_start + static_cast<double>(full_steps) * config.dt - scenario.t_end) <= tol) {
    short_last = false;
  } else if (std::abs(scenario.t_start + static_cast<double>(full_steps + 1) * config.dt -
                      scenario.t_end) <= tol) {
    ++full_steps;
    short_last = false;
  }

  PointCloud cloud = result.initial;
  result.records.push_back(measure(cloud, result.initial, scenario));
  if (keep_trajectory) result.trajectory.push_back(cloud.positions());

  const std::int64_t total = full_steps + (short_last ? 1 : 0);
  for (std::int64_t n = 1; n <= total; ++n) {
    if (n > full_steps) {
      cloud = step_to(cloud, scenario, config, scenario.t_end);
    } else {
      cloud = step(cloud, scenario, config);
    }
    if (keep_trajectory) result.trajectory.push_back(cloud.positions());
    if (n % config.stride == 0 || n == total) {
      result.records.push_back(measure(cloud, result.initial, scenario));
    }
  }
  result.final = std::move(cloud);
  return result;
}

std::vector<DiagnosticsRecord> run(const Scenario& scenario, const RunConfig& config) {
  return run_detailed(scenario, config).records;
}

std::vector<SweepRow> convergence_sweep(const Scenario& scenario, const RunConfig& base,
                                        const std::vector<double>& dts,
                                        const std::vector<Scheme>& movers, int threads) {
  for (double dt : dts) {
    if (!(dt > 0.0)) throw NumericInputError("sweep time steps must be positive");
  }
  std::vector<SweepRow> rows;
  for (Scheme m : movers) {
    for (double dt : dts) {
      SweepRow row;
      row.mover = m;
      row.dt = dt;
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.mover != b.mover) return a.mover < b.mover;
    return a.dt < b.dt;
  });

  auto run_cell = [&](SweepRow& row) {
    RunConfig cfg = base;
    cfg.mover.scheme = row.mover;
    cfg.dt = row.dt;
    cfg.stride = std::numeric_limits<int>::max();
    try {
      const auto recs = run(scenario, cfg);
      const auto& last = recs.back();
      row.eps_dia = last.eps_dia;
      row.eps_x = last.eps_x;
      row.eps_V = last.eps_V;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  if (threads <= 1 || rows.size() <= 1) {
    for (auto& row : rows) run_cell(row);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), rows.size());
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) run_cell(rows[i]);
    });
  }
  pool.clear();
  return rows;
}

}  // namespace lagmove
