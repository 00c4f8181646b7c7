#include "lagmove/validation.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "lagmove/fields.hpp"
#include "lagmove/gfdm.hpp"
#include "lagmove/movers.hpp"
#include "lagmove/neighbors.hpp"
#include "lagmove/scenarios.hpp"

namespace lagmove {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix random_matrix(Rng& rng, int d, double max_norm) {
  Matrix a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = uniform(rng, -1.0, 1.0);
  const double n = a.operatorNorm();
  if (n > 0.0) a *= uniform(rng, 0.0, max_norm) / n;
  return a;
}

Vector random_vector(Rng& rng, int d, double lo, double hi) {
  Vector v(d);
  for (int k = 0; k < d; ++k) v(k) = uniform(rng, lo, hi);
  return v;
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

PointCloud random_cloud(Rng& rng, int n, double h) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    Point p;
    p.id = i;
    p.position = random_vector(rng, 2, 0.0, 1.0);
    pts.push_back(p);
  }
  return PointCloud(std::move(pts), h, 0.1);
}

CheckResult check_series_oracle(const SeriesFn& series) {
  Rng rng(11);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const int d = s % 2 == 0 ? 2 : 3;
    const Matrix a = random_matrix(rng, d, 2.0);
    const Vector v = random_vector(rng, d, -1.0, 1.0);
    const double dt = uniform(rng, 1e-3, 0.2);
    for (int offset : {0, 1}) {
      const Vector got = series(a, v, dt, 20, offset);
      const Vector ref = series_via_expm(a, v, dt, offset);
      worst = std::max(worst, (got - ref).norm() / std::max(ref.norm(), 1e-300));
    }
  }
  return {"series-vs-expm-oracle", worst <= 1e-12, "max rel err " + sci(worst) + " (tol 1e-12)"};
}

CheckResult check_series_tail(const SeriesFn& series) {
  Rng rng(12);
  double worst_ratio = 0.0;
  for (int s = 0; s < 200; ++s) {
    const Matrix a = random_matrix(rng, 2, 2.0);
    const Vector v = random_vector(rng, 2, -1.0, 1.0);
    const double dt = uniform(rng, 1e-3, 0.2);
    const double x = a.operatorNorm() * dt;
    // sum_{k>=5} x^k dt/(k+1)! |v|
    double term = dt * v.norm();
    for (int k = 1; k <= 5; ++k) term *= x / (k + 1);
    double bound = 0.0;
    for (int k = 5; k < 40; ++k) {
      bound += term;
      term *= x / (k + 2);
    }
    const Vector full = series(a, v, dt, 20, 0);
    const double diff = (series(a, v, dt, 5, 0) - full).norm();
    // Allow a few ulps of the sum for roundoff when the tail itself is tiny.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * full.norm();
    worst_ratio = std::max(worst_ratio, diff / (bound + slack));
  }
  return {"series-truncation-bound", worst_ratio <= 1.0 + 1e-9,
          "max diff/bound " + sci(worst_ratio)};
}

CheckResult check_reductions() {
  Rng rng(13);
  double worst13 = 0.0, worst24 = 0.0;
  for (int s = 0; s < 200; ++s) {
    MoveContext ctx;
    ctx.dt = uniform(rng, 1e-3, 0.5);
    ctx.v_n = random_vector(rng, 2, -5.0, 5.0);
    ctx.v_prev = random_vector(rng, 2, -5.0, 5.0);
    ctx.grad_n = Matrix::Zero(2, 2);
    ctx.grad_prev = Matrix::Zero(2, 2);
    ctx.has_history = true;
    const Vector m1 = move_m1(ctx), m2 = move_m2(ctx);
    worst13 = std::max(worst13, (move_m3(ctx) - m1).norm() / std::max(m1.norm(), 1e-300));
    worst24 = std::max(worst24, (move_m4(ctx) - m2).norm() / std::max(m2.norm(), 1e-300));
  }
  const bool ok = worst13 <= 1e-15 && worst24 <= 1e-15;
  return {"reduction-m3-m1-and-m4-m2", ok,
          "m3-m1 " + sci(worst13) + ", m4-m2 " + sci(worst24) + " (tol 1e-15)"};
}

CheckResult check_zero_velocity() {
  MoveContext ctx;
  ctx.dt = 0.1;
  ctx.v_n = Vector::Zero(2);
  ctx.v_prev = Vector::Zero(2);
  ctx.grad_n = make_matrix(0.3, -1.0, 2.0, 0.1);
  ctx.grad_prev = make_matrix(-0.7, 0.4, 0.5, 1.1);
  ctx.has_history = true;
  const double m = move_m1(ctx).norm() + move_m2(ctx).norm() + move_m3(ctx).norm() +
                   move_m4(ctx).norm();
  return {"zero-velocity-fixed-point", m == 0.0, "sum of |dx| " + sci(m)};
}

CheckResult check_wlsq_exactness() {
  Rng rng(14);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    PointCloud cloud = random_cloud(rng, 200, 0.25);
    const Matrix a = random_matrix(rng, 2, 3.0);
    const Vector b = random_vector(rng, 2, -1.0, 1.0);
    for (auto& p : cloud.points()) p.velocity = a * p.position + b;
    const auto index = build_index(cloud, cloud.smoothing_length());
    GradientBatchOptions opts;
    opts.zero_fallback = false;
    for (const auto& g : all_gradients(cloud, index, opts)) {
      worst = std::max(worst, (g - a).cwiseAbs().maxCoeff());
    }
  }
  return {"wlsq-linear-exactness", worst <= 1e-10, "max abs err " + sci(worst) + " (tol 1e-10)"};
}

CheckResult check_field_gradients() {
  Rng rng(15);
  const std::vector<FieldKind> kinds = {
      RigidRotation{make_vector(0.2, -0.1), 1.3}, Lissajous{},
      Linear{make_matrix(1.0, 2.0, 3.0, 4.0), make_vector(0.5, -0.5)},
      ModulatedRotation{make_vector(0.0, 0.0), 1.0, 0.5}};
  double worst = 0.0;
  const double step = 1e-6;
  for (const auto& kind : kinds) {
    for (int s = 0; s < 100; ++s) {
      const Vector x = random_vector(rng, 2, 0.0, 1.0);
      const double t = uniform(rng, 0.0, 10.0);
      const Matrix g = field_gradient(kind, x, t);
      Matrix fd(2, 2);
      for (int c = 0; c < 2; ++c) {
        Vector xp = x, xm = x;
        xp(c) += step;
        xm(c) -= step;
        fd.col(c) = (field_velocity(kind, xp, t) - field_velocity(kind, xm, t)) / (2.0 * step);
      }
      const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
      worst = std::max(worst, (fd - g).cwiseAbs().maxCoeff() / scale);
    }
  }
  return {"field-gradient-finite-difference", worst <= 1e-6,
          "max rel err " + sci(worst) + " (tol 1e-6)"};
}

CheckResult check_neighbors() {
  Rng rng(16);
  std::size_t mismatches = 0;
  for (int s = 0; s < 10; ++s) {
    const PointCloud cloud = random_cloud(rng, 150, 0.1);
    const double r = uniform(rng, 0.05, 0.3);
    const auto index = build_index(cloud, r);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      std::vector<std::int64_t> brute;
      for (std::size_t j = 0; j < cloud.size(); ++j) {
        if (j != i && (cloud[j].position - cloud[i].position).squaredNorm() <= r * r) {
          brute.push_back(cloud[j].id);
        }
      }
      std::sort(brute.begin(), brute.end());
      if (brute != index.at_index(i)) ++mismatches;
    }
  }
  return {"neighbors-vs-brute-force", mismatches == 0,
          std::to_string(mismatches) + " mismatching lists"};
}

CheckResult check_lissajous_reduction() {
  const Scenario scenario = make_scenario("lissajous");
  double worst = 0.0;
  for (auto [a, b] : {std::pair{Scheme::M1, Scheme::M3}, std::pair{Scheme::M2, Scheme::M4}}) {
    RunConfig ca, cb;
    ca.dt = cb.dt = 0.05;
    ca.mover.scheme = a;
    cb.mover.scheme = b;
    const auto ra = run_detailed(scenario, ca, true);
    const auto rb = run_detailed(scenario, cb, true);
    for (std::size_t s = 0; s < ra.trajectory.size(); ++s) {
      for (std::size_t i = 0; i < ra.trajectory[s].size(); ++i) {
        const Vector& pa = ra.trajectory[s][i];
        worst = std::max(worst, (pa - rb.trajectory[s][i]).norm() / std::max(1.0, pa.norm()));
      }
    }
  }
  return {"lissajous-run-reduction", worst <= 1e-13, "max rel diff " + sci(worst) + " (tol 1e-13)"};
}

}  // namespace

Vector series_via_expm(const Matrix& a, const Vector& v, double dt, int offset) {
  const auto d = v.size();
  const auto size = d + 1 + offset;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(size, size);
  block.topLeftCorner(d, d) = a * dt;
  block.block(0, d, d, 1) = v * dt;
  if (offset == 1) block(d, d + 1) = dt;
  const Eigen::MatrixXd e = block.exp();
  return Vector(e.block(0, size - 1, d, 1));
}

std::vector<CheckResult> run_validation(const SeriesFn& series) {
  return {check_series_oracle(series), check_series_tail(series), check_reductions(),
          check_zero_velocity(), check_wlsq_exactness(), check_field_gradients(),
          check_neighbors(), check_lissajous_reduction()};
}

std::vector<CheckResult> run_validation() {
  return run_validation([](const Matrix& a, const Vector& v, double dt, int k, int off) {
    return exp_series_apply(a, v, dt, k, off);
  });
}

bool report(const std::vector<CheckResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all;
}

}  // namespace lagmove
