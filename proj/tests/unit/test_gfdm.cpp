#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "lagmove/errors.hpp"
#include "lagmove/fields.hpp"
#include "lagmove/gfdm.hpp"
#include "lagmove/scenarios.hpp"

using namespace lagmove;

namespace {

PointCloud cloud_with_velocity(const std::vector<Vector>& xs, double h,
                               const std::function<Vector(const Vector&)>& v) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Point p;
    p.id = static_cast<std::int64_t>(i);
    p.position = xs[i];
    p.velocity = v(xs[i]);
    pts.push_back(p);
  }
  return PointCloud(std::move(pts), h, 0.1);
}

std::vector<Vector> random_points(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vector> xs;
  for (int i = 0; i < n; ++i) xs.push_back(make_vector(u(rng), u(rng)));
  return xs;
}

// Point at the origin surrounded by a jittered ring stencil of radius ~h/2.
std::vector<Vector> ring_stencil(double h, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 0.9);
  std::vector<Vector> xs{make_vector(0, 0)};
  for (int k = 0; k < m; ++k) {
    const double a = 2.0 * std::numbers::pi * (k + 0.3 * u(rng)) / m;
    const double r = h * u(rng);
    xs.push_back(make_vector(r * std::cos(a), r * std::sin(a)));
  }
  return xs;
}

Matrix rotation(double angle) {
  return make_matrix(std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle));
}

}  // namespace

TEST_CASE("rotation and constant fields are reproduced exactly") {
  std::mt19937_64 rng(1);
  const auto xs = ring_stencil(0.3, 12, rng);
  {
    const auto cloud = cloud_with_velocity(xs, 0.3, [](const Vector& x) { return make_vector(-x.y(), x.x()); });
    const auto fit = wlsq_gradient(cloud, build_index(cloud, 0.3), 0);
    CHECK((fit.gradient - make_matrix(0, -1, 1, 0)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  {
    const auto cloud = cloud_with_velocity(xs, 0.3, [](const Vector&) { return make_vector(3, 5); });
    const auto fit = wlsq_gradient(cloud, build_index(cloud, 0.3), 0);
    CHECK(fit.gradient.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("weights are Gaussian in distance and decrease outward") {
  std::mt19937_64 rng(2);
  const double h = 0.4;
  const auto xs = ring_stencil(h, 10, rng);
  const auto cloud = cloud_with_velocity(xs, h, [](const Vector& x) { return x; });
  const auto fit = wlsq_gradient(cloud, build_index(cloud, h), 0);
  REQUIRE(fit.weights.size() == fit.neighbor_ids.size());
  double w_near = 0.0, w_far = 1.0, d_near = 1e300, d_far = 0.0;
  for (std::size_t k = 0; k < fit.weights.size(); ++k) {
    const double r = cloud[cloud.index_of(fit.neighbor_ids[k])].position.norm();
    CHECK(fit.weights[k] == doctest::Approx(std::exp(-6.0 * r * r / (h * h))).epsilon(1e-14));
    CHECK(fit.weights[k] > 0.0);
    CHECK(fit.weights[k] <= 1.0);
    if (r < d_near) d_near = r, w_near = fit.weights[k];
    if (r > d_far) d_far = r, w_far = fit.weights[k];
  }
  CHECK(w_near >= w_far);
  CHECK(fit.condition >= 1.0);
  CHECK(fit.condition < 1e12);
}

TEST_CASE("stencil errors: too few neighbours, collinear stencil") {
  const auto lonely = cloud_with_velocity({make_vector(0, 0), make_vector(5, 5)}, 0.5,
                                          [](const Vector& x) { return x; });
  CHECK_THROWS_AS(wlsq_gradient(lonely, build_index(lonely, 0.5), 0), StencilDeficiencyError);

  const auto line = cloud_with_velocity(
      {make_vector(0, 0), make_vector(0.1, 0), make_vector(0.2, 0), make_vector(-0.1, 0)}, 0.5,
      [](const Vector& x) { return x; });
  CHECK_THROWS_AS(wlsq_gradient(line, build_index(line, 0.5), 0), IllConditionedStencilError);
}

TEST_CASE("nonlinear field: first-order convergence under h refinement") {
  // v = (x^2, 0); exact Jacobian at x_i is [[2 x_i, 0], [0, 0]].
  // Asymmetric stencil centred at x_i = (0.05, 0.02) so the O(h) term is present.
  auto error_at = [](double h) {
    const Vector xi = make_vector(0.05, 0.02);
    std::vector<Vector> xs{xi};
    // One-sided half-ring of neighbours, scaled with h.
    for (int k = 0; k < 9; ++k) {
      const double a = std::numbers::pi * k / 8.0;
      xs.push_back(xi + make_vector(0.6 * h * std::cos(a), 0.6 * h * std::sin(a)));
      xs.push_back(xi + make_vector(0.3 * h * std::cos(a + 0.1), 0.3 * h * std::sin(a + 0.1)));
    }
    const auto cloud = cloud_with_velocity(xs, h, [](const Vector& x) { return make_vector(x.x() * x.x(), 0.0); });
    const auto fit = wlsq_gradient(cloud, build_index(cloud, h), 0);
    return (fit.gradient - make_matrix(2 * xi.x(), 0, 0, 0)).norm();
  };
  const double e1 = error_at(0.1);
  const double e2 = error_at(0.05);
  CHECK(e1 <= 1.0 * 0.1);  // error <= C h with C = 1
  const double order = std::log2(e1 / e2);
  CHECK(order == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("all_gradients on a rotating disc and a lissajous disc") {
  for (const std::string name : {"rotation", "lissajous"}) {
    const Scenario s = make_scenario(name);
    RunConfig cfg;
    const PointCloud cloud = initial_cloud(s, cfg);
    const auto idx = build_index(cloud, cloud.smoothing_length());
    GradientBatchOptions opts;
    opts.zero_fallback = false;
    const Matrix expected = name == "rotation" ? make_matrix(0, -1, 1, 0) : Matrix::Zero(2, 2);
    for (const auto& g : all_gradients(cloud, idx, opts)) {
      REQUIRE((g - expected).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("isolated point gets the zero fallback and a warning") {
  const auto cloud = cloud_with_velocity({make_vector(0, 0), make_vector(0.1, 0), make_vector(0, 0.1),
                                          make_vector(0.1, 0.1), make_vector(9, 9)},
                                         0.2, [](const Vector& x) { return make_vector(-x.y(), x.x()); });
  const auto idx = build_index(cloud, 0.2);
  std::vector<std::string> warnings;
  GradientBatchOptions opts;
  opts.warn = [&](const std::string& m) { warnings.push_back(m); };
  const auto grads = all_gradients(cloud, idx, opts);
  CHECK(grads[4] == Matrix::Zero(2, 2));
  CHECK((grads[0] - make_matrix(0, -1, 1, 0)).cwiseAbs().maxCoeff() <= 1e-10);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("4") != std::string::npos);

  opts.zero_fallback = false;
  CHECK_THROWS_AS(all_gradients(cloud, idx, opts), StencilDeficiencyError);
}

TEST_CASE("property: exact for linear fields, translation invariant, rotation equivariant") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto xs = random_points(rng, 120, 0.0, 1.0);
    const Matrix a = make_matrix(u(rng), u(rng), u(rng), u(rng));
    const Vector b = make_vector(u(rng), u(rng));
    auto linear = [&](const Vector& x) -> Vector { return a * x + b; };
    const auto cloud = cloud_with_velocity(xs, 0.3, linear);
    const auto idx = build_index(cloud, 0.3);
    GradientBatchOptions opts;
    opts.zero_fallback = false;
    const auto base = all_gradients(cloud, idx, opts);
    for (const auto& g : base) REQUIRE((g - a).cwiseAbs().maxCoeff() <= 1e-10);

    // translation
    const Vector shift = make_vector(u(rng), u(rng));
    std::vector<Vector> shifted;
    for (const auto& x : xs) shifted.push_back(x + shift);
    const auto cs = cloud_with_velocity(shifted, 0.3, [&](const Vector& x) -> Vector { return linear(x - shift); });
    const auto gs = all_gradients(cs, build_index(cs, 0.3), opts);
    for (std::size_t i = 0; i < gs.size(); ++i) REQUIRE((gs[i] - base[i]).cwiseAbs().maxCoeff() <= 1e-12);

    // rotation: positions and velocities rotated by Q maps A to Q A Q^T
    const Matrix q = rotation(u(rng));
    std::vector<Point> rotated;
    for (const auto& p : cloud.points()) {
      Point r = p;
      r.position = q * p.position;
      r.velocity = q * p.velocity;
      rotated.push_back(r);
    }
    const PointCloud cr(rotated, 0.3, 0.1);
    const auto gr = all_gradients(cr, build_index(cr, 0.3), opts);
    for (std::size_t i = 0; i < gr.size(); ++i) {
      REQUIRE((gr[i] - q * base[i] * q.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("3D linear field") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix a(3, 3);
  a << 0.1, -0.4, 0.2, 0.7, 0.0, -1.1, 0.3, 0.5, -0.1;
  std::vector<Point> pts;
  for (int i = 0; i < 200; ++i) {
    Point p;
    p.id = i;
    p.position = make_vector(u(rng), u(rng), u(rng));
    p.velocity = a * p.position;
    pts.push_back(p);
  }
  const PointCloud cloud(pts, 0.45, 0.1);
  GradientBatchOptions opts;
  opts.zero_fallback = false;
  for (const auto& g : all_gradients(cloud, build_index(cloud, 0.45), opts)) {
    REQUIRE((g - a).cwiseAbs().maxCoeff() <= 1e-10);
  }
}
