#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lagmove/cli.hpp"
#include "lagmove/diagnostics.hpp"
#include "lagmove/errors.hpp"
#include "lagmove/fields.hpp"
#include "lagmove/gfdm.hpp"
#include "lagmove/movers.hpp"
#include "lagmove/neighbors.hpp"
#include "lagmove/scenarios.hpp"
#include "lagmove/validation.hpp"

namespace py = pybind11;
using namespace lagmove;

namespace {

using RowPoints = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<Vector> rows_to_vectors(const RowPoints& m) {
  if (m.cols() != 2 && m.cols() != 3) throw DimensionError("expected an (N, 2) or (N, 3) array");
  std::vector<Vector> out;
  out.reserve(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
  return out;
}

RowPoints vectors_to_rows(const std::vector<Vector>& v) {
  RowPoints m(static_cast<Eigen::Index>(v.size()), v.empty() ? 2 : v.front().size());
  for (std::size_t i = 0; i < v.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
  return m;
}

PointCloud cloud_from_arrays(const RowPoints& positions, const RowPoints* velocities, double h) {
  const auto xs = rows_to_vectors(positions);
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Point p;
    p.id = static_cast<std::int64_t>(i);
    p.position = xs[i];
    if (velocities) p.velocity = velocities->row(static_cast<Eigen::Index>(i)).transpose();
    pts.push_back(std::move(p));
  }
  return PointCloud(std::move(pts), h, 1.0);
}

MoveContext context(double dt, const Vector& v_n, const Vector& v_prev, const Matrix& grad_n,
                    const Matrix& grad_prev, bool has_history) {
  return MoveContext{dt, v_n, v_prev, grad_n, grad_prev, has_history};
}

py::dict record_dict(const DiagnosticsRecord& r) {
  py::dict d;
  d["step"] = r.step;
  d["time"] = r.time;
  d["centroid"] = Eigen::VectorXd(r.centroid);
  d["diameter"] = r.diameter;
  d["hull_volume"] = r.hull_volume;
  d["eps_dia"] = r.eps_dia;
  d["eps_x"] = r.eps_x;
  d["eps_V"] = r.eps_V;
  return d;
}

RunConfig make_config(const std::string& mover, double dt, const std::string& gradient, int terms,
                      double radius_factor, int stride) {
  RunConfig c;
  c.mover.scheme = parse_scheme(mover);
  c.mover.terms = terms;
  c.dt = dt;
  c.gradient_mode = parse_gradient_mode(gradient);
  c.radius_factor = radius_factor;
  c.stride = stride;
  return c;
}

Scenario scenario_with(const std::string& name, std::optional<double> t_end) {
  Scenario s = make_scenario(name);
  if (t_end) s.t_end = *t_end;
  return s;
}

}  // namespace

PYBIND11_MODULE(_lagmove, m) {
  m.doc() = "Point-cloud movement schemes for Lagrangian meshfree advection.";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<NumericInputError>(m, "NumericInputError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<HistoryMissingError>(m, "HistoryMissingError", base.ptr());
  py::register_exception<StencilDeficiencyError>(m, "StencilDeficiencyError", base.ptr());
  py::register_exception<IllConditionedStencilError>(m, "IllConditionedStencilError", base.ptr());
  py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError", base.ptr());

  m.def("exp_series_apply", &exp_series_apply, py::arg("a"), py::arg("v"), py::arg("dt"),
        py::arg("terms") = 5, py::arg("offset") = 0);
  m.def(
      "move_m1", [](const Vector& v, double dt) { return move_m1(context(dt, v, v, Matrix::Zero(v.size(), v.size()), Matrix::Zero(v.size(), v.size()), false)); },
      py::arg("v_n"), py::arg("dt"));
  m.def(
      "move_m2",
      [](const Vector& v_n, const Vector& v_prev, double dt) {
        const Matrix z = Matrix::Zero(v_n.size(), v_n.size());
        return move_m2(context(dt, v_n, v_prev, z, z, true));
      },
      py::arg("v_n"), py::arg("v_prev"), py::arg("dt"));
  m.def(
      "move_m3",
      [](const Vector& v_n, const Matrix& grad_n, double dt, int terms) {
        return move_m3(context(dt, v_n, v_n, grad_n, grad_n, false), terms);
      },
      py::arg("v_n"), py::arg("grad_n"), py::arg("dt"), py::arg("terms") = 5);
  m.def(
      "move_m4",
      [](const Vector& v_n, const Vector& v_prev, const Matrix& grad_n, const Matrix& grad_prev,
         double dt, int terms) {
        return move_m4(context(dt, v_n, v_prev, grad_n, grad_prev, true), terms);
      },
      py::arg("v_n"), py::arg("v_prev"), py::arg("grad_n"), py::arg("grad_prev"), py::arg("dt"),
      py::arg("terms") = 5);

  m.def("eval_rotation", &eval_rotation, py::arg("x"), py::arg("center"), py::arg("omega"));
  m.def("eval_lissajous", &eval_lissajous, py::arg("t"));
  m.def("exact_lissajous_center", &exact_lissajous_center, py::arg("t"));

  m.def(
      "sample_disc",
      [](const Vector& center, double radius, int n) {
        return vectors_to_rows(sample_disc(center, radius, n));
      },
      py::arg("center"), py::arg("radius"), py::arg("n"));

  m.def(
      "neighbor_lists",
      [](const RowPoints& positions, double radius) {
        const PointCloud cloud = cloud_from_arrays(positions, nullptr, 1.0);
        const auto index = build_index(cloud, radius);
        std::vector<std::vector<std::int64_t>> out;
        for (std::size_t i = 0; i < cloud.size(); ++i) out.push_back(index.at_index(i));
        return out;
      },
      py::arg("positions"), py::arg("radius"));

  m.def(
      "wlsq_gradients",
      [](const RowPoints& positions, const RowPoints& velocities, double h, double radius_factor,
         double weight_exponent) {
        if (velocities.rows() != positions.rows() || velocities.cols() != positions.cols()) {
          throw StructuralError("positions and velocities must have the same shape");
        }
        const PointCloud cloud = cloud_from_arrays(positions, &velocities, h);
        const auto index = build_index(cloud, radius_factor * h);
        GradientBatchOptions opts;
        opts.zero_fallback = false;
        opts.wlsq.weight_exponent = weight_exponent;
        std::vector<Eigen::MatrixXd> out;
        for (const auto& g : all_gradients(cloud, index, opts)) out.emplace_back(g);
        return out;
      },
      py::arg("positions"), py::arg("velocities"), py::arg("h"), py::arg("radius_factor") = 1.0,
      py::arg("weight_exponent") = 6.0);

  m.def(
      "diameter",
      [](const RowPoints& p) {
        const auto v = rows_to_vectors(p);
        return diameter(std::span<const Vector>(v));
      },
      py::arg("positions"));
  m.def(
      "hull_volume",
      [](const RowPoints& p) {
        const auto v = rows_to_vectors(p);
        return hull_volume(std::span<const Vector>(v));
      },
      py::arg("positions"));
  m.def(
      "centroid",
      [](const RowPoints& p) {
        const auto v = rows_to_vectors(p);
        return centroid(std::span<const Vector>(v));
      },
      py::arg("positions"));
  m.def("eps_V", &eps_V, py::arg("v0"), py::arg("v_end"));

  m.def("scenario_names", &scenario_names);
  m.def(
      "run",
      [](const std::string& scenario, const std::string& mover, double dt,
         const std::string& gradient, int terms, double radius_factor, int stride,
         std::optional<double> t_end) {
        py::list out;
        for (const auto& r : run(scenario_with(scenario, t_end),
                                 make_config(mover, dt, gradient, terms, radius_factor, stride))) {
          out.append(record_dict(r));
        }
        return out;
      },
      py::arg("scenario"), py::arg("mover"), py::arg("dt"), py::arg("gradient") = "analytic",
      py::arg("terms") = 5, py::arg("radius_factor") = 1.0, py::arg("stride") = 1,
      py::arg("t_end") = py::none());
  m.def(
      "final_positions",
      [](const std::string& scenario, const std::string& mover, double dt,
         const std::string& gradient, std::optional<double> t_end) {
        const auto res = run_detailed(scenario_with(scenario, t_end),
                                      make_config(mover, dt, gradient, 5, 1.0, 1));
        return vectors_to_rows(res.final.positions());
      },
      py::arg("scenario"), py::arg("mover"), py::arg("dt"), py::arg("gradient") = "analytic",
      py::arg("t_end") = py::none());
  m.def(
      "convergence_sweep",
      [](const std::string& scenario, const std::vector<double>& dts, const std::string& gradient,
         std::optional<double> t_end) {
        py::list out;
        const auto rows = convergence_sweep(scenario_with(scenario, t_end),
                                            make_config("m1", 1.0, gradient, 5, 1.0, 1), dts,
                                            {Scheme::M1, Scheme::M2, Scheme::M3, Scheme::M4},
                                            lagmove::cli::thread_budget());
        for (const auto& r : rows) {
          py::dict d;
          d["mover"] = to_string(r.mover);
          d["dt"] = r.dt;
          d["ok"] = r.ok;
          d["error"] = r.error;
          d["eps_dia"] = r.eps_dia;
          d["eps_x"] = r.eps_x;
          d["eps_V"] = r.eps_V;
          out.append(d);
        }
        return out;
      },
      py::arg("scenario"), py::arg("dts"), py::arg("gradient") = "analytic",
      py::arg("t_end") = py::none());

  m.def("validate", [] {
    py::list out;
    for (const auto& r : run_validation()) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });
}
