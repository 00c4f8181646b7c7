#include "lagmove/fields.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lagmove/errors.hpp"

namespace lagmove {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_2d(const Vector& x, const char* what) {
  if (x.size() != 2) {
    throw DimensionError(std::string(what) + " is only defined in 2D, got dimension " +
                         std::to_string(x.size()));
  }
}

Matrix rotation_generator(double omega) { return make_matrix(0.0, -omega, omega, 0.0); }

Vector rotate_about(const Vector& x0, const Vector& center, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vector r = x0 - center;
  return make_vector(center.x() + c * r.x() - s * r.y(), center.y() + s * r.x() + c * r.y());
}

}  // namespace

double ModulatedRotation::rate(double t) const {
  return omega0 * (1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * frequency * t));
}

Vector eval_rotation(const Vector& x, const Vector& center, double omega) {
  require_2d(x, "rotation field");
  require_2d(center, "rotation center");
  return make_vector(-omega * (x.y() - center.y()), omega * (x.x() - center.x()));
}

Vector eval_lissajous(double t) {
  return make_vector(15.0 * std::cos(5.0 * t + std::numbers::pi / 2.0), 4.0 * std::cos(4.0 * t));
}

Vector exact_lissajous_center(double t) {
  return make_vector(3.0 * std::sin(5.0 * t + std::numbers::pi / 2.0) - 3.0, std::sin(4.0 * t));
}

int field_dim(const FieldKind& kind) {
  return std::visit(overloaded{
                        [](const Linear& f) { return static_cast<int>(f.b.size()); },
                        [](const auto&) { return 2; },
                    },
                    kind);
}

Vector field_velocity(const FieldKind& kind, const Vector& x, double t) {
  return std::visit(
      overloaded{
          [&](const RigidRotation& f) { return eval_rotation(x, f.center, f.omega); },
          [&](const Lissajous&) {
            require_2d(x, "lissajous field");
            return eval_lissajous(t);
          },
          [&](const Linear& f) -> Vector {
            if (x.size() != f.b.size()) throw DimensionError("linear field: dimension mismatch");
            return f.a * x + f.b;
          },
          [&](const ModulatedRotation& f) { return eval_rotation(x, f.center, f.rate(t)); },
      },
      kind);
}

Matrix field_gradient(const FieldKind& kind, const Vector& x, double t) {
  return std::visit(overloaded{
                        [&](const RigidRotation& f) {
                          require_2d(x, "rotation field");
                          return rotation_generator(f.omega);
                        },
                        [&](const Lissajous&) -> Matrix {
                          require_2d(x, "lissajous field");
                          return Matrix::Zero(2, 2);
                        },
                        [&](const Linear& f) -> Matrix {
                          if (x.size() != f.b.size()) {
                            throw DimensionError("linear field: dimension mismatch");
                          }
                          return f.a;
                        },
                        [&](const ModulatedRotation& f) {
                          require_2d(x, "modulated rotation field");
                          return rotation_generator(f.rate(t));
                        },
                    },
                    kind);
}

Vector exact_flow(const FieldKind& kind, const Vector& x0, double t0, double t) {
  return std::visit(
      overloaded{
          [&](const RigidRotation& f) {
            require_2d(x0, "rotation field");
            return rotate_about(x0, f.center, f.omega * (t - t0));
          },
          [&](const Lissajous&) -> Vector {
            require_2d(x0, "lissajous field");
            return x0 + (exact_lissajous_center(t) - exact_lissajous_center(t0));
          },
          [&](const Linear& f) -> Vector {
            // Augmented system d/dt [x; 1] = [[A, b], [0, 0]] [x; 1].
            const auto d = f.b.size();
            if (x0.size() != d) throw DimensionError("linear field: dimension mismatch");
            Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d + 1, d + 1);
            gen.topLeftCorner(d, d) = f.a;
            gen.topRightCorner(d, 1) = f.b;
            const Eigen::MatrixXd map = (gen * (t - t0)).exp();
            Eigen::VectorXd aug(d + 1);
            aug.head(d) = x0;
            aug(d) = 1.0;
            return Vector((map * aug).head(d));
          },
          [&](const ModulatedRotation& f) {
            require_2d(x0, "modulated rotation field");
            const double w = 2.0 * std::numbers::pi * f.frequency;
            double angle = f.omega0 * (t - t0);
            if (w != 0.0) angle -= f.omega0 * 0.5 / w * (std::cos(w * t) - std::cos(w * t0));
            return rotate_about(x0, f.center, angle);
          },
      },
      kind);
}

VelocityField::VelocityField(FieldKind kind) : kind_(std::move(kind)) {
  if (const auto* lin = std::get_if<Linear>(&kind_)) {
    const auto d = lin->b.size();
    if ((d != 2 && d != 3) || lin->a.rows() != d || lin->a.cols() != d) {
      throw DimensionError("linear field needs a d x d matrix and a d-vector, d in {2,3}");
    }
    if (!all_finite(lin->a) || !all_finite(lin->b)) {
      throw NumericInputError("linear field coefficients must be finite");
    }
  }
}

Vector VelocityField::evaluate(const Vector& x, double t) const { return field_velocity(kind_, x, t); }

Matrix VelocityField::gradient(const Vector& x, double t) const { return field_gradient(kind_, x, t); }

std::string VelocityField::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const RigidRotation& f) {
                   os << "rotation(center=(" << f.center.x() << "," << f.center.y()
                      << "),omega=" << f.omega << ")";
                 },
                 [&](const Lissajous&) { os << "lissajous"; },
                 [&](const Linear& f) {
                   os << "linear(A=[";
                   for (int r = 0; r < f.a.rows(); ++r) {
                     for (int c = 0; c < f.a.cols(); ++c) os << (r || c ? "," : "") << f.a(r, c);
                   }
                   os << "],b=[";
                   for (int r = 0; r < f.b.size(); ++r) os << (r ? "," : "") << f.b(r);
                   os << "])";
                 },
                 [&](const ModulatedRotation& f) {
                   os << "modulated-rotation(center=(" << f.center.x() << "," << f.center.y()
                      << "),omega0=" << f.omega0 << ",f=" << f.frequency << ")";
                 },
             },
             kind_);
  return os.str();
}

}  // namespace lagmove
