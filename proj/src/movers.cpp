#include "lagmove/movers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "lagmove/errors.hpp"

namespace lagmove {

namespace {

void check_common(const MoveContext& ctx) {
  if (!(ctx.dt > 0.0) || !std::isfinite(ctx.dt)) {
    throw NumericInputError("mover: time step must be positive and finite");
  }
  if (!all_finite(ctx.v_n)) throw NumericInputError("mover: non-finite velocity");
}

void check_history(const MoveContext& ctx, const char* who) {
  if (!ctx.has_history) {
    throw HistoryMissingError(std::string(who) + " needs the previous velocity level");
  }
  if (!all_finite(ctx.v_prev)) throw NumericInputError("mover: non-finite previous velocity");
}

void check_terms(int terms) {
  if (terms < 1) throw NumericInputError("series needs at least one term");
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::M1: return "m1";
    case Scheme::M2: return "m2";
    case Scheme::M3: return "m3";
    case Scheme::M4: return "m4";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "m1") return Scheme::M1;
  if (key == "m2") return Scheme::M2;
  if (key == "m3") return Scheme::M3;
  if (key == "m4") return Scheme::M4;
  throw UsageError("unknown mover '" + name + "' (expected m1, m2, m3 or m4)");
}

MoveContext make_context(const Point& p, double dt) {
  return MoveContext{dt, p.velocity, p.velocity_prev, p.grad_velocity, p.grad_velocity_prev,
                     p.has_history};
}

Vector exp_series_apply(const Matrix& a, const Vector& v, double dt, int terms, int offset) {
  check_terms(terms);
  if (offset != 0 && offset != 1) throw NumericInputError("series offset must be 0 or 1");
  if (a.rows() != v.size() || a.cols() != v.size()) {
    throw DimensionError("series: matrix and vector dimensions differ");
  }
  if (!all_finite(a) || !all_finite(v) || !std::isfinite(dt)) {
    throw NumericInputError("series: non-finite input");
  }

  // coef_k = dt^(k+1+offset) / (k+1+offset)!
  double coef = offset == 0 ? dt : 0.5 * dt * dt;
  Vector power = v;  // A^k v
  Vector sum = coef * power;
  for (int k = 1; k < terms; ++k) {
    power = a * power;
    coef *= dt / static_cast<double>(k + 1 + offset);
    sum += coef * power;
  }
  return sum;
}

Vector move_m1(const MoveContext& ctx) {
  check_common(ctx);
  return ctx.v_n * ctx.dt;
}

Vector move_m2(const MoveContext& ctx) {
  check_common(ctx);
  check_history(ctx, "second-order mover");
  return ctx.v_n * ctx.dt + 0.5 * (ctx.v_n - ctx.v_prev) * ctx.dt;
}

Vector move_m3(const MoveContext& ctx, int terms) {
  check_common(ctx);
  if (!all_finite(ctx.grad_n)) throw NumericInputError("mover: non-finite velocity gradient");
  return exp_series_apply(ctx.grad_n, ctx.v_n, ctx.dt, terms, 0);
}

Vector move_m4(const MoveContext& ctx, int terms) {
  check_common(ctx);
  check_history(ctx, "change-of-streamline mover");
  if (!all_finite(ctx.grad_n) || !all_finite(ctx.grad_prev)) {
    throw NumericInputError("mover: non-finite velocity gradient");
  }
  const Vector current = exp_series_apply(ctx.grad_n, ctx.v_n, ctx.dt, terms, 1);
  const Vector previous = exp_series_apply(ctx.grad_prev, ctx.v_prev, ctx.dt, terms, 1);
  return ctx.v_n * ctx.dt + (current - previous) / ctx.dt;
}

Vector displacement(const MoverKind& kind, const MoveContext& ctx) {
  switch (kind.scheme) {
    case Scheme::M1: return move_m1(ctx);
    case Scheme::M2: return ctx.has_history ? move_m2(ctx) : move_m1(ctx);
    case Scheme::M3: return move_m3(ctx, kind.terms);
    case Scheme::M4: return ctx.has_history ? move_m4(ctx, kind.terms) : move_m3(ctx, kind.terms);
  }
  throw UsageError("unknown mover scheme");
}

}  // namespace lagmove
