#include "tbcont/topology.hpp"

#include <algorithm>
#include <cmath>

#include "tbcont/error.hpp"

namespace tbcont {

Switch tanh_switch(double width) {
  if (!(width > 0)) fail(Errc::invalid_parameter, "switch width must be positive");
  // slope 1 at the zero: width * tanh(x / width)
  return {"tanh", [width](double x) { return width * std::tanh(x / width); },
          [width](double x) {
            const double c = std::cosh(x / width);
            return 1.0 / (c * c);
          }};
}

Switch arctan_switch() {
  return {"arctan", [](double x) { return 2.0 / pi * std::atan(pi * x / 2); },
          [](double x) { return 1.0 / (1.0 + pi * pi * x * x / 4); }};
}

Box3 default_box(double delta, double v, double zeta_extent, double x_extent) {
  if (!(delta > 0) || !(v > 0)) fail(Errc::invalid_parameter, "box needs delta, v > 0");
  const double z = zeta_extent / (delta * v);
  return {Vec3(-x_extent, -z, -z), Vec3(x_extent, z, z)};
}

namespace {

VectorField3 second_order(std::string name, double delta, double v, double t1, const Switch& M, double h,
                          double alpha) {
  const double c = std::sqrt(3.0) * v / 2 * t1;
  const double q = delta * v * v / 8 * t1;
  VectorField3 F;
  F.name = std::move(name);
  F.box = default_box(delta, v);
  F.scale = c;
  auto reg = [alpha, delta](double z1, double z2, double& r, double& r1, double& r2) {
    const double jz = std::sqrt(1 + z1 * z1 + z2 * z2);
    r = 1.0 / (1.0 + alpha * alpha * delta * jz);
    r1 = -alpha * alpha * delta * z1 / jz * r * r;
    r2 = -alpha * alpha * delta * z2 / jz * r * r;
  };
  F.f = [=](const Vec3& x) {
    const double z1 = x[1], z2 = x[2];
    double r, r1, r2;
    reg(z1, z2, r, r1, r2);
    const double p1 = q * (z2 * z2 - z1 * z1 + 4 * h * z1 * z1);
    const double p2 = 2 * q * (1 + 2 * h) * z1 * z2;
    return Vec3(c * z2 + p1 * r, -c * z1 + p2 * r, M.value(x[0]));
  };
  F.jac = [=](const Vec3& x) {
    const double z1 = x[1], z2 = x[2];
    double r, r1, r2;
    reg(z1, z2, r, r1, r2);
    const double p1 = q * (z2 * z2 - z1 * z1 + 4 * h * z1 * z1);
    const double p2 = 2 * q * (1 + 2 * h) * z1 * z2;
    const double p1_1 = q * (-2 + 8 * h) * z1, p1_2 = 2 * q * z2;
    const double p2_1 = 2 * q * (1 + 2 * h) * z2, p2_2 = 2 * q * (1 + 2 * h) * z1;
    Mat3 J = Mat3::Zero();
    J(0, 1) = p1_1 * r + p1 * r1;
    J(0, 2) = c + p1_2 * r + p1 * r2;
    J(1, 1) = -c + p2_1 * r + p2 * r1;
    J(1, 2) = p2_2 * r + p2 * r2;
    J(2, 0) = M.slope(x[0]);
    return J;
  };
  F.params = {{"delta", delta}, {"v", v}, {"t1", t1}, {"switch", M.name}};
  return F;
}

}  // namespace

VectorField3 dirac1_field(double v, double t1, double delta, const Switch& M) {
  VectorField3 F = second_order("dirac1", delta, v, t1, M, 0.0, 0.0);
  const double c = std::sqrt(3.0) * v / 2 * t1;
  F.f = [c, M](const Vec3& x) { return Vec3(c * x[2], -c * x[1], M.value(x[0])); };
  F.jac = [c, M](const Vec3& x) {
    Mat3 J = Mat3::Zero();
    J(0, 2) = c;
    J(1, 1) = -c;
    J(2, 0) = M.slope(x[0]);
    return J;
  };
  return F;
}

VectorField3 haldane_gauge_family(double h, double delta, double v, double t1, const Switch& M) {
  VectorField3 F = second_order("haldane-gauge", delta, v, t1, M, h, 0.0);
  F.params["h"] = h;
  F.notes.push_back("the O(delta) (I - sigma3)/2 term is dropped");
  return F;
}

VectorField3 regularized_field(double alpha, double delta, double v, double t1, const Switch& M) {
  VectorField3 F = second_order("regularized", delta, v, t1, M, 0.0, alpha);
  F.params["alpha"] = alpha;
  return F;
}

ZeroSearch find_zeros(const VectorField3& field, const ZeroSearchOptions& opts) {
  return find_zeros(field, field.box, opts);
}

ZeroSearch find_zeros(const VectorField3& field, const Box3& box, const ZeroSearchOptions& opts) {
  if (opts.seeds_x < 1 || opts.seeds_zeta < 1) fail(Errc::invalid_parameter, "seed grid must be non-empty");
  const Vec3 span = box.hi - box.lo;
  const int n[3] = {opts.seeds_x, opts.seeds_zeta, opts.seeds_zeta};
  auto seed = [&](int i, int j, int k) {
    const int id[3] = {i, j, k};
    Vec3 x;
    for (int d = 0; d < 3; ++d) x[d] = box.lo[d] + span[d] * (id[d] + 0.5) / n[d];
    return x;
  };
  // f scale for relative residuals
  auto fscale = [&](const Vec3& x, const Mat3& J) { return 1.0 + J.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff(); };

  struct Outcome {
    bool ok;
    Vec3 x;
    double res;
  };
  auto newton = [&](Vec3 x) -> Outcome {
    Vec3 f = field.f(x);
    for (int it = 0; it < opts.max_iter; ++it) {
      const Mat3 J = field.jac(x);
      if (f.norm() <= opts.tol * fscale(x, J)) break;
      Eigen::FullPivLU<Mat3> lu(J);
      if (!lu.isInvertible()) return {false, x, f.norm()};
      Vec3 step = lu.solve(f);
      // backtracking on |f|
      double lam = 1.0;
      Vec3 xn = x - step;
      Vec3 fn = field.f(xn);
      while (fn.norm() > f.norm() && lam > 1e-4) {
        lam *= 0.5;
        xn = x - lam * step;
        fn = field.f(xn);
      }
      x = xn;
      f = fn;
      if (((x - box.lo).array() < -span.array()).any() || ((x - box.hi).array() > span.array()).any())
        return {false, x, f.norm()};
    }
    const Mat3 J = field.jac(x);
    return {f.norm() <= 1e-10 * fscale(x, J) && std::isfinite(f.norm()), x, f.norm()};
  };

  // sign-change cells: every component takes both signs on the corners
  auto sign_change = [&](const Vec3& c) {
    Vec3 half;
    for (int d = 0; d < 3; ++d) half[d] = 0.5 * span[d] / n[d];
    int pos[3] = {0, 0, 0}, neg[3] = {0, 0, 0};
    for (int m = 0; m < 8; ++m) {
      Vec3 p = c;
      for (int d = 0; d < 3; ++d) p[d] += ((m >> d) & 1) ? half[d] : -half[d];
      const Vec3 f = field.f(p);
      for (int d = 0; d < 3; ++d) (f[d] >= 0 ? pos[d] : neg[d])++;
    }
    return pos[0] && neg[0] && pos[1] && neg[1] && pos[2] && neg[2];
  };

  const std::size_t total = std::size_t(n[0]) * n[1] * n[2];
  std::vector<Outcome> out(total);
  std::vector<char> flagged(total, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t s = 0; s < std::ptrdiff_t(total); ++s) {
    const int i = int(s / (std::ptrdiff_t(n[1]) * n[2]));
    const int j = int((s / n[2]) % n[1]);
    const int k = int(s % n[2]);
    const Vec3 x0 = seed(i, j, k);
    out[s] = newton(x0);
    flagged[s] = sign_change(x0);
  }

  ZeroSearch zs;
  zs.seeds = int(total);
  int near = 0, near_fail = 0;
  const double radius = 1e-6 * box.diameter();
  for (std::size_t s = 0; s < total; ++s) {
    if (flagged[s]) {
      ++near;
      if (!out[s].ok) ++near_fail;
    }
    if (!out[s].ok) continue;
    ++zs.converged;
    const Vec3& x = out[s].x;
    if (((x - box.lo).array() < 0).any() || ((x - box.hi).array() > 0).any()) continue;
    bool dup = false;
    for (const auto& z : zs.zeros)
      if ((z.x - x).norm() < radius) dup = true;
    if (dup) continue;
    FieldZero z;
    z.x = x;
    z.residual = out[s].res;
    z.det = field.jac(x).determinant();
    z.sign = z.det > 0 ? 1 : (z.det < 0 ? -1 : 0);
    zs.zeros.push_back(z);
  }
  if (near > 0 && 2 * near_fail > near)
    fail(Errc::resolution, "Newton failed from " + std::to_string(near_fail) + " of " + std::to_string(near) +
                               " seeds in sign-change cells; refine the seed grid");
  for (const auto& z : zs.zeros) {
    for (int d = 0; d < 3; ++d) {
      const double m = 0.02 * span[d];
      if (z.x[d] - box.lo[d] < m || box.hi[d] - z.x[d] < m) zs.coverage_warning = true;
    }
  }
  if (zs.coverage_warning) zs.warnings.push_back("zero within 2% of the search-box boundary");
  std::sort(zs.zeros.begin(), zs.zeros.end(), [](const FieldZero& a, const FieldZero& b) {
    for (int d = 0; d < 3; ++d)
      if (a.x[d] != b.x[d]) return a.x[d] < b.x[d];
    return false;
  });
  return zs;
}

BDIResult bdi(const VectorField3& field, const ZeroSearchOptions& opts) {
  ZeroSearch zs = find_zeros(field, opts);
  BDIResult r;
  const double floor = opts.floor * field.scale * field.scale * field.scale;
  for (const auto& z : zs.zeros) {
    if (std::abs(z.det) <= floor)
      fail(Errc::degenerate_zero, "zero with |det J| = " + std::to_string(std::abs(z.det)) +
                                      " below the conditioning floor; invariant undefined");
    r.bdi -= z.sign;
  }
  r.zeros = std::move(zs.zeros);
  r.coverage_warning = zs.coverage_warning;
  r.warnings = std::move(zs.warnings);
  for (const auto& n : field.notes) r.warnings.push_back(n);
  return r;
}

nlohmann::json BDIResult::to_json() const {
  nlohmann::json zs = nlohmann::json::array(), ch = nlohmann::json::array();
  for (const auto& z : zeros) {
    zs.push_back({{"X2", z.x[0]}, {"zeta1", z.x[1]}, {"zeta2", z.x[2]}, {"det", z.det}, {"residual", z.residual}});
    ch.push_back(-z.sign);
  }
  return {{"zeros", zs},
          {"charges", ch},
          {"bdi", bdi},
          {"coverage_warning", coverage_warning},
          {"warnings", warnings}};
}

}  // namespace tbcont
