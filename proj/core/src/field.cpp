#include "tbcont/field.hpp"

#include <cmath>

#include "tbcont/error.hpp"

namespace tbcont {
namespace {

using nlohmann::json;

json cjson(cplx c) { return json::array({c.real(), c.imag()}); }
cplx from_cjson(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}
json vjson(const Vec2& v) { return json::array({v.x(), v.y()}); }
Vec2 from_vjson(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

struct Constant final : Field::Node {
  cplx c;
  explicit Constant(cplx c_) : c(c_) {}
  cplx value(const Vec2&) const override { return c; }
  CVec2 gradient(const Vec2&) const override { return CVec2::Zero(); }
  json to_json() const override { return {{"kind", "constant"}, {"value", cjson(c)}}; }
  bool is_constant() const override { return true; }
};

struct PlaneWave final : Field::Node {
  Vec2 q;
  cplx amp;
  PlaneWave(Vec2 q_, cplx a) : q(std::move(q_)), amp(a) {}
  cplx value(const Vec2& X) const override { return amp * std::exp(I * q.dot(X)); }
  CVec2 gradient(const Vec2& X) const override {
    return (I * value(X)) * q.cast<cplx>();
  }
  json to_json() const override {
    return {{"kind", "plane_wave"}, {"q", vjson(q)}, {"amp", cjson(amp)}};
  }
};

struct Cosine final : Field::Node {
  Vec2 q;
  double amp, phase;
  Cosine(Vec2 q_, double a, double p) : q(std::move(q_)), amp(a), phase(p) {}
  cplx value(const Vec2& X) const override { return amp * std::cos(q.dot(X) + phase); }
  CVec2 gradient(const Vec2& X) const override {
    return (-amp * std::sin(q.dot(X) + phase) * q).cast<cplx>();
  }
  json to_json() const override {
    return {{"kind", "cosine"}, {"q", vjson(q)}, {"amp", amp}, {"phase", phase}};
  }
};

struct Affine final : Field::Node {
  Vec2 q;
  double c0;
  Affine(Vec2 q_, double c) : q(std::move(q_)), c0(c) {}
  cplx value(const Vec2& X) const override { return c0 + q.dot(X); }
  CVec2 gradient(const Vec2&) const override { return q.cast<cplx>(); }
  json to_json() const override { return {{"kind", "affine"}, {"q", vjson(q)}, {"c0", c0}}; }
};

struct TanhRamp final : Field::Node {
  Vec2 n;
  double offset, width, amp;
  TanhRamp(Vec2 n_, double o, double w, double a) : n(std::move(n_)), offset(o), width(w), amp(a) {}
  cplx value(const Vec2& X) const override { return amp * std::tanh((n.dot(X) - offset) / width); }
  CVec2 gradient(const Vec2& X) const override {
    const double t = std::tanh((n.dot(X) - offset) / width);
    return (amp * (1.0 - t * t) / width * n).cast<cplx>();
  }
  json to_json() const override {
    return {{"kind", "tanh_ramp"}, {"n", vjson(n)}, {"offset", offset}, {"width", width}, {"amp", amp}};
  }
};

struct Racetrack final : Field::Node {
  double ell, w, width, amp;
  Racetrack(double l, double w_, double wd, double a) : ell(l), w(w_), width(wd), amp(a) {}
  cplx value(const Vec2& X) const override {
    return amp * std::tanh(racetrack_distance(X, ell, w) / width);
  }
  CVec2 gradient(const Vec2& X) const override {
    const double r = racetrack_distance(X, ell, w);
    const double t = std::tanh(r / width);
    Vec2 g;
    const double ax = std::abs(X.x());
    if (ax > ell / 2) {
      const double dx = ax - ell / 2;
      const double rho = std::hypot(dx, X.y());
      if (rho == 0.0) {
        g.setZero();
      } else {
        g << std::copysign(dx / rho, X.x()), X.y() / rho;
      }
    } else {
      g << 0.0, (X.y() >= 0 ? 1.0 : -1.0);
    }
    return (amp * (1.0 - t * t) / width * g).cast<cplx>();
  }
  json to_json() const override {
    return {{"kind", "racetrack"}, {"ell", ell}, {"w", w}, {"width", width}, {"amp", amp}};
  }
};

struct PeriodicStrip final : Field::Node {
  int axis;
  double period, width, amp;
  PeriodicStrip(int ax, double p, double w, double a) : axis(ax), period(p), width(w), amp(a) {}
  cplx value(const Vec2& X) const override {
    const double s = period / (2 * pi) * std::sin(2 * pi * X[axis] / period);
    return amp * std::tanh(s / width);
  }
  CVec2 gradient(const Vec2& X) const override {
    const double arg = 2 * pi * X[axis] / period;
    const double s = period / (2 * pi) * std::sin(arg);
    const double t = std::tanh(s / width);
    CVec2 g = CVec2::Zero();
    g[axis] = amp * (1.0 - t * t) / width * std::cos(arg);
    return g;
  }
  json to_json() const override {
    return {{"kind", "periodic_strip"}, {"axis", axis}, {"period", period}, {"width", width}, {"amp", amp}};
  }
};

struct Gaussian final : Field::Node {
  Vec2 c;
  double sigma, amp;
  Gaussian(Vec2 c_, double s, double a) : c(std::move(c_)), sigma(s), amp(a) {}
  cplx value(const Vec2& X) const override {
    return amp * std::exp(-(X - c).squaredNorm() / (2 * sigma * sigma));
  }
  CVec2 gradient(const Vec2& X) const override {
    return (-value(X).real() / (sigma * sigma) * (X - c)).cast<cplx>();
  }
  json to_json() const override {
    return {{"kind", "gaussian"}, {"center", vjson(c)}, {"sigma", sigma}, {"amp", amp}};
  }
};

struct Derived final : Field::Node {
  std::string name;
  std::function<cplx(const Vec2&)> f;
  std::function<CVec2(const Vec2&)> g;
  cplx value(const Vec2& X) const override { return f(X); }
  CVec2 gradient(const Vec2& X) const override {
    if (g) return g(X);
    const double h = 1e-6;
    CVec2 out;
    for (int k = 0; k < 2; ++k) {
      Vec2 e = Vec2::Zero();
      e[k] = h;
      out[k] = (f(X + e) - f(X - e)) / (2 * h);
    }
    return out;
  }
  json to_json() const override { return {{"kind", "derived"}, {"name", name}}; }
};

struct Sum final : Field::Node {
  Field a, b;
  Sum(Field a_, Field b_) : a(std::move(a_)), b(std::move(b_)) {}
  cplx value(const Vec2& X) const override { return a(X) + b(X); }
  CVec2 gradient(const Vec2& X) const override { return a.gradient(X) + b.gradient(X); }
  json to_json() const override { return {{"kind", "sum"}, {"a", a.to_json()}, {"b", b.to_json()}}; }
};

struct Product final : Field::Node {
  Field a, b;
  Product(Field a_, Field b_) : a(std::move(a_)), b(std::move(b_)) {}
  cplx value(const Vec2& X) const override { return a(X) * b(X); }
  CVec2 gradient(const Vec2& X) const override {
    return a.gradient(X) * b(X) + a(X) * b.gradient(X);
  }
  json to_json() const override {
    return {{"kind", "product"}, {"a", a.to_json()}, {"b", b.to_json()}};
  }
};

struct Conj final : Field::Node {
  Field a;
  explicit Conj(Field a_) : a(std::move(a_)) {}
  cplx value(const Vec2& X) const override { return std::conj(a(X)); }
  CVec2 gradient(const Vec2& X) const override { return a.gradient(X).conjugate(); }
  json to_json() const override { return {{"kind", "conj"}, {"a", a.to_json()}}; }
};

}  // namespace

double racetrack_distance(const Vec2& x, double ell, double w) {
  const double ax = std::abs(x.x());
  if (ax > ell / 2) return std::hypot(ax - ell / 2, x.y()) - w / 2;
  return std::abs(x.y()) - w / 2;
}

Field::Field() : node_(std::make_shared<Constant>(0.0)) {}
Field::Field(double c) : node_(std::make_shared<Constant>(c)) {}
Field::Field(cplx c) : node_(std::make_shared<Constant>(c)) {}

Field Field::constant(cplx c) { return Field(c); }
Field Field::plane_wave(const Vec2& q, cplx amp) {
  if (q.isZero(0.0)) return Field(amp);
  return Field(std::make_shared<PlaneWave>(q, amp));
}
Field Field::cosine(const Vec2& q, double amp, double phase) {
  return Field(std::make_shared<Cosine>(q, amp, phase));
}
Field Field::affine(const Vec2& q, double c0) { return Field(std::make_shared<Affine>(q, c0)); }
Field Field::tanh_ramp(const Vec2& n, double offset, double width, double amp) {
  if (width <= 0) fail(Errc::invalid_parameter, "tanh_ramp width must be positive");
  return Field(std::make_shared<TanhRamp>(n, offset, width, amp));
}
Field Field::racetrack(double ell, double w, double width, double amp) {
  if (width <= 0 || ell < 0 || w < 0) fail(Errc::invalid_parameter, "racetrack parameters");
  return Field(std::make_shared<Racetrack>(ell, w, width, amp));
}
Field Field::periodic_strip(int axis, double period, double width, double amp) {
  if (axis < 0 || axis > 1 || period <= 0 || width <= 0)
    fail(Errc::invalid_parameter, "periodic_strip parameters");
  return Field(std::make_shared<PeriodicStrip>(axis, period, width, amp));
}
Field Field::gaussian(const Vec2& center, double sigma, double amp) {
  if (sigma <= 0) fail(Errc::invalid_parameter, "gaussian sigma must be positive");
  return Field(std::make_shared<Gaussian>(center, sigma, amp));
}
Field Field::derived(std::string name, std::function<cplx(const Vec2&)> value,
                     std::function<CVec2(const Vec2&)> gradient) {
  auto n = std::make_shared<Derived>();
  n->name = std::move(name);
  n->f = std::move(value);
  n->g = std::move(gradient);
  return Field(std::move(n));
}

Field Field::conj() const {
  if (is_constant()) return Field(std::conj(constant_value()));
  return Field(std::make_shared<Conj>(*this));
}

Field operator+(const Field& a, const Field& b) {
  if (a.is_constant() && b.is_constant()) return Field(a.constant_value() + b.constant_value());
  if (a.is_constant() && a.constant_value() == cplx(0.0)) return b;
  if (b.is_constant() && b.constant_value() == cplx(0.0)) return a;
  return Field(std::make_shared<Sum>(a, b));
}

Field operator*(const Field& a, const Field& b) {
  if (a.is_constant() && b.is_constant()) return Field(a.constant_value() * b.constant_value());
  if (a.is_constant() && a.constant_value() == cplx(1.0)) return b;
  if (b.is_constant() && b.constant_value() == cplx(1.0)) return a;
  return Field(std::make_shared<Product>(a, b));
}

Field operator-(const Field& a) { return Field(-1.0) * a; }

Field Field::from_json(const json& j) {
  if (j.is_number()) return Field(j.get<double>());
  if (j.is_array()) return Field(from_cjson(j));
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return Field(from_cjson(j.at("value")));
  if (kind == "plane_wave")
    return plane_wave(from_vjson(j.at("q")), j.contains("amp") ? from_cjson(j.at("amp")) : cplx(1.0));
  if (kind == "cosine")
    return cosine(from_vjson(j.at("q")), j.value("amp", 1.0), j.value("phase", 0.0));
  if (kind == "affine") return affine(from_vjson(j.at("q")), j.value("c0", 0.0));
  if (kind == "tanh_ramp")
    return tanh_ramp(from_vjson(j.at("n")), j.value("offset", 0.0), j.at("width").get<double>(),
                     j.value("amp", 1.0));
  if (kind == "racetrack")
    return racetrack(j.at("ell").get<double>(), j.at("w").get<double>(), j.at("width").get<double>(),
                     j.value("amp", 1.0));
  if (kind == "periodic_strip")
    return periodic_strip(j.at("axis").get<int>(), j.at("period").get<double>(),
                          j.at("width").get<double>(), j.value("amp", 1.0));
  if (kind == "gaussian")
    return gaussian(from_vjson(j.at("center")), j.at("sigma").get<double>(), j.value("amp", 1.0));
  if (kind == "sum") return from_json(j.at("a")) + from_json(j.at("b"));
  if (kind == "product") return from_json(j.at("a")) * from_json(j.at("b"));
  if (kind == "conj") return from_json(j.at("a")).conj();
  fail(Errc::unsupported, "field kind '" + kind + "' cannot be reconstructed from JSON");
}

}  // namespace tbcont
