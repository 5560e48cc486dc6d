#pragma once

#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "tbcont/common.hpp"

namespace tbcont {

// Closed-form scalar coefficient field X -> complex, drawn from a small
// expression catalog so that it can be evaluated on any grid and serialized.
class Field {
 public:
  struct Node {
    virtual ~Node() = default;
    virtual cplx value(const Vec2& X) const = 0;
    virtual CVec2 gradient(const Vec2& X) const = 0;
    virtual nlohmann::json to_json() const = 0;
    virtual bool is_constant() const { return false; }
  };

  Field();  // zero
  Field(double c);  // NOLINT: constants convert implicitly
  Field(cplx c);    // NOLINT
  explicit Field(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Field constant(cplx c);
  // amp * exp(i q.X)
  static Field plane_wave(const Vec2& q, cplx amp = 1.0);
  // amp * cos(q.X + phase)
  static Field cosine(const Vec2& q, double amp = 1.0, double phase = 0.0);
  // c0 + q.X
  static Field affine(const Vec2& q, double c0 = 0.0);
  // amp * tanh((n.X - offset) / width)
  static Field tanh_ramp(const Vec2& n, double offset, double width, double amp = 1.0);
  // amp * tanh(r(X) / width) with the stadium distance r for straight length ell and width w
  static Field racetrack(double ell, double w, double width, double amp = 1.0);
  // amp * tanh(s(X_axis) / width), s = (L / 2 pi) sin(2 pi X_axis / L): two interfaces per period
  static Field periodic_strip(int axis, double period, double width, double amp = 1.0);
  // amp * exp(-|X - c|^2 / (2 sigma^2))
  static Field gaussian(const Vec2& center, double sigma, double amp = 1.0);
  // Opaque field defined by callables; serializes by name only.
  static Field derived(std::string name, std::function<cplx(const Vec2&)> value,
                       std::function<CVec2(const Vec2&)> gradient = {});

  static Field from_json(const nlohmann::json& j);

  cplx operator()(const Vec2& X) const { return node_->value(X); }
  cplx value(const Vec2& X) const { return node_->value(X); }
  CVec2 gradient(const Vec2& X) const { return node_->gradient(X); }
  nlohmann::json to_json() const { return node_->to_json(); }
  bool is_constant() const { return node_->is_constant(); }
  // Only meaningful when is_constant().
  cplx constant_value() const { return node_->value(Vec2::Zero()); }
  bool same_as(const Field& o) const { return node_ == o.node_; }
  Field conj() const;

  friend Field operator+(const Field& a, const Field& b);
  friend Field operator*(const Field& a, const Field& b);
  friend Field operator-(const Field& a);
  friend Field operator-(const Field& a, const Field& b) { return a + (-b); }

 private:
  std::shared_ptr<const Node> node_;
};

// Signed stadium distance used by the racetrack mass profile.
double racetrack_distance(const Vec2& x, double ell, double w);

}  // namespace tbcont
