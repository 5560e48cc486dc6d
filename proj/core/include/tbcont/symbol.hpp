#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbcont/common.hpp"
#include "tbcont/field.hpp"

namespace tbcont {

// c(X) * delta^k * M * exp(i shift . xi)
struct TrigTerm {
  Vec2 shift = Vec2::Zero();
  CMat matrix;
  Field coeff;
  int delta_power = 0;  // 0 or 1
};

class TrigSymbol {
 public:
  explicit TrigSymbol(int n = 2) : n_(n) {}

  int n() const { return n_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  std::map<std::string, double>& params() { return params_; }
  const std::map<std::string, double>& params() const { return params_; }

  void add(const Vec2& shift, const CMat& M, const Field& c, int delta_power = 0);
  // Adds the term and its Hermitian partner (-shift, M^dagger, conj c).
  void add_hermitian_pair(const Vec2& shift, const CMat& M, const Field& c, int delta_power = 0);

  CMat eval(const Vec2& X, const Vec2& xi, double delta) const;
  // d_xi1^a1 d_xi2^a2 d_delta^ad a(X, K; delta) at delta = 0, computed in closed form.
  CMat derivative(const Vec2& X, const Vec2& K, int a1, int a2, int ad) const;

  // a^theta(X, xi) = a(X, R_{-theta} xi): all shifts rotated by R_theta.
  TrigSymbol rotated(double theta) const;

  // Structural check: every term has its Hermitian partner (fields compared on samples).
  bool hermitian_closed(const std::vector<Vec2>& X_samples, double tol = 1e-13) const;

 private:
  int n_;
  std::vector<TrigTerm> terms_;
  std::map<std::string, double> params_;
};

// c(X) * delta^k * M * zeta^alpha
struct PolyTerm {
  std::array<int, 2> alpha{0, 0};
  int delta_power = 0;
  CMat matrix;
  Field coeff;
  int degree() const { return alpha[0] + alpha[1]; }
};

class PolySymbol {
 public:
  explicit PolySymbol(int n = 2, int p = 1) : n_(n), p_(p) {}

  int n() const { return n_; }
  int p() const { return p_; }
  void set_order(int p) { p_ = p; }
  double E() const { return E_; }
  void set_E(double E) { E_ = E; }
  double delta() const { return delta_; }
  void set_delta(double d) { delta_ = d; }
  const Vec2& K() const { return K_; }
  void set_K(const Vec2& K) { K_ = K; }

  const std::vector<PolyTerm>& terms() const { return terms_; }

  // Adds c * delta^k * M * zeta^alpha; merges with an existing term sharing alpha, k and field.
  void add(std::array<int, 2> alpha, const CMat& M, const Field& c = Field(1.0), int delta_power = 0);
  void add(const PolySymbol& other);
  // Drops terms whose matrix norm is below tol.
  void prune(double tol = 1e-14);

  CMat eval(const Vec2& X, const Vec2& zeta, double delta) const;
  CMat eval(const Vec2& X, const Vec2& zeta) const { return eval(X, zeta, delta_); }
  int max_degree() const;

  // Embeds into a larger matrix: result term matrices are L (x) M (x) R.
  PolySymbol kron(const CMat& left, const CMat& right) const;

  nlohmann::json to_json() const;
  static PolySymbol from_json(const nlohmann::json& j);

 private:
  int n_;
  int p_;
  double E_ = 0.0;
  double delta_ = 0.0;
  Vec2 K_ = Vec2::Zero();
  std::vector<PolyTerm> terms_;
};

}  // namespace tbcont
