#include "tbcont/symbol.hpp"

#include <cmath>

#include "tbcont/error.hpp"

namespace tbcont {

void TrigSymbol::add(const Vec2& shift, const CMat& M, const Field& c, int delta_power) {
  if (M.rows() != n_ || M.cols() != n_) fail(Errc::invalid_parameter, "trig term has wrong dimension");
  if (delta_power < 0 || delta_power > 1) fail(Errc::invalid_parameter, "delta power must be 0 or 1");
  terms_.push_back({shift, M, c, delta_power});
}

void TrigSymbol::add_hermitian_pair(const Vec2& shift, const CMat& M, const Field& c, int delta_power) {
  add(shift, M, c, delta_power);
  const CMat Md = M.adjoint();
  const bool self = shift.isZero(0.0) && Md.isApprox(M, 0.0) &&
                    (c.is_constant() && c.constant_value().imag() == 0.0);
  if (!self) add(-shift, Md, c.conj(), delta_power);
}

CMat TrigSymbol::eval(const Vec2& X, const Vec2& xi, double delta) const {
  CMat out = CMat::Zero(n_, n_);
  for (const auto& t : terms_) {
    const double dp = t.delta_power == 0 ? 1.0 : delta;
    if (dp == 0.0) continue;
    out += (dp * t.coeff(X) * std::exp(I * t.shift.dot(xi))) * t.matrix;
  }
  return out;
}

CMat TrigSymbol::derivative(const Vec2& X, const Vec2& K, int a1, int a2, int ad) const {
  CMat out = CMat::Zero(n_, n_);
  for (const auto& t : terms_) {
    if (t.delta_power != ad) continue;  // d_delta^ad delta^k at 0 is k! if ad == k
    const cplx f = ipow(I * t.shift.x(), a1) * ipow(I * t.shift.y(), a2) *
                   std::exp(I * t.shift.dot(K));
    out += (f * t.coeff(X)) * t.matrix;
  }
  return out;
}

TrigSymbol TrigSymbol::rotated(double theta) const {
  TrigSymbol r(n_);
  r.params_ = params_;
  r.params_["theta"] = theta;
  const Eigen::Matrix2d R = rotation(theta);
  for (const auto& t : terms_) r.terms_.push_back({R * t.shift, t.matrix, t.coeff, t.delta_power});
  return r;
}

bool TrigSymbol::hermitian_closed(const std::vector<Vec2>& X_samples, double tol) const {
  std::vector<bool> used(terms_.size(), false);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    bool found = false;
    for (std::size_t j = 0; j < terms_.size() && !found; ++j) {
      const auto& u = terms_[j];
      if (u.delta_power != t.delta_power) continue;
      if ((u.shift + t.shift).norm() > tol) continue;
      if ((u.matrix - t.matrix.adjoint()).norm() > tol * (1.0 + t.matrix.norm())) continue;
      bool ok = true;
      for (const auto& X : X_samples)
        if (std::abs(u.coeff(X) - std::conj(t.coeff(X))) > tol * (1.0 + std::abs(t.coeff(X)))) {
          ok = false;
          break;
        }
      found = ok;
    }
    if (!found) return false;
  }
  return true;
}

void PolySymbol::add(std::array<int, 2> alpha, const CMat& M, const Field& c, int delta_power) {
  if (M.rows() != n_ || M.cols() != n_) fail(Errc::invalid_parameter, "poly term has wrong dimension");
  if (alpha[0] < 0 || alpha[1] < 0 || delta_power < 0)
    fail(Errc::invalid_parameter, "negative multi-index");
  for (auto& t : terms_) {
    if (t.alpha == alpha && t.delta_power == delta_power && t.coeff.same_as(c)) {
      t.matrix += M;
      return;
    }
  }
  if (c.is_constant()) {
    // constant fields merge by value
    for (auto& t : terms_) {
      if (t.alpha == alpha && t.delta_power == delta_power && t.coeff.is_constant()) {
        t.matrix = t.matrix * t.coeff.constant_value() + M * c.constant_value();
        t.coeff = Field(1.0);
        return;
      }
    }
  }
  terms_.push_back({alpha, delta_power, M, c});
}

void PolySymbol::add(const PolySymbol& other) {
  if (other.n_ != n_) fail(Errc::invalid_parameter, "symbol dimension mismatch");
  for (const auto& t : other.terms_) add(t.alpha, t.matrix, t.coeff, t.delta_power);
  p_ = std::max(p_, other.p_);
}

void PolySymbol::prune(double tol) {
  std::vector<PolyTerm> kept;
  for (auto& t : terms_)
    if (t.matrix.norm() > tol) kept.push_back(std::move(t));
  terms_ = std::move(kept);
}

CMat PolySymbol::eval(const Vec2& X, const Vec2& zeta, double delta) const {
  CMat out = CMat::Zero(n_, n_);
  for (const auto& t : terms_) {
    const double m = ipow(zeta.x(), t.alpha[0]) * ipow(zeta.y(), t.alpha[1]) *
                     ipow(delta, t.delta_power);
    if (m == 0.0) continue;
    out += (m * t.coeff(X)) * t.matrix;
  }
  return out;
}

int PolySymbol::max_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.degree());
  return d;
}

PolySymbol PolySymbol::kron(const CMat& left, const CMat& right) const {
  const int nn = int(left.rows() * n_ * right.rows());
  PolySymbol out(nn, p_);
  out.E_ = E_;
  out.delta_ = delta_;
  out.K_ = K_;
  for (const auto& t : terms_)
    out.terms_.push_back({t.alpha, t.delta_power, tbcont::kron(tbcont::kron(left, t.matrix), right), t.coeff});
  return out;
}

nlohmann::json PolySymbol::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["p"] = p_;
  j["E"] = E_;
  j["delta"] = delta_;
  j["K"] = {K_.x(), K_.y()};
  auto& arr = j["monomials"] = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json m;
    m["alpha"] = {t.alpha[0], t.alpha[1]};
    m["delta_power"] = t.delta_power;
    std::vector<std::vector<double>> re(n_, std::vector<double>(n_)), im = re;
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) {
        re[r][c] = t.matrix(r, c).real();
        im[r][c] = t.matrix(r, c).imag();
      }
    m["matrix_re"] = re;
    m["matrix_im"] = im;
    m["coeff_expr"] = t.coeff.to_json();
    arr.push_back(std::move(m));
  }
  return j;
}

PolySymbol PolySymbol::from_json(const nlohmann::json& j) {
  PolySymbol s(j.at("n").get<int>(), j.at("p").get<int>());
  s.E_ = j.value("E", 0.0);
  s.delta_ = j.value("delta", 0.0);
  if (j.contains("K")) s.K_ = Vec2(j["K"][0].get<double>(), j["K"][1].get<double>());
  for (const auto& m : j.at("monomials")) {
    CMat M(s.n_, s.n_);
    const auto re = m.at("matrix_re").get<std::vector<std::vector<double>>>();
    const auto im = m.at("matrix_im").get<std::vector<std::vector<double>>>();
    for (int r = 0; r < s.n_; ++r)
      for (int c = 0; c < s.n_; ++c) M(r, c) = cplx(re.at(r).at(c), im.at(r).at(c));
    s.terms_.push_back({{m.at("alpha")[0].get<int>(), m.at("alpha")[1].get<int>()},
                        m.value("delta_power", 0), M, Field::from_json(m.at("coeff_expr"))});
  }
  return s;
}

}  // namespace tbcont
