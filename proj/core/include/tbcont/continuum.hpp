#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <json.hpp>

#include "tbcont/spectral.hpp"
#include "tbcont/symbol.hpp"

namespace tbcont {

// Weyl quantization of a PolySymbol on a truncated Fourier space. A monomial c(X) M zeta^alpha
// acts as 2^{-|alpha|} sum_{beta <= alpha} C(alpha, beta) D^beta c D^{alpha - beta} M, which is
// 1/2 {c, D} for |alpha| = 1 and the nested anticommutator for |alpha| = 2.
class WeylOperator {
 public:
  WeylOperator(const PolySymbol& b, int Kx, int Ky, double Lx, double Ly);

  void apply(const SpectralField& in, SpectralField& out) const;
  int n() const { return n_; }
  bool has_variable_terms() const { return !var_.empty(); }

 private:
  struct VarTerm {
    std::array<int, 2> alpha;
    CMat matrix;  // includes delta^k
    std::vector<cplx> samples;
  };
  int n_, Kx_, Ky_;
  double Lx_, Ly_;
  std::vector<cplx> const_blocks_;  // per mode n x n, row-major
  bool has_const_ = false;
  std::vector<VarTerm> var_;
  std::unique_ptr<SpectralGrid> grid_;
};

SpectralField weyl_apply(const PolySymbol& b, const SpectralField& phi);

// Splitting of the Weyl operator into A (constant coefficients, diagonal in Fourier space),
// B (multiplication by X-dependent matrices) and the mixed part (X-dependent differential terms).
class SplitOperator {
 public:
  SplitOperator(const PolySymbol& b, int Kx, int Ky, double Lx, double Ly);

  int n() const { return n_; }
  bool has_B() const { return has_B_; }
  bool has_mixed() const { return mixed_ != nullptr; }
  const nlohmann::json& metadata() const { return meta_; }

  // phi <- exp(-i s A) phi, exp(-i s B) phi
  void flow_A(SpectralField& phi, double s) const;
  void flow_B(SpectralField& phi, double s) const;

 private:
  int n_, Kx_, Ky_;
  double Lx_, Ly_;
  std::vector<CMat> A_modes_;
  std::vector<Eigen::VectorXd> A_eval_;
  std::vector<CMat> A_evec_;
  bool has_B_ = false;
  std::vector<Eigen::VectorXd> B_eval_;
  std::vector<CMat> B_evec_;
  std::unique_ptr<SpectralGrid> grid_;
  std::unique_ptr<WeylOperator> mixed_;  // B + mixed, integrated by RK4 substeps when present
  double B_norm_ = 0.0;
  nlohmann::json meta_;

  mutable std::mutex cache_mutex_;
  mutable std::map<double, std::vector<CMat>> A_cache_, B_cache_;
  const std::vector<CMat>& A_exp(double s) const;
  const std::vector<CMat>& B_exp(double s) const;
};

// Blanes-Moan 6-stage order-4 partitioned composition
// exp(a7 h A) exp(b6 h B) ... exp(b1 h B) exp(a1 h A).
struct BlanesMoanCoefficients {
  std::array<double, 7> a;
  std::array<double, 6> b;
};
const BlanesMoanCoefficients& blanes_moan_s6();

void blanes_step(const SplitOperator& op, SpectralField& phi, double h);

struct ContinuumTrajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::vector<double> norms;
  double norm0 = 0.0;
  double max_norm_drift = 0.0;
  std::size_t steps = 0;
  nlohmann::json metadata;
};

struct ContinuumOptions {
  std::vector<double> sample_times;  // multiples of h
  bool store_states = true;
  std::function<void(double, const SpectralField&)> observer;
};

// Integrates (D_T + Op(b)) phi = 0 in macroscopic time.
ContinuumTrajectory propagate_continuum(const PolySymbol& b, const SpectralField& phi0, double h, double T,
                                        const ContinuumOptions& opts = {});
ContinuumTrajectory propagate_continuum(const SplitOperator& op, const SpectralField& phi0, double h,
                                        double T, const ContinuumOptions& opts = {});

}  // namespace tbcont
