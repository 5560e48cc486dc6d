#include "tbcont/error.hpp"

#include "tbcont/common.hpp"

namespace tbcont {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::capacity: return "capacity";
    case Errc::invalid_order: return "invalid-order";
    case Errc::invalid_config: return "invalid-config";
    case Errc::precondition: return "precondition";
    case Errc::degenerate_field: return "degenerate-field";
    case Errc::unsupported: return "unsupported";
    case Errc::numerical_abort: return "numerical-abort";
    case Errc::fit_undetermined: return "fit-undetermined";
    case Errc::domain_too_small: return "domain-too-small";
    case Errc::no_modes: return "no-modes";
    case Errc::resample: return "resample";
    case Errc::degenerate_zero: return "degenerate-zero";
    case Errc::resolution: return "resolution";
    case Errc::config: return "config";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

CMat pauli(int k) {
  CMat s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: fail(Errc::invalid_parameter, "pauli index must be 0..3");
  }
  return s;
}

CMat sigma_plus() {
  CMat s = CMat::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

CMat sigma_minus() {
  CMat s = CMat::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace tbcont
