#pragma once

#include <stdexcept>
#include <string>

namespace tbcont {

enum class Errc {
  invalid_parameter,
  capacity,
  invalid_order,
  invalid_config,
  precondition,
  degenerate_field,
  unsupported,
  numerical_abort,
  fit_undetermined,
  domain_too_small,
  no_modes,
  resample,
  degenerate_zero,
  resolution,
  config,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace tbcont
