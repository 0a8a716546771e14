#ifndef MUSIELAK_CORE_ERRORS_HPP
#define MUSIELAK_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace musielak {

// Mirrors the mo_status codes of the public C surface one-to-one.
enum class ErrorCode {
  invalid_argument,
  domain_error,       // point outside a field/grid domain, mismatched grids
  range_error,        // evaluation overflow (exp_power at large t)
  geometry_error,     // support escapes the domain box
  unsupported_order,  // derivative order beyond available stencils/evaluators
  no_convergence,     // iteration cap hit in a solver
  config_error,       // malformed configuration
  io_error,
  internal_error,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) raise(code, what);
}

}  // namespace musielak

#endif
