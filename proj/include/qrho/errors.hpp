#pragma once

#include <stdexcept>
#include <string>

namespace qrho {

// Error categories surfaced by the library. The C API maps each one to a
// stable integer status (see qrho.h).
enum class Errc {
  domain = 1,             // argument outside the mathematical domain
  unsupported_order,      // Hermite order beyond the supported range
  accuracy,               // quadrature or fit did not reach the requested tolerance
  configuration,          // inconsistent solver / simulation configuration
  tail_mass,              // stationary grid too narrow
  budget,                 // step or subdivision budget exhausted
  sampling,               // empty or degenerate Monte Carlo sample
  fit,                    // relaxation fit failed (non-monotone residuals)
  domain_size,            // PDE grid too small (boundary contamination)
  resolution,             // time step too coarse for the oscillation
  evaluation_point,       // wave functional evaluated at a node of xi
  timing,                 // evaluation time outside the asymptotic region
  singular_configuration, // generating functional degenerate (A = 0)
  precondition,           // documented precondition violated
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised when an adaptive routine gives up; carries its best estimate.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(Errc::accuracy, what), best_(best_estimate), err_(error_estimate) {}
  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qrho
