#include "qrho/errors.hpp"

namespace qrho {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "domain";
    case Errc::unsupported_order: return "unsupported_order";
    case Errc::accuracy: return "accuracy";
    case Errc::configuration: return "configuration";
    case Errc::tail_mass: return "tail_mass";
    case Errc::budget: return "budget";
    case Errc::sampling: return "sampling";
    case Errc::fit: return "fit";
    case Errc::domain_size: return "domain_size";
    case Errc::resolution: return "resolution";
    case Errc::evaluation_point: return "evaluation_point";
    case Errc::timing: return "timing";
    case Errc::singular_configuration: return "singular_configuration";
    case Errc::precondition: return "precondition";
  }
  return "unknown";
}

}  // namespace qrho
