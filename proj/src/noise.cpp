#include "geoc/noise.hpp"

#include <cmath>

#include "geoc/error.hpp"

namespace geoc {

void NoiseSpec::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("noise eps must be positive");
}

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::uniform_eps ? "uniform" : "gaussian";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "uniform" || name == "uniform_eps") return NoiseKind::uniform_eps;
  if (name == "gaussian" || name == "gaussian_eps") return NoiseKind::gaussian_eps;
  throw ArgumentError("unknown noise kind '" + name + "'");
}

}  // namespace geoc
