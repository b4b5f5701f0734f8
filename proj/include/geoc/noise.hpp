#pragma once

#include <string>

namespace geoc {

enum class NoiseKind { uniform_eps, gaussian_eps };

/// Additive observation noise: U(-eps/2, eps/2) or N(0, eps^2).
struct NoiseSpec {
  NoiseKind kind = NoiseKind::uniform_eps;
  double eps = 0.0;

  /// Throws DomainError unless eps > 0.
  void validate() const;
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

}  // namespace geoc
