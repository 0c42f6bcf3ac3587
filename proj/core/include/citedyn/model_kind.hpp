#pragma once

#include <string>

#include "citedyn/types.hpp"

namespace citedyn {

/// The five supported cumulative-citation curve families. Every kind has
/// exactly three free parameters; the canonical parameter-vector layout is
///   wsb, lognormal : (lambda, mu, sigma)
///   logistic       : (S, k, t0)
///   bass           : (S, p, q)
///   gompertz       : (S, b, k)
enum class ModelKind { wsb, lognormal, logistic, bass, gompertz };

inline constexpr int kModelParamCount = 3;

inline const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::wsb: return "wsb";
    case ModelKind::lognormal: return "lognormal";
    case ModelKind::logistic: return "logistic";
    case ModelKind::bass: return "bass";
    case ModelKind::gompertz: return "gompertz";
  }
  return "unknown";
}

inline ModelKind parse_model_kind(const std::string& token) {
  if (token == "wsb") return ModelKind::wsb;
  if (token == "lognormal") return ModelKind::lognormal;
  if (token == "logistic") return ModelKind::logistic;
  if (token == "bass") return ModelKind::bass;
  if (token == "gompertz") return ModelKind::gompertz;
  throw InputError("unknown model kind: '" + token +
                   "' (expected wsb, lognormal, logistic, bass, or gompertz)");
}

}  // namespace citedyn
