#include "agrnn/activation.hpp"

#include <cmath>
#include <limits>

#include "agrnn/error.hpp"

namespace agrnn {

Activation Activation::from_name(std::string_view name) {
  if (name == "tanh") return Activation(ActivationKind::Tanh);
  if (name == "gaussian") return Activation(ActivationKind::Gaussian);
  if (name == "sine" || name == "sin") return Activation(ActivationKind::Sine);
  if (name == "ramp-jump") return Activation(ActivationKind::RampJump);
  throw Error(ErrorKind::InvalidConfig, "unknown activation '" + std::string(name) + "'");
}

std::string Activation::name() const {
  switch (kind_) {
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Gaussian: return "gaussian";
    case ActivationKind::Sine: return "sine";
    case ActivationKind::RampJump: return "ramp-jump";
  }
  return "unknown";
}

Activation::Jet Activation::eval(double s) const {
  switch (kind_) {
    case ActivationKind::Tanh: {
      const double t = std::tanh(s);
      const double sech2 = 1.0 - t * t;
      return {t, sech2, -2.0 * t * sech2};
    }
    case ActivationKind::Gaussian: {
      const double g = std::exp(-0.5 * s * s);
      return {g, -s * g, (s * s - 1.0) * g};
    }
    case ActivationKind::Sine: {
      const double sn = std::sin(s);
      return {sn, std::cos(s), -sn};
    }
    case ActivationKind::RampJump:
      if (s <= 0.0) return {0.0, 0.0, 0.0};
      return {s + 1.0, 1.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

double Activation::sup_abs() const {
  return kind_ == ActivationKind::RampJump ? std::numeric_limits<double>::infinity() : 1.0;
}

}  // namespace agrnn
