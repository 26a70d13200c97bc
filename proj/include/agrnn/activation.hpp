#pragma once

#include <string>
#include <string_view>

namespace agrnn {

enum class ActivationKind { Tanh, Gaussian, Sine, RampJump };

/// Scalar activation with analytic first and second derivatives.
///
/// RampJump is 0 for s <= 0 and s + 1 for s > 0; its derivative takes the left
/// value at the jump and its second derivative is identically zero.
class Activation {
 public:
  struct Jet {
    double value;
    double d1;
    double d2;
  };

  constexpr explicit Activation(ActivationKind kind = ActivationKind::Tanh) : kind_(kind) {}

  /// Accepts "tanh", "gaussian", "sine", "ramp-jump".
  static Activation from_name(std::string_view name);

  ActivationKind kind() const { return kind_; }
  std::string name() const;

  Jet eval(double s) const;
  double value(double s) const { return eval(s).value; }
  double d1(double s) const { return eval(s).d1; }
  double d2(double s) const { return eval(s).d2; }

  bool twice_differentiable() const { return kind_ != ActivationKind::RampJump; }
  /// sup |rho| over the real line (infinite for RampJump).
  double sup_abs() const;

  friend bool operator==(const Activation&, const Activation&) = default;

 private:
  ActivationKind kind_;
};

}  // namespace agrnn
