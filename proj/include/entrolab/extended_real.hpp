#pragma once

#include <string>

namespace entrolab {

// A real number or one of the two infinities. Entropies may legitimately be
// -inf (support violations) or +inf (relative entropy with kernel overlap).
class ExtendedReal {
 public:
  enum class Kind { Finite, NegativeInfinity, PositiveInfinity };

  ExtendedReal() = default;
  static ExtendedReal finite(double v);
  static ExtendedReal negative_infinity();
  static ExtendedReal positive_infinity();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  // Throws std::logic_error when not finite.
  double value() const;
  // Finite value, or +-HUGE_VAL for the infinities.
  double as_double() const;

  ExtendedReal operator-() const;
  bool operator==(const ExtendedReal& o) const = default;

  std::string to_string(int significant_digits = 9) const;

 private:
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

}  // namespace entrolab
