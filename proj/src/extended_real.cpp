#include "entrolab/extended_real.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace entrolab {

ExtendedReal ExtendedReal::finite(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal::finite needs a finite value");
  ExtendedReal r;
  r.value_ = v;
  return r;
}

ExtendedReal ExtendedReal::negative_infinity() {
  ExtendedReal r;
  r.kind_ = Kind::NegativeInfinity;
  return r;
}

ExtendedReal ExtendedReal::positive_infinity() {
  ExtendedReal r;
  r.kind_ = Kind::PositiveInfinity;
  return r;
}

double ExtendedReal::value() const {
  if (kind_ != Kind::Finite) throw std::logic_error("value() on an infinite ExtendedReal");
  return value_;
}

double ExtendedReal::as_double() const {
  switch (kind_) {
    case Kind::NegativeInfinity: return -HUGE_VAL;
    case Kind::PositiveInfinity: return HUGE_VAL;
    default: return value_;
  }
}

ExtendedReal ExtendedReal::operator-() const {
  switch (kind_) {
    case Kind::NegativeInfinity: return positive_infinity();
    case Kind::PositiveInfinity: return negative_infinity();
    default: return finite(-value_);
  }
}

std::string ExtendedReal::to_string(int significant_digits) const {
  if (kind_ == Kind::NegativeInfinity) return "-inf";
  if (kind_ == Kind::PositiveInfinity) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value_ == 0.0 ? 0.0 : value_);
  return buf;
}

}  // namespace entrolab
