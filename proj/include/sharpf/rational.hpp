#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace sharpf {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

}  // namespace sharpf
