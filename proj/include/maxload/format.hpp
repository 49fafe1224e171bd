#pragma once

#include <string>

#include <gmpxx.h>

namespace maxload {

// 12 significant digits; integral values keep a trailing ".0".
std::string format_decimal(double x, int significant = 12);

// "num/den" (or just "num" for integers) followed by " (decimal)".
std::string format_rational(const mpq_class& q);

// "num/den" always, e.g. "1/1".
std::string rational_string(const mpq_class& q);

}  // namespace maxload
