#pragma once

#include <string>

namespace agc {

// 12 significant digits, shortest form, independent of the C locale.
// Values that would print without a decimal point or exponent get ".0"
// appended ("3.0").
std::string format_number(double value);

}  // namespace agc
