#pragma once

#include <string>

namespace cohtherm {

inline constexpr const char* kVersion = "0.1.0";

// Formats a double with 12 significant digits ("%.12g", C locale).
std::string format_g12(double value);

}  // namespace cohtherm
