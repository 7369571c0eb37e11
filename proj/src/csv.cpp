#include "cohtherm/csv.hpp"

#include <cstdio>

namespace cohtherm {

std::string format_g12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

}  // namespace cohtherm
