#include "maxload/format.hpp"

#include <cmath>
#include <cstdio>

namespace maxload {

std::string format_decimal(double x, int significant) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, x);
    std::string s(buf);
    if (s == "-0") s = "0";
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

std::string rational_string(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_rational(const mpq_class& q) {
    std::string exact = q.get_den() == 1 ? q.get_num().get_str() : rational_string(q);
    return exact + " (" + format_decimal(q.get_d()) + ")";
}

}  // namespace maxload
