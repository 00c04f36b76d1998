#include "qotto/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "qotto/errors.hpp"

namespace qotto {

std::string format_sci(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific, 11);
    return std::string(buf, res.ptr);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("geometric_grid: need 0 < lo < hi");
    if (n < 2) throw ConfigError("geometric_grid: need at least 2 points");
    std::vector<double> g(n);
    double lr = std::log(hi / lo) / static_cast<double>(n - 1);
    g.front() = lo;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = lo * std::exp(lr * static_cast<double>(i));
    g.back() = hi;
    return g;
}

}  // namespace qotto
