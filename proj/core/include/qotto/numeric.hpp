#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace qotto {

// Compensated (Kahan) accumulator. Mode sums are reduced in ascending-k
// order with this so totals do not depend on the worker count.
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Locale-independent scientific formatting, 12 significant digits.
// All CSV output goes through this so re-runs are byte-identical.
std::string format_sci(double x);

// Geometric grid of n points from lo to hi inclusive (n >= 2, lo,hi > 0).
// Endpoints are set exactly; interior points are lo * r^i.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

}  // namespace qotto
