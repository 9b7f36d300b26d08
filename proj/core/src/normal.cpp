#include "poplab/normal.hpp"

#include <cmath>

#include "poplab/error.hpp"

namespace poplab {

double normal_cdf(double x, double mean, double sd) {
    require(sd > 0.0, ErrorKind::validation, "normal_cdf: sd must be > 0");
    const double z = (x - mean) / sd;
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double standard_normal_quantile(double p) {
    require(p > 0.0 && p < 1.0, ErrorKind::validation, "normal quantile: p must lie in (0, 1)");
    double lo = -40.0, hi = 40.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace poplab
