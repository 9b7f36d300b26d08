#pragma once

namespace poplab {

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

// Solves normal_cdf(z) = p by bisection to 1e-10 in z.
double standard_normal_quantile(double p);

}  // namespace poplab
