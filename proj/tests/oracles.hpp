#pragma once

// Reference implementations that share no code with the library. Values
// frozen in the tests were produced by 50-digit arbitrary-precision runs.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// Standard normal CDF: Taylor series of the integral near zero, Laplace
// continued fraction for the tails.
inline double normal_cdf(double x) {
    const double pi = 3.14159265358979323846;
    if (std::abs(x) < 3.0) {
        // Phi(x) = 1/2 + phi(0) * sum_k (-1)^k x^(2k+1) / (2^k k! (2k+1))
        double term = x, sum = x;
        for (int k = 1; k < 200; ++k) {
            term *= -x * x / (2.0 * k);
            const double add = term / (2.0 * k + 1.0);
            sum += add;
            if (std::abs(add) < 1e-18) break;
        }
        return 0.5 + sum / std::sqrt(2.0 * pi);
    }
    const double z = std::abs(x);
    double frac = z;
    for (int k = 200; k >= 1; --k) frac = z + k / frac;
    const double tail = std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi) / frac;
    return x > 0 ? 1.0 - tail : tail;
}

// 1D best response to a positive-above threshold under cost rate * (u - x)+,
// by scanning a grid of candidate moves. Returns the landing point.
inline double best_response_1d_grid(double threshold, double rate, double x, double step = 1e-4) {
    double best = x;
    double best_utility = (x >= threshold ? 1.0 : -1.0);
    for (double u = x; u <= x + 2.0 / rate + step; u += step) {
        const double utility = (u >= threshold ? 1.0 : -1.0) - rate * (u - x);
        if (utility > best_utility + 1e-12) {
            best_utility = utility;
            best = u;
        }
    }
    return best;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double less = 0, equal = 0;
            for (double w : v) {
                less += w < v[i];
                equal += w == v[i];
            }
            r[i] = less + (equal + 1.0) / 2.0;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i] / n;
        mb += rb[i] / n;
    }
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return saa == 0 || sbb == 0 ? 0.0 : sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
