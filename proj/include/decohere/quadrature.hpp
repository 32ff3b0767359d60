// quadrature.hpp — composite Simpson integration on uniform grids

#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace decohere {

// Integral of uniformly sampled values with spacing h over the whole grid.
// Even interval counts use plain composite Simpson; odd counts close with a
// 3/8 panel; a single interval falls back to the trapezoid rule.
template <typename Derived, typename Scalar>
typename Derived::Scalar integrate_uniform(const Eigen::ArrayBase<Derived>& values, Scalar h) {
    using Value = typename Derived::Scalar;
    const Eigen::Index n = values.size();
    if (n < 2) throw std::invalid_argument("integrate_uniform: need at least 2 samples");
    const Eigen::Index intervals = n - 1;
    if (intervals == 1) return Value(values[0] + values[1]) * Scalar(0.5) * h;

    Value total(0);
    Eigen::Index simpson_end = intervals;  // index of the last sample covered by Simpson panels
    if (intervals % 2 != 0) {
        if (intervals == 3) {
            simpson_end = 0;
        } else {
            simpson_end = intervals - 3;
        }
        // closing 3/8 panel over the last three intervals
        total += (values[simpson_end] + Scalar(3) * values[simpson_end + 1] +
                  Scalar(3) * values[simpson_end + 2] + values[simpson_end + 3]) *
                 (Scalar(3) * h / Scalar(8));
    }
    if (simpson_end >= 2) {
        Value acc = values[0] + values[simpson_end];
        for (Eigen::Index k = 1; k < simpson_end; k += 2) acc += Scalar(4) * values[k];
        for (Eigen::Index k = 2; k < simpson_end; k += 2) acc += Scalar(2) * values[k];
        total += acc * (h / Scalar(3));
    }
    return total;
}

// Uniform grid of n points covering [0, t_max].
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> uniform_time_grid(Scalar t_max, Eigen::Index n) {
    if (n < 2) throw std::invalid_argument("uniform_time_grid: need at least 2 points");
    if (!(t_max > Scalar(0))) throw std::invalid_argument("uniform_time_grid: t_max must be positive");
    return Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(n, Scalar(0), t_max);
}

}  // namespace decohere
