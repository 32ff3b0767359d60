// fit.hpp — least-squares line fits, used for power-law exponent checks

#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace decohere {

template <typename Scalar>
struct LinearFitT {
    Scalar slope{0};
    Scalar intercept{0};
};

template <typename Scalar>
LinearFitT<Scalar> linear_fit(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& x,
                              const Eigen::Array<Scalar, Eigen::Dynamic, 1>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matching samples");
    const Scalar n = Scalar(x.size());
    const Scalar mx = x.mean();
    const Scalar my = y.mean();
    const Scalar sxx = ((x - mx) * (x - mx)).sum();
    if (!(sxx > Scalar(0))) throw std::invalid_argument("linear_fit: degenerate abscissa");
    LinearFitT<Scalar> fit;
    fit.slope = ((x - mx) * (y - my)).sum() / sxx;
    fit.intercept = my - fit.slope * mx;
    (void)n;
    return fit;
}

// Slope of log(y) against log(x); all samples must be positive.
template <typename Scalar>
LinearFitT<Scalar> log_log_fit(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& x,
                               const Eigen::Array<Scalar, Eigen::Dynamic, 1>& y) {
    if ((x <= Scalar(0)).any() || (y <= Scalar(0)).any())
        throw std::invalid_argument("log_log_fit: samples must be positive");
    return linear_fit<Scalar>(x.log(), y.log());
}

using LinearFit = LinearFitT<double>;

}  // namespace decohere
