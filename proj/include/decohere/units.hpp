// units.hpp — action scale and thermal parameters shared by all modules

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace decohere {

template <typename Scalar>
struct UnitsContextT {
    Scalar hbar{1};

    void validate() const {
        if (!(hbar > Scalar(0))) throw std::invalid_argument("UnitsContext: hbar must be positive");
    }
};

// beta = +infinity encodes zero temperature exactly (n_bar = 0, coth factor = 1).
template <typename Scalar>
struct ThermalParametersT {
    Scalar beta{std::numeric_limits<Scalar>::infinity()};

    bool zero_temperature() const { return std::isinf(beta); }

    void validate() const {
        if (!(beta > Scalar(0))) throw std::invalid_argument("ThermalParameters: beta must be positive or +inf");
    }

    static ThermalParametersT zero() { return {std::numeric_limits<Scalar>::infinity()}; }
};

// n_bar(omega) = 1 / (e^{beta hbar omega} - 1); exactly 0 at zero temperature.
template <typename Scalar>
Scalar thermal_occupation(Scalar omega, const ThermalParametersT<Scalar>& thermal,
                          const UnitsContextT<Scalar>& units) {
    if (!(omega > Scalar(0))) throw std::domain_error("thermal_occupation: omega must be positive");
    thermal.validate();
    units.validate();
    if (thermal.zero_temperature()) return Scalar(0);
    return Scalar(1) / std::expm1(thermal.beta * units.hbar * omega);
}

// coth(beta hbar omega / 2) = 1 + 2 n_bar(omega); the thermal enhancement factor.
template <typename Scalar>
Scalar thermal_enhancement(Scalar omega, const ThermalParametersT<Scalar>& thermal,
                           const UnitsContextT<Scalar>& units) {
    return Scalar(1) + Scalar(2) * thermal_occupation(omega, thermal, units);
}

using UnitsContext = UnitsContextT<double>;
using ThermalParameters = ThermalParametersT<double>;

}  // namespace decohere
