// bath.hpp — oscillator bath models and the thermal autocorrelation function C(t)

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "decohere/units.hpp"

namespace decohere {

template <typename Scalar>
struct BathModeT {
    Scalar mass{1};
    Scalar omega{1};
    Scalar coupling{0};  // g, with g*q carrying energy units

    void validate() const {
        if (!(mass > Scalar(0))) throw std::invalid_argument("BathMode: mass must be positive");
        if (!(omega > Scalar(0))) throw std::invalid_argument("BathMode: omega must be positive");
    }
};

// H_bath = sum_i p_i^2/2m + m w_i^2 q_i^2 / 2, coupled through B = sum_i g_i q_i.
// One common mass per bath; frequencies need not be distinct.
template <typename Scalar>
struct DiscreteBathT {
    std::vector<BathModeT<Scalar>> modes;

    void validate() const {
        if (modes.empty()) throw std::invalid_argument("DiscreteBath: at least one mode required");
        for (const auto& m : modes) m.validate();
    }

    static DiscreteBathT single_mode(Scalar mass, Scalar omega, Scalar coupling) {
        return DiscreteBathT{{BathModeT<Scalar>{mass, omega, coupling}}};
    }
};

// J(w) = eta * w * exp(-w/w_c) for w >= 0, zero otherwise.
template <typename Scalar>
struct OhmicSpectralDensityT {
    Scalar eta{0};
    Scalar omega_c{1};

    Scalar operator()(Scalar omega) const {
        if (!(omega > Scalar(0))) return Scalar(0);
        return eta * omega * std::exp(-omega / omega_c);
    }

    void validate() const {
        if (!(eta >= Scalar(0))) throw std::invalid_argument("OhmicSpectralDensity: eta must be >= 0");
        if (!(omega_c > Scalar(0))) throw std::invalid_argument("OhmicSpectralDensity: omega_c must be positive");
    }
};

// C(t) sampled on a uniform half-axis grid; C(-t) = conj(C(t)) is implied.
template <typename Scalar>
struct CorrelationSamplesT {
    using Complex = std::complex<Scalar>;
    Eigen::Array<Scalar, Eigen::Dynamic, 1> times;
    Eigen::Array<Complex, Eigen::Dynamic, 1> values;
};

namespace detail {

template <typename Scalar>
void require_time_grid(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times) {
    if (times.size() == 0) throw std::invalid_argument("time grid must be nonempty");
    for (Eigen::Index k = 1; k < times.size(); ++k)
        if (times[k] < times[k - 1]) throw std::invalid_argument("time grid must be nondecreasing");
}

}  // namespace detail

// C(t) = <B(t)B(0)> = sum_i (g_i^2 hbar / 2 m w_i) [ coth(beta hbar w_i/2) cos(w_i t) - i sin(w_i t) ].
template <typename Scalar>
CorrelationSamplesT<Scalar> correlation_function(const DiscreteBathT<Scalar>& bath,
                                                 const ThermalParametersT<Scalar>& thermal,
                                                 const UnitsContextT<Scalar>& units,
                                                 const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times) {
    bath.validate();
    detail::require_time_grid(times);
    using Complex = std::complex<Scalar>;
    CorrelationSamplesT<Scalar> out;
    out.times = times;
    out.values.setZero(times.size());
    for (const auto& mode : bath.modes) {
        const Scalar weight = mode.coupling * mode.coupling * units.hbar / (Scalar(2) * mode.mass * mode.omega);
        const Scalar coth = thermal_enhancement(mode.omega, thermal, units);
        for (Eigen::Index k = 0; k < times.size(); ++k) {
            const Scalar wt = mode.omega * times[k];
            out.values[k] += weight * Complex(coth * std::cos(wt), -std::sin(wt));
        }
    }
    return out;
}

// Midpoint-rule discretization of a continuous J on [0, omega_max]:
// each mode carries g_i^2 / (2 m w_i) = J(w_i) dw / pi, i.e. the delta-comb
// identification J(w) = pi sum_i (g_i^2 / 2 m w_i) delta(w - w_i).
template <typename Scalar>
DiscreteBathT<Scalar> discretize_spectral_density(const OhmicSpectralDensityT<Scalar>& J,
                                                  int n_modes, Scalar omega_max,
                                                  Scalar mass_convention = Scalar(1)) {
    J.validate();
    if (n_modes < 2) throw std::invalid_argument("discretize_spectral_density: n_modes must be >= 2");
    if (!(omega_max > Scalar(0))) throw std::invalid_argument("discretize_spectral_density: omega_max must be positive");
    if (!(mass_convention > Scalar(0))) throw std::invalid_argument("discretize_spectral_density: mass must be positive");

    const Scalar dw = omega_max / Scalar(n_modes);
    DiscreteBathT<Scalar> bath;
    bath.modes.reserve(static_cast<std::size_t>(n_modes));
    for (int i = 0; i < n_modes; ++i) {
        const Scalar w = (Scalar(i) + Scalar(0.5)) * dw;
        const Scalar g = std::sqrt(Scalar(2) * mass_convention * w * J(w) * dw / Scalar(M_PI));
        bath.modes.push_back(BathModeT<Scalar>{mass_convention, w, g});
    }
    return bath;
}

using BathMode = BathModeT<double>;
using DiscreteBath = DiscreteBathT<double>;
using OhmicSpectralDensity = OhmicSpectralDensityT<double>;
using CorrelationSamples = CorrelationSamplesT<double>;

}  // namespace decohere
