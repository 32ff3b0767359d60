// kernels.hpp — decoherence function f(t), phase phi(t), rates and the
// decoherence/dissipation acceleration factor

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>

#include "decohere/bath.hpp"
#include "decohere/quadrature.hpp"
#include "decohere/units.hpp"

namespace decohere {

// f(t), phi(t) sampled on a shared uniform time grid; F(t) present only when a
// second (momentum-coupled) bath is configured.
template <typename Scalar>
struct DecoherenceFunctionsT {
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    Array times;
    Array f;
    Array phi;
    Array F;  // empty unless a second bath is present

    bool has_second_bath() const { return F.size() == times.size() && times.size() > 0; }
};

template <typename Scalar>
struct ShortTimeCoefficientsT {
    Scalar f_quadratic{0};  // f(t) ~ a t^2
    Scalar phi_cubic{0};    // phi(t) ~ b t^3
};

template <typename Scalar>
struct AccelerationEstimateT {
    Scalar tau_dec{0};
    Scalar tau_diss{0};
    Scalar ratio{0};
    Scalar delta{0};
};

template <typename Scalar>
struct AsymptoticRateT {
    Scalar gamma{0};
    Scalar tail_bound{0};  // estimated contribution of the truncated t > t_end tail
};

// f(t) = sum_i g_i^2 (1 + 2 n_i) / (2 m hbar w_i^3) * (1 - cos w_i t)
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> f_closed(const DiscreteBathT<Scalar>& bath,
                                                 const ThermalParametersT<Scalar>& thermal,
                                                 const UnitsContextT<Scalar>& units,
                                                 const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times) {
    bath.validate();
    detail::require_time_grid(times);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> f = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(times.size());
    for (const auto& mode : bath.modes) {
        const Scalar coth = thermal_enhancement(mode.omega, thermal, units);
        const Scalar w = mode.omega;
        const Scalar amp = mode.coupling * mode.coupling * coth /
                           (Scalar(2) * mode.mass * units.hbar * w * w * w);
        f += amp * (Scalar(1) - (w * times).cos());
    }
    return f;
}

// phi(t) = sum_i g_i^2 / (2 m hbar w_i^2) * (t - sin(w_i t)/w_i); temperature independent
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> phi_closed(const DiscreteBathT<Scalar>& bath,
                                                   const UnitsContextT<Scalar>& units,
                                                   const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times) {
    bath.validate();
    detail::require_time_grid(times);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> phi = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(times.size());
    for (const auto& mode : bath.modes) {
        const Scalar w = mode.omega;
        const Scalar amp = mode.coupling * mode.coupling /
                           (Scalar(2) * mode.mass * units.hbar * w * w);
        phi += amp * (times - (w * times).sin() / w);
    }
    return phi;
}

// Quadrature route to the same kernels: f + i phi from hbar^-2 int_0^t ds s C(t-s).
// With C(t) = <B(t)B(0)> the imaginary part carries a minus sign relative to
// phi, so phi = -Im of the integral. Composite Simpson per time point.
template <typename Scalar>
std::pair<Eigen::Array<Scalar, Eigen::Dynamic, 1>, Eigen::Array<Scalar, Eigen::Dynamic, 1>>
f_phi_integral(const CorrelationSamplesT<Scalar>& corr, const UnitsContextT<Scalar>& units) {
    using Complex = std::complex<Scalar>;
    const Eigen::Index n = corr.times.size();
    if (n < 3) throw std::invalid_argument("f_phi_integral: need at least 3 correlation samples");
    if (corr.times[0] != Scalar(0)) throw std::invalid_argument("f_phi_integral: grid must start at t=0");
    const Scalar h = corr.times[1] - corr.times[0];
    for (Eigen::Index k = 1; k < n; ++k)
        if (std::abs(corr.times[k] - corr.times[k - 1] - h) > Scalar(1e-12) * std::max(h, Scalar(1)))
            throw std::invalid_argument("f_phi_integral: grid must be uniform");

    const Scalar inv_h2 = Scalar(1) / (units.hbar * units.hbar);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> f(n), phi(n);
    f[0] = Scalar(0);
    phi[0] = Scalar(0);
    Eigen::Array<Complex, Eigen::Dynamic, 1> integrand(n);
    for (Eigen::Index k = 1; k < n; ++k) {
        for (Eigen::Index j = 0; j <= k; ++j) integrand[j] = corr.times[j] * corr.values[k - j];
        const Complex val = integrate_uniform(integrand.head(k + 1), h) * inv_h2;
        f[k] = val.real();
        phi[k] = -val.imag();
    }
    return {f, phi};
}

// Leading Taylor coefficients of the closed-sum kernels:
//   f(t)   ~ a t^2, a = sum_i g_i^2 (1 + 2 n_i) / (4 m hbar w_i)
//   phi(t) ~ b t^3, b = sum_i g_i^2 / (12 m hbar)   (frequency independent)
template <typename Scalar>
ShortTimeCoefficientsT<Scalar> short_time_coefficients(const DiscreteBathT<Scalar>& bath,
                                                       const ThermalParametersT<Scalar>& thermal,
                                                       const UnitsContextT<Scalar>& units) {
    bath.validate();
    ShortTimeCoefficientsT<Scalar> c;
    for (const auto& mode : bath.modes) {
        const Scalar coth = thermal_enhancement(mode.omega, thermal, units);
        const Scalar g2 = mode.coupling * mode.coupling;
        c.f_quadratic += g2 * coth / (Scalar(4) * mode.mass * units.hbar * mode.omega);
        c.phi_cubic += g2 / (Scalar(12) * mode.mass * units.hbar);
    }
    return c;
}

// gamma = Re hbar^-2 int_0^inf dt C(t), valid only when C(t) decays faster
// than t^-2. A quasi-periodic few-mode C(t) is rejected outright.
template <typename Scalar>
AsymptoticRateT<Scalar> asymptotic_rate(const CorrelationSamplesT<Scalar>& corr,
                                        const UnitsContextT<Scalar>& units) {
    const Eigen::Index n = corr.times.size();
    if (n < 3) throw std::invalid_argument("asymptotic_rate: need at least 3 correlation samples");
    const Scalar h = corr.times[1] - corr.times[0];
    const Scalar c0 = std::abs(corr.values[0]);

    const Eigen::Index tail_start = n - std::max<Eigen::Index>(Eigen::Index(n / 5), 2);
    Scalar tail_max = 0;
    Scalar tail_coeff = 0;  // c with |C(t)| <= c / t^2 fitted on the window tail
    for (Eigen::Index k = tail_start; k < n; ++k) {
        const Scalar a = std::abs(corr.values[k]);
        tail_max = std::max(tail_max, a);
        tail_coeff = std::max(tail_coeff, a * corr.times[k] * corr.times[k]);
    }
    if (c0 > Scalar(0) && tail_max > Scalar(0.05) * c0)
        throw std::domain_error("asymptotic_rate: C(t) does not decay on the sampled window (quasi-periodic bath?)");

    AsymptoticRateT<Scalar> out;
    const Scalar inv_h2 = Scalar(1) / (units.hbar * units.hbar);
    out.gamma = integrate_uniform(corr.values, h).real() * inv_h2;
    out.tail_bound = corr.times[n - 1] > Scalar(0) ? tail_coeff / corr.times[n - 1] * inv_h2 : Scalar(0);
    return out;
}

// Golden-rule decoherence rate for a system frequency Omega:
// gamma_GR = (1 + 2 n(Omega)) J(Omega) / (4 hbar), from the delta-function
// reduction of Re int_0^inf dt e^{i Omega t} <[B(t),B(0)]> = hbar J(Omega).
template <typename Scalar>
Scalar golden_rule_rate(const OhmicSpectralDensityT<Scalar>& J, Scalar Omega,
                        const ThermalParametersT<Scalar>& thermal,
                        const UnitsContextT<Scalar>& units) {
    J.validate();
    if (!(Omega > Scalar(0))) throw std::domain_error("golden_rule_rate: Omega must be positive");
    return thermal_enhancement(Omega, thermal, units) * J(Omega) / (Scalar(4) * units.hbar);
}

// tau_dec = smallest t with delta^2 f(t) = 1 (linear interpolation between
// samples), tau_diss = 1/gamma_diss.
template <typename Scalar>
AccelerationEstimateT<Scalar> acceleration_factor(const DecoherenceFunctionsT<Scalar>& kernels,
                                                  Scalar gamma_diss, Scalar delta) {
    if (!(delta > Scalar(0))) throw std::invalid_argument("acceleration_factor: delta must be positive");
    if (!(gamma_diss > Scalar(0))) throw std::invalid_argument("acceleration_factor: gamma_diss must be positive");
    const Eigen::Index n = kernels.times.size();
    if (n < 2 || kernels.f.size() != n) throw std::invalid_argument("acceleration_factor: invalid kernel samples");

    const Scalar target = Scalar(1) / (delta * delta);
    AccelerationEstimateT<Scalar> est;
    est.delta = delta;
    est.tau_diss = Scalar(1) / gamma_diss;
    for (Eigen::Index k = 1; k < n; ++k) {
        if (kernels.f[k] >= target) {
            const Scalar f0 = kernels.f[k - 1];
            const Scalar f1 = kernels.f[k];
            const Scalar w = (f1 > f0) ? (target - f0) / (f1 - f0) : Scalar(1);
            est.tau_dec = kernels.times[k - 1] + w * (kernels.times[k] - kernels.times[k - 1]);
            est.ratio = est.tau_dec / est.tau_diss;
            return est;
        }
    }
    throw std::runtime_error("acceleration_factor: window too short, delta^2 f(t) never reaches 1");
}

using DecoherenceFunctions = DecoherenceFunctionsT<double>;
using ShortTimeCoefficients = ShortTimeCoefficientsT<double>;
using AccelerationEstimate = AccelerationEstimateT<double>;
using AsymptoticRate = AsymptoticRateT<double>;

}  // namespace decohere
