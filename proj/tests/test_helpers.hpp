// shared fixtures and independent reference computations for the test suite

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "decohere/bath.hpp"
#include "decohere/density_matrix.hpp"
#include "decohere/units.hpp"

namespace test_support {

inline decohere::DiscreteBath random_bath(int n_modes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    decohere::DiscreteBath bath;
    for (int i = 0; i < n_modes; ++i)
        bath.modes.push_back(decohere::BathMode{1.0, 0.3 + 2.7 * u(rng), 0.2 + 0.8 * u(rng)});
    return bath;
}

inline decohere::ReducedDensityMatrix random_psd(const decohere::SGrid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(grid.n, grid.n);
    for (Eigen::Index i = 0; i < grid.n; ++i)
        for (Eigen::Index j = 0; j < grid.n; ++j) a(i, j) = std::complex<double>(g(rng), g(rng));
    Eigen::MatrixXcd m = a * a.adjoint();
    m /= m.trace().real();
    decohere::ReducedDensityMatrix rho;
    rho.grid = grid;
    rho.elements = m;
    return rho;
}

// Independent route to C(t): per-mode accumulation in extended precision with
// coth built from cosh/sinh instead of the occupation number.
inline std::complex<double> correlation_reference(const decohere::DiscreteBath& bath,
                                                  const decohere::ThermalParameters& thermal,
                                                  const decohere::UnitsContext& units, double t) {
    long double re = 0, im = 0;
    for (const auto& mode : bath.modes) {
        const long double w = mode.omega;
        const long double weight =
            (long double)(mode.coupling) * mode.coupling * units.hbar / (2.0L * mode.mass * w);
        long double coth = 1.0L;
        if (!thermal.zero_temperature()) {
            const long double x = (long double)(thermal.beta) * units.hbar * w / 2.0L;
            coth = std::cosh(x) / std::sinh(x);
        }
        re += weight * coth * std::cos(w * (long double)t);
        im -= weight * std::sin(w * (long double)t);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

// Regulated time-domain route to hbar * J(Omega):
//   Re int_0^inf dt e^{(i Omega - eps) t} <[B(t),B(0)]>
// has the closed per-mode form below; Richardson in eps removes the O(eps)
// smearing of the underlying spectral density.
inline double commutator_spectrum(const decohere::DiscreteBath& bath, double omega_sys, double eps,
                                  double hbar) {
    double total = 0;
    for (const auto& mode : bath.modes) {
        const double w = mode.omega;
        const double weight = mode.coupling * mode.coupling * hbar / (2.0 * mode.mass * w);
        total += weight * (eps / (eps * eps + (omega_sys - w) * (omega_sys - w)) -
                           eps / (eps * eps + (omega_sys + w) * (omega_sys + w)));
    }
    return total;
}

inline double commutator_spectrum_extrapolated(const decohere::DiscreteBath& bath, double omega_sys,
                                               double eps, double hbar) {
    return 2.0 * commutator_spectrum(bath, omega_sys, eps / 2, hbar) -
           commutator_spectrum(bath, omega_sys, eps, hbar);
}

}  // namespace test_support
