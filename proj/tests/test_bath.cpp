#include <cmath>
#include <random>

#include <doctest.h>

#include "decohere/bath.hpp"
#include "decohere/quadrature.hpp"
#include "decohere/units.hpp"
#include "test_helpers.hpp"

using namespace decohere;

namespace {
const UnitsContext kUnits;
}

TEST_CASE("thermal occupation and enhancement") {
    CHECK(thermal_occupation(1.0, ThermalParameters::zero(), kUnits) == 0.0);
    CHECK(thermal_enhancement(1.0, ThermalParameters::zero(), kUnits) == 1.0);

    // beta*hbar*omega = ln 2 gives n_bar = 1
    const ThermalParameters warm{std::log(2.0)};
    CHECK(thermal_occupation(1.0, warm, kUnits) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(thermal_enhancement(1.0, warm, kUnits) == doctest::Approx(3.0).epsilon(1e-14));

    const ThermalParameters unit_beta{2.0};
    CHECK(thermal_enhancement(1.0, unit_beta, kUnits) ==
          doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-14));

    CHECK_THROWS_AS(thermal_occupation(0.0, unit_beta, kUnits), std::domain_error);
    CHECK_THROWS_AS(thermal_occupation(-1.0, unit_beta, kUnits), std::domain_error);
    CHECK_THROWS_AS(ThermalParameters{-1.0}.validate(), std::invalid_argument);
}

TEST_CASE("bath validation") {
    CHECK_THROWS_AS(DiscreteBath{}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteBath::single_mode(0.0, 1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteBath::single_mode(1.0, -1.0, 1.0).validate(), std::invalid_argument);
    CHECK_NOTHROW(DiscreteBath::single_mode(1.0, 1.0, 0.0).validate());
}

TEST_CASE("correlation function matches a term-by-term reference") {
    std::mt19937_64 rng(7);
    const auto bath = test_support::random_bath(6, rng);
    const ThermalParameters thermal{0.7};
    const auto times = uniform_time_grid(12.0, 97);
    const auto corr = correlation_function(bath, thermal, kUnits, times);
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const auto ref = test_support::correlation_reference(bath, thermal, kUnits, times[k]);
        CHECK(std::abs(corr.values[k] - ref) < 1e-13);
    }
}

TEST_CASE("correlation function at zero temperature") {
    const auto bath = DiscreteBath::single_mode(1.0, 2.0, 1.0);
    Eigen::ArrayXd times(2);
    times << 0.0, 1.0;
    const auto corr = correlation_function(bath, ThermalParameters::zero(), kUnits, times);
    // C(0) = g^2 hbar / (2 m w) = 1/4
    CHECK(corr.values[0].real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(corr.values[0].imag() == 0.0);
    CHECK(corr.values[1].real() == doctest::Approx(0.25 * std::cos(2.0)).epsilon(1e-15));
    CHECK(corr.values[1].imag() == doctest::Approx(-0.25 * std::sin(2.0)).epsilon(1e-15));
}

TEST_CASE("spectral density discretization carries the right weights") {
    const OhmicSpectralDensity J{1.3, 4.0};
    const int n_modes = 500;
    const double omega_max = 25.0;
    const auto bath = discretize_spectral_density(J, n_modes, omega_max);
    REQUIRE(bath.modes.size() == std::size_t(n_modes));

    const double dw = omega_max / n_modes;
    for (int i = 0; i < n_modes; i += 37) {
        const auto& m = bath.modes[std::size_t(i)];
        CHECK(m.omega == doctest::Approx((i + 0.5) * dw).epsilon(1e-14));
        const double weight = m.coupling * m.coupling / (2.0 * m.mass * m.omega);
        CHECK(weight == doctest::Approx(J(m.omega) * dw / M_PI).epsilon(1e-12));
    }

    // sum of weights approximates int J / pi = eta wc^2 (1 - e^{-wmax/wc}(1+wmax/wc)) / pi
    double total = 0;
    for (const auto& m : bath.modes) total += m.coupling * m.coupling / (2.0 * m.mass * m.omega);
    const double x = omega_max / J.omega_c;
    const double exact = J.eta * J.omega_c * J.omega_c * (1.0 - std::exp(-x) * (1.0 + x)) / M_PI;
    CHECK(total == doctest::Approx(exact).epsilon(1e-5));

    CHECK_THROWS_AS(discretize_spectral_density(J, 1, omega_max), std::invalid_argument);
    CHECK_THROWS_AS(discretize_spectral_density(J, 10, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((discretize_spectral_density(OhmicSpectralDensity{-1.0, 1.0}, 10, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("uniform quadrature") {
    SUBCASE("cubic polynomials are exact") {
        for (Eigen::Index n : {3, 4, 5, 6, 101, 102}) {
            Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, 0.0, 2.0);
            const double h = t[1] - t[0];
            Eigen::ArrayXd v = t.pow(3) - 2.0 * t.square() + 5.0;
            const double exact = 4.0 - 16.0 / 3.0 + 10.0;
            CHECK(integrate_uniform(v, h) == doctest::Approx(exact).epsilon(1e-13));
        }
    }
    SUBCASE("single interval is trapezoid") {
        Eigen::ArrayXd v(2);
        v << 1.0, 3.0;
        CHECK(integrate_uniform(v, 0.5) == doctest::Approx(1.0));
    }
    SUBCASE("oscillatory convergence") {
        Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(2001, 0.0, M_PI);
        Eigen::ArrayXd v = t.sin();
        CHECK(std::abs(integrate_uniform(v, t[1] - t[0]) - 2.0) < 1e-11);
    }
    SUBCASE("too few samples") {
        Eigen::ArrayXd v(1);
        v << 1.0;
        CHECK_THROWS_AS(integrate_uniform(v, 1.0), std::invalid_argument);
    }
}
