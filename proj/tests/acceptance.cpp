// Acceptance harness: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "decohere/config.hpp"
#include "decohere/evolution.hpp"
#include "decohere/fit.hpp"
#include "decohere/io.hpp"
#include "decohere/kernels.hpp"
#include "decohere/oracle.hpp"
#include "decohere/quadrature.hpp"
#include "decohere/scenarios.hpp"
#include "test_helpers.hpp"

using namespace decohere;

namespace {

const UnitsContext kUnits;
const ThermalParameters kZeroT = ThermalParameters::zero();

int failures = 0;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& label, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("[%s] criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
}

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b, c);
    return buf;
}

// 1. closed-sum vs integral kernels on a randomized 5-mode bath
void criterion_1() {
    Timer timer;
    std::mt19937_64 rng(2024);
    const auto bath = test_support::random_bath(5, rng);
    const ThermalParameters thermal{1.5};
    const auto times = uniform_time_grid(10.0, 2001);

    const auto f = f_closed(bath, thermal, kUnits, times);
    const auto phi = phi_closed(bath, kUnits, times);
    const auto corr = correlation_function(bath, thermal, kUnits, times);
    const auto [f_int, phi_int] = f_phi_integral(corr, kUnits);

    const double dev_f = (f - f_int).abs().maxCoeff() / f.abs().maxCoeff();
    const double dev_phi = (phi - phi_int).abs().maxCoeff() / phi.abs().maxCoeff();
    const double elapsed = timer.seconds();
    report(1, "kernel equivalence", dev_f < 1e-7 && dev_phi < 1e-7 && elapsed < 1.0,
           fmt("dev f %.2e, phi %.2e, %.2f s", dev_f, dev_phi, elapsed));
}

// 2. short-time exponents and coefficients
void criterion_2() {
    Timer timer;
    std::mt19937_64 rng(77);
    const auto bath = test_support::random_bath(5, rng);
    const ThermalParameters thermal{0.8};
    double omega_max = 0;
    for (const auto& m : bath.modes) omega_max = std::max(omega_max, m.omega);

    Eigen::ArrayXd t(17);
    for (int k = 0; k < 17; ++k) t[k] = 1e-3 / omega_max * std::pow(10.0, k / 16.0);
    const auto fit_f = log_log_fit<double>(t, f_closed(bath, thermal, kUnits, t));
    const auto fit_phi = log_log_fit<double>(t, phi_closed(bath, kUnits, t));
    const auto coeff = short_time_coefficients(bath, thermal, kUnits);
    const double a_err = std::abs(std::exp(fit_f.intercept) / coeff.f_quadratic - 1.0);
    const double b_err = std::abs(std::exp(fit_phi.intercept) / coeff.phi_cubic - 1.0);

    const double elapsed = timer.seconds();
    const bool pass = std::abs(fit_f.slope - 2.0) <= 0.05 && std::abs(fit_phi.slope - 3.0) <= 0.10 &&
                      a_err <= 0.01 && b_err <= 0.01 && elapsed < 1.0;
    report(2, "short-time universality", pass,
           fmt("slopes %.4f/%.4f, coeff err %.1e", fit_f.slope, fit_phi.slope,
               std::max(a_err, b_err)));
}

// 3. golden-rule contrast for the Ohmic bath
void criterion_3() {
    Timer timer;
    const OhmicSpectralDensity J{1.0, 5.0};
    const ThermalParameters thermal{1.0};
    const auto bath = discretize_spectral_density(J, 2000, 30.0);

    const auto corr = correlation_function(bath, thermal, kUnits, uniform_time_grid(40.0, 4001));
    const double gamma = asymptotic_rate(corr, kUnits).gamma;
    const double gamma_gr = golden_rule_rate(J, 1.0, thermal, kUnits);

    const double t_long = 20.0 / J.omega_c;
    const double t_short = 0.01 / J.omega_c;
    Eigen::ArrayXd t(3);
    t << 0.0, t_short, t_long;
    const auto f = f_closed(bath, thermal, kUnits, t);
    const double long_err = std::abs(f[2] / t_long - gamma) / gamma;
    const double short_ratio = f[1] / (gamma_gr * t_short);

    const double elapsed = timer.seconds();
    report(3, "golden-rule contrast", long_err <= 0.05 && short_ratio < 0.1 && elapsed < 5.0,
           fmt("|f/t-gamma|/gamma %.3f at t=20/wc, f/(gr t) %.3f at t=0.01/wc", long_err,
               short_ratio));
}

// 4. Fock oracle vs the analytic single-bath map, T = 0 and beta = 1
void criterion_4() {
    Timer timer;
    const auto bath = DiscreteBath::single_mode(1.0, 1.0, 1.0);
    const SGrid grid{0.0, 2.0, 2};
    const auto rho0 = two_point_cat(grid, 0, 1);
    const auto times = uniform_time_grid(6.0, 13);

    double max_dev = 0, max_conv = 0;
    for (const bool cold : {true, false}) {
        const ThermalParameters thermal = cold ? kZeroT : ThermalParameters{1.0};
        FockBathConfig cfg{bath, cold ? 30 : 60, cold ? 0 : 20};
        OracleOptions opt;
        opt.convergence_tol = std::numeric_limits<double>::infinity();
        const auto result = fock_propagate(rho0, cfg, thermal, kUnits, times, opt);
        max_conv = std::max(max_conv, result.convergence);

        DecoherenceFunctions kernels;
        kernels.times = times;
        kernels.f = f_closed(bath, thermal, kUnits, times);
        kernels.phi = phi_closed(bath, kUnits, times);
        for (Eigen::Index k = 0; k < times.size(); ++k) {
            const auto rho = evolve_single_bath(rho0, kernels, k);
            max_dev = std::max(max_dev, (result.rho_series[std::size_t(k)].elements - rho.elements)
                                            .cwiseAbs()
                                            .maxCoeff());
        }
    }
    const double elapsed = timer.seconds();
    report(4, "single-bath oracle", max_dev <= 1e-6 && max_conv < 1e-8 && elapsed < 60.0,
           fmt("dev %.2e, convergence %.2e, %.1f s", max_dev, max_conv, elapsed));
}

// 5. Monte-Carlo consistency with the analytic coherence factor
void criterion_5() {
    Timer timer;
    const auto bath = DiscreteBath::single_mode(1.0, 1.0, 1.0);
    const ThermalParameters thermal{1.0};
    const auto times = uniform_time_grid(5.0, 26);
    const double s = 0.0, sp = 1.0;

    const auto mc = wigner_mc_average(s, sp, bath, thermal, kUnits, times, 100000, 20240817);
    const auto f = f_closed(bath, thermal, kUnits, times);
    const auto phi = phi_closed(bath, kUnits, times);

    double max_pull = 0, chi2 = 0;
    for (Eigen::Index k = 1; k < times.size(); ++k) {
        const double mag = std::exp(-(s - sp) * (s - sp) * f[k]);
        const std::complex<double> expected =
            mag * std::exp(std::complex<double>(0.0, (s * s - sp * sp) * phi[k]));
        const double pull_re = (mc.mean[k].real() - expected.real()) / mc.std_error_re[k];
        const double pull_im = (mc.mean[k].imag() - expected.imag()) / mc.std_error_im[k];
        max_pull = std::max({max_pull, std::abs(pull_re), std::abs(pull_im)});
        chi2 += pull_re * pull_re + pull_im * pull_im;
    }
    const double chi2_dof = chi2 / (2.0 * double(times.size() - 1));
    const double elapsed = timer.seconds();
    report(5, "Monte-Carlo consistency",
           max_pull <= 3.0 && chi2_dof > 0.3 && chi2_dof < 2.0 && elapsed < 60.0,
           fmt("max pull %.2f, chi2/dof %.2f, %.1f s", max_pull, chi2_dof, elapsed));
}

// 6. double-bath short-time power law of the map error
void criterion_6() {
    Timer timer;
    const auto grid = SGrid::centered(16.0, 16);
    // width balancing the s-grid and conjugate r-grid Gaussian tails
    const auto rho0 = gaussian_state(grid, 0.0, 2.0 / std::sqrt(M_PI));
    const auto bath_s = DiscreteBath::single_mode(1.0, 1.0, 0.5);
    const auto bath_r = DiscreteBath::single_mode(1.0, 1.0, 0.3);
    const auto times = uniform_time_grid(0.1, 101);

    FockBathConfig cfg_s{bath_s, 7, 0};
    FockBathConfig cfg_r{bath_r, 7, 0};
    OracleOptions opt;
    opt.boundary_tol = 1e-5;
    const auto oracle = double_bath_fock_propagate(rho0, cfg_s, cfg_r, kZeroT, kUnits, times, opt);

    DecoherenceFunctions kernels;
    kernels.times = times;
    kernels.f = f_closed(bath_s, kZeroT, kUnits, times);
    kernels.phi = Eigen::ArrayXd::Zero(times.size());
    kernels.F = f_closed(bath_r, kZeroT, kUnits, times);

    Eigen::ArrayXd t_fit(times.size() - 1), dev_fit(times.size() - 1);
    for (Eigen::Index k = 1; k < times.size(); ++k) {
        const auto mapped = evolve_double_bath(rho0, kernels, kUnits, k, 1e-5);
        t_fit[k - 1] = times[k];
        dev_fit[k - 1] = (oracle.rho_series[std::size_t(k)].elements - mapped.elements)
                             .cwiseAbs()
                             .maxCoeff();
    }
    const auto fit = log_log_fit<double>(t_fit, dev_fit);
    const double elapsed = timer.seconds();
    report(6, "double-bath power law", fit.slope >= 2.5 && elapsed < 600.0,
           fmt("exponent %.2f, dev(t=0.1) %.1e, %.1f s", fit.slope, dev_fit[times.size() - 2],
               elapsed));
}

// 7. momentum-representation damping factor for f = 0
void criterion_7() {
    const auto grid = SGrid::centered(16.0, 64);
    const auto rho0 = gaussian_state(grid, 0.0, 0.6);

    DecoherenceFunctions kernels;
    kernels.times = uniform_time_grid(1.0, 2);
    kernels.f = Eigen::ArrayXd::Zero(2);
    kernels.phi = Eigen::ArrayXd::Zero(2);
    kernels.F.resize(2);
    kernels.F << 0.0, 0.02;

    const auto rho = evolve_double_bath(rho0, kernels, kUnits, 1);
    const auto in_r = to_momentum_representation(rho0, kUnits);
    const auto out_r = to_momentum_representation(rho, kUnits);
    double dev = 0;
    for (Eigen::Index a = 0; a < in_r.grid.n; ++a)
        for (Eigen::Index b = 0; b < in_r.grid.n; ++b) {
            const double r = in_r.grid.point(a), rp = in_r.grid.point(b);
            dev = std::max(dev, std::abs(out_r.elements(a, b) -
                                         in_r.elements(a, b) *
                                             std::exp(-(r - rp) * (r - rp) * kernels.F[1])));
        }
    report(7, "momentum-space decay", dev <= 1e-6, fmt("elementwise dev %.2e", dev, 0));
}

// 8. structural preservation over randomized inputs
void criterion_8() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double diag_dev = 0, herm_dev = 0, min_eig = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const SGrid grid{-2.0 + u(rng), 0.25 + u(rng), 2 + Eigen::Index(trial % 9)};
        const auto rho0 = test_support::random_psd(grid, rng);
        DecoherenceFunctions kernels;
        kernels.times = uniform_time_grid(1.0, 2);
        kernels.f.resize(2);
        kernels.phi.resize(2);
        kernels.f << 0.0, 2.0 * u(rng);
        kernels.phi << 0.0, 4.0 * u(rng) - 2.0;
        const auto rho = evolve_single_bath(rho0, kernels, 1);
        diag_dev = std::max(diag_dev,
                            (rho.elements.diagonal() - rho0.elements.diagonal()).cwiseAbs().maxCoeff());
        herm_dev = std::max(herm_dev, rho.hermiticity_defect());
        min_eig = std::min(min_eig, rho.min_eigenvalue());
    }
    report(8, "structural preservation", diag_dev == 0.0 && herm_dev <= 1e-12 && min_eig >= -1e-10,
           fmt("diag %.1e, herm %.1e, min eig %.1e", diag_dev, herm_dev, min_eig));
}

// 9. separation scaling of the acceleration factor
void criterion_9() {
    const OhmicSpectralDensity J{7.5e-6, 5.0};
    const auto bath = discretize_spectral_density(J, 25000, 25.0);
    const ThermalParameters thermal{0.01};

    DecoherenceFunctions kernels;
    kernels.times = uniform_time_grid(1500.0, 3001);
    kernels.f = f_closed(bath, thermal, kUnits, kernels.times);
    kernels.phi = Eigen::ArrayXd::Zero(kernels.times.size());

    Eigen::ArrayXd deltas(4), ratios(4);
    deltas << 1.0, 2.0, 4.0, 8.0;
    for (Eigen::Index k = 0; k < 4; ++k)
        ratios[k] = acceleration_factor(kernels, 1.0, deltas[k]).ratio;
    const auto fit = log_log_fit<double>(deltas, ratios);
    report(9, "acceleration scaling", std::abs(fit.slope + 2.0) <= 0.05,
           fmt("slope %.4f", fit.slope, 0));
}

// 10. S = Sigma^2 symmetry protection
void criterion_10() {
    const SGrid grid{-1.0, 1.0, 3};
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(3);
    const auto rho0 = pure_state(grid, psi);
    const Eigen::ArrayXd eigs = grid.points().square();

    const auto bath = DiscreteBath::single_mode(1.0, 1.0, 1.0);
    DecoherenceFunctions kernels;
    kernels.times = uniform_time_grid(3.0, 61);
    kernels.f = f_closed(bath, kZeroT, kUnits, kernels.times);
    kernels.phi = phi_closed(bath, kUnits, kernels.times);

    double protect_dev = 0, damp_dev = 0;
    for (Eigen::Index k = 0; k < kernels.times.size(); ++k) {
        const auto rho = symmetry_protected_evolution(rho0, eigs, kernels, k);
        protect_dev = std::max(protect_dev, std::abs(rho.elements(0, 2) - rho0.elements(0, 2)));
        const double predicted = std::abs(rho0.elements(0, 1)) * std::exp(-kernels.f[k]);
        damp_dev = std::max(damp_dev, std::abs(std::abs(rho.elements(0, 1)) - predicted));
    }
    report(10, "symmetry protection", protect_dev <= 1e-14 && damp_dev <= 1e-10,
           fmt("protected dev %.1e, damping dev %.1e", protect_dev, damp_dev));
}

// 11. byte-identical reruns with a fixed seed
void criterion_11() {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "decohere_acceptance";
    auto run_into = [&](const std::string& leaf) {
        auto cfg = parse_config(R"({"scenario": "mc_validate", "n_samples": 5000,
                                    "time": {"t_max": 2.0, "n_points": 11}})");
        cfg.output_dir = (base / leaf).string();
        run_scenario(cfg);
        std::ifstream is(base / leaf / "mc.csv", std::ios::binary);
        std::ostringstream buf;
        buf << is.rdbuf();
        return buf.str();
    };
    const std::string a = run_into("a");
    const std::string b = run_into("b");
    report(11, "determinism", !a.empty() && a == b,
           fmt("%.0f bytes, byte equality %.0f", double(a.size()), a == b ? 1.0 : 0.0));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
