#include "decohere/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <stdexcept>

#include "decohere/evolution.hpp"
#include "decohere/fit.hpp"
#include "decohere/io.hpp"
#include "decohere/kernels.hpp"
#include "decohere/oracle.hpp"
#include "decohere/quadrature.hpp"

namespace decohere {

namespace {

using Eigen::ArrayXd;

std::vector<std::string> file_header(const ExperimentConfig& cfg) {
    return {"scenario " + std::string(scenario_name(cfg.scenario)),
            "config_hash " + cfg.config_hash,
            "seed " + std::to_string(cfg.seed)};
}

std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
    return (std::filesystem::path(cfg.output_dir) / file).string();
}

void add_check(RunReport& report, std::string name, double measured, double threshold) {
    report.checks.push_back({std::move(name), measured <= threshold, measured, threshold});
}

DecoherenceFunctions make_kernels(const DiscreteBath& bath, const ExperimentConfig& cfg,
                                  const ArrayXd& times) {
    DecoherenceFunctions k;
    k.times = times;
    k.f = f_closed(bath, cfg.thermal, cfg.units, times);
    k.phi = phi_closed(bath, cfg.units, times);
    return k;
}

ArrayXd geometric_grid(double lo, double hi, Eigen::Index n) {
    ArrayXd t(n);
    const double ratio = std::log(hi / lo) / double(n - 1);
    for (Eigen::Index k = 0; k < n; ++k) t[k] = lo * std::exp(ratio * double(k));
    return t;
}

double diagonal_std(const ReducedDensityMatrix& rho) {
    double norm = 0, mean = 0;
    for (Eigen::Index k = 0; k < rho.grid.n; ++k) {
        const double p = rho.elements(k, k).real();
        norm += p;
        mean += p * rho.grid.point(k);
    }
    mean /= norm;
    double var = 0;
    for (Eigen::Index k = 0; k < rho.grid.n; ++k) {
        const double d = rho.grid.point(k) - mean;
        var += rho.elements(k, k).real() * d * d;
    }
    return std::sqrt(var / norm);
}

void run_kernels(const ExperimentConfig& cfg, RunReport& report) {
    const DiscreteBath bath = cfg.bath.make_bath();
    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    const ArrayXd f = f_closed(bath, cfg.thermal, cfg.units, times);
    const ArrayXd phi = phi_closed(bath, cfg.units, times);
    const auto corr = correlation_function(bath, cfg.thermal, cfg.units, times);
    const auto [f_int, phi_int] = f_phi_integral(corr, cfg.units);

    const double f_scale = std::max(f.abs().maxCoeff(), 1e-300);
    const double phi_scale = std::max(phi.abs().maxCoeff(), 1e-300);
    add_check(report, "f_integral_agreement", (f - f_int).abs().maxCoeff() / f_scale, cfg.tol.quadrature);
    add_check(report, "phi_integral_agreement", (phi - phi_int).abs().maxCoeff() / phi_scale,
              cfg.tol.quadrature);

    double omega_max = 0;
    for (const auto& m : bath.modes) omega_max = std::max(omega_max, m.omega);
    const ArrayXd t_short = geometric_grid(1e-3 / omega_max, 1e-2 / omega_max, 17);
    const ArrayXd f_short = f_closed(bath, cfg.thermal, cfg.units, t_short);
    const ArrayXd phi_short = phi_closed(bath, cfg.units, t_short);
    const auto fit_f = log_log_fit<double>(t_short, f_short);
    const auto fit_phi = log_log_fit<double>(t_short, phi_short);
    const auto coeff = short_time_coefficients(bath, cfg.thermal, cfg.units);

    add_check(report, "f_short_time_slope", std::abs(fit_f.slope - 2.0), 0.05);
    add_check(report, "phi_short_time_slope", std::abs(fit_phi.slope - 3.0), 0.10);
    add_check(report, "f_coefficient", std::abs(std::exp(fit_f.intercept) / coeff.f_quadratic - 1.0), 0.01);
    add_check(report, "phi_coefficient", std::abs(std::exp(fit_phi.intercept) / coeff.phi_cubic - 1.0), 0.01);

    Table table;
    table.add("t", times);
    table.add("f_closed", f);
    table.add("phi_closed", phi);
    table.add("f_integral", f_int);
    table.add("phi_integral", phi_int);
    emit_table(table, out_path(cfg, "kernels.csv"), file_header(cfg));
}

void run_single_bath_cat(const ExperimentConfig& cfg, RunReport& report) {
    const DiscreteBath bath = cfg.bath.make_bath();
    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    const auto kernels = make_kernels(bath, cfg, times);

    const ReducedDensityMatrix rho0 = two_point_cat(cfg.grid, 0, cfg.grid.n - 1);
    const double delta = cfg.grid.point(cfg.grid.n - 1) - cfg.grid.point(0);
    const IndexRange left{0, 1}, right{cfg.grid.n - 1, cfg.grid.n};

    ArrayXd visibility(times.size()), predicted(times.size());
    double vis_dev = 0, trace_dev = 0, diag_dev = 0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const auto rho = evolve_single_bath(rho0, kernels, k);
        visibility[k] = coherence_visibility(rho, left, right);
        predicted[k] = std::exp(-delta * delta * kernels.f[k]);
        vis_dev = std::max(vis_dev, std::abs(visibility[k] - predicted[k]));
        trace_dev = std::max(trace_dev, std::abs(rho.trace() - 1.0));
        diag_dev = std::max(diag_dev,
                            (rho.elements.diagonal() - rho0.elements.diagonal()).cwiseAbs().maxCoeff());
    }
    add_check(report, "visibility_matches_kernel", vis_dev, cfg.tol.visibility);
    add_check(report, "trace_preserved", trace_dev, cfg.tol.trace);
    add_check(report, "diagonal_preserved", diag_dev, 0.0);

    Table table;
    table.add("t", times);
    table.add("f", kernels.f);
    table.add("visibility", visibility);
    table.add("predicted", predicted);
    emit_table(table, out_path(cfg, "visibility.csv"), file_header(cfg));
}

void run_double_bath(const ExperimentConfig& cfg, RunReport& report) {
    const DiscreteBath bath_s = cfg.bath.make_bath();
    const DiscreteBath bath_r = cfg.bath_r.make_bath();
    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    auto kernels = make_kernels(bath_s, cfg, times);
    kernels.F = f_closed(bath_r, cfg.thermal, cfg.units, times);

    const ReducedDensityMatrix rho0 = gaussian_state(cfg.grid, 0.0, cfg.state_width);
    const double hbar = cfg.units.hbar;

    ArrayXd sigma(times.size()), sigma_pred(times.size());
    double width_dev = 0, trace_dev = 0, herm_dev = 0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const auto rho = evolve_double_bath(rho0, kernels, cfg.units, k);
        sigma[k] = diagonal_std(rho);
        sigma_pred[k] = std::sqrt(cfg.state_width * cfg.state_width + 2.0 * hbar * hbar * kernels.F[k]);
        width_dev = std::max(width_dev, std::abs(sigma[k] - sigma_pred[k]));
        trace_dev = std::max(trace_dev, std::abs(rho.trace() - 1.0));
        herm_dev = std::max(herm_dev, rho.hermiticity_defect());
    }
    add_check(report, "diagonal_width", width_dev, cfg.tol.width);
    add_check(report, "trace_preserved", trace_dev, cfg.tol.trace);
    add_check(report, "hermiticity_preserved", herm_dev, 1e-12);

    Table table;
    table.add("t", times);
    table.add("F", kernels.F);
    table.add("sigma_measured", sigma);
    table.add("sigma_predicted", sigma_pred);
    emit_table(table, out_path(cfg, "double_bath.csv"), file_header(cfg));
}

void run_golden_rule_compare(const ExperimentConfig& cfg, RunReport& report) {
    if (!cfg.bath.is_ohmic())
        throw std::invalid_argument("golden_rule_compare: requires an Ohmic bath spec");
    const OhmicSpectralDensity J = cfg.bath.spectral_density();
    const DiscreteBath bath = cfg.bath.make_bath();

    const ArrayXd corr_times = uniform_time_grid(40.0, 4001);
    const auto corr = correlation_function(bath, cfg.thermal, cfg.units, corr_times);
    const auto rate = asymptotic_rate(corr, cfg.units);
    const double gamma_gr = golden_rule_rate(J, cfg.omega_system, cfg.thermal, cfg.units);

    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    const ArrayXd f = f_closed(bath, cfg.thermal, cfg.units, times);

    const double t_star = 20.0 / cfg.bath.omega_c;
    if (t_star > cfg.time.t_max)
        throw std::invalid_argument("golden_rule_compare: time window does not reach 20/omega_c");
    const Eigen::Index k_star =
        static_cast<Eigen::Index>(std::lround(t_star / cfg.time.t_max * double(cfg.time.n_points - 1)));
    add_check(report, "long_time_rate", std::abs(f[k_star] / times[k_star] - rate.gamma) / rate.gamma, 0.05);

    const double t_break = 0.01 / cfg.bath.omega_c;
    ArrayXd t2(2);
    t2 << 0.0, t_break;
    const double f_break = f_closed(bath, cfg.thermal, cfg.units, t2)[1];
    add_check(report, "golden_rule_breakdown", f_break / (gamma_gr * t_break), 0.1);
    add_check(report, "correlation_tail", rate.tail_bound / rate.gamma, 0.05);

    ArrayXd f_over_t(times.size());
    f_over_t[0] = 0.0;
    for (Eigen::Index k = 1; k < times.size(); ++k) f_over_t[k] = f[k] / times[k];
    auto comments = file_header(cfg);
    comments.push_back("gamma " + format_float(rate.gamma));
    comments.push_back("gamma_gr " + format_float(gamma_gr));
    Table table;
    table.add("t", times);
    table.add("f", f);
    table.add("f_over_t", f_over_t);
    emit_table(table, out_path(cfg, "golden_rule.csv"), comments);
}

void run_acceleration_sweep(const ExperimentConfig& cfg, RunReport& report) {
    const DiscreteBath bath = cfg.bath.make_bath();
    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    const auto kernels = make_kernels(bath, cfg, times);

    const Eigen::Index n = static_cast<Eigen::Index>(cfg.deltas.size());
    ArrayXd deltas(n), tau_dec(n), ratios(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto est = acceleration_factor(kernels, cfg.gamma_diss, cfg.deltas[static_cast<std::size_t>(k)]);
        deltas[k] = est.delta;
        tau_dec[k] = est.tau_dec;
        ratios[k] = est.ratio;
    }
    const auto fit = log_log_fit<double>(deltas, ratios);
    add_check(report, "ratio_scaling_slope", std::abs(fit.slope + 2.0), 0.05);

    Table table;
    table.add("delta", deltas);
    table.add("tau_dec", tau_dec);
    table.add("ratio", ratios);
    emit_table(table, out_path(cfg, "acceleration.csv"), file_header(cfg));
}

void run_symmetry_protection(const ExperimentConfig& cfg, RunReport& report) {
    const DiscreteBath bath = cfg.bath.make_bath();
    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    const auto kernels = make_kernels(bath, cfg, times);

    // S = Sigma^2: grid points sigma couple through sigma^2
    const ArrayXd eigenvalues = cfg.grid.points().square();
    Eigen::Index deg_i = -1, deg_j = -1, non_i = -1, non_j = -1;
    for (Eigen::Index i = 0; i < cfg.grid.n && (deg_i < 0 || non_i < 0); ++i)
        for (Eigen::Index j = i + 1; j < cfg.grid.n; ++j) {
            if (eigenvalues[i] == eigenvalues[j] && deg_i < 0) {
                deg_i = i;
                deg_j = j;
            }
            if (eigenvalues[i] != eigenvalues[j] && non_i < 0) {
                non_i = i;
                non_j = j;
            }
        }
    if (deg_i < 0 || non_i < 0)
        throw std::invalid_argument(
            "symmetry_protection: grid must contain a degenerate and a nondegenerate sigma^2 pair");

    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(cfg.grid.n);
    const ReducedDensityMatrix rho0 = pure_state(cfg.grid, psi);
    const double d_eig = eigenvalues[non_i] - eigenvalues[non_j];

    ArrayXd coh_deg(times.size()), coh_non(times.size()), coh_pred(times.size());
    double protect_dev = 0, damp_dev = 0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const auto rho = symmetry_protected_evolution(rho0, eigenvalues, kernels, k);
        coh_deg[k] = std::abs(rho.elements(deg_i, deg_j));
        coh_non[k] = std::abs(rho.elements(non_i, non_j));
        coh_pred[k] = std::abs(rho0.elements(non_i, non_j)) * std::exp(-d_eig * d_eig * kernels.f[k]);
        protect_dev = std::max(protect_dev,
                               std::abs(rho.elements(deg_i, deg_j) - rho0.elements(deg_i, deg_j)));
        damp_dev = std::max(damp_dev, std::abs(coh_non[k] - coh_pred[k]));
    }
    add_check(report, "degenerate_coherence_protected", protect_dev, cfg.tol.protection);
    add_check(report, "nondegenerate_damping", damp_dev, cfg.tol.damping);

    Table table;
    table.add("t", times);
    table.add("coherence_degenerate", coh_deg);
    table.add("coherence_nondegenerate", coh_non);
    table.add("predicted_nondegenerate", coh_pred);
    emit_table(table, out_path(cfg, "symmetry.csv"), file_header(cfg));
}

void run_oracle_validate(const ExperimentConfig& cfg, RunReport& report) {
    const DiscreteBath bath = cfg.bath.make_bath();
    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    const ReducedDensityMatrix rho0 = two_point_cat(cfg.grid, 0, cfg.grid.n - 1);

    FockBathConfig fock{bath, cfg.fock.n_max, cfg.fock.thermal_cutoff};
    OracleOptions opt;
    opt.check_convergence = true;
    opt.convergence_tol = std::numeric_limits<double>::infinity();  // report, never throw
    const auto result = fock_propagate(rho0, fock, cfg.thermal, cfg.units, times, opt);

    const auto kernels = make_kernels(bath, cfg, times);
    ArrayXd oracle_re(times.size()), oracle_im(times.size());
    ArrayXd analytic_re(times.size()), analytic_im(times.size());
    double dev = 0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const auto rho = evolve_single_bath(rho0, kernels, k);
        dev = std::max(dev, (result.rho_series[static_cast<std::size_t>(k)].elements - rho.elements)
                                .cwiseAbs()
                                .maxCoeff());
        const auto z_o = result.rho_series[static_cast<std::size_t>(k)].elements(0, cfg.grid.n - 1);
        const auto z_a = rho.elements(0, cfg.grid.n - 1);
        oracle_re[k] = z_o.real();
        oracle_im[k] = z_o.imag();
        analytic_re[k] = z_a.real();
        analytic_im[k] = z_a.imag();
    }
    add_check(report, "oracle_deviation", dev, cfg.tol.oracle);
    add_check(report, "cutoff_convergence", result.convergence, cfg.tol.convergence);

    Table table;
    table.add("t", times);
    table.add("oracle_re", oracle_re);
    table.add("oracle_im", oracle_im);
    table.add("analytic_re", analytic_re);
    table.add("analytic_im", analytic_im);
    emit_table(table, out_path(cfg, "oracle.csv"), file_header(cfg));
}

void run_mc_validate(const ExperimentConfig& cfg, RunReport& report) {
    const DiscreteBath bath = cfg.bath.make_bath();
    const ArrayXd times = uniform_time_grid(cfg.time.t_max, cfg.time.n_points);
    const double s = 0.0, sp = cfg.delta;
    const auto mc = wigner_mc_average(s, sp, bath, cfg.thermal, cfg.units, times, cfg.n_samples, cfg.seed);

    const ArrayXd f = f_closed(bath, cfg.thermal, cfg.units, times);
    const ArrayXd phi = phi_closed(bath, cfg.units, times);
    const double d2 = (s - sp) * (s - sp);
    const double q2 = s * s - sp * sp;

    ArrayXd mean_re(times.size()), mean_im(times.size()), exp_re(times.size()), exp_im(times.size());
    double max_pull = 0, chi2 = 0;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double mag = std::exp(-d2 * f[k]);
        exp_re[k] = mag * std::cos(q2 * phi[k]);
        exp_im[k] = mag * std::sin(q2 * phi[k]);
        mean_re[k] = mc.mean[k].real();
        mean_im[k] = mc.mean[k].imag();
        if (k == 0) continue;  // t=0 is exact, zero variance
        const double pull_re = (mean_re[k] - exp_re[k]) / mc.std_error_re[k];
        const double pull_im = (mean_im[k] - exp_im[k]) / mc.std_error_im[k];
        max_pull = std::max({max_pull, std::abs(pull_re), std::abs(pull_im)});
        chi2 += pull_re * pull_re + pull_im * pull_im;
    }
    const double dof = 2.0 * double(times.size() - 1);
    add_check(report, "mc_three_sigma", max_pull, 3.0);
    add_check(report, "mc_chi_square", std::abs(chi2 / dof - 1.0), 1.0);

    Table table;
    table.add("t", times);
    table.add("mean_re", mean_re);
    table.add("mean_im", mean_im);
    table.add("expected_re", exp_re);
    table.add("expected_im", exp_im);
    table.add("std_error_re", mc.std_error_re);
    table.add("std_error_im", mc.std_error_im);
    emit_table(table, out_path(cfg, "mc.csv"), file_header(cfg));
}

}  // namespace

RunReport run_scenario(const ExperimentConfig& cfg) {
    RunReport report;
    report.scenario = scenario_name(cfg.scenario);
    report.config_hash = cfg.config_hash;
    std::filesystem::create_directories(cfg.output_dir);

    const auto start = std::chrono::steady_clock::now();
    try {
        switch (cfg.scenario) {
            case Scenario::Kernels: run_kernels(cfg, report); break;
            case Scenario::SingleBathCat: run_single_bath_cat(cfg, report); break;
            case Scenario::DoubleBath: run_double_bath(cfg, report); break;
            case Scenario::GoldenRuleCompare: run_golden_rule_compare(cfg, report); break;
            case Scenario::AccelerationSweep: run_acceleration_sweep(cfg, report); break;
            case Scenario::SymmetryProtection: run_symmetry_protection(cfg, report); break;
            case Scenario::OracleValidate: run_oracle_validate(cfg, report); break;
            case Scenario::McValidate: run_mc_validate(cfg, report); break;
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("scenario ") + report.scenario + ": " + e.what());
    }
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace decohere
