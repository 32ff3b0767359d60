// oracle.hpp — brute-force verification routes: exact unitary propagation of
// system (x) bath in a truncated Fock basis with partial trace, and
// Monte-Carlo averaging of the time-integrated reduced generator over
// thermally sampled bath initial conditions

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "decohere/bath.hpp"
#include "decohere/density_matrix.hpp"
#include "decohere/evolution.hpp"
#include "decohere/rng.hpp"
#include "decohere/units.hpp"

namespace decohere {

inline constexpr Eigen::Index kFockDimensionGuard = 4096;

template <typename Scalar>
struct FockBathConfigT {
    DiscreteBathT<Scalar> modes;
    int n_max{15};           // Fock cutoff per mode
    int thermal_cutoff{0};   // max initial occupation included in the thermal mixture

    Eigen::Index dimension() const {
        Eigen::Index d = 1;
        for (std::size_t i = 0; i < modes.modes.size(); ++i) d *= Eigen::Index(n_max) + 1;
        return d;
    }

    void validate() const {
        modes.validate();
        if (n_max < 1) throw std::invalid_argument("FockBathConfig: n_max must be >= 1");
        if (thermal_cutoff < 0 || thermal_cutoff > n_max)
            throw std::invalid_argument("FockBathConfig: thermal_cutoff must lie in [0, n_max]");
        if (n_max < thermal_cutoff + 4)
            throw std::invalid_argument("FockBathConfig: n_max must exceed thermal_cutoff by a margin of >= 4");
        if (dimension() > kFockDimensionGuard)
            throw std::invalid_argument("FockBathConfig: truncated bath dimension exceeds the dense-propagation guard");
    }
};

template <typename Scalar>
struct OracleOptionsT {
    bool check_convergence{true};
    Scalar convergence_tol{1e-6};
    Scalar unitarity_tol{1e-10};
    Scalar boundary_tol{1e-8};
};

template <typename Scalar>
struct OracleResultT {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> times;
    std::vector<ReducedDensityMatrixT<Scalar>> rho_series;
    Scalar convergence{0};  // max elementwise deviation under cutoff doubling (NaN if unchecked)
};

template <typename Scalar>
struct McAverageT {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> times;
    Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1> mean;
    Eigen::Array<Scalar, Eigen::Dynamic, 1> std_error_re;
    Eigen::Array<Scalar, Eigen::Dynamic, 1> std_error_im;
};

namespace detail {

template <typename Scalar>
Scalar uniform_step(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times) {
    if (times.size() < 2) throw std::invalid_argument("oracle: need at least 2 time points");
    if (times[0] != Scalar(0)) throw std::invalid_argument("oracle: time grid must start at 0");
    const Scalar h = times[1] - times[0];
    if (!(h > Scalar(0))) throw std::invalid_argument("oracle: time grid must be increasing");
    for (Eigen::Index k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - times[k - 1] - h) > Scalar(1e-12) * std::max(h, Scalar(1)))
            throw std::invalid_argument("oracle: time grid must be uniform");
    return h;
}

// Multi-mode Fock-space operators via Kronecker assembly, mode 0 outermost.
template <typename Scalar>
struct FockSpace {
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    Eigen::Index dim;
    Matrix h_bath;             // sum_i hbar w_i (n_i + 1/2)
    Matrix coupling;           // B = sum_i g_i q_i
    std::vector<Scalar> mode_energy;  // hbar w_i per mode, for thermal weights

    FockSpace(const DiscreteBathT<Scalar>& bath, int n_max, const UnitsContextT<Scalar>& units) {
        const Eigen::Index d1 = Eigen::Index(n_max) + 1;
        const std::size_t n_modes = bath.modes.size();
        dim = 1;
        for (std::size_t i = 0; i < n_modes; ++i) dim *= d1;
        h_bath = Matrix::Zero(dim, dim);
        coupling = Matrix::Zero(dim, dim);

        Matrix q1(d1, d1), n1(d1, d1);
        for (std::size_t i = 0; i < n_modes; ++i) {
            const auto& mode = bath.modes[i];
            mode_energy.push_back(units.hbar * mode.omega);
            q1.setZero();
            n1.setZero();
            const Scalar q_scale = std::sqrt(units.hbar / (Scalar(2) * mode.mass * mode.omega));
            for (Eigen::Index m = 0; m < d1; ++m) {
                n1(m, m) = Scalar(m) + Scalar(0.5);
                if (m + 1 < d1) {
                    q1(m, m + 1) = q_scale * std::sqrt(Scalar(m + 1));
                    q1(m + 1, m) = q_scale * std::sqrt(Scalar(m + 1));
                }
            }
            h_bath += embed(units.hbar * mode.omega * n1, i, n_modes, d1);
            coupling += embed(mode.coupling * q1, i, n_modes, d1);
        }
    }

    // Boltzmann mixture truncated at per-mode occupation <= cutoff, unit trace.
    // Returns (basis index, weight) pairs; only the ground state at T = 0.
    std::vector<std::pair<Eigen::Index, Scalar>> thermal_mixture(int cutoff,
                                                                 const ThermalParametersT<Scalar>& thermal,
                                                                 int n_max) const {
        const Eigen::Index d1 = Eigen::Index(n_max) + 1;
        const std::size_t n_modes = mode_energy.size();
        std::vector<std::pair<Eigen::Index, Scalar>> mix;
        if (thermal.zero_temperature()) {
            mix.emplace_back(0, Scalar(1));
            return mix;
        }
        std::vector<int> occ(n_modes, 0);
        Scalar total = 0;
        while (true) {
            Scalar log_w = 0;
            Eigen::Index idx = 0;
            for (std::size_t i = 0; i < n_modes; ++i) {
                log_w -= thermal.beta * mode_energy[i] * Scalar(occ[i]);
                idx = idx * d1 + occ[i];
            }
            const Scalar w = std::exp(log_w);
            mix.emplace_back(idx, w);
            total += w;
            std::size_t i = 0;
            for (; i < n_modes; ++i) {
                if (occ[i] < cutoff) {
                    ++occ[i];
                    break;
                }
                occ[i] = 0;
            }
            if (i == n_modes) break;
        }
        for (auto& [idx, w] : mix) w /= total;
        return mix;
    }

  private:
    static Matrix embed(const Matrix& op, std::size_t mode, std::size_t n_modes, Eigen::Index d1) {
        Matrix out = op;
        for (std::size_t i = mode + 1; i < n_modes; ++i)
            out = Eigen::kroneckerProduct(out, Matrix::Identity(d1, d1)).eval();
        for (std::size_t i = 0; i < mode; ++i)
            out = Eigen::kroneckerProduct(Matrix::Identity(d1, d1), out).eval();
        return out;
    }
};

// Step propagator exp(-i H h / hbar) by scaling-and-squaring, with a
// Richardson half-step check and a unitarity check.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
step_propagator(const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& H,
                Scalar h, Scalar hbar, Scalar unitarity_tol) {
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix A = (Complex(0, -1) * h / hbar) * H;
    const Matrix E = A.exp();
    const Matrix E_half = (Scalar(0.5) * A).exp();
    const Scalar richardson = (E_half * E_half - E).cwiseAbs().maxCoeff();
    if (richardson > Scalar(1e-10))
        throw std::runtime_error("oracle: step propagator failed the half-step consistency check");
    const Scalar defect = (E.adjoint() * E - Matrix::Identity(E.rows(), E.cols())).cwiseAbs().maxCoeff();
    if (defect > unitarity_tol)
        throw std::runtime_error("oracle: step propagator is not unitary within tolerance");
    return E;
}

template <typename Scalar>
std::vector<ReducedDensityMatrixT<Scalar>> fock_propagate_once(
    const ReducedDensityMatrixT<Scalar>& rho0, const FockBathConfigT<Scalar>& cfg, int n_max,
    const ThermalParametersT<Scalar>& thermal, const UnitsContextT<Scalar>& units,
    const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times, const OracleOptionsT<Scalar>& opt) {
    using Complex = std::complex<Scalar>;
    using Matrix = typename FockSpace<Scalar>::Matrix;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    const Scalar h = uniform_step(times);
    const FockSpace<Scalar> space(cfg.modes, n_max, units);
    const auto mixture = space.thermal_mixture(cfg.thermal_cutoff, thermal, n_max);

    const Eigen::Index n_s = rho0.grid.n;
    const std::size_t n_mix = mixture.size();

    // Per-eigenvalue branch propagators: H_s = H_bath + s B.
    std::vector<Matrix> steppers;
    steppers.reserve(static_cast<std::size_t>(n_s));
    for (Eigen::Index a = 0; a < n_s; ++a) {
        const Matrix H = space.h_bath + rho0.grid.point(a) * space.coupling;
        steppers.push_back(step_propagator<Scalar>(H, h, units.hbar, opt.unitarity_tol));
    }

    // Branch states v[a][m], started in the Fock basis states of the mixture.
    std::vector<std::vector<Vector>> v(static_cast<std::size_t>(n_s));
    for (Eigen::Index a = 0; a < n_s; ++a)
        for (const auto& [idx, w] : mixture) {
            Vector e = Vector::Zero(space.dim);
            e[idx] = Scalar(1);
            v[static_cast<std::size_t>(a)].push_back(std::move(e));
        }

    std::vector<ReducedDensityMatrixT<Scalar>> series;
    series.reserve(static_cast<std::size_t>(times.size()));
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        if (k > 0)
            for (Eigen::Index a = 0; a < n_s; ++a)
                for (auto& vec : v[static_cast<std::size_t>(a)]) vec = steppers[static_cast<std::size_t>(a)] * vec;

        ReducedDensityMatrixT<Scalar> rho;
        rho.grid = rho0.grid;
        rho.elements.resize(n_s, n_s);
        for (Eigen::Index a = 0; a < n_s; ++a)
            for (Eigen::Index b = 0; b < n_s; ++b) {
                Complex influence(0);
                for (std::size_t m = 0; m < n_mix; ++m)
                    influence += mixture[m].second *
                                 v[static_cast<std::size_t>(b)][m].dot(v[static_cast<std::size_t>(a)][m]);
                rho.elements(a, b) = rho0.elements(a, b) * influence;
            }
        series.push_back(std::move(rho));
    }
    return series;
}

template <typename Scalar>
Scalar max_series_deviation(const std::vector<ReducedDensityMatrixT<Scalar>>& a,
                            const std::vector<ReducedDensityMatrixT<Scalar>>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("convergence_report: mismatched time grids");
    Scalar dev = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!(a[k].grid == b[k].grid)) throw std::invalid_argument("convergence_report: mismatched grids");
        dev = std::max(dev, (a[k].elements - b[k].elements).cwiseAbs().maxCoeff());
    }
    return dev;
}

}  // namespace detail

// Exact truncated-Fock propagation of the bath under each branch Hamiltonian
// H_s = H_bath + s B; rho_{ss'}(t) = rho_{ss'}(0) Tr[rho_th U_{s'}^+(t) U_s(t)].
// The diagonal is constant by construction. When opt.check_convergence is set
// the run is repeated at doubled n_max and the deviation recorded.
template <typename Scalar>
OracleResultT<Scalar> fock_propagate(const ReducedDensityMatrixT<Scalar>& rho0,
                                     const FockBathConfigT<Scalar>& cfg,
                                     const ThermalParametersT<Scalar>& thermal,
                                     const UnitsContextT<Scalar>& units,
                                     const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times,
                                     const OracleOptionsT<Scalar>& opt = {}) {
    cfg.validate();
    thermal.validate();
    units.validate();
    rho0.grid.validate();
    if (rho0.grid.n > 16) throw std::invalid_argument("fock_propagate: SGrid must have n <= 16");

    OracleResultT<Scalar> result;
    result.times = times;
    result.rho_series = detail::fock_propagate_once(rho0, cfg, cfg.n_max, thermal, units, times, opt);
    result.convergence = std::numeric_limits<Scalar>::quiet_NaN();
    if (opt.check_convergence) {
        FockBathConfigT<Scalar> doubled = cfg;
        doubled.n_max = 2 * cfg.n_max;
        if (doubled.dimension() > kFockDimensionGuard)
            throw std::invalid_argument("fock_propagate: doubled cutoff exceeds the dimension guard");
        const auto series2 = detail::fock_propagate_once(rho0, cfg, doubled.n_max, thermal, units, times, opt);
        result.convergence = detail::max_series_deviation(result.rho_series, series2);
        if (result.convergence > opt.convergence_tol)
            throw std::runtime_error("fock_propagate: no convergence under cutoff doubling");
    }
    return result;
}

// Monte-Carlo average of exp(int_0^t l(t') dt') over Gaussian-distributed bath
// initial conditions, using the closed-form time integral
//   int_0^t l dt' = (i/hbar) [ (s^2-s'^2) sum_i (g_i^2/2m w_i^2)(t - sin(w_i t)/w_i)
//                  - (s-s') sum_i g_i (q_i0 sin(w_i t)/w_i + p_i0 (1-cos(w_i t))/(m w_i^2)) ]
// with variances <q^2> = (hbar/2m w) coth(beta hbar w/2), <p^2> = (m hbar w/2) coth(beta hbar w/2).
// Deterministic for a given seed; per-sample seeds derive from the master seed.
template <typename Scalar>
McAverageT<Scalar> wigner_mc_average(Scalar s, Scalar s_prime, const DiscreteBathT<Scalar>& bath,
                                     const ThermalParametersT<Scalar>& thermal,
                                     const UnitsContextT<Scalar>& units,
                                     const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times,
                                     std::int64_t n_samples, std::uint64_t seed) {
    bath.validate();
    thermal.validate();
    units.validate();
    detail::require_time_grid(times);
    if (n_samples < 1000) throw std::invalid_argument("wigner_mc_average: n_samples must be >= 1000");

    using Complex = std::complex<Scalar>;
    const Eigen::Index n_t = times.size();
    const std::size_t n_modes = bath.modes.size();

    // deterministic phase, and per-mode response profiles of the random part
    Eigen::Array<Scalar, Eigen::Dynamic, 1> phase_det = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(n_t);
    std::vector<Eigen::Array<Scalar, Eigen::Dynamic, 1>> q_profile(n_modes), p_profile(n_modes);
    std::vector<Scalar> sigma_q(n_modes), sigma_p(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        const auto& mode = bath.modes[i];
        const Scalar w = mode.omega;
        const Scalar g = mode.coupling;
        phase_det += (s * s - s_prime * s_prime) * g * g /
                     (Scalar(2) * mode.mass * w * w * units.hbar) * (times - (w * times).sin() / w);
        q_profile[i] = -(s - s_prime) * g / units.hbar * (w * times).sin() / w;
        p_profile[i] = -(s - s_prime) * g / units.hbar * (Scalar(1) - (w * times).cos()) / (mode.mass * w * w);
        const Scalar coth = thermal_enhancement(w, thermal, units);
        sigma_q[i] = std::sqrt(units.hbar / (Scalar(2) * mode.mass * w) * coth);
        sigma_p[i] = std::sqrt(mode.mass * units.hbar * w / Scalar(2) * coth);
    }

    constexpr std::int64_t kBlock = 1024;
    std::vector<Eigen::Array<Complex, Eigen::Dynamic, 1>> block_sums;
    Eigen::Array<Scalar, Eigen::Dynamic, 1> sum_re2 = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(n_t);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> sum_im2 = Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(n_t);

    Eigen::Array<Complex, Eigen::Dynamic, 1> block = Eigen::Array<Complex, Eigen::Dynamic, 1>::Zero(n_t);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> arg(n_t);
    for (std::int64_t sample = 0; sample < n_samples; ++sample) {
        GaussianSampler gauss(mix_seed(seed, static_cast<std::uint64_t>(sample)));
        arg = phase_det;
        for (std::size_t i = 0; i < n_modes; ++i) {
            const Scalar q0 = sigma_q[i] * gauss();
            const Scalar p0 = sigma_p[i] * gauss();
            arg += q0 * q_profile[i] + p0 * p_profile[i];
        }
        for (Eigen::Index k = 0; k < n_t; ++k) {
            const Complex z(std::cos(arg[k]), std::sin(arg[k]));
            block[k] += z;
            sum_re2[k] += z.real() * z.real();
            sum_im2[k] += z.imag() * z.imag();
        }
        if ((sample + 1) % kBlock == 0 || sample + 1 == n_samples) {
            block_sums.push_back(block);
            block.setZero();
        }
    }

    McAverageT<Scalar> out;
    out.times = times;
    out.mean.setZero(n_t);
    const auto total = pairwise_sum(block_sums);
    const Scalar n = Scalar(n_samples);
    out.mean = total / n;
    out.std_error_re.resize(n_t);
    out.std_error_im.resize(n_t);
    for (Eigen::Index k = 0; k < n_t; ++k) {
        const Scalar var_re = std::max(Scalar(0), (sum_re2[k] - n * out.mean[k].real() * out.mean[k].real()) / (n - 1));
        const Scalar var_im = std::max(Scalar(0), (sum_im2[k] - n * out.mean[k].imag() * out.mean[k].imag()) / (n - 1));
        out.std_error_re[k] = std::sqrt(var_re / n);
        out.std_error_im[k] = std::sqrt(var_im / n);
    }
    return out;
}

// Full double-bath propagation on (S grid) (x) (Fock of bath_S) (x) (Fock of
// bath_R), with R realized as the DFT conjugate of the discrete S grid.
template <typename Scalar>
OracleResultT<Scalar> double_bath_fock_propagate(const ReducedDensityMatrixT<Scalar>& rho0,
                                                 const FockBathConfigT<Scalar>& cfg_S,
                                                 const FockBathConfigT<Scalar>& cfg_R,
                                                 const ThermalParametersT<Scalar>& thermal,
                                                 const UnitsContextT<Scalar>& units,
                                                 const Eigen::Array<Scalar, Eigen::Dynamic, 1>& times,
                                                 const OracleOptionsT<Scalar>& opt = {}) {
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    cfg_S.validate();
    cfg_R.validate();
    thermal.validate();
    units.validate();
    rho0.grid.validate();
    const Eigen::Index n_sys = rho0.grid.n;
    if (n_sys > 16 || (n_sys & (n_sys - 1)) != 0)
        throw std::invalid_argument("double_bath_fock_propagate: system grid size must be a power of two <= 16");
    const Eigen::Index d_S = cfg_S.dimension();
    const Eigen::Index d_R = cfg_R.dimension();
    const Eigen::Index dim = n_sys * d_S * d_R;
    if (dim > kFockDimensionGuard)
        throw std::invalid_argument("double_bath_fock_propagate: total dimension exceeds the dense-propagation guard");

    // boundary contamination: support must be separated in both s and r
    const Eigen::Index margin = std::max<Eigen::Index>(1, n_sys / 8);
    if (boundary_weight(rho0, margin) > opt.boundary_tol)
        throw std::runtime_error("double_bath_fock_propagate: state support touches the s-grid boundary");
    {
        auto rho_r = to_momentum_representation(rho0, units);
        Scalar w = 0;
        for (Eigen::Index k = 0; k < n_sys; ++k)
            if (k < margin || k >= n_sys - margin) w += std::abs(rho_r.elements(k, k));
        if (w > opt.boundary_tol)
            throw std::runtime_error("double_bath_fock_propagate: state support touches the r-grid boundary");
    }

    const Scalar h = detail::uniform_step(times);
    const detail::FockSpace<Scalar> space_S(cfg_S.modes, cfg_S.n_max, units);
    const detail::FockSpace<Scalar> space_R(cfg_R.modes, cfg_R.n_max, units);

    // system operators: S diagonal on the grid, R = F^+ diag(r) F
    Matrix S_op = Matrix::Zero(n_sys, n_sys);
    for (Eigen::Index j = 0; j < n_sys; ++j) S_op(j, j) = rho0.grid.point(j);
    const auto rgrid = detail::conjugate_grid(rho0.grid, units.hbar);
    const Matrix F = detail::momentum_transform_matrix(rho0.grid, rgrid, units.hbar);
    Matrix r_diag = Matrix::Zero(n_sys, n_sys);
    for (Eigen::Index k = 0; k < n_sys; ++k) r_diag(k, k) = rgrid.point(k);
    const Matrix R_op = F.adjoint() * r_diag * F;

    const Matrix I_S = Matrix::Identity(d_S, d_S);
    const Matrix I_R = Matrix::Identity(d_R, d_R);
    const Matrix I_sys = Matrix::Identity(n_sys, n_sys);
    Matrix H = Eigen::kroneckerProduct(S_op, Eigen::kroneckerProduct(space_S.coupling, I_R).eval()).eval();
    H += Eigen::kroneckerProduct(R_op, Eigen::kroneckerProduct(I_S, space_R.coupling).eval()).eval();
    H += Eigen::kroneckerProduct(I_sys, Eigen::kroneckerProduct(space_S.h_bath, I_R).eval()).eval();
    H += Eigen::kroneckerProduct(I_sys, Eigen::kroneckerProduct(I_S, space_R.h_bath).eval()).eval();

    const Matrix E = detail::step_propagator<Scalar>(H, h, units.hbar, opt.unitarity_tol);

    // initial mixture: eigen-decomposed system state (x) truncated Boltzmann baths
    Eigen::SelfAdjointEigenSolver<Matrix> es(((rho0.elements + rho0.elements.adjoint()) / Scalar(2)).eval());
    const auto mix_S = space_S.thermal_mixture(cfg_S.thermal_cutoff, thermal, cfg_S.n_max);
    const auto mix_R = space_R.thermal_mixture(cfg_R.thermal_cutoff, thermal, cfg_R.n_max);

    struct Branch {
        Vector state;
        Scalar weight;
    };
    std::vector<Branch> branches;
    for (Eigen::Index a = 0; a < n_sys; ++a) {
        const Scalar lambda = es.eigenvalues()[a];
        if (lambda < Scalar(1e-14)) continue;
        for (const auto& [iS, wS] : mix_S)
            for (const auto& [iR, wR] : mix_R) {
                Vector v = Vector::Zero(dim);
                const Eigen::Index bath_idx = iS * d_R + iR;
                for (Eigen::Index j = 0; j < n_sys; ++j)
                    v[j * d_S * d_R + bath_idx] = es.eigenvectors()(j, a);
                branches.push_back({std::move(v), lambda * wS * wR});
            }
    }

    OracleResultT<Scalar> result;
    result.times = times;
    result.convergence = std::numeric_limits<Scalar>::quiet_NaN();
    result.rho_series.reserve(static_cast<std::size_t>(times.size()));
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        if (k > 0)
            for (auto& br : branches) br.state = E * br.state;
        ReducedDensityMatrixT<Scalar> rho;
        rho.grid = rho0.grid;
        rho.elements = Matrix::Zero(n_sys, n_sys);
        for (const auto& br : branches) {
            Eigen::Map<const Matrix> M(br.state.data(), d_S * d_R, n_sys);
            rho.elements += br.weight * (M.transpose() * M.conjugate());
        }
        result.rho_series.push_back(std::move(rho));
    }
    return result;
}

// Truncation-error estimate: max elementwise deviation between two oracle
// runs that differ only in their cutoffs.
template <typename Scalar>
Scalar convergence_report(const OracleResultT<Scalar>& result, const OracleResultT<Scalar>& result_doubled) {
    if (result.times.size() != result_doubled.times.size() ||
        (result.times - result_doubled.times).abs().maxCoeff() != Scalar(0))
        throw std::invalid_argument("convergence_report: mismatched time grids");
    return detail::max_series_deviation(result.rho_series, result_doubled.rho_series);
}

using FockBathConfig = FockBathConfigT<double>;
using OracleOptions = OracleOptionsT<double>;
using OracleResult = OracleResultT<double>;
using McAverage = McAverageT<double>;

}  // namespace decohere
