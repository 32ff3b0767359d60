// evolution.hpp — exact short-time evolution maps for reduced density
// matrices: single-bath elementwise damping/phase, double-bath center-
// coordinate smoothing, momentum representation, and scalar diagnostics

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "decohere/density_matrix.hpp"
#include "decohere/kernels.hpp"
#include "decohere/units.hpp"

namespace decohere {

struct IndexRange {
    Eigen::Index begin{0};
    Eigen::Index end{0};  // exclusive
};

namespace detail {

template <typename Scalar>
void check_t_index(const DecoherenceFunctionsT<Scalar>& kernels, Eigen::Index t_index) {
    if (t_index < 0 || t_index >= kernels.times.size())
        throw std::out_of_range("evolution: t_index outside kernel grid");
}

// Unitary momentum transform: F(k,j) = exp(-i r_k s_j / hbar) / sqrt(n) with
// r_k on the centered conjugate grid, dr = 2 pi hbar / (n ds).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
momentum_transform_matrix(const SGridT<Scalar>& grid, const MomentumGridT<Scalar>& rgrid, Scalar hbar) {
    using Complex = std::complex<Scalar>;
    const Eigen::Index n = grid.n;
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> F(n, n);
    const Scalar norm = Scalar(1) / std::sqrt(Scalar(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar r = rgrid.point(k);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar phase = -r * grid.point(j) / hbar;
            F(k, j) = norm * Complex(std::cos(phase), std::sin(phase));
        }
    }
    return F;
}

template <typename Scalar>
MomentumGridT<Scalar> conjugate_grid(const SGridT<Scalar>& grid, Scalar hbar) {
    MomentumGridT<Scalar> rgrid;
    rgrid.n = grid.n;
    rgrid.dr = Scalar(2) * Scalar(M_PI) * hbar / (Scalar(grid.n) * grid.ds);
    rgrid.r_min = -Scalar(grid.n / 2) * rgrid.dr;
    return rgrid;
}

}  // namespace detail

// Single-bath map: rho(s,s') *= exp(-(s-s')^2 f(t) + i (s^2 - s'^2) phi(t)).
// The diagonal is exactly unchanged.
template <typename Scalar>
ReducedDensityMatrixT<Scalar> evolve_single_bath(const ReducedDensityMatrixT<Scalar>& rho0,
                                                 const DecoherenceFunctionsT<Scalar>& kernels,
                                                 Eigen::Index t_index) {
    detail::check_t_index(kernels, t_index);
    rho0.grid.validate();
    using Complex = std::complex<Scalar>;
    const Scalar f = kernels.f[t_index];
    const Scalar phi = kernels.phi[t_index];
    ReducedDensityMatrixT<Scalar> rho = rho0;
    for (Eigen::Index i = 0; i < rho.grid.n; ++i) {
        const Scalar s = rho.grid.point(i);
        for (Eigen::Index j = 0; j < rho.grid.n; ++j) {
            if (i == j) continue;
            const Scalar sp = rho.grid.point(j);
            const Scalar damp = std::exp(-(s - sp) * (s - sp) * f);
            const Scalar arg = (s * s - sp * sp) * phi;
            rho.elements(i, j) *= damp * Complex(std::cos(arg), std::sin(arg));
        }
    }
    return rho;
}

// Same map with the coupling-agent eigenvalue of each grid point supplied
// explicitly (e.g. S = Sigma^2: map sigma -> sigma^2). Points with equal
// mapped eigenvalues keep their coherence exactly.
template <typename Scalar>
ReducedDensityMatrixT<Scalar> symmetry_protected_evolution(
    const ReducedDensityMatrixT<Scalar>& rho0,
    const Eigen::Array<Scalar, Eigen::Dynamic, 1>& coupling_eigenvalues,
    const DecoherenceFunctionsT<Scalar>& kernels, Eigen::Index t_index) {
    detail::check_t_index(kernels, t_index);
    rho0.grid.validate();
    if (coupling_eigenvalues.size() != rho0.grid.n)
        throw std::invalid_argument("symmetry_protected_evolution: coupling map size mismatch");
    using Complex = std::complex<Scalar>;
    const Scalar f = kernels.f[t_index];
    const Scalar phi = kernels.phi[t_index];
    ReducedDensityMatrixT<Scalar> rho = rho0;
    for (Eigen::Index i = 0; i < rho.grid.n; ++i) {
        const Scalar s = coupling_eigenvalues[i];
        for (Eigen::Index j = 0; j < rho.grid.n; ++j) {
            const Scalar sp = coupling_eigenvalues[j];
            if (s == sp) continue;
            const Scalar damp = std::exp(-(s - sp) * (s - sp) * f);
            const Scalar arg = (s * s - sp * sp) * phi;
            rho.elements(i, j) *= damp * Complex(std::cos(arg), std::sin(arg));
        }
    }
    return rho;
}

template <typename Scalar>
MomentumDensityMatrixT<Scalar> to_momentum_representation(const ReducedDensityMatrixT<Scalar>& rho,
                                                          const UnitsContextT<Scalar>& units) {
    rho.grid.validate();
    units.validate();
    MomentumDensityMatrixT<Scalar> out;
    out.grid = detail::conjugate_grid(rho.grid, units.hbar);
    const auto F = detail::momentum_transform_matrix(rho.grid, out.grid, units.hbar);
    out.elements = F * rho.elements * F.adjoint();
    return out;
}

template <typename Scalar>
ReducedDensityMatrixT<Scalar> from_momentum_representation(const MomentumDensityMatrixT<Scalar>& rho_r,
                                                           const SGridT<Scalar>& grid,
                                                           const UnitsContextT<Scalar>& units) {
    grid.validate();
    units.validate();
    const auto F = detail::momentum_transform_matrix(grid, rho_r.grid, units.hbar);
    ReducedDensityMatrixT<Scalar> out;
    out.grid = grid;
    out.elements = F.adjoint() * rho_r.elements * F;
    return out;
}

// Fraction of the diagonal weight within `margin` points of either grid edge.
template <typename Scalar>
Scalar boundary_weight(const ReducedDensityMatrixT<Scalar>& rho, Eigen::Index margin) {
    Scalar w = 0;
    const Eigen::Index n = rho.grid.n;
    for (Eigen::Index k = 0; k < n; ++k)
        if (k < margin || k >= n - margin) w += std::abs(rho.elements(k, k));
    return w;
}

// Double-bath map: elementwise e^{-(s-s')^2 f(t)} followed by the Gaussian
// smoothing exp(hbar^2 (d/ds + d/ds')^2 F(t)), applied spectrally: in the
// momentum representation the smoothing is exactly elementwise
// multiplication by exp(-(r-r')^2 F(t)). Periodic wrap; the state support
// must stay clear of the grid boundary (>= 5 smoothing widths).
template <typename Scalar>
ReducedDensityMatrixT<Scalar> evolve_double_bath(const ReducedDensityMatrixT<Scalar>& rho0,
                                                 const DecoherenceFunctionsT<Scalar>& kernels,
                                                 const UnitsContextT<Scalar>& units,
                                                 Eigen::Index t_index,
                                                 Scalar boundary_tol = Scalar(1e-10)) {
    detail::check_t_index(kernels, t_index);
    if (!kernels.has_second_bath())
        throw std::invalid_argument("evolve_double_bath: kernels carry no second-bath F(t)");
    units.validate();
    const Scalar Ft = kernels.F[t_index];
    if (Ft < Scalar(0)) throw std::invalid_argument("evolve_double_bath: F(t) must be nonnegative");

    const Scalar smoothing_width = std::sqrt(Scalar(2) * units.hbar * units.hbar * Ft);
    const Eigen::Index margin =
        std::min<Eigen::Index>(rho0.grid.n / 2,
                               static_cast<Eigen::Index>(std::ceil(Scalar(5) * smoothing_width / rho0.grid.ds)));
    if (boundary_weight(rho0, margin) > boundary_tol)
        throw std::runtime_error("evolve_double_bath: state support touches the grid boundary");

    ReducedDensityMatrixT<Scalar> rho = evolve_single_bath(rho0, DecoherenceFunctionsT<Scalar>{
        kernels.times, kernels.f, Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(kernels.times.size()), {}},
        t_index);
    if (Ft == Scalar(0)) return rho;

    auto rho_r = to_momentum_representation(rho, units);
    for (Eigen::Index k = 0; k < rho_r.grid.n; ++k) {
        const Scalar r = rho_r.grid.point(k);
        for (Eigen::Index kp = 0; kp < rho_r.grid.n; ++kp) {
            const Scalar rp = rho_r.grid.point(kp);
            rho_r.elements(k, kp) *= std::exp(-(r - rp) * (r - rp) * Ft);
        }
    }
    return from_momentum_representation(rho_r, rho.grid, units);
}

// max |rho(s,s')| over s in A, s' in B, normalized by the geometric mean of
// the largest diagonal weights of the two regions. In [0,1] for PSD inputs.
template <typename Scalar>
Scalar coherence_visibility(const ReducedDensityMatrixT<Scalar>& rho,
                            const IndexRange& region_a, const IndexRange& region_b) {
    const Eigen::Index n = rho.grid.n;
    auto check = [n](const IndexRange& r, const char* name) {
        if (r.begin < 0 || r.end > n || r.begin >= r.end)
            throw std::invalid_argument(std::string("coherence_visibility: invalid range ") + name);
    };
    check(region_a, "A");
    check(region_b, "B");
    if (region_a.begin < region_b.end && region_b.begin < region_a.end)
        throw std::invalid_argument("coherence_visibility: regions must be disjoint");

    Scalar off = 0, diag_a = 0, diag_b = 0;
    for (Eigen::Index i = region_a.begin; i < region_a.end; ++i) {
        diag_a = std::max(diag_a, std::abs(rho.elements(i, i)));
        for (Eigen::Index j = region_b.begin; j < region_b.end; ++j)
            off = std::max(off, std::abs(rho.elements(i, j)));
    }
    for (Eigen::Index j = region_b.begin; j < region_b.end; ++j)
        diag_b = std::max(diag_b, std::abs(rho.elements(j, j)));
    const Scalar denom = std::sqrt(diag_a * diag_b);
    return denom > Scalar(0) ? off / denom : Scalar(0);
}

template <typename Scalar>
Scalar purity(const ReducedDensityMatrixT<Scalar>& rho) {
    return (rho.elements * rho.elements).trace().real();
}

}  // namespace decohere
