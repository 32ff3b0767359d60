// density_matrix.hpp — reduced density matrices on a uniform eigenvalue grid
// of the coupling agent S, and their momentum-representation counterpart

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "decohere/units.hpp"

namespace decohere {

template <typename Scalar>
struct SGridT {
    Scalar s_min{0};
    Scalar ds{1};
    Eigen::Index n{0};

    Scalar point(Eigen::Index i) const { return s_min + Scalar(i) * ds; }

    Eigen::Array<Scalar, Eigen::Dynamic, 1> points() const {
        return Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(n, s_min, s_min + Scalar(n - 1) * ds);
    }

    void validate() const {
        if (n < 2) throw std::invalid_argument("SGrid: n must be >= 2");
        if (!(ds > Scalar(0))) throw std::invalid_argument("SGrid: ds must be positive");
    }

    bool operator==(const SGridT& other) const {
        return s_min == other.s_min && ds == other.ds && n == other.n;
    }

    // Grid symmetric about 0 with total width n*ds.
    static SGridT centered(Scalar width, Eigen::Index n) {
        const Scalar ds = width / Scalar(n);
        return SGridT{-width / Scalar(2) + ds / Scalar(2), ds, n};
    }
};

template <typename Scalar>
struct ReducedDensityMatrixT {
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    SGridT<Scalar> grid;
    Matrix elements;  // row index s, column index s'

    Scalar trace() const { return elements.trace().real(); }

    Scalar hermiticity_defect() const {
        return (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    }

    Scalar min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            ((elements + elements.adjoint()) / Scalar(2)).eval(), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Plain matrix trace = 1 convention; continuum ds-weighting is an I/O concern.
    void validate(Scalar herm_tol = Scalar(1e-12), Scalar trace_tol = Scalar(1e-12),
                  Scalar psd_tol = Scalar(-1e-10)) const {
        grid.validate();
        if (elements.rows() != grid.n || elements.cols() != grid.n)
            throw std::invalid_argument("ReducedDensityMatrix: element shape does not match grid");
        if (hermiticity_defect() > herm_tol)
            throw std::invalid_argument("ReducedDensityMatrix: not Hermitian within tolerance");
        if (std::abs(trace() - Scalar(1)) > trace_tol)
            throw std::invalid_argument("ReducedDensityMatrix: trace must equal 1");
        if (min_eigenvalue() < psd_tol)
            throw std::invalid_argument("ReducedDensityMatrix: not positive semidefinite within tolerance");
    }
};

template <typename Scalar>
struct MomentumGridT {
    Scalar r_min{0};
    Scalar dr{1};
    Eigen::Index n{0};

    Scalar point(Eigen::Index k) const { return r_min + Scalar(k) * dr; }
};

template <typename Scalar>
struct MomentumDensityMatrixT {
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    MomentumGridT<Scalar> grid;
    Matrix elements;

    Scalar trace() const { return elements.trace().real(); }
};

// rho = |psi><psi| / <psi|psi>
template <typename Scalar>
ReducedDensityMatrixT<Scalar> pure_state(const SGridT<Scalar>& grid,
                                         const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& psi) {
    grid.validate();
    if (psi.size() != grid.n) throw std::invalid_argument("pure_state: amplitude size does not match grid");
    const Scalar norm2 = psi.squaredNorm();
    if (!(norm2 > Scalar(0))) throw std::invalid_argument("pure_state: zero state vector");
    ReducedDensityMatrixT<Scalar> rho;
    rho.grid = grid;
    rho.elements = (psi * psi.adjoint()) / norm2;
    return rho;
}

// Equal-weight superposition of the two grid points i and j.
template <typename Scalar>
ReducedDensityMatrixT<Scalar> two_point_cat(const SGridT<Scalar>& grid, Eigen::Index i, Eigen::Index j) {
    grid.validate();
    if (i < 0 || j < 0 || i >= grid.n || j >= grid.n || i == j)
        throw std::invalid_argument("two_point_cat: indices must be distinct grid points");
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> psi =
        Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>::Zero(grid.n);
    psi[i] = Scalar(1);
    psi[j] = Scalar(1);
    return pure_state(grid, psi);
}

// Cat of two Gaussian wave packets centered at c1, c2 with common width.
template <typename Scalar>
ReducedDensityMatrixT<Scalar> gaussian_cat(const SGridT<Scalar>& grid, Scalar c1, Scalar c2, Scalar width) {
    grid.validate();
    if (!(width > Scalar(0))) throw std::invalid_argument("gaussian_cat: width must be positive");
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> psi(grid.n);
    for (Eigen::Index k = 0; k < grid.n; ++k) {
        const Scalar s = grid.point(k);
        const Scalar a = (s - c1) / width;
        const Scalar b = (s - c2) / width;
        psi[k] = std::exp(-a * a / Scalar(4)) + std::exp(-b * b / Scalar(4));
    }
    return pure_state(grid, psi);
}

// Single Gaussian wave packet; its diagonal has standard deviation `width`.
template <typename Scalar>
ReducedDensityMatrixT<Scalar> gaussian_state(const SGridT<Scalar>& grid, Scalar center, Scalar width) {
    grid.validate();
    if (!(width > Scalar(0))) throw std::invalid_argument("gaussian_state: width must be positive");
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> psi(grid.n);
    for (Eigen::Index k = 0; k < grid.n; ++k) {
        const Scalar a = (grid.point(k) - center) / width;
        psi[k] = std::exp(-a * a / Scalar(4));
    }
    return pure_state(grid, psi);
}

template <typename Scalar>
ReducedDensityMatrixT<Scalar> maximally_mixed(const SGridT<Scalar>& grid) {
    grid.validate();
    ReducedDensityMatrixT<Scalar> rho;
    rho.grid = grid;
    rho.elements = ReducedDensityMatrixT<Scalar>::Matrix::Identity(grid.n, grid.n) / Scalar(grid.n);
    return rho;
}

using SGrid = SGridT<double>;
using ReducedDensityMatrix = ReducedDensityMatrixT<double>;
using MomentumGrid = MomentumGridT<double>;
using MomentumDensityMatrix = MomentumDensityMatrixT<double>;

}  // namespace decohere
