// io.hpp — plot-ready delimited tables and the flat density-matrix text format

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "decohere/density_matrix.hpp"

namespace decohere {

// 17 significant digits so downstream comparisons are not format-limited.
inline std::string format_float(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

struct Table {
    std::vector<std::string> labels;
    std::vector<Eigen::ArrayXd> columns;

    void add(std::string label, Eigen::ArrayXd column) {
        labels.push_back(std::move(label));
        columns.push_back(std::move(column));
    }
};

// CSV with a header row, LF line endings, optional leading '#' comment lines.
inline void emit_table(const Table& table, std::ostream& os,
                       const std::vector<std::string>& comments = {}) {
    if (table.labels.size() != table.columns.size())
        throw std::invalid_argument("emit_table: label/column count mismatch");
    for (std::size_t c = 1; c < table.columns.size(); ++c)
        if (table.columns[c].size() != table.columns[0].size())
            throw std::invalid_argument("emit_table: columns must have equal length");

    for (const auto& line : comments) os << "# " << line << "\n";
    for (std::size_t c = 0; c < table.labels.size(); ++c)
        os << (c ? "," : "") << table.labels[c];
    os << "\n";
    const Eigen::Index rows = table.columns.empty() ? 0 : table.columns[0].size();
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            os << (c ? "," : "") << format_float(table.columns[c][r]);
        os << "\n";
    }
}

inline void emit_table(const Table& table, const std::string& path,
                       const std::vector<std::string>& comments = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_table: cannot open " + path);
    emit_table(table, os, comments);
    if (!os) throw std::runtime_error("emit_table: write failed for " + path);
}

// Flat text format: "n s_min ds hbar" header, then n rows of n (re, im) pairs.
inline void write_density_matrix(std::ostream& os, const ReducedDensityMatrix& rho, double hbar) {
    os << rho.grid.n << " " << format_float(rho.grid.s_min) << " " << format_float(rho.grid.ds)
       << " " << format_float(hbar) << "\n";
    for (Eigen::Index i = 0; i < rho.grid.n; ++i) {
        for (Eigen::Index j = 0; j < rho.grid.n; ++j)
            os << (j ? " " : "") << format_float(rho.elements(i, j).real()) << " "
               << format_float(rho.elements(i, j).imag());
        os << "\n";
    }
}

inline void write_density_matrix(const std::string& path, const ReducedDensityMatrix& rho, double hbar) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_density_matrix: cannot open " + path);
    write_density_matrix(os, rho, hbar);
}

inline ReducedDensityMatrix read_density_matrix(std::istream& is, double* hbar_out = nullptr) {
    Eigen::Index n = 0;
    double s_min = 0, ds = 0, hbar = 0;
    if (!(is >> n >> s_min >> ds >> hbar) || n < 2)
        throw std::runtime_error("read_density_matrix: malformed header");
    ReducedDensityMatrix rho;
    rho.grid = SGrid{s_min, ds, n};
    rho.elements.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double re = 0, im = 0;
            if (!(is >> re >> im)) throw std::runtime_error("read_density_matrix: truncated element data");
            rho.elements(i, j) = std::complex<double>(re, im);
        }
    if (hbar_out) *hbar_out = hbar;
    return rho;
}

inline ReducedDensityMatrix read_density_matrix(const std::string& path, double* hbar_out = nullptr) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_density_matrix: cannot open " + path);
    return read_density_matrix(is, hbar_out);
}

}  // namespace decohere
