#pragma once

#include <string>
#include <vector>

#include "spectra/transition.hpp"

namespace spectra {

// Normalized atomic measure on an interval.
struct DiscreteMeasure {
    std::vector<std::pair<double, double>> atoms;  // (position, mass), positions increasing
    double lo = 0, hi = 0;
};

struct DimensionReport {
    std::string polynomial;
    double beta = 0;
    double lambda = 0;
    double bound = 0;       // min(1, (log4 - log lambda)/log beta)
    double entropy_lb = 0;  // log 4 - log lambda
    double w1 = 0;          // on [-1,1] (the normalization the reference table uses)
    double w1_native = 0;   // on I_beta
    int matrix_size = 0;
};

// mu restricted to I_beta and normalized: atoms at the interval points that
// carry positive limit mass. spec must come from build_M0_pisot over V.
DiscreteMeasure restricted_measure(const NumberField& field, const std::vector<LatticePoint>& V,
                                   const SpectralData& spec);

// chi(beta x - 1) + 2 chi(beta x) + chi(beta x + 1) with the closed-interval
// convention on I_beta.
int g_beta(const NumberField& field, double x);

// Exact piecewise integral of g_beta against normalized Lebesgue on I_beta.
double g_beta_integral(const NumberField& field);

struct RowsumIdentity {
    double lhs = 0;  // lambda
    double rhs = 0;  // sum g_beta(v_j) mass(v_j)
    double residual = 0;
};

RowsumIdentity rowsum_identity(const NumberField& field, const std::vector<LatticePoint>& V,
                               const SpectralData& spec);

// W1 distance between m and the uniform measure on [lo, hi], exact CDF integral.
double wasserstein1(const DiscreteMeasure& m, double lo, double hi);

struct Table1Options {
    double margin = 0.01;   // interval enumeration margin (reproduces the reference table)
    double tol = 1e-12;
    int threads = 1;
};

std::vector<DimensionReport> table1_pipeline(const std::vector<std::string>& polynomials,
                                             const Table1Options& opts = {});

// The built-in 13-row table of interval pipelines (degree 3..5).
const std::vector<std::string>& table1_polynomials();

}  // namespace spectra
