#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "spectra/spectrum.hpp"

namespace spectra {

// Sparse non-negative integer matrix indexed by an ordered point list.
struct TransitionMatrix {
    int dim = 0;
    std::vector<std::vector<std::pair<int, int>>> rows;  // (col, weight), weight in {1,2}
    std::vector<LatticePoint> index;

    Int entry(int i, int j) const {
        for (auto [c, w] : rows[i])
            if (c == j) return w;
        return 0;
    }
    Int row_sum(int i) const {
        Int s = 0;
        for (auto [c, w] : rows[i]) s += w;
        return s;
    }
    // v <- v * M for a row vector, exact integers with overflow checks.
    std::vector<Int> left_mul(std::span<const Int> v) const;
    std::vector<double> left_mul(std::span<const double> v) const;
};

// Lambda_R: weight-2 loops on T_0, weight-1 on T_{+-1}, restricted to a patch.
TransitionMatrix build_lambda_R(const SpectrumPatch& patch);

// The three digit matrices on the difference set.
struct DigitMatrices {
    const NumberField* field = nullptr;
    std::vector<LatticePoint> index;  // the difference-set points
    TransitionMatrix A[3];            // A[-1 + 1], A[0 + 1], A[1 + 1]

    const TransitionMatrix& of(int digit) const { return A[digit + 1]; }
    int dim() const { return A[1].dim; }
};

DigitMatrices build_digit_matrices(const NumberField& field, const DeltaSet& delta);

// Pisot interval matrix: (M_0)_{ij} weights 1 for v_j = beta v_i +- 1, 2 for
// v_j = beta v_i; exact lattice comparisons.
TransitionMatrix build_M0_pisot(const std::vector<LatticePoint>& V, const NumberField& field);

// Power iteration from e_1 with a 4-iterate averaging window.
double spectral_radius(const TransitionMatrix& M, double tol = 1e-12,
                       std::size_t max_iter = 1'000'000);

struct PerronResult {
    std::vector<double> W;     // lim e_1 M^n / lambda^n
    double lambda = 0;
    double residual = 0;       // || W M / lambda - W ||_inf
    int positivity_n = -1;     // first n with e_1 M^n > 0 on the reachable block
    bool maximality_ok = true; // assumption iii along the run
    int maximality_violation_n = -1;
    int maximality_violation_index = -1;
};

PerronResult perron_limit(const TransitionMatrix& M, double tol = 1e-12,
                          std::size_t max_iter = 500'000);

struct SpectralData {
    double lambda = 0;
    std::vector<double> W;
    double mu0 = 0;
    double residual = 0;
    std::vector<LatticePoint> index;
};

SpectralData make_spectral_data(const TransitionMatrix& M0, double tol = 1e-12);

// Exhaustive weighted count of difference words of length n landing on x.
Int brute_force_N(const NumberField& field, const LatticePoint& x, int n);

// mu(x) = lambda^{-n} (W A_{c_1} ... A_{c_n})_1 for any coding c of x.
double measure_at(const SpectralData& spec, const DigitMatrices& mats,
                  std::span<const std::int8_t> word);
// The full local vector lambda^{-n} W A_{c_1} ... A_{c_n}.
std::vector<double> local_vector(const SpectralData& spec, const DigitMatrices& mats,
                                 std::span<const std::int8_t> word);

using Counts = std::unordered_map<LatticePoint, Int, LatticePointHash>;

// (L nu)(x) = nu(T_{-1}^{-1} x) + 2 nu(T_0^{-1} x) + nu(T_1^{-1} x).
Counts apply_L(const NumberField& field, const Counts& nu);

// A coding word for a patch point: digits c_1..c_n with T_{c_n} o ... o T_{c_1}(0) = x.
std::vector<std::int8_t> coding_of(const NumberField& field, const SpectrumPatch& patch, int idx);

}  // namespace spectra
