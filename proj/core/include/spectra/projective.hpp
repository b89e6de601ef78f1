#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spectra/transition.hpp"

namespace spectra {

// Ratio coordinates of a vector with positive first entry: (v_2/v_1, ..., v_k/v_1).
std::vector<double> to_projective(std::span<const double> v);

// max_i |ln(V_i) - ln(U_i)| on ratio vectors; ln0 - ln0 = 0, mixed zero = inf.
double proj_distance(std::span<const double> U, std::span<const double> V);

struct MixingWordResult {
    std::vector<std::int8_t> word;
    std::vector<int> zero_rows;  // I (0-based indices, never containing 0)
    std::vector<int> zero_cols;  // J
    bool verified = false;       // entry pattern satisfies the biconditional
};

// Constructive search: connect every index to the first coordinate, then the
// same on transposes. Connector words found by BFS, capped at length 40.
MixingWordResult find_mixing_word(const DigitMatrices& mats, int connector_cap = 40);

// Zero-pattern trichotomy of an explicit word product (exact boolean algebra).
MixingWordResult verify_mixing_word(const DigitMatrices& mats,
                                    std::span<const std::int8_t> word);

struct ContractionConstants {
    double C1 = 0;           // sup d(U A_w, V A_w), with 1.05 safety factor
    double C2 = 0;           // sup ratio over finite-distance pairs, 1.05 safety factor
    double C2_birkhoff = 0;  // tanh of a quarter of the positive block's projective diameter
    double single_digit_max_ratio = 0;  // max over digits of d(U A_i, V A_i)/d(U, V)
};

ContractionConstants contraction_constants(const DigitMatrices& mats, const MixingWordResult& w,
                                           int trials, std::uint64_t seed);

// ln mu(x + v_j) - ln mu(x) for x coded by word; j indexes the difference set.
double f_translation(const SpectralData& spec, const DigitMatrices& mats,
                     std::span<const std::int8_t> word, int j);

// Every patch point is a finite sum of difference-set elements (additive BFS
// inside an enlarged bounding box); requires a null word with leading nonzero digit.
bool delta_spanning_check(const DeltaSet& delta, const SpectrumPatch& patch);

}  // namespace spectra
