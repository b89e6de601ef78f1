#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectra/errors.hpp"

namespace spectra {

using Int = std::int64_t;
using Complex = std::complex<double>;

// Overflow-checked signed arithmetic. Every pipeline here stays far below
// 2^63; hitting the limit is reported, never wrapped.
inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw IntegerOverflow("lattice coordinate overflow in add");
    return r;
}
inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw IntegerOverflow("lattice coordinate overflow in mul");
    return r;
}

// Exact integer coordinate vector of a point of the lattice Z-bar, in the
// power basis 1, beta, ..., beta^{deg-1}. z[0] is the constant coefficient.
struct LatticePoint {
    std::vector<Int> z;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<Int> v) : z(std::move(v)) {}
    static LatticePoint zero(int deg) { return LatticePoint(std::vector<Int>(deg, 0)); }

    int deg() const { return static_cast<int>(z.size()); }
    bool is_zero() const {
        for (Int v : z) if (v != 0) return false;
        return true;
    }
    LatticePoint negated() const {
        LatticePoint p(*this);
        for (Int& v : p.z) v = -v;
        return p;
    }
    friend bool operator==(const LatticePoint& a, const LatticePoint& b) { return a.z == b.z; }
    friend bool operator!=(const LatticePoint& a, const LatticePoint& b) { return a.z != b.z; }
    friend bool operator<(const LatticePoint& a, const LatticePoint& b) { return a.z < b.z; }
};

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b);
LatticePoint operator-(const LatticePoint& a, const LatticePoint& b);

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (Int v : p.z) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ull;
        return h;
    }
};

// Monic integer polynomial with |constant term| = 1, leading coefficient first.
struct MinimalPolynomial {
    std::vector<Int> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    std::string text() const;
};

// Accepts "x^3-x^2-x-1" style text or a comma separated leading-first
// coefficient list "1,-1,-1,-1".
MinimalPolynomial parse_polynomial(const std::string& text);

enum class FieldClass { Pisot, HyperbolicNonPisot, NonHyperbolic };

// One archimedean place: real roots give one real coordinate, a complex
// conjugate pair gives one complex coordinate (positive-imaginary root kept).
struct Place {
    Complex root;
    bool real = true;
    bool expanding = true;  // |root| > 1
    int dim() const { return real ? 1 : 2; }
};

class NumberField {
public:
    MinimalPolynomial minpoly;
    double beta = 0;            // the distinguished real root in (1,2)
    std::vector<Place> places;  // place 0 is beta itself, then expanding, then contracting
    FieldClass classification = FieldClass::NonHyperbolic;

    std::vector<std::vector<Int>> companion;      // multiplication by beta on coefficients
    std::vector<std::vector<Int>> companion_inv;  // exact inverse (|det| = 1)
    std::vector<std::vector<Complex>> place_powers;  // root^k per place, k < deg

    int degree() const { return minpoly.degree(); }
    int num_places() const { return static_cast<int>(places.size()); }
    bool pisot() const { return classification == FieldClass::Pisot; }
    bool hyperbolic() const { return classification != FieldClass::NonHyperbolic; }

    // T_i(x) = beta*x + i, exact.
    LatticePoint apply_T(int i, const LatticePoint& x) const;
    // The unique y with apply_T(i, y) == x (constant term of minpoly is a unit).
    LatticePoint apply_T_inverse(int i, const LatticePoint& x) const;

    // (sum_k a_k beta^k) * x as an exact lattice point.
    LatticePoint beta_poly_times(const std::vector<Int>& a, const LatticePoint& x) const;
    LatticePoint constant(Int c) const;  // the lattice point of the integer c

    // Value of the point at each place; entry 0 is the real value.
    std::vector<Complex> embed(const LatticePoint& x) const;
    double real_value(const LatticePoint& x) const;

    // Per-place radius of B_beta(R): R / ||beta_j| - 1|.
    std::vector<double> box_radii(double R) const;
    // 1/(1-|beta_j|) for a contracting place (attractor bound at that place).
    double attractor_radius(int place) const;

    // Exact: is value(x) equal to num/den (rational)? Uses injectivity of the
    // real embedding on the lattice.
    bool value_equals(const LatticePoint& x, Int num, Int den) const;
    // Exact: is sigma_place(x) equal to the rational num/den? (real places)
    bool place_value_equals(const LatticePoint& x, int place, Int num, Int den) const;

    // Lattice vector whose real value is 1/(beta-1), when beta-1 is a unit.
    std::optional<LatticePoint> interval_endpoint() const;
};

struct BoxTest {
    enum Result { Inside, Outside, Boundary } result;
    int place = -1;  // deciding place for Outside/Boundary
};

// Membership of x in B_beta(R) with an epsilon band; R given as a rational
// so exact boundary hits at real places resolve to Boundary instead of a flag.
BoxTest in_box_rational(const NumberField& field, const LatticePoint& x, Int Rnum, Int Rden,
                        bool closed, double band = 1e-9);
// Convenience: true iff strictly inside (or inside-or-boundary when closed).
// Throws BoundaryAmbiguous when a non-exact band hit occurs.
bool in_box(const NumberField& field, const LatticePoint& x, double R, bool closed,
            double band = 1e-9);

NumberField analyze_field(const MinimalPolynomial& p, double root_tol = 1e-12);

}  // namespace spectra
