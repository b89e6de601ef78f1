#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "spectra/algebraic.hpp"

namespace spectra {

// Finite patch X-bar_R(beta) with its T_i edge structure. Point 0 is the
// origin; ordering is BFS layer, then lexicographic inside a layer, so every
// downstream matrix and eigenvector is reproducible bit for bit.
struct SpectrumPatch {
    const NumberField* field = nullptr;
    double R = 0;
    std::vector<LatticePoint> points;
    std::unordered_map<LatticePoint, int, LatticePointHash> index;
    std::vector<std::array<int, 3>> edges;  // edges[i][d+1] = index of T_d(points[i]) or -1

    int size() const { return static_cast<int>(points.size()); }
    int edge(int i, int digit) const { return edges[i][digit + 1]; }
};

SpectrumPatch enumerate_patch(const NumberField& field, double R, std::size_t cap = 10'000'000);

// X-bar cap a symmetric value interval [-K, K]; used by the interval pipeline.
// K = 1/(beta-1) + margin. The default margin 0.01 reproduces the bundled
// regression table; margin 0 is the plain closed-interval spectrum patch.
std::vector<LatticePoint> compute_V_interval(const NumberField& field, double margin = 0.01,
                                             std::size_t cap = 10'000'000);

// The difference set: points reachable backwards to the origin under digit
// maps T_{-2..2} inside the open box B(2). v_1 = 0, then lexicographic.
struct DeltaSet {
    const NumberField* field = nullptr;
    std::vector<LatticePoint> points;
    std::unordered_map<LatticePoint, int, LatticePointHash> index;

    int size() const { return static_cast<int>(points.size()); }
    int find(const LatticePoint& p) const {
        auto it = index.find(p);
        return it == index.end() ? -1 : it->second;
    }
};

DeltaSet compute_delta(const NumberField& field, std::size_t cap = 10'000'000);

// Outer approximation of the attractor of {S_-1, S_0, S_1} on the contracting
// space: one certified outer ball per depth-n cylinder word.
struct WindowApprox {
    const NumberField* field = nullptr;
    int depth = 0;
    std::vector<int> contracting_places;        // indices into field->places
    std::vector<double> place_radius;           // attractor radius per contracting place
    double radius_scale = 1;                    // prod-free: outer radius factor q_j^depth per place
    struct Cylinder {
        std::vector<std::int8_t> word;          // a_1..a_n, cylinder S_{a_1} o ... o S_{a_n}(R)
        std::vector<Complex> center;            // per contracting place
    };
    std::vector<Cylinder> cylinders;
};

WindowApprox approximate_attractor(const NumberField& field, int depth,
                                   std::size_t cap = 2'000'000);

// Cached exact machinery for window-membership questions; built once per field.
class Window;
std::shared_ptr<const Window> build_window(const NumberField& field);

enum class Verdict { Holds, Fails, Undetermined };

struct Condition1Report {
    Verdict verdict = Verdict::Undetermined;
    std::vector<LatticePoint> lhs;          // X-bar cap cl B(1)
    std::vector<LatticePoint> rhs;          // certified cut-and-project members
    std::vector<LatticePoint> ambiguous;    // candidates neither certified in nor out
    std::vector<LatticePoint> witnesses;    // symmetric difference when Fails
};

Condition1Report check_condition1(const NumberField& field, int depth);

struct CylinderCode {
    bool ok = false;                 // false = Ambiguous at this depth
    std::vector<std::int8_t> word;   // epsilon_1..epsilon_n when ok
};

// A digit word of length n with pi_c(x) in the (closed) cylinder, certified by
// exact lattice membership of the pulled-back point.
CylinderCode cylinder_of(const NumberField& field, const LatticePoint& x, int n);

}  // namespace spectra
