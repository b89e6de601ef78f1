#include "spectra/spectrum.hpp"

#include <algorithm>
#include <deque>

namespace spectra {

namespace {

void require_hyperbolic(const NumberField& field) {
    if (!field.hyperbolic())
        throw NonHyperbolic("field is not hyperbolic; spectrum constructions are undefined");
}

}  // namespace

SpectrumPatch enumerate_patch(const NumberField& field, double R, std::size_t cap) {
    require_hyperbolic(field);
    if (R < 1.0) throw ParseError("enumerate_patch needs R >= 1 (escape is irreversible only then)");

    SpectrumPatch patch;
    patch.field = &field;
    patch.R = R;

    LatticePoint origin = LatticePoint::zero(field.degree());
    patch.points.push_back(origin);
    patch.index.emplace(origin, 0);

    std::vector<LatticePoint> layer{origin};
    while (!layer.empty()) {
        std::vector<LatticePoint> next;
        for (const auto& p : layer) {
            for (int d = -1; d <= 1; ++d) {
                LatticePoint q = field.apply_T(d, p);
                if (patch.index.count(q)) continue;
                if (!in_box(field, q, R, /*closed=*/false)) continue;
                patch.index.emplace(q, -1);  // mark seen; final id assigned after sort
                next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (auto& q : next) {
            if (patch.points.size() >= cap) throw PatchTooLarge("patch exceeds configured cap");
            patch.index[q] = static_cast<int>(patch.points.size());
            patch.points.push_back(q);
        }
        layer = std::move(next);
    }

    patch.edges.assign(patch.points.size(), {-1, -1, -1});
    for (int i = 0; i < patch.size(); ++i)
        for (int d = -1; d <= 1; ++d) {
            auto it = patch.index.find(field.apply_T(d, patch.points[i]));
            if (it != patch.index.end()) patch.edges[i][d + 1] = it->second;
        }
    return patch;
}

std::vector<LatticePoint> compute_V_interval(const NumberField& field, double margin,
                                             std::size_t cap) {
    if (!field.pisot()) throw NotPisot("interval spectrum requires a Pisot field");
    const double B = 1.0 / (field.beta - 1.0);
    const double K = B + margin;
    const bool exact_cutoff = margin == 0.0;

    // |value| <= K; for margin 0 the endpoints 1/(beta-1) are detected exactly.
    auto inside = [&](const LatticePoint& p) {
        double v = std::abs(field.real_value(p));
        if (v < K - 1e-9) return true;
        if (v > K + 1e-9) return false;
        if (exact_cutoff) {
            // boundary iff (beta-1)*p = +-1 exactly
            LatticePoint w = field.beta_poly_times({-1, 1}, p);
            if (field.value_equals(w, 1, 1) || field.value_equals(w, -1, 1)) return true;
            return v <= K;
        }
        return v <= K;  // margin cutoffs are far from every lattice value
    };

    LatticePoint origin = LatticePoint::zero(field.degree());
    std::unordered_map<LatticePoint, bool, LatticePointHash> seen;
    seen.emplace(origin, true);
    std::deque<LatticePoint> frontier{origin};
    std::vector<LatticePoint> out{origin};
    while (!frontier.empty()) {
        LatticePoint p = frontier.front();
        frontier.pop_front();
        for (int d = -1; d <= 1; ++d) {
            LatticePoint q = field.apply_T(d, p);
            if (seen.count(q)) continue;
            seen.emplace(q, true);
            if (!inside(q)) continue;
            if (out.size() >= cap) throw PatchTooLarge("interval spectrum exceeds cap");
            out.push_back(q);
            frontier.push_back(q);
        }
    }
    std::sort(out.begin() + 1, out.end(), [&](const LatticePoint& a, const LatticePoint& b) {
        double va = field.real_value(a), vb = field.real_value(b);
        if (va != vb) return va < vb;
        return a < b;
    });
    return out;
}

namespace {

// Open-box membership in B(2) for the digit-{-2..2} graph.
bool in_open_b2(const NumberField& field, const LatticePoint& p) {
    BoxTest t = in_box_rational(field, p, 2, 1, /*closed=*/false);
    return t.result == BoxTest::Inside;
}

}  // namespace

DeltaSet compute_delta(const NumberField& field, std::size_t cap) {
    require_hyperbolic(field);
    LatticePoint origin = LatticePoint::zero(field.degree());

    // Route 1: reverse reachability to 0 under T_{-2..2} inside the open box.
    std::unordered_map<LatticePoint, bool, LatticePointHash> bwd;
    bwd.emplace(origin, true);
    std::deque<LatticePoint> frontier{origin};
    while (!frontier.empty()) {
        LatticePoint p = frontier.front();
        frontier.pop_front();
        for (int e = -2; e <= 2; ++e) {
            LatticePoint q = field.apply_T_inverse(e, p);
            if (bwd.count(q)) continue;
            if (!in_open_b2(field, q)) continue;
            if (bwd.size() >= cap) throw PatchTooLarge("difference set exceeds cap");
            bwd.emplace(q, true);
            frontier.push_back(q);
        }
    }

    // Route 2: forward orbit of 0 intersected with co-reachability, same box.
    std::unordered_map<LatticePoint, int, LatticePointHash> fwd;
    std::vector<LatticePoint> fwd_pts;
    fwd.emplace(origin, 0);
    fwd_pts.push_back(origin);
    std::deque<LatticePoint> fr2{origin};
    while (!fr2.empty()) {
        LatticePoint p = fr2.front();
        fr2.pop_front();
        for (int e = -2; e <= 2; ++e) {
            LatticePoint q = field.apply_T(e, p);
            if (fwd.count(q)) continue;
            if (!in_open_b2(field, q)) continue;
            if (fwd_pts.size() >= cap) throw PatchTooLarge("difference set exceeds cap");
            fwd.emplace(q, static_cast<int>(fwd_pts.size()));
            fwd_pts.push_back(q);
            fr2.push_back(q);
        }
    }
    std::vector<std::vector<int>> preds(fwd_pts.size());
    for (std::size_t i = 0; i < fwd_pts.size(); ++i)
        for (int e = -2; e <= 2; ++e) {
            auto it = fwd.find(field.apply_T(e, fwd_pts[i]));
            if (it != fwd.end()) preds[it->second].push_back(static_cast<int>(i));
        }
    std::vector<bool> coreach(fwd_pts.size(), false);
    std::deque<int> dq{0};
    coreach[0] = true;
    while (!dq.empty()) {
        int u = dq.front();
        dq.pop_front();
        for (int v : preds[u])
            if (!coreach[v]) {
                coreach[v] = true;
                dq.push_back(v);
            }
    }
    std::vector<LatticePoint> route2;
    for (std::size_t i = 0; i < fwd_pts.size(); ++i)
        if (coreach[i]) route2.push_back(fwd_pts[i]);

    // The two readings of the definition must agree.
    std::vector<LatticePoint> route1;
    route1.reserve(bwd.size());
    for (auto& [p, _] : bwd) route1.push_back(p);
    std::sort(route1.begin(), route1.end());
    std::sort(route2.begin(), route2.end());
    if (route1 != route2)
        throw ConvergenceFailure("difference-set constructions disagree (reverse BFS vs fwd&bwd)");

    DeltaSet delta;
    delta.field = &field;
    delta.points.push_back(origin);
    for (auto& p : route1)
        if (!p.is_zero()) delta.points.push_back(p);
    for (int i = 0; i < delta.size(); ++i) delta.index.emplace(delta.points[i], i);
    return delta;
}

}  // namespace spectra
