#include "spectra/transition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace spectra {

std::vector<Int> TransitionMatrix::left_mul(std::span<const Int> v) const {
    std::vector<Int> out(dim, 0);
    for (int i = 0; i < dim; ++i) {
        if (v[i] == 0) continue;
        for (auto [c, w] : rows[i])
            out[c] = checked_add(out[c], checked_mul(v[i], static_cast<Int>(w)));
    }
    return out;
}

std::vector<double> TransitionMatrix::left_mul(std::span<const double> v) const {
    std::vector<double> out(dim, 0.0);
    for (int i = 0; i < dim; ++i) {
        if (v[i] == 0.0) continue;
        for (auto [c, w] : rows[i]) out[c] += v[i] * w;
    }
    return out;
}

TransitionMatrix build_lambda_R(const SpectrumPatch& patch) {
    TransitionMatrix M;
    M.dim = patch.size();
    M.index = patch.points;
    M.rows.assign(M.dim, {});
    for (int i = 0; i < M.dim; ++i) {
        for (int d = -1; d <= 1; ++d) {
            int j = patch.edge(i, d);
            if (j < 0) continue;
            int w = d == 0 ? 2 : 1;
            bool merged = false;
            for (auto& [c, wt] : M.rows[i])
                if (c == j) { wt += w; merged = true; }
            if (!merged) M.rows[i].push_back({j, w});
        }
    }
    return M;
}

namespace {

TransitionMatrix digit_matrix(const NumberField& field, const std::vector<LatticePoint>& pts,
                              const std::unordered_map<LatticePoint, int, LatticePointHash>& idx,
                              int digit) {
    TransitionMatrix M;
    M.dim = static_cast<int>(pts.size());
    M.index = pts;
    M.rows.assign(M.dim, {});
    for (int m = 0; m < M.dim; ++m) {
        auto add = [&](const LatticePoint& target, int w) {
            auto it = idx.find(target);
            if (it == idx.end()) return;
            for (auto& [c, wt] : M.rows[m])
                if (c == it->second) { wt += w; return; }
            M.rows[m].push_back({it->second, w});
        };
        for (int j : {-1, 1}) add(field.apply_T(j - digit, pts[m]), 1);
        add(field.apply_T(-digit, pts[m]), 2);
    }
    return M;
}

}  // namespace

DigitMatrices build_digit_matrices(const NumberField& field, const DeltaSet& delta) {
    DigitMatrices dm;
    dm.field = &field;
    dm.index = delta.points;
    for (int d = -1; d <= 1; ++d) dm.A[d + 1] = digit_matrix(field, delta.points, delta.index, d);
    return dm;
}

TransitionMatrix build_M0_pisot(const std::vector<LatticePoint>& V, const NumberField& field) {
    if (!field.pisot()) throw NotPisot("interval matrix requires a Pisot field");
    std::unordered_map<LatticePoint, int, LatticePointHash> idx;
    for (std::size_t i = 0; i < V.size(); ++i) idx.emplace(V[i], static_cast<int>(i));
    return digit_matrix(field, V, idx, 0);
}

double spectral_radius(const TransitionMatrix& M, double tol, std::size_t max_iter) {
    if (tol <= 0) throw ParseError("tolerance must be positive");
    if (M.dim == 0) throw ParseError("empty matrix");
    std::vector<double> v(M.dim, 0.0);
    v[0] = 1.0;
    std::deque<double> window;
    for (std::size_t it = 0; it < max_iter; ++it) {
        double s0 = 0;
        for (double x : v) s0 += x;
        std::vector<double> w = M.left_mul(v);
        double s1 = 0;
        for (double x : w) s1 += x;
        if (s1 == 0.0) throw ConvergenceFailure("row vector died; index 1 leads nowhere");
        window.push_back(s1 / s0);
        if (window.size() > 4) window.pop_front();
        for (double& x : w) x /= s1;
        v = std::move(w);
        if (window.size() == 4) {
            double avg = 0;
            for (double r : window) avg += r;
            avg /= 4.0;
            double dev = 0;
            for (double r : window) dev = std::max(dev, std::abs(r - avg));
            if (dev < tol * std::max(1.0, avg)) return avg;
        }
    }
    throw ConvergenceFailure("spectral radius power iteration did not converge");
}

PerronResult perron_limit(const TransitionMatrix& M, double tol, std::size_t max_iter) {
    PerronResult res;
    res.lambda = spectral_radius(M, std::min(tol, 1e-13));

    // reachable block from index 0
    std::vector<bool> reach(M.dim, false);
    std::deque<int> dq{0};
    reach[0] = true;
    while (!dq.empty()) {
        int u = dq.front();
        dq.pop_front();
        for (auto [c, w] : M.rows[u])
            if (!reach[c]) {
                reach[c] = true;
                dq.push_back(c);
            }
    }

    std::vector<double> u(M.dim, 0.0);
    u[0] = 1.0;
    bool aperiodic_hint = M.entry(0, 0) > 0;
    if (!aperiodic_hint)
        throw AssumptionViolated("perron_limit requires M(1,1) > 0");

    for (std::size_t it = 1; it <= max_iter; ++it) {
        std::vector<double> w = M.left_mul(u);
        for (double& x : w) x /= res.lambda;
        // assumption iii: entry 1 stays maximal
        double mx = 0;
        int arg = 0;
        for (int i = 0; i < M.dim; ++i)
            if (w[i] > mx) { mx = w[i]; arg = i; }
        if (res.maximality_ok && arg != 0 && w[arg] > w[0] * (1 + 1e-12)) {
            res.maximality_ok = false;
            res.maximality_violation_n = static_cast<int>(it);
            res.maximality_violation_index = arg;
        }
        if (res.positivity_n < 0) {
            bool pos = true;
            for (int i = 0; i < M.dim; ++i)
                if (reach[i] && w[i] <= 0) { pos = false; break; }
            if (pos) res.positivity_n = static_cast<int>(it);
        }
        double diff = 0;
        for (int i = 0; i < M.dim; ++i) diff = std::max(diff, std::abs(w[i] - u[i]));
        u = std::move(w);
        if (diff < tol) {
            // polish lambda on the converged direction, then settle W once more
            for (int round = 0; round < 4; ++round) {
                std::vector<double> mu = M.left_mul(std::span<const double>(u));
                double num = 0, den = 0;
                for (int i = 0; i < M.dim; ++i) { num += mu[i]; den += u[i]; }
                res.lambda = num / den;
                for (std::size_t k = 0; k < 64; ++k) {
                    std::vector<double> nxt = M.left_mul(std::span<const double>(u));
                    for (double& x : nxt) x /= res.lambda;
                    u = std::move(nxt);
                }
            }
            res.W = u;
            std::vector<double> check = M.left_mul(std::span<const double>(res.W));
            double resid = 0;
            for (int i = 0; i < M.dim; ++i)
                resid = std::max(resid, std::abs(check[i] / res.lambda - res.W[i]));
            res.residual = resid;
            return res;
        }
    }
    throw ConvergenceFailure("perron limit iteration did not converge");
}

SpectralData make_spectral_data(const TransitionMatrix& M0, double tol) {
    PerronResult pr = perron_limit(M0, tol);
    SpectralData sd;
    sd.lambda = pr.lambda;
    sd.W = pr.W;
    sd.mu0 = pr.W.empty() ? 0.0 : pr.W[0];
    sd.residual = pr.residual;
    sd.index = M0.index;
    if (sd.lambda <= 1.0 || sd.lambda >= 4.0)
        throw ConvergenceFailure("growth constant outside (1,4)");
    if (sd.mu0 <= 0.0) throw ConvergenceFailure("mu(0) must be positive");
    return sd;
}

Int brute_force_N(const NumberField& field, const LatticePoint& x, int n) {
    if (n < 0 || n > 14) throw TooLarge("brute force capped at n <= 14");
    Counts cur;
    cur.emplace(LatticePoint::zero(field.degree()), 1);
    for (int step = 0; step < n; ++step) {
        Counts next;
        next.reserve(cur.size() * 2);
        for (const auto& [p, c] : cur) {
            for (int d = -1; d <= 1; ++d) {
                Int w = d == 0 ? 2 : 1;
                LatticePoint q = field.apply_T(d, p);
                next[q] = checked_add(next.count(q) ? next[q] : 0, checked_mul(c, w));
            }
        }
        cur = std::move(next);
    }
    auto it = cur.find(x);
    return it == cur.end() ? 0 : it->second;
}

double measure_at(const SpectralData& spec, const DigitMatrices& mats,
                  std::span<const std::int8_t> word) {
    std::vector<double> v = spec.W;
    for (std::int8_t c : word) {
        v = mats.of(c).left_mul(std::span<const double>(v));
        for (double& x : v) x /= spec.lambda;
    }
    return v[0];
}

std::vector<double> local_vector(const SpectralData& spec, const DigitMatrices& mats,
                                 std::span<const std::int8_t> word) {
    std::vector<double> v = spec.W;
    for (std::int8_t c : word) {
        v = mats.of(c).left_mul(std::span<const double>(v));
        for (double& x : v) x /= spec.lambda;
    }
    return v;
}

Counts apply_L(const NumberField& field, const Counts& nu) {
    Counts out;
    out.reserve(nu.size() * 2);
    for (const auto& [p, c] : nu) {
        for (int d = -1; d <= 1; ++d) {
            Int w = d == 0 ? 2 : 1;
            LatticePoint q = field.apply_T(d, p);
            out[q] = checked_add(out.count(q) ? out[q] : 0, checked_mul(c, w));
        }
    }
    return out;
}

std::vector<std::int8_t> coding_of(const NumberField& field, const SpectrumPatch& patch, int idx) {
    // walk the BFS tree backwards: find any predecessor with a smaller index
    std::vector<std::int8_t> word;
    int cur = idx;
    while (cur != 0) {
        bool moved = false;
        for (int d = -1; d <= 1 && !moved; ++d) {
            auto it = patch.index.find(field.apply_T_inverse(d, patch.points[cur]));
            if (it != patch.index.end() && it->second < cur) {
                word.push_back(static_cast<std::int8_t>(d));
                cur = it->second;
                moved = true;
            }
        }
        if (!moved) throw ConvergenceFailure("patch point has no predecessor toward the origin");
    }
    std::reverse(word.begin(), word.end());
    return word;
}

}  // namespace spectra
