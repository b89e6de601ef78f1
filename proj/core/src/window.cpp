#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "spectra/spectrum.hpp"

namespace spectra {

namespace {

constexpr double kBand = 1e-9;

// All lattice points with |sigma_j(z)| <= bounds[j] + band at every place.
// Depth-first scan over coordinates with interval pruning; bounds are loose
// enough (inverse of the embedding matrix) to be complete.
std::vector<LatticePoint> scan_lattice_box(const NumberField& f, const std::vector<double>& bounds,
                                           double band) {
    const int d = f.degree();
    Eigen::MatrixXd M(d, d);
    std::vector<double> row_bound;
    int r = 0;
    for (int j = 0; j < f.num_places(); ++j) {
        for (int k = 0; k < d; ++k) M(r, k) = f.place_powers[j][k].real();
        row_bound.push_back(bounds[j]);
        ++r;
        if (!f.places[j].real) {
            for (int k = 0; k < d; ++k) M(r, k) = f.place_powers[j][k].imag();
            row_bound.push_back(bounds[j]);
            ++r;
        }
    }
    Eigen::MatrixXd Minv = M.inverse();
    std::vector<Int> zmax(d);
    for (int k = 0; k < d; ++k) {
        double s = 0;
        for (int rr = 0; rr < d; ++rr) s += std::abs(Minv(k, rr)) * row_bound[rr];
        zmax[k] = static_cast<Int>(std::floor(s)) + 1;
    }

    const int np = f.num_places();
    // suffix remainder bounds per place
    std::vector<std::vector<double>> rem(np, std::vector<double>(d + 1, 0.0));
    for (int j = 0; j < np; ++j)
        for (int k = d - 1; k >= 0; --k)
            rem[j][k] = rem[j][k + 1] +
                        static_cast<double>(zmax[k]) * std::abs(f.place_powers[j][k]);

    std::vector<LatticePoint> out;
    std::vector<Int> z(d, 0);
    std::vector<Complex> partial(np, 0.0);

    auto rec = [&](auto&& self, int k) -> void {
        if (k == d) {
            for (int j = 0; j < np; ++j)
                if (std::abs(partial[j]) > bounds[j] + band) return;
            out.push_back(LatticePoint(std::vector<Int>(z)));
            return;
        }
        for (Int v = -zmax[k]; v <= zmax[k]; ++v) {
            z[k] = v;
            bool feasible = true;
            std::vector<Complex> saved = partial;
            for (int j = 0; j < np; ++j) {
                partial[j] += static_cast<double>(v) * f.place_powers[j][k];
                if (std::abs(partial[j]) - rem[j][k + 1] > bounds[j] + band) feasible = false;
            }
            if (feasible) self(self, k + 1);
            partial = saved;
        }
        z[k] = 0;
    };
    rec(rec, 0);
    return out;
}

}  // namespace

// Exact machinery for questions about the contracting window R (the attractor
// of {S_-1, S_0, S_1}). States are the lattice points of the unit box; an
// infinite chain of T_e^{-1} preimages staying in the box is equivalent to
// pi_c lying in the closed attractor.
class Window {
public:
    const NumberField* field = nullptr;
    std::vector<int> cplaces;  // contracting place indices
    double Q = 1;              // volume contraction per step: prod |beta_j|^dim
    double qmax = 0;

    std::vector<LatticePoint> states;
    std::unordered_map<LatticePoint, int, LatticePointHash> sidx;
    std::vector<std::array<int, 3>> iedges;  // T_e^{-1} edges inside the state box
    std::vector<bool> kernel;                // pi_c(state) in closed R
    std::vector<bool> xbar;                  // state lies in X-bar
    bool band_risk = false;                  // some state hugs the ball boundary inexactly

    bool interval_case = false;  // contracting space is one real line, R = [-r, r] exactly
    double interval_r = 0;
    std::vector<Int> interval_mult;  // u(beta) with sigma_c(u(beta)x) = +-1 on the boundary

    bool disk_case = false;  // contracting space is one complex plane
    int disk_place = -1;
    double seed_rho = 0;  // certified disk B(0, seed_rho) inside R (0 = none)

    enum class Mem { Interior, Boundary, Outside, Ambiguous };

    bool kernel_query(const LatticePoint& x) const;
    Mem interior_membership(const LatticePoint& x, int depth) const;

private:
    bool noninterior_certificate(int state) const;
    bool inner_search(int state, int depth) const;
    friend std::shared_ptr<const Window> build_window(const NumberField& field);
};

namespace {

// Certify B(0, rho) subset of R for a one-complex-pair window: every grid
// point of the disk must lie inside some depth-n cylinder image of the disk
// (similarity => balls map to balls), with the grid half-diagonal as margin.
bool certify_seed_disk(const NumberField& f, int place, double rho, int depth, double h) {
    const Complex g = f.places[place].root;
    const double q = std::abs(g);
    const double r = f.attractor_radius(place);
    const double ballr = std::pow(q, depth) * rho;
    if (ballr <= h) return false;

    std::vector<Complex> centers{0.0};
    Complex gj = 1.0;
    for (int j = 0; j < depth; ++j) {
        double remj = std::pow(q, j + 1) / (1.0 - q) * 1.0;
        std::vector<Complex> next;
        next.reserve(centers.size() * 3);
        for (Complex t : centers)
            for (int e = -1; e <= 1; ++e) {
                Complex t2 = t + static_cast<double>(e) * gj;
                if (std::abs(t2) - remj - ballr <= rho + h) next.push_back(t2);
            }
        centers = std::move(next);
        gj *= g;
        if (centers.size() > 3'000'000) return false;
    }
    (void)r;

    // hash grid over ball centers for nearest queries
    const double cell = ballr;
    auto key = [&](double x, double y) {
        return std::pair<long long, long long>(static_cast<long long>(std::floor(x / cell)),
                                               static_cast<long long>(std::floor(y / cell)));
    };
    struct PairHash {
        std::size_t operator()(const std::pair<long long, long long>& p) const noexcept {
            return std::hash<long long>()(p.first * 1000003ll + p.second);
        }
    };
    std::unordered_map<std::pair<long long, long long>, std::vector<Complex>, PairHash> gridmap;
    for (Complex c : centers) gridmap[key(c.real(), c.imag())].push_back(c);

    const double margin = h / std::sqrt(2.0);
    const double need = ballr - margin;
    if (need <= 0) return false;
    const double need2 = need * need;
    const int n = static_cast<int>(std::ceil(2 * rho / h));
    for (int ix = 0; ix <= n; ++ix) {
        double x = -rho + ix * h;
        for (int iy = 0; iy <= n; ++iy) {
            double y = -rho + iy * h;
            if (x * x + y * y > rho * rho) continue;
            bool covered = false;
            auto base = key(x, y);
            for (long long dx = -1; dx <= 1 && !covered; ++dx)
                for (long long dy = -1; dy <= 1 && !covered; ++dy) {
                    auto it = gridmap.find({base.first + dx, base.second + dy});
                    if (it == gridmap.end()) continue;
                    for (Complex c : it->second) {
                        double ex = c.real() - x, ey = c.imag() - y;
                        if (ex * ex + ey * ey <= need2) { covered = true; break; }
                    }
                }
            if (!covered) return false;
        }
    }
    return true;
}

}  // namespace

std::shared_ptr<const Window> build_window(const NumberField& field) {
    auto w = std::make_shared<Window>();
    w->field = &field;
    double Q = 1;
    double qmax = 0;
    for (int j = 0; j < field.num_places(); ++j) {
        if (field.places[j].expanding) continue;
        w->cplaces.push_back(j);
        double q = std::abs(field.places[j].root);
        Q *= std::pow(q, field.places[j].dim());
        qmax = std::max(qmax, q);
    }
    w->Q = Q;
    w->qmax = qmax;

    // state box: unit box radii at expanding places, attractor radii at contracting ones
    std::vector<double> bounds(field.num_places());
    for (int j = 0; j < field.num_places(); ++j)
        bounds[j] = field.places[j].expanding ? field.box_radii(1.0)[j]
                                              : field.attractor_radius(j);
    w->states = scan_lattice_box(field, bounds, kBand);
    std::sort(w->states.begin(), w->states.end());
    for (int i = 0; i < static_cast<int>(w->states.size()); ++i) w->sidx.emplace(w->states[i], i);

    const int n = static_cast<int>(w->states.size());
    w->iedges.assign(n, {-1, -1, -1});
    for (int i = 0; i < n; ++i)
        for (int e = -1; e <= 1; ++e) {
            auto it = w->sidx.find(field.apply_T_inverse(e, w->states[i]));
            if (it != w->sidx.end()) w->iedges[i][e + 1] = it->second;
        }

    // kernel: iteratively drop states with no surviving preimage step
    std::vector<int> outdeg(n, 0);
    std::vector<std::vector<int>> radj(n);
    for (int i = 0; i < n; ++i)
        for (int e = 0; e < 3; ++e)
            if (w->iedges[i][e] >= 0) {
                ++outdeg[i];
                radj[w->iedges[i][e]].push_back(i);
            }
    std::deque<int> dq;
    for (int i = 0; i < n; ++i)
        if (outdeg[i] == 0) dq.push_back(i);
    std::vector<bool> dead(n, false);
    while (!dq.empty()) {
        int u = dq.front();
        dq.pop_front();
        dead[u] = true;
        for (int p : radj[u])
            if (--outdeg[p] == 0) dq.push_back(p);
    }
    w->kernel.assign(n, false);
    for (int i = 0; i < n; ++i) w->kernel[i] = !dead[i];

    // X-bar membership: forward BFS from 0 inside the state set
    w->xbar.assign(n, false);
    auto it0 = w->sidx.find(LatticePoint::zero(field.degree()));
    if (it0 != w->sidx.end()) {
        std::deque<int> fr{it0->second};
        w->xbar[it0->second] = true;
        while (!fr.empty()) {
            int u = fr.front();
            fr.pop_front();
            for (int e = -1; e <= 1; ++e) {
                auto it = w->sidx.find(field.apply_T(e, w->states[u]));
                if (it != w->sidx.end() && !w->xbar[it->second]) {
                    w->xbar[it->second] = true;
                    fr.push_back(it->second);
                }
            }
        }
    }

    // structure-specific certificates
    if (w->cplaces.size() == 1) {
        int cp = w->cplaces[0];
        const Place& pl = field.places[cp];
        double q = std::abs(pl.root);
        if (pl.real && q >= 1.0 / 3.0 + 1e-9) {
            // S_i images of [-r, r] overlap and tile it exactly, so R = [-r, r].
            w->interval_case = true;
            w->interval_r = field.attractor_radius(cp);
            w->interval_mult = pl.root.real() >= 0 ? std::vector<Int>{1, -1}
                                                   : std::vector<Int>{1, 1};
        } else if (!pl.real) {
            w->disk_case = true;
            w->disk_place = cp;
            double r = field.attractor_radius(cp);
            for (double frac : {0.42, 0.34, 0.26, 0.18}) {
                double rho = frac * r;
                if (certify_seed_disk(field, cp, rho, 11, rho / 150.0)) {
                    w->seed_rho = rho;
                    break;
                }
            }
        }
    }

    // audit: inexact boundary hugging would make kernel decisions unreliable
    for (int i = 0; i < n && !w->band_risk; ++i) {
        auto e = field.embed(w->states[i]);
        for (int cp : w->cplaces) {
            double gap = std::abs(std::abs(e[cp]) - field.attractor_radius(cp));
            if (gap < kBand) {
                if (w->interval_case) {
                    LatticePoint u = field.beta_poly_times(w->interval_mult, w->states[i]);
                    if (field.value_equals(u, 1, 1) || field.value_equals(u, -1, 1)) continue;
                }
                w->band_risk = true;
            }
        }
    }
    return w;
}

bool Window::kernel_query(const LatticePoint& x) const {
    // contracting coordinates decide everything; expanding ones only have to
    // shrink into the state box, which T_e^{-1} guarantees.
    std::unordered_set<LatticePoint, LatticePointHash> visiting;
    auto rec = [&](auto&& self, const LatticePoint& p) -> bool {
        auto e = field->embed(p);
        for (int cp : cplaces)
            if (std::abs(e[cp]) > field->attractor_radius(cp) + kBand) return false;
        auto it = sidx.find(p);
        if (it != sidx.end()) return kernel[it->second];
        if (!visiting.insert(p).second) return false;
        for (int d = -1; d <= 1; ++d)
            if (self(self, field->apply_T_inverse(d, p))) return true;
        return false;
    };
    return rec(rec, x);
}

bool Window::noninterior_certificate(int state) const {
    // admissible closure of the state inside the kernel
    std::vector<int> comp;
    std::unordered_set<int> in_comp;
    std::deque<int> dq{state};
    in_comp.insert(state);
    while (!dq.empty()) {
        int u = dq.front();
        dq.pop_front();
        comp.push_back(u);
        if (xbar[u]) return false;  // germ may be fat near spectrum states
        for (int e = 0; e < 3; ++e) {
            int v = iedges[u][e];
            if (v >= 0 && kernel[v] && !in_comp.count(v)) {
                in_comp.insert(v);
                dq.push_back(v);
            }
        }
    }
    // cylinder-count growth of the closure: rho(adj) bounded by max row sum
    // of adj^m to the 1/m. Non-interior when the germ has zero density:
    // rho * Q < 1.
    const int m = static_cast<int>(comp.size());
    std::vector<int> pos(states.size(), -1);
    for (int i = 0; i < m; ++i) pos[comp[i]] = i;
    std::vector<std::vector<Int>> A(m, std::vector<Int>(m, 0)), P;
    for (int i = 0; i < m; ++i)
        for (int e = 0; e < 3; ++e) {
            int v = iedges[comp[i]][e];
            if (v >= 0 && kernel[v]) A[i][pos[v]] += 1;
        }
    P = A;
    const int power = 24;
    for (int step = 1; step < power; ++step) {
        std::vector<std::vector<Int>> N(m, std::vector<Int>(m, 0));
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k)
                if (P[i][k])
                    for (int j = 0; j < m; ++j)
                        if (A[k][j]) N[i][j] = checked_add(N[i][j], checked_mul(P[i][k], A[k][j]));
        P = std::move(N);
    }
    Int max_row = 0;
    for (int i = 0; i < m; ++i) {
        Int s = 0;
        for (int j = 0; j < m; ++j) s = checked_add(s, P[i][j]);
        max_row = std::max(max_row, s);
    }
    double rho_bound = std::pow(static_cast<double>(std::max<Int>(max_row, 1)),
                                1.0 / static_cast<double>(power));
    return rho_bound * Q < 1.0 - 1e-9;
}

bool Window::inner_search(int state, int depth) const {
    if (seed_rho <= 0) return false;
    const double target = seed_rho * 0.98;
    std::unordered_set<int> seen{state};
    std::deque<std::pair<int, int>> dq{{state, 0}};
    while (!dq.empty()) {
        auto [u, d] = dq.front();
        dq.pop_front();
        auto e = field->embed(states[u]);
        if (std::abs(e[disk_place]) <= target) return true;
        if (d >= depth) continue;
        for (int k = 0; k < 3; ++k) {
            int v = iedges[u][k];
            if (v >= 0 && !seen.count(v)) {
                seen.insert(v);
                dq.push_back({v, d + 1});
            }
        }
    }
    return false;
}

Window::Mem Window::interior_membership(const LatticePoint& x, int depth) const {
    if (!kernel_query(x)) return Mem::Outside;
    if (band_risk) return Mem::Ambiguous;
    if (interval_case) {
        LatticePoint u = field->beta_poly_times(interval_mult, x);
        if (field->value_equals(u, 1, 1) || field->value_equals(u, -1, 1)) return Mem::Boundary;
        return Mem::Interior;
    }
    if (disk_case) {
        auto it = sidx.find(x);
        if (it == sidx.end()) return Mem::Ambiguous;
        if (inner_search(it->second, depth)) return Mem::Interior;
        if (noninterior_certificate(it->second)) return Mem::Boundary;
        return Mem::Ambiguous;
    }
    return Mem::Ambiguous;
}

std::shared_ptr<const Window> get_window(const NumberField& field) {
    // windows are cheap enough to rebuild; no global cache to keep the library
    // free of hidden shared state
    return build_window(field);
}

WindowApprox approximate_attractor(const NumberField& field, int depth, std::size_t cap) {
    if (depth < 1) throw ParseError("attractor depth must be >= 1");
    double words = std::pow(3.0, depth);
    if (words > static_cast<double>(cap)) throw DepthTooLarge("3^depth exceeds cylinder cap");

    WindowApprox wa;
    wa.field = &field;
    wa.depth = depth;
    for (int j = 0; j < field.num_places(); ++j)
        if (!field.places[j].expanding) {
            wa.contracting_places.push_back(j);
            wa.place_radius.push_back(field.attractor_radius(j));
        }
    double qmax = 0;
    for (int j : wa.contracting_places) qmax = std::max(qmax, std::abs(field.places[j].root));
    wa.radius_scale = std::pow(qmax, depth);

    struct Node {
        std::vector<std::int8_t> word;
        std::vector<Complex> center;
    };
    std::vector<Node> level{{std::vector<std::int8_t>{},
                             std::vector<Complex>(wa.contracting_places.size(), 0.0)}};
    // S_{a_1} o ... o S_{a_n}(0) = a_1 + a_2 g + ... + a_n g^{n-1}
    std::vector<Complex> gpow(wa.contracting_places.size(), 1.0);
    for (int step = 0; step < depth; ++step) {
        std::vector<Node> next;
        next.reserve(level.size() * 3);
        for (const auto& nd : level)
            for (int e = -1; e <= 1; ++e) {
                Node n2 = nd;
                n2.word.push_back(static_cast<std::int8_t>(e));
                for (std::size_t j = 0; j < gpow.size(); ++j)
                    n2.center[j] += static_cast<double>(e) * gpow[j];
                next.push_back(std::move(n2));
            }
        for (std::size_t j = 0; j < gpow.size(); ++j)
            gpow[j] *= field.places[wa.contracting_places[j]].root;
        level = std::move(next);
        if (level.size() > cap) throw DepthTooLarge("cylinder count exceeds cap");
    }

    // merge words whose centers coincide (identical cylinders)
    std::sort(level.begin(), level.end(), [](const Node& a, const Node& b) {
        for (std::size_t j = 0; j < a.center.size(); ++j) {
            if (a.center[j].real() != b.center[j].real())
                return a.center[j].real() < b.center[j].real();
            if (a.center[j].imag() != b.center[j].imag())
                return a.center[j].imag() < b.center[j].imag();
        }
        return a.word < b.word;
    });
    for (const auto& nd : level) {
        if (!wa.cylinders.empty()) {
            bool same = true;
            for (std::size_t j = 0; j < nd.center.size(); ++j)
                if (std::abs(nd.center[j] - wa.cylinders.back().center[j]) > 1e-12) same = false;
            if (same) continue;
        }
        wa.cylinders.push_back({nd.word, nd.center});
    }
    return wa;
}

Condition1Report check_condition1(const NumberField& field, int depth) {
    if (!field.hyperbolic()) throw NonHyperbolic("condition 1 requires a hyperbolic field");
    if (depth < 1 || depth > 60) throw DepthTooLarge("condition-1 depth out of range");

    Condition1Report rep;
    // LHS: X-bar cap cl B(1), by BFS with the closed box.
    LatticePoint origin = LatticePoint::zero(field.degree());
    std::unordered_set<LatticePoint, LatticePointHash> lhs{origin};
    std::deque<LatticePoint> fr{origin};
    while (!fr.empty()) {
        LatticePoint p = fr.front();
        fr.pop_front();
        for (int d = -1; d <= 1; ++d) {
            LatticePoint q = field.apply_T(d, p);
            if (lhs.count(q)) continue;
            BoxTest t = in_box_rational(field, q, 1, 1, /*closed=*/true);
            if (t.result == BoxTest::Outside) continue;
            lhs.insert(q);
            fr.push_back(q);
        }
    }

    auto window = build_window(field);
    // candidates: lattice points of cl B(1) (expanding box) whose contracting
    // coordinates fit the attractor ball
    std::vector<double> bounds(field.num_places());
    for (int j = 0; j < field.num_places(); ++j)
        bounds[j] = field.places[j].expanding ? field.box_radii(1.0)[j]
                                              : field.attractor_radius(j);
    std::vector<LatticePoint> cands = scan_lattice_box(field, bounds, kBand);
    std::sort(cands.begin(), cands.end());

    for (const auto& z : cands) {
        // exact closed-box test on expanding places
        BoxTest t = in_box_rational(field, z, 1, 1, /*closed=*/true);
        if (t.result == BoxTest::Outside) continue;
        Window::Mem m = window->interior_membership(z, depth);
        switch (m) {
            case Window::Mem::Interior: rep.rhs.push_back(z); break;
            case Window::Mem::Outside:
            case Window::Mem::Boundary: break;
            case Window::Mem::Ambiguous: rep.ambiguous.push_back(z); break;
        }
    }

    rep.lhs.assign(lhs.begin(), lhs.end());
    std::sort(rep.lhs.begin(), rep.lhs.end());

    std::vector<LatticePoint> diff;
    std::set_symmetric_difference(rep.lhs.begin(), rep.lhs.end(), rep.rhs.begin(), rep.rhs.end(),
                                  std::back_inserter(diff));
    if (!diff.empty() && rep.ambiguous.empty()) {
        rep.verdict = Verdict::Fails;
        rep.witnesses = std::move(diff);
    } else if (!rep.ambiguous.empty()) {
        // a certified interior point outside X-bar fails regardless of ambiguity
        std::vector<LatticePoint> extra;
        std::set_difference(rep.rhs.begin(), rep.rhs.end(), rep.lhs.begin(), rep.lhs.end(),
                            std::back_inserter(extra));
        if (!extra.empty()) {
            rep.verdict = Verdict::Fails;
            rep.witnesses = std::move(extra);
        } else {
            rep.verdict = Verdict::Undetermined;
        }
    } else {
        rep.verdict = Verdict::Holds;
    }
    return rep;
}

CylinderCode cylinder_of(const NumberField& field, const LatticePoint& x, int n) {
    if (n < 1 || n > 40) throw DepthTooLarge("cylinder depth out of range");
    auto window = build_window(field);

    std::vector<int> cplaces;
    for (int j = 0; j < field.num_places(); ++j)
        if (!field.places[j].expanding) cplaces.push_back(j);

    struct Hit {
        std::vector<std::int8_t> word;
        LatticePoint endpoint;
    };
    std::vector<Hit> hits;
    std::vector<std::int8_t> word;
    bool truncated = false;

    auto rec = [&](auto&& self, const LatticePoint& y, int k) -> void {
        if (hits.size() >= 4096) { truncated = true; return; }
        auto e = field.embed(y);
        for (int cp : cplaces)
            if (std::abs(e[cp]) > field.attractor_radius(cp) + kBand) return;
        if (k == n) {
            if (window->kernel_query(y)) hits.push_back({word, y});
            return;
        }
        for (int d : {0, 1, -1}) {
            word.push_back(static_cast<std::int8_t>(d));
            self(self, field.apply_T_inverse(d, y), k + 1);
            word.pop_back();
        }
    };
    rec(rec, x, 0);

    CylinderCode code;
    if (hits.empty() || truncated) return code;  // Ambiguous

    // deterministic choice: word whose cylinder center is closest to pi_c(x)
    auto ex = field.embed(x);
    double best = 1e300;
    std::size_t besti = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        double dist2 = 0;
        for (std::size_t jj = 0; jj < cplaces.size(); ++jj) {
            Complex c = 0, gp = 1;
            for (int k = 0; k < n; ++k) {
                c += static_cast<double>(hits[i].word[k]) * gp;
                gp *= field.places[cplaces[jj]].root;
            }
            dist2 += std::norm(ex[cplaces[jj]] - c);
        }
        if (dist2 < best - 1e-15) {
            best = dist2;
            besti = i;
        }
    }
    code.ok = true;
    code.word = hits[besti].word;
    return code;
}

}  // namespace spectra
