#include "spectra/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace spectra {

namespace {

// closed-interval membership |x| <= B with the exact endpoint rule
bool in_interval_core(const NumberField& field, const LatticePoint& p) {
    const double B = 1.0 / (field.beta - 1.0);
    double v = std::abs(field.real_value(p));
    if (v < B - 1e-9) return true;
    if (v > B + 1e-9) return false;
    LatticePoint w = field.beta_poly_times({-1, 1}, p);  // (beta-1) p
    return field.value_equals(w, 1, 1) || field.value_equals(w, -1, 1) || v <= B;
}

}  // namespace

DiscreteMeasure restricted_measure(const NumberField& field, const std::vector<LatticePoint>& V,
                                   const SpectralData& spec) {
    if (!field.pisot()) throw NotPisot("restricted measure requires a Pisot field");
    const double B = 1.0 / (field.beta - 1.0);
    DiscreteMeasure m;
    m.lo = -B;
    m.hi = B;
    double total = 0;
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t j = 0; j < V.size(); ++j) {
        if (!in_interval_core(field, V[j])) continue;  // margin states sit outside I_beta
        double mass = spec.W[j];
        if (mass <= 0) continue;
        atoms.push_back({field.real_value(V[j]), mass});
        total += mass;
    }
    if (total <= 0) throw ConvergenceFailure("restricted measure has no mass");
    std::sort(atoms.begin(), atoms.end());
    for (auto& [p, w] : atoms) w /= total;
    m.atoms = std::move(atoms);
    return m;
}

int g_beta(const NumberField& field, double x) {
    const double B = 1.0 / (field.beta - 1.0);
    if (std::abs(x) > B + 1e-9) throw OutOfWindow("g_beta argument outside I_beta");
    auto chi = [&](double t) { return std::abs(t) <= B + 1e-9 ? 1 : 0; };
    double bx = field.beta * x;
    return chi(bx - 1) + 2 * chi(bx) + chi(bx + 1);
}

double g_beta_integral(const NumberField& field) {
    // g(x) = sum of indicators chi_{I}(beta x + e); each term integrates to
    // |I cap (I - e)/beta| / |I|; closed form.
    const double B = 1.0 / (field.beta - 1.0);
    double total = 0;
    for (int e = -1; e <= 1; ++e) {
        double lo = std::max(-B, (-B - e) / field.beta);
        double hi = std::min(B, (B - e) / field.beta);
        double len = std::max(0.0, hi - lo);
        total += (e == 0 ? 2.0 : 1.0) * len;
    }
    return total / (2 * B);
}

RowsumIdentity rowsum_identity(const NumberField& field, const std::vector<LatticePoint>& V,
                               const SpectralData& spec) {
    RowsumIdentity id;
    id.lhs = spec.lambda;
    double total = 0, acc = 0;
    for (std::size_t j = 0; j < V.size(); ++j) {
        if (!in_interval_core(field, V[j])) continue;
        double mass = spec.W[j];
        total += mass;
        acc += mass * g_beta(field, field.real_value(V[j]));
    }
    id.rhs = acc / total;
    id.residual = std::abs(id.lhs - id.rhs);
    return id;
}

double wasserstein1(const DiscreteMeasure& m, double lo, double hi) {
    // int |F_m(t) - F_ref(t)| dt with F_ref linear on [lo, hi]
    const double len = hi - lo;
    double total = 0, cum = 0;
    std::vector<double> xs{lo};
    for (auto& [p, w] : m.atoms) xs.push_back(p);
    xs.push_back(hi);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (i > 0) cum += m.atoms[i - 1].second;
        double a = std::max(lo, xs[i]), b = std::min(hi, xs[i + 1]);
        if (b <= a) continue;
        double fa = cum - (a - lo) / len;
        double fb = cum - (b - lo) / len;
        if (fa * fb >= 0) {
            total += 0.5 * (std::abs(fa) + std::abs(fb)) * (b - a);
        } else {
            double t = a + fa / (fa - fb) * (b - a);
            total += 0.5 * std::abs(fa) * (t - a) + 0.5 * std::abs(fb) * (b - t);
        }
    }
    return total;
}

const std::vector<std::string>& table1_polynomials() {
    static const std::vector<std::string> rows = {
        "x^3-x^2-x-1",
        "x^3-x^2-1",
        "x^3-x-1",
        "x^4-x^3-x^2-x-1",
        "x^4-x^3-1",
        "x^5-x^4-x^3-x^2-x-1",
        "x^5-x^4-x^3-x^2-1",
        "x^5-x^4-x^3-x^2+1",
        "x^5-x^4-x^3-1",
        "x^5-x^4-x^3-x-1",
        "x^5-x^4-x^3+x^2-1",
        "x^5-x^4-x^2-1",
        "x^5-x^3-x^2-x-1",
    };
    return rows;
}

namespace {

DimensionReport run_row(const std::string& poly, const Table1Options& opts) {
    DimensionReport rep;
    rep.polynomial = poly;
    NumberField field = analyze_field(parse_polynomial(poly));
    if (!field.pisot()) throw NotPisot(poly + " is not Pisot");
    rep.beta = field.beta;

    std::vector<LatticePoint> V = compute_V_interval(field, opts.margin);
    rep.matrix_size = static_cast<int>(V.size());
    TransitionMatrix M0 = build_M0_pisot(V, field);
    SpectralData spec = make_spectral_data(M0, opts.tol);
    rep.lambda = spec.lambda;
    rep.entropy_lb = std::log(4.0) - std::log(spec.lambda);
    rep.bound = std::min(1.0, rep.entropy_lb / std::log(field.beta));

    DiscreteMeasure m = restricted_measure(field, V, spec);
    rep.w1_native = wasserstein1(m, m.lo, m.hi);
    DiscreteMeasure resc = m;
    const double B = 1.0 / (field.beta - 1.0);
    for (auto& [p, w] : resc.atoms) p /= B;
    resc.lo = -1;
    resc.hi = 1;
    rep.w1 = wasserstein1(resc, -1.0, 1.0);
    return rep;
}

}  // namespace

std::vector<DimensionReport> table1_pipeline(const std::vector<std::string>& polynomials,
                                             const Table1Options& opts) {
    std::vector<DimensionReport> out(polynomials.size());
    int threads = std::max(1, opts.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < polynomials.size(); ++i) {
            try {
                out[i] = run_row(polynomials[i], opts);
            } catch (const std::exception& e) {
                out[i].polynomial = polynomials[i] + "  [error: " + std::string(e.what()) + "]";
            }
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::string> errors(polynomials.size());
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= polynomials.size()) return;
                try {
                    out[i] = run_row(polynomials[i], opts);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < polynomials.size(); ++i)
        if (!errors[i].empty() && out[i].matrix_size == 0) {
            out[i].polynomial = polynomials[i] + "  [error: " + errors[i] + "]";
        }
    return out;
}

}  // namespace spectra
