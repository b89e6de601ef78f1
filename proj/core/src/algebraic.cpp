#include "spectra/algebraic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace spectra {

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r(a);
    for (int k = 0; k < r.deg(); ++k) r.z[k] = checked_add(r.z[k], b.z[k]);
    return r;
}

LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r(a);
    for (int k = 0; k < r.deg(); ++k) r.z[k] = checked_add(r.z[k], -b.z[k]);
    return r;
}

std::string MinimalPolynomial::text() const {
    std::ostringstream os;
    int d = degree();
    bool first = true;
    for (int i = 0; i <= d; ++i) {
        Int c = coeffs[i];
        if (c == 0) continue;
        int e = d - i;
        if (!first) os << (c > 0 ? "+" : "-");
        else if (c < 0) os << "-";
        Int a = std::llabs(c);
        if (a != 1 || e == 0) os << a;
        if (e >= 1) os << "x";
        if (e >= 2) os << "^" << e;
        first = false;
    }
    return os.str();
}

namespace {

MinimalPolynomial from_coeffs(std::vector<Int> c) {
    if (c.size() < 3) throw ParseError("degree must be at least 2");
    if (c.front() != 1) throw NotMonic("leading coefficient must be 1");
    if (c.back() != 1 && c.back() != -1)
        throw BadConstantTerm("constant coefficient must be +1 or -1");
    return MinimalPolynomial{std::move(c)};
}

// Exact division check: does monic g divide monic p over Z?
bool divides(const std::vector<Int>& p, const std::vector<Int>& g) {
    std::vector<Int> r = p;
    int dp = static_cast<int>(p.size()) - 1, dg = static_cast<int>(g.size()) - 1;
    for (int i = 0; i + dg <= dp; ++i) {
        Int q = r[i];  // g monic
        if (q == 0) continue;
        for (int j = 0; j <= dg; ++j) r[i + j] -= q * g[j];
    }
    for (int i = dp - dg + 1; i <= dp; ++i)
        if (r[i] != 0) return false;
    return true;
}

void check_irreducible(const std::vector<Int>& p) {
    int d = static_cast<int>(p.size()) - 1;
    // Trial factorization by monic integer polynomials of degree <= d/2 with
    // unit constant term (the only possible factors of a monic, |a_0| = 1 poly).
    const Int CB = 8;
    for (int dg = 1; dg <= d / 2; ++dg) {
        std::vector<Int> g(dg + 1, 0);
        g[0] = 1;
        std::vector<Int> mid(std::max(0, dg - 1), -CB);
        for (Int last : {Int(-1), Int(1)}) {
            g[dg] = last;
            if (dg == 1) {
                if (divides(p, g)) throw NotIrreducible("polynomial has factor " +
                                                        MinimalPolynomial{g}.text());
                continue;
            }
            std::fill(mid.begin(), mid.end(), -CB);
            while (true) {
                for (int k = 0; k < dg - 1; ++k) g[1 + k] = mid[k];
                if (divides(p, g))
                    throw NotIrreducible("polynomial has factor " + MinimalPolynomial{g}.text());
                int k = 0;
                while (k < dg - 1 && mid[k] == CB) { mid[k] = -CB; ++k; }
                if (k == dg - 1) break;
                ++mid[k];
            }
        }
    }
}

struct Rat {
    __int128 n = 0, d = 1;
    void reduce() {
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
    }
    Rat operator+(const Rat& o) const { Rat r{n * o.d + o.n * d, d * o.d}; r.reduce(); return r; }
    Rat operator-(const Rat& o) const { Rat r{n * o.d - o.n * d, d * o.d}; r.reduce(); return r; }
    Rat operator*(const Rat& o) const { Rat r{n * o.n, d * o.d}; r.reduce(); return r; }
    Rat operator/(const Rat& o) const { Rat r{n * o.d, d * o.n}; r.reduce(); return r; }
    bool zero() const { return n == 0; }
};

// Exact inverse of an integer matrix with |det| = 1 via rational elimination.
std::vector<std::vector<Int>> exact_unimodular_inverse(const std::vector<std::vector<Int>>& M) {
    int n = static_cast<int>(M.size());
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = Rat{M[i][j], 1};
        a[i][n + i] = Rat{1, 1};
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a[r][col].zero()) { piv = r; break; }
        if (piv < 0) throw IntegerOverflow("companion matrix is singular");
        std::swap(a[col], a[piv]);
        Rat p = a[col][col];
        for (int j = 0; j < 2 * n; ++j) a[col][j] = a[col][j] / p;
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col].zero()) continue;
            Rat f = a[r][col];
            for (int j = 0; j < 2 * n; ++j) a[r][j] = a[r][j] - f * a[col][j];
        }
    }
    std::vector<std::vector<Int>> inv(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat v = a[i][n + j];
            if (v.d != 1) throw IntegerOverflow("companion inverse is not integral");
            inv[i][j] = static_cast<Int>(v.n);
        }
    return inv;
}

std::vector<Int> mat_vec(const std::vector<std::vector<Int>>& M, const std::vector<Int>& v) {
    int n = static_cast<int>(v.size());
    std::vector<Int> r(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (M[i][j] != 0) r[i] = checked_add(r[i], checked_mul(M[i][j], v[j]));
    return r;
}

}  // namespace

MinimalPolynomial parse_polynomial(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty polynomial");

    if (s.find(',') != std::string::npos || s.find('x') == std::string::npos) {
        // coefficient list, leading first
        std::vector<Int> c;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) throw ParseError("empty coefficient in list");
            try {
                std::size_t pos = 0;
                long long v = std::stoll(tok, &pos);
                if (pos != tok.size()) throw ParseError("bad coefficient '" + tok + "'");
                c.push_back(v);
            } catch (const std::invalid_argument&) {
                throw ParseError("bad coefficient '" + tok + "'");
            } catch (const std::out_of_range&) {
                throw ParseError("coefficient out of range '" + tok + "'");
            }
        }
        auto p = from_coeffs(std::move(c));
        check_irreducible(p.coeffs);
        return p;
    }

    // monomial sum grammar: [+-] [int] [x [^ int]]
    std::size_t i = 0;
    const std::size_t n = s.size();
    std::vector<Int> acc;  // acc[e] = coefficient of x^e
    auto bump = [&](int e, Int v) {
        if (e >= static_cast<int>(acc.size())) acc.resize(e + 1, 0);
        acc[e] += v;
    };
    while (i < n) {
        Int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        if (i >= n) throw ParseError("dangling sign");
        Int coef = 1;
        bool saw_digits = false;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            coef = 0;
            while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
                coef = coef * 10 + (s[i] - '0');
                ++i;
            }
            saw_digits = true;
        }
        int expo = 0;
        if (i < n && s[i] == 'x') {
            ++i;
            expo = 1;
            if (i < n && s[i] == '^') {
                ++i;
                if (i >= n || !std::isdigit(static_cast<unsigned char>(s[i])))
                    throw ParseError("bad exponent");
                expo = 0;
                while (i < n && std::isdigit(static_cast<unsigned char>(s[i])))
                    expo = expo * 10 + (s[i++] - '0');
            }
        } else if (!saw_digits) {
            throw ParseError(std::string("unexpected character '") + s[i] + "'");
        }
        bump(expo, sign * coef);
    }
    std::vector<Int> c(acc.rbegin(), acc.rend());
    while (c.size() > 1 && c.front() == 0) c.erase(c.begin());
    auto p = from_coeffs(std::move(c));
    check_irreducible(p.coeffs);
    return p;
}

LatticePoint NumberField::apply_T(int i, const LatticePoint& x) const {
    LatticePoint r(mat_vec(companion, x.z));
    r.z[0] = checked_add(r.z[0], i);
    return r;
}

LatticePoint NumberField::apply_T_inverse(int i, const LatticePoint& x) const {
    std::vector<Int> v = x.z;
    v[0] = checked_add(v[0], -static_cast<Int>(i));
    return LatticePoint(mat_vec(companion_inv, v));
}

LatticePoint NumberField::beta_poly_times(const std::vector<Int>& a, const LatticePoint& x) const {
    // Horner: ((a_m x)*beta + a_{m-1} x)*beta + ...
    int m = static_cast<int>(a.size()) - 1;
    LatticePoint acc = LatticePoint::zero(degree());
    for (int k = m; k >= 0; --k) {
        acc = LatticePoint(mat_vec(companion, acc.z));
        for (int j = 0; j < degree(); ++j)
            acc.z[j] = checked_add(acc.z[j], checked_mul(a[k], x.z[j]));
    }
    return acc;
}

LatticePoint NumberField::constant(Int c) const {
    LatticePoint p = LatticePoint::zero(degree());
    p.z[0] = c;
    return p;
}

std::vector<Complex> NumberField::embed(const LatticePoint& x) const {
    std::vector<Complex> out(num_places());
    for (int j = 0; j < num_places(); ++j) {
        Complex v = 0;
        for (int k = 0; k < degree(); ++k)
            if (x.z[k] != 0) v += static_cast<double>(x.z[k]) * place_powers[j][k];
        out[j] = v;
    }
    return out;
}

double NumberField::real_value(const LatticePoint& x) const {
    double v = 0;
    for (int k = 0; k < degree(); ++k)
        if (x.z[k] != 0) v += static_cast<double>(x.z[k]) * place_powers[0][k].real();
    return v;
}

std::vector<double> NumberField::box_radii(double R) const {
    std::vector<double> out(num_places());
    for (int j = 0; j < num_places(); ++j)
        out[j] = R / std::abs(std::abs(places[j].root) - 1.0);
    return out;
}

double NumberField::attractor_radius(int place) const {
    return 1.0 / (1.0 - std::abs(places[place].root));
}

bool NumberField::value_equals(const LatticePoint& x, Int num, Int den) const {
    // value(x) = num/den  <=>  den*x - num*1 = 0 (any embedding is injective)
    for (int k = 1; k < degree(); ++k)
        if (checked_mul(den, x.z[k]) != 0) return false;
    return checked_mul(den, x.z[0]) == num;
}

bool NumberField::place_value_equals(const LatticePoint& x, int /*place*/, Int num, Int den) const {
    return value_equals(x, num, den);
}

std::optional<LatticePoint> NumberField::interval_endpoint() const {
    // solve (beta - 1) * w = 1 exactly; integral iff beta-1 is a unit
    int n = degree();
    std::vector<std::vector<Int>> A(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = companion[i][j] - (i == j ? 1 : 0);
    // rational solve A w = e0
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = Rat{A[i][j], 1};
        a[i][n] = Rat{i == 0 ? 1 : 0, 1};
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a[r][col].zero()) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        std::swap(a[col], a[piv]);
        Rat p = a[col][col];
        for (int j = 0; j <= n; ++j) a[col][j] = a[col][j] / p;
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col].zero()) continue;
            Rat f = a[r][col];
            for (int j = 0; j <= n; ++j) a[r][j] = a[r][j] - f * a[col][j];
        }
    }
    LatticePoint w = LatticePoint::zero(n);
    for (int i = 0; i < n; ++i) {
        if (a[i][n].d != 1) return std::nullopt;
        w.z[i] = static_cast<Int>(a[i][n].n);
    }
    return w;
}

BoxTest in_box_rational(const NumberField& field, const LatticePoint& x, Int Rnum, Int Rden,
                        bool closed, double band) {
    (void)closed;
    double R = static_cast<double>(Rnum) / static_cast<double>(Rden);
    auto e = field.embed(x);
    auto radii = field.box_radii(R);
    for (int j = 0; j < field.num_places(); ++j) {
        double a = std::abs(e[j]);
        if (a < radii[j] - band) continue;
        if (a > radii[j] + band) return {BoxTest::Outside, j};
        // band hit: try an exact resolution at real places
        const Place& pl = field.places[j];
        if (pl.real) {
            // multiplier u(beta) with sigma_j(u) = ||beta_j| - 1|
            std::vector<Int> u;
            double r = pl.root.real();
            if (r > 1)       u = {-1, 1};   // beta_j - 1
            else if (r < -1) u = {-1, -1};  // -beta_j - 1
            else if (r >= 0) u = {1, -1};   // 1 - beta_j
            else             u = {1, 1};    // 1 + beta_j
            LatticePoint w = field.beta_poly_times(u, x);
            // boundary iff sigma_j(w) = +-R, i.e. Rden*w -+ Rnum = 0
            bool plus = field.value_equals(w, Rnum, Rden);
            bool minus = field.value_equals(w, -Rnum, Rden);
            if (plus || minus) return {BoxTest::Boundary, j};
            // genuinely near but not on the boundary: decide by the float sign
            if (std::abs(a - radii[j]) > 1e-13 * std::max(1.0, radii[j]))
                return a < radii[j] ? BoxTest{BoxTest::Inside, j} : BoxTest{BoxTest::Outside, j};
            throw BoundaryAmbiguous("point within band of box face at place " + std::to_string(j));
        }
        throw BoundaryAmbiguous("point within band of box face at complex place " +
                                std::to_string(j));
    }
    return {BoxTest::Inside, -1};
}

bool in_box(const NumberField& field, const LatticePoint& x, double R, bool closed, double band) {
    // Represent R as a small rational when possible so boundary hits resolve exactly.
    Int num = 0, den = 1;
    for (Int d : {1, 2, 4, 8, 10, 100, 1000}) {
        double scaled = R * static_cast<double>(d);
        if (std::abs(scaled - std::llround(scaled)) < 1e-12) {
            num = std::llround(scaled);
            den = d;
            break;
        }
    }
    if (num == 0 && R != 0) { num = std::llround(R * 1e6); den = 1000000; }
    BoxTest t = in_box_rational(field, x, num, den, closed, band);
    if (t.result == BoxTest::Inside) return true;
    if (t.result == BoxTest::Boundary) return closed;
    return false;
}

NumberField analyze_field(const MinimalPolynomial& p, double root_tol) {
    if (root_tol <= 0) throw ParseError("root tolerance must be positive");
    const int d = p.degree();
    NumberField f;
    f.minpoly = p;

    // companion action of multiplication by beta
    f.companion.assign(d, std::vector<Int>(d, 0));
    for (int k = 0; k + 1 < d; ++k) f.companion[k + 1][k] = 1;
    for (int k = 0; k < d; ++k) f.companion[k][d - 1] = -p.coeffs[d - k];
    f.companion_inv = exact_unimodular_inverse(f.companion);

    // roots: eigenvalues of the (transposed classical) companion matrix
    Eigen::MatrixXd C(d, d);
    C.setZero();
    for (int k = 0; k + 1 < d; ++k) C(k + 1, k) = 1.0;
    for (int k = 0; k < d; ++k) C(k, d - 1) = static_cast<double>(-p.coeffs[d - k]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("eigensolver failed");
    std::vector<Complex> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);

    auto poly_at = [&](Complex x) {
        Complex v = 0;
        for (Int c : p.coeffs) v = v * x + static_cast<double>(c);
        return v;
    };
    auto dpoly_at = [&](Complex x) {
        Complex v = 0;
        for (int i = 0; i < d; ++i)
            v = v * x + static_cast<double>(p.coeffs[i]) * static_cast<double>(d - i);
        return v;
    };
    for (auto& r : roots) {
        for (int it = 0; it < 100; ++it) {
            Complex fv = poly_at(r), dv = dpoly_at(r);
            if (std::abs(dv) == 0.0) break;
            Complex step = fv / dv;
            r -= step;
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r))) break;
        }
        if (std::abs(r.imag()) < 1e-9) {
            // polish on the real line so stored real roots are exactly real
            double x = r.real();
            for (int it = 0; it < 100; ++it) {
                double fv = poly_at(Complex(x, 0)).real();
                double dv = dpoly_at(Complex(x, 0)).real();
                if (dv == 0) break;
                double step = fv / dv;
                x -= step;
                if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
            }
            r = Complex(x, 0);
        }
    }
    for (const auto& r : roots)
        if (std::abs(poly_at(r)) > 1e-10)
            throw ConvergenceFailure("root residual above 1e-10");

    // distinguished real root in (1,2)
    int beta_idx = -1;
    for (int i = 0; i < d; ++i)
        if (std::abs(roots[i].imag()) < 1e-9 && roots[i].real() > 1.0 && roots[i].real() < 2.0)
            beta_idx = i;
    if (beta_idx < 0) throw NoRootInRange("no real root in (1,2)");
    f.beta = roots[beta_idx].real();

    // hyperbolicity
    for (const auto& r : roots)
        if (std::abs(std::abs(r) - 1.0) < 1e-9)
            throw NonHyperbolic("a Galois conjugate lies within 1e-9 of the unit circle");

    // collapse conjugate pairs into places
    std::vector<Place> expanding, contracting;
    for (int i = 0; i < d; ++i) {
        if (i == beta_idx) continue;
        const Complex r = roots[i];
        if (std::abs(r.imag()) < 1e-9) {
            Place pl{Complex(r.real(), 0.0), true, std::abs(r) > 1.0};
            (pl.expanding ? expanding : contracting).push_back(pl);
        } else if (r.imag() > 0) {
            Place pl{r, false, std::abs(r) > 1.0};
            (pl.expanding ? expanding : contracting).push_back(pl);
        }
    }
    auto by_modulus = [](const Place& a, const Place& b) {
        double ma = std::abs(a.root), mb = std::abs(b.root);
        if (std::abs(ma - mb) > 1e-12) return ma > mb;
        return std::arg(a.root) < std::arg(b.root);
    };
    std::sort(expanding.begin(), expanding.end(), by_modulus);
    std::sort(contracting.begin(), contracting.end(), by_modulus);

    f.places.push_back(Place{Complex(f.beta, 0.0), true, true});
    for (auto& pl : expanding) f.places.push_back(pl);
    for (auto& pl : contracting) f.places.push_back(pl);
    f.classification = expanding.empty() ? FieldClass::Pisot : FieldClass::HyperbolicNonPisot;

    f.place_powers.assign(f.places.size(), std::vector<Complex>(d));
    for (std::size_t j = 0; j < f.places.size(); ++j) {
        Complex pw = 1;
        for (int k = 0; k < d; ++k) {
            f.place_powers[j][k] = pw;
            pw *= f.places[j].root;
        }
    }
    return f;
}

}  // namespace spectra
