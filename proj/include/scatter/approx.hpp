#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "solvers.hpp"

namespace scatter {

// Approximation target: a named builtin, an exact polynomial (passed through
// the polynomial stage verbatim), or a sampled table with linear interpolation.
struct Target {
    enum class Kind { builtin, polynomial, table };
    Kind kind = Kind::builtin;
    std::string name = "sin";
    Polynomial poly;
    std::vector<std::pair<double, double>> table; // sorted by x

    static Target builtin(const std::string& n) {
        Target t;
        t.kind = Kind::builtin;
        if (n != "sin" && n != "cos" && n != "exp" && n != "abs" && n != "runge")
            fail(errc::config, "unknown builtin target: " + n);
        t.name = n;
        return t;
    }
    static Target polynomial_target(Polynomial p) {
        Target t;
        t.kind = Kind::polynomial;
        t.poly = std::move(p);
        return t;
    }
    static Target table_target(std::vector<std::pair<double, double>> rows) {
        require(rows.size() >= 2, errc::config, "table target needs at least two samples");
        for (size_t i = 1; i < rows.size(); ++i)
            require(rows[i - 1].first < rows[i].first, errc::config,
                    "table target must be strictly increasing in x");
        Target t;
        t.kind = Kind::table;
        t.table = std::move(rows);
        return t;
    }

    bool is_polynomial() const { return kind == Kind::polynomial; }

    double eval(double x) const {
        switch (kind) {
        case Kind::builtin:
            if (name == "sin") return std::sin(x);
            if (name == "cos") return std::cos(x);
            if (name == "exp") return std::exp(x);
            if (name == "abs") return std::fabs(x);
            return 1.0 / (1.0 + 25.0 * x * x); // runge
        case Kind::polynomial: {
            return poly.eval(Real::of(x, 128)).to_double();
        }
        case Kind::table: {
            if (x <= table.front().first) return table.front().second;
            if (x >= table.back().first) return table.back().second;
            size_t hi = 1;
            while (table[hi].first < x) ++hi;
            auto [x0, y0] = table[hi - 1];
            auto [x1, y1] = table[hi];
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
        }
        return 0;
    }
};

// Chebyshev polynomials T_k with exact integer coefficients.
inline std::vector<Polynomial> chebyshev_list(size_t n) {
    std::vector<Polynomial> T;
    T.reserve(n + 1);
    T.push_back(Polynomial::constant(Rat(1)));
    if (n >= 1) T.push_back(Polynomial::monomial(Rat(1), 1));
    Polynomial two_x = Polynomial::monomial(Rat(2), 1);
    for (size_t k = 2; k <= n; ++k) T.push_back(two_x * T[k - 1] - T[k - 2]);
    return T;
}

struct ChebResult {
    Polynomial p;        // exact rational coefficients in the monomial basis
    double achieved = 0; // measured sup error on the assessment grid
    int degree = 0;
};

// Adaptive Chebyshev-root interpolation on [a,b]; the interpolant is converted
// exactly (dyadic doubles -> rationals -> integer T_k recurrence -> affine
// composition) so everything downstream stays exact. Polynomial targets pass
// through verbatim with zero error.
inline ChebResult cheb_approx(const Target& f, const Rat& a, const Rat& b, double tol,
                              int degree_cap = 64) {
    require(a < b, errc::config, "empty interval");
    require(tol > 0, errc::config, "tolerance must be positive");
    if (f.is_polynomial()) return {f.poly, 0.0, std::max(f.poly.degree(), 0)};

    double ad = rat_double(a), bd = rat_double(b);
    const int assess_n = 257;
    auto assess = [&](const Polynomial& p) {
        double worst = 0;
        for (int i = 0; i < assess_n; ++i) {
            double x = ad + (bd - ad) * i / (assess_n - 1);
            double err = std::fabs(f.eval(x) - p.eval(Real::of(x, 128)).to_double());
            if (err > worst) worst = err;
        }
        return worst;
    };

    // exact affine map t = alpha*x + beta from [a,b] onto [-1,1]
    Rat alpha = Rat(2) / (b - a);
    Rat beta = -(a + b) / (b - a);

    double best = -1;
    for (int d = 0; d <= degree_cap; ++d) {
        int n = d + 1; // Chebyshev roots of T_n
        std::vector<double> fv(n);
        for (int i = 0; i < n; ++i) {
            double theta = M_PI * (i + 0.5) / n;
            double t = std::cos(theta);
            double x = ad + (bd - ad) * (t + 1) / 2;
            fv[i] = f.eval(x);
        }
        std::vector<Rat> coef(n); // T_j coefficients, exact dyadic from doubles
        for (int j = 0; j < n; ++j) {
            double acc = 0;
            for (int i = 0; i < n; ++i) acc += fv[i] * std::cos(j * M_PI * (i + 0.5) / n);
            double cj = acc * (j == 0 ? 1.0 : 2.0) / n;
            Rat rj;
            mpq_set_d(rj.get_mpq_t(), cj);
            coef[j] = rj;
        }
        std::vector<Polynomial> T = chebyshev_list(static_cast<size_t>(d));
        Polynomial in_t;
        for (int j = 0; j < n; ++j) in_t += coef[j] * T[static_cast<size_t>(j)];
        Polynomial p = in_t.compose_affine(alpha, beta);
        double err = assess(p);
        if (best < 0 || err < best) best = err;
        if (err < tol) return {std::move(p), err, d};
    }
    throw error(errc::budget, "degree cap " + std::to_string(degree_cap) +
                                  " reached; best error " + std::to_string(best) +
                                  " above tolerance " + std::to_string(tol))
        .with_detail(best);
}

// Exact change of basis: coefficients d such that p = sum_m d[m] A_{K+m},
// by back-substitution on the triangular degree structure deg A_{K+m} = m.
inline std::vector<Rat> monomial_to_basis(const Polynomial& p, const ExpansionModel& model) {
    if (p.is_zero()) return {};
    int deg = p.degree();
    std::vector<Rat> d(static_cast<size_t>(deg) + 1);
    Polynomial work = p;
    for (int m = deg; m >= 0; --m) {
        unsigned long k = model.K + static_cast<unsigned long>(m);
        Polynomial Ak = model.A(k);
        require(Ak.degree() == m && Ak.leading() != 0, errc::internal,
                "degenerate basis element at index " + std::to_string(k) +
                    " (misclassified offset)");
        Rat dm = work.coeff(static_cast<size_t>(m)) / Ak.leading();
        d[static_cast<size_t>(m)] = dm;
        if (dm != 0) work -= dm * Ak;
        require(work.degree() < m, errc::internal, "back-substitution failed to eliminate degree");
    }
    require(work.is_zero(), errc::internal, "change of basis left a remainder");
    return d;
}

// Finite translate combination s(x) = sum_j coeff_j * phi(x - node_j).
struct Combination {
    KernelSpec kernel;
    std::vector<std::pair<Rat, Real>> terms; // (node, coefficient), nodes strictly increasing
    mpfr_prec_t precision_bits = 64;
};

inline Real eval_combination(const Combination& s, const Real& x) {
    Real acc = Real::of(0L, std::max(x.precision(), s.precision_bits));
    for (const auto& [node, coef] : s.terms) {
        Real t = x - Real::of(node, s.precision_bits);
        acc += coef * kernel_eval(s.kernel, t);
    }
    return acc;
}

struct ReproduceResult {
    Combination comb;
    double solver_residual = 0; // 0 for the exact Vandermonde path
    double growth_constant = 0; // alternant growth-law constant (log path)
    mpfr_prec_t bits_used = 0;
};

// Builds the translate combination whose expansion isolates basis index
// `index` (absolute): power families use index+1 nodes through the exact
// Vandermonde solution; log families use the 2(index-L)+1-node mixed
// alternant with L = model.K.
inline ReproduceResult reproduce_basis_poly(const ExpansionModel& model, const DoublingSequence& Y,
                                            unsigned long index, mpfr_prec_t bits) {
    require(model.sign_ok(Y.sign), errc::config,
            std::string("kernel requires a ") +
                (model.sign == SignReq::negative ? "negative" : "positive") +
                " doubling sequence");
    ReproduceResult out;
    out.comb.kernel = model.kernel;
    if (!model.F_has_log) {
        size_t N = index + 1;
        require(Y.size() >= N, errc::config,
                "need " + std::to_string(N) + " nodes for basis index " + std::to_string(index));
        std::vector<Rat> nodes(Y.nodes.begin(), Y.nodes.begin() + static_cast<long>(N));
        TranslateCoeffs tc = translate_coeffs(nodes, model, N, bits);
        out.comb.precision_bits = bits;
        out.bits_used = bits;
        for (size_t i = 0; i < N; ++i) out.comb.terms.emplace_back(nodes[i], tc.values[i]);
    } else {
        unsigned long L = model.K;
        require(index >= L, errc::config, "log-family basis starts at index " + std::to_string(L));
        size_t n = 2 * (index - L) + 1;
        require(Y.size() >= n, errc::config,
                "need " + std::to_string(n) + " nodes for basis index " + std::to_string(index));
        require(Y.sign == Sign::positive, errc::config, "log families need positive nodes");
        std::vector<Rat> nodes(Y.nodes.begin(), Y.nodes.begin() + static_cast<long>(n));
        AlternantSolution sol =
            mixed_alternant_solve(nodes, static_cast<long>(L) + 1, static_cast<long>(index),
                                  static_cast<long>(L), static_cast<long>(index), bits);
        out.comb.precision_bits = sol.precision_bits;
        out.bits_used = sol.precision_bits;
        out.solver_residual = sol.residual.to_double();
        out.growth_constant = sol.growth_constant;
        for (size_t i = 0; i < n; ++i) out.comb.terms.emplace_back(nodes[i], sol.a_tilde[i]);
    }
    return out;
}

inline std::vector<Rat> make_grid(const Rat& a, const Rat& b, size_t n) {
    require(n >= 2, errc::config, "grid needs at least 2 points");
    std::vector<Rat> g;
    g.reserve(n);
    for (size_t i = 0; i < n; ++i)
        g.push_back(a + (b - a) * Rat(static_cast<long>(i)) / Rat(static_cast<long>(n - 1)));
    return g;
}

// sup over the grid of |s(x) - target(x)| in extended precision
inline double sup_error_vs_poly(const Combination& s, const Polynomial& target,
                                const std::vector<Rat>& grid, mpfr_prec_t bits) {
    Real worst = Real::of(0L, bits);
    for (const Rat& xq : grid) {
        Real x = Real::of(xq, bits);
        Real diff = (eval_combination(s, x) - Real::of(target.eval(xq), bits)).abs();
        if (diff > worst) worst = diff;
    }
    return worst.to_double();
}

struct SampleRow {
    double x = 0, f = 0, s = 0, abs_err = 0;
};

struct StageReport {
    unsigned long index = 0;     // absolute basis index recovered
    Rat d;                       // exact change-of-basis coefficient
    Rat y1;                      // first node magnitude used
    double raw_error = 0;        // sup |s_k - A_k| on the grid
    double weighted_error = 0;   // |d| * raw_error, compared against the budget
    double solver_residual = 0;
    double growth_constant = 0;
    size_t n_terms = 0;
    mpfr_prec_t bits_used = 0;
};

struct Certificate {
    Rat a, b;
    size_t grid_n = 0;
    double sup_error = 0;
    std::vector<std::pair<long, double>> lp_errors; // (p, error)
    double epsilon = 0;
    Rat y1_used;                 // largest first-node magnitude across stages
    mpfr_prec_t precision_bits = 0;
    int cheb_degree = -1;        // -1: polynomial passthrough
    double cheb_error = 0;
    std::vector<StageReport> stages;
    bool success = false;
    std::vector<SampleRow> samples; // written to CSV, not into the cert JSON
};

// Measured certificate of |f - s| on an equispaced grid: sup norm plus
// composite-trapezoid L^p norms, with the consistency bound
// L^p <= sup * (b-a)^{1/p} enforced.
inline Certificate certify(const Combination& s, const Target& f, const Rat& a, const Rat& b,
                           size_t grid_n, double epsilon, const std::vector<long>& ps = {1, 2}) {
    require(a < b, errc::config, "empty interval");
    Certificate cert;
    cert.a = a;
    cert.b = b;
    cert.grid_n = grid_n;
    cert.epsilon = epsilon;
    cert.precision_bits = s.precision_bits;
    std::vector<Rat> grid = make_grid(a, b, grid_n);
    cert.samples.reserve(grid_n);
    double sup = 0;
    for (const Rat& xq : grid) {
        SampleRow row;
        row.x = rat_double(xq);
        row.f = f.eval(row.x);
        row.s = eval_combination(s, Real::of(xq, s.precision_bits)).to_double();
        row.abs_err = std::fabs(row.f - row.s);
        if (row.abs_err > sup) sup = row.abs_err;
        cert.samples.push_back(row);
    }
    cert.sup_error = sup;
    double h = (rat_double(b) - rat_double(a)) / static_cast<double>(grid_n - 1);
    for (long p : ps) {
        require(p >= 1, errc::config, "L^p needs p >= 1");
        double acc = 0;
        for (size_t i = 0; i < grid_n; ++i) {
            double w = (i == 0 || i == grid_n - 1) ? h / 2 : h;
            acc += w * std::pow(cert.samples[i].abs_err, static_cast<double>(p));
        }
        double lp = std::pow(acc, 1.0 / static_cast<double>(p));
        double bound = sup * std::pow(rat_double(b) - rat_double(a), 1.0 / static_cast<double>(p));
        require(lp <= bound * (1 + 1e-9) + 1e-300, errc::internal,
                "Holder consistency violated on the certification grid");
        cert.lp_errors.emplace_back(p, lp);
    }
    cert.success = sup < epsilon;
    return cert;
}

struct ApproxOptions {
    size_t grid_n = 1001;
    mpfr_prec_t precision_bits = 256;
    int degree_cap = 64;
    std::vector<long> ps = {1, 2};
};

struct ApproxResult {
    Combination comb;
    Certificate cert;
};

// Full density pipeline: Chebyshev pre-approximation at eps/2, exact change of
// basis, then one translate-recovery stage per basis index under a shared
// eps/2 budget, doubling the extraction threshold until every stage fits.
inline ApproxResult approximate(const Target& f, const Rat& a, const Rat& b, double eps,
                                const KernelSpec& kernel, const Provider& provider,
                                const ApproxOptions& opts = {}) {
    require(eps > 0, errc::config, "epsilon must be positive");
    ExpansionModel model = classify_basis(kernel);
    Sign sign = model.sign == SignReq::negative ? Sign::negative : Sign::positive;

    ChebResult cheb = cheb_approx(f, a, b, eps / 2, opts.degree_cap);
    std::vector<Rat> d = monomial_to_basis(cheb.p, model);

    size_t n_active = 0;
    for (const Rat& di : d)
        if (di != 0) ++n_active;

    Combination total;
    total.kernel = kernel;
    total.precision_bits = opts.precision_bits;

    std::vector<StageReport> stages;
    Rat y1_used(0);
    if (n_active > 0) {
        double budget_each = eps / 2 / static_cast<double>(n_active);
        std::vector<Rat> grid = make_grid(a, b, opts.grid_n);
        // extraction floor keeps nodes clear of [a,b] and inside series domination
        Rat floor0 = Rat(8);
        Rat mag = rat_abs(a) > rat_abs(b) ? rat_abs(a) : rat_abs(b);
        if (4 * mag > floor0) floor0 = 4 * mag;
        if (4 * kernel.c > floor0) floor0 = 4 * kernel.c;
        Rat cap = Rat(Int(1) << 64);

        std::map<Rat, Real> merged;
        for (size_t m = 0; m < d.size(); ++m) {
            if (d[m] == 0) continue;
            unsigned long index = model.K + static_cast<unsigned long>(m);
            size_t needed = model.F_has_log ? 2 * (index - model.K) + 1
                                            : static_cast<size_t>(index) + 1;
            Polynomial Ak = model.A(index);
            double dmag = std::fabs(rat_double(d[m]));
            Rat M = floor0;
            for (;;) {
                DoublingSequence Y = extract_doubling(provider, sign, M, needed);
                ReproduceResult rr = reproduce_basis_poly(model, Y, index, opts.precision_bits);
                double raw = sup_error_vs_poly(rr.comb, Ak, grid, opts.precision_bits);
                double weighted = dmag * raw;
                if (weighted <= budget_each) {
                    StageReport st;
                    st.index = index;
                    st.d = d[m];
                    st.y1 = rat_abs(Y.nodes.front());
                    st.raw_error = raw;
                    st.weighted_error = weighted;
                    st.solver_residual = rr.solver_residual;
                    st.growth_constant = rr.growth_constant;
                    st.n_terms = rr.comb.terms.size();
                    st.bits_used = rr.bits_used;
                    stages.push_back(st);
                    if (st.y1 > y1_used) y1_used = st.y1;
                    Real dr = Real::of(d[m], opts.precision_bits);
                    for (const auto& [node, coef] : rr.comb.terms) {
                        auto it = merged.find(node);
                        if (it == merged.end())
                            merged.emplace(node, dr * coef);
                        else
                            it->second += dr * coef;
                    }
                    break;
                }
                M = 2 * M;
                if (M > cap)
                    throw error(errc::budget,
                                "extraction threshold cap 2^64 hit at basis index " +
                                    std::to_string(index) + "; weighted error " +
                                    std::to_string(weighted) + " above per-index budget " +
                                    std::to_string(budget_each))
                        .with_detail(weighted);
            }
        }
        for (auto& [node, coef] : merged) total.terms.emplace_back(node, coef);
    }

    Certificate cert = certify(total, f, a, b, opts.grid_n, eps, opts.ps);
    cert.cheb_degree = f.is_polynomial() ? -1 : cheb.degree;
    cert.cheb_error = cheb.achieved;
    cert.stages = std::move(stages);
    cert.y1_used = y1_used;
    return {std::move(total), std::move(cert)};
}

} // namespace scatter
