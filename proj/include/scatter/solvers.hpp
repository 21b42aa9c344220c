#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polybasis.hpp"

namespace scatter {

// Exact closed-form Cramer solution of the Vandermonde conditions
//   sum_i c_i y_i^{-k} = [k == N-1]  for k = 0..N-1
// over the first N nodes: c_i = y_i^{N-1} prod_{j != i} (1 - y_i/y_j)^{-1}.
inline std::vector<Rat> vandermonde_coeffs(const std::vector<Rat>& nodes, size_t N) {
    require(N >= 1, errc::config, "vandermonde size must be >= 1");
    require(nodes.size() >= N, errc::config, "not enough nodes for the requested size");
    for (size_t i = 0; i < N; ++i) {
        require(nodes[i] != 0, errc::config, "vandermonde nodes must be nonzero");
        for (size_t j = i + 1; j < N; ++j)
            require(nodes[i] != nodes[j], errc::singular,
                    "duplicate node " + nodes[i].get_str() + " in vandermonde system");
    }
    std::vector<Rat> c(N);
    for (size_t i = 0; i < N; ++i) {
        Rat prod(1);
        for (size_t j = 0; j < N; ++j) {
            if (j == i) continue;
            prod *= 1 - nodes[i] / nodes[j];
        }
        c[i] = rat_pow(nodes[i], static_cast<long>(N) - 1) / prod;
    }
    return c;
}

// Exact residual V c - e_N of the conditions above (all-zero when c is the
// Cramer solution).
inline std::vector<Rat> vandermonde_residual(const std::vector<Rat>& nodes,
                                             const std::vector<Rat>& c) {
    size_t N = c.size();
    require(nodes.size() >= N, errc::config, "node/coefficient size mismatch");
    std::vector<Rat> resid(N);
    for (size_t k = 0; k < N; ++k) {
        Rat row(0);
        for (size_t i = 0; i < N; ++i) row += c[i] * rat_pow(nodes[i], -static_cast<long>(k));
        resid[k] = row - (k == N - 1 ? Rat(1) : Rat(0));
    }
    return resid;
}

// Translate coefficients a~_i = c_i / F(y_i) for a power-family expansion.
// Exact when the F exponent is an integer; high-precision otherwise.
struct TranslateCoeffs {
    std::vector<Real> values;
    std::optional<std::vector<Rat>> exact; // present iff F(y) is rational
    mpfr_prec_t precision_bits = 0;
};

inline TranslateCoeffs translate_coeffs(const std::vector<Rat>& nodes, const ExpansionModel& model,
                                        size_t N, mpfr_prec_t bits) {
    require(!model.F_has_log, errc::config,
            "translate_coeffs applies to power families; log families use the alternant path");
    std::vector<Rat> c = vandermonde_coeffs(nodes, N);
    TranslateCoeffs out;
    out.precision_bits = bits;
    out.values.reserve(N);
    for (size_t i = 0; i < N; ++i)
        require(nodes[i] != 0, errc::config,
                "F vanishes at node 0; raise the extraction threshold");
    if (is_integer(model.F_exponent)) {
        std::vector<Rat> exact(N);
        long e = model.F_exponent.get_num().get_si();
        for (size_t i = 0; i < N; ++i) {
            exact[i] = c[i] / rat_pow(rat_abs(nodes[i]), e);
            out.values.push_back(Real::of(exact[i], bits));
        }
        out.exact = std::move(exact);
    } else {
        for (size_t i = 0; i < N; ++i)
            out.values.push_back(Real::of(c[i], bits) / eval_F(model, nodes[i], bits));
    }
    return out;
}

// max-norm of A x - b, computed at the highest precision present
inline Real residual_max(const std::vector<std::vector<Real>>& rows, const std::vector<Real>& x,
                         const std::vector<Real>& rhs) {
    require(rows.size() == rhs.size(), errc::config, "residual: row/rhs size mismatch");
    Real best = Real::of(0L, 2);
    for (size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == x.size(), errc::config, "residual: row/solution size mismatch");
        Real acc = Real::of(0L, x.empty() ? 64 : x[0].precision());
        for (size_t j = 0; j < x.size(); ++j) acc += rows[i][j] * x[j];
        Real r = (acc - rhs[i]).abs();
        if (r > best) best = r;
    }
    return best;
}

namespace detail {

// Gaussian elimination with partial pivoting; throws on an exactly-zero pivot.
inline std::vector<Real> solve_dense(std::vector<std::vector<Real>> M, std::vector<Real> b) {
    size_t n = M.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (M[r][col].abs() > M[piv][col].abs()) piv = r;
        if (M[piv][col].is_zero()) fail(errc::singular, "zero pivot in alternant elimination");
        if (piv != col) {
            std::swap(M[piv], M[col]);
            std::swap(b[piv], b[col]);
        }
        for (size_t r = col + 1; r < n; ++r) {
            if (M[r][col].is_zero()) continue;
            Real f = M[r][col] / M[col][col];
            for (size_t cc = col; cc < n; ++cc) M[r][cc] -= f * M[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<Real> x(n);
    for (size_t i = n; i-- > 0;) {
        Real acc = b[i];
        for (size_t j = i + 1; j < n; ++j) acc -= M[i][j] * x[j];
        x[i] = acc / M[i][i];
    }
    return x;
}

} // namespace detail

// Solution of a mixed power/log alternant system with certified residual.
struct AlternantSolution {
    std::vector<Rat> nodes;
    std::vector<Real> a_tilde;
    mpfr_prec_t precision_bits = 0; // precision that satisfied the residual policy
    Real residual;                  // max-norm, measured at twice the final precision
    double growth_constant = 0;     // max |a_i| / (y_i^N (ln y_i)^{N-1}), N = isolated index
};

// Rows: y^{-e} for e in [pow_lo, pow_hi], then y^{-e} ln y for e in
// [log_lo, log_hi]; right-hand side selects the last log row (the isolated
// coefficient index log_hi). Node count must match the row count. Solved
// after exact per-node pre-scaling by y^2; precision doubles until the
// residual passes 2^{-bits/2}, capped at `cap` bits.
inline AlternantSolution mixed_alternant_solve(const std::vector<Rat>& nodes, long pow_lo,
                                               long pow_hi, long log_lo, long log_hi,
                                               mpfr_prec_t bits, mpfr_prec_t cap = 4096) {
    size_t n_pow = pow_hi >= pow_lo ? static_cast<size_t>(pow_hi - pow_lo + 1) : 0;
    require(log_hi >= log_lo, errc::config, "alternant needs at least one log row");
    size_t n_log = static_cast<size_t>(log_hi - log_lo + 1);
    size_t n = n_pow + n_log;
    require(nodes.size() == n, errc::config,
            "alternant needs exactly " + std::to_string(n) + " nodes, got " +
                std::to_string(nodes.size()));
    require(bits >= 16, errc::config, "precision too small");
    std::string multiset;
    for (const Rat& y : nodes) {
        require(y > 1, errc::config, "alternant nodes must exceed 1 (ln must be positive)");
        multiset += (multiset.empty() ? "" : ", ") + y.get_str();
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            require(nodes[i] != nodes[j], errc::singular,
                    "singular alternant: duplicate nodes in {" + multiset + "}");

    // exact scaled powers y_j^{2-e} reused across retries
    std::vector<long> exps;
    exps.reserve(n);
    for (long e = pow_lo; e <= pow_hi; ++e) exps.push_back(e);
    for (long e = log_lo; e <= log_hi; ++e) exps.push_back(e);

    for (mpfr_prec_t p = bits;; p *= 2) {
        std::vector<Real> lns(n), x;
        for (size_t j = 0; j < n; ++j) lns[j] = Real::of(nodes[j], p).ln();
        std::vector<std::vector<Real>> M(n, std::vector<Real>(n));
        std::vector<Real> rhs(n, Real::of(0L, p));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Real entry = Real::of(rat_pow(nodes[j], 2 - exps[i]), p);
                if (i >= n_pow) entry *= lns[j];
                M[i][j] = std::move(entry);
            }
        rhs[n - 1] = Real::of(1L, p);
        std::vector<Real> b = detail::solve_dense(std::move(M), std::move(rhs));
        std::vector<Real> a(n);
        for (size_t j = 0; j < n; ++j) a[j] = b[j] * Real::of(nodes[j] * nodes[j], p);

        // certify against the unscaled system at doubled precision
        mpfr_prec_t pv = 2 * p;
        std::vector<std::vector<Real>> V(n, std::vector<Real>(n));
        std::vector<Real> vb(n, Real::of(0L, pv)), av(n);
        for (size_t j = 0; j < n; ++j) av[j] = Real::of(0L, pv) + a[j];
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Real entry = Real::of(rat_pow(nodes[j], -exps[i]), pv);
                if (i >= n_pow) entry *= Real::of(nodes[j], pv).ln();
                V[i][j] = std::move(entry);
            }
        vb[n - 1] = Real::of(1L, pv);
        Real resid = residual_max(V, av, vb);

        Real threshold = Real::of(2L, 64).pow_si(-static_cast<long>(p) / 2);
        if (resid <= threshold) {
            AlternantSolution out;
            out.nodes = nodes;
            out.a_tilde = std::move(a);
            out.precision_bits = p;
            out.residual = std::move(resid);
            // empirical constant of the growth law |a_i| <= C y_i^N (ln y_i)^{N-1}
            Real c = Real::of(0L, p);
            for (size_t j = 0; j < n; ++j) {
                Real y = Real::of(nodes[j], p);
                Real bound = y.pow_si(log_hi) * lns[j].pow_si(log_hi - 1);
                Real ratio = out.a_tilde[j].abs() / bound;
                if (ratio > c) c = ratio;
            }
            out.growth_constant = c.to_double();
            return out;
        }
        if (2 * p > cap)
            throw error(errc::precision,
                        "alternant residual " + resid.dec_str(6) + " still above threshold at " +
                            std::to_string(p) + " bits (cap " + std::to_string(cap) + ")")
                .with_detail(resid.to_double());
    }
}

// The logarithmic-kernel system: rows y^{-2}..y^{-N}, then y^{-1}ln y..y^{-N}ln y,
// isolating coefficient index N. Needs 2N-1 nodes; N = 1 degenerates to the
// single equation y^{-1} ln(y) a~ = 1.
inline AlternantSolution log_alternant_solve(const std::vector<Rat>& nodes, size_t N,
                                             mpfr_prec_t bits, mpfr_prec_t cap = 4096) {
    require(N >= 1, errc::config, "alternant block size must be >= 1");
    return mixed_alternant_solve(nodes, 2, static_cast<long>(N), 1, static_cast<long>(N), bits,
                                 cap);
}

} // namespace scatter
