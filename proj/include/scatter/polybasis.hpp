#pragma once

#include <utility>
#include <vector>

#include "kernels.hpp"
#include "polynomial.hpp"
#include "sequences.hpp"

namespace scatter {

// generalized binomial coefficient C(u, k) = u(u-1)...(u-k+1)/k!, exact
inline Rat gen_binomial(const Rat& u, unsigned long k) {
    Rat num(1);
    for (unsigned long i = 0; i < k; ++i) num *= u - Rat(static_cast<long>(i));
    return num / Rat(factorial(k));
}

// Expansion coefficients of (c + (x-y)^q)^r = |y|^{qr} * sum_k A_k(x) y^{-k}:
//   A_k(x) = sum_{j=0}^{floor(k/q)} (-1)^k C(r,j) C(qr-qj, k-qj) c^j x^{k-qj}
// For qr not a positive integer the degree is exactly k with leading
// coefficient (-1)^k C(qr,k); for qr a positive integer the degree drops to
// k - q*ceil(r) once k >= q*ceil(r).
inline Polynomial binomial_Ak(const KernelSpec& spec, unsigned long k) {
    require(spec.family == Family::binomial_power, errc::config,
            "binomial_Ak needs a binomial_power kernel");
    spec.validate();
    unsigned long q = static_cast<unsigned long>(spec.q);
    Rat qr = spec.qr();
    std::vector<Rat> coeffs(k + 1);
    Rat sign = k % 2 == 0 ? 1 : -1;
    for (unsigned long j = 0; j * q <= k; ++j) {
        Rat term = sign * gen_binomial(spec.r, j) *
                   gen_binomial(qr - Rat(static_cast<long>(q * j)), k - q * j) *
                   rat_pow(spec.c, static_cast<long>(j));
        coeffs[k - q * j] += term;
    }
    return Polynomial(std::move(coeffs));
}

// lhs = sum_{j=0}^{k} (-1)^j C(u,j),  rhs = (-1)^k C(u-1,k); they agree exactly
inline std::pair<Rat, Rat> sum_identity(const Rat& u, unsigned long k) {
    Rat lhs(0);
    for (unsigned long j = 0; j <= k; ++j)
        lhs += (j % 2 == 0 ? Rat(1) : Rat(-1)) * gen_binomial(u, j);
    Rat rhs = (k % 2 == 0 ? Rat(1) : Rat(-1)) * gen_binomial(u - 1, k);
    return {lhs, rhs};
}

inline KernelSpec poisson_spec() {
    KernelSpec s;
    s.family = Family::binomial_power;
    s.q = 2;
    s.r = Rat(-1);
    s.c = Rat(1);
    return s;
}

// Shifted-arctan expansion: arctan(x-y) + pi/2 = sum_{k>=1} B_k(x) y^{-k},
// B_k = (Poisson A_{k-1}) / k; monic of degree k-1.
inline Polynomial arctan_Bk(unsigned long k) {
    require(k >= 1, errc::config, "arctan_Bk needs k >= 1");
    return Rat(1, static_cast<long>(k)) * binomial_Ak(poisson_spec(), k - 1);
}

// First n coefficient polynomials of the product of two formal series in 1/y;
// entries beyond either list are treated as zero (truncation semantics).
inline std::vector<Polynomial> cauchy_product(const std::vector<Polynomial>& S,
                                              const std::vector<Polynomial>& T, size_t n) {
    std::vector<Polynomial> U(n);
    for (size_t m = 0; m < n; ++m)
        for (size_t i = 0; i <= m; ++i)
            if (i < S.size() && m - i < T.size()) U[m] += S[i] * T[m - i];
    return U;
}

// C_k of (arctan(x-y) + pi/2)(c + (x-y)^q)^r = y^{qr-1} sum_k C_k(x) y^{-k}:
// Cauchy product of the binomial series with the shifted-arctan series.
// Leading coefficient of C_k is (-1)^k C(qr-1, k) at degree k.
inline Polynomial arctan_binomial_Ck(const KernelSpec& spec, unsigned long k) {
    require(spec.family == Family::arctan_binomial || spec.family == Family::related_arctan,
            errc::config, "arctan_binomial_Ck needs an arctan-binomial kernel");
    spec.validate();
    KernelSpec bin = spec;
    bin.family = Family::binomial_power;
    std::vector<Polynomial> S, T;
    S.reserve(k + 1);
    T.reserve(k + 1);
    for (unsigned long i = 0; i <= k; ++i) {
        S.push_back(binomial_Ak(bin, i));
        T.push_back(arctan_Bk(i + 1));
    }
    return cauchy_product(S, T, k + 1)[k];
}

// Double series of phi(t) = t^{-1} ln(1 + t^2) at t = x - y:
//   phi(x-y) = ln(y) * sum_{j=1}^{n} A_j(x) y^{-j} + sum_{k=2}^{n} B_k(x) y^{-k} + tail
// A and B are returned with natural indices (entries 0, and B_1, stay zero).
// A_j = -2 x^{j-1}. B_k is built by replaying the constructive proof:
// differentiate the log factor, expand through the Poisson series, integrate
// back, and Cauchy-multiply with the geometric expansion of 1/(x-y).
struct LogSeries {
    std::vector<Polynomial> A; // A[j], 1 <= j <= n
    std::vector<Polynomial> B; // B[k], 2 <= k <= n
};

inline LogSeries log_kernel_series(unsigned long n) {
    require(n >= 2, errc::config, "log_kernel_series needs n >= 2");
    LogSeries out;
    out.A.assign(n + 1, Polynomial());
    out.B.assign(n + 1, Polynomial());
    for (unsigned long j = 1; j <= n; ++j) out.A[j] = Polynomial::monomial(Rat(-2), j - 1);
    // d/dy ln(1+(x-y)^2) = sum_{m>=1} C_m y^{-m}, C_m = 2*P_{m-1} - 2x*P_{m-2}
    // with P = Poisson expansion polynomials
    KernelSpec poisson = poisson_spec();
    std::vector<Polynomial> P;
    P.reserve(n);
    for (unsigned long i = 0; i < n; ++i) P.push_back(binomial_Ak(poisson, i));
    auto C = [&](unsigned long m) {
        Polynomial c;
        if (m >= 1) c += Rat(2) * P[m - 1];
        if (m >= 2) c -= Rat(2) * (Polynomial::monomial(Rat(1), 1) * P[m - 2]);
        return c;
    };
    // ln(1+(x-y)^2) = 2 ln|y| - sum_{j>=1} C_{j+1} y^{-j} / j;
    // multiply by 1/(x-y) = -sum_{i>=1} x^{i-1} y^{-i}
    for (unsigned long k = 2; k <= n; ++k) {
        Polynomial bk;
        for (unsigned long i = 1; i + 1 <= k; ++i) {
            unsigned long j = k - i;
            bk += Rat(1, static_cast<long>(j)) *
                  (Polynomial::monomial(Rat(1), i - 1) * C(j + 1));
        }
        out.B[k] = bk;
    }
    return out;
}

// Series of the related product kernels (natural indices as in LogSeries):
//  related_log    t^{-L} ln(1+t^q):  phi(x-y) = ln(y) sum_{j>=L} A_j y^{-j}
//                                             + sum_{k>=L+1} B_k y^{-k} + tail,
//                 A_j = (-1)^L q C(j-1, L-1) x^{j-L}
//  related_arctan: C list, identical construction to arctan_binomial_Ck
struct RelatedSeries {
    std::vector<Polynomial> A; // related_log: A[j], L <= j <= n
    std::vector<Polynomial> B; // related_log: B[k], L+1 <= k <= n
    std::vector<Polynomial> C; // related_arctan: C[j], 0 <= j <= n
};

inline RelatedSeries related_series(const KernelSpec& spec, unsigned long n) {
    spec.validate();
    RelatedSeries out;
    if (spec.family == Family::related_arctan) {
        out.C.reserve(n + 1);
        for (unsigned long j = 0; j <= n; ++j) out.C.push_back(arctan_binomial_Ck(spec, j));
        return out;
    }
    require(spec.family == Family::related_log, errc::config,
            "related_series needs a related_log or related_arctan kernel");
    unsigned long q = static_cast<unsigned long>(spec.q);
    unsigned long L = static_cast<unsigned long>(spec.L);
    out.A.assign(n + 1, Polynomial());
    out.B.assign(n + 1, Polynomial());
    Rat sgnL = L % 2 == 0 ? 1 : -1;
    for (unsigned long j = L; j <= n; ++j)
        out.A[j] = Polynomial::monomial(sgnL * Rat(spec.q) * Rat(binom_ui(j - 1, L - 1)), j - L);
    // d/dy ln(1+(x-y)^q) = -q (x-y)^{q-1} / (1+(x-y)^q) = sum_m D_m y^{-m};
    // the rational factor expands through the q-power Poisson-type series
    KernelSpec inv;
    inv.family = Family::binomial_power;
    inv.q = spec.q;
    inv.r = Rat(-1);
    inv.c = Rat(1);
    std::vector<Polynomial> Q; // (1+(x-y)^q)^{-1} = y^{-q} sum Q_v y^{-v}
    Q.reserve(n + 1);
    for (unsigned long v = 0; v <= n; ++v) Q.push_back(binomial_Ak(inv, v));
    // (x-y)^{q-1} * y^{-q}: coefficient of y^{-u} is
    //   P_u = C(q-1, u-1) (-1)^{q-u} x^{u-1},  1 <= u <= q
    auto P = [&](unsigned long u) {
        Rat s = (q - u) % 2 == 0 ? 1 : -1;
        return Polynomial::monomial(s * Rat(binom_ui(q - 1, u - 1)), u - 1);
    };
    auto D = [&](unsigned long m) {
        Polynomial d;
        for (unsigned long u = 1; u <= q && u <= m; ++u)
            if (m - u < Q.size()) d += P(u) * Q[m - u];
        return Rat(-static_cast<long>(q)) * d;
    };
    // integrate: ln(1+(x-y)^q) = q ln(y) - sum_{m>=1} D_{m+1} y^{-m}/m;
    // multiply by (x-y)^{-L} = sum_{j>=L} E_j y^{-j},
    //   E_j = (-1)^L C(j-1, L-1) x^{j-L}
    auto E = [&](unsigned long j) {
        return Polynomial::monomial(sgnL * Rat(binom_ui(j - 1, L - 1)), j - L);
    };
    for (unsigned long k = L + 1; k <= n; ++k) {
        Polynomial bk;
        for (unsigned long m = 1; m + L <= k; ++m) {
            unsigned long j = k - m;
            bk -= Rat(1, static_cast<long>(m)) * (D(m + 1) * E(j));
        }
        out.B[k] = bk;
    }
    return out;
}

// N-th derivative of p(x) ln(x), exactly:
//   x^{-pole} * numerator(x) + log_part(x) * ln(x),  pole = N.
// For deg p <= N-1 the log part vanishes and the numerator coefficient of x^j
// is a_j j! (N-1-j)! (-1)^{N-1+j} — the alternating-sign pattern with positive
// magnitude factors c_j = j!(N-1-j)!.
struct LaurentLog {
    long pole = 0;        // denominator exponent
    Polynomial numerator; // coefficient of x^{-pole}
    Polynomial log_part;  // coefficient of ln(x)
};

inline LaurentLog log_poly_derivative(const Polynomial& p, unsigned long N) {
    require(N >= 1, errc::config, "derivative order must be >= 1");
    LaurentLog out;
    out.pole = static_cast<long>(N);
    if (p.is_zero()) return out;
    unsigned long deg = static_cast<unsigned long>(p.degree());
    std::vector<Rat> num(deg + 1);
    std::vector<Rat> logc;
    for (unsigned long k = 0; k <= deg; ++k) {
        Rat a = p.coeff(k);
        if (a == 0) continue;
        if (k < N) {
            // D^N(x^k ln x) = k! (N-1-k)! (-1)^{N-1+k} x^{k-N}
            Rat s = (N - 1 + k) % 2 == 0 ? 1 : -1;
            num[k] += a * Rat(factorial(k)) * Rat(factorial(N - 1 - k)) * s;
        } else {
            // D^N(x^k ln x) = (k)_N x^{k-N} ln x + h_{k,N} x^{k-N},
            // h_{k,0} = 0, h_{k,m+1} = (k-m) h_{k,m} + (k)_m
            Rat fall(1), h(0);
            for (unsigned long m = 0; m < N; ++m) {
                h = Rat(static_cast<long>(k - m)) * h + fall;
                fall *= Rat(static_cast<long>(k - m));
            }
            num[k] += a * h;
            if (logc.size() < k - N + 1) logc.resize(k - N + 1);
            logc[k - N] += a * fall;
        }
    }
    out.numerator = Polynomial(std::move(num));
    out.log_part = Polynomial(std::move(logc));
    return out;
}

// How a kernel's translates expand, and which recovery path applies.
// Power families:  phi(x-y) = |y|^{F_exponent} * sum_{k>=0} A_k(x) y^{-k}
// Log families:    phi(x-y) = ln|y| * sum A_j y^{-j} + sum B_k y^{-k}
// (A_k : k >= K) is a basis of the polynomials with deg A_{K+m} = m.
enum class SignReq { either, positive, negative };

struct ExpansionModel {
    KernelSpec kernel;
    Rat F_exponent = Rat(0);
    bool F_has_log = false;
    SignReq sign = SignReq::either;
    unsigned long K = 0;

    bool sign_ok(Sign s) const {
        if (sign == SignReq::either) return true;
        return sign == SignReq::positive ? s == Sign::positive : s == Sign::negative;
    }

    // k-th series coefficient polynomial (log families: the ln-side A_j)
    Polynomial A(unsigned long k) const {
        switch (kernel.family) {
        case Family::binomial_power: return binomial_Ak(kernel, k);
        case Family::arctan_shifted: return arctan_Bk(k + 1);
        case Family::arctan_binomial:
        case Family::related_arctan:
            return k == 0 ? Polynomial() : arctan_binomial_Ck(kernel, k - 1);
        case Family::inv_x_log:
            return k == 0 ? Polynomial() : Polynomial::monomial(Rat(-2), k - 1);
        case Family::related_log: {
            unsigned long L = static_cast<unsigned long>(kernel.L);
            if (k < L) return Polynomial();
            Rat s = L % 2 == 0 ? 1 : -1;
            return Polynomial::monomial(s * Rat(kernel.q) * Rat(binom_ui(k - 1, L - 1)), k - L);
        }
        }
        fail(errc::internal, "bad kernel family");
    }
};

inline ExpansionModel classify_basis(const KernelSpec& spec) {
    spec.validate();
    ExpansionModel m;
    m.kernel = spec;
    switch (spec.family) {
    case Family::binomial_power: {
        Rat qr = spec.qr();
        m.F_exponent = qr;
        if (is_positive_natural(qr)) {
            m.K = static_cast<unsigned long>(spec.q) *
                  static_cast<unsigned long>(rat_ceil(spec.r).get_si());
            m.sign = spec.q % 2 != 0 ? SignReq::negative : SignReq::either;
        } else {
            // validate() already rejected odd q here
            m.K = 0;
            m.sign = SignReq::either;
        }
        break;
    }
    case Family::arctan_shifted:
        m.F_exponent = Rat(-1);
        m.K = 0;
        m.sign = SignReq::positive;
        break;
    case Family::arctan_binomial:
    case Family::related_arctan:
        require(!is_positive_natural(spec.qr()), errc::config,
                "arctan-binomial basis classification requires q*r not a positive integer");
        m.F_exponent = spec.qr();
        m.K = 1;
        m.sign = SignReq::positive;
        break;
    case Family::inv_x_log:
        m.F_has_log = true;
        m.K = 1;
        m.sign = SignReq::positive;
        break;
    case Family::related_log:
        m.F_has_log = true;
        m.K = static_cast<unsigned long>(spec.L);
        m.sign = SignReq::positive;
        break;
    }
    return m;
}

// |y|^{F_exponent} at the given precision (exact rational fast path)
inline Real eval_F(const ExpansionModel& m, const Rat& y, mpfr_prec_t bits) {
    require(!m.F_has_log, errc::config, "log-family F is not a pure power");
    require(y != 0, errc::config, "F undefined at y = 0");
    Rat ay = rat_abs(y);
    if (is_integer(m.F_exponent))
        return Real::of(rat_pow(ay, m.F_exponent.get_num().get_si()), bits);
    return Real::of(ay, bits).pow_q(m.F_exponent);
}

// F-relative truncation residual of the power-family expansion:
//   | phi(x-y)/F(y) - sum_{k<=kmax} A_k(x) y^{-k} |
// The partial sum is exact; only the kernel evaluation rounds.
inline Real series_residual(const ExpansionModel& m, const Rat& x, const Rat& y,
                            unsigned long kmax, mpfr_prec_t bits) {
    require(!m.F_has_log, errc::config, "series_residual needs a power family");
    Rat sum(0);
    for (unsigned long k = 0; k <= kmax; ++k)
        sum += m.A(k).eval(x) * rat_pow(y, -static_cast<long>(k));
    Real phi = kernel_eval(m.kernel, Real::of(x, bits) - Real::of(y, bits));
    return (phi / eval_F(m, y, bits) - Real::of(sum, bits)).abs();
}

// Truncation residual of the mixed (log-family) expansion through index n:
//   | phi(x-y) - ln(y) sum_{j<=n} A_j y^{-j} - sum_{k<=n} B_k y^{-k} |
inline Real log_series_residual(const KernelSpec& spec, const Rat& x, const Rat& y,
                                unsigned long n, mpfr_prec_t bits) {
    require(spec.family == Family::inv_x_log || spec.family == Family::related_log, errc::config,
            "log_series_residual needs a log-family kernel");
    require(y > 0, errc::config, "log-family series needs y > 0");
    std::vector<Polynomial> A, B;
    if (spec.family == Family::inv_x_log) {
        LogSeries s = log_kernel_series(n);
        A = std::move(s.A);
        B = std::move(s.B);
    } else {
        RelatedSeries s = related_series(spec, n);
        A = std::move(s.A);
        B = std::move(s.B);
    }
    Rat asum(0), bsum(0);
    for (unsigned long i = 1; i <= n; ++i) {
        if (i < A.size()) asum += A[i].eval(x) * rat_pow(y, -static_cast<long>(i));
        if (i < B.size()) bsum += B[i].eval(x) * rat_pow(y, -static_cast<long>(i));
    }
    Real ry = Real::of(y, bits);
    Real phi = kernel_eval(spec, Real::of(x, bits) - ry);
    Real approx = ry.ln() * Real::of(asum, bits) + Real::of(bsum, bits);
    return (phi - approx).abs();
}

} // namespace scatter
