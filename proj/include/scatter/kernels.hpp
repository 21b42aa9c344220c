#pragma once

#include <string>

#include "rational.hpp"
#include "real.hpp"

namespace scatter {

// Kernel families phi(t); translates are phi(x - y).
//   binomial_power  : (c + t^q)^r
//   arctan_shifted  : arctan(t) + pi/2
//   arctan_binomial : (arctan(t) + pi/2) * (c + t^q)^r
//   inv_x_log       : t^{-1} ln(1 + t^2)           (0 at t = 0)
//   related_log     : t^{-L} ln(1 + t^q)
//   related_arctan  : same closed form as arctan_binomial; kept as its own
//                     family tag because its series is produced by a product
//                     construction rather than the direct expansion
enum class Family {
    binomial_power,
    arctan_shifted,
    arctan_binomial,
    inv_x_log,
    related_log,
    related_arctan,
};

inline const char* family_name(Family f) {
    switch (f) {
    case Family::binomial_power: return "binomial_power";
    case Family::arctan_shifted: return "arctan_shifted";
    case Family::arctan_binomial: return "arctan_binomial";
    case Family::inv_x_log: return "inv_x_log";
    case Family::related_log: return "related_log";
    case Family::related_arctan: return "related_arctan";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    if (s == "binomial_power") return Family::binomial_power;
    if (s == "arctan_shifted") return Family::arctan_shifted;
    if (s == "arctan_binomial") return Family::arctan_binomial;
    if (s == "inv_x_log") return Family::inv_x_log;
    if (s == "related_log") return Family::related_log;
    if (s == "related_arctan") return Family::related_arctan;
    fail(errc::config, "unknown kernel family: " + s);
}

// r is a natural number 0, 1, 2, ... (polynomial case, excluded)
inline bool is_natural(const Rat& r) { return is_integer(r) && r >= 0; }
// strictly positive natural 1, 2, ...
inline bool is_positive_natural(const Rat& r) { return is_integer(r) && r >= 1; }

struct KernelSpec {
    Family family = Family::binomial_power;
    long q = 2;    // inner power, q >= 1
    Rat r = Rat(1, 2); // outer exponent, not a natural number
    Rat c = Rat(1);    // shift, c > 0
    long L = 1;    // pole order for related_log, L >= 1

    Rat qr() const { return Rat(q) * r; }
    bool uses_qr() const {
        return family == Family::binomial_power || family == Family::arctan_binomial ||
               family == Family::related_arctan;
    }

    void validate() const {
        switch (family) {
        case Family::binomial_power:
            require(q >= 1, errc::config, "binomial_power requires q >= 1");
            require(c > 0, errc::config, "binomial_power requires c > 0");
            require(!is_natural(r), errc::config,
                    "binomial_power requires a non-natural exponent r (polynomial otherwise)");
            if (q % 2 != 0)
                require(is_positive_natural(qr()), errc::config,
                        "odd q is unsupported unless q*r is a positive integer");
            break;
        case Family::arctan_shifted:
            break; // no parameters
        case Family::arctan_binomial:
        case Family::related_arctan:
            require(q >= 1 && q % 2 == 0, errc::config, "this family requires even q");
            require(c > 0, errc::config, "this family requires c > 0");
            require(!is_natural(r), errc::config,
                    "this family requires a non-natural exponent r");
            break;
        case Family::inv_x_log:
            break; // fixed shape
        case Family::related_log:
            require(L >= 1, errc::config, "related_log requires L >= 1");
            require(q >= 1 && q % 2 == 0, errc::config, "related_log requires even q");
            break;
        }
    }

    std::string describe() const {
        std::string s = family_name(family);
        switch (family) {
        case Family::binomial_power:
        case Family::arctan_binomial:
        case Family::related_arctan:
            s += "(q=" + std::to_string(q) + ", r=" + r.get_str() + ", c=" + c.get_str() + ")";
            break;
        case Family::related_log:
            s += "(q=" + std::to_string(q) + ", L=" + std::to_string(L) + ")";
            break;
        default: break;
        }
        return s;
    }
};

// phi(t) in extended precision. Domain errors throw.
inline Real kernel_eval(const KernelSpec& k, const Real& t) {
    mpfr_prec_t bits = t.precision();
    switch (k.family) {
    case Family::binomial_power: {
        Real base = Real::of(k.c, bits) + t.pow_si(k.q);
        require(base > Real::of(0L, bits), errc::config,
                "binomial_power evaluated where c + t^q <= 0");
        return base.pow_q(k.r);
    }
    case Family::arctan_shifted:
        return t.atan() + Real::pi(bits) / Real::of(2L, bits);
    case Family::arctan_binomial:
    case Family::related_arctan: {
        Real base = Real::of(k.c, bits) + t.pow_si(k.q);
        require(base > Real::of(0L, bits), errc::config,
                "arctan_binomial evaluated where c + t^q <= 0");
        Real arc = t.atan() + Real::pi(bits) / Real::of(2L, bits);
        return arc * base.pow_q(k.r);
    }
    case Family::inv_x_log: {
        if (t.is_zero()) return Real::of(0L, bits);
        Real one = Real::of(1L, bits);
        return (one + t * t).ln() / t;
    }
    case Family::related_log: {
        if (t.is_zero()) {
            // lim t->0 of t^{-L} ln(1 + t^q): 0 for q > L, 1 for q == L
            if (k.q > k.L) return Real::of(0L, bits);
            if (k.q == k.L) return Real::of(1L, bits);
            fail(errc::config, "related_log diverges at t = 0 for q < L");
        }
        Real one = Real::of(1L, bits);
        return (one + t.pow_si(k.q)).ln() / t.pow_si(k.L);
    }
    }
    fail(errc::internal, "bad kernel family");
}

} // namespace scatter
