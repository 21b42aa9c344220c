#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "errors.hpp"

namespace scatter {

using Int = mpz_class;
using Rat = mpq_class;

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Int rat_ceil(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

// r^e for any integer e; e < 0 requires r != 0
inline Rat rat_pow(const Rat& r, long e) {
    if (e == 0) return Rat(1);
    bool inv = e < 0;
    unsigned long n = inv ? static_cast<unsigned long>(-(e + 1)) + 1ul : static_cast<unsigned long>(e);
    Rat p;
    mpz_pow_ui(p.get_num_mpz_t(), r.get_num_mpz_t(), n);
    mpz_pow_ui(p.get_den_mpz_t(), r.get_den_mpz_t(), n);
    p.canonicalize();
    if (inv) {
        require(p != 0, errc::config, "zero base with negative exponent");
        p = 1 / p;
    }
    return p;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// "7", "-3/4", "0.25", "1e-3" -> exact rational
inline Rat parse_rational(const std::string& s) {
    require(!s.empty(), errc::config, "empty numeric field");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r;
        if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
            fail(errc::config, "bad rational literal: " + s);
        require(r.get_den() != 0, errc::config, "zero denominator: " + s);
        r.canonicalize();
        return r;
    }
    // decimal / scientific form, parsed exactly
    std::string digits;
    long exp10 = 0;
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    bool any = false, dot = false;
    size_t epos = std::string::npos;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            require(!dot, errc::config, "bad numeric literal: " + s);
            dot = true;
        } else if (c == 'e' || c == 'E') {
            epos = i + 1;
            break;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (dot) --exp10;
            any = true;
        } else {
            fail(errc::config, "bad numeric literal: " + s);
        }
    }
    require(any, errc::config, "bad numeric literal: " + s);
    if (epos != std::string::npos) {
        try {
            size_t used = 0;
            exp10 += std::stol(s.substr(epos), &used);
            require(epos + used == s.size(), errc::config, "bad numeric literal: " + s);
        } catch (const error&) {
            throw;
        } catch (const std::exception&) {
            fail(errc::config, "bad numeric literal: " + s);
        }
    }
    Rat r{Int(digits)};
    if (neg) r = -r;
    return r * rat_pow(Rat(10), exp10);
}

inline std::string rat_str(const Rat& r) { return r.get_str(); } // "p" or "p/q"

inline double rat_double(const Rat& r) { return r.get_d(); }

// C(n, k) for integer n >= 0
inline Int binom_ui(unsigned long n, unsigned long k) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

inline Int factorial(unsigned long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

} // namespace scatter
