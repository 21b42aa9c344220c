#pragma once

#include <initializer_list>
#include <sstream>
#include <vector>

#include "rational.hpp"
#include "real.hpp"

namespace scatter {

// Dense univariate polynomial with exact rational coefficients.
// coeffs_[d] is the coefficient of x^d; trailing zeros are trimmed,
// so the zero polynomial has an empty coefficient vector and degree -1.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }

    static Polynomial monomial(const Rat& coef, size_t deg) {
        std::vector<Rat> c(deg + 1);
        c[deg] = coef;
        return Polynomial(std::move(c));
    }
    static Polynomial constant(const Rat& v) { return Polynomial({v}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Rat coeff(size_t d) const { return d < c_.size() ? c_[d] : Rat(0); }
    Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }
    const std::vector<Rat>& coeffs() const { return c_; }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(std::move(c));
    }
    Polynomial operator-() const {
        std::vector<Rat> c(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Rat& s, const Polynomial& p) {
        if (s == 0) return Polynomial();
        std::vector<Rat> c(p.c_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = s * p.c_[i];
        return Polynomial(std::move(c));
    }
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }

    bool operator==(const Polynomial& o) const { return c_ == o.c_; }
    bool operator!=(const Polynomial& o) const { return c_ != o.c_; }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<Rat> c(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = Rat(static_cast<long>(i)) * c_[i];
        return Polynomial(std::move(c));
    }

    // p(alpha*x + beta), exact
    Polynomial compose_affine(const Rat& alpha, const Rat& beta) const {
        Polynomial result;
        Polynomial lin({beta, alpha});
        // Horner in the affine argument
        for (size_t i = c_.size(); i-- > 0;) result = result * lin + constant(c_[i]);
        return result;
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }
    Real eval(const Real& x) const {
        Real acc = Real::of(0L, x.precision());
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + Real::of(c_[i], x.precision());
        return acc;
    }

    std::string str(const char* var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            Rat a = c_[i];
            if (first) {
                if (a < 0) os << "-";
            } else {
                os << (a < 0 ? " - " : " + ");
            }
            Rat mag = rat_abs(a);
            if (i == 0 || mag != 1) os << mag.get_str();
            if (i > 0) {
                if (mag != 1) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        return os.str();
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

} // namespace scatter
