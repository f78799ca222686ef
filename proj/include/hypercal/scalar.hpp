#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "hypercal/errors.hpp"

namespace hypercal {

// Arbitrary-precision rational, always kept in canonical reduced form with
// positive denominator.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(int n) : v_(static_cast<long>(n)) {}
    Rational(long num, long den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Accepts the exact grammar "-?digits(/digits)?"; rejects anything else.
    static Rational parse(const std::string& s);

    Rational operator-() const { return Rational(mpq_class(-v_), no_canon{}); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DomainError("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    double to_double() const { return v_.get_d(); }

    // "p" when the denominator is 1, otherwise "p/q".
    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_str();
    }

    const mpq_class& raw() const { return v_; }

  private:
    struct no_canon {};
    Rational(mpq_class q, no_canon) : v_(std::move(q)) {}
    mpq_class v_;
};

// Exact complex scalar: element of Q(i) with arbitrary-precision parts.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(long n) : re(n) {}
    GaussianRational(int n) : re(static_cast<long>(n)) {}
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    GaussianRational conj() const { return {re, -im}; }

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rational n = o.re * o.re + o.im * o.im;
        if (n.is_zero()) throw DomainError("complex division by zero");
        Rational r = (re * o.re + im * o.im) / n;
        Rational i = (im * o.re - re * o.im) / n;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

    std::string str() const {
        if (im.is_zero()) return re.str();
        return re.str() + (im.sign() >= 0 ? "+" : "") + im.str() + "i";
    }
};

// Scalar-kind helpers shared by the exact and float instantiations of the
// exterior algebra.
inline bool scalar_is_zero(const GaussianRational& s) { return s.is_zero(); }
inline bool scalar_is_zero(const std::complex<double>& s) { return s == std::complex<double>(0.0, 0.0); }
inline GaussianRational scalar_conj(const GaussianRational& s) { return s.conj(); }
inline std::complex<double> scalar_conj(const std::complex<double>& s) { return std::conj(s); }

inline std::complex<double> to_float(const GaussianRational& s) { return s.to_complex(); }

} // namespace hypercal
