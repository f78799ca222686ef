#pragma once

#include <vector>

#include "hypercal/multivector.hpp"

namespace hypercal {

// Dense dim x dim matrix over S, column convention: (A v)_i = sum_j A_ij v_j.
template <class S>
struct MatrixT {
    int rows = 0, cols = 0;
    std::vector<S> a;

    MatrixT() = default;
    MatrixT(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, S(0)) {}

    S& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static MatrixT identity(int n) {
        MatrixT m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    MatrixT transpose() const {
        MatrixT t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    MatrixT operator-() const {
        MatrixT m = *this;
        for (auto& x : m.a) x = -x;
        return m;
    }

    friend MatrixT operator+(const MatrixT& x, const MatrixT& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw DomainError("matrix add: shape mismatch");
        MatrixT m = x;
        for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] += y.a[i];
        return m;
    }
    friend MatrixT operator-(const MatrixT& x, const MatrixT& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw DomainError("matrix sub: shape mismatch");
        MatrixT m = x;
        for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] -= y.a[i];
        return m;
    }
    friend MatrixT operator*(const S& s, MatrixT m) {
        for (auto& x : m.a) x = s * x;
        return m;
    }
    friend MatrixT operator*(const MatrixT& x, const MatrixT& y) {
        if (x.cols != y.rows) throw DomainError("matrix mul: shape mismatch");
        MatrixT m(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const S& xik = x(i, k);
                if (scalar_is_zero(xik)) continue;
                for (int j = 0; j < y.cols; ++j) {
                    const S& ykj = y(k, j);
                    if (scalar_is_zero(ykj)) continue;
                    m(i, j) += xik * ykj;
                }
            }
        return m;
    }
    friend bool operator==(const MatrixT& x, const MatrixT& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    bool is_zero() const {
        for (const auto& x : a)
            if (!scalar_is_zero(x)) return false;
        return true;
    }
};

using Matrix = MatrixT<GaussianRational>;

// Linear endomorphism of the frame. The matrix acts on degree-1 polyvectors;
// the action on covectors is the transpose, so <A*alpha, v> = <alpha, A v>.
template <class S>
struct EndoT {
    FramePtr frame;
    MatrixT<S> mat;

    EndoT() = default;
    EndoT(FramePtr f, MatrixT<S> m) : frame(std::move(f)), mat(std::move(m)) {
        if (mat.rows != frame->dim || mat.cols != frame->dim)
            throw DomainError("endomorphism matrix must be dim x dim");
    }

    static EndoT identity(const FramePtr& f) { return EndoT(f, MatrixT<S>::identity(f->dim)); }
    static EndoT zero(const FramePtr& f) { return EndoT(f, MatrixT<S>(f->dim, f->dim)); }

    friend EndoT operator+(const EndoT& a, const EndoT& b) {
        require_same_frame(a.frame, b.frame, "endo add");
        return EndoT(a.frame, a.mat + b.mat);
    }
    friend EndoT operator-(const EndoT& a, const EndoT& b) {
        require_same_frame(a.frame, b.frame, "endo sub");
        return EndoT(a.frame, a.mat - b.mat);
    }
    friend EndoT operator*(const S& s, const EndoT& a) { return EndoT(a.frame, s * a.mat); }
    // (a * b) acts as a after b on polyvectors.
    friend EndoT operator*(const EndoT& a, const EndoT& b) {
        require_same_frame(a.frame, b.frame, "endo compose");
        return EndoT(a.frame, a.mat * b.mat);
    }
    friend bool operator==(const EndoT& a, const EndoT& b) {
        return same_frame(a.frame, b.frame) && a.mat == b.mat;
    }
};

using Endo = EndoT<GaussianRational>;

template <class S>
EndoT<S> commutator(const EndoT<S>& a, const EndoT<S>& b) {
    return a * b - b * a;
}

namespace detail {

// Degree-1 action: columns for polyvectors, rows (transpose) for forms.
template <class S, Variance V>
S endo_entry(const MatrixT<S>& m, int from, int to) {
    if constexpr (V == Variance::poly)
        return m(to, from);
    else
        return m(from, to);
}

} // namespace detail

template <class S, Variance V>
Multivector<S, V> apply(const EndoT<S>& e, const Multivector<S, V>& x) {
    require_same_frame(e.frame, x.frame(), "apply");
    if (x.degree() != 1) throw DomainError("apply: degree-1 element expected");
    Multivector<S, V> out(x.frame(), 1);
    int d = x.dim();
    for (const auto& [m, c] : x.terms()) {
        int j = std::countr_zero(m);
        for (int i = 0; i < d; ++i) {
            S eij = detail::endo_entry<S, V>(e.mat, j, i);
            if (scalar_is_zero(eij)) continue;
            out.add_term(Mask(1) << i, eij * c);
        }
    }
    return out;
}

// Extension of e as a derivation: A(a^b) = Aa^b + a^Ab, degree preserved.
template <class S, Variance V>
Multivector<S, V> extend_derivation(const EndoT<S>& e, const Multivector<S, V>& x) {
    require_same_frame(e.frame, x.frame(), "extend_derivation");
    Multivector<S, V> out(x.frame(), x.degree());
    int d = x.dim();
    for (const auto& [m, c] : x.terms()) {
        Mask rest = m;
        while (rest) {
            int t = std::countr_zero(rest);
            rest &= rest - 1;
            for (int r = 0; r < d; ++r) {
                S etr = detail::endo_entry<S, V>(e.mat, t, r);
                if (scalar_is_zero(etr)) continue;
                Mask wo = m & ~(Mask(1) << t);
                if (wo & (Mask(1) << r)) continue;
                S coef = etr * c;
                if (replace_sign(m, t, r) < 0) coef = -coef;
                out.add_term(wo | (Mask(1) << r), coef);
            }
        }
    }
    return out;
}

// Functorial extension Lambda^k(e): every factor is mapped simultaneously.
template <class S, Variance V>
Multivector<S, V> extend_multiplicative(const EndoT<S>& e, const Multivector<S, V>& x) {
    require_same_frame(e.frame, x.frame(), "extend_multiplicative");
    Multivector<S, V> out(x.frame(), x.degree());
    for (const auto& [m, c] : x.terms()) {
        Multivector<S, V> prod(x.frame(), 0);
        prod.add_term(0, c);
        for (int t : mask_indices(m)) {
            Multivector<S, V> factor(x.frame(), 1);
            factor.add_term(Mask(1) << t, S(1));
            prod = wedge(prod, apply(e, factor));
            if (prod.is_zero()) break;
        }
        if (prod.degree() == out.degree())
            out += prod;
    }
    return out;
}

} // namespace hypercal
