#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "hypercal/frame.hpp"
#include "hypercal/scalar.hpp"

namespace hypercal {

using Mask = std::uint32_t;

// ---- index-mask combinatorics ------------------------------------------
//
// A basis monomial e_{i1} ^ ... ^ e_{ik} with i1 < ... < ik is encoded as the
// bitmask with those bits set; the strictly-increasing invariant is built in.

inline int mask_degree(Mask m) { return std::popcount(m); }

inline Mask mask_below(int i) { return (Mask(1) << i) - 1; }

inline std::vector<int> mask_indices(Mask m) {
    std::vector<int> idx;
    while (m) {
        int b = std::countr_zero(m);
        idx.push_back(b);
        m &= m - 1;
    }
    return idx;
}

inline Mask mask_from_indices(const std::vector<int>& idx, int dim) {
    Mask m = 0;
    int prev = -1;
    for (int i : idx) {
        if (i < 0 || i >= dim) throw DomainError("index out of frame range");
        if (i <= prev) throw DomainError("monomial indices must be strictly increasing");
        prev = i;
        m |= Mask(1) << i;
    }
    return m;
}

// Sign of e_A ^ e_B when both tuples are increasing and disjoint: parity of
// the number of transpositions interleaving B into A.
inline int wedge_sign(Mask a, Mask b) {
    int swaps = 0;
    Mask bb = b;
    while (bb) {
        int j = std::countr_zero(bb);
        swaps += std::popcount(a >> (j + 1));
        bb &= bb - 1;
    }
    return (swaps & 1) ? -1 : 1;
}

// Sign of extracting index i from the front of monomial m (i must be in m).
inline int contract_sign(Mask m, int i) {
    return (std::popcount(m & mask_below(i)) & 1) ? -1 : 1;
}

// Sign of replacing index t by index r inside monomial m (t in m, r not in
// m - t): parity of the slot move needed to restore increasing order.
inline int replace_sign(Mask m, int t, int r) {
    Mask wo = m & ~(Mask(1) << t);
    int pt = std::popcount(m & mask_below(t));
    int pr = std::popcount(wo & mask_below(r));
    return ((pt + pr) & 1) ? -1 : 1;
}

// ---- sparse graded element ----------------------------------------------

enum class Variance { form, poly };

// Sparse homogeneous element of the exterior algebra over a fixed frame.
// Variance::form elements are covariant (differential forms), Variance::poly
// elements are contravariant (polyvectors); the distinction matters when an
// endomorphism acts. Terms map strictly-increasing index masks to nonzero
// coefficients; zero coefficients are never stored.
template <class S, Variance V>
class Multivector {
  public:
    Multivector() = default;
    Multivector(FramePtr frame, int degree) : frame_(std::move(frame)), degree_(degree) {
        if (!frame_) throw DomainError("multivector without frame");
        if (degree_ < 0 || degree_ > frame_->dim) throw DomainError("degree out of range");
    }

    static Multivector basis(FramePtr frame, std::vector<int> idx) {
        Multivector out(frame, static_cast<int>(idx.size()));
        out.add_term(mask_from_indices(idx, frame->dim), S(1));
        return out;
    }

    const FramePtr& frame() const { return frame_; }
    int degree() const { return degree_; }
    int dim() const { return frame_->dim; }
    const std::map<Mask, S>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(Mask m, const S& c) {
        if (scalar_is_zero(c)) return;
        if (mask_degree(m) != degree_) throw DomainError("term degree mismatch");
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (scalar_is_zero(it->second)) terms_.erase(it);
        }
    }

    S coeff(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? S(0) : it->second;
    }

    Multivector operator-() const {
        Multivector out(frame_, degree_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }

    Multivector& operator+=(const Multivector& o) {
        require_same_frame(frame_, o.frame_, "add");
        if (degree_ != o.degree_) throw DomainError("add: degree mismatch");
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Multivector& operator-=(const Multivector& o) {
        require_same_frame(frame_, o.frame_, "sub");
        if (degree_ != o.degree_) throw DomainError("sub: degree mismatch");
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Multivector& operator*=(const S& s) {
        if (scalar_is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
    friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
    friend Multivector operator*(const S& s, Multivector a) { return a *= s; }
    friend Multivector operator*(Multivector a, const S& s) { return a *= s; }

    friend bool operator==(const Multivector& a, const Multivector& b) {
        return same_frame(a.frame_, b.frame_) && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

    Multivector conj() const {
        Multivector out(frame_, degree_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, scalar_conj(c));
        return out;
    }

    bool is_real() const {
        for (const auto& [m, c] : terms_)
            if (!scalar_is_zero(c - scalar_conj(c))) return false;
        return true;
    }

  private:
    FramePtr frame_;
    int degree_ = 0;
    std::map<Mask, S> terms_;
};

template <class S>
using FormT = Multivector<S, Variance::form>;
template <class S>
using PolyT = Multivector<S, Variance::poly>;

using Form = FormT<GaussianRational>;
using Poly = PolyT<GaussianRational>;
using FormF = FormT<std::complex<double>>;
using PolyF = PolyT<std::complex<double>>;

// ---- operations ----------------------------------------------------------

template <class S, Variance V>
Multivector<S, V> wedge(const Multivector<S, V>& a, const Multivector<S, V>& b) {
    require_same_frame(a.frame(), b.frame(), "wedge");
    int deg = a.degree() + b.degree();
    if (deg > a.dim()) throw DomainError("wedge: degree exceeds frame dimension");
    Multivector<S, V> out(a.frame(), deg);
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;
            S c = ca * cb;
            if (wedge_sign(ma, mb) < 0) c = -c;
            out.add_term(ma | mb, c);
        }
    return out;
}

// Interior product by a degree-1 polyvector; antiderivation of degree -1.
template <class S>
FormT<S> contract(const PolyT<S>& v, const FormT<S>& a) {
    require_same_frame(v.frame(), a.frame(), "contract");
    if (v.degree() != 1) throw DomainError("contract: vector must have degree 1");
    if (a.degree() < 1) throw DomainError("contract: cannot contract a 0-form");
    FormT<S> out(a.frame(), a.degree() - 1);
    for (const auto& [mv, cv] : v.terms()) {
        int i = std::countr_zero(mv);
        for (const auto& [ma, ca] : a.terms()) {
            if (!(ma & mv)) continue;
            S c = cv * ca;
            if (contract_sign(ma, i) < 0) c = -c;
            out.add_term(ma & ~mv, c);
        }
    }
    return out;
}

// Full pairing of equal degrees. Dual-basis monomials pair to 1, so this is
// the sparse dot product over common masks.
template <class S>
S pair(const FormT<S>& a, const PolyT<S>& v) {
    require_same_frame(a.frame(), v.frame(), "pair");
    if (a.degree() != v.degree()) throw DomainError("pair: degree mismatch");
    S acc(0);
    const auto& small = a.term_count() <= v.term_count() ? a.terms() : v.terms();
    for (const auto& [m, c] : small) {
        (void)c;
        acc += a.coeff(m) * v.coeff(m);
    }
    return acc;
}

template <Variance V>
Multivector<std::complex<double>, V> to_float(const Multivector<GaussianRational, V>& a) {
    Multivector<std::complex<double>, V> out(a.frame(), a.degree());
    for (const auto& [m, c] : a.terms()) out.add_term(m, c.to_complex());
    return out;
}

} // namespace hypercal
