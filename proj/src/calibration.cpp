#include "hypercal/calibration.hpp"

#include "hypercal/linalg.hpp"

namespace hypercal {

namespace {

const GaussianRational kI = GaussianRational::i();

GaussianRational minus_i_pow(int n) {
    GaussianRational acc(1);
    for (int k = 0; k < n; ++k) acc *= -kI;
    return acc;
}

// Coframe covector e^idx as a Form.
Form coframe(const FramePtr& f, int idx) {
    Form out(f, 1);
    out.add_term(Mask(1) << idx, GaussianRational(1));
    return out;
}

} // namespace

std::vector<int> flat_selection(int n) {
    std::vector<int> s;
    for (int t = 0; t < n; ++t) {
        s.push_back(4 * t);
        s.push_back(4 * t + 2);
    }
    return s;
}

VolumeForm standard_volume_form(const QuaternionicStructure& q, const std::vector<int>& selection) {
    int dim = q.frame->dim;
    int n = q.n;
    if (n == 0) throw DomainError("standard_volume_form: degenerate n = 0");
    if (static_cast<int>(selection.size()) != 2 * n)
        throw DomainError("standard_volume_form: selection must list 2n frame indices");
    Form phi(q.frame, 0);
    phi.add_term(0, GaussianRational(1));
    for (int idx : selection) {
        if (idx < 0 || idx >= dim) throw DomainError("standard_volume_form: index out of range");
        // e^idx - i * (I acting on the coframe)
        Form factor = coframe(q.frame, idx) - kI * apply(q.I, coframe(q.frame, idx));
        phi = wedge(phi, factor);
    }
    if (phi.is_zero())
        throw DomainError("standard_volume_form: selected vectors not independent over H");
    if (!is_pure_type(phi, q.I, 2 * n, 0))
        throw DomainError("standard_volume_form: product is not of type (2n,0)");
    // reality: conj(J phi) = phi with J extended multiplicatively
    Form jphi = extend_multiplicative(q.J, phi);
    if (!(jphi.conj() == phi))
        throw DomainError("standard_volume_form: form is not real for eta -> conj(J eta)");
    return {phi, n, selection};
}

CalibrationForm psi(const QuaternionicStructure& q, const VolumeForm& vol) {
    int n = vol.n;
    if (!is_pure_type(vol.phi, q.I, 2 * n, 0)) throw DomainError("psi: Phi is not pure (2n,0)");
    Form y_n = r_pq(q, vol.phi, n);
    Form p = minus_i_pow(n) * y_n;
    if (!is_pure_type(p, q.I, n, n)) throw DomainError("psi: result is not of type (n,n)");
    Form plus = project_plus(q, p);
    if (!(plus == p)) throw DomainError("psi: result is not of maximal weight");
    if (!p.is_real()) throw DomainError("psi: result is not real-valued on real polyvectors");
    return {p, n};
}

Poly lagrangian_polyvector(const std::vector<Poly>& v) {
    if (v.empty()) throw DomainError("lagrangian_polyvector: empty spanning set");
    const FramePtr& f = v.front().frame();
    Poly xi(f, 0);
    xi.add_term(0, GaussianRational(1));
    for (const auto& x : v) xi = wedge(xi, wedge(x, x.conj()));
    GaussianRational phase = minus_i_pow(static_cast<int>(v.size()));
    return phase * xi;
}

std::vector<Poly> selection_duals(const QuaternionicStructure& q, const VolumeForm& vol) {
    // Dual vector of the factor e^s - i I e^s is (e_s - i I e_s)/2.
    std::vector<Poly> out;
    GaussianRational half(Rational(1, 2));
    for (int idx : vol.selection) {
        Poly v(q.frame, 1);
        v.add_term(Mask(1) << idx, GaussianRational(1));
        out.push_back(half * (v - kI * apply(q.I, v)));
    }
    return out;
}

bool is_transversal(const std::vector<Poly>& v, const QuaternionicStructure& q) {
    // JV meets V trivially (as real subspaces) iff the 2n complex vectors
    // {v_t, J conj(v_t)} span a 2n-dimensional space: together with their
    // conjugates they then exhaust the complexified tangent space.
    int dim = q.frame->dim;
    int n = static_cast<int>(v.size());
    Matrix m(dim, 2 * n);
    for (int c = 0; c < n; ++c) {
        Poly jv = apply(q.J, v[c].conj());
        for (int r = 0; r < dim; ++r) {
            m(r, c) = v[c].coeff(Mask(1) << r);
            m(r, n + c) = jv.coeff(Mask(1) << r);
        }
    }
    return rank(m) == 2 * n;
}

LagrangianReport lagrangian_test(const std::vector<Poly>& v, const HyperhermitianMetric& g,
                                 const QuaternionicStructure& q) {
    if (v.empty()) throw DomainError("lagrangian_test: empty spanning set");
    int n = static_cast<int>(v.size());
    if (n != q.n) throw DomainError("lagrangian_test: expected n spanning vectors");
    int dim = q.frame->dim;
    for (const auto& x : v) {
        require_same_frame(x.frame(), q.frame, "lagrangian_test");
        if (x.degree() != 1) throw DomainError("lagrangian_test: degree-1 vectors expected");
        // (1,0) under I: I x = i x
        if (!(apply(q.I, x) == kI * x))
            throw DomainError("lagrangian_test: spanning vector is not of type (1,0)");
    }
    LagrangianReport rep;
    Matrix span(dim, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < dim; ++r) span(r, c) = v[c].coeff(Mask(1) << r);
    rep.spans_ok = rank(span) == n;
    if (!rep.spans_ok) throw DomainError("lagrangian_test: dependent spanning set");

    KahlerForms kf = kahler_forms(g, q);
    bool omega_zero = true;
    bool j_orth = true;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a < b && !pair(kf.Omega_I, wedge(v[a], v[b])).is_zero()) omega_zero = false;
            if (!metric_eval(g, apply(q.J, v[a]), v[b]).is_zero()) j_orth = false;
        }
    rep.omega_vanishes = omega_zero;
    rep.j_orthogonal = j_orth;
    rep.criteria_agree = (omega_zero == j_orth);
    if (!rep.criteria_agree)
        throw DomainError("lagrangian_test: Omega_I|V = 0 and JV _|_ V disagree");
    rep.transversal = is_transversal(v, q);
    return rep;
}

GaussianRational psi_positivity(const std::vector<Poly>& v, const CalibrationForm& cal,
                                const QuaternionicStructure& q) {
    if (static_cast<int>(v.size()) != cal.n)
        throw DomainError("psi_positivity: expected n spanning vectors");
    if (!is_transversal(v, q)) throw DomainError("psi_positivity: JV /\\ V != 0");
    GaussianRational val = pair(cal.psi, lagrangian_polyvector(v));
    if (!val.is_real() || val.re.sign() <= 0)
        throw DomainError("psi_positivity: value " + val.str() + " is not strictly positive");
    return val;
}

} // namespace hypercal
