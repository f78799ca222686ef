#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypercal/endomorphism.hpp"

namespace hypercal {

// One named exact check with an optional human-readable witness.
struct CheckItem {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct ValidationReport {
    std::vector<CheckItem> checks;
    int n = 0;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(std::string name, bool pass, std::string witness = "") {
        checks.push_back({std::move(name), pass, std::move(witness)});
    }
};

// Triple of anticommuting complex structures on a 4n-dimensional frame,
// with the product identity I*J = K on polyvector matrices.
struct QuaternionicStructure {
    FramePtr frame;
    Endo I, J, K;
    int n = 0;

    QuaternionicStructure() = default;
    QuaternionicStructure(FramePtr f, Endo i, Endo j, Endo k);
};

ValidationReport validate_quaternionic(const FramePtr& frame, const Endo& I, const Endo& J,
                                       const Endo& K);

// The standard flat structure on H^n: per coordinate quadruple
// (x, Ix, y, Iy) the matrices act blockwise and I*J = K holds.
QuaternionicStructure standard_structure(const FramePtr& frame);

// L = aI + bJ + cK with a^2+b^2+c^2 = 1; L^2 = -Id is re-verified.
struct InducedComplexStructure {
    Rational a, b, c;
    Endo L;
};

InducedComplexStructure induced(const QuaternionicStructure& q, const Rational& a,
                                const Rational& b, const Rational& c);
// Float variant for sampling paths only; norm checked to 1e-12.
EndoT<std::complex<double>> induced_float(const QuaternionicStructure& q, double a, double b,
                                          double c);

// sl(2) triple acting on the exterior algebra. The stored matrices act on
// polyvectors; the transposes act on forms and satisfy the standard
// commutation relations [X,Y]=H, [H,X]=2X, [H,Y]=-2Y together with
//   H|(1,0) = +1,  X|(1,0) = 0,  Y|(1,0) = J,
//   H|(0,1) = -1,  X|(0,1) = -J, Y|(0,1) = 0
// on 1-forms. Derivation extension is applied on the fly per degree.
struct Sl2Triple {
    Endo H, X, Y;
};

Sl2Triple sl2_triple(const QuaternionicStructure& q);

// Casimir element H^2 + 2(XY + YX) applied through derivation extensions.
template <class M>
M casimir_apply(const Sl2Triple& t, const M& x) {
    M hx = extend_derivation(t.H, extend_derivation(t.H, x));
    M xy = extend_derivation(t.X, extend_derivation(t.Y, x));
    M yx = extend_derivation(t.Y, extend_derivation(t.X, x));
    GaussianRational two(2);
    return hx + two * xy + two * yx;
}

// Isotypic decomposition of Lambda^k: weights s in {k mod 2, ..., smax} with
// smax = min(k, 4n-k); the projector for weight s is the Lagrange polynomial
// in the Casimir singling out the eigenvalue s(s+2).
struct WeightDecomposition {
    int degree = 0;
    int max_weight = 0;
    // weight -> complex dimension of the isotypic component
    std::map<int, long> multiplicities;
};

std::vector<int> weight_list(int degree, int n4); // descending

// Projector onto the weight-s isotypic component of Lambda^degree.
Form weight_project(const Sl2Triple& t, const Form& x, int s, int n4);
Poly weight_project(const Sl2Triple& t, const Poly& x, int s, int n4);

WeightDecomposition weight_decompose(const QuaternionicStructure& q, int degree);

// Equivariant projection onto the maximal-weight component.
Form project_plus(const QuaternionicStructure& q, const Form& x);

// Hodge (p,q)-components with respect to an integrable L: the (p,q) part is
// the (p-q)-eigencomponent of the derivation extension of -i*L on forms.
std::map<std::pair<int, int>, Form> bigrade(const Form& x, const Endo& L);

// Single (p,q)-component.
Form bigrade_component(const Form& x, const Endo& L, int p, int qdeg);

bool is_pure_type(const Form& x, const Endo& L, int p, int qdeg);

// Y^q applied to a pure (p+q,0) form; lands in the (p,q) part of the
// maximal-weight component. Exposed unnormalized.
Form r_pq(const QuaternionicStructure& q, const Form& x, int qdeg);

} // namespace hypercal
