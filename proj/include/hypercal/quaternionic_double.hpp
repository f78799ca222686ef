#pragma once

#include "hypercal/lie_model.hpp"

namespace hypercal {

// Etale-affine model of an affine complex manifold: base algebra g with
// complex structure I, linear part rho (one matrix per basis vector: the
// derivative of the translation action), translation part t. Encodes a flat
// torsion-free complex connection at the algebra level.
struct AffineComplexModel {
    LieModel base;            // brackets of g; no quaternionic structure
    Endo I_base;              // complex structure on g
    std::vector<Matrix> rho;  // rho[i] : R^{2n} -> R^{2n}
    Matrix t;                 // invertible g -> R^{2n}
    bool lattice = false;     // informational integer-monodromy flag
};

// Checks flatness rho([x,y]) = [rho(x), rho(y)], torsion-freeness
// rho(x) t(y) - rho(y) t(x) = t([x,y]), complex-affinity rho(x) I_std =
// I_std rho(x) with I_std = t I t^-1, and invertibility of t.
ValidationReport validate_affine(const AffineComplexModel& a);

// Whether exp(rho(x)) is an integer matrix for every basis x (finite sum,
// nilpotent case only); informational.
bool integer_monodromy(const AffineComplexModel& a);

// g~ = g x| R^{2n} with [(x,u),(y,v)] = ([x,y], rho(x)v - rho(y)u), carrying
// the hypercomplex structure I = diag(-I_b, I_b), J = ((0, Id), (-Id, 0)),
// K = I*J in the horizontal-first frame.
struct DoubleModel {
    LieModel model;  // with quaternionic structure attached
    LieModel base;   // over its own frame
    Endo I_base;
    int n = 0;       // quaternionic dimension of the double (dim = 4n)
    std::vector<int> horizontal, vertical;
    Matrix projection; // 2n x 4n
};

DoubleModel build_double(const AffineComplexModel& a);

// Volume form on the double from the canonical frame selection
// (one factor per horizontal and per vertical complex coordinate);
// d Phi = 0 is verified against the CE differential.
VolumeForm double_volume_form(const DoubleModel& d);

struct PsiReport {
    CalibrationForm cal;
    bool closed = false;
};

// Psi with the exact closedness verdict under the CE differential.
PsiReport double_psi(const DoubleModel& d);

// h = G (+) G in the horizontal/vertical split; verified hyperhermitian,
// and the vertical space is certified Lagrangian for it.
HyperhermitianMetric fibration_metric(const DoubleModel& d, const HyperhermitianMetric& g_base);

struct ThetaReport {
    Form theta;              // real invariant 2-form on the base frame
    bool type_11 = false;    // pure (1,1) with respect to I_base
    bool positive = false;   // theta(v, I_b v) > 0, exact + sampled
    bool closed = false;     // d theta = 0 in the base CE complex
    bool theta_closed_big = false; // d Theta = 0 on the double
    bool vertical_lagrangian = false; // certificate precondition
};

// Theta = Psi ^ omega_I; theta(xi, eta~) = evaluation of the doubly
// contracted form on the unit-volume vertical polyvector.
ThetaReport theta_pushforward(const DoubleModel& d, const HyperhermitianMetric& h);

struct ScanOutcome {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t hkt_count = 0;
    std::size_t min_defect = 0; // min nonzero coefficients of del Omega_I
    bool all_agree = true;      // both HKT criteria agreed on every draw
};

ScanOutcome hkt_obstruction_scan(const DoubleModel& d, std::size_t samples, std::uint64_t seed);
ScanOutcome hkt_obstruction_scan(const LieModel& m, std::size_t samples, std::uint64_t seed);

// ---- builtin affine models --------------------------------------------------

// Abelian R^{2n} with rho = 0, t = Id: the torus case.
AffineComplexModel builtin_affine_flat(int n);
// Heisenberg x R with the bracket [e1, f1] = 2 e2 derived from the group law.
AffineComplexModel builtin_kodaira_base();
// Complex Heisenberg algebra, dim 6.
AffineComplexModel builtin_iwasawa_base();

} // namespace hypercal
