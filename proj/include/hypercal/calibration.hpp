#pragma once

#include "hypercal/metric.hpp"

namespace hypercal {

// Holomorphic volume form of type (2n,0), real for eta -> conj(J eta),
// normalized to a = 1 relative to the declared coframe factors.
struct VolumeForm {
    Form phi;
    int n = 0;
    // one frame index per complex coordinate, in factor order
    std::vector<int> selection;
};

// Builds the product of coframe factors e^s - i (I e^s) over the selection.
// The selection lists one frame index per complex coordinate (2n indices on
// a 4n-dimensional frame); for each selected index the J-image must again be
// a +-frame vector, which is how flat and double frames are laid out.
VolumeForm standard_volume_form(const QuaternionicStructure& q, const std::vector<int>& selection);

// Default selection for the standard flat frame: indices 0,2 of every
// quaternionic quadruple.
std::vector<int> flat_selection(int n);

struct CalibrationForm {
    Form psi;
    int n = 0;
};

// Psi = (-i)^n Y^n Phi, certified (n,n), maximal weight, and real-valued on
// real polyvectors.
CalibrationForm psi(const QuaternionicStructure& q, const VolumeForm& vol);

// The Lagrangian polyvector (-i)^n v_1 ^ conj(v_1) ^ ... ^ v_n ^ conj(v_n).
Poly lagrangian_polyvector(const std::vector<Poly>& v);

// Dual (1,0) tangent vectors of the volume-form factors; the first n of
// them span the reference Lagrangian subspace of the flat model.
std::vector<Poly> selection_duals(const QuaternionicStructure& q, const VolumeForm& vol);

struct LagrangianReport {
    bool spans_ok = false;       // n complex-independent vectors
    bool omega_vanishes = false; // Omega_I restricted to V is zero
    bool j_orthogonal = false;   // g(JV, V) = 0
    bool criteria_agree = false; // the two conditions coincide (asserted)
    bool transversal = false;    // JV intersects V trivially
};

// V is given by n (1,0) tangent vectors.
LagrangianReport lagrangian_test(const std::vector<Poly>& v, const HyperhermitianMetric& g,
                                 const QuaternionicStructure& q);

// <Psi, xi> on the polyvector built from the spanning set; requires the
// transversality JV /\ V = 0 and asserts the value is real and > 0.
GaussianRational psi_positivity(const std::vector<Poly>& v, const CalibrationForm& cal,
                                const QuaternionicStructure& q);

bool is_transversal(const std::vector<Poly>& v, const QuaternionicStructure& q);

} // namespace hypercal
