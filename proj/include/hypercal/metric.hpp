#pragma once

#include "hypercal/quaternionic.hpp"
#include "hypercal/rng.hpp"

namespace hypercal {

// Positive-definite symmetric bilinear form with real rational entries,
// invariant under I, J, K: L^T G L = G for the three structures.
struct HyperhermitianMetric {
    FramePtr frame;
    Matrix G;

    HyperhermitianMetric() = default;
    // Validates symmetry, reality and positive definiteness (Sylvester).
    HyperhermitianMetric(FramePtr f, Matrix g);
};

// Structured report; throws nothing, callers inspect.
ValidationReport validate_metric(const HyperhermitianMetric& g, const QuaternionicStructure& q);

HyperhermitianMetric standard_metric(const FramePtr& frame);

// g(x, y) for complexified vectors, bilinear extension.
GaussianRational metric_eval(const HyperhermitianMetric& g, const Poly& x, const Poly& y);

// Basis of the (1,0) subspace of an integrable L (projector images of the
// frame, pruned to an independent set).
std::vector<Poly> holomorphic_basis(const FramePtr& frame, const Endo& L);

struct KahlerForms {
    Form omega_I, omega_J, omega_K;
    Form Omega_I; // omega_J + i omega_K, certified pure (2,0) under I
};

// omega_L(x,y) = g(Lx, y). Construction re-verifies compatibility, the
// (2,0)-purity of Omega_I and the identity Omega_I(X,Y) = 2 g(JX,Y) on a
// basis of (1,0) vectors.
KahlerForms kahler_forms(const HyperhermitianMetric& g, const QuaternionicStructure& q);

// Exact random hyperhermitian metric: average of A^T A over the group
// {Id, I, J, K}, with A a seeded random integer matrix (resampled until
// invertible). Always compatible and positive definite by construction.
HyperhermitianMetric random_hyperhermitian(const QuaternionicStructure& q, Xoshiro256pp& rng);

} // namespace hypercal
