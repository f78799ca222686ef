#pragma once

#include "hypercal/calibration.hpp"
#include "hypercal/simd/form_eval.hpp"

namespace hypercal {

struct ComassOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    bool polish = true;            // seeded hill-climb from the best draws
    std::size_t polish_budget = 20000; // extra evaluations
    simd::Kernel kernel = simd::Kernel::automatic;
};

struct ComassReport {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double max = 0.0;               // over drawn and polished frames
    double lagrangian_value = 0.0;  // |Psi| on the reference frame
    double ratio = 0.0;
    double max_drawn = 0.0;         // over the drawn frames only
    std::size_t degenerate_redraws = 0;
    std::size_t polish_evals = 0;
    std::string kernel;
    std::vector<double> argmax; // column-major 2n frame vectors, dim each
};

// Draws N random G-orthonormal 2n-frames (seeded Gaussian + Gram-Schmidt),
// evaluates |<Psi, frame>| with the selected kernel, then polishes the best
// draws by seeded random search on the orthonormal frame manifold. The
// reference subspace is spanned by 2n real vectors (G-orthonormalized here).
ComassReport comass_sample(const CalibrationForm& cal, const HyperhermitianMetric& g,
                           const std::vector<Poly>& reference_real_span,
                           const ComassOptions& opts);

// Reference real span (e_idx, I e_idx per selected coordinate) of the
// standard Lagrangian subspace of a volume-form selection.
std::vector<Poly> reference_lagrangian_span(const QuaternionicStructure& q, const VolumeForm& vol);

} // namespace hypercal
