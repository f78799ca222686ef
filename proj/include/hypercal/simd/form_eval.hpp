#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hypercal/multivector.hpp"

namespace hypercal::simd {

// Evaluation of a fixed k-form on batches of k-frames:
//   value = sum_T c_T * det(rows_T of the frame matrix)
// computed as a progressive wedge of the frame columns in dense Lambda^j
// coordinates, then a sparse dot with the form coefficients. Every kernel
// executes the same transition list, so scalar and SIMD variants differ
// only by floating-point association.

struct WedgeTransition {
    std::int32_t src;   // index into the level-j buffer
    std::int32_t dst;   // index into the level-(j+1) buffer
    std::int32_t row;   // frame row multiplied in
    float sign;         // +1 or -1
};

struct EvalPlan {
    int dim = 0;
    int k = 0;
    std::vector<std::size_t> level_sizes;              // C(dim, j), j = 1..k
    std::vector<std::vector<WedgeTransition>> steps;   // k-1 transition lists
    std::vector<std::int32_t> coef_index;              // rank into level-k buffer
    std::vector<double> coef_re, coef_im;
    std::size_t scratch_doubles(std::size_t lanes) const {
        std::size_t mx = 0;
        for (std::size_t s : level_sizes) mx = std::max(mx, s);
        return 2 * mx * lanes;
    }
};

EvalPlan build_eval_plan(const FormF& form);

// frames layout: frames[(col * dim + row) * lanes + lane], one column per
// frame vector; out_re/out_im hold one value per lane.
using EvalFn = void (*)(const EvalPlan&, const double* frames, std::size_t lanes, double* out_re,
                        double* out_im, double* scratch);

void eval_batch_scalar(const EvalPlan& plan, const double* frames, std::size_t lanes,
                       double* out_re, double* out_im, double* scratch);
#if defined(HYPERCAL_HAVE_AVX2_BUILD)
void eval_batch_avx2(const EvalPlan& plan, const double* frames, std::size_t lanes,
                     double* out_re, double* out_im, double* scratch);
#endif

enum class Kernel { automatic, scalar, avx2 };

Kernel kernel_from_string(const std::string& name);

// Runtime selection; "automatic" probes CPU support once.
EvalFn select_kernel(Kernel k);
const char* kernel_name(Kernel k);
bool avx2_available();

} // namespace hypercal::simd
