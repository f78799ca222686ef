#include <cstring>

#include "hypercal/simd/form_eval.hpp"

namespace hypercal::simd {

// Reference kernel. The AVX2 variant runs the identical transition lists,
// vectorized over lanes.
void eval_batch_scalar(const EvalPlan& plan, const double* frames, std::size_t lanes,
                       double* out_re, double* out_im, double* scratch) {
    const std::size_t dim = static_cast<std::size_t>(plan.dim);
    std::size_t max_level = 0;
    for (std::size_t s : plan.level_sizes) max_level = std::max(max_level, s);
    double* cur = scratch;
    double* nxt = scratch + max_level * lanes;

    // level 1: coordinates of the first frame column
    std::memcpy(cur, frames, dim * lanes * sizeof(double));

    for (int j = 0; j < plan.k - 1; ++j) {
        std::size_t next_size = plan.level_sizes[j + 1];
        std::memset(nxt, 0, next_size * lanes * sizeof(double));
        const double* col = frames + (static_cast<std::size_t>(j) + 1) * dim * lanes;
        for (const WedgeTransition& t : plan.steps[j]) {
            const double* src = cur + static_cast<std::size_t>(t.src) * lanes;
            double* dst = nxt + static_cast<std::size_t>(t.dst) * lanes;
            const double* v = col + static_cast<std::size_t>(t.row) * lanes;
            const double s = t.sign;
            for (std::size_t l = 0; l < lanes; ++l) dst[l] += s * src[l] * v[l];
        }
        std::swap(cur, nxt);
    }

    for (std::size_t l = 0; l < lanes; ++l) {
        out_re[l] = 0.0;
        out_im[l] = 0.0;
    }
    for (std::size_t i = 0; i < plan.coef_index.size(); ++i) {
        const double* w = cur + static_cast<std::size_t>(plan.coef_index[i]) * lanes;
        const double cr = plan.coef_re[i];
        const double ci = plan.coef_im[i];
        for (std::size_t l = 0; l < lanes; ++l) {
            out_re[l] += cr * w[l];
            out_im[l] += ci * w[l];
        }
    }
}

} // namespace hypercal::simd
