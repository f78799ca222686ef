#include <cstring>
#include <immintrin.h>

#include "hypercal/simd/form_eval.hpp"

namespace hypercal::simd {

// AVX2/FMA variant of the reference kernel, 4 lanes per vector op. Tail
// lanes (lanes % 4) fall back to plain scalar arithmetic.
void eval_batch_avx2(const EvalPlan& plan, const double* frames, std::size_t lanes,
                     double* out_re, double* out_im, double* scratch) {
    const std::size_t dim = static_cast<std::size_t>(plan.dim);
    std::size_t max_level = 0;
    for (std::size_t s : plan.level_sizes) max_level = std::max(max_level, s);
    double* cur = scratch;
    double* nxt = scratch + max_level * lanes;
    const std::size_t vec_end = lanes - lanes % 4;

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
            const __m256d sv = _mm256_set1_pd(s);
            std::size_t l = 0;
            for (; l < vec_end; l += 4) {
                __m256d a = _mm256_mul_pd(sv, _mm256_loadu_pd(src + l));
                __m256d d = _mm256_loadu_pd(dst + l);
                d = _mm256_fmadd_pd(a, _mm256_loadu_pd(v + l), d);
                _mm256_storeu_pd(dst + l, d);
            }
            for (; l < lanes; ++l) dst[l] += s * src[l] * v[l];
        }
        std::swap(cur, nxt);
    }

    std::memset(out_re, 0, lanes * sizeof(double));
    std::memset(out_im, 0, lanes * sizeof(double));
    for (std::size_t i = 0; i < plan.coef_index.size(); ++i) {
        const double* w = cur + static_cast<std::size_t>(plan.coef_index[i]) * lanes;
        const double cr = plan.coef_re[i];
        const double ci = plan.coef_im[i];
        const __m256d crv = _mm256_set1_pd(cr);
        const __m256d civ = _mm256_set1_pd(ci);
        std::size_t l = 0;
        for (; l < vec_end; l += 4) {
            __m256d wv = _mm256_loadu_pd(w + l);
            _mm256_storeu_pd(out_re + l, _mm256_fmadd_pd(crv, wv, _mm256_loadu_pd(out_re + l)));
            _mm256_storeu_pd(out_im + l, _mm256_fmadd_pd(civ, wv, _mm256_loadu_pd(out_im + l)));
        }
        for (; l < lanes; ++l) {
            out_re[l] += cr * w[l];
            out_im[l] += ci * w[l];
        }
    }
}

} // namespace hypercal::simd
