#include "hypercal/simd/form_eval.hpp"

#include <map>

namespace hypercal::simd {

EvalPlan build_eval_plan(const FormF& form) {
    EvalPlan plan;
    plan.dim = form.frame()->dim;
    plan.k = form.degree();
    if (plan.k < 1) throw DomainError("eval plan needs a form of degree >= 1");

    // rank tables per level: mask -> dense index, in increasing mask order
    std::vector<std::map<Mask, std::int32_t>> rank(plan.k + 1);
    for (Mask m = 0; m < (Mask(1) << plan.dim); ++m) {
        int deg = mask_degree(m);
        if (deg >= 1 && deg <= plan.k) {
            auto& r = rank[deg];
            std::int32_t idx = static_cast<std::int32_t>(r.size());
            r.emplace(m, idx);
        }
    }
    for (int j = 1; j <= plan.k; ++j) plan.level_sizes.push_back(rank[j].size());

    for (int j = 1; j < plan.k; ++j) {
        std::vector<WedgeTransition> step;
        for (const auto& [m, src] : rank[j]) {
            for (int b = 0; b < plan.dim; ++b) {
                if (m & (Mask(1) << b)) continue;
                Mask next = m | (Mask(1) << b);
                float sign = wedge_sign(m, Mask(1) << b) < 0 ? -1.0f : 1.0f;
                step.push_back({src, rank[j + 1].at(next), b, sign});
            }
        }
        plan.steps.push_back(std::move(step));
    }

    for (const auto& [m, c] : form.terms()) {
        plan.coef_index.push_back(rank[plan.k].at(m));
        plan.coef_re.push_back(c.real());
        plan.coef_im.push_back(c.imag());
    }
    return plan;
}

Kernel kernel_from_string(const std::string& name) {
    if (name == "auto") return Kernel::automatic;
    if (name == "scalar") return Kernel::scalar;
    if (name == "avx2") return Kernel::avx2;
    throw DomainError("unknown kernel '" + name + "' (auto|scalar|avx2)");
}

bool avx2_available() {
#if defined(HYPERCAL_HAVE_AVX2_BUILD) && defined(__x86_64__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

EvalFn select_kernel(Kernel k) {
    switch (k) {
        case Kernel::scalar:
            return eval_batch_scalar;
        case Kernel::avx2:
#if defined(HYPERCAL_HAVE_AVX2_BUILD)
            if (avx2_available()) return eval_batch_avx2;
#endif
            throw DomainError("avx2 kernel not available on this machine");
        case Kernel::automatic:
        default:
#if defined(HYPERCAL_HAVE_AVX2_BUILD)
            if (avx2_available()) return eval_batch_avx2;
#endif
            return eval_batch_scalar;
    }
}

const char* kernel_name(Kernel k) {
    switch (k) {
        case Kernel::scalar:
            return "scalar";
        case Kernel::avx2:
            return "avx2";
        case Kernel::automatic:
        default:
            return avx2_available() ? "avx2" : "scalar";
    }
}

} // namespace hypercal::simd
