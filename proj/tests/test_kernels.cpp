#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypercal/simd/form_eval.hpp"
#include "test_util.hpp"

using namespace hypercal;
using namespace hypercal::testutil;

namespace {

// Evaluate via the exact library path: pair the form with the wedge of the
// frame columns. Independent of the kernel code entirely.
std::complex<double> exact_eval(const Form& form, const std::vector<double>& frame, int dim,
                                int k) {
    Poly w(form.frame(), 0);
    w.add_term(0, GaussianRational(1));
    for (int c = 0; c < k; ++c) {
        Poly v(form.frame(), 1);
        for (int r = 0; r < dim; ++r) {
            double x = frame[static_cast<std::size_t>(c) * dim + r];
            long num = static_cast<long>(x * (1 << 20));
            v.add_term(Mask(1) << r, GaussianRational(Rational(num, 1 << 20)));
        }
        w = wedge(w, v);
    }
    return pair(form, w).to_complex();
}

std::vector<double> quantized_random_frame(int dim, int k, Xoshiro256pp& rng) {
    std::vector<double> frame(static_cast<std::size_t>(dim) * k);
    for (auto& x : frame) {
        long num = rng.uniform_int(-(1 << 20), 1 << 20);
        x = static_cast<double>(num) / (1 << 20);
    }
    return frame;
}

void run_kernel_on_frames(simd::EvalFn fn, const simd::EvalPlan& plan,
                          const std::vector<std::vector<double>>& frames, int dim, int k,
                          std::size_t lanes, std::vector<std::complex<double>>& out) {
    std::vector<double> batch(static_cast<std::size_t>(k) * dim * lanes, 0.0);
    for (std::size_t l = 0; l < lanes; ++l)
        for (int c = 0; c < k; ++c)
            for (int r = 0; r < dim; ++r)
                batch[(static_cast<std::size_t>(c) * dim + r) * lanes + l] =
                    frames[l][static_cast<std::size_t>(c) * dim + r];
    std::vector<double> scratch(plan.scratch_doubles(lanes));
    std::vector<double> out_re(lanes), out_im(lanes);
    fn(plan, batch.data(), lanes, out_re.data(), out_im.data(), scratch.data());
    out.resize(lanes);
    for (std::size_t l = 0; l < lanes; ++l) out[l] = {out_re[l], out_im[l]};
}

} // namespace

TEST_CASE("scalar kernel matches the exact evaluation oracle") {
    Xoshiro256pp rng(71);
    for (int dim : {4, 8}) {
        FramePtr f = make_frame(dim);
        int k = dim / 2;
        Form form = random_form(f, k, rng, 6);
        simd::EvalPlan plan = simd::build_eval_plan(to_float(form));
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> frame = quantized_random_frame(dim, k, rng);
            std::vector<std::complex<double>> got;
            run_kernel_on_frames(simd::eval_batch_scalar, plan, {frame}, dim, k, 1, got);
            std::complex<double> want = exact_eval(form, frame, dim, k);
            double scale = std::max(1.0, std::abs(want));
            CHECK(std::abs(got[0] - want) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("avx2 kernel is equivalent to the scalar reference") {
    if (!simd::avx2_available()) {
        MESSAGE("avx2 not available on this machine; dispatch falls back to scalar");
        CHECK(simd::select_kernel(simd::Kernel::automatic) == &simd::eval_batch_scalar);
        return;
    }
    Xoshiro256pp rng(72);
    for (int dim : {4, 8, 12}) {
        FramePtr f = make_frame(dim);
        int k = dim / 2;
        Form form = random_form(f, k, rng, 8);
        simd::EvalPlan plan = simd::build_eval_plan(to_float(form));
        // lane counts that exercise both the vector body and the tail
        for (std::size_t lanes : {1u, 3u, 4u, 16u, 19u}) {
            std::vector<std::vector<double>> frames;
            for (std::size_t l = 0; l < lanes; ++l)
                frames.push_back(quantized_random_frame(dim, k, rng));
            std::vector<std::complex<double>> scalar_out, avx_out;
            run_kernel_on_frames(simd::eval_batch_scalar, plan, frames, dim, k, lanes, scalar_out);
            run_kernel_on_frames(simd::select_kernel(simd::Kernel::avx2), plan, frames, dim, k,
                                 lanes, avx_out);
            for (std::size_t l = 0; l < lanes; ++l) {
                double scale = std::max(1.0, std::abs(scalar_out[l]));
                CHECK(std::abs(avx_out[l] - scalar_out[l]) <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("kernel selection") {
    CHECK(simd::select_kernel(simd::Kernel::scalar) == &simd::eval_batch_scalar);
    CHECK(simd::kernel_from_string("scalar") == simd::Kernel::scalar);
    CHECK(simd::kernel_from_string("auto") == simd::Kernel::automatic);
    CHECK_THROWS_AS(simd::kernel_from_string("sse9"), DomainError);
    if (!simd::avx2_available())
        CHECK_THROWS_AS(simd::select_kernel(simd::Kernel::avx2), DomainError);
}

TEST_CASE("plan shape: level sizes are binomials, coefficients preserved") {
    FramePtr f = make_frame(6);
    Xoshiro256pp rng(73);
    Form form = random_form(f, 3, rng, 5);
    simd::EvalPlan plan = simd::build_eval_plan(to_float(form));
    CHECK(plan.level_sizes == std::vector<std::size_t>{6, 15, 20});
    CHECK(plan.coef_index.size() == form.term_count());
}
