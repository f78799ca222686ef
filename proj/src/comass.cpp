#include "hypercal/comass.hpp"

#include <cmath>

#include "hypercal/rng.hpp"

namespace hypercal {

namespace {

struct FrameSampler {
    int dim;
    int k;
    std::vector<double> G; // row-major dim x dim

    double inner(const double* x, const double* y) const {
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) {
            double xi = x[i];
            if (xi == 0.0) continue;
            const double* row = G.data() + static_cast<std::size_t>(i) * dim;
            for (int j = 0; j < dim; ++j) acc += xi * row[j] * y[j];
        }
        return acc;
    }

    // Modified Gram-Schmidt in the G inner product; false on degeneracy.
    bool orthonormalize(double* frame) const {
        for (int c = 0; c < k; ++c) {
            double* v = frame + static_cast<std::size_t>(c) * dim;
            for (int p = 0; p < c; ++p) {
                const double* u = frame + static_cast<std::size_t>(p) * dim;
                double proj = inner(v, u);
                for (int i = 0; i < dim; ++i) v[i] -= proj * u[i];
            }
            double nrm2 = inner(v, v);
            if (!(nrm2 > 1e-16)) return false;
            double inv = 1.0 / std::sqrt(nrm2);
            for (int i = 0; i < dim; ++i) v[i] *= inv;
        }
        return true;
    }
};

// column-major frame -> lane-interleaved batch slot
void scatter_frame(const double* frame, int dim, int k, double* batch, std::size_t lanes,
                   std::size_t lane) {
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < dim; ++r)
            batch[(static_cast<std::size_t>(c) * dim + r) * lanes + lane] =
                frame[static_cast<std::size_t>(c) * dim + r];
}

} // namespace

std::vector<Poly> reference_lagrangian_span(const QuaternionicStructure& q, const VolumeForm& vol) {
    std::vector<Poly> out;
    for (int t = 0; t < vol.n; ++t) {
        int idx = vol.selection[2 * t];
        Poly v(q.frame, 1);
        v.add_term(Mask(1) << idx, GaussianRational(1));
        out.push_back(v);
        out.push_back(apply(q.I, v));
    }
    return out;
}

ComassReport comass_sample(const CalibrationForm& cal, const HyperhermitianMetric& g,
                           const std::vector<Poly>& reference_real_span,
                           const ComassOptions& opts) {
    if (opts.samples == 0) throw DomainError("comass_sample: N must be positive");
    const int dim = cal.psi.frame()->dim;
    const int k = 2 * cal.n;
    if (static_cast<int>(reference_real_span.size()) != k)
        throw DomainError("comass_sample: reference span must have 2n vectors");

    simd::EvalPlan plan = simd::build_eval_plan(to_float(cal.psi));
    simd::EvalFn eval = simd::select_kernel(opts.kernel);

    FrameSampler sampler;
    sampler.dim = dim;
    sampler.k = k;
    sampler.G.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            sampler.G[static_cast<std::size_t>(i) * dim + j] = g.G(i, j).re.to_double();

    constexpr std::size_t kLanes = 16;
    std::vector<double> batch(static_cast<std::size_t>(k) * dim * kLanes);
    std::vector<double> scratch(plan.scratch_doubles(kLanes));
    std::vector<double> out_re(kLanes), out_im(kLanes);

    ComassReport rep;
    rep.samples = opts.samples;
    rep.seed = opts.seed;
    rep.kernel = simd::kernel_name(opts.kernel);

    // reference value
    std::vector<double> ref_frame(static_cast<std::size_t>(k) * dim, 0.0);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < dim; ++r)
            ref_frame[static_cast<std::size_t>(c) * dim + r] =
                reference_real_span[c].coeff(Mask(1) << r).re.to_double();
    if (!sampler.orthonormalize(ref_frame.data()))
        throw DomainError("comass_sample: degenerate reference span");
    {
        std::vector<double> one(static_cast<std::size_t>(k) * dim);
        std::copy(ref_frame.begin(), ref_frame.end(), one.begin());
        std::vector<double> sc(plan.scratch_doubles(1));
        double re = 0, im = 0;
        eval(plan, one.data(), 1, &re, &im, sc.data());
        rep.lagrangian_value = std::hypot(re, im);
    }

    std::vector<double> best_frame(static_cast<std::size_t>(k) * dim, 0.0);
    double best = -1.0;

    // batch storage of candidate frames so the argmax can be recovered
    std::vector<double> lane_frames(static_cast<std::size_t>(k) * dim * kLanes);

    std::size_t drawn = 0;
    std::uint64_t stream_index = 0;
    std::vector<double> fr(static_cast<std::size_t>(k) * dim);
    while (drawn < opts.samples) {
        std::size_t lanes = std::min(kLanes, opts.samples - drawn);
        std::size_t lane = 0;
        while (lane < lanes) {
            Xoshiro256pp rng = substream(opts.seed, stream_index++);
            for (auto& x : fr) x = rng.gaussian();
            if (!sampler.orthonormalize(fr.data())) {
                ++rep.degenerate_redraws;
                continue;
            }
            scatter_frame(fr.data(), dim, k, batch.data(), lanes, lane);
            std::copy(fr.begin(), fr.end(),
                      lane_frames.begin() + static_cast<std::ptrdiff_t>(lane * fr.size()));
            ++lane;
        }
        eval(plan, batch.data(), lanes, out_re.data(), out_im.data(), scratch.data());
        for (std::size_t l = 0; l < lanes; ++l) {
            double v = std::hypot(out_re[l], out_im[l]);
            if (v > best) {
                best = v;
                std::copy(lane_frames.begin() + static_cast<std::ptrdiff_t>(l * fr.size()),
                          lane_frames.begin() + static_cast<std::ptrdiff_t>((l + 1) * fr.size()),
                          best_frame.begin());
            }
        }
        drawn += lanes;
    }
    rep.max_drawn = best;

    if (opts.polish && opts.polish_budget > 0) {
        // seeded random search around the best draw; step shrinks on
        // failure streaks
        Xoshiro256pp rng = substream(opts.seed, 0xC0FFEEULL);
        std::vector<double> cand(fr.size());
        std::vector<double> sc(plan.scratch_doubles(1));
        double step = 0.25;
        int fails = 0;
        for (std::size_t e = 0; e < opts.polish_budget; ++e) {
            std::copy(best_frame.begin(), best_frame.end(), cand.begin());
            for (auto& x : cand) x += step * rng.gaussian();
            if (!sampler.orthonormalize(cand.data())) continue;
            double re = 0, im = 0;
            eval(plan, cand.data(), 1, &re, &im, sc.data());
            ++rep.polish_evals;
            double v = std::hypot(re, im);
            if (v > best) {
                best = v;
                std::copy(cand.begin(), cand.end(), best_frame.begin());
                fails = 0;
            } else if (++fails >= 32) {
                step *= 0.5;
                fails = 0;
                if (step < 1e-8) break;
            }
        }
    }

    rep.max = best;
    rep.ratio = rep.lagrangian_value > 0 ? rep.max / rep.lagrangian_value : 0.0;
    rep.argmax = best_frame;
    return rep;
}

} // namespace hypercal
