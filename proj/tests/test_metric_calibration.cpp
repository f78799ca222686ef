#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypercal/comass.hpp"
#include "hypercal/lie_model.hpp"
#include "test_util.hpp"

using namespace hypercal;
using namespace hypercal::testutil;

namespace {

Form holomorphic_coframe(const QuaternionicStructure& q, int idx) {
    Form e = Form::basis(q.frame, {idx});
    return e - GaussianRational::i() * apply(q.I, e);
}

} // namespace

TEST_CASE("metric validation: symmetry, reality, positive definiteness") {
    FramePtr f = make_frame(4);
    CHECK_NOTHROW(standard_metric(f));

    Matrix asym = Matrix::identity(4);
    asym(0, 1) = GaussianRational(1);
    CHECK_THROWS_AS(HyperhermitianMetric(f, asym), DomainError);

    Matrix indef = Matrix::identity(4);
    indef(2, 2) = GaussianRational(-1);
    CHECK_THROWS_AS(HyperhermitianMetric(f, indef), DomainError);

    Matrix cplx = Matrix::identity(4);
    cplx(0, 0) = GaussianRational::i();
    CHECK_THROWS_AS(HyperhermitianMetric(f, cplx), DomainError);
}

TEST_CASE("kahler forms of the flat metric") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    HyperhermitianMetric g = standard_metric(f);
    KahlerForms kf = kahler_forms(g, q);

    // hand expansion in the frame (x, Ix, y, Iy)
    CHECK(kf.omega_I == Form::basis(f, {0, 1}) + Form::basis(f, {2, 3}));
    CHECK(is_pure_type(kf.Omega_I, q.I, 2, 0));
    CHECK(kf.Omega_I == kf.omega_J + GaussianRational::i() * kf.omega_K);

    // linearity: scaling the metric scales all three forms
    Matrix g2 = Matrix::identity(4);
    for (auto& x : g2.a) x = GaussianRational(2) * x;
    KahlerForms kf2 = kahler_forms(HyperhermitianMetric(f, g2), q);
    CHECK(kf2.omega_I == GaussianRational(2) * kf.omega_I);
    CHECK(kf2.omega_J == GaussianRational(2) * kf.omega_J);
    CHECK(kf2.omega_K == GaussianRational(2) * kf.omega_K);
}

TEST_CASE("random hyperhermitian metrics are exactly compatible") {
    for (int n : {1, 2}) {
        FramePtr f = make_frame(4 * n);
        QuaternionicStructure q = standard_structure(f);
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            Xoshiro256pp rng = substream(42, seed);
            HyperhermitianMetric g = random_hyperhermitian(q, rng);
            CHECK(validate_metric(g, q).ok());
            KahlerForms kf = kahler_forms(g, q);
            CHECK(is_pure_type(kf.Omega_I, q.I, 2, 0));
            CHECK(project_plus(q, kf.omega_I) == kf.omega_I);
        }
        // determinism of the draw
        Xoshiro256pp r1 = substream(42, 3), r2 = substream(42, 3);
        CHECK(random_hyperhermitian(q, r1).G == random_hyperhermitian(q, r2).G);
    }
}

TEST_CASE("standard volume form on flat models") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    VolumeForm vol = standard_volume_form(q, flat_selection(1));
    CHECK(vol.n == 1);
    CHECK(is_pure_type(vol.phi, q.I, 2, 0));
    // reality was verified at construction; check once more explicitly
    CHECK(extend_multiplicative(q.J, vol.phi).conj() == vol.phi);
    // expansion: (e^1 + i e^2)(e^3 + i e^4) in 1-based labels
    Form expected = wedge(holomorphic_coframe(q, 0), holomorphic_coframe(q, 2));
    CHECK(vol.phi == expected);

    CHECK_THROWS_AS(standard_volume_form(q, {0, 0}), DomainError);
    CHECK_THROWS_AS(standard_volume_form(q, {0}), DomainError);
}

TEST_CASE("psi on flat H^1 and H^2: value n! on the standard Lagrangian") {
    for (int n : {1, 2}) {
        FramePtr f = make_frame(4 * n);
        QuaternionicStructure q = standard_structure(f);
        VolumeForm vol = standard_volume_form(q, flat_selection(n));
        CalibrationForm cal = psi(q, vol);
        CHECK(is_pure_type(cal.psi, q.I, n, n));
        CHECK(project_plus(q, cal.psi) == cal.psi);
        CHECK(cal.psi.is_real());

        std::vector<Poly> duals = selection_duals(q, vol);
        std::vector<Poly> lag;
        for (int t = 0; t < n; ++t) lag.push_back(duals[2 * t]);
        GaussianRational expected(n == 1 ? 1 : 2);
        CHECK(psi_positivity(lag, cal, q) == expected);

        // |<Phi, Y^n xi>| = n!
        Sl2Triple t = sl2_triple(q);
        Poly yxi = lagrangian_polyvector(lag);
        for (int k = 0; k < n; ++k) yxi = extend_derivation(t.Y, yxi);
        GaussianRational phi_val = pair(vol.phi, yxi);
        CHECK(phi_val * phi_val.conj() == GaussianRational(n == 1 ? 1 : 4));
    }
}

TEST_CASE("psi on flat H^1 equals twice omega_I") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    CalibrationForm cal = psi(q, standard_volume_form(q, flat_selection(1)));
    Form omega_I = Form::basis(f, {0, 1}) + Form::basis(f, {2, 3});
    CHECK(cal.psi == GaussianRational(2) * omega_I);
}

TEST_CASE("psi is linear in the volume form") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    VolumeForm vol = standard_volume_form(q, flat_selection(1));
    VolumeForm scaled = vol;
    scaled.phi = GaussianRational(3) * scaled.phi;
    CHECK(psi(q, scaled).psi == GaussianRational(3) * psi(q, vol).psi);
}

TEST_CASE("psi pairs to a real number with every real polyvector") {
    FramePtr f = make_frame(8);
    QuaternionicStructure q = standard_structure(f);
    CalibrationForm cal = psi(q, standard_volume_form(q, flat_selection(2)));
    Xoshiro256pp rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Poly v = random_poly(f, 4, rng, 5, /*complex_part=*/false);
        CHECK(pair(cal.psi, v).is_real());
    }
}

TEST_CASE("lagrangian_test on the standard subspace and its failure modes") {
    FramePtr f = make_frame(8);
    QuaternionicStructure q = standard_structure(f);
    HyperhermitianMetric g = standard_metric(f);
    VolumeForm vol = standard_volume_form(q, flat_selection(2));
    std::vector<Poly> duals = selection_duals(q, vol);

    std::vector<Poly> lag = {duals[0], duals[2]};
    LagrangianReport rep = lagrangian_test(lag, g, q);
    CHECK(rep.spans_ok);
    CHECK(rep.omega_vanishes);
    CHECK(rep.j_orthogonal);
    CHECK(rep.criteria_agree);
    CHECK(rep.transversal);

    // a quaternionic line: u and J conj(u) span an I-complex plane that is
    // J-invariant as a real subspace, so transversality fails
    std::vector<Poly> quat_line = {duals[0], apply(q.J, duals[0].conj())};
    LagrangianReport rep2 = lagrangian_test(quat_line, g, q);
    CHECK(rep2.spans_ok);
    CHECK_FALSE(rep2.transversal);

    // dependent set rejected
    std::vector<Poly> dep = {duals[0], GaussianRational(2) * duals[0]};
    CHECK_THROWS_AS(lagrangian_test(dep, g, q), DomainError);

    // non-(1,0) vectors rejected
    Poly real_vec(f, 1);
    real_vec.add_term(1, GaussianRational(1));
    std::vector<Poly> bad = {duals[0], real_vec};
    CHECK_THROWS_AS(lagrangian_test(bad, g, q), DomainError);
}

TEST_CASE("lagrangian criteria agree on the H^1 line") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    HyperhermitianMetric g = standard_metric(f);
    VolumeForm vol = standard_volume_form(q, flat_selection(1));
    std::vector<Poly> line = {selection_duals(q, vol)[0]};
    LagrangianReport rep = lagrangian_test(line, g, q);
    CHECK(rep.omega_vanishes); // Omega_I restricted to a complex line vanishes
    CHECK(rep.j_orthogonal);
    CHECK(rep.criteria_agree);
    CHECK(rep.transversal);
}

TEST_CASE("psi_positivity: multilinearity and transversality guard") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    VolumeForm vol = standard_volume_form(q, flat_selection(1));
    CalibrationForm cal = psi(q, vol);
    Poly v = selection_duals(q, vol)[0];

    CHECK(psi_positivity({v}, cal, q) == GaussianRational(1));
    // scaling the spanning vector by 2 scales xi = (-i) v ^ conj(v) by 4
    CHECK(psi_positivity({GaussianRational(2) * v}, cal, q) == GaussianRational(4));

    // complex phases leave the value unchanged
    Poly iv = GaussianRational::i() * v;
    CHECK(psi_positivity({iv}, cal, q) == GaussianRational(1));
}

TEST_CASE("psi_positivity over randomized transversal subspaces") {
    for (int n : {1, 2}) {
        FramePtr f = make_frame(4 * n);
        QuaternionicStructure q = standard_structure(f);
        VolumeForm vol = standard_volume_form(q, flat_selection(n));
        CalibrationForm cal = psi(q, vol);
        Xoshiro256pp rng(37 + n);
        int tested = 0;
        while (tested < 10) {
            std::vector<Poly> v;
            for (int t = 0; t < n; ++t) {
                Poly x = random_poly(f, 1, rng, 3);
                v.push_back(GaussianRational(Rational(1, 2)) *
                            (x - GaussianRational::i() * apply(q.I, x)));
            }
            Matrix span(f->dim, n);
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < f->dim; ++r) span(r, c) = v[c].coeff(Mask(1) << r);
            if (rank(span) != n || !is_transversal(v, q)) continue;
            ++tested;
            GaussianRational val = psi_positivity(v, cal, q);
            CHECK(val.is_real());
            CHECK(val.re.sign() > 0);
        }
    }
}

TEST_CASE("comass sampling: determinism, scaling, bounds") {
    LieModel m = builtin_flat(1);
    const QuaternionicStructure& q = *m.structure;
    VolumeForm vol = standard_volume_form(q, flat_selection(1));
    CalibrationForm cal = psi(q, vol);
    std::vector<Poly> ref = reference_lagrangian_span(q, vol);

    ComassOptions opts;
    opts.samples = 2000;
    opts.seed = 5;
    ComassReport r1 = comass_sample(cal, *m.metric, ref, opts);
    ComassReport r2 = comass_sample(cal, *m.metric, ref, opts);
    CHECK(r1.max == r2.max);
    CHECK(r1.argmax == r2.argmax);
    CHECK(r1.lagrangian_value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r1.max <= r1.lagrangian_value * (1 + 1e-9));

    // scaling psi by 2 scales the report linearly
    CalibrationForm scaled = cal;
    scaled.psi = GaussianRational(2) * scaled.psi;
    ComassReport r3 = comass_sample(scaled, *m.metric, ref, opts);
    CHECK(r3.max == doctest::Approx(2 * r1.max).epsilon(1e-12));
    CHECK(r3.lagrangian_value == doctest::Approx(2 * r1.lagrangian_value).epsilon(1e-12));

    ComassOptions zero = opts;
    zero.samples = 0;
    CHECK_THROWS_AS(comass_sample(cal, *m.metric, ref, zero), DomainError);
}
