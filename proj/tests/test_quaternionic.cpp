#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypercal/metric.hpp"
#include "test_util.hpp"

using namespace hypercal;
using namespace hypercal::testutil;

namespace {

// Brute-force oracle: isotypic dimensions from exact kernel ranks of the
// dense Casimir matrix, built through the independent dense-extension route.
std::map<int, long> casimir_multiplicities_oracle(const QuaternionicStructure& q, int k) {
    Sl2Triple t = sl2_triple(q);
    MatrixT<GaussianRational> H = dense_extension<Variance::form>(t.H, k);
    MatrixT<GaussianRational> X = dense_extension<Variance::form>(t.X, k);
    MatrixT<GaussianRational> Y = dense_extension<Variance::form>(t.Y, k);
    GaussianRational two(2);
    Matrix C = H * H + two * (X * Y) + two * (Y * X);
    std::map<int, long> mult;
    for (int s : weight_list(k, q.frame->dim)) {
        Matrix shifted = C - GaussianRational(s * (s + 2)) * Matrix::identity(C.rows);
        long dim_ker = static_cast<long>(kernel_basis(shifted).size());
        if (dim_ker > 0) mult[s] = dim_ker;
    }
    return mult;
}

Form holomorphic_coframe(const QuaternionicStructure& q, int idx) {
    Form e = Form::basis(q.frame, {idx});
    return e - GaussianRational::i() * apply(q.I, e);
}

} // namespace

TEST_CASE("validate_quaternionic: standard blocks pass, wrong orientation fails") {
    FramePtr f1 = make_frame(4);
    QuaternionicStructure q1 = standard_structure(f1);
    ValidationReport rep = validate_quaternionic(f1, q1.I, q1.J, q1.K);
    CHECK(rep.ok());
    CHECK(rep.n == 1);

    // flipped K fails exactly on the product identities
    Endo minusK(f1, -q1.K.mat);
    ValidationReport bad = validate_quaternionic(f1, q1.I, q1.J, minusK);
    CHECK_FALSE(bad.ok());
    for (const auto& c : bad.checks) {
        if (c.name == "IJ = K" || c.name == "JI = -K")
            CHECK_FALSE(c.pass);
        else
            CHECK(c.pass);
    }

    FramePtr f2 = make_frame(8);
    QuaternionicStructure q2 = standard_structure(f2);
    ValidationReport rep2 = validate_quaternionic(f2, q2.I, q2.J, q2.K);
    CHECK(rep2.ok());
    CHECK(rep2.n == 2);

    FramePtr f6 = make_frame(6);
    Endo id6 = Endo::identity(f6);
    CHECK_FALSE(validate_quaternionic(f6, id6, id6, id6).ok());
}

TEST_CASE("induced structures") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    CHECK(induced(q, Rational(1), Rational(0), Rational(0)).L == q.I);
    CHECK(induced(q, Rational(0), Rational(1), Rational(0)).L == q.J);
    InducedComplexStructure pyth = induced(q, Rational(3, 5), Rational(4, 5), Rational(0));
    CHECK(pyth.L.mat * pyth.L.mat == -Matrix::identity(4));
    CHECK_THROWS_AS(induced(q, Rational(1), Rational(1), Rational(0)), DomainError);
    CHECK_NOTHROW(induced_float(q, 0.6, 0.8, 0.0));
    CHECK_THROWS_AS(induced_float(q, 0.6, 0.8, 0.1), DomainError);
}

TEST_CASE("sl2 relations hold on 1-forms and on every degree") {
    for (int n : {1, 2}) {
        FramePtr f = make_frame(4 * n);
        QuaternionicStructure q = standard_structure(f);
        Sl2Triple t = sl2_triple(q);
        // covector matrices: transposes compose in written order
        Matrix Hc = t.H.mat.transpose(), Xc = t.X.mat.transpose(), Yc = t.Y.mat.transpose();
        CHECK(Xc * Yc - Yc * Xc == Hc);
        CHECK(Hc * Xc - Xc * Hc == GaussianRational(2) * Xc);
        CHECK(Hc * Yc - Yc * Hc == GaussianRational(-2) * Yc);
        // derivation extensions on forms of every degree
        Xoshiro256pp rng(100 + n);
        for (int deg = 0; deg <= 4 * n; ++deg) {
            Form x = random_form(f, deg, rng, 3);
            Form xy = extend_derivation(t.X, extend_derivation(t.Y, x)) -
                      extend_derivation(t.Y, extend_derivation(t.X, x));
            CHECK(xy == extend_derivation(t.H, x));
            Form hx = extend_derivation(t.H, extend_derivation(t.X, x)) -
                      extend_derivation(t.X, extend_derivation(t.H, x));
            CHECK(hx == GaussianRational(2) * extend_derivation(t.X, x));
            Form hy = extend_derivation(t.H, extend_derivation(t.Y, x)) -
                      extend_derivation(t.Y, extend_derivation(t.H, x));
            CHECK(hy == GaussianRational(-2) * extend_derivation(t.Y, x));
        }
    }
}

TEST_CASE("sl2 tables on (1,0) and (0,1) forms") {
    FramePtr f = make_frame(8);
    QuaternionicStructure q = standard_structure(f);
    Sl2Triple t = sl2_triple(q);
    for (int idx = 0; idx < 8; ++idx) {
        Form hol = holomorphic_coframe(q, idx);
        Form antih = hol.conj();
        CHECK(apply(t.H, hol) == hol);
        CHECK(apply(t.X, hol).is_zero());
        CHECK(apply(t.Y, hol) == apply(q.J, hol));
        CHECK(apply(t.H, antih) == -antih);
        CHECK(apply(t.X, antih) == -apply(q.J, antih));
        CHECK(apply(t.Y, antih).is_zero());
    }
}

TEST_CASE("weight decomposition of flat H^1 matches the Casimir oracle") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);

    WeightDecomposition w1 = weight_decompose(q, 1);
    CHECK(w1.max_weight == 1);
    CHECK(w1.multiplicities == std::map<int, long>{{1, 4}});

    WeightDecomposition w2 = weight_decompose(q, 2);
    CHECK(w2.max_weight == 2);
    CHECK(w2.multiplicities == std::map<int, long>{{0, 3}, {2, 3}});
    CHECK(w2.multiplicities == casimir_multiplicities_oracle(q, 2));

    WeightDecomposition w4 = weight_decompose(q, 4);
    CHECK(w4.max_weight == 0);

    CHECK_THROWS_AS(weight_decompose(q, 5), DomainError);
    CHECK_THROWS_AS(weight_decompose(q, -1), DomainError);
}

TEST_CASE("clebsch-gordan bound and oracle agreement for all degrees of H^1") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    for (int k = 0; k <= 4; ++k) {
        WeightDecomposition wd = weight_decompose(q, k);
        CHECK(wd.max_weight == std::min(k, 4 - k));
        CHECK(wd.multiplicities == casimir_multiplicities_oracle(q, k));
    }
}

TEST_CASE("weight projectors: idempotent, orthogonal, Casimir eigenvalue") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    Sl2Triple t = sl2_triple(q);
    Xoshiro256pp rng(21);
    for (int k : {1, 2, 3}) {
        std::vector<int> ws = weight_list(k, 4);
        Form x = random_form(f, k, rng);
        Form sum(f, k);
        for (int s : ws) {
            Form p = weight_project(t, x, s, 4);
            sum += p;
            CHECK(weight_project(t, p, s, 4) == p); // idempotent
            for (int s2 : ws)
                if (s2 != s) CHECK(weight_project(t, p, s2, 4).is_zero());
            // Casimir acts as s(s+2)
            CHECK(casimir_apply(t, p) == GaussianRational(s * (s + 2)) * p);
        }
        CHECK(sum == x);
    }
}

TEST_CASE("project_plus: omega_I fixed, weight-0 killed, 1-forms fixed") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    Form omega_I = Form::basis(f, {0, 1}) + Form::basis(f, {2, 3});
    CHECK(project_plus(q, omega_I) == omega_I);

    // a weight-0 2-form produced by the weight-0 projector
    Sl2Triple t = sl2_triple(q);
    Xoshiro256pp rng(22);
    Form invariant(f, 2);
    while (invariant.is_zero()) invariant = weight_project(t, random_form(f, 2, rng), 0, 4);
    CHECK(project_plus(q, invariant).is_zero());

    Form any1 = random_form(f, 1, rng);
    CHECK(project_plus(q, any1) == any1);
}

TEST_CASE("project_plus commutes with the sl2 action degree by degree") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    Sl2Triple t = sl2_triple(q);
    Xoshiro256pp rng(23);
    for (int k = 0; k <= 4; ++k) {
        Form x = random_form(f, k, rng);
        for (const Endo* op : {&t.H, &t.X, &t.Y}) {
            Form lhs = project_plus(q, extend_derivation(*op, x));
            Form rhs = extend_derivation(*op, project_plus(q, x));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("bigrade: purity, conjugate symmetry, decomposition") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    Form omega_I = Form::basis(f, {0, 1}) + Form::basis(f, {2, 3});
    CHECK(is_pure_type(omega_I, q.I, 1, 1));
    auto parts = bigrade(omega_I, q.I);
    CHECK(parts.size() == 1);
    CHECK(parts.count({1, 1}) == 1);

    // a real 1-form splits into conjugate (1,0) and (0,1) halves
    Form e1 = Form::basis(f, {0});
    auto parts1 = bigrade(e1, q.I);
    REQUIRE(parts1.count({1, 0}) == 1);
    REQUIRE(parts1.count({0, 1}) == 1);
    CHECK(parts1.at({1, 0}).conj() == parts1.at({0, 1}));
    CHECK(parts1.at({1, 0}) + parts1.at({0, 1}) == e1);

    // random real forms: components sum to input, (p,q) conjugate to (q,p),
    // projectors idempotent and mutually annihilating
    Xoshiro256pp rng(24);
    for (int trial = 0; trial < 6; ++trial) {
        Form x = random_form(f, 2, rng);
        Form re = GaussianRational(Rational(1, 2)) * (x + x.conj());
        auto comps = bigrade(re, q.I);
        Form sum(f, 2);
        for (const auto& [pq, comp] : comps) {
            sum += comp;
            auto conj_it = comps.find({pq.second, pq.first});
            REQUIRE(conj_it != comps.end());
            CHECK(conj_it->second == comp.conj());
            CHECK(bigrade_component(comp, q.I, pq.first, pq.second) == comp);
            for (int p2 = 0; p2 <= 2; ++p2)
                if (p2 != pq.first)
                    CHECK(bigrade_component(comp, q.I, p2, 2 - p2).is_zero());
        }
        CHECK(sum == re);
    }
}

TEST_CASE("r_pq: identity at q=0, Y on (1,0), R_11 lands in (1,1) maximal weight") {
    FramePtr f = make_frame(4);
    QuaternionicStructure q = standard_structure(f);
    Form hol = holomorphic_coframe(q, 0);
    CHECK(r_pq(q, hol, 0) == hol);

    Form y_hol = r_pq(q, hol, 1);
    CHECK(y_hol == apply(q.J, hol));
    CHECK(is_pure_type(y_hol, q.I, 0, 1));

    // Phi_I on flat H^1 and R_{1,1}
    Form phi = wedge(holomorphic_coframe(q, 0), holomorphic_coframe(q, 2));
    Form r11 = r_pq(q, phi, 1);
    CHECK(is_pure_type(r11, q.I, 1, 1));
    CHECK(project_plus(q, r11) == r11);
    CHECK_FALSE(r11.is_zero());

    // non-pure input rejected
    Form mixed = phi + Form::basis(f, {0, 1});
    CHECK_THROWS_AS(r_pq(q, mixed, 1), DomainError);
}

TEST_CASE("r_pq is injective on (2,0) forms of flat H^2") {
    FramePtr f = make_frame(8);
    QuaternionicStructure q = standard_structure(f);
    std::vector<Form> basis20;
    std::vector<int> sel = {0, 2, 4, 6};
    for (std::size_t a = 0; a < sel.size(); ++a)
        for (std::size_t b = a + 1; b < sel.size(); ++b)
            basis20.push_back(
                wedge(holomorphic_coframe(q, sel[a]), holomorphic_coframe(q, sel[b])));
    std::vector<Form> images;
    for (const Form& x : basis20) images.push_back(r_pq(q, x, 1));
    std::map<Mask, int> rows;
    for (const Form& im : images)
        for (const auto& [m, c] : im.terms()) {
            (void)c;
            rows.emplace(m, static_cast<int>(rows.size()));
        }
    Matrix mat(static_cast<int>(rows.size()), static_cast<int>(images.size()));
    for (int c = 0; c < static_cast<int>(images.size()); ++c)
        for (const auto& [m, coeff] : images[c].terms()) mat(rows.at(m), c) = coeff;
    CHECK(rank(mat) == static_cast<int>(images.size()));
}
