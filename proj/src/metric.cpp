#include "hypercal/metric.hpp"

#include "hypercal/linalg.hpp"

namespace hypercal {

HyperhermitianMetric::HyperhermitianMetric(FramePtr f, Matrix g)
    : frame(std::move(f)), G(std::move(g)) {
    int dim = frame->dim;
    if (G.rows != dim || G.cols != dim) throw DomainError("metric must be dim x dim");
    for (const auto& x : G.a)
        if (!x.is_real()) throw DomainError("metric entries must be real");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < i; ++j)
            if (G(i, j) != G(j, i)) throw DomainError("metric must be symmetric");
    if (!leading_minors_positive(G)) throw DomainError("metric is not positive definite");
}

ValidationReport validate_metric(const HyperhermitianMetric& g, const QuaternionicStructure& q) {
    ValidationReport rep;
    rep.n = q.n;
    require_same_frame(g.frame, q.frame, "validate_metric");
    rep.add("symmetric positive definite", leading_minors_positive(g.G));
    auto compat = [&](const char* name, const Endo& L) {
        Matrix lhs = L.mat.transpose() * g.G * L.mat;
        bool ok = lhs == g.G;
        rep.add(std::string(name) + "^T G " + name + " = G", ok);
    };
    compat("I", q.I);
    compat("J", q.J);
    compat("K", q.K);
    return rep;
}

HyperhermitianMetric standard_metric(const FramePtr& frame) {
    return HyperhermitianMetric(frame, Matrix::identity(frame->dim));
}

GaussianRational metric_eval(const HyperhermitianMetric& g, const Poly& x, const Poly& y) {
    require_same_frame(g.frame, x.frame(), "metric_eval");
    require_same_frame(g.frame, y.frame(), "metric_eval");
    if (x.degree() != 1 || y.degree() != 1) throw DomainError("metric_eval needs vectors");
    GaussianRational acc(0);
    for (const auto& [mx, cx] : x.terms()) {
        int i = std::countr_zero(mx);
        for (const auto& [my, cy] : y.terms()) {
            int j = std::countr_zero(my);
            if (g.G(i, j).is_zero()) continue;
            acc += cx * cy * g.G(i, j);
        }
    }
    return acc;
}

std::vector<Poly> holomorphic_basis(const FramePtr& frame, const Endo& L) {
    // T^{1,0} is the image of the projector (Id - iL)/2; pick frame images
    // that grow the rank until dim/2 independent vectors are found.
    int dim = frame->dim;
    std::vector<Poly> out;
    Matrix selected(dim, 0);
    for (int i = 0; i < dim && static_cast<int>(out.size()) < dim / 2; ++i) {
        Poly v(frame, 1);
        v.add_term(Mask(1) << i, GaussianRational(1));
        Poly p = GaussianRational(Rational(1, 2)) * (v - GaussianRational::i() * apply(L, v));
        Matrix trial(dim, static_cast<int>(out.size()) + 1);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < static_cast<int>(out.size()); ++c) trial(r, c) = selected(r, c);
            trial(r, static_cast<int>(out.size())) = p.coeff(Mask(1) << r);
        }
        if (rank(trial) == trial.cols) {
            out.push_back(std::move(p));
            selected = std::move(trial);
        }
    }
    if (static_cast<int>(out.size()) != dim / 2)
        throw DomainError("holomorphic_basis: could not complete a (1,0) basis");
    return out;
}

KahlerForms kahler_forms(const HyperhermitianMetric& g, const QuaternionicStructure& q) {
    require_same_frame(g.frame, q.frame, "kahler_forms");
    ValidationReport compat = validate_metric(g, q);
    if (!compat.ok()) throw DomainError("kahler_forms: metric incompatible with structure");
    int dim = g.frame->dim;
    auto omega_of = [&](const Endo& L) {
        // omega_L(e_i, e_j) = (L^T G)_{ij}
        Matrix lg = L.mat.transpose() * g.G;
        Form w(g.frame, 2);
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                w.add_term((Mask(1) << i) | (Mask(1) << j), lg(i, j));
        return w;
    };
    KahlerForms kf;
    kf.omega_I = omega_of(q.I);
    kf.omega_J = omega_of(q.J);
    kf.omega_K = omega_of(q.K);
    kf.Omega_I = kf.omega_J + GaussianRational::i() * kf.omega_K;
    if (!is_pure_type(kf.Omega_I, q.I, 2, 0))
        throw DomainError("kahler_forms: Omega_I is not of type (2,0)");
    // Omega_I(X, Y) = 2 g(JX, Y) on (1,0) vectors
    std::vector<Poly> hol = holomorphic_basis(g.frame, q.I);
    for (const auto& X : hol)
        for (const auto& Y : hol) {
            GaussianRational lhs = pair(kf.Omega_I, wedge(X, Y));
            GaussianRational rhs = GaussianRational(2) * metric_eval(g, apply(q.J, X), Y);
            if (lhs != rhs) throw DomainError("kahler_forms: Omega_I(X,Y) != 2 g(JX,Y)");
        }
    // each omega_L is L-invariant: derivation extension annihilates it
    if (!extend_derivation(q.I, kf.omega_I).is_zero() ||
        !extend_derivation(q.J, kf.omega_J).is_zero() ||
        !extend_derivation(q.K, kf.omega_K).is_zero())
        throw DomainError("kahler_forms: omega_L not L-invariant");
    return kf;
}

HyperhermitianMetric random_hyperhermitian(const QuaternionicStructure& q, Xoshiro256pp& rng) {
    int dim = q.frame->dim;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix A(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) A(i, j) = GaussianRational(rng.uniform_int(-2, 2));
        if (determinant(A).is_zero()) continue;
        Matrix base = A.transpose() * A;
        Matrix sum = base;
        for (const Endo* L : {&q.I, &q.J, &q.K}) sum = sum + L->mat.transpose() * base * L->mat;
        GaussianRational quarter(Rational(1, 4));
        Matrix G(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) G(i, j) = quarter * sum(i, j);
        return HyperhermitianMetric(q.frame, G);
    }
    throw DomainError("random_hyperhermitian: could not draw invertible matrix");
}

} // namespace hypercal
