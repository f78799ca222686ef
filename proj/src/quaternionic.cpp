#include "hypercal/quaternionic.hpp"

namespace hypercal {

namespace {

const GaussianRational kI = GaussianRational::i();
const GaussianRational kHalf(Rational(1, 2));

std::string first_bad_entry(const Matrix& got, const Matrix& want) {
    for (int i = 0; i < got.rows; ++i)
        for (int j = 0; j < got.cols; ++j)
            if (got(i, j) != want(i, j))
                return "entry (" + std::to_string(i) + "," + std::to_string(j) + "): " +
                       got(i, j).str() + " != " + want(i, j).str();
    return "";
}

void check_identity(ValidationReport& rep, const std::string& name, const Matrix& got,
                    const Matrix& want) {
    std::string w = first_bad_entry(got, want);
    rep.add(name, w.empty(), w);
}

} // namespace

ValidationReport validate_quaternionic(const FramePtr& frame, const Endo& I, const Endo& J,
                                       const Endo& K) {
    ValidationReport rep;
    int dim = frame->dim;
    if (dim % 4 != 0) {
        rep.add("dim divisible by 4", false, "dim = " + std::to_string(dim));
        return rep;
    }
    rep.n = dim / 4;
    Matrix neg_id = -Matrix::identity(dim);
    check_identity(rep, "I^2 = -Id", I.mat * I.mat, neg_id);
    check_identity(rep, "J^2 = -Id", J.mat * J.mat, neg_id);
    check_identity(rep, "K^2 = -Id", K.mat * K.mat, neg_id);
    check_identity(rep, "IJ = K", I.mat * J.mat, K.mat);
    check_identity(rep, "JI = -K", J.mat * I.mat, -K.mat);
    return rep;
}

QuaternionicStructure::QuaternionicStructure(FramePtr f, Endo i, Endo j, Endo k)
    : frame(std::move(f)), I(std::move(i)), J(std::move(j)), K(std::move(k)) {
    ValidationReport rep = validate_quaternionic(frame, I, J, K);
    if (!rep.ok()) {
        for (const auto& c : rep.checks)
            if (!c.pass) throw DomainError("quaternionic structure: " + c.name + " fails (" + c.witness + ")");
    }
    n = rep.n;
}

QuaternionicStructure standard_structure(const FramePtr& frame) {
    int dim = frame->dim;
    if (dim % 4 != 0) throw DomainError("standard structure needs dim divisible by 4");
    Matrix mi(dim, dim), mj(dim, dim);
    for (int t = 0; t < dim / 4; ++t) {
        int b = 4 * t;
        // I: x -> Ix, Ix -> -x, y -> Iy, Iy -> -y
        mi(b + 1, b + 0) = GaussianRational(1);
        mi(b + 0, b + 1) = GaussianRational(-1);
        mi(b + 3, b + 2) = GaussianRational(1);
        mi(b + 2, b + 3) = GaussianRational(-1);
        // J: x -> -y, Ix -> Iy, y -> x, Iy -> -Ix
        mj(b + 2, b + 0) = GaussianRational(-1);
        mj(b + 3, b + 1) = GaussianRational(1);
        mj(b + 0, b + 2) = GaussianRational(1);
        mj(b + 1, b + 3) = GaussianRational(-1);
    }
    Endo I(frame, mi), J(frame, mj);
    Endo K(frame, mi * mj);
    return QuaternionicStructure(frame, I, J, K);
}

InducedComplexStructure induced(const QuaternionicStructure& q, const Rational& a,
                                const Rational& b, const Rational& c) {
    if (a * a + b * b + c * c != Rational(1))
        throw DomainError("induced structure: a^2+b^2+c^2 must equal 1");
    Endo L(q.frame, GaussianRational(a) * q.I.mat + GaussianRational(b) * q.J.mat +
                        GaussianRational(c) * q.K.mat);
    if (!(L.mat * L.mat == -Matrix::identity(q.frame->dim)))
        throw DomainError("induced structure: L^2 != -Id");
    return {a, b, c, L};
}

EndoT<std::complex<double>> induced_float(const QuaternionicStructure& q, double a, double b,
                                          double c) {
    double nrm = a * a + b * b + c * c;
    if (std::abs(nrm - 1.0) > 1e-12)
        throw DomainError("induced structure: |a^2+b^2+c^2 - 1| > 1e-12");
    int dim = q.frame->dim;
    MatrixT<std::complex<double>> m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = a * q.I.mat(i, j).to_complex() + b * q.J.mat(i, j).to_complex() +
                      c * q.K.mat(i, j).to_complex();
    return EndoT<std::complex<double>>(q.frame, m);
}

Sl2Triple sl2_triple(const QuaternionicStructure& q) {
    // On forms (transposed action) these are H = -i I, X = (i K - J)/2,
    // Y = (i K + J)/2 built from the coframe quaternionic structure; on the
    // polyvector side that amounts to the matrices below.
    Endo H(q.frame, (-kI) * q.I.mat);
    Endo X(q.frame, (-kHalf) * (kI * q.K.mat + q.J.mat));
    Endo Y(q.frame, kHalf * (q.J.mat - kI * q.K.mat));
    return {H, X, Y};
}

std::vector<int> weight_list(int degree, int n4) {
    int smax = std::min(degree, n4 - degree);
    if (smax < 0) throw DomainError("degree out of range");
    std::vector<int> ws;
    for (int s = smax; s >= 0; s -= 2) ws.push_back(s);
    return ws;
}

namespace {

// Lagrange interpolation through the Casimir eigenvalues s(s+2).
template <class M>
M weight_project_impl(const Sl2Triple& t, const M& x, int s, int n4) {
    std::vector<int> ws = weight_list(x.degree(), n4);
    bool found = false;
    for (int w : ws) found |= (w == s);
    if (!found) return M(x.frame(), x.degree());
    M acc = x;
    long lam_s = static_cast<long>(s) * (s + 2);
    for (int w : ws) {
        if (w == s) continue;
        long lam_w = static_cast<long>(w) * (w + 2);
        M cz = casimir_apply(t, acc);
        M shifted = cz - GaussianRational(lam_w) * acc;
        GaussianRational denom(Rational(1, lam_s - lam_w));
        acc = denom * shifted;
    }
    return acc;
}

} // namespace

Form weight_project(const Sl2Triple& t, const Form& x, int s, int n4) {
    return weight_project_impl(t, x, s, n4);
}
Poly weight_project(const Sl2Triple& t, const Poly& x, int s, int n4) {
    return weight_project_impl(t, x, s, n4);
}

WeightDecomposition weight_decompose(const QuaternionicStructure& q, int degree) {
    int n4 = q.frame->dim;
    if (degree < 0 || degree > n4) throw DomainError("degree out of range");
    Sl2Triple t = sl2_triple(q);
    WeightDecomposition wd;
    wd.degree = degree;
    std::vector<int> ws = weight_list(degree, n4);
    // Multiplicity of weight s = trace of its isotypic projector, computed
    // monomial by monomial.
    std::map<int, GaussianRational> traces;
    std::vector<Mask> basis;
    for (Mask m = 0; m < (Mask(1) << n4); ++m)
        if (mask_degree(m) == degree) basis.push_back(m);
    for (int s : ws) traces[s] = GaussianRational(0);
    for (Mask m : basis) {
        Form e(q.frame, degree);
        e.add_term(m, GaussianRational(1));
        for (int s : ws) {
            Form p = weight_project(t, e, s, n4);
            traces[s] += p.coeff(m);
        }
    }
    long total = 0;
    for (int s : ws) {
        const GaussianRational& tr = traces[s];
        if (!tr.im.is_zero()) throw DomainError("weight projector trace not real");
        if (tr.re.raw().get_den() != 1) throw DomainError("weight projector trace not integral");
        long v = tr.re.raw().get_num().get_si();
        if (v != 0) wd.multiplicities[s] = v;
        total += v;
    }
    long expected = 1;
    // dim Lambda^degree = C(n4, degree)
    for (int i = 0; i < degree; ++i) expected = expected * (n4 - i) / (i + 1);
    if (total != expected) throw DomainError("weight multiplicities do not sum to dim");
    wd.max_weight = wd.multiplicities.empty() ? 0 : wd.multiplicities.rbegin()->first;
    return wd;
}

Form project_plus(const QuaternionicStructure& q, const Form& x) {
    int n4 = q.frame->dim;
    int smax = std::min(x.degree(), n4 - x.degree());
    return weight_project(sl2_triple(q), x, smax, n4);
}

namespace {

// Derivation extension of -i L on forms; (p,q) components are its
// (p-q)-eigenvectors.
Form h_of_l_apply(const Endo& L, const Form& x) {
    return (-GaussianRational::i()) * extend_derivation(L, x);
}

} // namespace

Form bigrade_component(const Form& x, const Endo& L, int p, int qdeg) {
    int k = x.degree();
    if (p < 0 || qdeg < 0 || p + qdeg != k) throw DomainError("bigrade: bad (p,q)");
    Form acc = x;
    int target = p - qdeg;
    for (int pp = 0; pp <= k; ++pp) {
        int ev = pp - (k - pp);
        if (ev == target) continue;
        Form h = h_of_l_apply(L, acc);
        acc = GaussianRational(Rational(1, target - ev)) * (h - GaussianRational(ev) * acc);
    }
    return acc;
}

std::map<std::pair<int, int>, Form> bigrade(const Form& x, const Endo& L) {
    std::map<std::pair<int, int>, Form> out;
    int k = x.degree();
    Form total(x.frame(), k);
    for (int p = 0; p <= k; ++p) {
        Form comp = bigrade_component(x, L, p, k - p);
        total += comp;
        if (!comp.is_zero()) out.emplace(std::make_pair(p, k - p), std::move(comp));
    }
    if (!(total == x)) throw DomainError("bigrade components do not sum to input");
    return out;
}

bool is_pure_type(const Form& x, const Endo& L, int p, int qdeg) {
    if (x.is_zero()) return true;
    if (x.degree() != p + qdeg) return false;
    Form h = h_of_l_apply(L, x);
    return h == GaussianRational(p - qdeg) * x;
}

Form r_pq(const QuaternionicStructure& q, const Form& x, int qdeg) {
    if (qdeg < 0) throw DomainError("r_pq: negative q");
    int k = x.degree();
    if (qdeg > k) throw DomainError("r_pq: q exceeds degree");
    if (!is_pure_type(x, q.I, k, 0)) throw DomainError("r_pq: input is not pure (p+q,0) type");
    Sl2Triple t = sl2_triple(q);
    Form acc = x;
    for (int i = 0; i < qdeg; ++i) acc = extend_derivation(t.Y, acc);
    return acc;
}

} // namespace hypercal
