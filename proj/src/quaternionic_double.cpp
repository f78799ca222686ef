#include "hypercal/quaternionic_double.hpp"

#include "hypercal/linalg.hpp"
#include "hypercal/rng.hpp"

namespace hypercal {

namespace {

const GaussianRational kI = GaussianRational::i();

std::string pair_witness(int i, int j) {
    return "(x_" + std::to_string(i + 1) + ", x_" + std::to_string(j + 1) + ")";
}

} // namespace

ValidationReport validate_affine(const AffineComplexModel& a) {
    ValidationReport rep;
    int dim = a.base.frame->dim;
    rep.n = dim / 2;
    if (static_cast<int>(a.rho.size()) != dim) {
        rep.add("rho has one matrix per basis vector", false,
                std::to_string(a.rho.size()) + " matrices for dim " + std::to_string(dim));
        return rep;
    }
    for (const Matrix& r : a.rho)
        if (r.rows != dim || r.cols != dim) {
            rep.add("rho matrices are dim x dim", false);
            return rep;
        }
    if (a.t.rows != dim || a.t.cols != dim || determinant(a.t).is_zero()) {
        rep.add("t invertible", false);
        return rep;
    }
    rep.add("t invertible", true);

    auto rho_of = [&](const Poly& x) {
        Matrix m(dim, dim);
        for (const auto& [mask, c] : x.terms()) {
            int i = std::countr_zero(mask);
            m = m + c * a.rho[i];
        }
        return m;
    };
    auto basis = [&](int i) {
        Poly v(a.base.frame, 1);
        v.add_term(Mask(1) << i, GaussianRational(1));
        return v;
    };

    // flatness: rho([x,y]) = rho(x) rho(y) - rho(y) rho(x)
    bool flat_ok = true;
    std::string flat_w;
    for (int i = 0; i < dim && flat_ok; ++i)
        for (int j = i + 1; j < dim && flat_ok; ++j) {
            Matrix lhs = rho_of(a.base.bracket(basis(i), basis(j)));
            Matrix rhs = a.rho[i] * a.rho[j] - a.rho[j] * a.rho[i];
            if (!(lhs == rhs)) {
                flat_ok = false;
                flat_w = pair_witness(i, j);
            }
        }
    rep.add("flatness rho([x,y]) = [rho(x),rho(y)]", flat_ok, flat_w);

    // torsion-freeness: rho(x) t(y) - rho(y) t(x) = t([x,y])
    bool tor_ok = true;
    std::string tor_w;
    auto t_of = [&](const Poly& x) {
        std::vector<GaussianRational> out(dim, GaussianRational(0));
        for (const auto& [mask, c] : x.terms()) {
            int i = std::countr_zero(mask);
            for (int r = 0; r < dim; ++r) out[r] += c * a.t(r, i);
        }
        return out;
    };
    for (int i = 0; i < dim && tor_ok; ++i)
        for (int j = i + 1; j < dim && tor_ok; ++j) {
            std::vector<GaussianRational> lhs(dim, GaussianRational(0));
            std::vector<GaussianRational> ti = t_of(basis(i)), tj = t_of(basis(j));
            for (int r = 0; r < dim; ++r)
                for (int s = 0; s < dim; ++s)
                    lhs[r] += a.rho[i](r, s) * tj[s] - a.rho[j](r, s) * ti[s];
            std::vector<GaussianRational> rhs = t_of(a.base.bracket(basis(i), basis(j)));
            for (int r = 0; r < dim; ++r)
                if (lhs[r] != rhs[r]) {
                    tor_ok = false;
                    tor_w = pair_witness(i, j);
                    break;
                }
        }
    rep.add("torsion-freeness rho(x)t(y) - rho(y)t(x) = t([x,y])", tor_ok, tor_w);

    // complex-affinity: rho(x) I_std = I_std rho(x), I_std = t I t^-1
    Matrix i_std = a.t * a.I_base.mat * inverse(a.t);
    bool ca_ok = true;
    std::string ca_w;
    for (int i = 0; i < dim; ++i)
        if (!(a.rho[i] * i_std == i_std * a.rho[i])) {
            ca_ok = false;
            ca_w = "x_" + std::to_string(i + 1);
            break;
        }
    rep.add("complex-affinity [rho(x), I_std] = 0", ca_ok, ca_w);

    bool i_ok = a.I_base.mat * a.I_base.mat == -Matrix::identity(dim);
    rep.add("I_base^2 = -Id", i_ok);
    return rep;
}

bool integer_monodromy(const AffineComplexModel& a) {
    int dim = a.base.frame->dim;
    for (const Matrix& r : a.rho) {
        // finite exponential of a nilpotent matrix
        Matrix power = Matrix::identity(dim);
        Matrix acc = Matrix::identity(dim);
        Rational factorial(1);
        for (int k = 1; k <= dim + 1; ++k) {
            power = power * r;
            if (power.is_zero()) break;
            factorial *= Rational(k);
            acc = acc + GaussianRational(Rational(1) / factorial) * power;
        }
        if (!power.is_zero()) return false; // not nilpotent: no finite check
        for (const auto& x : acc.a)
            if (!x.is_real() || x.re.raw().get_den() != 1) return false;
    }
    return true;
}

DoubleModel build_double(const AffineComplexModel& a) {
    ValidationReport v = validate_affine(a);
    if (!v.ok()) {
        for (const auto& c : v.checks)
            if (!c.pass)
                throw DomainError("build_double: " + c.name + " fails" +
                                  (c.witness.empty() ? "" : " at " + c.witness));
    }
    int bd = a.base.frame->dim; // 2n
    int n = bd / 2;
    int dim = 2 * bd;

    // normalize the fiber coordinates through t so the vertical complex
    // structure is literally I_base
    Matrix t_inv = inverse(a.t);
    std::vector<Matrix> rho_n;
    rho_n.reserve(bd);
    for (const Matrix& r : a.rho) rho_n.push_back(t_inv * r * a.t);

    std::vector<std::string> names = a.base.frame->names;
    for (const auto& nm : a.base.frame->names) names.push_back("v_" + nm);
    FramePtr frame = make_frame(dim, names);

    std::map<std::pair<int, int>, std::map<int, GaussianRational>> br;
    // horizontal-horizontal: base bracket
    for (const auto& [ij, terms] : a.base.brackets) br[ij] = terms;
    // horizontal-vertical: [(x_i,0),(0,e_s)] = (0, rho_n(x_i) e_s)
    for (int i = 0; i < bd; ++i)
        for (int s = 0; s < bd; ++s) {
            std::map<int, GaussianRational> col;
            for (int r = 0; r < bd; ++r)
                if (!rho_n[i](r, s).is_zero()) col[bd + r] = rho_n[i](r, s);
            if (!col.empty()) br[{i, bd + s}] = std::move(col);
        }
    LieModel model = make_model(frame, std::move(br));

    // hypercomplex structure in the split frame
    Matrix mi(dim, dim), mj(dim, dim);
    for (int r = 0; r < bd; ++r)
        for (int c = 0; c < bd; ++c) {
            mi(r, c) = -a.I_base.mat(r, c);
            mi(bd + r, bd + c) = a.I_base.mat(r, c);
        }
    for (int r = 0; r < bd; ++r) {
        mj(r, bd + r) = GaussianRational(1);
        mj(bd + r, r) = GaussianRational(-1);
    }
    Endo I(frame, mi), J(frame, mj);
    Endo K(frame, mi * mj);
    model.structure = QuaternionicStructure(frame, I, J, K);
    model.lattice_admissible = a.lattice && integer_monodromy(a);
    model.nilpotent = is_nilpotent(model);

    // integrability of all three structures, re-verified algebraically
    for (const Endo* L : {&I, &J, &K}) {
        NijenhuisReport nr = nijenhuis(model, *L);
        if (!nr.zero)
            throw DomainError("build_double: Nijenhuis tensor nonzero at " +
                              pair_witness(nr.witness_i, nr.witness_j));
    }
    // the vertical space is an abelian ideal
    for (int s = 0; s < bd; ++s)
        for (int u = s + 1; u < bd; ++u)
            if (model.brackets.count({bd + s, bd + u}))
                throw DomainError("build_double: vertical space is not abelian");
    for (const auto& [ij, terms] : model.brackets)
        if (ij.second >= bd)
            for (const auto& [k, c] : terms) {
                (void)c;
                if (k < bd) throw DomainError("build_double: vertical space is not an ideal");
            }

    DoubleModel d;
    d.model = std::move(model);
    d.base = a.base;
    d.I_base = a.I_base;
    d.n = n;
    for (int i = 0; i < bd; ++i) d.horizontal.push_back(i);
    for (int i = 0; i < bd; ++i) d.vertical.push_back(bd + i);
    d.projection = Matrix(bd, dim);
    for (int i = 0; i < bd; ++i) d.projection(i, i) = GaussianRational(1);
    return d;
}

VolumeForm double_volume_form(const DoubleModel& d) {
    // canonical selection: per complex coordinate of the base, the
    // horizontal representative then its vertical copy
    std::vector<int> sel;
    int bd = 2 * d.n;
    for (int t = 0; t < d.n; ++t) {
        sel.push_back(2 * t);
        sel.push_back(bd + 2 * t);
    }
    VolumeForm vol = standard_volume_form(*d.model.structure, sel);
    CEOperator ce(d.model);
    if (!ce.d(vol.phi).is_zero())
        throw DomainError("double_volume_form: d Phi != 0");
    return vol;
}

PsiReport double_psi(const DoubleModel& d) {
    VolumeForm vol = double_volume_form(d);
    CalibrationForm cal = psi(*d.model.structure, vol);
    CEOperator ce(d.model);
    return {cal, ce.d(cal.psi).is_zero()};
}

HyperhermitianMetric fibration_metric(const DoubleModel& d, const HyperhermitianMetric& g_base) {
    require_same_frame(g_base.frame, d.base.frame, "fibration_metric");
    int bd = 2 * d.n;
    // base metric must be I_base-Hermitian
    if (!(d.I_base.mat.transpose() * g_base.G * d.I_base.mat == g_base.G))
        throw DomainError("fibration_metric: base metric is not I-Hermitian");
    Matrix h(2 * bd, 2 * bd);
    for (int r = 0; r < bd; ++r)
        for (int c = 0; c < bd; ++c) {
            h(r, c) = g_base.G(r, c);
            h(bd + r, bd + c) = g_base.G(r, c);
        }
    HyperhermitianMetric hm(d.model.frame, h);
    ValidationReport rep = validate_metric(hm, *d.model.structure);
    if (!rep.ok()) throw DomainError("fibration_metric: metric not hyperhermitian");
    // vertical space is Lagrangian for h
    std::vector<Poly> vert;
    for (int t = 0; t < d.n; ++t) {
        Poly v(d.model.frame, 1);
        v.add_term(Mask(1) << (bd + 2 * t), GaussianRational(1));
        Poly iv = apply(d.model.structure->I, v);
        vert.push_back(GaussianRational(Rational(1, 2)) * (v - kI * iv));
    }
    LagrangianReport lr = lagrangian_test(vert, hm, *d.model.structure);
    if (!lr.omega_vanishes || !lr.transversal)
        throw DomainError("fibration_metric: vertical space is not Lagrangian");
    return hm;
}

ThetaReport theta_pushforward(const DoubleModel& d, const HyperhermitianMetric& h) {
    const QuaternionicStructure& q = *d.model.structure;
    int bd = 2 * d.n;
    ThetaReport rep;

    PsiReport pr = double_psi(d);
    KahlerForms kf = kahler_forms(h, q);
    Form theta_big = wedge(pr.cal.psi, kf.omega_I);
    CEOperator ce(d.model);
    rep.theta_closed_big = ce.d(theta_big).is_zero();

    // vertical Lagrangian certificate
    std::vector<Poly> vert;
    for (int t = 0; t < d.n; ++t) {
        Poly v(d.model.frame, 1);
        v.add_term(Mask(1) << (bd + 2 * t), GaussianRational(1));
        vert.push_back(GaussianRational(Rational(1, 2)) *
                       (v - kI * apply(q.I, v)));
    }
    LagrangianReport lr = lagrangian_test(vert, h, q);
    rep.vertical_lagrangian = lr.omega_vanishes && lr.transversal;

    // base (1,0) frame and its dual covectors
    std::vector<Poly> zs = holomorphic_basis(d.base.frame, d.I_base);
    int nb = static_cast<int>(zs.size()); // = n
    Matrix B(bd, 2 * nb);
    for (int c = 0; c < nb; ++c)
        for (int r = 0; r < bd; ++r) {
            B(r, c) = zs[c].coeff(Mask(1) << r);
            B(r, nb + c) = scalar_conj(zs[c].coeff(Mask(1) << r));
        }
    Matrix Binv = inverse(B);
    auto dual_covector = [&](int row) {
        Form out(d.base.frame, 1);
        for (int r = 0; r < bd; ++r) out.add_term(Mask(1) << r, Binv(row, r));
        return out;
    };

    // unit-volume vertical polyvector in frame order
    Poly zeta(d.model.frame, bd);
    {
        Mask m = 0;
        for (int i = 0; i < bd; ++i) m |= Mask(1) << (bd + i);
        zeta.add_term(m, GaussianRational(1));
    }

    // horizontal lift: base index -> same index on the double
    auto lift = [&](const Poly& z, bool conj_it) {
        Poly out(d.model.frame, 1);
        for (const auto& [m, c] : z.terms()) out.add_term(m, conj_it ? scalar_conj(c) : c);
        return out;
    };

    Form theta(d.base.frame, 2);
    for (int s = 0; s < nb; ++s)
        for (int t = 0; t < nb; ++t) {
            Form inner = contract(lift(zs[t], true), theta_big);
            Form outer = contract(lift(zs[s], false), inner);
            GaussianRational val = pair(outer, zeta);
            if (val.is_zero()) continue;
            theta += val * wedge(dual_covector(s), dual_covector(nb + t));
        }
    rep.type_11 = is_pure_type(theta, d.I_base, 1, 1);
    if (!theta.is_real()) throw DomainError("theta_pushforward: theta is not a real form");
    rep.theta = theta;

    // positivity: theta(v, I_b v) > 0 for all v != 0, via the symmetric
    // matrix A_ij = theta(e_i, I_b e_j), plus sampled vectors
    Matrix A(bd, bd);
    for (int i = 0; i < bd; ++i) {
        Poly ei(d.base.frame, 1);
        ei.add_term(Mask(1) << i, GaussianRational(1));
        for (int j = 0; j < bd; ++j) {
            Poly ej(d.base.frame, 1);
            ej.add_term(Mask(1) << j, GaussianRational(1));
            A(i, j) = pair(theta, wedge(ei, apply(d.I_base, ej)));
        }
    }
    bool sym = A == A.transpose();
    bool pd = sym && leading_minors_positive(A);
    Xoshiro256pp rng(20240801);
    bool sampled_ok = true;
    for (int trial = 0; trial < 100 && pd; ++trial) {
        Poly v(d.base.frame, 1);
        bool nonzero = false;
        for (int i = 0; i < bd; ++i) {
            long x = rng.uniform_int(-5, 5);
            if (x != 0) nonzero = true;
            v.add_term(Mask(1) << i, GaussianRational(x));
        }
        if (!nonzero) continue;
        GaussianRational val = pair(theta, wedge(v, apply(d.I_base, v)));
        if (!val.is_real() || val.re.sign() <= 0) sampled_ok = false;
    }
    rep.positive = rep.vertical_lagrangian && pd && sampled_ok;

    CEOperator ce_base(d.base);
    rep.closed = ce_base.d(theta).is_zero();
    return rep;
}

ScanOutcome hkt_obstruction_scan(const LieModel& m, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw DomainError("hkt_obstruction_scan: N must be positive");
    if (!m.structure) throw DomainError("hkt_obstruction_scan: model has no structure");
    ScanOutcome out;
    out.samples = samples;
    out.seed = seed;
    out.min_defect = SIZE_MAX;
    for (std::size_t b = 0; b < samples; ++b) {
        Xoshiro256pp rng = substream(seed, b);
        HyperhermitianMetric g = random_hyperhermitian(*m.structure, rng);
        HktReport hr = hkt_test(m, g);
        if (hr.hkt) ++out.hkt_count;
        out.all_agree = out.all_agree && hr.criteria_agree;
        out.min_defect = std::min(out.min_defect, hr.del_omega_terms);
    }
    if (out.min_defect == SIZE_MAX) out.min_defect = 0;
    return out;
}

ScanOutcome hkt_obstruction_scan(const DoubleModel& d, std::size_t samples, std::uint64_t seed) {
    return hkt_obstruction_scan(d.model, samples, seed);
}

AffineComplexModel builtin_affine_flat(int n) {
    if (n < 1 || 4 * n > kMaxDim) throw DomainError("affine flat model requires 1 <= n <= 4");
    int bd = 2 * n;
    FramePtr f = make_frame(bd);
    AffineComplexModel a;
    a.base = make_model(f, {});
    Matrix i_mat(bd, bd);
    for (int t = 0; t < n; ++t) {
        i_mat(2 * t + 1, 2 * t) = GaussianRational(1);
        i_mat(2 * t, 2 * t + 1) = GaussianRational(-1);
    }
    a.I_base = Endo(f, i_mat);
    a.rho.assign(bd, Matrix(bd, bd));
    a.t = Matrix::identity(bd);
    a.lattice = true;
    return a;
}

AffineComplexModel builtin_kodaira_base() {
    // group law (w1,w2)*(z1,z2) = (w1+z1, w2 - i conj(w1) z1 + z2) on C^2;
    // the linear part of left translation by w is z -> (z1, -i conj(w1) z1 + z2)
    FramePtr f = make_frame(4, {"e1", "f1", "e2", "f2"});
    std::map<std::pair<int, int>, std::map<int, GaussianRational>> br;
    br[{0, 1}][2] = GaussianRational(2); // [e1, f1] = 2 e2
    AffineComplexModel a;
    a.base = make_model(f, std::move(br));
    Matrix i_mat(4, 4);
    i_mat(1, 0) = GaussianRational(1);
    i_mat(0, 1) = GaussianRational(-1);
    i_mat(3, 2) = GaussianRational(1);
    i_mat(2, 3) = GaussianRational(-1);
    a.I_base = Endo(f, i_mat);
    // rho(x) z = (0, -i conj(x1) z1) in real coordinates (e1,f1,e2,f2)
    Matrix r0(4, 4), r1(4, 4);
    // x = e1 (x1 = 1): z1 = a+bi -> -i z1 = b - ai
    r0(2, 1) = GaussianRational(1);
    r0(3, 0) = GaussianRational(-1);
    // x = f1 (x1 = i): -i conj(i) z1 = -z1
    r1(2, 0) = GaussianRational(-1);
    r1(3, 1) = GaussianRational(-1);
    a.rho = {r0, r1, Matrix(4, 4), Matrix(4, 4)};
    a.t = Matrix::identity(4);
    a.lattice = true;
    return a;
}

AffineComplexModel builtin_iwasawa_base() {
    // (w1,w2,w3)*(z1,z2,z3) = (w1+z1, w2+z2, w3+z3+w1 z2) on C^3
    FramePtr f = make_frame(6, {"e1", "f1", "e2", "f2", "e3", "f3"});
    std::map<std::pair<int, int>, std::map<int, GaussianRational>> br;
    // [x,y]_3 = x1 y2 - y1 x2
    br[{0, 2}][4] = GaussianRational(1);  // [e1, e2] = e3
    br[{0, 3}][5] = GaussianRational(1);  // [e1, f2] = f3
    br[{1, 2}][5] = GaussianRational(1);  // [f1, e2] = f3
    br[{1, 3}][4] = GaussianRational(-1); // [f1, f2] = -e3
    AffineComplexModel a;
    a.base = make_model(f, std::move(br));
    Matrix i_mat(6, 6);
    for (int t = 0; t < 3; ++t) {
        i_mat(2 * t + 1, 2 * t) = GaussianRational(1);
        i_mat(2 * t, 2 * t + 1) = GaussianRational(-1);
    }
    a.I_base = Endo(f, i_mat);
    // rho(x) z = (0, 0, x1 z2)
    std::vector<Matrix> rho(6, Matrix(6, 6));
    // x = e1: (z2 = c+di) -> z3 += c+di
    rho[0](4, 2) = GaussianRational(1);
    rho[0](5, 3) = GaussianRational(1);
    // x = f1: z3 += i z2 = -d + ci
    rho[1](4, 3) = GaussianRational(-1);
    rho[1](5, 2) = GaussianRational(1);
    a.rho = std::move(rho);
    a.t = Matrix::identity(6);
    a.lattice = true;
    return a;
}

} // namespace hypercal
