#include "hypercal/lie_model.hpp"

#include <array>

#include "hypercal/linalg.hpp"

namespace hypercal {

GaussianRational LieModel::c(int i, int j, int k) const {
    if (i == j) return GaussianRational(0);
    bool flip = i > j;
    if (flip) std::swap(i, j);
    auto it = brackets.find({i, j});
    if (it == brackets.end()) return GaussianRational(0);
    auto kt = it->second.find(k);
    if (kt == it->second.end()) return GaussianRational(0);
    return flip ? -kt->second : kt->second;
}

Poly LieModel::bracket(const Poly& x, const Poly& y) const {
    require_same_frame(frame, x.frame(), "bracket");
    require_same_frame(frame, y.frame(), "bracket");
    if (x.degree() != 1 || y.degree() != 1) throw DomainError("bracket needs vectors");
    Poly out(frame, 1);
    for (const auto& [mx, cx] : x.terms()) {
        int i = std::countr_zero(mx);
        for (const auto& [my, cy] : y.terms()) {
            int j = std::countr_zero(my);
            if (i == j) continue;
            int a = std::min(i, j), b = std::max(i, j);
            auto it = brackets.find({a, b});
            if (it == brackets.end()) continue;
            GaussianRational f = cx * cy;
            if (i > j) f = -f;
            for (const auto& [k, ck] : it->second) out.add_term(Mask(1) << k, f * ck);
        }
    }
    return out;
}

std::optional<std::array<int, 3>> jacobi_witness(const LieModel& m) {
    int dim = m.frame->dim;
    auto basis = [&](int i) {
        Poly v(m.frame, 1);
        v.add_term(Mask(1) << i, GaussianRational(1));
        return v;
    };
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            for (int k = j + 1; k < dim; ++k) {
                Poly s = m.bracket(m.bracket(basis(i), basis(j)), basis(k)) +
                         m.bracket(m.bracket(basis(j), basis(k)), basis(i)) +
                         m.bracket(m.bracket(basis(k), basis(i)), basis(j));
                if (!s.is_zero()) return std::array<int, 3>{i, j, k};
            }
    return std::nullopt;
}

std::vector<int> lower_central_series(const LieModel& m) {
    int dim = m.frame->dim;
    // g_1 = g spanned by the frame; g_{s+1} = [g, g_s]
    std::vector<int> dims{dim};
    Matrix current = Matrix::identity(dim); // columns span g_s
    for (;;) {
        std::vector<std::vector<GaussianRational>> gens;
        for (int i = 0; i < dim; ++i)
            for (int c = 0; c < current.cols; ++c) {
                Poly x(m.frame, 1), y(m.frame, 1);
                x.add_term(Mask(1) << i, GaussianRational(1));
                for (int r = 0; r < dim; ++r) y.add_term(Mask(1) << r, current(r, c));
                Poly b = m.bracket(x, y);
                if (b.is_zero()) continue;
                std::vector<GaussianRational> col(dim, GaussianRational(0));
                for (int r = 0; r < dim; ++r) col[r] = b.coeff(Mask(1) << r);
                gens.push_back(std::move(col));
            }
        Matrix next(dim, static_cast<int>(gens.size()));
        for (int c = 0; c < next.cols; ++c)
            for (int r = 0; r < dim; ++r) next(r, c) = gens[c][r];
        int rk = next.cols == 0 ? 0 : rank(next);
        dims.push_back(rk);
        if (rk == 0 || rk == dims[dims.size() - 2]) break;
        current = std::move(next);
    }
    return dims;
}

bool is_nilpotent(const LieModel& m) {
    std::vector<int> s = lower_central_series(m);
    return s.back() == 0;
}

LieModel make_model(FramePtr frame,
                    std::map<std::pair<int, int>, std::map<int, GaussianRational>> brackets) {
    LieModel m;
    m.frame = std::move(frame);
    int dim = m.frame->dim;
    for (auto& [ij, terms] : brackets) {
        if (ij.first < 0 || ij.second >= dim || ij.first >= ij.second)
            throw DomainError("bracket indices must satisfy 0 <= i < j < dim");
        for (auto it = terms.begin(); it != terms.end();) {
            if (it->first < 0 || it->first >= dim) throw DomainError("bracket target out of range");
            if (!it->second.is_real())
                throw DomainError("structure constants must be real rationals");
            if (it->second.is_zero())
                it = terms.erase(it);
            else
                ++it;
        }
    }
    std::erase_if(brackets, [](const auto& kv) { return kv.second.empty(); });
    m.brackets = std::move(brackets);
    if (auto w = jacobi_witness(m))
        throw DomainError("Jacobi identity fails on (" + std::to_string((*w)[0]) + "," +
                          std::to_string((*w)[1]) + "," + std::to_string((*w)[2]) + ")");
    m.nilpotent = is_nilpotent(m);
    return m;
}

CEOperator::CEOperator(const LieModel& m) : model_(&m) {
    int dim = m.frame->dim;
    d_of_coframe_.reserve(dim);
    for (int k = 0; k < dim; ++k) {
        Form dk(m.frame, 2);
        for (const auto& [ij, terms] : m.brackets) {
            auto it = terms.find(k);
            if (it == terms.end()) continue;
            // (d e^k)(x_i, x_j) = -c^k_ij
            dk.add_term((Mask(1) << ij.first) | (Mask(1) << ij.second), -it->second);
        }
        d_of_coframe_.push_back(std::move(dk));
    }
    // d^2 = 0 on generators implies d^2 = 0 everywhere.
    for (int k = 0; k < dim; ++k)
        if (!d(d_of_coframe_[k]).is_zero())
            throw DomainError("Chevalley-Eilenberg d^2 != 0 on e^" + std::to_string(k + 1));
}

Form CEOperator::d(const Form& a) const {
    require_same_frame(model_->frame, a.frame(), "CE d");
    int deg = a.degree();
    Form out(a.frame(), std::min(deg + 1, a.dim()));
    if (deg >= a.dim()) return Form(a.frame(), a.dim()); // top degree: zero (degree dim)
    for (const auto& [m, c] : a.terms()) {
        // antiderivation over the factors of the monomial
        int pos = 0;
        for (int t : mask_indices(m)) {
            const Form& dt = d_of_coframe_[t];
            if (!dt.is_zero()) {
                Mask rest = m & ~(Mask(1) << t);
                GaussianRational sign_c = (pos % 2 == 0) ? c : -c;
                for (const auto& [md, cd] : dt.terms()) {
                    if (md & rest) continue;
                    GaussianRational coef = sign_c * cd;
                    if (wedge_sign(md, rest) < 0) coef = -coef;
                    out.add_term(md | rest, coef);
                }
            }
            ++pos;
        }
    }
    return out;
}

Matrix CEOperator::matrix(int k) const {
    int dim = model_->frame->dim;
    if (k < 0 || k > dim) throw DomainError("CE matrix: degree out of range");
    std::vector<Mask> rows_basis, cols_basis;
    for (Mask m = 0; m < (Mask(1) << dim); ++m) {
        int deg = mask_degree(m);
        if (deg == k) cols_basis.push_back(m);
        if (deg == k + 1) rows_basis.push_back(m);
    }
    Matrix out(static_cast<int>(rows_basis.size()), static_cast<int>(cols_basis.size()));
    std::map<Mask, int> row_of;
    for (int r = 0; r < static_cast<int>(rows_basis.size()); ++r) row_of[rows_basis[r]] = r;
    for (int c = 0; c < static_cast<int>(cols_basis.size()); ++c) {
        Form e(model_->frame, k);
        e.add_term(cols_basis[c], GaussianRational(1));
        Form de = d(e);
        for (const auto& [m, v] : de.terms()) out(row_of[m], c) = v;
    }
    return out;
}

NijenhuisReport nijenhuis(const LieModel& m, const Endo& L) {
    require_same_frame(m.frame, L.frame, "nijenhuis");
    if (!(L.mat * L.mat == -Matrix::identity(m.frame->dim)))
        throw DomainError("nijenhuis: L^2 != -Id");
    int dim = m.frame->dim;
    NijenhuisReport rep;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Poly x(m.frame, 1), y(m.frame, 1);
            x.add_term(Mask(1) << i, GaussianRational(1));
            y.add_term(Mask(1) << j, GaussianRational(1));
            Poly lx = apply(L, x), ly = apply(L, y);
            Poly n = m.bracket(x, y) + apply(L, m.bracket(lx, y)) + apply(L, m.bracket(x, ly)) -
                     m.bracket(lx, ly);
            if (!n.is_zero()) {
                rep.zero = false;
                rep.witness_i = i;
                rep.witness_j = j;
                rep.value = n;
                return rep;
            }
        }
    rep.zero = true;
    return rep;
}

HktReport hkt_test(const LieModel& m) {
    if (!m.metric) throw DomainError("hkt_test: model has no metric");
    return hkt_test(m, *m.metric);
}

HktReport hkt_test(const LieModel& m, const HyperhermitianMetric& g) {
    if (!m.structure) throw DomainError("hkt_test: model has no quaternionic structure");
    const QuaternionicStructure& q = *m.structure;
    CEOperator ce(m);
    KahlerForms kf = kahler_forms(g, q);
    HktReport rep;
    Form d_omega_big = ce.d(kf.Omega_I);
    rep.hyperkahler = d_omega_big.is_zero();
    Form del_omega = bigrade_component(d_omega_big, q.I, 3, 0);
    rep.del_omega_terms = del_omega.term_count();
    rep.hkt = del_omega.is_zero();
    Form dplus = project_plus(q, ce.d(kf.omega_I));
    rep.dplus_omega_terms = dplus.term_count();
    rep.criteria_agree = (rep.hkt == dplus.is_zero());
    if (!rep.criteria_agree)
        throw DomainError("hkt_test: del Omega_I = 0 and d_+ omega_I = 0 disagree");
    return rep;
}

bool hyperkahler_test(const LieModel& m) {
    if (!m.structure) throw DomainError("hyperkahler_test: model has no quaternionic structure");
    if (!m.metric) throw DomainError("hyperkahler_test: model has no metric");
    CEOperator ce(m);
    KahlerForms kf = kahler_forms(*m.metric, *m.structure);
    return ce.d(kf.Omega_I).is_zero();
}

long ce_cohomology(const LieModel& m, int k) {
    int dim = m.frame->dim;
    if (k < 0 || k > dim) throw DomainError("ce_cohomology: degree out of range");
    CEOperator ce(m);
    long dim_k = 1;
    for (int i = 0; i < k; ++i) dim_k = dim_k * (dim - i) / (i + 1);
    long rank_k = (k == dim) ? 0 : rank(ce.matrix(k));
    long rank_km1 = (k == 0) ? 0 : rank(ce.matrix(k - 1));
    return dim_k - rank_k - rank_km1;
}

LieModel builtin_flat(int n) {
    if (n < 1 || 4 * n > kMaxDim) throw DomainError("flat model requires 1 <= n <= 4");
    FramePtr f = make_frame(4 * n);
    LieModel m = make_model(f, {});
    m.structure = standard_structure(f);
    m.metric = standard_metric(f);
    m.lattice_admissible = true;
    return m;
}

} // namespace hypercal
