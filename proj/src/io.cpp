#include "hypercal/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace hypercal {

const LieModel& ModelDocument::as_lie() const {
    if (lie) return *lie;
    if (dbl) return dbl->model;
    throw DomainError("command expects a Lie model, got " + kind);
}

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw ParseError(what + ": object expected");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!allowed.count(k)) throw ParseError(what + ": unknown key '" + k + "'");
    }
}

long parse_index(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ParseError(what + ": integer expected");
    return j.get<long>();
}

} // namespace

GaussianRational parse_scalar(const Json& j) {
    if (j.is_number_integer()) return GaussianRational(Rational(j.get<long>()));
    if (j.is_string()) return GaussianRational(Rational::parse(j.get<std::string>()));
    if (j.is_object()) {
        check_keys(j, {"re", "im"}, "scalar");
        Rational re(0), im(0);
        if (j.contains("re")) {
            const Json& r = j.at("re");
            re = r.is_number_integer() ? Rational(r.get<long>()) : Rational::parse(r.get<std::string>());
        }
        if (j.contains("im")) {
            const Json& r = j.at("im");
            im = r.is_number_integer() ? Rational(r.get<long>()) : Rational::parse(r.get<std::string>());
        }
        return GaussianRational(re, im);
    }
    throw ParseError("scalar: integer, \"p/q\" string or {re,im} object expected");
}

Json scalar_to_json(const GaussianRational& s) {
    if (s.im.is_zero()) return Json(s.re.str());
    Json j = Json::object();
    j["re"] = s.re.str();
    j["im"] = s.im.str();
    return j;
}

Matrix parse_matrix(const Json& j, int rows, int cols, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw ParseError(what + ": expected " + std::to_string(rows) + " rows");
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const Json& row = j.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ParseError(what + ": expected " + std::to_string(cols) + " columns");
        for (int c = 0; c < cols; ++c) m(r, c) = parse_scalar(row.at(c));
    }
    return m;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows; ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(scalar_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json form_to_json(const Form& f) {
    Json j = Json::object();
    j["degree"] = f.degree();
    Json terms = Json::array();
    for (const auto& [m, c] : f.terms()) {
        Json t = Json::object();
        Json idx = Json::array();
        for (int i : mask_indices(m)) idx.push_back(i);
        t["idx"] = std::move(idx);
        t["c"] = scalar_to_json(c);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

Form form_from_json(const Json& j, const FramePtr& frame) {
    check_keys(j, {"degree", "terms"}, "form");
    if (!j.contains("degree") || !j.contains("terms")) throw ParseError("form: degree and terms required");
    int degree = static_cast<int>(parse_index(j.at("degree"), "form degree"));
    Form f(frame, degree);
    for (const Json& t : j.at("terms")) {
        check_keys(t, {"idx", "c"}, "form term");
        std::vector<int> idx;
        for (const Json& i : t.at("idx")) idx.push_back(static_cast<int>(parse_index(i, "form index")));
        for (std::size_t k = 1; k < idx.size(); ++k)
            if (idx[k] <= idx[k - 1]) throw ParseError("form: indices must be strictly increasing");
        f.add_term(mask_from_indices(idx, frame->dim), parse_scalar(t.at("c")));
    }
    return f;
}

namespace {

FramePtr parse_frame(const Json& j, const std::string& what) {
    if (!j.contains("dim")) throw ParseError(what + ": dim required");
    long dim = parse_index(j.at("dim"), what + " dim");
    if (dim < 1 || dim > kMaxDim) throw ParseError(what + ": dim out of range");
    std::vector<std::string> names;
    if (j.contains("names")) {
        if (!j.at("names").is_array()) throw ParseError(what + ": names must be an array");
        for (const Json& n : j.at("names")) {
            if (!n.is_string()) throw ParseError(what + ": names must be strings");
            names.push_back(n.get<std::string>());
        }
    }
    try {
        return make_frame(static_cast<int>(dim), std::move(names));
    } catch (const DomainError& e) {
        throw ParseError(what + ": " + e.what());
    }
}

std::map<std::pair<int, int>, std::map<int, GaussianRational>> parse_brackets(const Json& j,
                                                                              int dim) {
    std::map<std::pair<int, int>, std::map<int, GaussianRational>> br;
    if (!j.is_array()) throw ParseError("brackets: array expected");
    for (const Json& e : j) {
        check_keys(e, {"i", "j", "k", "c"}, "bracket entry");
        if (!e.contains("i") || !e.contains("j") || !e.contains("k") || !e.contains("c"))
            throw ParseError("bracket entry: i, j, k, c required");
        int i = static_cast<int>(parse_index(e.at("i"), "bracket i"));
        int jj = static_cast<int>(parse_index(e.at("j"), "bracket j"));
        int k = static_cast<int>(parse_index(e.at("k"), "bracket k"));
        if (i < 0 || jj >= dim || k < 0 || k >= dim) throw ParseError("bracket entry: index out of range");
        if (i >= jj) throw ParseError("bracket entry: i < j required");
        GaussianRational c = parse_scalar(e.at("c"));
        if (!c.is_zero()) br[{i, jj}][k] += c;
    }
    return br;
}

Json brackets_to_json(const LieModel& m) {
    Json out = Json::array();
    for (const auto& [ij, terms] : m.brackets)
        for (const auto& [k, c] : terms) {
            Json e = Json::object();
            e["i"] = ij.first;
            e["j"] = ij.second;
            e["k"] = k;
            e["c"] = scalar_to_json(c);
            out.push_back(std::move(e));
        }
    return out;
}

std::optional<QuaternionicStructure> parse_structure(const Json& j, const FramePtr& frame) {
    bool has_i = j.contains("I"), has_j = j.contains("J"), has_k = j.contains("K");
    if (!has_i && !has_j && !has_k) return std::nullopt;
    if (!(has_i && has_j && has_k))
        throw ParseError("model: I, J, K must be given together");
    int d = frame->dim;
    Endo I(frame, parse_matrix(j.at("I"), d, d, "I"));
    Endo J(frame, parse_matrix(j.at("J"), d, d, "J"));
    Endo K(frame, parse_matrix(j.at("K"), d, d, "K"));
    return QuaternionicStructure(frame, I, J, K); // validates, throws DomainError
}

LieModel parse_lie_payload(const Json& j, const std::string& what) {
    FramePtr frame = parse_frame(j, what);
    auto br = j.contains("brackets")
                  ? parse_brackets(j.at("brackets"), frame->dim)
                  : std::map<std::pair<int, int>, std::map<int, GaussianRational>>{};
    LieModel m = make_model(frame, std::move(br)); // Jacobi check -> DomainError
    m.structure = parse_structure(j, frame);
    if (j.contains("metric"))
        m.metric = HyperhermitianMetric(frame, parse_matrix(j.at("metric"), frame->dim, frame->dim,
                                                            "metric"));
    if (j.contains("lattice")) {
        if (!j.at("lattice").is_boolean()) throw ParseError("lattice: boolean expected");
        m.lattice_admissible = j.at("lattice").get<bool>();
    }
    return m;
}

void require_format(const Json& j) {
    if (!j.contains("format") || !j.at("format").is_string() ||
        j.at("format").get<std::string>() != kFormatVersion)
        throw ParseError("model: format must be \"" + std::string(kFormatVersion) + "\"");
}

} // namespace

ModelDocument parse_model(const Json& j) {
    if (!j.is_object()) throw ParseError("model: object expected");
    require_format(j);
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ParseError("model: kind required");
    std::string kind = j.at("kind").get<std::string>();
    ModelDocument doc;
    doc.kind = kind;
    if (kind == "lie_model") {
        check_keys(j, {"format", "kind", "dim", "names", "brackets", "I", "J", "K", "metric",
                       "lattice"},
                   "lie_model");
        doc.lie = parse_lie_payload(j, "lie_model");
        doc.canonical = serialize(*doc.lie).dump(2);
    } else if (kind == "affine_model") {
        check_keys(j, {"format", "kind", "dim", "names", "brackets", "I", "rho", "t", "lattice"},
                   "affine_model");
        FramePtr frame = parse_frame(j, "affine_model");
        int d = frame->dim;
        AffineComplexModel a;
        a.base = make_model(frame, j.contains("brackets")
                                       ? parse_brackets(j.at("brackets"), d)
                                       : std::map<std::pair<int, int>,
                                                  std::map<int, GaussianRational>>{});
        if (!j.contains("I")) throw ParseError("affine_model: I required");
        a.I_base = Endo(frame, parse_matrix(j.at("I"), d, d, "I"));
        if (!j.contains("rho") || !j.at("rho").is_array() ||
            static_cast<int>(j.at("rho").size()) != d)
            throw ParseError("affine_model: rho must list one matrix per basis vector");
        for (const Json& r : j.at("rho")) a.rho.push_back(parse_matrix(r, d, d, "rho"));
        a.t = j.contains("t") ? parse_matrix(j.at("t"), d, d, "t") : Matrix::identity(d);
        if (j.contains("lattice")) {
            if (!j.at("lattice").is_boolean()) throw ParseError("lattice: boolean expected");
            a.lattice = j.at("lattice").get<bool>();
        }
        ValidationReport rep = validate_affine(a);
        if (!rep.ok()) {
            for (const auto& c : rep.checks)
                if (!c.pass)
                    throw DomainError("affine model: " + c.name + " fails" +
                                      (c.witness.empty() ? "" : " at " + c.witness));
        }
        doc.affine = std::move(a);
        doc.canonical = serialize(*doc.affine).dump(2);
    } else if (kind == "double_model") {
        check_keys(j, {"format", "kind", "dim", "names", "brackets", "I", "J", "K", "metric",
                       "lattice", "split", "projection"},
                   "double_model");
        LieModel m = parse_lie_payload(j, "double_model");
        if (!m.structure) throw ParseError("double_model: I, J, K required");
        if (!j.contains("split")) throw ParseError("double_model: split required");
        const Json& split = j.at("split");
        check_keys(split, {"horizontal", "vertical"}, "split");
        DoubleModel d;
        for (const Json& i : split.at("horizontal"))
            d.horizontal.push_back(static_cast<int>(parse_index(i, "split index")));
        for (const Json& i : split.at("vertical"))
            d.vertical.push_back(static_cast<int>(parse_index(i, "split index")));
        int dim = m.frame->dim;
        int bd = dim / 2;
        if (static_cast<int>(d.horizontal.size()) != bd ||
            static_cast<int>(d.vertical.size()) != bd)
            throw ParseError("double_model: split must name 2n horizontal and 2n vertical indices");
        for (int i = 0; i < bd; ++i)
            if (d.horizontal[i] != i || d.vertical[i] != bd + i)
                throw ParseError("double_model: split must be horizontal-first in frame order");
        if (!j.contains("projection")) throw ParseError("double_model: projection required");
        d.projection = parse_matrix(j.at("projection"), bd, dim, "projection");
        d.n = bd / 2;
        // reconstruct the base model from the horizontal block
        std::vector<std::string> base_names(m.frame->names.begin(), m.frame->names.begin() + bd);
        FramePtr base_frame = make_frame(bd, base_names);
        std::map<std::pair<int, int>, std::map<int, GaussianRational>> bbr;
        for (const auto& [ij, terms] : m.brackets) {
            if (ij.second >= bd) continue;
            for (const auto& [k, c] : terms) {
                if (k >= bd) throw DomainError("double model: horizontal brackets leave the base");
                bbr[ij][k] = c;
            }
        }
        d.base = make_model(base_frame, std::move(bbr));
        Matrix ib(bd, bd);
        for (int r = 0; r < bd; ++r)
            for (int c = 0; c < bd; ++c) ib(r, c) = -m.structure->I.mat(r, c);
        for (int r = 0; r < bd; ++r)
            for (int c = 0; c < bd; ++c)
                if (!m.structure->I.mat(bd + r, c).is_zero() ||
                    !m.structure->I.mat(r, bd + c).is_zero())
                    throw DomainError("double model: I must be block-diagonal in the split");
        if (!(ib * ib == -Matrix::identity(bd)))
            throw DomainError("double model: horizontal block of I is not a complex structure");
        d.I_base = Endo(base_frame, ib);
        d.model = std::move(m);
        doc.dbl = std::move(d);
        doc.canonical = serialize(*doc.dbl).dump(2);
    } else {
        throw ParseError("model: unknown kind '" + kind + "'");
    }
    return doc;
}

ModelDocument parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_model(j);
}

namespace {

Json lie_payload_json(const LieModel& m) {
    Json j = Json::object();
    j["dim"] = m.frame->dim;
    j["names"] = m.frame->names;
    j["brackets"] = brackets_to_json(m);
    if (m.structure) {
        j["I"] = matrix_to_json(m.structure->I.mat);
        j["J"] = matrix_to_json(m.structure->J.mat);
        j["K"] = matrix_to_json(m.structure->K.mat);
    }
    if (m.metric) j["metric"] = matrix_to_json(m.metric->G);
    if (m.lattice_admissible) j["lattice"] = true;
    return j;
}

} // namespace

Json serialize(const LieModel& m) {
    Json j = Json::object();
    j["format"] = kFormatVersion;
    j["kind"] = "lie_model";
    Json payload = lie_payload_json(m);
    for (auto& [k, v] : payload.items()) j[k] = std::move(v);
    return j;
}

Json serialize(const AffineComplexModel& a) {
    Json j = Json::object();
    j["format"] = kFormatVersion;
    j["kind"] = "affine_model";
    j["dim"] = a.base.frame->dim;
    j["names"] = a.base.frame->names;
    j["brackets"] = brackets_to_json(a.base);
    j["I"] = matrix_to_json(a.I_base.mat);
    Json rho = Json::array();
    for (const Matrix& r : a.rho) rho.push_back(matrix_to_json(r));
    j["rho"] = std::move(rho);
    j["t"] = matrix_to_json(a.t);
    j["lattice"] = a.lattice;
    return j;
}

Json serialize(const DoubleModel& d) {
    Json j = Json::object();
    j["format"] = kFormatVersion;
    j["kind"] = "double_model";
    Json payload = lie_payload_json(d.model);
    for (auto& [k, v] : payload.items()) j[k] = std::move(v);
    Json split = Json::object();
    split["horizontal"] = d.horizontal;
    split["vertical"] = d.vertical;
    j["split"] = std::move(split);
    j["projection"] = matrix_to_json(d.projection);
    return j;
}

bool is_builtin_name(const std::string& name) {
    if (name == "kodaira" || name == "kodaira_base" || name == "iwasawa" ||
        name == "iwasawa_base" || name == "kodaira_double" || name == "iwasawa_double")
        return true;
    for (int n = 1; n <= 4; ++n) {
        if (name == "flat:" + std::to_string(n)) return true;
        if (name == "flat_double:" + std::to_string(n)) return true;
    }
    return false;
}

ModelDocument builtin_document(const std::string& name) {
    auto from_lie = [](LieModel m) {
        ModelDocument doc;
        doc.kind = "lie_model";
        doc.canonical = serialize(m).dump(2);
        doc.lie = std::move(m);
        return doc;
    };
    auto from_affine = [](AffineComplexModel a) {
        ModelDocument doc;
        doc.kind = "affine_model";
        doc.canonical = serialize(a).dump(2);
        doc.affine = std::move(a);
        return doc;
    };
    auto from_double = [](DoubleModel d) {
        ModelDocument doc;
        doc.kind = "double_model";
        doc.canonical = serialize(d).dump(2);
        doc.dbl = std::move(d);
        return doc;
    };
    for (int n = 1; n <= 4; ++n) {
        if (name == "flat:" + std::to_string(n)) return from_lie(builtin_flat(n));
        if (name == "flat_double:" + std::to_string(n))
            return from_double(build_double(builtin_affine_flat(n)));
    }
    if (name == "kodaira" || name == "kodaira_base") return from_affine(builtin_kodaira_base());
    if (name == "iwasawa" || name == "iwasawa_base") return from_affine(builtin_iwasawa_base());
    if (name == "kodaira_double") return from_double(build_double(builtin_kodaira_base()));
    if (name == "iwasawa_double") return from_double(build_double(builtin_iwasawa_base()));
    throw ParseError("unknown builtin '" + name + "'");
}

ModelDocument load_model(const std::string& path_or_name) {
    if (is_builtin_name(path_or_name)) return builtin_document(path_or_name);
    return parse_model_file(path_or_name);
}

std::string content_hash(const std::string& bytes) {
    // FNV-1a 64-bit
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace hypercal
