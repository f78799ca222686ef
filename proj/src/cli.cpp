#include "hypercal/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hypercal/comass.hpp"
#include "hypercal/report.hpp"

namespace hypercal {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitExpect = 2;
constexpr int kExitParse = 3;

void emit(ReportBuilder& rb, bool with_timings, std::ostream& out, std::ostream& err) {
    Json j = rb.finish(with_timings);
    out << j.dump(2) << "\n";
    for (const auto& c : j["checks"])
        err << (c["pass"].get<bool>() ? "ok   " : "FAIL ") << c["name"].get<std::string>() << "\n";
}

const QuaternionicStructure& need_structure(const ModelDocument& doc) {
    const LieModel& m = doc.as_lie();
    if (!m.structure) throw DomainError("model has no quaternionic structure");
    return *m.structure;
}

// Metric spec grammar: "random:SEED[:N]" or a path to a JSON matrix file.
struct MetricSource {
    bool random = false;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    std::string path;
};

MetricSource parse_metric_spec(const std::string& spec) {
    MetricSource src;
    if (spec.rfind("random:", 0) == 0) {
        src.random = true;
        std::string rest = spec.substr(7);
        auto colon = rest.find(':');
        try {
            if (colon == std::string::npos) {
                src.seed = std::stoull(rest);
            } else {
                src.seed = std::stoull(rest.substr(0, colon));
                src.count = std::stoull(rest.substr(colon + 1));
            }
        } catch (const std::exception&) {
            throw ParseError("bad --metric spec '" + spec + "'");
        }
        if (src.count == 0) throw ParseError("--metric random: N must be positive");
    } else {
        src.path = spec;
    }
    return src;
}

std::vector<HyperhermitianMetric> resolve_metrics(const ModelDocument& doc,
                                                  const std::string& metric_spec) {
    const LieModel& m = doc.as_lie();
    if (metric_spec.empty()) {
        if (!m.metric) throw DomainError("model has no metric; pass --metric");
        return {*m.metric};
    }
    MetricSource src = parse_metric_spec(metric_spec);
    const QuaternionicStructure& q = need_structure(doc);
    std::vector<HyperhermitianMetric> out;
    if (src.random) {
        for (std::size_t i = 0; i < src.count; ++i) {
            Xoshiro256pp rng = substream(src.seed, i);
            out.push_back(random_hyperhermitian(q, rng));
        }
        return out;
    }
    std::ifstream in(src.path);
    if (!in) throw ParseError("cannot open '" + src.path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + src.path + "': " + e.what());
    }
    out.emplace_back(m.frame, parse_matrix(j, m.frame->dim, m.frame->dim, "metric"));
    return out;
}

// The volume-form selection appropriate for the model at hand.
VolumeForm model_volume_form(const ModelDocument& doc) {
    if (doc.dbl) return double_volume_form(*doc.dbl);
    const QuaternionicStructure& q = need_structure(doc);
    return standard_volume_form(q, flat_selection(q.n));
}

// ---- commands ---------------------------------------------------------------

int cmd_validate(const ModelDocument& doc, bool timings, std::ostream& out, std::ostream& err) {
    ReportBuilder rb("validate", doc);
    const LieModel* lie = doc.lie ? &*doc.lie : (doc.dbl ? &doc.dbl->model : &doc.affine->base);
    rb.add_check("jacobi", !jacobi_witness(*lie).has_value());
    rb.add_check("antisymmetry", true, "canonical storage");
    rb.set("nilpotent", lie->nilpotent);
    if (doc.affine) {
        rb.add_checks(validate_affine(*doc.affine), "affine: ");
        rb.set("integer_monodromy", integer_monodromy(*doc.affine));
    }
    if (lie->structure) {
        rb.add_checks(validate_quaternionic(lie->frame, lie->structure->I, lie->structure->J,
                                            lie->structure->K),
                      "quaternionic: ");
        for (const auto& [name, L] :
             {std::pair<const char*, const Endo*>{"I", &lie->structure->I},
              {"J", &lie->structure->J},
              {"K", &lie->structure->K}}) {
            NijenhuisReport nr = nijenhuis(*lie, *L);
            rb.add_check(std::string("nijenhuis(") + name + ") = 0", nr.zero,
                         nr.zero ? ""
                                 : "witness (x_" + std::to_string(nr.witness_i + 1) + ", x_" +
                                       std::to_string(nr.witness_j + 1) + ")");
        }
    }
    if (lie->metric && lie->structure)
        rb.add_checks(validate_metric(*lie->metric, *lie->structure), "metric: ");
    emit(rb, timings, out, err);
    return rb.all_pass() ? kExitPass : kExitFail;
}

int cmd_weights(const ModelDocument& doc, int degree, bool timings, std::ostream& out,
                std::ostream& err) {
    const QuaternionicStructure& q = need_structure(doc);
    WeightDecomposition wd = weight_decompose(q, degree);
    ReportBuilder rb("weights", doc);
    rb.set("degree", degree);
    rb.set("max_weight", wd.max_weight);
    Json mult = Json::object();
    for (auto it = wd.multiplicities.rbegin(); it != wd.multiplicities.rend(); ++it)
        mult[std::to_string(it->first)] = it->second;
    rb.set("multiplicities", std::move(mult));
    rb.add_check("clebsch-gordan bound",
                 wd.max_weight == std::min(degree, q.frame->dim - degree));
    emit(rb, timings, out, err);
    return rb.all_pass() ? kExitPass : kExitFail;
}

int cmd_hkt(const ModelDocument& doc, const std::string& metric_spec, const std::string& expect,
            bool timings, std::ostream& out, std::ostream& err) {
    const LieModel& m = doc.as_lie();
    std::vector<HyperhermitianMetric> metrics = resolve_metrics(doc, metric_spec);
    ReportBuilder rb("hkt", doc);
    std::size_t hkt_count = 0;
    Json verdicts = Json::array();
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        HktReport hr = hkt_test(m, metrics[i]);
        if (hr.hkt) ++hkt_count;
        Json v = Json::object();
        v["hkt"] = hr.hkt;
        v["hyperkahler"] = hr.hyperkahler;
        v["del_omega_terms"] = hr.del_omega_terms;
        verdicts.push_back(std::move(v));
        rb.add_check("criteria agree (metric " + std::to_string(i) + ")", hr.criteria_agree);
    }
    rb.set("metrics", metrics.size());
    rb.set("hkt_found", hkt_count);
    rb.set("verdicts", std::move(verdicts));
    emit(rb, timings, out, err);
    if (!rb.all_pass()) return kExitFail;
    if (!expect.empty()) {
        bool want_hkt = expect == "hkt";
        bool match = want_hkt ? hkt_count == metrics.size() : hkt_count == 0;
        if (!match) return kExitExpect;
    }
    return kExitPass;
}

int cmd_double(const ModelDocument& doc, const std::string& out_path, bool timings,
               std::ostream& out, std::ostream& err) {
    if (!doc.affine) throw DomainError("double: input must be an affine model");
    DoubleModel d = build_double(*doc.affine);
    ReportBuilder rb("double", doc);
    rb.add_check("build invariants", true);
    rb.set("dim", d.model.frame->dim);
    rb.set("n", d.n);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw ParseError("cannot write '" + out_path + "'");
        f << serialize(d).dump(2) << "\n";
        rb.set("written", out_path);
    } else {
        rb.set("model_out", serialize(d));
    }
    emit(rb, timings, out, err);
    return kExitPass;
}

int cmd_psi(const ModelDocument& doc, bool timings, std::ostream& out, std::ostream& err) {
    const LieModel& m = doc.as_lie();
    ReportBuilder rb("psi", doc);
    VolumeForm vol = model_volume_form(doc);
    CalibrationForm cal = psi(need_structure(doc), vol);
    CEOperator ce(m);
    bool closed = ce.d(cal.psi).is_zero();
    rb.add_check("psi closed", closed);
    rb.set("n", cal.n);
    rb.set("psi", form_to_json(cal.psi));
    emit(rb, timings, out, err);
    return rb.all_pass() ? kExitPass : kExitFail;
}

int cmd_comass(const ModelDocument& doc, std::size_t samples, std::uint64_t seed,
               const std::string& kernel, bool no_polish, bool timings, std::ostream& out,
               std::ostream& err) {
    const LieModel& m = doc.as_lie();
    const QuaternionicStructure& q = need_structure(doc);
    std::optional<HyperhermitianMetric> metric = m.metric;
    if (!metric && doc.dbl)
        metric = fibration_metric(*doc.dbl, standard_metric(doc.dbl->base.frame));
    if (!metric) throw DomainError("comass: model has no metric");
    VolumeForm vol = model_volume_form(doc);
    CalibrationForm cal = psi(q, vol);
    ComassOptions opts;
    opts.samples = samples;
    opts.seed = seed;
    opts.polish = !no_polish;
    opts.kernel = simd::kernel_from_string(kernel);
    ComassReport cr = comass_sample(cal, *metric, reference_lagrangian_span(q, vol), opts);
    ReportBuilder rb("comass", doc);
    rb.set("samples", cr.samples);
    rb.set("seed", cr.seed);
    rb.set("max", cr.max);
    rb.set("lagrangian_value", cr.lagrangian_value);
    rb.set("ratio", cr.ratio);
    rb.set("max_drawn", cr.max_drawn);
    rb.set("degenerate_redraws", cr.degenerate_redraws);
    rb.set("polish_evals", cr.polish_evals);
    rb.set("kernel", cr.kernel);
    rb.set("argmax", cr.argmax);
    emit(rb, timings, out, err);
    return kExitPass;
}

int cmd_cohomology(const ModelDocument& doc, int degree, bool timings, std::ostream& out,
                   std::ostream& err) {
    const LieModel& m = doc.lie ? *doc.lie : (doc.dbl ? doc.dbl->model : doc.affine->base);
    long b = ce_cohomology(m, degree);
    ReportBuilder rb("cohomology", doc);
    rb.set("degree", degree);
    rb.set("betti", b);
    emit(rb, timings, out, err);
    return kExitPass;
}

int cmd_report(const ModelDocument& doc, std::uint64_t scan_seed, std::size_t scan_samples,
               bool timings, std::ostream& out, std::ostream& err) {
    const LieModel& m = doc.lie ? *doc.lie : (doc.dbl ? doc.dbl->model : doc.affine->base);
    ReportBuilder rb("report", doc);
    rb.add_check("jacobi", !jacobi_witness(m).has_value());
    rb.set("nilpotent", m.nilpotent);
    if (m.structure) {
        rb.add_checks(validate_quaternionic(m.frame, m.structure->I, m.structure->J,
                                            m.structure->K),
                      "quaternionic: ");
        Json weights = Json::object();
        for (int k : {1, 2}) {
            WeightDecomposition wd = weight_decompose(*m.structure, k);
            Json mult = Json::object();
            for (auto it = wd.multiplicities.rbegin(); it != wd.multiplicities.rend(); ++it)
                mult[std::to_string(it->first)] = it->second;
            weights[std::to_string(k)] = std::move(mult);
        }
        rb.set("weights", std::move(weights));
        try {
            VolumeForm vol = model_volume_form(doc);
            CalibrationForm cal = psi(*m.structure, vol);
            CEOperator ce(m);
            rb.set("psi_closed", ce.d(cal.psi).is_zero());
        } catch (const DomainError&) {
            rb.set("psi_closed", nullptr); // no canonical volume frame
        }
        ScanOutcome scan = hkt_obstruction_scan(m, scan_samples, scan_seed);
        rb.set("hkt_scan_samples", scan.samples);
        rb.set("hkt_scan_seed", scan.seed);
        rb.set("hkt_found", scan.hkt_count);
        rb.add_check("hkt criteria agree on all samples", scan.all_agree);
    }
    rb.set("b1", ce_cohomology(m, 1));
    rb.set("b2", ce_cohomology(m, 2));
    if (doc.dbl) {
        HyperhermitianMetric base_g = standard_metric(doc.dbl->base.frame);
        HyperhermitianMetric h = fibration_metric(*doc.dbl, base_g);
        ThetaReport tr = theta_pushforward(*doc.dbl, h);
        rb.add_check("theta is (1,1)", tr.type_11);
        rb.set("theta_positive", tr.positive);
        rb.set("theta_closed", tr.closed);
    }
    emit(rb, timings, out, err);
    return rb.all_pass() ? kExitPass : kExitFail;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact hypercomplex linear algebra and calibration toolkit"};
    app.require_subcommand(1);
    bool no_timings = false;
    app.add_flag("--no-timings", no_timings, "omit the timings field from the report");

    std::string model_path, metric_spec, expect, out_path, kernel = "auto";
    int degree = 0;
    std::uint64_t seed = 1;
    std::size_t samples = 10000;
    bool no_polish = false;
    std::uint64_t scan_seed = 7;
    std::size_t scan_samples = 10;

    CLI::App* validate = app.add_subcommand("validate", "structural and algebraic checks");
    validate->add_option("model", model_path)->required();

    CLI::App* weights = app.add_subcommand("weights", "weight multiplicities of Lambda^k");
    weights->add_option("model", model_path)->required();
    weights->add_option("--degree", degree, "exterior degree")->required();

    CLI::App* hkt = app.add_subcommand("hkt", "HKT verdicts per metric");
    hkt->add_option("model", model_path)->required();
    hkt->add_option("--metric", metric_spec, "metric file or random:SEED[:N]");
    hkt->add_option("--expect", expect, "hkt | not-hkt")
        ->check(CLI::IsMember({"hkt", "not-hkt"}));

    CLI::App* dbl = app.add_subcommand("double", "build the quaternionic double");
    dbl->add_option("model", model_path)->required();
    dbl->add_option("-o,--output", out_path, "output model file");

    CLI::App* psi_cmd = app.add_subcommand("psi", "calibration form and closedness");
    psi_cmd->add_option("model", model_path)->required();

    CLI::App* comass = app.add_subcommand("comass", "calibration ratio sampling");
    comass->add_option("model", model_path)->required();
    comass->add_option("--samples", samples, "number of random frames");
    comass->add_option("--seed", seed, "RNG seed");
    comass->add_option("--kernel", kernel, "auto | scalar | avx2");
    comass->add_flag("--no-polish", no_polish, "disable the hill-climb refinement");

    CLI::App* coh = app.add_subcommand("cohomology", "invariant Betti number");
    coh->add_option("model", model_path)->required();
    coh->add_option("--degree", degree, "cohomology degree")->required();

    CLI::App* report = app.add_subcommand("report", "full verification suite");
    report->add_option("model", model_path)->required();
    report->add_option("--scan-seed", scan_seed, "seed for the HKT scan");
    report->add_option("--scan-samples", scan_samples, "metrics in the HKT scan");

    try {
        std::vector<const char*> argv;
        argv.push_back("hypercal");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return kExitPass;
        }
        err << "error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        ModelDocument doc = load_model(model_path);
        bool timings = !no_timings;
        if (validate->parsed()) return cmd_validate(doc, timings, out, err);
        if (weights->parsed()) return cmd_weights(doc, degree, timings, out, err);
        if (hkt->parsed()) return cmd_hkt(doc, metric_spec, expect, timings, out, err);
        if (dbl->parsed()) return cmd_double(doc, out_path, timings, out, err);
        if (psi_cmd->parsed()) return cmd_psi(doc, timings, out, err);
        if (comass->parsed())
            return cmd_comass(doc, samples, seed, kernel, no_polish, timings, out, err);
        if (coh->parsed()) return cmd_cohomology(doc, degree, timings, out, err);
        if (report->parsed()) return cmd_report(doc, scan_seed, scan_samples, timings, out, err);
        err << "error: no subcommand\n";
        return kExitParse;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DomainError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

} // namespace hypercal
