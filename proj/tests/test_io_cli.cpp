#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hypercal/cli.hpp"
#include "hypercal/report.hpp"

using namespace hypercal;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/hypercal_test_" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

} // namespace

TEST_CASE("scalar grammar round trip and strictness") {
    CHECK(parse_scalar(Json(5)) == GaussianRational(5));
    CHECK(parse_scalar(Json("-7/2")) == GaussianRational(Rational(-7, 2)));
    Json c = Json::object();
    c["re"] = "1/2";
    c["im"] = -3;
    CHECK(parse_scalar(c) == GaussianRational(Rational(1, 2), Rational(-3)));
    CHECK_THROWS_AS(parse_scalar(Json(1.5)), ParseError);
    Json bad = Json::object();
    bad["re"] = "1";
    bad["imm"] = "2";
    CHECK_THROWS_AS(parse_scalar(bad), ParseError);

    CHECK(scalar_to_json(GaussianRational(Rational(3))).get<std::string>() == "3");
    CHECK(scalar_to_json(GaussianRational(Rational(1, 2), Rational(1)))["im"] == "1");
}

TEST_CASE("form serialization round trip") {
    FramePtr f = make_frame(4);
    Form x(f, 2);
    x.add_term(mask_from_indices({0, 1}, 4), GaussianRational(Rational(1, 2)));
    x.add_term(mask_from_indices({1, 3}, 4), GaussianRational(Rational(0), Rational(-2)));
    Json j = form_to_json(x);
    CHECK(form_from_json(j, f) == x);
    // strictly increasing indices enforced
    Json bad = j;
    bad["terms"][0]["idx"] = Json::array({1, 0});
    CHECK_THROWS_AS(form_from_json(bad, f), ParseError);
}

TEST_CASE("builtin export, parse, structural equality round trip") {
    for (const std::string name :
         {"flat:1", "flat:2", "kodaira", "iwasawa", "kodaira_double", "iwasawa_double"}) {
        ModelDocument doc = builtin_document(name);
        Json j = Json::parse(doc.canonical);
        ModelDocument reparsed = parse_model(j);
        CHECK(reparsed.kind == doc.kind);
        CHECK(reparsed.canonical == doc.canonical);
    }
}

TEST_CASE("strict parsing: unknown keys, bad format, bad kind") {
    ModelDocument doc = builtin_document("flat:1");
    Json j = Json::parse(doc.canonical);

    Json unknown = j;
    unknown["metricc"] = Json::array();
    CHECK_THROWS_AS(parse_model(unknown), ParseError);

    Json badfmt = j;
    badfmt["format"] = "hypercal/2";
    CHECK_THROWS_AS(parse_model(badfmt), ParseError);

    Json badkind = j;
    badkind["kind"] = "strange";
    CHECK_THROWS_AS(parse_model(badkind), ParseError);

    Json nofmt = j;
    nofmt.erase("format");
    CHECK_THROWS_AS(parse_model(nofmt), ParseError);
}

TEST_CASE("jacobi violation in a file is a validation error with witness") {
    Json j = Json::parse(builtin_document("kodaira").canonical);
    // [e1,e2] = e1, [e1,e3] = e2 violates Jacobi
    j["brackets"] = Json::array();
    Json b1 = Json::object();
    b1["i"] = 0;
    b1["j"] = 1;
    b1["k"] = 0;
    b1["c"] = 1;
    Json b2 = Json::object();
    b2["i"] = 0;
    b2["j"] = 2;
    b2["k"] = 1;
    b2["c"] = 1;
    j["brackets"].push_back(b1);
    j["brackets"].push_back(b2);
    try {
        parse_model(j);
        CHECK(false);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("Jacobi") != std::string::npos);
        CHECK(std::string(e.what()).find("(0,1,2)") != std::string::npos);
    }
}

TEST_CASE("cli validate: builtins pass, corrupt files exit 3") {
    CliResult r = cli({"--no-timings", "validate", "flat:1"});
    CHECK(r.code == 0);
    Json j = r.json();
    CHECK(j["command"] == "validate");
    CHECK_FALSE(j.contains("timings"));
    for (const auto& c : j["checks"]) CHECK(c["pass"].get<bool>());

    std::string garbled = write_temp("garbled.json", "{ not json");
    CHECK(cli({"validate", garbled}).code == 3);

    ModelDocument doc = builtin_document("flat:1");
    Json bad = Json::parse(doc.canonical);
    bad["metricc"] = Json::array();
    std::string unknown_key = write_temp("unknown_key.json", bad.dump());
    CHECK(cli({"validate", unknown_key}).code == 3);

    CHECK(cli({"validate", "/nonexistent/path.json"}).code == 3);
    CHECK(cli({"validate", "flat:7"}).code == 3);

    std::string dup = write_temp(
        "dup_names.json",
        R"({"format":"hypercal/1","kind":"lie_model","dim":4,"names":["a","a","b","c"]})");
    CHECK(cli({"validate", dup}).code == 3);
}

TEST_CASE("cli validate on all builtins and exported doubles") {
    for (const std::string name : {"flat:2", "kodaira", "iwasawa", "kodaira_double"}) {
        CliResult r = cli({"--no-timings", "validate", name});
        CHECK(r.code == 0);
    }
    // export a double, validate the file
    std::string out_path = "/tmp/hypercal_test_double_out.json";
    CliResult built = cli({"--no-timings", "double", "kodaira", "-o", out_path});
    CHECK(built.code == 0);
    CHECK(cli({"--no-timings", "validate", out_path}).code == 0);
}

TEST_CASE("cli weights: table matches the flat H^1 decomposition") {
    CliResult r = cli({"--no-timings", "weights", "flat:1", "--degree", "2"});
    CHECK(r.code == 0);
    Json j = r.json();
    CHECK(j["max_weight"] == 2);
    CHECK(j["multiplicities"]["2"] == 3);
    CHECK(j["multiplicities"]["0"] == 3);

    CliResult r1 = cli({"--no-timings", "weights", "flat:1", "--degree", "1"});
    CHECK(r1.json()["multiplicities"]["1"] == 4);

    CHECK(cli({"weights", "flat:1", "--degree", "9"}).code == 1);
}

TEST_CASE("cli hkt: flat all-hkt, kodaira double none, expectation mismatches") {
    CliResult flat = cli({"--no-timings", "hkt", "flat:1", "--metric", "random:1:5"});
    CHECK(flat.code == 0);
    CHECK(flat.json()["hkt_found"] == 5);

    CliResult kod =
        cli({"--no-timings", "hkt", "kodaira_double", "--metric", "random:7:5", "--expect",
             "not-hkt"});
    CHECK(kod.code == 0);
    CHECK(kod.json()["hkt_found"] == 0);

    CliResult mismatch =
        cli({"--no-timings", "hkt", "kodaira_double", "--metric", "random:7:3", "--expect", "hkt"});
    CHECK(mismatch.code == 2);

    // affine bases carry no quaternionic structure
    CHECK(cli({"hkt", "kodaira", "--metric", "random:1:2"}).code == 1);
    // no metric anywhere
    CHECK(cli({"hkt", "kodaira_double"}).code == 1);
}

TEST_CASE("cli hkt accepts a metric matrix file") {
    Json g = Json::array();
    for (int r = 0; r < 4; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 4; ++c) row.push_back(r == c ? 2 : 0);
        g.push_back(row);
    }
    std::string path = write_temp("metric.json", g.dump());
    CliResult r = cli({"--no-timings", "hkt", "flat:1", "--metric", path, "--expect", "hkt"});
    CHECK(r.code == 0);
    CHECK(r.json()["hkt_found"] == 1);

    // a non-compatible metric is a validation error
    Json bad = g;
    bad[0][0] = 3; // breaks I-invariance but stays positive definite
    std::string bad_path = write_temp("bad_metric.json", bad.dump());
    CHECK(cli({"hkt", "flat:1", "--metric", bad_path}).code == 1);

    CHECK(cli({"hkt", "flat:1", "--metric", "random:x"}).code == 3);
    CHECK(cli({"hkt", "flat:1", "--metric", "random:1:0"}).code == 3);
}

TEST_CASE("cli double: writes a loadable dim-8 model; invalid affine fails") {
    std::string out_path = "/tmp/hypercal_test_double2.json";
    CliResult r = cli({"--no-timings", "double", "kodaira", "-o", out_path});
    CHECK(r.code == 0);
    CHECK(r.json()["dim"] == 8);
    ModelDocument reload = parse_model_file(out_path);
    CHECK(reload.kind == "double_model");
    CHECK(reload.dbl->n == 2);

    // corrupt the affine model on disk: break torsion-freeness via t
    Json j = Json::parse(builtin_document("kodaira").canonical);
    j["t"][0][0] = "2";
    std::string bad_path = write_temp("bad_affine.json", j.dump());
    CHECK(cli({"double", bad_path, "-o", "/tmp/hypercal_test_unused.json"}).code == 1);

    // lie models are not valid input
    CHECK(cli({"double", "flat:1"}).code == 1);
}

TEST_CASE("cli psi: closed on doubles and flat models") {
    for (const std::string name : {"flat:1", "flat:2", "kodaira_double", "iwasawa_double"}) {
        CliResult r = cli({"--no-timings", "psi", name});
        CHECK(r.code == 0);
        Json j = r.json();
        CHECK(j["checks"][0]["pass"].get<bool>());
        CHECK(j["psi"]["degree"].get<int>() == 2 * j["n"].get<int>());
    }
}

TEST_CASE("cli cohomology: betti values") {
    CHECK(cli({"--no-timings", "cohomology", "kodaira", "--degree", "1"}).json()["betti"] == 3);
    CHECK(cli({"--no-timings", "cohomology", "iwasawa", "--degree", "1"}).json()["betti"] == 4);
    CHECK(cli({"--no-timings", "cohomology", "flat:1", "--degree", "1"}).json()["betti"] == 4);
}

TEST_CASE("cli report: kodaira double summary") {
    CliResult r = cli({"--no-timings", "report", "kodaira_double", "--scan-samples", "5"});
    Json j = r.json();
    CHECK(j["psi_closed"] == true);
    CHECK(j["hkt_found"] == 0);
    CHECK(j["theta_positive"] == true);
    CHECK(j["theta_closed"] == false);
    CHECK(r.code == 0);

    CliResult rf = cli({"--no-timings", "report", "flat:1", "--scan-samples", "3"});
    CHECK(rf.code == 0);
    CHECK(rf.json()["hkt_found"] == 3);
}

TEST_CASE("cli comass: deterministic reports, byte-identical reruns") {
    std::vector<std::string> args = {"--no-timings", "comass", "flat:1", "--samples", "500",
                                     "--seed", "11"};
    CliResult a = cli(args);
    CliResult b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out); // byte-identical
    Json j = a.json();
    CHECK(j["samples"] == 500);
    CHECK(j["seed"] == 11);
    CHECK(j["ratio"].get<double>() > 0.9);

    // timings live in an ignorable field: stripped documents are identical
    std::vector<std::string> timed = {"comass", "flat:1", "--samples", "500", "--seed", "11"};
    Json t1 = cli(timed).json();
    Json t2 = cli(timed).json();
    CHECK(t1.contains("timings"));
    t1.erase("timings");
    t2.erase("timings");
    CHECK(t1.dump() == t2.dump());
}

TEST_CASE("report builder content hash is stable") {
    std::string h1 = content_hash("abc");
    std::string h2 = content_hash("abc");
    std::string h3 = content_hash("abd");
    CHECK(h1 == h2);
    CHECK(h1 != h3);
    CHECK(h1.rfind("fnv1a64:", 0) == 0);
}
