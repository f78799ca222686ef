#pragma once

#include <chrono>

#include "hypercal/io.hpp"

namespace hypercal {

// Machine-readable report; the human-readable summary is derived from it.
class ReportBuilder {
  public:
    ReportBuilder(const std::string& command, const ModelDocument& doc) {
        start_ = std::chrono::steady_clock::now();
        j_["tool"] = kFormatVersion;
        j_["command"] = command;
        Json model = Json::object();
        model["kind"] = doc.kind;
        model["hash"] = content_hash(doc.canonical);
        j_["model"] = std::move(model);
        j_["checks"] = Json::array();
    }

    void set(const std::string& key, Json value) { j_[key] = std::move(value); }

    void add_check(const std::string& name, bool pass, const std::string& witness = "") {
        Json c = Json::object();
        c["name"] = name;
        c["pass"] = pass;
        if (!witness.empty()) c["witness"] = witness;
        j_["checks"].push_back(std::move(c));
        all_pass_ = all_pass_ && pass;
    }

    void add_checks(const ValidationReport& rep, const std::string& prefix = "") {
        for (const auto& c : rep.checks) add_check(prefix + c.name, c.pass, c.witness);
    }

    bool all_pass() const { return all_pass_; }

    // timings live in a single ignorable field so reports stay comparable
    Json finish(bool with_timings) {
        Json out = j_;
        if (with_timings) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
            Json t = Json::object();
            t["total_ms"] = ms;
            out["timings"] = std::move(t);
        }
        return out;
    }

  private:
    Json j_ = Json::object();
    bool all_pass_ = true;
    std::chrono::steady_clock::time_point start_;
};

} // namespace hypercal
