#pragma once

#include <json.hpp>
#include <sstream>
#include <string>

#include "skewfree/runner.hpp"

namespace skewfree {

// Stable machine-readable report for one scenario run. Field order is fixed
// so the output diffs cleanly between runs.
inline nlohmann::ordered_json run_to_json(const ScenarioRun& run) {
    nlohmann::ordered_json j;
    j["scenario"] = run.scenario;
    j["generators"] = run.generators;
    j["symmetricChecked"] = run.symmetric_checked;
    if (run.symmetric_holds) {
        j["symmetricHolds"] = *run.symmetric_holds;
    } else {
        j["symmetricHolds"] = nullptr;
    }
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& h : run.hypothesis_checks) {
        nlohmann::ordered_json c;
        c["name"] = h.name;
        c["mode"] = h.bounded ? "bounded" : "exact";
        if (h.bounded) {
            c["bound"] = h.bound;
        } else {
            c["bound"] = nullptr;
        }
        c["pass"] = h.pass;
        if (!h.witness.empty()) c["witness"] = h.witness;
        checks.push_back(std::move(c));
    }
    j["hypothesisChecks"] = std::move(checks);
    j["maxWordLength"] = run.freeness.max_word_length;
    j["truncationOrder"] = run.freeness.truncation_order;
    j["wordCount"] = run.freeness.word_count;
    j["rank"] = run.freeness.rank;
    j["status"] = !run.certify_ran ? "skipped"
                  : run.freeness.certified ? "certified"
                                           : "inconclusive";
    j["matrixDims"] =
        nlohmann::ordered_json::array({run.freeness.matrix_rows, run.freeness.matrix_cols});
    j["elapsedMs"] = run.elapsed_ms;
    return j;
}

inline std::string run_to_text(const ScenarioRun& run) {
    std::ostringstream out;
    out << "scenario: " << run.scenario << "\n";
    for (std::size_t i = 0; i < run.generators.size(); ++i)
        out << "  g" << (i + 1) << " = " << run.generators[i] << "\n";
    if (run.symmetric_checked)
        out << "symmetric generators: " << (*run.symmetric_holds ? "yes" : "NO") << "\n";
    for (const auto& h : run.hypothesis_checks) {
        out << "hypothesis " << h.name << " ("
            << (h.bounded ? "bounded, height " + std::to_string(h.bound) : "exact")
            << "): " << (h.pass ? "pass" : "FAIL");
        if (!h.witness.empty()) out << "  witness: " << h.witness;
        out << "\n";
    }
    if (run.certify_ran) {
        out << "words up to length " << run.freeness.max_word_length << ": "
            << run.freeness.word_count << ", truncation order " << run.freeness.truncation_order
            << "\n";
        out << "matrix " << run.freeness.matrix_rows << " x " << run.freeness.matrix_cols
            << ", rank " << run.freeness.rank << "\n";
        out << "status: " << (run.freeness.certified ? "certified" : "inconclusive") << "\n";
        if (!run.freeness.certified && !run.freeness.dependent_word.empty()) {
            out << "first dependent word: " << run.freeness.dependent_word << " =";
            for (const auto& [w, c] : run.freeness.dependency)
                out << " + (" << c.get_str() << ")*" << w;
            out << "\n";
        }
    }
    out << "elapsed: " << run.elapsed_ms << " ms\n";
    return out.str();
}

}  // namespace skewfree
