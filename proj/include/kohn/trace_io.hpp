// trace_io.hpp — JSON Lines trace files: one header object, one object per
// derivation step, one footer object.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "kohn/multiplier.hpp"
#include "kohn/parse.hpp"
#include "kohn/print.hpp"

namespace kohn {

inline nlohmann::json step_to_json(const DerivationStep& s) {
    return {{"id", s.id},
            {"kind", step_kind_str(s.kind)},
            {"inputs", s.inputs},
            {"witness", s.witness},
            {"output", to_string(s.output)},
            {"epsilon", rat_str(s.epsilon)}};
}

inline DerivationStep step_from_json(const nlohmann::json& j, const RingPtr& ring) {
    DerivationStep s;
    s.id = j.at("id").get<int>();
    s.kind = step_kind_from(j.at("kind").get<std::string>());
    s.inputs = j.at("inputs").get<std::vector<std::string>>();
    s.witness = j.at("witness");
    s.output = parse_poly(j.at("output").get<std::string>(), ring);
    s.epsilon = rat_from_str(j.at("epsilon").get<std::string>());
    return s;
}

inline std::string trace_to_jsonl(const Trace& t) {
    std::ostringstream out;
    nlohmann::json header = {{"variables", t.ring->vars},
                             {"generators", nlohmann::json::array()},
                             {"seed", t.config.seed},
                             {"config", t.config.to_json()}};
    for (const auto& g : t.generators) header["generators"].push_back(to_string(g));
    out << header.dump() << "\n";
    for (const auto& s : t.steps) out << step_to_json(s).dump() << "\n";
    nlohmann::json footer = {
        {"status", t.status == RunStatus::Terminated ? "terminated" : "failed"},
        {"final_epsilon", t.status == RunStatus::Terminated ? nlohmann::json(rat_str(t.final_epsilon))
                                                            : nlohmann::json()},
        {"p_star", t.p_star},
        {"ideal_element_epsilon_rule", "min-over-used-generators"}};
    if (!t.failure_reason.empty()) footer["reason"] = t.failure_reason;
    out << footer.dump() << "\n";
    return out.str();
}

inline Trace trace_from_jsonl(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("trace: missing header");
    nlohmann::json header = nlohmann::json::parse(line);
    Trace t;
    t.ring = make_ring(header.at("variables").get<std::vector<std::string>>());
    for (const auto& g : header.at("generators"))
        t.generators.push_back(parse_poly(g.get<std::string>(), t.ring));
    t.config = RunConfig::from_json(header.at("config"));

    nlohmann::json last;
    bool have_last = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        if (have_last) t.steps.push_back(step_from_json(last, t.ring));
        last = std::move(j);
        have_last = true;
    }
    if (!have_last) throw std::invalid_argument("trace: missing footer");
    if (!last.contains("status")) throw std::invalid_argument("trace: footer lacks status");
    t.status = last.at("status").get<std::string>() == "terminated" ? RunStatus::Terminated
                                                                    : RunStatus::Failed;
    if (!last.at("final_epsilon").is_null())
        t.final_epsilon = rat_from_str(last.at("final_epsilon").get<std::string>());
    t.p_star = last.value("p_star", 0u);
    t.failure_reason = last.value("reason", std::string());
    return t;
}

inline Trace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path.string());
    return trace_from_jsonl(in);
}

// write-temp-rename so readers never observe a partial file
inline void write_trace(const Trace& t, const std::filesystem::path& path) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write trace file: " + tmp.string());
        out << trace_to_jsonl(t);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace kohn
