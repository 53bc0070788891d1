// multiplier.hpp — multiplier state, derivation steps and traces.
//
// A Multiplier is a polynomial certified by a chain of allowable procedures,
// carrying an exact subellipticity order epsilon in (0,1]. Every step keeps
// enough witness data to be re-verified without re-running the search that
// found it.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kohn/polynomial.hpp"
#include "kohn/rational.hpp"

namespace kohn {

struct Multiplier {
    Polynomial poly;
    Rat epsilon;   // 0 < epsilon <= 1
    int step = -1; // producing step id, -1 when constructed outside a trace
};

struct PreMultiplier {
    Polynomial poly;
    bool adjusted = false;
    Rat epsilon_cap = Rat(1);  // 1 for the initial f_j, min over adjusting multipliers otherwise
    int step = -1;             // AdjustPreMultiplier step id when adjusted
    int index = -1;            // 1-based input index for initial pre-multipliers
};

enum class StepKind {
    InitJacobian,
    GenJacobianPartial,
    GenJacobianFull,
    IdealElement,
    RootTaking,
    WeierstrassExtraction,
    EliminationRelation,
    CoordinateChange,
    AdjustPreMultiplier,
    Termination,
};

inline std::string step_kind_str(StepKind k) {
    switch (k) {
        case StepKind::InitJacobian: return "InitJacobian";
        case StepKind::GenJacobianPartial: return "GenJacobianPartial";
        case StepKind::GenJacobianFull: return "GenJacobianFull";
        case StepKind::IdealElement: return "IdealElement";
        case StepKind::RootTaking: return "RootTaking";
        case StepKind::WeierstrassExtraction: return "WeierstrassExtraction";
        case StepKind::EliminationRelation: return "EliminationRelation";
        case StepKind::CoordinateChange: return "CoordinateChange";
        case StepKind::AdjustPreMultiplier: return "AdjustPreMultiplier";
        case StepKind::Termination: return "Termination";
    }
    throw std::logic_error("unknown step kind");
}

inline StepKind step_kind_from(const std::string& s) {
    static const std::vector<std::pair<std::string, StepKind>> table = {
        {"InitJacobian", StepKind::InitJacobian},
        {"GenJacobianPartial", StepKind::GenJacobianPartial},
        {"GenJacobianFull", StepKind::GenJacobianFull},
        {"IdealElement", StepKind::IdealElement},
        {"RootTaking", StepKind::RootTaking},
        {"WeierstrassExtraction", StepKind::WeierstrassExtraction},
        {"EliminationRelation", StepKind::EliminationRelation},
        {"CoordinateChange", StepKind::CoordinateChange},
        {"AdjustPreMultiplier", StepKind::AdjustPreMultiplier},
        {"Termination", StepKind::Termination},
    };
    for (const auto& [name, kind] : table)
        if (name == s) return kind;
    throw std::invalid_argument("unknown step kind: " + s);
}

struct DerivationStep {
    int id = 0;
    StepKind kind = StepKind::InitJacobian;
    std::vector<std::string> inputs;  // "f<j>" (1-based) or "s<id>"
    nlohmann::json witness;
    Polynomial output;
    Rat epsilon;  // for AdjustPreMultiplier: the epsilon cap
};

inline std::string step_ref(int id) { return "s" + std::to_string(id); }
inline std::string gen_ref(int j1based) { return "f" + std::to_string(j1based); }

struct RunConfig {
    std::uint64_t seed = 0;
    unsigned max_retries = 16;
    unsigned type_cap = 64;
    unsigned degree_cap = 0;  // 0: derived as p* + max generator degree
    unsigned max_steps = 256;

    nlohmann::json to_json() const {
        return {{"seed", seed},
                {"max_retries", max_retries},
                {"type_cap", type_cap},
                {"degree_cap", degree_cap},
                {"max_steps", max_steps}};
    }
    static RunConfig from_json(const nlohmann::json& j) {
        RunConfig c;
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("max_retries")) c.max_retries = j.at("max_retries").get<unsigned>();
        if (j.contains("type_cap")) c.type_cap = j.at("type_cap").get<unsigned>();
        if (j.contains("degree_cap")) c.degree_cap = j.at("degree_cap").get<unsigned>();
        if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<unsigned>();
        return c;
    }
};

enum class RunStatus { Terminated, Failed };

struct Trace {
    RingPtr ring;
    std::vector<Polynomial> generators;
    RunConfig config;
    std::vector<DerivationStep> steps;
    RunStatus status = RunStatus::Failed;
    Rat final_epsilon = Rat(0);
    unsigned p_star = 0;
    std::string failure_reason;

    const DerivationStep* find_step(int id) const {
        for (const auto& s : steps)
            if (s.id == id) return &s;
        return nullptr;
    }
};

}  // namespace kohn
