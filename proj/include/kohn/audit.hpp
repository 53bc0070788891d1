// audit.hpp — re-checks every derivation step from its recorded witnesses:
// Jacobians recomputed, ideal-element identities re-expanded, root-taking
// exponents re-derived, ledger orders re-derived from the rules. Violations
// are report content, not failures.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kohn/gcd.hpp"
#include "kohn/groebner.hpp"
#include "kohn/multiplier.hpp"
#include "kohn/ops.hpp"
#include "kohn/parse.hpp"
#include "kohn/print.hpp"

namespace kohn {

struct AuditViolation {
    int step_id;
    std::string message;
};

struct AuditReport {
    std::vector<AuditViolation> violations;
    bool clean() const { return violations.empty(); }
    std::string first() const {
        if (violations.empty()) return "clean";
        return "step " + std::to_string(violations.front().step_id) + ": " +
               violations.front().message;
    }
};

namespace audit_detail {

struct Resolved {
    Polynomial poly;
    Rat contribution;  // 1 for initial pre-multipliers, cap/epsilon otherwise
    bool is_multiplier = false;
};

inline GaussianRational gaussian_from_str(const std::string& s) {
    static const RingPtr dummy = make_ring({"__x"});
    Polynomial p = parse_poly(s, dummy);
    if (!p.is_constant()) throw std::invalid_argument("expected constant: " + s);
    return p.constant_value();
}

class Walker {
  public:
    Walker(const Trace& t, bool check_multiplicity_bound)
        : trace_(t), fs_(t.generators), bound_(check_multiplicity_bound) {}

    AuditReport run() {
        int prev_id = -1;
        for (const auto& s : trace_.steps) {
            if (s.id <= prev_id) flag(s.id, "step ids not strictly increasing");
            prev_id = s.id;
            try {
                check_step(s);
            } catch (const std::exception& e) {
                flag(s.id, std::string("witness rejected: ") + e.what());
            }
            seen_[s.id] = &s;
        }
        if (trace_.status == RunStatus::Terminated) {
            if (trace_.steps.empty()) {
                flag(-1, "terminated trace with no steps");
            } else {
                const auto& last = trace_.steps.back();
                if (last.kind != StepKind::Termination) flag(last.id, "terminated trace must end in a Termination step");
                if (!(last.output == one())) flag(last.id, "final output is not the constant 1");
                if (!(trace_.final_epsilon == last.epsilon) || last.epsilon <= 0)
                    flag(last.id, "final epsilon does not match the last step");
            }
        }
        return report_;
    }

  private:
    Polynomial one() const { return Polynomial::constant(trace_.ring, GaussianRational(1)); }

    void flag(int id, const std::string& msg) { report_.violations.push_back({id, msg}); }

    std::optional<Resolved> resolve(const std::string& ref, const DerivationStep& at) {
        if (ref.size() >= 2 && ref[0] == 'f') {
            size_t j = std::stoul(ref.substr(1));
            if (j == 0 || j > fs_.size()) {
                flag(at.id, "bad generator reference " + ref);
                return std::nullopt;
            }
            return Resolved{fs_[j - 1], Rat(1), false};
        }
        if (ref.size() >= 2 && ref[0] == 's') {
            int id = std::stoi(ref.substr(1));
            auto it = seen_.find(id);
            if (it == seen_.end()) {
                flag(at.id, "reference to unknown or later step " + ref);
                return std::nullopt;
            }
            const DerivationStep* src = it->second;
            if (src->kind == StepKind::CoordinateChange) {
                flag(at.id, "coordinate-change steps cannot be operands");
                return std::nullopt;
            }
            bool mult = src->kind != StepKind::AdjustPreMultiplier;
            return Resolved{src->output, src->epsilon, mult};
        }
        flag(at.id, "unresolvable reference '" + ref + "'");
        return std::nullopt;
    }

    // combination-of-generators check used by generic pre-multiplier slots
    bool check_combination(const DerivationStep& s, const Polynomial& poly,
                           const nlohmann::json& coeffs) {
        if (coeffs.size() != fs_.size()) {
            flag(s.id, "combination coefficient count mismatch");
            return false;
        }
        Polynomial sum(trace_.ring);
        for (size_t j = 0; j < fs_.size(); ++j) {
            GaussianRational c = gaussian_from_str(coeffs[j].get<std::string>());
            sum += fs_[j].scaled(c);
        }
        if (sum != poly) {
            flag(s.id, "pre-multiplier combination does not expand to its polynomial");
            return false;
        }
        return true;
    }

    void check_jacobian(const DerivationStep& s) {
        size_t v = trace_.ring->size();
        auto vars = s.witness.at("vars").get<std::vector<size_t>>();
        size_t expect = s.kind == StepKind::GenJacobianPartial ? v - 1 : v;
        if (s.kind == StepKind::InitJacobian && vars.size() != v && vars.size() != v - 1) {
            flag(s.id, "initial jacobian must use n or n+1 variables");
            return;
        }
        if (s.kind != StepKind::InitJacobian && vars.size() != expect) {
            flag(s.id, "jacobian kind does not match variable count");
            return;
        }
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] != i) {
                flag(s.id, "jacobian variables must be the leading coordinates");
                return;
            }
        std::vector<Polynomial> polys;
        Rat m(1);
        for (const auto& ref : s.inputs) {
            if (!ref.empty() && ref[0] == 'c') {
                bool found = false;
                for (const auto& combo : s.witness.value("combos", nlohmann::json::array())) {
                    if (combo.at("ref").get<std::string>() != ref) continue;
                    Polynomial p = parse_poly(combo.at("poly").get<std::string>(), trace_.ring);
                    if (!check_combination(s, p, combo.at("coeffs"))) return;
                    polys.push_back(p);
                    found = true;
                    break;
                }
                if (!found) {
                    flag(s.id, "combination operand missing from witness");
                    return;
                }
                continue;
            }
            auto r = resolve(ref, s);
            if (!r) return;
            polys.push_back(r->poly);
            m = rat_min(m, r->contribution);
        }
        if (polys.size() != vars.size()) {
            flag(s.id, "jacobian operand count does not match variables");
            return;
        }
        Polynomial det = jacobian_det(polys, vars);
        if (det != s.output) flag(s.id, "jacobian determinant does not match output");
        if (s.output.is_zero()) flag(s.id, "zero jacobian recorded as a multiplier");
        if (!(s.epsilon == half() * m)) flag(s.id, "jacobian epsilon violates the ledger rule");
        if (bound_ && vars.size() == trace_.ring->size()) check_multiplicity_bound(s, polys);
    }

    void check_multiplicity_bound(const DerivationStep& s, const std::vector<Polynomial>& polys) {
        try {
            unsigned lam = Ideal(trace_.ring, polys).colength(24);
            auto ord = s.output.vanishing_order();
            if (ord && *ord > lam - 1)
                flag(s.id, "jacobian multiplicity exceeds colength - 1");
        } catch (const TypeCapExceeded&) {
            // not finite at this cap; the bound's hypothesis fails, nothing to check
        }
    }

    void check_ideal_element(const DerivationStep& s) {
        auto gens = s.witness.at("gens").get<std::vector<std::string>>();
        auto cof_strs = s.witness.at("cofactors").get<std::vector<std::string>>();
        if (gens.size() != cof_strs.size() || gens.empty()) {
            flag(s.id, "ideal element needs one cofactor per generator");
            return;
        }
        Polynomial sum(trace_.ring);
        bool any = false;
        Rat eps(1);
        for (size_t i = 0; i < gens.size(); ++i) {
            auto r = resolve(gens[i], s);
            if (!r) return;
            if (!r->is_multiplier) {
                flag(s.id, "ideal element generator is not a multiplier");
                return;
            }
            Polynomial cof = parse_poly(cof_strs[i], trace_.ring);
            sum += cof * r->poly;
            if (!cof.is_zero()) {
                eps = any ? rat_min(eps, r->contribution) : r->contribution;
                any = true;
            }
        }
        if (sum != s.output) flag(s.id, "ideal element identity does not hold");
        if (s.output.is_zero()) flag(s.id, "zero ideal element");
        if (!any) flag(s.id, "ideal element with all-zero cofactors");
        else if (!(s.epsilon == eps)) flag(s.id, "ideal element epsilon violates the min rule");
    }

    void check_root_taking(const DerivationStep& s) {
        auto src = resolve(s.witness.at("source").get<std::string>(), s);
        if (!src) return;
        if (!src->is_multiplier) {
            flag(s.id, "root taking source is not a multiplier");
            return;
        }
        unsigned m = s.witness.at("m").get<unsigned>();
        SquarefreeResult sf = squarefree_part(src->poly);
        if (sf.part != s.output) flag(s.id, "root taking output is not the square-free part");
        if (sf.multiplicity != m) flag(s.id, "root taking exponent mismatch");
        if (!(s.epsilon == src->contribution / Rat(static_cast<long>(m))))
            flag(s.id, "root taking epsilon violates the 1/m rule");
    }

    void check_weierstrass(const DerivationStep& s) {
        auto ext_vars = s.witness.at("ext_vars").get<std::vector<std::string>>();
        std::vector<std::string> names = trace_.ring->vars;
        names.insert(names.end(), ext_vars.begin(), ext_vars.end());
        RingPtr ext = make_ring(names);
        Polynomial w = parse_poly(s.witness.at("w").get<std::string>(), ext);
        size_t var = s.witness.at("var").get<size_t>();
        unsigned p_nu = s.witness.at("p_nu").get<unsigned>();
        size_t v = trace_.ring->size();

        if (p_nu == 0 || w.degree_in(var) != p_nu) flag(s.id, "weierstrass degree mismatch");
        for (const auto& [e, c] : w.terms())
            for (size_t i = 0; i < v; ++i)
                if (i != var && e[i] > 0) {
                    flag(s.id, "weierstrass polynomial involves extra base variables");
                    return;
                }
        Polynomial lead(ext);
        for (const auto& [e, c] : w.terms())
            if (e[var] == p_nu) {
                Exps rest = e;
                rest[var] = 0;
                lead.add_term(rest, c);
            }
        if (!lead.is_constant() || !lead.constant_value().is_one())
            flag(s.id, "weierstrass polynomial is not monic");

        auto aux_strs = s.witness.at("aux_polys").get<std::vector<std::string>>();
        auto aux_coeffs = s.witness.at("aux_coeffs");
        if (aux_strs.size() != ext_vars.size() || aux_coeffs.size() != aux_strs.size()) {
            flag(s.id, "weierstrass auxiliary data mismatch");
            return;
        }
        std::vector<Polynomial> images;
        for (size_t i = 0; i < v; ++i) images.push_back(Polynomial::variable(trace_.ring, i));
        for (size_t k = 0; k < aux_strs.size(); ++k) {
            Polynomial aux = parse_poly(aux_strs[k], trace_.ring);
            if (!check_combination(s, aux, aux_coeffs[k])) return;
            images.push_back(aux);
        }
        if (w.substitute(trace_.ring, images) != s.output)
            flag(s.id, "weierstrass composition does not match output");
        check_membership_witness(s);
    }

    void check_elimination_relation(const DerivationStep& s) {
        auto ext_vars = s.witness.at("ext_vars").get<std::vector<std::string>>();
        std::vector<std::string> names = trace_.ring->vars;
        names.insert(names.end(), ext_vars.begin(), ext_vars.end());
        RingPtr ext = make_ring(names);
        Polynomial rel = parse_poly(s.witness.at("relation").get<std::string>(), ext);
        size_t v = trace_.ring->size();
        if (rel.is_zero()) flag(s.id, "empty relation");
        for (const auto& [e, c] : rel.terms())
            for (size_t i = 0; i < v; ++i)
                if (e[i] > 0) {
                    flag(s.id, "relation involves base variables");
                    return;
                }
        auto h_strs = s.witness.at("h_polys").get<std::vector<std::string>>();
        auto h_coeffs = s.witness.at("h_coeffs");
        if (h_strs.size() != ext_vars.size()) {
            flag(s.id, "relation map arity mismatch");
            return;
        }
        std::vector<Polynomial> images;
        for (size_t i = 0; i < v; ++i) images.push_back(Polynomial::variable(trace_.ring, i));
        for (size_t k = 0; k < h_strs.size(); ++k) {
            Polynomial h = parse_poly(h_strs[k], trace_.ring);
            if (!check_combination(s, h, h_coeffs[k])) return;
            images.push_back(h);
        }
        if (rel.substitute(trace_.ring, images) != s.output)
            flag(s.id, "relation composition does not match output");
        check_membership_witness(s, s.witness.value("power", 1u));
    }

    // shared: output^power == sum cofactor_i * gen_i, epsilon = min/power
    void check_membership_witness(const DerivationStep& s, unsigned power = 1) {
        auto gens = s.witness.at("gens").get<std::vector<std::string>>();
        auto cof_strs = s.witness.at("cofactors").get<std::vector<std::string>>();
        if (gens.size() != cof_strs.size() || gens.empty()) {
            flag(s.id, "membership witness arity mismatch");
            return;
        }
        Polynomial sum(trace_.ring);
        bool any = false;
        Rat eps(1);
        for (size_t i = 0; i < gens.size(); ++i) {
            auto r = resolve(gens[i], s);
            if (!r) return;
            if (!r->is_multiplier) {
                flag(s.id, "membership generator is not a multiplier");
                return;
            }
            Polynomial cof = parse_poly(cof_strs[i], trace_.ring);
            sum += cof * r->poly;
            if (!cof.is_zero()) {
                eps = any ? rat_min(eps, r->contribution) : r->contribution;
                any = true;
            }
        }
        if (sum != s.output.pow(power)) flag(s.id, "membership identity does not hold");
        if (!any) {
            flag(s.id, "membership witness with all-zero cofactors");
            return;
        }
        if (!(s.epsilon == eps / Rat(static_cast<long>(power))))
            flag(s.id, "epsilon violates the membership ledger rule");
    }

    void check_coordinate_change(const DerivationStep& s) {
        size_t v = trace_.ring->size();
        auto mat = s.witness.at("matrix");
        if (mat.size() != v) {
            flag(s.id, "coordinate matrix arity mismatch");
            return;
        }
        GMat a(v, GVec(v));
        for (size_t i = 0; i < v; ++i)
            for (size_t j = 0; j < v; ++j)
                a[i][j] = gaussian_from_str(mat[i][j].get<std::string>());
        if (gmat_det(a).is_zero()) {
            flag(s.id, "singular coordinate change");
            return;
        }
        auto new_gens = s.witness.at("new_generators").get<std::vector<std::string>>();
        if (new_gens.size() != fs_.size()) {
            flag(s.id, "coordinate change generator count mismatch");
            return;
        }
        std::vector<Polynomial> next;
        for (size_t j = 0; j < fs_.size(); ++j) {
            Polynomial g = parse_poly(new_gens[j], trace_.ring);
            if (linear_coordinate_change(fs_[j], a) != g) {
                flag(s.id, "transformed generator mismatch");
                return;
            }
            next.push_back(std::move(g));
        }
        fs_ = std::move(next);
    }

    void check_adjust(const DerivationStep& s) {
        auto base = resolve(s.witness.at("base").get<std::string>(), s);
        if (!base) return;
        if (base->is_multiplier) flag(s.id, "adjustment base must be a pre-multiplier");
        auto removed = s.witness.at("removed").get<std::vector<std::string>>();
        auto cof_strs = s.witness.at("removed_cofactors").get<std::vector<std::string>>();
        if (removed.size() != cof_strs.size() || removed.empty()) {
            flag(s.id, "adjustment witness arity mismatch");
            return;
        }
        Polynomial sum(trace_.ring);
        bool any = false;
        Rat cap(1);
        for (size_t i = 0; i < removed.size(); ++i) {
            auto r = resolve(removed[i], s);
            if (!r) return;
            if (!r->is_multiplier) {
                flag(s.id, "adjustment must remove multipliers");
                return;
            }
            Polynomial cof = parse_poly(cof_strs[i], trace_.ring);
            sum += cof * r->poly;
            if (!cof.is_zero()) {
                cap = any ? rat_min(cap, r->contribution) : r->contribution;
                any = true;
            }
        }
        if (base->poly != s.output + sum) flag(s.id, "adjustment identity does not hold");
        if (s.output.is_zero()) flag(s.id, "adjusted pre-multiplier is zero");
        if (!any || !(s.epsilon == cap)) flag(s.id, "adjustment cap violates the min rule");
    }

    void check_termination(const DerivationStep& s) {
        auto src = resolve(s.witness.at("source").get<std::string>(), s);
        if (!src) return;
        GaussianRational scale = gaussian_from_str(s.witness.at("scale").get<std::string>());
        if (!src->poly.is_constant() || src->poly.is_zero())
            flag(s.id, "termination source is not a nonzero constant");
        if (!(src->poly.scaled(scale) == one())) flag(s.id, "termination scaling incorrect");
        if (!(s.output == one())) flag(s.id, "termination output must be 1");
        if (!(s.epsilon == src->contribution)) flag(s.id, "termination epsilon mismatch");
    }

    void check_step(const DerivationStep& s) {
        if (s.kind != StepKind::CoordinateChange) {
            if (s.epsilon <= 0 || s.epsilon > 1) flag(s.id, "epsilon outside (0, 1]");
            if (s.output.is_zero()) flag(s.id, "zero output polynomial");
        }
        switch (s.kind) {
            case StepKind::InitJacobian:
            case StepKind::GenJacobianPartial:
            case StepKind::GenJacobianFull:
                check_jacobian(s);
                break;
            case StepKind::IdealElement:
                check_ideal_element(s);
                break;
            case StepKind::RootTaking:
                check_root_taking(s);
                break;
            case StepKind::WeierstrassExtraction:
                check_weierstrass(s);
                break;
            case StepKind::EliminationRelation:
                check_elimination_relation(s);
                break;
            case StepKind::CoordinateChange:
                check_coordinate_change(s);
                break;
            case StepKind::AdjustPreMultiplier:
                check_adjust(s);
                break;
            case StepKind::Termination:
                check_termination(s);
                break;
        }
    }

    const Trace& trace_;
    std::vector<Polynomial> fs_;
    bool bound_;
    std::map<int, const DerivationStep*> seen_;
    AuditReport report_;
};

}  // namespace audit_detail

// Re-verify a trace from witnesses alone. With check_multiplicity_bound the
// auditor additionally checks ord(Jac) <= colength - 1 on every full
// Jacobian whose operands span a finite-colength ideal.
inline AuditReport audit_trace(const Trace& t, bool check_multiplicity_bound = false) {
    return audit_detail::Walker(t, check_multiplicity_bound).run();
}

}  // namespace kohn
