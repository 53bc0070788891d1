// driver.hpp — the effective multiplier algorithm: multiplier state, the
// search strategy over the allowable procedures, the induction machinery,
// termination, and the classic single-step comparison mode.
//
// Strategy order per derivation round: terminate if a constant multiplier
// exists; derive coordinates once the multipliers span the maximal ideal;
// L-operator chains on the lowest-order pivot; root taking; pre-multiplier
// adjustment; targeted and general Jacobian generation; power-of-coordinate
// extraction; the induction step; finally a generic coordinate change.
// Every choice is deterministic given the seed.
#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kohn/gcd.hpp"
#include "kohn/groebner.hpp"
#include "kohn/multiplier.hpp"
#include "kohn/ops.hpp"
#include "kohn/parse.hpp"
#include "kohn/print.hpp"

namespace kohn {

class AlgorithmState {
  public:
    AlgorithmState(RingPtr ring, std::vector<Polynomial> fs, RunConfig config)
        : ring_(std::move(ring)), fs_(std::move(fs)), config_(config), rng_(config.seed) {
        if (ring_->size() < 2) throw std::invalid_argument("need at least two variables");
        if (fs_.empty()) throw std::invalid_argument("need at least one defining function");
        for (const auto& f : fs_) {
            if (!same_ring(f.ring(), ring_)) throw std::invalid_argument("generator ring mismatch");
            if (f.is_zero() || !f.constant_value().is_zero())
                throw std::invalid_argument("defining functions must vanish at the origin");
        }
        trace_.ring = ring_;
        trace_.generators = fs_;
        trace_.config = config_;
        trace_.p_star = Ideal(ring_, fs_).effective_type(config_.type_cap).p_star;
        emit_initial_jacobians();
    }

    const Trace& trace() const { return trace_; }

    Trace run() {
        while (trace_.status != RunStatus::Terminated &&
               trace_.steps.size() < config_.max_steps) {
            if (try_terminate_const()) break;
            if (try_terminate_coords()) continue;
            if (try_chains()) continue;
            if (try_root_taking()) continue;
            if (try_adjust()) continue;
            if (try_targeted_jacobian()) continue;
            if (try_general_jacobian()) continue;
            if (try_coordinate_powers()) continue;
            if (try_induction()) continue;
            if (try_coordinate_change()) continue;
            trace_.failure_reason = "derivation stalled; retry budget exhausted";
            break;
        }
        if (trace_.status != RunStatus::Terminated && trace_.failure_reason.empty())
            trace_.failure_reason = "step budget exhausted";
        return trace_;
    }

    // One induction move for the current level: Weierstrass extraction for
    // each multiplier slot, the full Jacobian against the generic
    // combinations, and the eliminated relation certified as an ideal
    // element. Advances the level on success.
    bool induction_step() {
        size_t v = ring_->size();
        if (nu_ == 0 && !seed_induction_frame()) return false;
        if (nu_ >= v) return false;  // frame complete; termination strategies take over

        for (unsigned attempt = 0; attempt < config_.max_retries; ++attempt) {
            if (frame_combos_.size() != v - nu_ && !draw_combos(v - nu_)) return false;
            auto result = induction_attempt();
            if (result) return true;
            frame_combos_.clear();  // redraw and retry
            frame_combo_coeffs_.clear();
        }
        return false;
    }

    // exposed for tests
    struct MultiplierRecord {
        Polynomial poly;
        Rat epsilon;
        int step;
        bool rt_done = false;
    };
    const std::vector<MultiplierRecord>& multipliers() const { return mults_; }

  private:
    // ---- registry ---------------------------------------------------------

    bool is_improvement(const Polynomial& p, const Rat& eps) const {
        auto it = index_.find(to_string(p));
        return it == index_.end() || mults_[it->second].epsilon < eps;
    }

    size_t add_multiplier(const Polynomial& p, const Rat& eps, int step) {
        std::string key = to_string(p);
        auto it = index_.find(key);
        if (it != index_.end()) {
            MultiplierRecord& rec = mults_[it->second];
            if (rec.epsilon < eps) {
                rec.epsilon = eps;
                rec.step = step;
                rec.rt_done = false;
            }
            return it->second;
        }
        mults_.push_back({p, eps, step, false});
        index_.emplace(std::move(key), mults_.size() - 1);
        ideal_dirty_ = true;
        return mults_.size() - 1;
    }

    int emit(DerivationStep s) {
        s.id = next_id_++;
        trace_.steps.push_back(std::move(s));
        return trace_.steps.back().id;
    }

    Polynomial nf_mult(const Polynomial& p) {
        if (mults_.empty()) return p;
        if (ideal_dirty_ || !mult_ideal_) {
            std::vector<Polynomial> polys;
            polys.reserve(mults_.size());
            for (const auto& m : mults_) polys.push_back(m.poly);
            mult_ideal_ = Ideal(ring_, polys);
            ideal_dirty_ = false;
        }
        return mult_ideal_->normal_form_of(p);
    }

    // multipliers ranked for operand selection: strongest (lowest vanishing
    // order) first, newest derivation breaking ties
    std::vector<size_t> ranked_mults() const {
        std::vector<size_t> idx(mults_.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            unsigned oa = mults_[a].poly.vanishing_order().value_or(0);
            unsigned ob = mults_[b].poly.vanishing_order().value_or(0);
            if (oa != ob) return oa < ob;
            return mults_[a].step > mults_[b].step;
        });
        return idx;
    }

    std::vector<Multiplier> ranked_view() const {
        std::vector<Multiplier> out;
        for (size_t i : ranked_mults())
            out.push_back({mults_[i].poly, mults_[i].epsilon, mults_[i].step});
        return out;
    }

    JacOperand operand_of_mult(size_t i) const {
        return {mults_[i].poly, mults_[i].epsilon, step_ref(mults_[i].step)};
    }

    // ---- initial generation ------------------------------------------------

    void emit_initial_jacobians() {
        for (auto& ij : enumerate_initial_jacobians(fs_)) {
            if (!is_improvement(ij.poly, half())) continue;
            DerivationStep s;
            s.kind = StepKind::InitJacobian;
            for (size_t j : ij.subset) s.inputs.push_back(gen_ref(static_cast<int>(j) + 1));
            nlohmann::json subset = nlohmann::json::array();
            for (size_t j : ij.subset) subset.push_back(j + 1);
            s.witness = {{"subset", subset}, {"vars", ij.vars}};
            s.output = ij.poly;
            s.epsilon = half();
            int id = emit(std::move(s));
            add_multiplier(ij.poly, half(), id);
        }
    }

    // ---- termination -------------------------------------------------------

    bool try_terminate_const() {
        int best = -1;
        for (size_t i = 0; i < mults_.size(); ++i) {
            if (!mults_[i].poly.is_constant()) continue;
            if (best < 0 || mults_[i].epsilon > mults_[static_cast<size_t>(best)].epsilon)
                best = static_cast<int>(i);
        }
        if (best < 0) return false;
        const MultiplierRecord& rec = mults_[static_cast<size_t>(best)];
        GaussianRational c = rec.poly.constant_value();
        DerivationStep s;
        s.kind = StepKind::Termination;
        s.inputs = {step_ref(rec.step)};
        s.witness = {{"source", step_ref(rec.step)}, {"scale", gaussian_str(c.inverse())}};
        s.output = Polynomial::constant(ring_, GaussianRational(1));
        s.epsilon = rec.epsilon;
        emit(std::move(s));
        trace_.status = RunStatus::Terminated;
        trace_.final_epsilon = rec.epsilon;
        return true;
    }

    bool try_terminate_coords() {
        if (mults_.empty()) return false;
        size_t v = ring_->size();
        for (size_t i = 0; i < v; ++i)
            if (!nf_mult(Polynomial::variable(ring_, i)).is_zero()) return false;
        std::vector<JacOperand> coords;
        for (size_t i = 0; i < v; ++i) {
            Polynomial zi = Polynomial::variable(ring_, i);
            auto it = index_.find(to_string(zi));
            if (it != index_.end()) {
                coords.push_back(operand_of_mult(it->second));
                continue;
            }
            size_t idx = emit_ideal_element(zi);
            coords.push_back(operand_of_mult(idx));
        }
        emit_jacobian_of(coords, /*full=*/true);
        return true;
    }

    // z_i^k lies in the multiplier ideal for some small k: certify the power
    // as an ideal element and peel it by root taking.
    bool try_coordinate_powers() {
        if (mults_.empty()) return false;
        size_t v = ring_->size();
        std::vector<unsigned> power(v, 0);
        for (size_t i = 0; i < v; ++i) {
            Polynomial zi = Polynomial::variable(ring_, i);
            for (unsigned k = 1; k <= 8; ++k) {
                if (nf_mult(zi.pow(k)).is_zero()) {
                    power[i] = k;
                    break;
                }
            }
            if (power[i] == 0) return false;
        }
        bool emitted = false;
        for (size_t i = 0; i < v; ++i) {
            Polynomial zi = Polynomial::variable(ring_, i);
            if (index_.count(to_string(zi))) continue;
            size_t idx = emit_ideal_element(zi.pow(power[i]));
            if (power[i] > 1) emit_root_taking(idx);
            emitted = true;
        }
        return emitted;
    }

    size_t emit_ideal_element(const Polynomial& target) {
        std::vector<Multiplier> gens = ranked_view();
        auto res = ideal_element_synth(gens, target);
        if (!res) throw std::logic_error("ideal element synthesis failed for in-ideal target");
        DerivationStep s;
        s.kind = StepKind::IdealElement;
        nlohmann::json grefs = nlohmann::json::array();
        nlohmann::json cofs = nlohmann::json::array();
        for (size_t i = 0; i < gens.size(); ++i) {
            if (res->cofactors[i].is_zero()) continue;
            grefs.push_back(step_ref(gens[i].step));
            cofs.push_back(to_string(res->cofactors[i]));
            s.inputs.push_back(step_ref(gens[i].step));
        }
        s.witness = {{"gens", grefs}, {"cofactors", cofs}};
        s.output = target;
        s.epsilon = res->m.epsilon;
        int id = emit(std::move(s));
        return add_multiplier(target, res->m.epsilon, id);
    }

    size_t emit_root_taking(size_t src_idx) {
        const MultiplierRecord rec = mults_[src_idx];
        RootTakingResult rt = root_taking({rec.poly, rec.epsilon, rec.step});
        DerivationStep s;
        s.kind = StepKind::RootTaking;
        s.inputs = {step_ref(rec.step)};
        s.witness = {{"source", step_ref(rec.step)}, {"m", rt.exponent}};
        s.output = rt.m.poly;
        s.epsilon = rt.m.epsilon;
        int id = emit(std::move(s));
        return add_multiplier(rt.m.poly, rt.m.epsilon, id);
    }

    std::optional<size_t> emit_jacobian_of(const std::vector<JacOperand>& items, bool full) {
        size_t v = ring_->size();
        std::vector<size_t> vars(full ? v : v - 1);
        for (size_t i = 0; i < vars.size(); ++i) vars[i] = i;
        auto res = gen_jacobian(items, vars);
        if (!res) return std::nullopt;
        DerivationStep s;
        s.kind = full ? StepKind::GenJacobianFull : StepKind::GenJacobianPartial;
        for (const auto& it : items) s.inputs.push_back(it.ref);
        s.witness = {{"vars", vars}};
        s.output = res->first;
        s.epsilon = res->second;
        int id = emit(std::move(s));
        return add_multiplier(res->first, res->second, id);
    }

    // ---- L-operator chains -------------------------------------------------

    bool try_chains() {
        if (ring_->size() != 2) return false;
        int pivot = -1;
        size_t killed = 0;
        unsigned best_order = 0;
        for (size_t j = 0; j < fs_.size(); ++j) {
            size_t zero_var = 2;
            for (size_t x = 0; x < 2; ++x)
                if (fs_[j].derivative(x).is_zero()) zero_var = x;
            if (zero_var == 2 || fs_[j].is_constant()) continue;
            unsigned ord = fs_[j].vanishing_order().value_or(0);
            if (pivot < 0 || ord < best_order) {
                pivot = static_cast<int>(j);
                killed = zero_var;
                best_order = ord;
            }
        }
        if (pivot < 0) return false;
        size_t pi = static_cast<size_t>(pivot);
        JacOperand pivot_op{fs_[pi], Rat(1), gen_ref(static_cast<int>(pi) + 1)};

        bool emitted = false;
        for (size_t ti = 0; ti < fs_.size(); ++ti) {
            if (ti == pi || chains_done_.count({pi, ti})) continue;
            chains_done_.insert({pi, ti});
            JacOperand prev{fs_[ti], Rat(1), gen_ref(static_cast<int>(ti) + 1)};
            unsigned guard = fs_[ti].degree_in(killed) + 1;
            for (unsigned k = 0; k < guard; ++k) {
                std::vector<JacOperand> items{pivot_op, prev};
                std::vector<size_t> vars{0, 1};
                auto res = gen_jacobian(items, vars);
                if (!res) break;
                size_t idx;
                if (is_improvement(res->first, res->second)) {
                    DerivationStep s;
                    s.kind = StepKind::GenJacobianFull;
                    s.inputs = {pivot_op.ref, prev.ref};
                    s.witness = {{"vars", vars}};
                    s.output = res->first;
                    s.epsilon = res->second;
                    int id = emit(std::move(s));
                    idx = add_multiplier(res->first, res->second, id);
                    emitted = true;
                } else {
                    idx = index_.at(to_string(res->first));
                }
                prev = operand_of_mult(idx);
                if (mults_[idx].poly.degree_in(killed) == 0) break;
            }
        }
        return emitted;
    }

    // ---- root taking sweep ---------------------------------------------------

    bool try_root_taking() {
        std::vector<size_t> order(mults_.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return mults_[a].step > mults_[b].step; });
        for (size_t i : order) {
            if (mults_[i].rt_done || mults_[i].poly.is_constant()) continue;
            mults_[i].rt_done = true;
            SquarefreeResult sf = squarefree_part(mults_[i].poly);
            if (sf.multiplicity < 2) continue;
            // only new square-free content; re-deriving a known multiplier
            // for a larger order is an optimization and orders are not
            // maximized
            if (index_.count(to_string(sf.part))) continue;
            emit_root_taking(i);
            return true;
        }
        return false;
    }

    // ---- pre-multiplier adjustment -------------------------------------------

    bool try_adjust() {
        if (mults_.empty()) return false;
        for (size_t j = 0; j < fs_.size(); ++j) {
            Polynomial r = nf_mult(fs_[j]);
            if (r == fs_[j] || r.is_zero()) continue;
            std::string key = to_string(r);
            auto last = adjust_last_.find(j);
            if (last != adjust_last_.end() && last->second == key) continue;
            Polynomial tail = fs_[j] - r;
            size_t tail_idx;
            auto it = index_.find(to_string(tail));
            if (it != index_.end()) {
                tail_idx = it->second;
            } else {
                tail_idx = emit_ideal_element(tail);
            }
            const MultiplierRecord& tail_rec = mults_[tail_idx];
            DerivationStep s;
            s.kind = StepKind::AdjustPreMultiplier;
            s.inputs = {gen_ref(static_cast<int>(j) + 1), step_ref(tail_rec.step)};
            s.witness = {{"base", gen_ref(static_cast<int>(j) + 1)},
                         {"removed", {step_ref(tail_rec.step)}},
                         {"removed_cofactors", {"1"}}};
            s.output = r;
            s.epsilon = tail_rec.epsilon;
            int id = emit(std::move(s));
            adjusted_.push_back({r, true, tail_rec.epsilon, id, -1});
            adjust_last_[j] = key;
            return true;
        }
        return false;
    }

    // ---- jacobian generation ---------------------------------------------------

    bool try_targeted_jacobian() {
        if (ring_->size() != 2 || adjusted_.empty()) return false;
        for (auto a = adjusted_.rbegin(); a != adjusted_.rend(); ++a) {
            JacOperand aop{a->poly, a->epsilon_cap, step_ref(a->step)};
            for (size_t mi : ranked_mults()) {
                JacOperand mop = operand_of_mult(mi);
                std::string sig = "T|" + mop.ref + "|" + aop.ref;
                if (signatures_.count(sig)) continue;
                signatures_.insert(sig);
                std::vector<JacOperand> items{mop, aop};
                std::vector<size_t> vars{0, 1};
                auto res = gen_jacobian(items, vars);
                if (!res || nf_mult(res->first).is_zero()) continue;
                DerivationStep s;
                s.kind = StepKind::GenJacobianFull;
                s.inputs = {mop.ref, aop.ref};
                s.witness = {{"vars", vars}};
                s.output = res->first;
                s.epsilon = res->second;
                int id = emit(std::move(s));
                add_multiplier(res->first, res->second, id);
                return true;
            }
        }
        return false;
    }

    bool try_general_jacobian() {
        size_t v = ring_->size();
        std::vector<JacOperand> pool;
        for (size_t j = 0; j < fs_.size(); ++j)
            pool.push_back({fs_[j], Rat(1), gen_ref(static_cast<int>(j) + 1)});
        for (auto a = adjusted_.rbegin(); a != adjusted_.rend(); ++a)
            pool.push_back({a->poly, a->epsilon_cap, step_ref(a->step)});
        size_t taken = 0;
        for (size_t mi : ranked_mults()) {
            if (taken++ >= 10) break;
            pool.push_back(operand_of_mult(mi));
        }

        for (bool full : {true, false}) {
            size_t size = full ? v : v - 1;
            if (size == 0 || pool.size() < size) continue;
            std::vector<std::vector<size_t>> subsets;
            detail::combinations(pool.size(), size, subsets);
            for (const auto& sub : subsets) {
                std::string sig = full ? "F" : "P";
                for (size_t i : sub) sig += "|" + pool[i].ref;
                if (signatures_.count(sig)) continue;
                std::vector<JacOperand> items;
                for (size_t i : sub) items.push_back(pool[i]);
                std::vector<size_t> vars(size);
                for (size_t i = 0; i < size; ++i) vars[i] = i;
                auto res = gen_jacobian(items, vars);
                if (!res) {
                    signatures_.insert(sig);
                    continue;
                }
                if (nf_mult(res->first).is_zero()) {
                    signatures_.insert(sig);
                    continue;
                }
                signatures_.insert(sig);
                DerivationStep s;
                s.kind = full ? StepKind::GenJacobianFull : StepKind::GenJacobianPartial;
                for (const auto& it : items) s.inputs.push_back(it.ref);
                s.witness = {{"vars", vars}};
                s.output = res->first;
                s.epsilon = res->second;
                int id = emit(std::move(s));
                add_multiplier(res->first, res->second, id);
                return true;
            }
        }
        return false;
    }

    // ---- induction machinery ----------------------------------------------------

    bool seed_induction_frame() {
        // h_{1,1}: the first full initial Jacobian, per the initialization step
        for (const auto& s : trace_.steps) {
            if (s.kind != StepKind::InitJacobian) continue;
            auto vars = s.witness.at("vars").get<std::vector<size_t>>();
            if (vars.size() != ring_->size()) continue;
            auto it = index_.find(to_string(s.output));
            if (it == index_.end()) continue;
            frame_mults_ = {it->second};
            nu_ = 1;
            return true;
        }
        if (mults_.empty()) return false;
        frame_mults_ = {ranked_mults().front()};
        nu_ = 1;
        return true;
    }

    bool draw_combos(size_t count) {
        std::uniform_int_distribution<long> box(-3, 3);
        for (unsigned attempt = 0; attempt < config_.max_retries; ++attempt) {
            std::vector<Polynomial> combos;
            std::vector<std::vector<GaussianRational>> coeffs;
            for (size_t k = 0; k < count; ++k) {
                Polynomial combo(ring_);
                std::vector<GaussianRational> cs;
                for (const auto& f : fs_) {
                    GaussianRational c(make_rat(box(rng_)));
                    cs.push_back(c);
                    combo += f.scaled(c);
                }
                combos.push_back(std::move(combo));
                coeffs.push_back(std::move(cs));
            }
            bool ok = true;
            for (const auto& c : combos) ok = ok && !c.is_zero();
            if (!ok) continue;
            std::vector<Polynomial> gens;
            for (size_t i : frame_mults_) gens.push_back(mults_[i].poly);
            for (const auto& c : combos) gens.push_back(c);
            try {
                Ideal(ring_, gens).effective_type(config_.type_cap);
            } catch (const TypeCapExceeded&) {
                continue;
            }
            frame_combos_ = std::move(combos);
            frame_combo_coeffs_ = std::move(coeffs);
            return true;
        }
        return false;
    }

    nlohmann::json coeffs_json(const std::vector<GaussianRational>& cs) const {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& c : cs) a.push_back(gaussian_str(c));
        return a;
    }

    // Everything is computed before anything is emitted, so a failed
    // genericity attempt leaves no stray steps behind.
    bool induction_attempt() {
        size_t v = ring_->size();
        std::vector<Polynomial> ygens;
        for (size_t i : frame_mults_) ygens.push_back(mults_[i].poly);
        Ideal yideal(ring_, ygens);

        struct SlotPlan {
            WeierstrassData wd;
            std::vector<Polynomial> cofactors;  // composed over ygens
            Rat eps;
            unsigned sf_mult = 1;   // > 1: a root is taken before further use
            Polynomial sf_part;
            Rat sf_eps;
        };
        std::vector<SlotPlan> slots;
        std::vector<Polynomial> reduced;  // W multipliers after root taking
        std::vector<Rat> reduced_eps;
        for (size_t j = 0; j < nu_; ++j) {
            auto wd = weierstrass_extract(ygens, frame_combos_, j);
            if (!wd) return false;
            auto cof = yideal.express(wd->composed);
            if (!cof) return false;
            SlotPlan plan;
            plan.wd = std::move(*wd);
            plan.cofactors = std::move(*cof);
            bool any = false;
            for (size_t i = 0; i < ygens.size(); ++i) {
                if (plan.cofactors[i].is_zero()) continue;
                Rat source = mults_[frame_mults_[i]].epsilon;
                plan.eps = any ? rat_min(plan.eps, source) : source;
                any = true;
            }
            if (!any) return false;
            SquarefreeResult sf = squarefree_part(plan.wd.composed);
            plan.sf_mult = sf.multiplicity;
            if (sf.multiplicity > 1) {
                plan.sf_part = sf.part;
                plan.sf_eps = plan.eps / Rat(static_cast<long>(sf.multiplicity));
                reduced.push_back(plan.sf_part);
                reduced_eps.push_back(plan.sf_eps);
            } else {
                reduced.push_back(plan.wd.composed);
                reduced_eps.push_back(plan.eps);
            }
            slots.push_back(std::move(plan));
        }

        // full Jacobian of the (reduced) W multipliers and the combinations
        std::vector<Polynomial> jac_polys = reduced;
        Rat jac_min(1);
        for (const Rat& e : reduced_eps) jac_min = rat_min(jac_min, e);
        for (const auto& cpoly : frame_combos_) jac_polys.push_back(cpoly);
        std::vector<size_t> vars(v);
        for (size_t i = 0; i < v; ++i) vars[i] = i;
        Polynomial jac_poly = jacobian_det(jac_polys, vars);
        if (jac_poly.is_zero()) return false;
        Rat jac_eps = half() * jac_min;

        // relation over the locus of the reduced W's and the Jacobian,
        // eliminated to the combination coordinates
        std::vector<Polynomial> locus = reduced;
        std::vector<Rat> locus_eps = reduced_eps;
        locus.push_back(jac_poly);
        locus_eps.push_back(jac_eps);

        std::vector<std::string> ynames;
        RingPtr ext = detail::extend_ring(ring_, frame_combos_.size(), ynames);
        std::vector<Polynomial> gens_ext;
        for (const auto& g : locus) gens_ext.push_back(detail::inject(g, ext));
        for (size_t k = 0; k < frame_combos_.size(); ++k) {
            Polynomial y = Polynomial::variable(ext, v + k);
            gens_ext.push_back(y - detail::inject(frame_combos_[k], ext));
        }
        Ideal ext_ideal(ext, gens_ext);
        std::vector<char> keep(ext->size(), 0);
        for (size_t k = 0; k < frame_combos_.size(); ++k) keep[v + k] = 1;
        Ideal elim = ext_ideal.elimination_ideal(keep);
        if (elim.is_zero_ideal()) return false;

        const Polynomial* relation = nullptr;
        for (const auto& p : elim.generators()) {
            if (!relation || p.total_degree() < relation->total_degree()) relation = &p;
        }
        std::vector<Polynomial> images;
        for (size_t i = 0; i < v; ++i) images.push_back(Polynomial::variable(ring_, i));
        for (const auto& cpoly : frame_combos_) images.push_back(cpoly);
        Polynomial composed = relation->substitute(ring_, images);
        if (composed.is_zero()) return false;

        auto ext_cof = ext_ideal.express(*relation);
        if (!ext_cof) return false;
        Polynomial check(ring_);
        std::vector<Polynomial> rel_cofs;
        for (size_t i = 0; i < locus.size(); ++i) {
            Polynomial cof = (*ext_cof)[i].substitute(ring_, images);
            check += cof * locus[i];
            rel_cofs.push_back(std::move(cof));
        }
        if (check != composed) return false;  // substitution lift failed; retry

        Rat rel_eps(1);
        bool rel_any = false;
        for (size_t i = 0; i < locus.size(); ++i) {
            if (rel_cofs[i].is_zero()) continue;
            rel_eps = rel_any ? rat_min(rel_eps, locus_eps[i]) : locus_eps[i];
            rel_any = true;
        }
        if (!rel_any) return false;

        // ---- all parts verified; emit the plan ----
        std::vector<std::string> yrefs;
        for (size_t i : frame_mults_) yrefs.push_back(step_ref(mults_[i].step));
        nlohmann::json aux_polys = nlohmann::json::array(), aux_coeffs = nlohmann::json::array();
        for (size_t k = 0; k < frame_combos_.size(); ++k) {
            aux_polys.push_back(to_string(frame_combos_[k]));
            aux_coeffs.push_back(coeffs_json(frame_combo_coeffs_[k]));
        }

        // (the ledger orders below are re-derived from the registry records
        // that end up referenced, since deduplication may substitute an
        // earlier derivation of the same polynomial at a larger order)
        std::vector<size_t> locus_idx;
        for (size_t j = 0; j < slots.size(); ++j) {
            const SlotPlan& plan = slots[j];
            DerivationStep s;
            s.kind = StepKind::WeierstrassExtraction;
            s.inputs = yrefs;
            nlohmann::json grefs = nlohmann::json::array(), cofs = nlohmann::json::array();
            for (size_t i = 0; i < ygens.size(); ++i) {
                if (plan.cofactors[i].is_zero()) continue;
                grefs.push_back(yrefs[i]);
                cofs.push_back(to_string(plan.cofactors[i]));
            }
            s.witness = {{"w", to_string(plan.wd.w_ext)}, {"ext_vars", plan.wd.aux_names},
                         {"aux_polys", aux_polys},        {"aux_coeffs", aux_coeffs},
                         {"var", j},                      {"p_nu", plan.wd.p_nu},
                         {"gens", grefs},                 {"cofactors", cofs}};
            s.output = plan.wd.composed;
            s.epsilon = plan.eps;
            int id = emit(std::move(s));
            size_t w_idx = add_multiplier(plan.wd.composed, plan.eps, id);
            locus_idx.push_back(plan.sf_mult > 1 ? emit_root_taking(w_idx) : w_idx);
        }

        DerivationStep js;
        js.kind = StepKind::GenJacobianFull;
        Rat jac_m(1);
        for (size_t i : locus_idx) {
            js.inputs.push_back(step_ref(mults_[i].step));
            jac_m = rat_min(jac_m, mults_[i].epsilon);
        }
        nlohmann::json combos_witness = nlohmann::json::array();
        for (size_t k = 0; k < frame_combos_.size(); ++k) {
            std::string cref = "c" + std::to_string(k + 1);
            js.inputs.push_back(cref);
            combos_witness.push_back({{"ref", cref},
                                      {"poly", to_string(frame_combos_[k])},
                                      {"coeffs", coeffs_json(frame_combo_coeffs_[k])}});
        }
        js.witness = {{"vars", vars}, {"combos", combos_witness}};
        js.output = jac_poly;
        js.epsilon = half() * jac_m;
        int jid = emit(std::move(js));
        size_t jac_idx = add_multiplier(jac_poly, half() * jac_m, jid);
        locus_idx.push_back(jac_idx);

        DerivationStep rs;
        rs.kind = StepKind::EliminationRelation;
        nlohmann::json grefs = nlohmann::json::array(), cjson = nlohmann::json::array();
        rel_eps = Rat(1);
        rel_any = false;
        for (size_t i = 0; i < locus.size(); ++i) {
            std::string ref = step_ref(mults_[locus_idx[i]].step);
            rs.inputs.push_back(ref);
            grefs.push_back(ref);
            cjson.push_back(to_string(rel_cofs[i]));
            if (!rel_cofs[i].is_zero()) {
                Rat source = mults_[locus_idx[i]].epsilon;
                rel_eps = rel_any ? rat_min(rel_eps, source) : source;
                rel_any = true;
            }
        }
        nlohmann::json h_polys = nlohmann::json::array(), h_coeffs = nlohmann::json::array();
        for (size_t k = 0; k < frame_combos_.size(); ++k) {
            h_polys.push_back(to_string(frame_combos_[k]));
            h_coeffs.push_back(coeffs_json(frame_combo_coeffs_[k]));
        }
        rs.witness = {{"relation", to_string(*relation)}, {"ext_vars", ynames},
                      {"h_polys", h_polys},               {"h_coeffs", h_coeffs},
                      {"gens", grefs},                    {"cofactors", cjson},
                      {"power", 1}};
        rs.output = composed;
        rs.epsilon = rel_eps;
        int rid = emit(std::move(rs));
        size_t new_idx = add_multiplier(composed, rel_eps, rid);

        frame_mults_.push_back(new_idx);
        ++nu_;
        frame_combos_.clear();
        frame_combo_coeffs_.clear();
        return true;
    }

    bool try_induction() {
        size_t before = trace_.steps.size();
        bool ok = induction_step();
        return ok && trace_.steps.size() > before;
    }

    // ---- coordinate change --------------------------------------------------

    bool try_coordinate_change() {
        // A generic change either unsticks the run quickly or the input is
        // outside the polynomial-membership scope; keep the restart budget
        // small so doomed inputs fail fast.
        unsigned budget = std::min<unsigned>(config_.max_retries, 3);
        if (coordinate_changes_ >= budget) return false;
        size_t v = ring_->size();
        std::uniform_int_distribution<long> box(-2, 2);
        GMat a;
        for (int tries = 0; tries < 64; ++tries) {
            GMat cand(v, GVec(v));
            for (auto& row : cand)
                for (auto& x : row) x = GaussianRational(make_rat(box(rng_)));
            if (!gmat_det(cand).is_zero()) {
                a = std::move(cand);
                break;
            }
        }
        if (a.empty()) return false;

        std::vector<Polynomial> next;
        nlohmann::json mat = nlohmann::json::array(), gens = nlohmann::json::array();
        for (const auto& row : a) {
            nlohmann::json r = nlohmann::json::array();
            for (const auto& x : row) r.push_back(gaussian_str(x));
            mat.push_back(r);
        }
        for (const auto& f : fs_) {
            Polynomial g = linear_coordinate_change(f, a);
            gens.push_back(to_string(g));
            next.push_back(std::move(g));
        }
        DerivationStep s;
        s.kind = StepKind::CoordinateChange;
        s.witness = {{"matrix", mat}, {"new_generators", gens}};
        s.output = Polynomial::zero(ring_);
        s.epsilon = Rat(0);
        emit(std::move(s));

        fs_ = std::move(next);
        mults_.clear();
        index_.clear();
        adjusted_.clear();
        adjust_last_.clear();
        signatures_.clear();
        chains_done_.clear();
        frame_mults_.clear();
        frame_combos_.clear();
        frame_combo_coeffs_.clear();
        nu_ = 0;
        mult_ideal_.reset();
        ideal_dirty_ = true;
        ++coordinate_changes_;
        emit_initial_jacobians();
        return true;
    }

    RingPtr ring_;
    std::vector<Polynomial> fs_;
    RunConfig config_;
    std::mt19937_64 rng_;
    Trace trace_;

    std::vector<MultiplierRecord> mults_;
    std::map<std::string, size_t> index_;
    std::vector<PreMultiplier> adjusted_;
    std::map<size_t, std::string> adjust_last_;
    std::set<std::string> signatures_;
    std::set<std::pair<size_t, size_t>> chains_done_;
    unsigned coordinate_changes_ = 0;

    unsigned nu_ = 0;
    std::vector<size_t> frame_mults_;
    std::vector<Polynomial> frame_combos_;
    std::vector<std::vector<GaussianRational>> frame_combo_coeffs_;

    std::optional<Ideal> mult_ideal_;
    bool ideal_dirty_ = true;
    int next_id_ = 1;
};

inline Trace run_algorithm(const RingPtr& ring, const std::vector<Polynomial>& fs,
                           const RunConfig& config) {
    return AlgorithmState(ring, fs, config).run();
}

// ---- classic comparison ------------------------------------------------------

// Radical of a principal ideal: the square-free part of its generator.
inline Polynomial classic_radical_step(const Ideal& ideal) {
    if (ideal.generators().size() != 1)
        throw std::invalid_argument("classic radical step needs a principal ideal");
    return squarefree_part(ideal.generators()[0]).part;
}

struct ClassicReport {
    bool trivial = false;        // degenerate family: constant first Jacobian
    Polynomial jacobian;         // h
    Polynomial radical_gen;      // g
    std::vector<Polynomial> next_ideal;  // J_1 generators
    std::optional<unsigned> min_power;   // least k with z^k in J_1
};

// One step of the original algorithm: Jacobian, principal radical, the
// next-step ideal J_1 = (g, Jac(f_1, g), Jac(f_2, g)), and the least power
// of the first coordinate inside J_1.
inline ClassicReport classic_compare(const RingPtr& ring, const std::vector<Polynomial>& fs,
                                     unsigned power_cap = 0) {
    if (ring->size() != 2) throw std::invalid_argument("classic comparison needs two variables");
    if (fs.size() != 2) throw std::invalid_argument("classic comparison needs two generators");
    ClassicReport rep;
    std::vector<size_t> vars{0, 1};
    rep.jacobian = jacobian_det(fs, vars);
    if (rep.jacobian.is_zero()) throw std::invalid_argument("degenerate pair: zero Jacobian");
    if (rep.jacobian.is_constant()) {
        rep.trivial = true;
        return rep;
    }
    rep.radical_gen = classic_radical_step(Ideal(ring, {rep.jacobian}));
    rep.next_ideal.push_back(rep.radical_gen);
    for (const auto& f : fs) {
        Polynomial j = jacobian_det(std::vector<Polynomial>{f, rep.radical_gen}, vars);
        if (!j.is_zero()) rep.next_ideal.push_back(j);
    }
    Ideal j1(ring, rep.next_ideal);
    unsigned maxdeg = 0;
    for (const auto& f : fs) maxdeg = std::max(maxdeg, f.total_degree());
    unsigned cap = power_cap ? power_cap : 2 * maxdeg + 6;
    Polynomial z = Polynomial::variable(ring, 0);
    for (unsigned k = 1; k <= cap; ++k) {
        if (j1.contains(z.pow(k))) {
            rep.min_power = k;
            break;
        }
    }
    return rep;
}

}  // namespace kohn
