#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "kohn/audit.hpp"
#include "kohn/driver.hpp"
#include "kohn/trace_io.hpp"
#include "test_util.hpp"

using namespace kohn;
using kohn::test::P;
using kohn::test::ring_zw;

namespace {

struct Expect {
    StepKind kind;
    std::string poly;           // empty: any output
    std::string epsilon = "";   // empty: any epsilon
};

// true iff the expectations appear in the trace in order (gaps allowed)
bool contains_in_order(const Trace& t, const std::vector<Expect>& expects) {
    size_t at = 0;
    for (const auto& s : t.steps) {
        if (at == expects.size()) break;
        const Expect& e = expects[at];
        if (s.kind != e.kind) continue;
        if (!e.poly.empty() && !(s.output == parse_poly(e.poly, t.ring))) continue;
        if (!e.epsilon.empty() && !(s.epsilon == rat_from_str(e.epsilon))) continue;
        ++at;
    }
    return at == expects.size();
}

Trace run_family(unsigned m, unsigned n, unsigned k, RunConfig cfg = {}) {
    auto r = ring_zw();
    std::vector<Polynomial> fs{P(r, "z").pow(m),
                               P(r, "w").pow(n) + P(r, "w") * P(r, "z").pow(k)};
    return run_algorithm(r, fs, cfg);
}

std::vector<StepKind> kinds_of(const Trace& t) {
    std::vector<StepKind> ks;
    for (const auto& s : t.steps) ks.push_back(s.kind);
    return ks;
}

}  // namespace

TEST_CASE("catlin-dangelo family: golden derivation") {
    Trace t = run_family(2, 3, 5);
    REQUIRE(t.status == RunStatus::Terminated);
    CHECK(t.p_star == 4);
    CHECK(t.final_epsilon == make_rat(1, 192));

    CHECK(contains_in_order(
        t, {{StepKind::InitJacobian, "6*z*w^2 + 2*z^6", "1/2"},      // h = h_1
            {StepKind::GenJacobianFull, "24*z^2*w", "1/4"},          // h_2
            {StepKind::GenJacobianFull, "48*z^3", "1/8"},            // h_3
            {StepKind::RootTaking, "z", "1/24"},
            {StepKind::IdealElement, "w*z^5", "1/24"},
            {StepKind::AdjustPreMultiplier, "w^3", "1/24"},
            {StepKind::GenJacobianFull, "3*w^2", "1/48"},
            {StepKind::RootTaking, "w", "1/96"},
            {StepKind::GenJacobianFull, "1", "1/192"},
            {StepKind::Termination, "1", "1/192"}}));

    AuditReport audit = audit_trace(t, /*check_multiplicity_bound=*/true);
    CAPTURE(audit.first());
    CHECK(audit.clean());
}

TEST_CASE("catlin-dangelo family: the uneffective exponent does not change the run") {
    // K = M+1, 2M+3, 50 for (M, N) = (2, 3), plus the values the acceptance
    // runs use
    Trace base = run_family(2, 3, 3);
    REQUIRE(base.status == RunStatus::Terminated);
    for (unsigned k : {5u, 7u, 9u, 50u}) {
        Trace t = run_family(2, 3, k);
        CAPTURE(k);
        REQUIRE(t.status == RunStatus::Terminated);
        CHECK(kinds_of(t) == kinds_of(base));
        CHECK(t.final_epsilon == base.final_epsilon);
    }
}

TEST_CASE("runs are bit-reproducible for a fixed seed") {
    RunConfig cfg;
    cfg.seed = 1234;
    Trace a = run_family(2, 3, 5, cfg);
    Trace b = run_family(2, 3, 5, cfg);
    CHECK(trace_to_jsonl(a) == trace_to_jsonl(b));
}

TEST_CASE("coordinate pair terminates in two steps") {
    auto r = ring_zw();
    Trace t = run_algorithm(r, {P(r, "z"), P(r, "w")}, {});
    REQUIRE(t.status == RunStatus::Terminated);
    CHECK(t.steps.size() == 2);
    CHECK(t.steps[0].kind == StepKind::InitJacobian);
    CHECK(t.steps[1].kind == StepKind::Termination);
    CHECK(t.final_epsilon == make_rat(1, 2));
    CHECK(audit_trace(t).clean());
}

TEST_CASE("simple monomial pairs terminate with clean audits") {
    auto r = ring_zw();
    for (auto gens : {std::vector<std::string>{"z^2", "w^2"},
                      std::vector<std::string>{"z^3", "w^2"},
                      std::vector<std::string>{"z^2", "w^3 + z*w"}}) {
        std::vector<Polynomial> fs;
        for (const auto& s : gens) fs.push_back(P(r, s));
        Trace t = run_algorithm(r, fs, {});
        CAPTURE(gens[0]);
        CAPTURE(gens[1]);
        REQUIRE(t.status == RunStatus::Terminated);
        AuditReport audit = audit_trace(t);
        CAPTURE(audit.first());
        CHECK(audit.clean());
    }
}

TEST_CASE("three variables") {
    auto r3 = kohn::test::ring_zwu();
    Trace t1 = run_algorithm(r3, {P(r3, "z"), P(r3, "w"), P(r3, "u")}, {});
    REQUIRE(t1.status == RunStatus::Terminated);
    CHECK(audit_trace(t1).clean());

    Trace t2 = run_algorithm(r3, {P(r3, "z^2"), P(r3, "w^2"), P(r3, "u^2")}, {});
    REQUIRE(t2.status == RunStatus::Terminated);
    AuditReport audit = audit_trace(t2);
    CAPTURE(audit.first());
    CHECK(audit.clean());
}

TEST_CASE("three variables: random perturbed powers") {
    auto r3 = kohn::test::ring_zwu();
    kohn::test::Rng rng(99);
    std::uniform_int_distribution<unsigned> e(1, 2);
    std::uniform_int_distribution<long> coeff(-2, 2);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Polynomial> fs;
        for (size_t i = 0; i < 3; ++i) {
            unsigned a = 1 + e(rng) % 2 + (i == 0 ? 1 : 0);
            Polynomial f = Polynomial::variable(r3, i).pow(a);
            long c = coeff(rng);
            if (c != 0 && a > 1) {
                Exps mixed(3, 0);
                mixed[(i + 1) % 3] = 1;
                mixed[(i + 2) % 3] = 1;
                f += Polynomial::monomial(r3, mixed, GaussianRational(make_rat(c)));
            }
            fs.push_back(std::move(f));
        }
        RunConfig cfg;
        cfg.seed = rng();
        Trace t = run_algorithm(r3, fs, cfg);
        CAPTURE(trial);
        REQUIRE(t.status == RunStatus::Terminated);
        AuditReport audit = audit_trace(t);
        CAPTURE(audit.first());
        CHECK(audit.clean());
    }
}

TEST_CASE("trace io round trip preserves the audit") {
    Trace t = run_family(2, 3, 5);
    std::string jsonl = trace_to_jsonl(t);
    std::istringstream in(jsonl);
    Trace back = trace_from_jsonl(in);
    CHECK(trace_to_jsonl(back) == jsonl);
    CHECK(audit_trace(back).clean());
}

TEST_CASE("audit flags a doctored ledger") {
    Trace t = run_family(2, 3, 5);
    REQUIRE(t.status == RunStatus::Terminated);
    // double one epsilon
    for (auto& s : t.steps) {
        if (s.kind == StepKind::RootTaking && s.output == P(t.ring, "z")) {
            s.epsilon = s.epsilon * Rat(2);
            break;
        }
    }
    AuditReport audit = audit_trace(t);
    CHECK_FALSE(audit.clean());
}

TEST_CASE("audit accepts the empty trace") {
    auto r = ring_zw();
    Trace t;
    t.ring = r;
    t.generators = {P(r, "z")};
    t.status = RunStatus::Failed;
    CHECK(audit_trace(t).clean());
}

TEST_CASE("induction step on an irreducible jacobian locus") {
    auto r = ring_zw();
    // full Jacobian of (w, -1/3 z^3 + z w^3) is the cusp z^2 - w^3
    std::vector<Polynomial> fs{P(r, "w"), P(r, "-1/3*z^3 + z*w^3")};
    RunConfig cfg;
    cfg.seed = 3;
    AlgorithmState state(r, fs, cfg);
    bool ok = state.induction_step();
    CHECK(ok);
    if (ok) {
        bool has_w = false, has_rel = false;
        for (const auto& s : state.trace().steps) {
            has_w = has_w || s.kind == StepKind::WeierstrassExtraction;
            has_rel = has_rel || s.kind == StepKind::EliminationRelation;
        }
        CHECK(has_w);
        CHECK(has_rel);
        AuditReport audit = audit_trace(state.trace());
        CAPTURE(audit.first());
        CHECK(audit.clean());
    }
}

TEST_CASE("a generator with a factor invertible at the origin forces a coordinate change") {
    auto r = ring_zw();
    // z^3*(1-3w): in these coordinates every derived multiplier inherits the
    // unit factor and the polynomial multiplier ideal never reaches the
    // coordinates; a generic change splits it
    std::vector<Polynomial> fs{P(r, "-3*z^3*w + z^3"), P(r, "w^3")};
    Trace t = run_algorithm(r, fs, {});
    REQUIRE(t.status == RunStatus::Terminated);
    bool changed = false;
    for (const auto& s : t.steps) changed = changed || s.kind == StepKind::CoordinateChange;
    CHECK(changed);
    AuditReport audit = audit_trace(t, /*check_multiplicity_bound=*/true);
    CAPTURE(audit.first());
    CHECK(audit.clean());
}

TEST_CASE("induction advances through both levels in three variables") {
    auto r3 = kohn::test::ring_zwu();
    std::vector<Polynomial> fs{P(r3, "w"), P(r3, "-1/3*z^3 + z*w^3"), P(r3, "u")};
    RunConfig cfg;
    cfg.seed = 0;
    AlgorithmState state(r3, fs, cfg);
    CHECK(state.induction_step());
    CHECK(state.induction_step());
    int w_steps = 0, relations = 0;
    for (const auto& s : state.trace().steps) {
        w_steps += s.kind == StepKind::WeierstrassExtraction;
        relations += s.kind == StepKind::EliminationRelation;
    }
    CHECK(w_steps == 3);  // one slot at the first level, two at the second
    CHECK(relations == 2);
    AuditReport audit = audit_trace(state.trace());
    CAPTURE(audit.first());
    CHECK(audit.clean());
}

TEST_CASE("coordinate-change invariance of termination") {
    auto r = ring_zw();
    std::vector<std::vector<Polynomial>> families{
        {P(r, "z^2"), P(r, "w^3 + w*z^5")},
        {P(r, "z^2"), P(r, "w^3")},
    };
    GMat shear{{GaussianRational(1), GaussianRational(1)},
               {GaussianRational(0), GaussianRational(1)}};
    GMat mix{{GaussianRational(1), GaussianRational(2)},
             {GaussianRational(1), GaussianRational(-1)}};
    for (const auto& fs : families) {
        Rat base_eps = run_algorithm(r, fs, {}).final_epsilon;
        for (const GMat& a : {shear, mix}) {
            std::vector<Polynomial> moved;
            for (const auto& f : fs) moved.push_back(linear_coordinate_change(f, a));
            Trace t = run_algorithm(r, moved, {});
            REQUIRE(t.status == RunStatus::Terminated);
            AuditReport audit = audit_trace(t);
            CAPTURE(audit.first());
            CHECK(audit.clean());
            CHECK(t.final_epsilon >= base_eps);
        }
    }
}

TEST_CASE("preconditions and budgets") {
    auto r = ring_zw();
    CHECK_THROWS_AS(run_algorithm(r, {P(r, "z^2")}, {}), TypeCapExceeded);
    CHECK_THROWS_AS(run_algorithm(r, {P(r, "z + 1"), P(r, "w")}, {}), std::invalid_argument);

    RunConfig tight;
    tight.max_steps = 4;
    Trace t = run_family(2, 3, 5, tight);
    CHECK(t.status == RunStatus::Failed);
    CHECK(t.failure_reason == "step budget exhausted");
    CHECK_FALSE(t.steps.empty());  // partial trace is preserved
}

TEST_CASE("classic radical step") {
    auto r = ring_zw();
    CHECK(classic_radical_step(Ideal(r, {P(r, "2*z*(3*w^2 + z^5)")})) ==
          P(r, "z*(3*w^2 + z^5)"));
    CHECK(classic_radical_step(Ideal(r, {P(r, "z^3")})) == P(r, "z"));
    Polynomial g = P(r, "z*(3*w^2 + z^5)");
    CHECK(classic_radical_step(Ideal(r, {g})) == g);
    CHECK_THROWS_AS(classic_radical_step(Ideal(r, {P(r, "z"), P(r, "w")})),
                    std::invalid_argument);
}

TEST_CASE("classic comparison: the radical route needs an uneffective root") {
    auto r = ring_zw();
    for (unsigned k : {5u, 9u}) {
        std::vector<Polynomial> fs{P(r, "z^2"), P(r, "w").pow(3) + P(r, "w") * P(r, "z").pow(k)};
        ClassicReport rep = classic_compare(r, fs);
        CHECK_FALSE(rep.trivial);
        CHECK(rep.radical_gen == (P(r, "z") * (P(r, "3*w^2") + P(r, "z").pow(k))).monic());
        REQUIRE(rep.min_power.has_value());
        // ground truth: z^k enters J_1 first at exponent k+2
        CHECK(*rep.min_power == k + 2);
        Ideal j1(r, rep.next_ideal);
        CHECK_FALSE(j1.contains(P(r, "z").pow(k)));
        CHECK_FALSE(j1.contains(P(r, "z").pow(k + 1)));
        CHECK(j1.contains(P(r, "z").pow(k + 2)));
    }
    // degenerate family reports trivial termination
    ClassicReport triv = classic_compare(r, {P(r, "z"), P(r, "w")});
    CHECK(triv.trivial);
}
