#include <gtest/gtest.h>

#include <set>

#include "chasebound/analysis.hpp"
#include "chasebound/errors.hpp"
#include "chasebound/homomorphism.hpp"
#include "chasebound/syntax.hpp"
#include "chasebound/transforms.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace chasebound;

namespace {

const char* kSigma1 = "[s1] p(X,Y), p(Y,Z) -> p(X,Z).";
const char* kSigma2 = "[s2] p(X,Y), p(W,Z) -> p(X,Z).";

std::vector<Predicate> preds(std::initializer_list<std::pair<const char*, std::size_t>> list) {
    std::vector<Predicate> out;
    for (const auto& [n, a] : list) out.push_back(predicate(n, a));
    return out;
}

// Max (frontier) depth over the terms of a fact; constants count 0.
std::size_t valdepth(const ChaseResult& c, const Atom& a, bool frontier) {
    std::size_t d = 0;
    for (auto t : a.args)
        if (!t.is_constant()) d = std::max(d, frontier ? c.frontier_depth_of(t) : c.depth_of(t));
    return d;
}

// Keeps the fuzz suites fast: rulesets whose critical chase explodes are
// skipped rather than run into the default budgets.
bool small_critical_chase(const Ruleset& rules, ChaseVariant variant) {
    ChaseOptions o;
    o.variant = variant;
    o.fuel = 12;
    o.max_atoms = 3000;
    o.max_triggers_per_round = 20000;
    return !run_chase(critical_instance(rules), rules, o).budget_exhausted;
}

}  // namespace

TEST(Enumerate, CountsMatchBruteForce) {
    for (std::size_t m = 1; m <= 3; ++m)
        EXPECT_EQ(enumerate_instances(preds({{"p", 2}}), m).size(), oracle::count_iso_classes({{"p", 2}}, m)) << m;
    EXPECT_EQ(enumerate_instances(preds({{"p", 1}, {"q", 2}}), 2).size(),
              oracle::count_iso_classes({{"p", 1}, {"q", 2}}, 2));
    EXPECT_EQ(enumerate_instances(preds({{"r", 3}}), 2).size(), oracle::count_iso_classes({{"r", 3}}, 2));
}

TEST(Enumerate, KnownSmallCounts) {
    // p/2, one atom: p(a,a) and p(a,b).
    EXPECT_EQ(enumerate_instances(preds({{"p", 2}}), 1).size(), 2u);
    auto zero = enumerate_instances(preds({{"p", 2}}), 0);
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_TRUE(zero[0].empty());
}

TEST(Enumerate, PairwiseNonIsomorphic) {
    auto all = enumerate_instances(preds({{"p", 2}}), 3);
    std::set<std::string> seen;
    for (const auto& inst : all) {
        // Sizes are nondecreasing.
        EXPECT_GE(inst.size(), 1u);
        for (const auto& other : all) {
            if (&other == &inst || other.size() != inst.size()) continue;
            MatchOptions mo;
            mo.fix_constants = false;
            bool iso = false;
            for_each_homomorphism(inst.atoms(), other, {}, [&](const Substitution& h) {
                Instance img;
                for (const auto& a : inst) img.insert(h.apply(a));
                iso = img.same_atoms(other) && img.adom().size() == inst.adom().size();
                return !iso;
            }, mo);
            EXPECT_FALSE(iso) << print_instance(inst) << "vs\n" << print_instance(other);
        }
    }
}

TEST(Enumerate, CeilingThrows) {
    EnumerationOptions o;
    o.ceiling = 10;
    EXPECT_THROW(enumerate_instances(preds({{"p", 2}}), 3, {}, o), InfeasibleError);
}

TEST(Stats, Example1) {
    auto s = detect_classes(parse_ruleset("p(X,Y) -> p(X,Z)."));
    EXPECT_TRUE(s.is_fe);
    EXPECT_FALSE(s.is_datalog);
    EXPECT_TRUE(s.is_linear);
    EXPECT_TRUE(s.is_guarded);
    EXPECT_TRUE(s.weakly_acyclic);
    EXPECT_FALSE(s.richly_acyclic);
    EXPECT_EQ(s.b, 1u);
}

TEST(Stats, GuardedNotLinear) {
    auto s = detect_classes(parse_ruleset("p(X,Y), q(X) -> r(Y)."));
    EXPECT_FALSE(s.is_linear);
    EXPECT_TRUE(s.is_guarded);
    EXPECT_TRUE(s.is_datalog);
    EXPECT_FALSE(detect_classes(parse_ruleset(kSigma1)).is_guarded);
}

TEST(Stats, CycleThroughSpecialEdge) {
    auto s = detect_classes(parse_ruleset("p(X,Y) -> p(Y,Z)."));
    EXPECT_FALSE(s.weakly_acyclic);
}

TEST(CT, Example1) {
    auto rules = parse_ruleset("p(X,Y) -> p(X,Z).");
    EXPECT_EQ(ct_check(rules, ChaseVariant::Oblivious, 50).status, Status::Unknown);
    auto so = ct_check(rules, ChaseVariant::SemiOblivious, 50);
    EXPECT_EQ(so.status, Status::Yes);
    EXPECT_EQ(so.chase_rank, 1u);
}

TEST(CT, DatalogAlwaysTerminates) {
    auto v = ct_check(parse_ruleset(kSigma1), ChaseVariant::Oblivious, 50);
    EXPECT_EQ(v.status, Status::Yes);
}

TEST(DepthBound, Examples) {
    EXPECT_EQ(depth_bound(parse_ruleset("p(X,Y,U) -> p(Y,X,Z)."), ChaseVariant::SemiOblivious, 50), 1u);
    EXPECT_EQ(depth_bound(parse_ruleset("p(X,Y) -> p(X,Z)."), ChaseVariant::SemiOblivious, 50), 1u);
    EXPECT_FALSE(depth_bound(parse_ruleset("p(X,Y) -> p(X,Z)."), ChaseVariant::Oblivious, 20).has_value());
}

TEST(KBounded, Example2) {
    EXPECT_EQ(k_bounded(parse_ruleset(kSigma2), 1, ChaseVariant::Oblivious).status, Status::Yes);
    auto no = k_bounded(parse_ruleset(kSigma1), 1, ChaseVariant::Oblivious);
    ASSERT_EQ(no.status, Status::No);
    ASSERT_TRUE(no.witness.has_value());
    EXPECT_LE(no.witness->instance.size(), 4u);
    auto both = std::string(kSigma1) + "\n" + kSigma2;
    EXPECT_EQ(k_bounded(parse_ruleset(both), 1, ChaseVariant::Oblivious).status, Status::Yes);
}

TEST(KBounded, WitnessRerunsToProductiveRound) {
    auto rules = parse_ruleset(kSigma1);
    for (std::size_t k = 0; k <= 1; ++k) {
        auto v = k_bounded(rules, k, ChaseVariant::SemiOblivious);
        ASSERT_EQ(v.status, Status::No);
        auto ref = oracle::reference_chase(v.witness->instance, rules, true, k + 1);
        ASSERT_TRUE(v.witness->fact.has_value());
        EXPECT_EQ(ref.rank.at(oracle::canonical(*v.witness->fact)), k + 1);
    }
}

TEST(KBounded, FEObliviousCriticalInstance) {
    EXPECT_EQ(k_bounded_fe_oblivious(parse_ruleset("p(X,Y) -> p(X,Z)."), 3).status, Status::No);
    EXPECT_EQ(k_bounded_fe_oblivious(parse_ruleset("r(X) -> q(X,Z)."), 1).status, Status::Yes);
    EXPECT_THROW(k_bounded_fe_oblivious(parse_ruleset(kSigma1), 1), std::invalid_argument);
}

// A Yes at (rules, k) bounds the rank on instances of any size.
TEST(KBounded, SoundOnLargerInstances) {
    gen::Rng rng(71);
    int yes = 0;
    for (int round = 0; round < 60; ++round) {
        auto sig = gen::random_signature(rng, 2, 2, "kb");
        gen::RuleShape shape;
        shape.max_rules = 2;
        auto rules = gen::random_ruleset(rng, sig, shape);
        Verdict v;
        try {
            v = k_bounded(rules, 1, ChaseVariant::SemiOblivious, {.ceiling = 20000});
        } catch (const InfeasibleError&) {
            continue;
        }
        if (v.status != Status::Yes) continue;
        ++yes;
        for (int i = 0; i < 20; ++i) {
            auto inst = gen::random_instance(rng, sig, 1, 8, 5);
            auto c = run_chase(inst, rules, ChaseVariant::SemiOblivious, 3);
            ASSERT_TRUE(c.terminated) << print_ruleset(rules) << print_instance(inst);
            EXPECT_LE(c.chase_rank, 1u) << print_ruleset(rules) << print_instance(inst);
        }
    }
    EXPECT_GT(yes, 5);
}

TEST(Classify, Example2) {
    auto s2 = classify_boundedness(parse_ruleset(kSigma2), ChaseVariant::Oblivious);
    EXPECT_EQ(s2.status, Status::Yes);
    auto s1 = classify_boundedness(parse_ruleset(kSigma1), ChaseVariant::Oblivious);
    EXPECT_EQ(s1.status, Status::No);
    EXPECT_EQ(s1.qualifier, "no-up-to-4");
}

TEST(Classify, Example1SemiOblivious) {
    auto v = classify_boundedness(parse_ruleset("p(X,Y) -> p(X,Z)."), ChaseVariant::SemiOblivious);
    EXPECT_EQ(v.status, Status::Yes);
    EXPECT_EQ(v.bound, 1u);
}

// o: rank(f) <= valdepth(f) * (k_AF+1) + k_AF.
// so: rank(t) <= frdepth(t) * (k_FO+1) for terms; a fact needs one more
// round than its trigger body, so rank(f) <= frdepth(f) * (k_FO+1) + k_FO + 1.
TEST(RankBounds, RankDepthInequality) {
    gen::Rng rng(72);
    int cases = 0;
    for (int round = 0; round < 300; ++round) {
        auto sig = gen::random_signature(rng, 2, 2, "th");
        auto rules = gen::random_ruleset(rng, sig, {});
        for (bool semi : {false, true}) {
            auto variant = semi ? ChaseVariant::SemiOblivious : ChaseVariant::Oblivious;
            if (!small_critical_chase(rules, variant)) continue;
            if (ct_check(rules, variant, 12).status != Status::Yes) continue;
            RewriteOptions ro;
            ro.max_steps = 6;
            ro.max_ucq_size = 300;
            ro.max_cq_atoms = 8;
            auto e = semi ? estimate_kFO(rules, ro) : estimate_kAF(rules, ro);
            if (!e.saturated) continue;
            for (int i = 0; i < 3; ++i) {
                auto inst = gen::random_instance(rng, sig, 1, 4, 3);
                auto c = run_chase(inst, rules, variant, 40);
                if (!c.terminated) continue;
                ++cases;
                const std::size_t slack = semi ? 1 : 0;
                for (const auto& f : c.atoms)
                    EXPECT_LE(c.rank_of(f), valdepth(c, f, semi) * (e.k + 1) + e.k + slack)
                        << to_string(f) << "\n" << print_ruleset(rules) << print_instance(inst);
                if (semi)
                    for (auto t : c.generated_terms())
                        EXPECT_LE(c.born.at(t), c.frontier_depth_of(t) * (e.k + 1)) << print_ruleset(rules);
            }
        }
    }
    EXPECT_GT(cases, 200);
}

TEST(RankBounds, FactBoundNeedsTriggerRound) {
    auto rules = parse_ruleset("p(X) -> q(X).");
    auto e = estimate_kFO(rules);
    ASSERT_TRUE(e.saturated);
    EXPECT_EQ(e.k, 0u);
    auto c = run_chase(parse_instance("p(a)."), rules, ChaseVariant::SemiOblivious, 5);
    EXPECT_EQ(c.chase_rank, 1u);
}

// depth_bound bounds the (frontier) depth on every instance.
TEST(RankBounds, DepthBoundHolds) {
    gen::Rng rng(73);
    int cases = 0;
    for (int round = 0; round < 150; ++round) {
        auto sig = gen::random_signature(rng, 2, 2, "db");
        auto rules = gen::random_ruleset(rng, sig, {});
        for (bool semi : {false, true}) {
            auto variant = semi ? ChaseVariant::SemiOblivious : ChaseVariant::Oblivious;
            if (!small_critical_chase(rules, variant)) continue;
            auto kd = depth_bound(rules, variant, 12);
            if (!kd) continue;
            auto inst = gen::random_instance(rng, sig, 1, 5, 4);
            auto c = run_chase(inst, rules, variant, 40);
            ++cases;
            for (auto t : c.generated_terms())
                EXPECT_LE(semi ? c.frontier_depth_of(t) : c.depth_of(t), *kd) << print_ruleset(rules);
        }
    }
    EXPECT_GT(cases, 100);
}
