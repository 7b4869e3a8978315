#include <gtest/gtest.h>

#include <random>

#include "chasebound/homomorphism.hpp"
#include "chasebound/syntax.hpp"
#include "chasebound/transforms.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace chasebound;

namespace {

std::map<std::string, std::string> as_map(const Substitution& s) {
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : s.bindings()) m[to_string(k)] = to_string(v);
    return m;
}

std::vector<Atom> atoms_of(const std::string& q) { return parse_query("? :- " + q + ".").atoms; }

}  // namespace

TEST(Homomorphism, SingleAtom) {
    auto homs = find_homomorphisms(atoms_of("p(X,Y)"), parse_instance("p(a,b)."));
    ASSERT_EQ(homs.size(), 1u);
    EXPECT_EQ(as_map(homs[0]), (std::map<std::string, std::string>{{"X", "a"}, {"Y", "b"}}));
}

TEST(Homomorphism, ForcedCollapse) {
    auto homs = find_homomorphisms(atoms_of("p(X,Y), p(Y,Z)"), parse_instance("p(a,a)."));
    ASSERT_EQ(homs.size(), 1u);
    EXPECT_EQ(as_map(homs[0]), (std::map<std::string, std::string>{{"X", "a"}, {"Y", "a"}, {"Z", "a"}}));
}

TEST(Homomorphism, ChainWithConstants) {
    auto homs = find_homomorphisms(atoms_of("p(a,U), p(U,b)"), parse_instance("p(a,c). p(c,b)."));
    ASSERT_EQ(homs.size(), 1u);
    EXPECT_EQ(as_map(homs[0]), (std::map<std::string, std::string>{{"U", "c"}}));
}

TEST(Homomorphism, NoMatchGivesEmpty) {
    EXPECT_TRUE(find_homomorphisms(atoms_of("p(X,X)"), parse_instance("p(a,b).")).empty());
    EXPECT_FALSE(first_homomorphism(atoms_of("p(b,X)"), parse_instance("p(a,b).")).has_value());
}

TEST(Homomorphism, SeedIsRespected) {
    Substitution seed;
    seed.bind(variable("X"), constant("b"));
    auto homs = find_homomorphisms(atoms_of("p(X,Y)"), parse_instance("p(a,b). p(b,c). p(b,a)."), seed);
    ASSERT_EQ(homs.size(), 2u);
    for (const auto& h : homs) EXPECT_EQ(h.apply(variable("X")), constant("b"));
}

TEST(Homomorphism, DeterministicOrder) {
    auto inst = parse_instance("p(a,b). p(b,c). p(c,a). p(a,a).");
    auto src = atoms_of("p(X,Y), p(Y,Z)");
    EXPECT_EQ(find_homomorphisms(src, inst), find_homomorphisms(src, inst));
}

TEST(Homomorphism, MatchesBruteForceOnRandomInputs) {
    gen::Rng rng(11);
    for (int round = 0; round < 300; ++round) {
        auto sig = gen::random_signature(rng, 2, 2, "hb");
        auto inst = gen::random_instance(rng, sig, 1, 4, 3);
        auto q = gen::random_query(rng, sig, 3, 3, 0, 3, 0.15);
        std::set<std::map<std::string, std::string>> got, want;
        for (const auto& h : find_homomorphisms(q.atoms, inst)) got.insert(as_map(h));
        std::vector<oracle::Fact> src;
        for (const auto& a : q.atoms) src.push_back(oracle::canonical(a));
        for (const auto& h : oracle::brute_force_homs(src, oracle::facts_of(inst))) want.insert(h);
        ASSERT_EQ(got, want) << to_string(q) << " into\n" << print_instance(inst);
    }
}

TEST(Homomorphism, IdentityAndComposition) {
    gen::Rng rng(12);
    for (int round = 0; round < 100; ++round) {
        auto sig = gen::random_signature(rng, 2, 3, "hc");
        auto q = gen::random_query(rng, sig, 3, 3, 0);
        Instance as_instance(std::span<const Atom>(q.atoms));
        Substitution id;
        for (auto v : variables_of(q.atoms)) id.bind(v, v);
        EXPECT_TRUE(is_homomorphism(id, q.atoms, as_instance));
        auto inst = gen::random_instance(rng, sig, 1, 4, 2);
        auto mid = gen::random_instance(rng, sig, 2, 5, 2);
        // h: q -> mid, g: mid -> inst (mid is ground, so g is identity on it).
        for (const auto& h : find_homomorphisms(q.atoms, mid)) {
            Instance image;
            for (const auto& a : q.atoms) image.insert(h.apply(a));
            if (image.atoms().size() && std::all_of(image.begin(), image.end(), [&](const Atom& a) { return inst.contains(a); }))
                EXPECT_TRUE(is_homomorphism(h, q.atoms, inst));
        }
    }
}

TEST(Embedding, IntoCriticalInstance) {
    auto emb = find_embeddings(parse_instance("p(a,b).").atoms(), parse_instance("p(a,a)."));
    bool found = false;
    for (const auto& e : emb)
        if (e.apply(constant("a")) == constant("a") && e.apply(constant("b")) == constant("a")) found = true;
    EXPECT_TRUE(found);
}

TEST(Embedding, IdentityAmongResults) {
    auto inst = parse_instance("p(a,b).");
    auto emb = find_embeddings(inst.atoms(), inst);
    bool identity = false;
    for (const auto& e : emb)
        if (e.apply(constant("a")) == constant("a") && e.apply(constant("b")) == constant("b")) identity = true;
    EXPECT_TRUE(identity);
}

TEST(Embedding, PredicateMismatch) {
    EXPECT_TRUE(find_embeddings(parse_instance("p(a,b).").atoms(), parse_instance("q(a,b).")).empty());
}

TEST(Embedding, EveryInstanceEmbedsInCriticalInstance) {
    gen::Rng rng(13);
    for (int round = 0; round < 100; ++round) {
        auto sig = gen::random_signature(rng, 3, 3, "ce");
        auto inst = gen::random_instance(rng, sig, 1, 5, 4);
        auto preds = inst.predicates();
        auto crit = critical_instance(preds, {});
        auto emb = find_embeddings(inst.atoms(), crit);
        ASSERT_FALSE(emb.empty());
        bool all_to_a = false;
        for (const auto& e : emb) {
            bool ok = true;
            for (auto t : inst.adom()) ok = ok && e.apply(t) == constant("a");
            all_to_a = all_to_a || ok;
        }
        EXPECT_TRUE(all_to_a);
    }
}

TEST(Substitution, ApplyAndCollapse) {
    Substitution s;
    s.bind(variable("X"), constant("a"));
    EXPECT_EQ(print_atom(s.apply(atoms_of("p(X,X)")[0])), "p(a,a)");
    s.bind(variable("Y"), constant("a"));
    Instance out;
    for (const auto& a : atoms_of("p(X,Y), p(Y,X)")) out.insert(s.apply(a));
    EXPECT_EQ(out.size(), 1u);
    Substitution id;
    auto src = atoms_of("p(X,Y), q(Y)");
    for (const auto& a : src) EXPECT_EQ(id.apply(a), a);
}

TEST(Substitution, ConflictingBindRejected) {
    Substitution s;
    EXPECT_TRUE(s.bind(variable("X"), constant("a")));
    EXPECT_TRUE(s.bind(variable("X"), constant("a")));
    EXPECT_FALSE(s.bind(variable("X"), constant("b")));
    EXPECT_EQ(s.apply(variable("X")), constant("a"));
}

TEST(Terms, NullsEqualIffProvenanceEqual) {
    NullProvenance p;
    p.rule = 7;
    p.variable = variable("Z");
    p.binding = {{variable("X"), constant("a")}};
    NullProvenance q = p;
    EXPECT_EQ(null_term(p), null_term(q));
    q.binding = {{variable("X"), constant("b")}};
    EXPECT_NE(null_term(p), null_term(q));
    q = p;
    q.scheme = NullScheme::SemiOblivious;
    EXPECT_NE(null_term(p), null_term(q));
}

TEST(Terms, SamePredicateNameDifferentArity) {
    auto a = predicate("samename", 1);
    auto b = predicate("samename", 2);
    EXPECT_NE(a, b);
    EXPECT_EQ(a.arity(), 1u);
    EXPECT_EQ(b.arity(), 2u);
    EXPECT_EQ(predicate("samename", 2), b);
}

TEST(InstanceTest, SetSemanticsAndAdomOrder) {
    auto inst = parse_instance("p(b,a). p(b,a). p(a,c).");
    EXPECT_EQ(inst.size(), 2u);
    ASSERT_EQ(inst.adom().size(), 3u);
    EXPECT_EQ(inst.adom()[0], constant("b"));
    EXPECT_EQ(inst.adom()[1], constant("a"));
    EXPECT_EQ(inst.adom()[2], constant("c"));
    EXPECT_TRUE(inst.is_ground());
    EXPECT_FALSE(parse_instance("p(a,X).").is_ground());
}

TEST(RuleTest, FrontierAndExistentials) {
    auto r = parse_ruleset("p(X,Y) -> p(X,Z).")[0];
    EXPECT_EQ(r.frontier(), std::vector<Term>{variable("X")});
    EXPECT_EQ(r.existentials(), std::vector<Term>{variable("Z")});
    EXPECT_TRUE(r.is_fully_existential());
    EXPECT_FALSE(r.is_datalog());
    auto t = parse_ruleset("p(X,Y), p(Y,Z) -> p(X,Z).")[0];
    EXPECT_EQ(t.frontier(), (std::vector<Term>{variable("X"), variable("Z")}));
    EXPECT_TRUE(t.is_datalog());
    auto m = parse_ruleset("p(X,Y) -> p(X,Z), q(X,Y).")[0];
    EXPECT_EQ(m.existentials(), std::vector<Term>{variable("Z")});
    EXPECT_FALSE(m.is_fully_existential());
}

TEST(RuleTest, FrontierExistentialPartitionOnRandomRules) {
    gen::Rng rng(14);
    for (int round = 0; round < 200; ++round) {
        auto sig = gen::random_signature(rng, 3, 3, "rp");
        auto rules = gen::random_ruleset(rng, sig, {});
        for (const auto& r : rules) {
            auto head_vars = variables_of(r.head());
            std::set<Term> fr(r.frontier().begin(), r.frontier().end());
            std::set<Term> ex(r.existentials().begin(), r.existentials().end());
            std::set<Term> all(head_vars.begin(), head_vars.end());
            std::set<Term> both;
            both.insert(fr.begin(), fr.end());
            both.insert(ex.begin(), ex.end());
            EXPECT_EQ(both, all);
            for (auto v : fr) EXPECT_FALSE(ex.count(v));
        }
    }
}
