#include <random>

#include <gtest/gtest.h>

#include <certilab/engine.hpp>

using namespace certilab;

namespace {

/// Unary cycle of m states with state 0 initial and final: the multiples of m.
Nfa multiples(std::uint32_t m)
{
    Nfa a;
    for (std::uint32_t q = 0; q < m; ++q) a.add_state("q" + std::to_string(q));
    for (std::uint32_t q = 0; q < m; ++q) a.add_transition(q, 0, (q + 1) % m);
    a.initial = {0};
    a.final_states = {0};
    return a;
}

Nfa random_unary(std::mt19937_64& rng, std::uint32_t states)
{
    Nfa a;
    for (std::uint32_t q = 0; q < states; ++q) a.add_state("q" + std::to_string(q));
    for (std::uint32_t q = 0; q < states; ++q)
        for (std::uint32_t r = 0; r < states; ++r)
            if (rng() % 5 == 0) a.add_transition(q, 0, r);
    a.initial = {static_cast<std::uint32_t>(rng() % states)};
    for (std::uint32_t q = 0; q < states; ++q)
        if (rng() % 3 == 0) a.final_states.push_back(q);
    a.normalize();
    return a;
}

std::set<std::pair<std::string, std::string>> edges_by_name(const Nfa& a)
{
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& t : a.transitions) out.emplace(a.names[t.from], a.names[t.to]);
    return out;
}

std::vector<bool> indicator(std::size_t N, const std::function<bool(std::uint64_t)>& f)
{
    std::vector<bool> s(N + 1);
    for (std::size_t n = 0; n <= N; ++n) s[n] = f(n);
    return s;
}

} // namespace

TEST(PairAutomaton, DivisibleByThreeTransitions)
{
    const auto a = cert_to_nfa(fig1_verifier());
    std::set<std::pair<std::string, std::string>> expect{
        {"i", "(0,1)"},     {"i", "(2,1)"},     {"(0,1)", "(1,2)"}, {"(1,2)", "(2,0)"}, {"(2,0)", "(0,1)"},
        {"(2,1)", "(1,0)"}, {"(1,0)", "(0,2)"}, {"(0,2)", "(2,1)"}, {"(1,2)", "f"},     {"(1,0)", "f"}};
    EXPECT_EQ(edges_by_name(a), expect);
}

TEST(PairAutomaton, AllRejectingIsEmpty)
{
    const auto a = cert_to_nfa(LocalVerifier::constant(false, 1, 1, Kind::Path));
    EXPECT_TRUE(a.transitions.empty());
    for (bool b : a.unary_lengths(40)) EXPECT_FALSE(b);
}

TEST(PairAutomaton, MatchesBacktrackingForRandomVerifiers)
{
    for (int seed = 0; seed < 30; ++seed) {
        auto v = random_verifier(seed, 1, 1, Kind::Path, 0.6);
        auto lens = accepted_path_lengths(v, 50);
        EXPECT_FALSE(lens[0]);
        for (std::size_t n = 1; n <= 50; ++n)
            EXPECT_EQ(lens[n], backtrack_assignment(Topology::path(n), v).has_value()) << seed << " " << n;
    }
}

TEST(LabeledAutomaton, SingleLetterMatchesBacktracking)
{
    for (int seed = 0; seed < 10; ++seed) {
        auto v = random_verifier(seed, 1, 1, Kind::Path, 0.6);
        auto lab = cert_to_nfa_labeled(v, 1, 1);
        for (std::size_t n = 2; n <= 30; ++n)
            EXPECT_EQ(lab.accepts(std::vector<std::uint32_t>(n, 0)),
                      backtrack_assignment(Topology::path(n, std::vector<int>(n, 0), 1), v).has_value());
        EXPECT_LE(lab.state_count(), 2u * 4u + 2u);
    }
}

TEST(LabeledAutomaton, RadiusTwoMatchesBacktracking)
{
    for (int seed = 0; seed < 6; ++seed) {
        auto v = random_verifier(40 + seed, 1, 2, Kind::Path, 0.7);
        auto a = cert_to_nfa_labeled(v, 2, 2);
        EXPECT_LE(a.state_count(), 1024u);
        for (std::size_t n = 4; n <= 8; ++n)
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                std::vector<std::uint32_t> w(n);
                std::vector<int> l(n);
                for (std::size_t j = 0; j < n; ++j) l[j] = static_cast<int>(w[j] = mask >> j & 1);
                EXPECT_EQ(a.accepts(w), backtrack_assignment(Topology::path(n, l, 2), v).has_value());
            }
    }
}

TEST(LabeledAutomaton, ShortPathsViaDirectSearch)
{
    auto v = random_verifier(9, 1, 2, Kind::Path, 0.9);
    auto t = Topology::path(3, {0, 1, 0}, 2);
    EXPECT_EQ(exists_accepting_assignment(t, v), backtrack_assignment(t, v).has_value());
}

TEST(Closure, UnionOfMultiples)
{
    auto u = nfa_union(multiples(2), multiples(3));
    EXPECT_LE(u.state_count(), 5u);
    auto lens = u.unary_lengths(60);
    EXPECT_TRUE(lens[6]);
    EXPECT_FALSE(lens[5]);
    for (std::size_t n = 0; n <= 60; ++n) EXPECT_EQ(lens[n], n % 2 == 0 || n % 3 == 0);
    auto e = determinize_lasso(u);
    EXPECT_EQ(e.p, 6u);
    EXPECT_EQ(e.residues, (std::vector<std::uint64_t>{0, 2, 3, 4}));
    EXPECT_EQ(e.T, 0u);
}

TEST(Closure, IntersectionWithComplementIsEmpty)
{
    auto a = cert_to_nfa(fig1_verifier());
    auto x = nfa_intersection(a, nfa_complement(a));
    for (bool b : x.unary_lengths(60)) EXPECT_FALSE(b);
}

TEST(Closure, ComplementOfEmptyIsEverything)
{
    Nfa empty;
    empty.add_state("q");
    empty.initial = {0};
    auto c = nfa_complement(empty);
    for (bool b : c.unary_lengths(60)) EXPECT_TRUE(b);
}

TEST(Closure, StateBoundsAndSetAlgebra)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_unary(rng, 1 + rng() % 8), b = random_unary(rng, 1 + rng() % 8);
        auto u = nfa_union(a, b), x = nfa_intersection(a, b), c = nfa_complement(a);
        EXPECT_LE(u.state_count(), a.state_count() + b.state_count());
        EXPECT_LE(x.state_count(), a.state_count() * b.state_count());
        EXPECT_LE(c.state_count(), std::size_t{1} << a.state_count());
        auto la = a.unary_lengths(100), lb = b.unary_lengths(100);
        auto lu = u.unary_lengths(100), lx = x.unary_lengths(100), lc = c.unary_lengths(100);
        for (std::size_t n = 0; n <= 100; ++n) {
            EXPECT_EQ(lu[n], la[n] || lb[n]);
            EXPECT_EQ(lx[n], la[n] && lb[n]);
            EXPECT_EQ(lc[n], !la[n]);
        }
    }
}

TEST(Closure, AlphabetMismatchRejected)
{
    Nfa b = multiples(2);
    b.alphabet = 2;
    EXPECT_THROW(nfa_union(multiples(2), b), InvalidInput);
}

TEST(Lasso, DivisibleByThree)
{
    auto e = determinize_lasso(cert_to_nfa(fig1_verifier()));
    EXPECT_EQ(e.p, 3u);
    EXPECT_EQ(e.residues, (std::vector<std::uint64_t>{0}));
    EXPECT_EQ(e.T, 1u);
    EXPECT_TRUE(e.explicit_members.empty());
    for (std::uint64_t n = 0; n <= 30; ++n) EXPECT_EQ(e.contains(n), n > 0 && n % 3 == 0);
}

TEST(Lasso, SelfLoopAcceptsEverything)
{
    Nfa a;
    a.add_state("q");
    a.add_transition(0, 0, 0);
    a.initial = {0};
    a.final_states = {0};
    auto e = determinize_lasso(a);
    EXPECT_EQ(e.p, 1u);
    EXPECT_EQ(e.T, 0u);
    EXPECT_EQ(e.residues, (std::vector<std::uint64_t>{0}));
}

TEST(Lasso, CanonicalAndFaithfulOnRandomMachines)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_unary(rng, 1 + rng() % 10);
        auto e = determinize_lasso(a);
        auto lens = a.unary_lengths(e.T + 3 * e.p);
        for (std::uint64_t n = 0; n < lens.size(); ++n) EXPECT_EQ(e.contains(n), lens[n]);
        for (std::uint64_t q = 1; q < e.p; ++q) {
            if (e.p % q) continue;
            bool periodic = true;
            for (std::uint64_t n = e.T; n < e.T + e.p && periodic; ++n) periodic = e.contains(n) == e.contains(n + q);
            EXPECT_FALSE(periodic) << "period " << e.p << " not minimal";
        }
        if (e.T > 0) {
            EXPECT_NE(e.contains(e.T - 1), e.contains(e.T - 1 + e.p));
        }
    }
}

TEST(Eps, JsonAndWindowEquality)
{
    auto e = determinize_lasso(multiples(4));
    auto j = e.to_json();
    EXPECT_EQ(j.dump(), R"({"T":0,"explicit":[],"p":4,"residues":[0]})");
    EXPECT_EQ(EventuallyPeriodicSet::from_json(j), e);
    EXPECT_TRUE(eps_equal_on_window(e, EventuallyPeriodicSet::from_json(j), 100));
    EXPECT_FALSE(eps_equal_on_window(e, determinize_lasso(multiples(2)), 100));
    EXPECT_THROW(EventuallyPeriodicSet::from_json(Json::parse(R"({"T":0,"explicit":[],"p":2,"residues":[3]})")),
                 InvalidInput);
}

TEST(Falsifier, Examples)
{
    const std::size_t N = 10000;
    std::set<std::uint64_t> prim;
    for (auto a : primorials_upto(N)) prim.insert(a);
    EXPECT_EQ(periodicity_falsifier(indicator(N, [](std::uint64_t n) { return n % 5 == 0; })),
              std::make_pair(std::uint64_t{0}, std::uint64_t{5}));
    EXPECT_FALSE(periodicity_falsifier(indicator(N, [](std::uint64_t n) {
                     auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
                     while (r * r > n) --r;
                     while ((r + 1) * (r + 1) <= n) ++r;
                     return r * r == n;
                 })).has_value());
}

TEST(Falsifier, ReportsLexicographicallyLeastPair)
{
    auto s = indicator(300, [](std::uint64_t n) { return n == 7 || (n >= 20 && n % 4 == 1); });
    auto r = periodicity_falsifier(s);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(*r, std::make_pair(std::uint64_t{18}, std::uint64_t{4}));
}

TEST(LowerBound, MultiplesOfThreeMatched)
{
    auto r = lower_bound_oracle(indicator(100, [](std::uint64_t n) { return n % 3 == 0; }), 1);
    ASSERT_TRUE(r.matched.has_value());
    auto lens = r.matched->lengths(100);
    for (std::size_t n = 1; n <= 100; ++n) EXPECT_EQ(lens[n], n % 3 == 0);
}

TEST(LowerBound, SquaresUnmatched)
{
    auto r = lower_bound_oracle(indicator(10000,
                                          [](std::uint64_t n) {
                                              auto q = static_cast<std::uint64_t>(std::llround(std::sqrt(n)));
                                              return q * q == n;
                                          }),
                                1);
    EXPECT_FALSE(r.matched.has_value());
    EXPECT_EQ(r.examined, 1u << 18);
}

TEST(LowerBound, AllLengthsMatched)
{
    EXPECT_TRUE(lower_bound_oracle(std::vector<bool>(50, true), 1).matched.has_value());
}

TEST(LowerBound, ShortWindowInconclusive)
{
    EXPECT_THROW(lower_bound_oracle(std::vector<bool>(10, true), 1), InvalidInput);
}

TEST(TinyVerifiers, AutomatonMatchesBacktrackingSample)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 2000; ++trial) {
        auto v = TinyPathVerifier::nth(1, static_cast<std::uint32_t>(rng() % (1u << 18)));
        auto lens = v.to_nfa().unary_lengths(30);
        auto fast = v.lengths(30);
        for (std::size_t n = 1; n <= 30; ++n) {
            EXPECT_EQ(lens[n], v.backtrack(n));
            EXPECT_EQ(fast[n], lens[n]);
        }
    }
}
