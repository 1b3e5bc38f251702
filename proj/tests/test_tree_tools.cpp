#include <random>

#include <gtest/gtest.h>

#include <certilab/engine.hpp>

using namespace certilab;

namespace {

/// Rooted isomorphism by backtracking over vertex bijections.
bool rooted_isomorphic(const RootedTree& a, const RootedTree& b)
{
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    auto parents = [](const RootedTree& t) {
        std::vector<int> p(t.size(), -1);
        for (std::size_t x = 0; x < t.size(); ++x)
            for (auto c : t.children[x]) p[c] = static_cast<int>(x);
        return p;
    };
    auto pa = parents(a), pb = parents(b);
    std::vector<int> map(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(std::size_t)> go = [&](std::size_t x) -> bool {
        if (x == n) return true;
        for (std::size_t y = 0; y < n; ++y) {
            if (used[y] || a.children[x].size() != b.children[y].size()) continue;
            if ((x == 0) != (y == 0)) continue;
            if (x != 0 && (map[pa[x]] < 0 || map[pa[x]] != pb[y])) continue;
            map[x] = static_cast<int>(y);
            used[y] = 1;
            if (go(x + 1)) return true;
            used[y] = 0;
            map[x] = -1;
        }
        return false;
    };
    // parents precede children in BFS-built trees, so mapped parents are known in index order
    return go(0);
}

RootedTree random_rooted(std::size_t n, std::mt19937_64& rng)
{
    RootedTree t;
    t.children.assign(n, {});
    for (std::uint32_t x = 1; x < n; ++x) t.children[rng() % x].push_back(x);
    return t;
}

/// Unrooted isomorphism: some choice of roots makes the rooted trees isomorphic.
bool isomorphic(const Topology& a, const Topology& b)
{
    if (a.size() != b.size()) return false;
    auto rb = RootedTree::from_topology(b, 0, {});
    for (Vertex r = 0; r < a.size(); ++r)
        if (rooted_isomorphic(RootedTree::from_topology(a, r, {}), rb)) return true;
    return false;
}

std::size_t leaf_count(const Topology& t)
{
    std::size_t c = 0;
    for (Vertex v = 0; v < t.size(); ++v) c += t.degree(v) == 1;
    return c;
}

Vertex random_vertex(const Topology& t, std::mt19937_64& rng) { return static_cast<Vertex>(rng() % t.size()); }

LocalVerifier mod3_on_trees()
{
    auto base = fig1_verifier();
    return LocalVerifier("mod3-tree", 2, 1, Kind::Tree, [base](const View& v) { return base.accepts(v); });
}

} // namespace

TEST(Parse, PathEndToEnd)
{
    auto t = Topology::path(5);
    auto p = parse(t, 0, 4);
    ASSERT_EQ(p.parts.size(), 5u);
    for (const auto& part : p.parts) EXPECT_EQ(part.encoding(), "()");
}

TEST(Parse, StarAtCenter)
{
    auto t = Topology::tree({{0, 1}, {0, 2}, {0, 3}});
    auto p = parse(t, 0, 0);
    ASSERT_EQ(p.parts.size(), 1u);
    EXPECT_EQ(p.parts[0].encoding(), "(()()())");
}

TEST(Parse, MissingVertexRejected) { EXPECT_THROW(parse(Topology::path(3), 0, 7), InvalidInput); }

TEST(Parse, ReversalReversesParts)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto t = random_tree(1 + rng() % 20, rng);
        auto u = random_vertex(t, rng), v = random_vertex(t, rng);
        auto a = parse(t, u, v).encodings(), b = parse(t, v, u).encodings();
        std::reverse(b.begin(), b.end());
        EXPECT_EQ(a, b);
    }
}

TEST(Glue, RoundTripRandomTrees)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_tree(1 + rng() % 30, rng);
        auto u = random_vertex(t, rng), v = random_vertex(t, rng);
        auto g = glue(parse(t, u, v));
        EXPECT_EQ(tree_canonical(g), tree_canonical(t));
        if (t.size() <= 9) {
            EXPECT_TRUE(isomorphic(g, t));
        }
    }
}

TEST(Glue, SingleVerticesMakePath)
{
    TreeParsing p;
    p.parts.assign(6, RootedTree{});
    auto g = glue(p);
    EXPECT_TRUE(g.in_class(Kind::Path));
    EXPECT_EQ(g.size(), 6u);
}

TEST(Glue, StrictSubsequenceShrinks)
{
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_tree(2 + rng() % 25, rng);
        auto u = random_vertex(t, rng), v = random_vertex(t, rng);
        auto p = parse(t, u, v);
        if (p.parts.size() < 2) continue;
        TreeParsing sub;
        for (auto& part : p.parts)
            if (rng() % 2) sub.parts.push_back(part);
        if (sub.parts.empty() || sub.parts.size() == p.parts.size()) sub.parts.assign(p.parts.begin(), p.parts.end() - 1);
        auto g = glue(sub);
        EXPECT_LT(g.size(), t.size());
        EXPECT_LE(g.diameter(), t.diameter());
    }
}

TEST(Glue, EmptyParsingRejected) { EXPECT_THROW(glue(TreeParsing{}), InvalidInput); }

TEST(Canonical, EncodingMatchesBruteForceIsomorphism)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + rng() % 10;
        auto a = random_rooted(n, rng), b = random_rooted(n, rng);
        EXPECT_EQ(a.encoding() == b.encoding(), rooted_isomorphic(a, b));
    }
}

TEST(Canonical, EncodingRoundTrip)
{
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_rooted(1 + rng() % 15, rng);
        EXPECT_EQ(RootedTree::from_encoding(a.encoding()).encoding(), a.encoding());
    }
    EXPECT_THROW(RootedTree::from_encoding("(()"), InvalidInput);
    EXPECT_THROW(RootedTree::from_encoding("()()"), InvalidInput);
}

TEST(TreeAccepted, PathShapedTreesFollowDivisibility)
{
    auto v = mod3_on_trees();
    for (std::size_t n = 1; n <= 18; ++n) {
        auto t = Topology::from_edges(Kind::Tree, n, Topology::path(n).edges());
        EXPECT_EQ(tree_accepted(t, v).accepted, n % 3 == 0) << n;
        EXPECT_EQ(accepted_path_lengths(fig1_verifier(), n)[n], n % 3 == 0);
    }
}

TEST(TreeAccepted, StarRejectedByLowDegreeVerifier)
{
    LocalVerifier v("low-degree", 1, 1, Kind::Tree, [](const View& x) { return x.degree() <= 2; });
    EXPECT_FALSE(tree_accepted(Topology::tree({{0, 1}, {0, 2}, {0, 3}}), v).accepted);
}

TEST(TreeAccepted, MatchesBacktrackingAndWitnessVerifies)
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        auto t = random_tree(1 + rng() % 10, rng);
        auto v = random_verifier(trial, trial % 2, 1, Kind::Tree, 0.8);
        auto d = tree_accepted(t, v);
        EXPECT_EQ(d.accepted, backtrack_assignment(t, v).has_value()) << trial;
        if (d.accepted) {
            EXPECT_TRUE(run_verification(t, CertAssignment(v.width(), d.witness), v).globally_accepted);
        }
    }
}

TEST(Encodings, RoundTripOnRandomCaterpillars)
{
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> counts(1 + rng() % 7);
        for (auto& c : counts) c = rng() % 5;
        counts.front() = std::max<std::size_t>(counts.front(), 1);
        counts.back() = std::max<std::size_t>(counts.back(), 1);
        if (counts.size() == 1) counts[0] = std::max<std::size_t>(counts[0], 2);
        auto g = Topology::caterpillar(counts);
        auto back = path_to_caterpillar(caterpillar_to_path(g, 5));
        EXPECT_EQ(tree_canonical(back), tree_canonical(g));
        if (g.size() <= 9) {
            EXPECT_TRUE(isomorphic(back, g));
        }
    }
}

TEST(Encodings, BarePath)
{
    auto p = Topology::path(6);
    auto h = caterpillar_to_path(p);
    EXPECT_EQ(h.size(), 4u);
    EXPECT_EQ(h.labels(), (std::vector<int>{1, 0, 0, 1}));
    EXPECT_EQ(tree_canonical(path_to_caterpillar(h)), tree_canonical(p));
}

TEST(Encodings, DirectConstruction)
{
    auto g = path_to_caterpillar(Topology::path(3, {3, 0, 2}, 4));
    EXPECT_EQ(g.size(), 8u);
    EXPECT_EQ(leaf_count(g), 5u);
    EXPECT_EQ(g.leaf_profile(), (std::vector<std::size_t>{3, 0, 2}));
}

TEST(Encodings, NonCaterpillarRejected)
{
    auto spider = Topology::tree({{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}});
    EXPECT_THROW(caterpillar_to_path(spider), InvalidInput);
}
