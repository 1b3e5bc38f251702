#include <random>

#include <gtest/gtest.h>

#include <certilab/schemes.hpp>

using namespace certilab;

namespace {

/// Literal search over every assignment in [0, 2^k)^n.
bool exhaustive(const Topology& t, const LocalVerifier& v)
{
    const std::size_t n = t.size();
    const Cert base = Cert{1} << v.width();
    std::vector<Cert> c(n, 0);
    while (true) {
        bool all = true;
        for (Vertex x = 0; x < n && all; ++x) all = v.accepts(view_at(t, x, v.radius(), c, v.ids_visible()));
        if (all) return true;
        std::size_t i = 0;
        while (i < n && ++c[i] == base) c[i++] = 0;
        if (i == n) return false;
    }
}

/// Certificates 0,1,2,0,1,2,... from one endpoint, the divisible-by-3 witness.
std::vector<Cert> mod3_certs(std::size_t n)
{
    std::vector<Cert> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i % 3;
    return c;
}

} // namespace

TEST(RunVerification, DivisibleByThreeAccepted)
{
    auto r = run_verification(Topology::path(6), CertAssignment(2, mod3_certs(6)), fig1_verifier());
    EXPECT_TRUE(r.globally_accepted);
    EXPECT_TRUE(r.rejecting.empty());
}

TEST(RunVerification, AllZeroRejected)
{
    auto r = run_verification(Topology::path(6), CertAssignment(2, std::vector<Cert>(6, 0)), fig1_verifier());
    EXPECT_FALSE(r.globally_accepted);
    EXPECT_FALSE(r.rejecting.empty());
}

TEST(RunVerification, SingleVertexUsesDegreeZeroRule)
{
    auto t = Topology::path(1);
    EXPECT_FALSE(run_verification(t, CertAssignment(2, {0}), fig1_verifier()).globally_accepted);
    EXPECT_TRUE(run_verification(t, CertAssignment(0, {0}), LocalVerifier::constant(true, 0, 1, Kind::Path))
                    .globally_accepted);
}

TEST(RunVerification, Errors)
{
    EXPECT_THROW(run_verification(Topology::path(6), CertAssignment(1, std::vector<Cert>(6, 0)), fig1_verifier()),
                 InvalidInput);
    EXPECT_THROW(run_verification(Topology::cycle(6), CertAssignment(2, mod3_certs(6)), fig1_verifier()),
                 InvalidInput);
    EXPECT_THROW(CertAssignment(1, {0, 2}), InvalidInput);
}

TEST(RunVerification, RejectingSetMatchesPerVertexDecisions)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = random_verifier(trial, 1, 1, Kind::Path);
        const std::size_t n = 1 + rng() % 12;
        auto t = Topology::path(n);
        std::vector<Cert> c(n);
        for (auto& x : c) x = rng() % 2;
        auto r = run_verification(t, CertAssignment(1, c), v);
        std::vector<Vertex> expect;
        for (Vertex x = 0; x < n; ++x)
            if (!v.accepts(view_at(t, x, 1, c))) expect.push_back(x);
        EXPECT_EQ(r.rejecting, expect);
        EXPECT_EQ(r.globally_accepted, expect.empty());
    }
}

TEST(RunVerification, InvariantUnderRenaming)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = random_verifier(trial, 1, 1 + trial % 2, Kind::Tree, 0.8);
        auto t = random_tree(2 + rng() % 10, rng);
        std::vector<Cert> c(t.size());
        for (auto& x : c) x = rng() % 2;
        std::vector<Vertex> perm(t.size());
        std::iota(perm.begin(), perm.end(), Vertex{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Cert> cp(t.size());
        for (Vertex x = 0; x < t.size(); ++x) cp[perm[x]] = c[x];
        EXPECT_EQ(run_verification(t, CertAssignment(1, c), v).globally_accepted,
                  run_verification(t.permuted(perm), CertAssignment(1, cp), v).globally_accepted);
    }
}

TEST(Backtracking, MatchesExhaustiveOnSmallInstances)
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const unsigned width = trial % 4 == 0 ? 2 : 1;
        const std::size_t cap = width == 2 ? 6 : 10;
        Topology t = Topology::path(1);
        Kind kind = Kind::Path;
        switch (trial % 3) {
        case 0: t = Topology::path(1 + rng() % cap); break;
        case 1:
            t = Topology::cycle(3 + rng() % (cap - 2));
            kind = Kind::Cycle;
            break;
        default:
            t = random_tree(1 + rng() % cap, rng);
            kind = Kind::Tree;
        }
        auto v = random_verifier(1000 + trial, width, 1 + trial % 2, kind, 0.7);
        EXPECT_EQ(backtrack_assignment(t, v).has_value(), exhaustive(t, v)) << "trial " << trial;
        EXPECT_EQ(backtrack_assignment(t, v, false).has_value(), exhaustive(t, v)) << "trial " << trial;
    }
}

TEST(Backtracking, WitnessIsAccepted)
{
    auto v = fig1_verifier();
    for (std::size_t n = 1; n <= 15; ++n) {
        auto t = Topology::path(n);
        auto w = backtrack_assignment(t, v);
        EXPECT_EQ(w.has_value(), n % 3 == 0);
        if (w) {
            EXPECT_TRUE(run_verification(t, CertAssignment(2, *w), v).globally_accepted);
        }
    }
}

TEST(Verifiers, BitsFor)
{
    EXPECT_EQ(bits_for(1), 0u);
    EXPECT_EQ(bits_for(2), 1u);
    EXPECT_EQ(bits_for(3), 2u);
    EXPECT_EQ(bits_for(4), 2u);
    EXPECT_EQ(bits_for(5), 3u);
}

TEST(Verifiers, WidthZeroHasOneCertificate)
{
    auto v = LocalVerifier::constant(true, 0, 1, Kind::Path);
    EXPECT_EQ(v.domain(), (std::vector<Cert>{0}));
}

TEST(Verifiers, TableJsonRoundTrip)
{
    auto v = fig1_verifier();
    auto j = verifier_to_json(v);
    auto u = verifier_from_json(j);
    for (std::size_t n = 1; n <= 12; ++n) {
        auto t = Topology::path(n);
        EXPECT_EQ(backtrack_assignment(t, u).has_value(), n % 3 == 0);
    }
    EXPECT_EQ(verifier_to_json(u).dump(), j.dump());
    EXPECT_THROW(verifier_from_json(Json::parse("{}")), InvalidInput);
}

TEST(Verifiers, RandomVerifierIsDeterministic)
{
    auto a = random_verifier(3, 1, 1, Kind::Path), b = random_verifier(3, 1, 1, Kind::Path);
    EXPECT_EQ(verifier_to_json(a).dump(), verifier_to_json(b).dump());
}
