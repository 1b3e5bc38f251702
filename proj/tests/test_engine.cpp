#include <random>

#include <gtest/gtest.h>

#include <certilab/engine.hpp>

using namespace certilab;

TEST(Exists, DivisibleByThree)
{
    auto v = fig1_verifier();
    EXPECT_FALSE(exists_accepting_assignment(Topology::path(7), v));
    EXPECT_FALSE(backtrack_assignment(Topology::path(7), v).has_value());
    EXPECT_TRUE(exists_accepting_assignment(Topology::path(6), v));
}

TEST(Exists, AllAccepting)
{
    std::mt19937_64 rng(1);
    EXPECT_TRUE(exists_accepting_assignment(Topology::path(9), LocalVerifier::constant(true, 1, 1, Kind::Path)));
    EXPECT_TRUE(exists_accepting_assignment(Topology::cycle(9), LocalVerifier::constant(true, 1, 1, Kind::Cycle)));
    EXPECT_TRUE(exists_accepting_assignment(random_tree(12, rng), LocalVerifier::constant(true, 1, 1, Kind::Tree)));
    EXPECT_TRUE(
        exists_accepting_assignment(Topology::path(5), LocalVerifier::constant(true, 0, 2, Kind::Path)));
}

TEST(Exists, DispatchAgreesWithBacktracking)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 240; ++trial) {
        const unsigned k = 1 + trial % 2;
        const std::size_t n = (trial % 4 == 0 ? 3 : 1) + rng() % 10;
        Topology t = Topology::path(n);
        Kind kind = Kind::Path;
        switch (trial % 4) {
        case 0:
            t = Topology::cycle(n);
            kind = Kind::Cycle;
            break;
        case 1: t = random_tree(n, rng), kind = Kind::Tree; break;
        case 2: {
            std::vector<int> l(n);
            for (auto& x : l) x = static_cast<int>(rng() % 2);
            t = Topology::path(n, l, 2);
            break;
        }
        default: break;
        }
        auto v = random_verifier(500 + trial, k, 1, kind, 0.75);
        EXPECT_EQ(exists_accepting_assignment(t, v), backtrack_assignment(t, v).has_value()) << "trial " << trial;
    }
}

TEST(Exists, ClassPromiseEnforced)
{
    EXPECT_THROW(exists_accepting_assignment(Topology::cycle(6), fig1_verifier()), InvalidInput);
}

TEST(Completeness, Examples)
{
    EXPECT_TRUE(check_completeness(primorial_complement_scheme(), Topology::path(10)));
    EXPECT_TRUE(check_completeness(mod_counter_scheme(0, 3), Topology::path(9)));
    auto f = half_log_growth();
    EXPECT_TRUE(check_completeness(caterpillar_growth_scheme(f), growth_caterpillar(f, 5)));
    EXPECT_THROW(check_completeness(mod_counter_scheme(0, 3), Topology::path(8)), InvalidInput);
}

TEST(Soundness, PrimorialsRejectedUpToEight)
{
    std::vector<Topology> inst;
    for (std::size_t n : {2, 6, 30, 210}) inst.push_back(Topology::path(n));
    auto rep = soundness_sweep(primorial_complement_scheme(), inst, 8);
    EXPECT_TRUE(rep.sound());
    EXPECT_EQ(rep.rows.size(), 4u * 9u);
    EXPECT_NE(rep.csv().find("widths 0..8"), std::string::npos);
}

TEST(Soundness, PowersOfTwoCyclesRejectedUpToSix)
{
    std::vector<Topology> inst;
    for (std::size_t n : {4, 8, 16, 32}) inst.push_back(Topology::cycle(n));
    EXPECT_TRUE(soundness_sweep(cycle_not_pow2_scheme(), inst, 6).sound());
}

TEST(Soundness, ModSchemeOwnFamily)
{
    EXPECT_TRUE(soundness_sweep(mod_counter_scheme(0, 3), {Topology::path(5)}, 2).sound());
    EXPECT_THROW(soundness_sweep(mod_counter_scheme(0, 3), {Topology::path(6)}, 2), InvalidInput);
}

TEST(Soundness, ReportsViolationsOfWeakVerifiers)
{
    Scheme weak;
    weak.name = "all-accept";
    weak.make_verifier = [](unsigned k) { return LocalVerifier::constant(true, k, 1, Kind::Path); };
    weak.property = [](const Topology& t) { return t.size() % 2 == 0; };
    auto rep = soundness_sweep(weak, {Topology::path(3), Topology::path(5)}, 1);
    EXPECT_EQ(rep.violations().size(), 4u);
    EXPECT_EQ(rep.csv(), "# soundness checked for widths 0..1 only\ninstance_id,n,k,accepting_exists\n"
                         "0,3,0,1\n0,3,1,1\n1,5,0,1\n1,5,1,1\n");
}

TEST(MinSize, ModScheme) { EXPECT_EQ(min_cert_size_for_length(mod_counter_scheme(0, 3), 9, 8), 2u); }

TEST(MinSize, PrimorialScheme)
{
    auto s = primorial_complement_scheme();
    auto k = min_cert_size_for_length(s, 10, 10);
    ASSERT_TRUE(k.has_value());
    EXPECT_LE(*k, primorial_prover_width(10));
    EXPECT_FALSE(min_cert_size_for_length(s, 30, 8).has_value());
}
