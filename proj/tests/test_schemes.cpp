#include <random>

#include <gtest/gtest.h>

#include <certilab/engine.hpp>

using namespace certilab;

namespace {

bool prover_accepted(const Scheme& s, const Topology& t)
{
    auto c = s.prover(t);
    return run_verification(t, c, s.verifier(c.width)).globally_accepted;
}

bool rejected_up_to(const Scheme& s, const Topology& t, unsigned k_max)
{
    for (unsigned k = 0; k <= k_max; ++k)
        if (exists_accepting_assignment(t, s.verifier(k))) return false;
    return true;
}

std::uint64_t first_m_with_b_at_least(const GrowthFunction& f, std::uint64_t bound, std::uint64_t from)
{
    auto b = build_sequence_b(f, 64).terms;
    for (std::uint64_t m = from; m <= b.size(); ++m)
        if (b[m - 1] >= bound) return m;
    return 0;
}

} // namespace

TEST(ModScheme, LengthsFollowResidue)
{
    for (std::uint64_t m = 2; m <= 16; ++m)
        for (std::uint64_t t = 0; t < m; t += (m <= 8 ? 1 : m - 1)) {
            auto s = mod_counter_scheme(t, m);
            const auto& v = s.verifier(bits_for(mod_counter_modulus(m)));
            auto lengths = accepted_path_lengths(v, 500);
            for (std::size_t n = 1; n <= 500; ++n) ASSERT_EQ(lengths[n], n % m == t) << m << " " << t << " " << n;
        }
}

TEST(ModScheme, NegationComplements)
{
    for (std::uint64_t m : {2u, 5u, 12u}) {
        auto s = not_mod_scheme(1, m);
        auto lengths = accepted_path_lengths(s.verifier(bits_for(mod_counter_modulus(m))), 200);
        for (std::size_t n = 1; n <= 200; ++n) EXPECT_EQ(lengths[n], n % m != 1) << m << " " << n;
    }
}

TEST(ModScheme, ProverCertifiesMembers)
{
    auto s = mod_counter_scheme(2, 7);
    for (std::size_t n = 2; n <= 100; n += 7) {
        EXPECT_TRUE(prover_accepted(s, Topology::path(n)));
        std::mt19937_64 rng(n);
        EXPECT_TRUE(prover_accepted(s, shuffled(Topology::path(n), rng)));
    }
    EXPECT_THROW(s.prover(Topology::path(3)), InvalidInput);
}

TEST(ModScheme, NameParsing)
{
    EXPECT_EQ(catalog_entry("mod-2-5").scheme.name, "mod-2-5");
    EXPECT_EQ(catalog_entry("not-mod-0-4").scheme.name, "not-mod-0-4");
    EXPECT_THROW(catalog_entry("mod-x"), InvalidInput);
    EXPECT_THROW(catalog_entry("nope"), InvalidInput);
}

TEST(Primorial, CompletenessOnSmallLengths)
{
    auto s = primorial_complement_scheme();
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        if (is_primorial(n)) continue;
        ASSERT_TRUE(prover_accepted(s, Topology::path(n))) << n;
    }
    EXPECT_TRUE(check_completeness(s, Topology::path(10)));
}

TEST(Primorial, PrimorialsRejected)
{
    auto s = primorial_complement_scheme();
    EXPECT_TRUE(rejected_up_to(s, Topology::path(30), 8));
    EXPECT_TRUE(rejected_up_to(s, Topology::path(6), 8));
    EXPECT_THROW(s.prover(Topology::path(30)), InvalidInput);
}

TEST(Primorial, HeaderRoundTrip)
{
    for (std::uint64_t n = 3; n <= 500; ++n) {
        if (is_primorial(n)) continue;
        auto h = prover_header(n);
        ASSERT_TRUE(h.has_value());
        EXPECT_TRUE(primorial_condition_holds(*h, n - 1)) << n;
    }
}

TEST(CycleNotPow2, Examples)
{
    auto s = cycle_not_pow2_scheme();
    EXPECT_TRUE(check_completeness(s, Topology::cycle(6)));
    EXPECT_TRUE(check_completeness(s, Topology::cycle(3)));
    EXPECT_TRUE(rejected_up_to(s, Topology::cycle(8), 6));
}

TEST(CycleNotPow2, ProverOnAllSmallCycles)
{
    auto s = cycle_not_pow2_scheme();
    for (std::uint64_t n = 3; n <= 400; ++n) {
        if (is_power_of_two(n)) continue;
        ASSERT_TRUE(prover_accepted(s, Topology::cycle(n))) << n;
    }
    EXPECT_EQ(least_odd_divisor(12), 3u);
    EXPECT_EQ(least_odd_divisor(50), 5u);
}

TEST(CycleNotPow2, OddPairCoding)
{
    for (std::uint64_t d = 3; d <= 31; d += 2)
        for (std::uint64_t i = 0; i < d; ++i) EXPECT_EQ(decode_odd_pair(encode_odd_pair(d, i)), std::make_pair(d, i));
}

TEST(GrowthCaterpillar, MemberAcceptedAndEditsRejected)
{
    auto f = half_log_growth();
    auto s = caterpillar_growth_scheme(f);
    auto g5 = growth_caterpillar(f, 5);
    EXPECT_TRUE(s.property(g5));
    EXPECT_TRUE(check_completeness(s, g5));
    auto leaves = g5.leaf_profile();
    leaves[1] += 1;
    auto edited = Topology::caterpillar(leaves);
    EXPECT_FALSE(s.property(edited));
    EXPECT_TRUE(rejected_up_to(s, edited, 3));
}

TEST(GrowthCaterpillar, ProverOnShuffledMembers)
{
    auto f = half_log_growth();
    auto s = caterpillar_growth_scheme(f);
    std::mt19937_64 rng(2);
    for (auto d : growth_spine_lengths(f, 6)) EXPECT_TRUE(prover_accepted(s, shuffled(growth_caterpillar(f, d), rng)));
}

TEST(GrowthCaterpillar, PumpingDemo)
{
    auto f = half_log_growth();
    auto demo = caterpillar_pumping_demo(f, 6, 2);
    EXPECT_TRUE(run_verification(demo.instance, demo.certs, demo.verifier).globally_accepted);
    EXPECT_FALSE(caterpillar_growth_scheme(f).property(demo.instance));
    EXPECT_GT(demo.instance.size(), growth_caterpillar(f, 6).size());
    EXPECT_THROW(caterpillar_pumping_demo(f, 3, 1), InvalidInput);
}

TEST(Radius2Caterpillar, MemberAccepted)
{
    auto f = half_log_growth();
    auto s = caterpillar_radius2_scheme(f);
    auto b = build_sequence_b(f, 4).terms;
    auto g4 = radius2_caterpillar(b[3], b[3]);
    EXPECT_TRUE(s.property(g4));
    EXPECT_TRUE(check_completeness(s, g4));
}

TEST(Radius2Caterpillar, BarePathRejected)
{
    auto s = caterpillar_radius2_scheme(half_log_growth());
    auto p = Topology::from_edges(Kind::Caterpillar, 6, Topology::path(6).edges());
    EXPECT_FALSE(s.property(p));
    EXPECT_TRUE(rejected_up_to(s, p, 3));
}

TEST(Radius2Caterpillar, MixedDemo)
{
    auto f = half_log_growth();
    const auto m = first_m_with_b_at_least(f, 4, 2);
    ASSERT_GT(m, 0u);
    auto demo = radius2_mixed_demo(f, m, m + 1);
    EXPECT_TRUE(run_verification(demo.instance, demo.certs, demo.verifier).globally_accepted);
    EXPECT_FALSE(caterpillar_radius2_scheme(f).property(demo.instance));
}

TEST(ApproxN, PrimorialWithEstimate)
{
    auto e = catalog_entry("approx-n-primorial");
    auto t = Topology::path(30).with_n_hat(32);
    EXPECT_TRUE(e.scheme.property(t));
    EXPECT_TRUE(check_completeness(e.scheme, t));
}

TEST(ApproxN, NonMemberWithinPromiseRejected)
{
    auto e = catalog_entry("approx-n-primorial");
    auto t = Topology::path(31).with_n_hat(32);
    ASSERT_TRUE(approx_promise_holds(log_growth(), 31, 32));
    EXPECT_FALSE(e.scheme.property(t));
    const auto w = approx_window(log_growth(), 32);
    EXPECT_TRUE(rejected_up_to(e.scheme, t, bits_for(w.modulus)));
}

TEST(ApproxN, WindowPinsUniqueLength)
{
    auto g = log_growth();
    for (std::uint64_t n_hat = 1; n_hat <= 3000; n_hat += 7) {
        auto w = approx_window(g, n_hat);
        for (std::uint64_t n = w.lo; n <= w.hi; ++n) EXPECT_EQ(approx_pin(w, n - 1), n);
    }
}

TEST(IdEquality, EqualStringsAccepted)
{
    for (auto name : {"id-equality-exact", "id-equality-ids"}) {
        auto e = catalog_entry(name);
        std::mt19937_64 rng(5);
        auto t = strings_path(20, "1011", "1011");
        t = e.scheme.id_mode == IdMode::ExactN ? t.with_n_hat(20) : detail::with_random_ids(t, rng);
        EXPECT_TRUE(e.scheme.property(t)) << name;
        EXPECT_TRUE(check_completeness(e.scheme, t)) << name;
    }
}

TEST(IdEquality, DifferentStringsRejected)
{
    auto s = id_equality_scheme(IdMode::ExactN);
    auto good = strings_path(8, "101", "101").with_n_hat(8);
    auto bad = strings_path(8, "101", "100").with_n_hat(8);
    EXPECT_FALSE(s.property(bad));
    const auto k = s.prover(good).width;
    EXPECT_TRUE(rejected_up_to(s, bad, k));
}

TEST(IdEquality, EmptyStrings)
{
    auto s = id_equality_scheme(IdMode::ExactN);
    auto t = strings_path(1, "", "").with_n_hat(1);
    EXPECT_TRUE(s.property(t));
    EXPECT_TRUE(check_completeness(s, t));
    EXPECT_TRUE(endpoint_strings_equal(strings_path(3, "1", "1"), 1));
    EXPECT_FALSE(endpoint_strings_equal(strings_path(3, "1", "0"), 1));
}

TEST(IdEquality, IdsOutsideRangeNotInProperty)
{
    auto s = id_equality_scheme(IdMode::IdsInRangeN);
    auto t = strings_path(4, "1", "1").with_ids({1, 2, 3, 9});
    EXPECT_FALSE(s.property(t));
}

TEST(Catalog, NamesAreUniqueAndResolvable)
{
    std::set<std::string> names;
    for (auto& e : scheme_catalog()) {
        EXPECT_TRUE(names.insert(e.scheme.name).second);
        EXPECT_EQ(catalog_entry(e.scheme.name).scheme.name, e.scheme.name);
        EXPECT_FALSE(e.property.empty());
    }
    EXPECT_EQ(names.size(), 9u);
}

TEST(Catalog, PositivesCertifiedNegativesOutside)
{
    for (auto& e : scheme_catalog()) {
        auto pos = e.positives(7, 50);
        ASSERT_EQ(pos.size(), 50u);
        for (auto& t : pos) {
            ASSERT_TRUE(e.scheme.property(t)) << e.scheme.name;
            ASSERT_TRUE(prover_accepted(e.scheme, t)) << e.scheme.name;
        }
        auto neg = e.negatives(7, 50);
        ASSERT_EQ(neg.size(), 50u);
        for (auto& t : neg) ASSERT_FALSE(e.scheme.property(t)) << e.scheme.name;
    }
}

TEST(Catalog, InstancesDeterministic)
{
    for (auto& e : scheme_catalog()) {
        const std::uint64_t size = e.scheme.promise == Kind::Caterpillar ? 3 : 12;
        EXPECT_EQ(e.instance(size, 12, 4), e.instance(size, 12, 4)) << e.scheme.name;
    }
}
