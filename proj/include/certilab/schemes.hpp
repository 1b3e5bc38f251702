#pragma once

#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "arith.hpp"
#include "certification.hpp"
#include "tree_tools.hpp"

namespace certilab {

// ---------------------------------------------------------------- instance helpers

/// Vertices of a path from its lowest-indexed endpoint to the other one.
inline std::vector<Vertex> path_order(const Topology& t)
{
    require(t.in_class(Kind::Path), "path order needs a path");
    Vertex start = 0;
    for (Vertex v = 0; v < t.size(); ++v)
        if (t.degree(v) <= 1) {
            start = v;
            break;
        }
    std::vector<Vertex> out{start};
    while (out.size() < t.size()) {
        for (Vertex w : t.neighbors(out.back()))
            if (out.size() < 2 || w != out[out.size() - 2]) {
                out.push_back(w);
                break;
            }
    }
    return out;
}

/// Vertices of a cycle in walking order starting at 0.
inline std::vector<Vertex> cycle_order(const Topology& t)
{
    require(t.in_class(Kind::Cycle), "cycle order needs a cycle");
    std::vector<Vertex> out{0};
    Vertex prev = 0, cur = t.neighbors(0)[0];
    while (cur != 0) {
        out.push_back(cur);
        auto nb = t.neighbors(cur);
        Vertex nxt = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = nxt;
    }
    return out;
}

template <class Rng>
Topology shuffled(const Topology& t, Rng& rng)
{
    std::vector<Vertex> perm(t.size());
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    return t.permuted(perm);
}

// ---------------------------------------------------------------- bit fields

struct BitWriter {
    Cert value = 0;
    unsigned pos = 0;

    void put(Cert bits, unsigned count)
    {
        require(pos + count <= 63, "certificate layout exceeds 63 bits");
        value |= bits << pos;
        pos += count;
    }
    /// Unary length then the bits below the leading one.
    void gamma(std::uint64_t x)
    {
        require(x >= 1, "gamma code needs a positive value");
        const unsigned b = static_cast<unsigned>(std::bit_width(x)) - 1;
        put((Cert{1} << b) - 1, b);
        put(0, 1);
        put(x & ((Cert{1} << b) - 1), b);
    }
};

struct BitReader {
    Cert value = 0;
    unsigned pos = 0;

    std::optional<Cert> get(unsigned count)
    {
        if (pos + count > 63) return std::nullopt;
        Cert out = count == 0 ? 0 : (value >> pos) & ((Cert{1} << count) - 1);
        pos += count;
        return out;
    }
    std::optional<std::uint64_t> gamma()
    {
        unsigned b = 0;
        while (true) {
            auto bit = get(1);
            if (!bit) return std::nullopt;
            if (*bit == 0) break;
            if (++b > 40) return std::nullopt;
        }
        auto low = get(b);
        if (!low) return std::nullopt;
        return (std::uint64_t{1} << b) | *low;
    }
    bool exhausted() const { return pos >= 63 || (value >> pos) == 0; }
};

// ---------------------------------------------------------------- counters on paths

/// Certificate of the counter schemes: a header shared by all vertices and a position counter.
struct CounterCert {
    std::uint64_t header = 0;
    std::uint64_t counter = 0;
    std::uint64_t modulus = 3;
};

using CounterDecode = std::function<std::optional<CounterCert>(Cert)>;
/// Acceptance of the final endpoint given the header and its counter (distance to the beginning).
using CounterFinal = std::function<bool(std::uint64_t, std::uint64_t)>;

/// The counter increases by one along the path, modulo a multiple of 3, so the direction is
/// locally visible; the beginning endpoint holds 0 and the final endpoint runs the check.
inline bool counter_decide(const View& v, const CounterDecode& decode, const CounterFinal& final_ok)
{
    auto self = decode(v.cert());
    if (!self) return false;
    const auto L = self->modulus, c = self->counter;
    std::array<std::uint64_t, 2> nb{};
    if (v.degree() > 2) return false;
    for (std::size_t i = 0; i < v.degree(); ++i) {
        auto o = decode(v.certs[v.adj[0][i]]);
        if (!o || o->header != self->header) return false;
        nb[i] = o->counter;
    }
    const auto down = (c + L - 1) % L, up = (c + 1) % L;
    switch (v.degree()) {
    case 0: return c == 0 && final_ok(self->header, 0);
    case 1:
        if (c == 0 && nb[0] == up) return true;
        return nb[0] == down && final_ok(self->header, c);
    default: return (nb[0] == down && nb[1] == up) || (nb[0] == up && nb[1] == down);
    }
}

inline bool counter_compatible(const CounterDecode& decode, Cert a, Cert b)
{
    auto x = decode(a), y = decode(b);
    if (!x || !y || x->header != y->header) return false;
    const auto L = x->modulus;
    return y->counter == (x->counter + 1) % L || x->counter == (y->counter + 1) % L;
}

inline LocalVerifier counter_verifier(std::string name, unsigned width, CounterDecode decode, CounterFinal final_ok)
{
    LocalVerifier v(std::move(name), width, 1, Kind::Path,
                    [decode, final_ok](const View& view) { return counter_decide(view, decode, final_ok); });
    return v.with_own_check([decode](Cert c) { return decode(c).has_value(); })
        .with_compat([decode](Cert a, Cert b) { return counter_compatible(decode, a, b); });
}

/// Prover side: counter i mod L along the path, packed above a header of header_bits bits.
inline std::vector<Cert> counter_certs(const Topology& t, Cert header, unsigned header_bits, std::uint64_t modulus)
{
    auto order = path_order(t);
    std::vector<Cert> certs(t.size());
    for (std::size_t i = 0; i < order.size(); ++i) certs[order[i]] = header | (Cert{i % modulus} << header_bits);
    return certs;
}

// ---------------------------------------------------------------- modular lengths

inline std::uint64_t mod_counter_modulus(std::uint64_t m) { return std::lcm<std::uint64_t>(3, m); }

/// Paths with n = t (mod m), or n != t (mod m) when negated.
inline Scheme mod_counter_scheme(std::uint64_t t, std::uint64_t m, bool negate = false)
{
    require(m >= 2, "modulus must be at least 2");
    require(m <= (std::uint64_t{1} << 40), "modulus above 2^40");
    const std::uint64_t L = mod_counter_modulus(m);
    const std::uint64_t target = (t % m + m - 1) % m;
    const std::string name = std::string(negate ? "not-mod-" : "mod-") + std::to_string(t % m) + "-" + std::to_string(m);
    CounterDecode decode = [L](Cert c) -> std::optional<CounterCert> {
        if (c >= L) return std::nullopt;
        return CounterCert{0, c, L};
    };
    // the final endpoint sits at distance n-1 from the beginning
    CounterFinal final_ok = [m, target, negate](std::uint64_t, std::uint64_t c) { return (c % m == target) != negate; };
    Scheme s;
    s.name = name;
    s.promise = Kind::Path;
    s.size_bound = "O(log m)";
    s.make_verifier = [=](unsigned k) {
        return counter_verifier(name, k, decode, final_ok).with_domain([L, k] {
            std::vector<Cert> out;
            for (Cert c = 0; c < L && c < cert_count(k); ++c) out.push_back(c);
            return out;
        });
    };
    s.property = [=](const Topology& x) { return x.in_class(Kind::Path) && ((x.size() % m == t % m) != negate); };
    s.prover = [=, prop = s.property](const Topology& x) {
        require(prop(x), "prover called outside the property");
        return CertAssignment(bits_for(L), counter_certs(x, 0, 0, L));
    };
    return s;
}

inline Scheme not_mod_scheme(std::uint64_t t, std::uint64_t m) { return mod_counter_scheme(t, m, true); }

/// The three-certificate verifier of the divisible-by-3 example.
inline LocalVerifier fig1_verifier() { return mod_counter_scheme(0, 3).verifier(2); }

// ---------------------------------------------------------------- complement of the primorials

inline constexpr std::uint64_t primorial_prime_index_cap = 2000;
inline constexpr std::uint64_t primorial_modulus_cap = std::uint64_t{1} << 20;

struct PrimorialHeader {
    int condition = 0;
    std::uint64_t first = 0, second = 0;
    std::uint64_t modulus = 0;
    std::uint64_t q1 = 0, q2 = 0, m = 0, residue = 0;
    Cert raw = 0;
    unsigned bits = 0;
};

/// Validates the parameters of a witness condition and derives the counter modulus.
inline std::optional<PrimorialHeader> primorial_header(int condition, std::uint64_t first, std::uint64_t second)
{
    PrimorialHeader h;
    h.condition = condition;
    h.first = first;
    h.second = second;
    BitWriter w;
    w.put(static_cast<Cert>(condition), 2);
    switch (condition) {
    case 1:
        h.modulus = 6;
        break;
    case 2:
        if (first < 1 || first >= second || second > primorial_prime_index_cap) return std::nullopt;
        h.q1 = nth_prime(second);
        h.q2 = nth_prime(first);
        h.modulus = std::lcm(std::lcm<std::uint64_t>(3, h.q1), h.q2);
        w.gamma(first);
        w.gamma(second);
        break;
    case 3:
        if (first < 1 || first > primorial_prime_index_cap || second < 2 || second > primorial_modulus_cap)
            return std::nullopt;
        h.q1 = nth_prime(first);
        h.q2 = nth_prime(first + 1);
        h.m = second;
        h.residue = primorial_mod(first, second);
        h.modulus = std::lcm(std::lcm(std::lcm<std::uint64_t>(3, h.q1), h.q2), second);
        w.gamma(first);
        w.gamma(second);
        break;
    default: return std::nullopt;
    }
    h.raw = w.value;
    h.bits = w.pos;
    return h;
}

inline std::optional<std::pair<PrimorialHeader, std::uint64_t>> decode_primorial_cert(Cert c)
{
    BitReader r{c, 0};
    auto cond = r.get(2);
    if (!cond || *cond == 0) return std::nullopt;
    std::uint64_t first = 0, second = 0;
    if (*cond != 1) {
        auto a = r.gamma();
        if (!a) return std::nullopt;
        auto b = r.gamma();
        if (!b) return std::nullopt;
        first = *a;
        second = *b;
    }
    thread_local std::map<std::tuple<int, std::uint64_t, std::uint64_t>, std::optional<PrimorialHeader>> memo;
    auto key = std::make_tuple(static_cast<int>(*cond), first, second);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, primorial_header(static_cast<int>(*cond), first, second)).first;
    if (!it->second) return std::nullopt;
    const auto& h = *it->second;
    auto counter = r.get(bits_for(h.modulus));
    if (!counter || *counter >= h.modulus || !r.exhausted()) return std::nullopt;
    return std::make_pair(h, *counter);
}

/// Whether a path with n = c+1 (mod the header modulus) meets the header's witness condition.
inline bool primorial_condition_holds(const PrimorialHeader& h, std::uint64_t c)
{
    const std::uint64_t x = c + 1;
    switch (h.condition) {
    case 1: return x % 2 == 1;
    case 2: return x % h.q1 == 0 && x % h.q2 != 0;
    case 3: return x % h.q1 == 0 && x % h.q2 != 0 && x % h.m != h.residue;
    }
    return false;
}

inline std::optional<PrimorialHeader> prover_header(std::uint64_t n)
{
    auto cls = classify_primorial(n);
    require(!cls.in_s, "prover called on a primorial");
    return primorial_header(cls.condition, cls.first, cls.second);
}

/// Paths whose length is not a product of the first k primes.
inline Scheme primorial_complement_scheme()
{
    CounterDecode decode = [](Cert c) -> std::optional<CounterCert> {
        auto d = decode_primorial_cert(c);
        if (!d) return std::nullopt;
        return CounterCert{(Cert{d->first.bits} << 56) | d->first.raw, d->second, d->first.modulus};
    };
    CounterFinal final_ok = [](std::uint64_t header, std::uint64_t c) {
        auto h = decode_primorial_cert(header & ((Cert{1} << 56) - 1));
        return h && primorial_condition_holds(h->first, c);
    };
    Scheme s;
    s.name = "primorial-complement";
    s.promise = Kind::Path;
    s.size_bound = "O(log log n)";
    s.make_verifier = [=](unsigned k) { return counter_verifier("primorial-complement", k, decode, final_ok); };
    s.property = [](const Topology& x) { return x.in_class(Kind::Path) && !is_primorial(x.size()); };
    s.prover = [prop = s.property](const Topology& x) {
        require(prop(x), "prover called outside the property");
        auto h = prover_header(x.size());
        ensure(h.has_value(), "witness parameters exceed the certificate layout");
        return CertAssignment(h->bits + bits_for(h->modulus), counter_certs(x, h->raw, h->bits, h->modulus));
    };
    return s;
}

/// Certificate width used by the prover on the path with n vertices.
inline unsigned primorial_prover_width(std::uint64_t n)
{
    auto h = prover_header(n);
    ensure(h.has_value(), "witness parameters exceed the certificate layout");
    return h->bits + bits_for(h->modulus);
}

// ---------------------------------------------------------------- cycles whose length is not a power of two

/// Certificates of the pairs (d, i) with d odd, 3 <= d, 0 <= i < d, listed by increasing d.
inline Cert odd_pair_offset(std::uint64_t d) { return ((d - 1) / 2) * ((d - 1) / 2) - 1; }

inline std::pair<std::uint64_t, std::uint64_t> decode_odd_pair(Cert v)
{
    std::uint64_t h = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v + 1)));
    while (h * h > v + 1) --h;
    while ((h + 1) * (h + 1) <= v + 1) ++h;
    return {2 * h + 1, v - (h * h - 1)};
}

inline Cert encode_odd_pair(std::uint64_t d, std::uint64_t i) { return odd_pair_offset(d) + i; }

/// Largest odd d whose pairs all fit in width k.
inline std::uint64_t largest_odd_divisor_bound(unsigned k)
{
    std::uint64_t d = 1;
    while (odd_pair_offset(d + 2) + d + 2 <= cert_count(k)) d += 2;
    return d;
}

inline std::uint64_t least_odd_divisor(std::uint64_t n)
{
    for (std::uint64_t d = 3; d <= n; d += 2)
        if (n % d == 0) return d;
    return 0;
}

inline bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline Scheme cycle_not_pow2_scheme()
{
    auto decide = [](const View& v) {
        if (v.degree() != 2) return false;
        auto [d, i] = decode_odd_pair(v.cert());
        auto [d1, i1] = decode_odd_pair(v.certs[v.adj[0][0]]);
        auto [d2, i2] = decode_odd_pair(v.certs[v.adj[0][1]]);
        if (d1 != d || d2 != d || d % 2 == 0) return false;
        const auto down = (i + d - 1) % d, up = (i + 1) % d;
        return (i1 == down && i2 == up) || (i1 == up && i2 == down);
    };
    auto compat = [](Cert a, Cert b) {
        auto [d, i] = decode_odd_pair(a);
        auto [e, j] = decode_odd_pair(b);
        return d == e && (j == (i + 1) % d || i == (j + 1) % d);
    };
    Scheme s;
    s.name = "cycle-not-pow2";
    s.promise = Kind::Cycle;
    s.size_bound = "O(log n)";
    s.make_verifier = [=](unsigned k) {
        return LocalVerifier("cycle-not-pow2", k, 1, Kind::Cycle, decide).with_compat(compat);
    };
    s.property = [](const Topology& x) { return x.in_class(Kind::Cycle) && !is_power_of_two(x.size()); };
    s.prover = [prop = s.property](const Topology& x) {
        require(prop(x), "prover called outside the property");
        const auto d = least_odd_divisor(x.size());
        auto order = cycle_order(x);
        std::vector<Cert> certs(x.size());
        for (std::size_t j = 0; j < order.size(); ++j) certs[order[j]] = encode_odd_pair(d, j % d);
        return CertAssignment(bits_for(odd_pair_offset(d) + d), std::move(certs));
    };
    return s;
}

// ---------------------------------------------------------------- growth sequences shared by schemes

/// Lazily extended terms of sequence A or B for a fixed growth function.
class SequenceCache {
public:
    SequenceCache(GrowthFunction f, char kind) : f_(std::move(f)), kind_(kind) { validate_growth(f_); }

    /// 1-based term; nothing when the index is beyond the supported range.
    std::optional<std::uint64_t> term(std::uint64_t i)
    {
        if (i < 1 || i > max_terms) return std::nullopt;
        std::lock_guard lock(mu_);
        if (terms_.size() < i) {
            std::size_t count = std::max<std::size_t>(64, terms_.size());
            while (count < i) count *= 2;
            count = std::min<std::size_t>(count, max_terms);
            terms_ = (kind_ == 'A' ? build_sequence_a(f_, count) : build_sequence_b(f_, count)).terms;
        }
        return terms_[i - 1];
    }

    const GrowthFunction& function() const { return f_; }

    static constexpr std::uint64_t max_terms = std::uint64_t{1} << 18;

private:
    GrowthFunction f_;
    char kind_;
    std::mutex mu_;
    std::vector<std::uint64_t> terms_;
};

/// Spine u_1..u_d where u_i carries a_i - 1 leaves.
inline Topology growth_caterpillar(const GrowthFunction& f, std::size_t d)
{
    require(d >= 1, "spine length must be positive");
    auto a = build_sequence_a(f, d).terms;
    std::vector<std::size_t> leaves;
    for (auto x : a) leaves.push_back(x - 1);
    return Topology::caterpillar(leaves);
}

/// Spine u_1..u_{b+1} with b leaves on u_1 and i-1 leaves on u_i.
inline Topology radius2_caterpillar(std::uint64_t b_first, std::uint64_t b)
{
    std::vector<std::size_t> leaves{b_first};
    for (std::uint64_t i = 2; i <= b + 1; ++i) leaves.push_back(i - 1);
    return Topology::caterpillar(leaves);
}

namespace detail {

inline bool profile_matches(std::vector<std::size_t> profile, const std::vector<std::size_t>& want)
{
    if (profile == want) return true;
    std::reverse(profile.begin(), profile.end());
    return profile == want;
}

/// Special certificate 0 on exactly the degree-1 vertices, attached to a non-special vertex.
inline bool special_rule(const View& v)
{
    if (v.cert() != 0) return v.degree() >= 2;
    return v.degree() == 1 && v.certs[v.adj[0][0]] != 0;
}

inline bool special_degree_rule(Cert c, std::size_t degree) { return (c == 0) == (degree == 1); }

} // namespace detail

// ---------------------------------------------------------------- caterpillars, radius 1, size O(f(n))

/// Caterpillars with central path u_1..u_d (d >= 2) and a_i - 1 leaves on u_i.
inline Scheme caterpillar_growth_scheme(const GrowthFunction& f)
{
    auto seq = std::make_shared<SequenceCache>(f, 'A');
    auto decide = [seq](const View& v) {
        if (!detail::special_rule(v)) return false;
        const Cert i = v.cert();
        if (i == 0) return true;
        std::size_t special = 0;
        std::vector<Cert> spine;
        for (auto w : v.adj[0]) {
            if (v.certs[w] == 0) ++special;
            else spine.push_back(v.certs[w]);
        }
        std::sort(spine.begin(), spine.end());
        auto a = seq->term(i);
        if (!a || special + 1 != *a) return false;
        if (i == 1) return spine == std::vector<Cert>{2};
        return spine == std::vector<Cert>{i - 1} || spine == std::vector<Cert>{i - 1, i + 1};
    };
    auto compat = [](Cert a, Cert b) {
        if (a == 0 || b == 0) return a != b;
        return a + 1 == b || b + 1 == a;
    };
    Scheme s;
    s.name = "caterpillar-growth";
    s.promise = Kind::Caterpillar;
    s.size_bound = "O(f(n))";
    s.make_verifier = [=](unsigned k) {
        return LocalVerifier("caterpillar-growth", k, 1, Kind::Caterpillar, decide)
            .with_compat(compat)
            .with_degree_rule(detail::special_degree_rule);
    };
    s.property = [seq](const Topology& x) {
        if (!x.in_class(Kind::Caterpillar)) return false;
        auto profile = x.leaf_profile();
        if (profile.size() < 2) return false;
        std::vector<std::size_t> want;
        for (std::size_t i = 1; i <= profile.size(); ++i) {
            auto a = seq->term(i);
            if (!a) return false;
            want.push_back(*a - 1);
        }
        return detail::profile_matches(profile, want);
    };
    s.prover = [seq, prop = s.property](const Topology& x) {
        require(prop(x), "prover called outside the property");
        auto spine = x.central_path();
        std::vector<std::size_t> want;
        for (std::size_t i = 1; i <= spine.size(); ++i) want.push_back(*seq->term(i) - 1);
        std::vector<std::size_t> profile;
        for (Vertex u : spine) profile.push_back(x.leaf_neighbors(u));
        if (profile != want) std::reverse(spine.begin(), spine.end());
        std::vector<Cert> certs(x.size(), 0);
        for (std::size_t i = 0; i < spine.size(); ++i) certs[spine[i]] = i + 1;
        return CertAssignment(bits_for(spine.size() + 1), std::move(certs));
    };
    return s;
}

/// Spine lengths d >= 2 for which the growth caterpillar exists (a_d >= 2).
inline std::vector<std::size_t> growth_spine_lengths(const GrowthFunction& f, std::size_t count)
{
    std::vector<std::size_t> out;
    std::size_t probe = 64;
    while (true) {
        auto a = build_sequence_a(f, probe).terms;
        out.clear();
        for (std::size_t d = 2; d <= a.size() && out.size() < count; ++d)
            if (a[d - 1] >= 2) out.push_back(d);
        if (out.size() >= count) return out;
        probe *= 2;
        require(probe <= (1u << 16), "growth sequence has too few terms of size at least 2");
    }
}

// ---------------------------------------------------------------- caterpillars, radius 2, size O(f(d))

/// Caterpillars with central path u_1..u_{b_m+1}, b_m leaves on u_1 and i-1 leaves on u_i.
inline Scheme caterpillar_radius2_scheme(const GrowthFunction& f)
{
    auto seq = std::make_shared<SequenceCache>(f, 'B');
    auto decide = [seq](const View& v) {
        if (!detail::special_rule(v)) return false;
        const Cert m = v.cert();
        if (m == 0) return true;
        if (m < 2) return false;
        auto bm = seq->term(m);
        if (!bm) return false;
        const std::uint64_t b = *bm;
        auto delta = [&](std::uint32_t x) {
            std::uint64_t s = 0;
            for (auto w : v.adj[x])
                if (v.certs[w] == 0) ++s;
            return s;
        };
        std::vector<std::uint64_t> inner;
        for (auto w : v.adj[0]) {
            if (v.certs[w] == 0) continue;
            if (v.certs[w] != m) return false;
            inner.push_back(delta(w));
        }
        const std::uint64_t own = delta(0);
        if (own == b && inner.size() == 1) return inner[0] == 1 || inner[0] == b - 1;
        if (inner.size() != 2) return false;
        std::sort(inner.begin(), inner.end());
        if (own == 1 && inner == std::vector<std::uint64_t>{std::min<std::uint64_t>(2, b), std::max<std::uint64_t>(2, b)})
            return true;
        return own >= 2 && own + 1 <= b && inner == std::vector<std::uint64_t>{own - 1, own + 1};
    };
    auto compat = [](Cert a, Cert b) {
        if (a == 0 || b == 0) return a != b;
        return a == b;
    };
    Scheme s;
    s.name = "caterpillar-radius2";
    s.promise = Kind::Caterpillar;
    s.radius = 2;
    s.size_bound = "O(f(d))";
    s.make_verifier = [=](unsigned k) {
        return LocalVerifier("caterpillar-radius2", k, 2, Kind::Caterpillar, decide)
            .with_compat(compat)
            .with_degree_rule(detail::special_degree_rule)
            .with_domain([k] {
                std::vector<Cert> out{0};
                for (Cert c = 2; c < cert_count(k); ++c) out.push_back(c);
                return out;
            });
    };
    auto index_of = [seq](const Topology& x) -> std::optional<std::uint64_t> {
        if (!x.in_class(Kind::Caterpillar)) return std::nullopt;
        auto profile = x.leaf_profile();
        if (profile.size() < 2) return std::nullopt;
        const std::uint64_t b = profile.size() - 1;
        for (std::uint64_t m = 2;; ++m) {
            auto bm = seq->term(m);
            if (!bm || *bm > b) return std::nullopt;
            if (*bm < b) continue;
            std::vector<std::size_t> want{b};
            for (std::uint64_t i = 2; i <= b + 1; ++i) want.push_back(i - 1);
            if (detail::profile_matches(profile, want)) return m;
            return std::nullopt;
        }
    };
    s.property = [index_of](const Topology& x) { return index_of(x).has_value(); };
    s.prover = [index_of](const Topology& x) {
        auto m = index_of(x);
        require(m.has_value(), "prover called outside the property");
        std::vector<Cert> certs(x.size(), 0);
        for (Vertex u = 0; u < x.size(); ++u)
            if (x.degree(u) >= 2) certs[u] = *m;
        return CertAssignment(bits_for(*m + 1), std::move(certs));
    };
    return s;
}

// ---------------------------------------------------------------- splice constructions

struct SpliceDemo {
    std::string description;
    Topology instance;
    CertAssignment certs;
    LocalVerifier verifier;
};

/// Table verifier accepting exactly the views that occur in the given certified instances.
inline LocalVerifier table_from_instances(const std::string& name, unsigned width, std::uint32_t radius, Kind promise,
                                          const std::vector<std::pair<Topology, std::vector<Cert>>>& sources)
{
    std::set<std::string> accepted;
    for (const auto& [t, certs] : sources)
        for (Vertex x = 0; x < t.size(); ++x) accepted.insert(view_at(t, x, radius, certs).encoding);
    return LocalVerifier::from_table(name, width, radius, promise, std::move(accepted));
}

/// Growth caterpillar G_d certified with two alternating spine certificates, then pumped:
/// the segment between two equal consecutive certificate pairs is repeated.
inline SpliceDemo caterpillar_pumping_demo(const GrowthFunction& f, std::size_t d, std::size_t copies)
{
    require(d >= 4, "pumping needs a spine of at least 4 vertices");
    auto a = build_sequence_a(f, d).terms;
    auto spine_cert = [](std::size_t i) { return Cert{1 + i % 2}; };
    auto certified = [&](const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> leaves;
        for (auto i : idx) leaves.push_back(a[i - 1] - 1);
        auto t = Topology::caterpillar(leaves);
        std::vector<Cert> certs(t.size(), 0);
        for (std::size_t j = 0; j < idx.size(); ++j) certs[j] = spine_cert(idx[j]);
        return std::make_pair(t, certs);
    };
    std::vector<std::size_t> base(d);
    std::iota(base.begin(), base.end(), std::size_t{1});
    auto source = certified(base);
    std::size_t k = 0, l = 0;
    for (std::size_t x = 1; x + 1 <= d && !k; ++x)
        for (std::size_t y = x + 1; y + 1 <= d; ++y)
            if (spine_cert(x) == spine_cert(y) && spine_cert(x + 1) == spine_cert(y + 1)) {
                k = x;
                l = y;
                break;
            }
    ensure(k > 0, "no repeated certificate pair on the spine");
    std::vector<std::size_t> idx(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(l));
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t i = k + 1; i <= l; ++i) idx.push_back(i);
    for (std::size_t i = l + 1; i <= d; ++i) idx.push_back(i);
    auto pumped = certified(idx);
    auto v = table_from_instances("pumping-table", 2, 1, Kind::Caterpillar, {source});
    return {"G_" + std::to_string(d) + " with segment u_" + std::to_string(k + 1) + "..u_" + std::to_string(l) +
                " repeated " + std::to_string(copies) + " more times",
            pumped.first, CertAssignment(2, pumped.second), v};
}

/// G_{m,m'}: u_1 as in G_{m'}, the rest as in G_m, with certificates that agree near u_1.
inline SpliceDemo radius2_mixed_demo(const GrowthFunction& f, std::uint64_t m, std::uint64_t m2)
{
    require(m >= 2 && m2 >= 2 && m != m2, "mixed instance needs two distinct indices m, m' >= 2");
    auto b = build_sequence_b(f, std::max(m, m2)).terms;
    const auto bm = b[m - 1], bm2 = b[m2 - 1];
    require(bm >= 4 && bm2 >= 4, "mixed instance needs b_m, b_m' >= 4 so both sides contain the radius-2 window");
    auto certify = [](const Topology& t) {
        std::vector<Cert> certs(t.size(), 0);
        for (Vertex u = 0; u < t.size(); ++u)
            if (t.degree(u) >= 2) certs[u] = 1;
        return certs;
    };
    auto gm = radius2_caterpillar(bm, bm), gm2 = radius2_caterpillar(bm2, bm2);
    auto mixed = radius2_caterpillar(bm2, bm);
    auto v = table_from_instances("mixed-table", 1, 2, Kind::Caterpillar, {{gm, certify(gm)}, {gm2, certify(gm2)}});
    return {"G_{" + std::to_string(m) + "," + std::to_string(m2) + "}", mixed, CertAssignment(1, certify(mixed)), v};
}

// ---------------------------------------------------------------- approximate knowledge of n

struct ApproxWindow {
    std::uint64_t lo = 1, hi = 1, period = 1, modulus = 3;
};

inline constexpr std::uint64_t approx_cutoff = 16;

/// Interval that must contain n and the counter period that separates its members.
inline ApproxWindow approx_window(const GrowthFunction& g, std::uint64_t n_hat)
{
    ApproxWindow w;
    if (n_hat < approx_cutoff) {
        w.lo = 1;
        w.hi = 2 * approx_cutoff;
        w.period = 2 * approx_cutoff;
    } else {
        const double gv = g(static_cast<double>(n_hat));
        const auto G = static_cast<std::uint64_t>(std::max(1.0, std::ceil(gv - 1e-9)));
        w.lo = n_hat > G + 1 ? n_hat - G - 1 : 1;
        w.hi = n_hat + G + 1;
        w.period = 4 * std::max<std::uint64_t>(G, 2);
    }
    ensure(w.hi - w.lo + 1 <= w.period, "approximation window wider than the counter period");
    w.modulus = std::lcm<std::uint64_t>(3, w.period);
    return w;
}

/// The unique length in the window congruent to c+1 modulo the period.
inline std::optional<std::uint64_t> approx_pin(const ApproxWindow& w, std::uint64_t c)
{
    const std::uint64_t r = (c + 1) % w.period;
    std::uint64_t x = w.lo + (r + w.period - w.lo % w.period) % w.period;
    if (x > w.hi) return std::nullopt;
    return x;
}

inline bool approx_promise_holds(const GrowthFunction& g, std::uint64_t n, std::uint64_t n_hat)
{
    const double diff = n > n_hat ? static_cast<double>(n - n_hat) : static_cast<double>(n_hat - n);
    return diff <= g(static_cast<double>(n)) + 1e-9;
}

inline GrowthFunction log_growth() { return {"log n", [](double x) { return std::log2(std::max(x, 1.0)); }}; }
inline GrowthFunction unit_growth() { return {"1", [](double) { return 1.0; }}; }

/// Paths whose length lies in a set, with every vertex given an estimate of n.
inline Scheme approx_n_scheme(const GrowthFunction& g, std::function<bool(std::uint64_t)> in_set, std::string set_name)
{
    auto decide = [g, in_set](const View& v) {
        if (!v.n_hat) return false;
        const auto w = approx_window(g, *v.n_hat);
        CounterDecode decode = [L = w.modulus](Cert c) -> std::optional<CounterCert> {
            if (c >= L) return std::nullopt;
            return CounterCert{0, c, L};
        };
        CounterFinal final_ok = [&](std::uint64_t, std::uint64_t c) {
            auto n = approx_pin(w, c);
            return n && in_set(*n);
        };
        return counter_decide(v, decode, final_ok);
    };
    auto compat = [](Cert a, Cert b) {
        const Cert lo = std::min(a, b), hi = std::max(a, b);
        return hi == lo + 1 || (lo == 0 && (hi + 1) % 3 == 0);
    };
    Scheme s;
    s.name = "approx-n-" + set_name;
    s.promise = Kind::Path;
    s.id_mode = IdMode::ApproxN;
    s.size_bound = "O(log g(n))";
    s.make_verifier = [=, name = s.name](unsigned k) {
        return LocalVerifier(name, k, 1, Kind::Path, decide).with_compat(compat);
    };
    s.property = [in_set](const Topology& x) {
        return x.in_class(Kind::Path) && x.n_hat().has_value() && in_set(x.size());
    };
    s.prover = [g, prop = s.property](const Topology& x) {
        require(prop(x), "prover called outside the property");
        const auto w = approx_window(g, *x.n_hat());
        return CertAssignment(bits_for(w.modulus), counter_certs(x, 0, 0, w.modulus));
    };
    return s;
}

// ---------------------------------------------------------------- equal endpoint strings with identifiers or n

inline std::size_t floor_log2(std::uint64_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n)) - 1; }

inline constexpr int empty_label = 2;
inline constexpr std::size_t id_string_cap = 24;

struct IdCert {
    unsigned counter = 0;
    bool leader = false;
    std::size_t length = 0;
    Cert bits = 0;
    std::size_t dist = 0; // 0 for unlabeled vertices, j+1 at distance j from an endpoint
};

inline Cert encode_id_cert(const IdCert& c, bool with_leader)
{
    BitWriter w;
    if (with_leader) {
        w.put(c.counter, 2);
        w.put(c.leader ? 1 : 0, 1);
    }
    w.put((Cert{1} << c.length) - 1, static_cast<unsigned>(c.length));
    w.put(0, 1);
    w.put(c.bits, static_cast<unsigned>(c.length));
    w.put(c.dist, bits_for(c.length + 1));
    return w.value;
}

inline std::optional<IdCert> decode_id_cert(Cert v, bool with_leader)
{
    BitReader r{v, 0};
    IdCert c;
    if (with_leader) {
        auto ctr = r.get(2);
        auto lead = r.get(1);
        if (!ctr || !lead || *ctr == 3) return std::nullopt;
        c.counter = static_cast<unsigned>(*ctr);
        c.leader = *lead == 1;
    }
    while (true) {
        auto bit = r.get(1);
        if (!bit) return std::nullopt;
        if (*bit == 0) break;
        if (++c.length > id_string_cap) return std::nullopt;
    }
    auto bits = r.get(static_cast<unsigned>(c.length));
    auto dist = r.get(bits_for(c.length + 1));
    if (!bits || !dist || *dist > c.length || !r.exhausted()) return std::nullopt;
    c.bits = *bits;
    c.dist = static_cast<std::size_t>(*dist);
    return c;
}

/// Label layout of the property: bits on the F vertices nearest each endpoint, empty elsewhere,
/// and the two strings read from the endpoints inwards are equal.
inline bool endpoint_strings_equal(const Topology& t, std::size_t F)
{
    if (!t.in_class(Kind::Path) || !t.labeled()) return false;
    auto order = path_order(t);
    const std::size_t n = order.size();
    if (2 * F > n) return false;
    for (std::size_t p = 0; p < n; ++p) {
        const int l = t.label(order[p]);
        const bool bit = p < F || n - 1 - p < F;
        if (bit != (l == 0 || l == 1) || (!bit && l != empty_label)) return false;
    }
    for (std::size_t j = 0; j < F; ++j)
        if (t.label(order[j]) != t.label(order[n - 1 - j])) return false;
    return true;
}

/// Labeled path with strings a (from one endpoint) and b (from the other), given as '0'/'1' text.
inline Topology strings_path(std::size_t n, const std::string& a, const std::string& b)
{
    require(a.size() == b.size() && 2 * a.size() <= n, "endpoint strings must have equal length at most n/2");
    std::vector<int> labels(n, empty_label);
    for (std::size_t j = 0; j < a.size(); ++j) {
        require((a[j] == '0' || a[j] == '1') && (b[j] == '0' || b[j] == '1'), "strings must be binary");
        labels[j] = a[j] - '0';
        labels[n - 1 - j] = b[j] - '0';
    }
    return Topology::path(n, labels, 3);
}

/// Checks shared by both modes once the string length F is settled.
inline bool id_equality_local(const View& v, const IdCert& self, bool with_leader)
{
    std::vector<IdCert> nb;
    for (auto w : v.adj[0]) {
        auto o = decode_id_cert(v.certs[w], with_leader);
        if (!o || o->length != self.length || o->bits != self.bits) return false;
        nb.push_back(*o);
    }
    const std::size_t F = self.length;
    const int l = v.label();
    if (l < 0 || l > empty_label || v.degree() > 2) return false;
    if (l == empty_label) {
        if (self.dist != 0) return false;
        if (F == 0) return true;
        if (v.degree() != 2) return false;
        for (auto& o : nb)
            if (o.dist != 0 && o.dist != F) return false;
        return true;
    }
    if (self.dist == 0) return false;
    const std::size_t j = self.dist - 1;
    if (static_cast<int>((self.bits >> j) & 1) != l) return false;
    auto outward_ok = [&](const IdCert& o) { return j + 1 < F ? o.dist == j + 2 : (o.dist == 0 || o.dist == F); };
    if (j == 0) return v.degree() == 1 && outward_ok(nb[0]);
    if (v.degree() != 2) return false;
    return (nb[0].dist == j && outward_ok(nb[1])) || (nb[1].dist == j && outward_ok(nb[0]));
}

/// Distance to the leader modulo 3: the leader sees only 1s, every other vertex one predecessor.
inline bool leader_counter_ok(const View& v, const IdCert& self)
{
    std::size_t down = 0, up = 0;
    for (auto w : v.adj[0]) {
        auto o = decode_id_cert(v.certs[w], true);
        if (!o) return false;
        if (o->counter == (self.counter + 2) % 3) ++down;
        else if (o->counter == (self.counter + 1) % 3) ++up;
        else return false;
    }
    if (self.leader) return self.counter == 0 && down == 0;
    return down == 1;
}

/// Labeled paths whose endpoint strings of length f(n) agree; vertices know n or hold ids in [1, n].
inline Scheme id_equality_scheme(IdMode mode, std::function<std::size_t(std::uint64_t)> f = floor_log2)
{
    require(mode == IdMode::ExactN || mode == IdMode::IdsInRangeN,
            "string equality needs exact n or identifiers in [1, n]");
    const bool ids = mode == IdMode::IdsInRangeN;
    auto decide = [ids, f](const View& v) {
        auto self = decode_id_cert(v.cert(), ids);
        if (!self) return false;
        if (ids) {
            auto id = v.id();
            if (!id) return false;
            const auto fid = f(*id);
            if (self->leader ? fid != self->length : fid > self->length) return false;
            if (!leader_counter_ok(v, *self)) return false;
        } else {
            if (!v.n_hat || f(*v.n_hat) != self->length) return false;
        }
        return id_equality_local(v, *self, ids);
    };
    auto compat = [ids](Cert a, Cert b) {
        auto x = decode_id_cert(a, ids), y = decode_id_cert(b, ids);
        return x && y && x->length == y->length && x->bits == y->bits;
    };
    Scheme s;
    s.name = ids ? "id-equality-ids" : "id-equality-exact";
    s.promise = Kind::Path;
    s.id_mode = mode;
    s.size_bound = "O(f(n))";
    s.make_verifier = [=, name = s.name](unsigned k) {
        return LocalVerifier(name, k, 1, Kind::Path, decide)
            .with_ids_visible(ids)
            .with_own_check([ids](Cert c) { return decode_id_cert(c, ids).has_value(); })
            .with_compat(compat);
    };
    s.property = [ids, f](const Topology& x) {
        if (!x.in_class(Kind::Path)) return false;
        const std::uint64_t n = x.size();
        if (ids) {
            if (!x.has_ids()) return false;
            for (auto id : x.ids())
                if (id > n) return false;
        } else if (x.n_hat() != n) {
            return false;
        }
        return endpoint_strings_equal(x, f(n));
    };
    s.prover = [ids, f, prop = s.property](const Topology& x) {
        require(prop(x), "prover called outside the property");
        auto order = path_order(x);
        const std::size_t n = order.size(), F = f(n);
        IdCert base;
        base.length = F;
        for (std::size_t j = 0; j < F; ++j) base.bits |= Cert(x.label(order[j])) << j;
        std::size_t leader = 0;
        if (ids)
            for (std::size_t p = 0; p < n; ++p)
                if (x.id(order[p]) > x.id(order[leader])) leader = p;
        std::vector<Cert> certs(n);
        unsigned width = 0;
        for (std::size_t p = 0; p < n; ++p) {
            IdCert c = base;
            c.dist = p < F ? p + 1 : (n - 1 - p < F ? n - p : 0);
            if (ids) {
                c.leader = p == leader;
                c.counter = static_cast<unsigned>((p > leader ? p - leader : leader - p) % 3);
            }
            certs[order[p]] = encode_id_cert(c, ids);
            width = std::max(width, bits_for(certs[order[p]] + 1));
        }
        return CertAssignment(width, std::move(certs));
    };
    return s;
}

// ---------------------------------------------------------------- catalog

struct CatalogEntry {
    Scheme scheme;
    std::string property;
    /// Natural instance for a size parameter (n for paths and cycles, d or m for caterpillars).
    std::function<Topology(std::uint64_t, std::optional<std::uint64_t>, std::uint64_t)> instance;
    std::function<std::vector<Topology>(std::uint64_t, std::size_t)> positives;
    std::function<std::vector<Topology>(std::uint64_t, std::size_t)> negatives;
};

namespace detail {

template <class Gen, class Keep>
std::vector<Topology> collect(std::size_t count, Gen&& gen, Keep&& keep)
{
    std::vector<Topology> out;
    for (std::uint64_t i = 0; out.size() < count; ++i) {
        require(i < 100000 + 100 * count, "corpus generator exhausted");
        auto t = gen(i);
        if (t && keep(*t)) out.push_back(std::move(*t));
    }
    return out;
}

inline std::string random_bits(std::size_t len, std::mt19937_64& rng)
{
    std::string s;
    for (std::size_t j = 0; j < len; ++j) s += static_cast<char>('0' + (rng() & 1));
    return s;
}

inline Topology with_random_ids(const Topology& t, std::mt19937_64& rng)
{
    std::vector<std::uint64_t> ids(t.size());
    std::iota(ids.begin(), ids.end(), std::uint64_t{1});
    std::shuffle(ids.begin(), ids.end(), rng);
    return t.with_ids(std::move(ids));
}

/// One random local edit of a caterpillar given by its leaf counts.
inline std::vector<std::size_t> mutate_profile(std::vector<std::size_t> leaves, std::mt19937_64& rng)
{
    const std::size_t j = rng() % leaves.size();
    switch (rng() % 4) {
    case 0: ++leaves[j]; break;
    case 1:
        if (leaves[j] > 0) --leaves[j];
        else leaves[j] += 2;
        break;
    case 2: leaves.insert(leaves.begin() + static_cast<std::ptrdiff_t>(j), 1 + rng() % 3); break;
    default: std::swap(leaves[j], leaves[(j + 1) % leaves.size()]); break;
    }
    return leaves;
}

} // namespace detail

inline CatalogEntry mod_catalog_entry(std::uint64_t t, std::uint64_t m, bool negate)
{
    CatalogEntry e;
    e.scheme = mod_counter_scheme(t, m, negate);
    e.property = std::string("paths with n ") + (negate ? "!=" : "=") + " " + std::to_string(t % m) + " mod " +
                 std::to_string(m);
    e.instance = [](std::uint64_t n, std::optional<std::uint64_t>, std::uint64_t) { return Topology::path(n); };
    auto prop = e.scheme.property;
    e.positives = [prop](std::uint64_t, std::size_t count) {
        return detail::collect(
            count, [](std::uint64_t i) { return std::optional(Topology::path(i + 1)); }, prop);
    };
    e.negatives = [prop](std::uint64_t, std::size_t count) {
        return detail::collect(
            count, [](std::uint64_t i) { return std::optional(Topology::path(i + 1)); },
            [&](const Topology& x) { return !prop(x); });
    };
    return e;
}

inline std::vector<CatalogEntry> scheme_catalog()
{
    std::vector<CatalogEntry> out;
    out.push_back(mod_catalog_entry(0, 3, false));
    out.push_back(mod_catalog_entry(0, 3, true));

    {
        CatalogEntry e;
        e.scheme = primorial_complement_scheme();
        e.property = "paths whose length is not a primorial";
        e.instance = [](std::uint64_t n, std::optional<std::uint64_t>, std::uint64_t) { return Topology::path(n); };
        auto prop = e.scheme.property;
        e.positives = [prop](std::uint64_t, std::size_t count) {
            return detail::collect(
                count, [](std::uint64_t i) { return std::optional(Topology::path(i + 1)); }, prop);
        };
        e.negatives = [](std::uint64_t, std::size_t count) {
            // only a handful of primorials are small enough for automaton sweeps
            std::vector<Topology> v;
            for (auto a : primorials_upto(30030)) v.push_back(Topology::path(a));
            for (std::size_t i = 0; v.size() < count; ++i) v.push_back(v[i % 6]);
            return v;
        };
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.scheme = cycle_not_pow2_scheme();
        e.property = "cycles whose length is not a power of two";
        e.instance = [](std::uint64_t n, std::optional<std::uint64_t>, std::uint64_t) { return Topology::cycle(n); };
        auto prop = e.scheme.property;
        e.positives = [prop](std::uint64_t, std::size_t count) {
            return detail::collect(
                count, [](std::uint64_t i) { return std::optional(Topology::cycle(i + 3)); }, prop);
        };
        e.negatives = [](std::uint64_t, std::size_t count) {
            std::vector<Topology> v;
            for (std::uint64_t p = 4; v.size() < 8; p *= 2) v.push_back(Topology::cycle(p));
            for (std::size_t i = 0; v.size() < count; ++i) v.push_back(v[i % 8]);
            return v;
        };
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        const auto f = half_log_growth();
        e.scheme = caterpillar_growth_scheme(f);
        e.property = "caterpillars u_1..u_d with a_i - 1 leaves on u_i";
        e.instance = [f](std::uint64_t d, std::optional<std::uint64_t>, std::uint64_t) {
            return growth_caterpillar(f, d);
        };
        e.positives = [f](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            auto ds = growth_spine_lengths(f, (count + 1) / 2);
            std::vector<Topology> v;
            for (std::size_t i = 0; v.size() < count; ++i) v.push_back(shuffled(growth_caterpillar(f, ds[i / 2]), rng));
            return v;
        };
        auto prop = e.scheme.property;
        e.negatives = [f, prop](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            auto ds = growth_spine_lengths(f, 8);
            return detail::collect(
                count,
                [&](std::uint64_t i) {
                    auto a = build_sequence_a(f, ds[i % ds.size()]).terms;
                    std::vector<std::size_t> leaves;
                    for (auto x : a) leaves.push_back(x - 1);
                    return std::optional(Topology::caterpillar(detail::mutate_profile(leaves, rng)));
                },
                [&](const Topology& x) { return !prop(x); });
        };
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        const auto f = half_log_growth();
        e.scheme = caterpillar_radius2_scheme(f);
        e.property = "caterpillars u_1..u_{b_m+1} with b_m leaves on u_1 and i-1 on u_i";
        auto bseq = [f](std::uint64_t m) { return build_sequence_b(f, m).terms[m - 1]; };
        e.instance = [bseq](std::uint64_t m, std::optional<std::uint64_t>, std::uint64_t) {
            require(m >= 2, "the radius-2 family starts at m = 2");
            return radius2_caterpillar(bseq(m), bseq(m));
        };
        e.positives = [bseq](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            std::vector<Topology> v;
            for (std::size_t i = 0; v.size() < count; ++i) {
                const std::uint64_t m = 2 + i % 6;
                v.push_back(shuffled(radius2_caterpillar(bseq(m), bseq(m)), rng));
            }
            return v;
        };
        auto prop = e.scheme.property;
        e.negatives = [bseq, prop](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            return detail::collect(
                count,
                [&](std::uint64_t i) {
                    const std::uint64_t m = 2 + i % 3;
                    std::vector<std::size_t> leaves{bseq(m)};
                    for (std::size_t j = 1; j <= bseq(m); ++j) leaves.push_back(j);
                    return std::optional(Topology::caterpillar(detail::mutate_profile(leaves, rng)));
                },
                [&](const Topology& x) { return !prop(x); });
        };
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        const auto g = log_growth();
        e.scheme = approx_n_scheme(g, [](std::uint64_t n) { return is_primorial(n); }, "primorial");
        e.property = "paths whose length is a primorial, given an estimate of n within log n";
        e.instance = [](std::uint64_t n, std::optional<std::uint64_t> n_hat, std::uint64_t) {
            return Topology::path(n).with_n_hat(n_hat.value_or(n));
        };
        e.positives = [g](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            std::vector<Topology> v;
            auto ps = primorials_upto(2310);
            for (std::size_t i = 0; v.size() < count; ++i) {
                const auto n = ps[i % ps.size()];
                const auto G = static_cast<std::int64_t>(std::floor(g(static_cast<double>(n))));
                const auto off = static_cast<std::int64_t>(rng() % (2 * G + 1)) - G;
                v.push_back(Topology::path(n).with_n_hat(static_cast<std::uint64_t>(std::max<std::int64_t>(1, n + off))));
            }
            return v;
        };
        e.negatives = [g](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            return detail::collect(
                count,
                [&](std::uint64_t i) -> std::optional<Topology> {
                    const std::uint64_t n = 2 + i % 60;
                    if (is_primorial(n)) return std::nullopt;
                    const auto G = static_cast<std::int64_t>(std::floor(g(static_cast<double>(n))));
                    const auto off = static_cast<std::int64_t>(rng() % (2 * G + 1)) - G;
                    return Topology::path(n).with_n_hat(
                        static_cast<std::uint64_t>(std::max<std::int64_t>(1, static_cast<std::int64_t>(n) + off)));
                },
                [&](const Topology& x) { return approx_promise_holds(g, x.size(), *x.n_hat()); });
        };
        out.push_back(std::move(e));
    }
    for (auto mode : {IdMode::ExactN, IdMode::IdsInRangeN}) {
        CatalogEntry e;
        const bool ids = mode == IdMode::IdsInRangeN;
        e.scheme = id_equality_scheme(mode);
        e.property = std::string("labeled paths with equal endpoint strings of length log n, ") +
                     (ids ? "identifiers in [1, n]" : "exact n known");
        auto decorate = [ids](Topology t, std::mt19937_64& rng) {
            return ids ? detail::with_random_ids(t, rng) : t.with_n_hat(t.size());
        };
        e.instance = [decorate](std::uint64_t n, std::optional<std::uint64_t>, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            auto s = detail::random_bits(floor_log2(n), rng);
            return decorate(strings_path(n, s, s), rng);
        };
        e.positives = [decorate](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            std::vector<Topology> v;
            for (std::size_t i = 0; v.size() < count; ++i) {
                const std::size_t n = 1 + i % 40;
                auto s = detail::random_bits(floor_log2(n), rng);
                v.push_back(decorate(strings_path(n, s, s), rng));
            }
            return v;
        };
        e.negatives = [decorate](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            std::vector<Topology> v;
            for (std::size_t i = 0; v.size() < count; ++i) {
                const std::size_t n = 2 + i % 11;
                const std::size_t F = floor_log2(n);
                auto a = detail::random_bits(F, rng);
                auto b = a;
                const std::size_t j = rng() % F;
                b[j] = b[j] == '0' ? '1' : '0';
                v.push_back(decorate(strings_path(n, a, b), rng));
            }
            return v;
        };
        out.push_back(std::move(e));
    }
    return out;
}

inline CatalogEntry catalog_entry(std::string_view name)
{
    if (name.starts_with("mod-") || name.starts_with("not-mod-")) {
        const bool negate = name.starts_with("not-");
        auto rest = name.substr(negate ? 8 : 4);
        auto dash = rest.find('-');
        require(dash != std::string_view::npos, "mod scheme names look like mod-<t>-<m>");
        try {
            auto t = std::stoull(std::string(rest.substr(0, dash)));
            auto m = std::stoull(std::string(rest.substr(dash + 1)));
            return mod_catalog_entry(t, m, negate);
        } catch (const std::logic_error&) {
            throw InvalidInput("mod scheme names look like mod-<t>-<m>");
        }
    }
    for (auto& e : scheme_catalog())
        if (e.scheme.name == name) return e;
    throw InvalidInput("unknown scheme: " + std::string(name));
}

} // namespace certilab
