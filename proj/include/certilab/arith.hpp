#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace certilab {

using BigInt = boost::multiprecision::cpp_int;

inline std::vector<std::uint64_t> sieve_primes(std::uint64_t limit)
{
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

inline constexpr std::uint64_t prime_table_limit = std::uint64_t{1} << 22;

/// Primes below 2^22, built once.
inline const std::vector<std::uint64_t>& prime_table(std::size_t count)
{
    static const std::vector<std::uint64_t> table = sieve_primes(prime_table_limit);
    if (count > table.size()) throw CapacityExceeded("prime index beyond the precomputed table");
    return table;
}

/// p_1 = 2, p_2 = 3, ...
inline std::uint64_t nth_prime(std::size_t k)
{
    require(k >= 1, "prime index starts at 1");
    return prime_table(k)[k - 1];
}

inline BigInt primorial(std::size_t k)
{
    require(k >= 1, "primorial index starts at 1");
    BigInt a = 1;
    for (std::size_t i = 1; i <= k; ++i) a *= nth_prime(i);
    return a;
}

/// a_k when it fits in 64 bits.
inline std::optional<std::uint64_t> primorial_u64(std::size_t k)
{
    BigInt a = primorial(k);
    if (a > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return static_cast<std::uint64_t>(a);
}

inline std::vector<std::uint64_t> primorials_upto(std::uint64_t limit)
{
    std::vector<std::uint64_t> out;
    BigInt a = 1;
    for (std::size_t k = 1;; ++k) {
        a *= nth_prime(k);
        if (a > limit) break;
        out.push_back(static_cast<std::uint64_t>(a));
    }
    return out;
}

inline bool is_primorial(std::uint64_t n)
{
    std::uint64_t a = 1;
    for (std::size_t k = 1; a < n; ++k) {
        auto p = nth_prime(k);
        if (n % p != 0 || (n / a) % p != 0) return false;
        a *= p;
    }
    return a == n && n >= 2;
}

inline std::uint64_t primorial_mod(std::size_t k, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    for (std::size_t i = 1; i <= k; ++i) r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * (nth_prime(i) % m)) % m);
    return r;
}

/// Least k with p_k | n and p_{k+1} not dividing n.
inline std::size_t prime_gap_witness(std::uint64_t n)
{
    require(n >= 2 && n % 2 == 0, "prime gap witness needs an even n >= 2");
    for (std::size_t k = 1;; ++k)
        if (n % nth_prime(k) == 0 && n % nth_prime(k + 1) != 0) return k;
}

inline unsigned ceil_log2(std::uint64_t t)
{
    unsigned b = 0;
    while (b < 64 && (std::uint64_t{1} << b) < t) ++b;
    return b;
}

/// Least m >= 2 with s and t in different classes mod m.
inline std::uint64_t witness_modulus(std::uint64_t s, std::uint64_t t)
{
    require(1 <= s && s < t, "witness modulus needs 1 <= s < t");
    for (std::uint64_t m = 2;; ++m)
        if (s % m != t % m) return m;
}

struct PrimorialClassification {
    bool in_s = false;
    int condition = 0;      // 1, 2 or 3 when in_s is false
    std::uint64_t first = 0;  // l for condition 2, k for condition 3
    std::uint64_t second = 0; // k for condition 2, m for condition 3

    friend bool operator==(const PrimorialClassification&, const PrimorialClassification&) = default;
};

/// Membership in {a_k}, or the least satisfied witness condition with least parameters.
/// 1: n odd. 2: p_l does not divide n and p_k divides n for some l < k <= log n.
/// 3: p_k | n, p_{k+1} does not divide n and n differs from a_k mod m.
inline PrimorialClassification classify_primorial(std::uint64_t n)
{
    require(n >= 1, "classification needs n >= 1");
    if (is_primorial(n)) return {true, 0, 0, 0};
    if (n % 2 == 1) return {false, 1, 0, 0};
    std::size_t l = 1;
    while (n % nth_prime(l) == 0) ++l;
    const std::size_t k_max = static_cast<std::size_t>(std::bit_width(n)) - 1;
    for (std::size_t k = l + 1; k <= k_max; ++k)
        if (n % nth_prime(k) == 0) return {false, 2, l, k};
    const std::size_t k = prime_gap_witness(n);
    for (std::uint64_t m = 2;; ++m)
        if (n % m != primorial_mod(k, m)) return {false, 3, k, m};
}

/// Landau's function: maximal lcm over the partitions of n.
inline BigInt landau(std::size_t n)
{
    require(n >= 1 && n <= 200, "landau implemented for 1 <= n <= 200");
    std::vector<BigInt> best(n + 1, BigInt(1));
    for (auto p : sieve_primes(n)) {
        auto next = best;
        for (std::size_t j = 0; j <= n; ++j)
            for (std::uint64_t q = p; q <= j; q *= p) {
                BigInt cand = best[j - q] * q;
                if (cand > next[j]) next[j] = cand;
            }
        best = std::move(next);
    }
    return best[n];
}

/// Nondecreasing growth function used by the caterpillar constructions.
struct GrowthFunction {
    std::string description;
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }
};

inline GrowthFunction half_log_growth()
{
    return {"(log n)/2 + 1/2", [](double x) { return std::log2(x) / 2 + 0.5; }};
}

inline GrowthFunction quarter_log_growth()
{
    return {"(log n)/4 + 3/4", [](double x) { return std::log2(x) / 4 + 0.75; }};
}

/// g(n) = (f(n) - f(2))/2 + 1
inline GrowthFunction normalize_growth(const GrowthFunction& f)
{
    return {"(" + f.description + " - f(2))/2 + 1", [f](double x) { return (f(x) - f(2)) / 2 + 1; }};
}

inline void validate_growth(const GrowthFunction& f)
{
    constexpr double eps = 1e-9;
    require(std::abs(f(2) - 1) <= eps, "growth function must satisfy f(2) = 1");
    std::vector<double> grid;
    for (int i = 1; i <= 256; ++i) grid.push_back(i);
    for (double x = 256; x < 1e18; x *= 1.25) grid.push_back(std::floor(x));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double s = grid[i - 1], t = grid[i];
        double ds = f(s), dt = f(t);
        require(dt + eps >= ds, "growth function must be nondecreasing");
        require(dt - ds <= (std::log2(t) - std::log2(s)) / 2 + eps, "growth function grows faster than (log t - log s)/2");
    }
}

struct GrowthSequence {
    char kind = 'A';
    std::vector<std::uint64_t> terms; // terms[0] is the first term
    std::string source;
};

/// a_1 = 2; a_d is the least positive integer with log d <= f(a_1 + ... + a_d).
inline GrowthSequence build_sequence_a(const GrowthFunction& f, std::size_t count)
{
    validate_growth(f);
    constexpr double eps = 1e-9;
    GrowthSequence s{'A', {}, f.description};
    if (count == 0) return s;
    s.terms.push_back(2);
    std::uint64_t prefix = 2;
    for (std::size_t d = 2; d <= count; ++d) {
        const double target = std::log2(static_cast<double>(d));
        auto ok = [&](std::uint64_t a) { return target <= f(static_cast<double>(prefix + a)) + eps; };
        std::uint64_t hi = 1;
        while (!ok(hi)) {
            if (hi > (std::uint64_t{1} << 61)) throw CapacityExceeded("sequence term exceeds 2^62");
            hi *= 2;
        }
        std::uint64_t lo = hi / 2 + 1;
        if (hi == 1) lo = 1;
        while (lo < hi) {
            auto mid = lo + (hi - lo) / 2;
            if (ok(mid)) hi = mid;
            else lo = mid + 1;
        }
        s.terms.push_back(hi);
        prefix += hi;
    }
    return s;
}

/// b_m = a_1 + ... + a_m - 2
inline GrowthSequence build_sequence_b(const GrowthFunction& f, std::size_t count)
{
    auto a = build_sequence_a(f, count);
    GrowthSequence b{'B', {}, f.description};
    std::uint64_t prefix = 0;
    for (auto x : a.terms) {
        prefix += x;
        b.terms.push_back(prefix - 2);
    }
    return b;
}

} // namespace certilab
