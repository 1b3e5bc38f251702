#pragma once

#include <any>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <unordered_set>

#include "graph.hpp"

namespace certilab {

/// Prover output: one certificate in [0, 2^width) per vertex.
struct CertAssignment {
    unsigned width = 0;
    std::vector<Cert> certs;

    CertAssignment() = default;
    CertAssignment(unsigned w, std::vector<Cert> c) : width(w), certs(std::move(c))
    {
        require(width <= 63, "certificate width above 63 bits");
        for (auto x : certs) require(x < (Cert{1} << width), "certificate exceeds declared width");
    }
};

inline Cert cert_count(unsigned width) { return Cert{1} << width; }

/// Bits needed to write values 0..count-1.
inline unsigned bits_for(std::uint64_t count)
{
    unsigned b = 0;
    while ((std::uint64_t{1} << b) < count) ++b;
    return b;
}

/// Decision rule for a fixed certificate width and radius, promised to run on one topology class.
/// Optional hints are necessary conditions for acceptance; search procedures prune with them.
class LocalVerifier {
public:
    using Decide = std::function<bool(const View&)>;
    using OwnCheck = std::function<bool(Cert)>;
    using Compat = std::function<bool(Cert, Cert)>;
    using Domain = std::function<std::vector<Cert>()>;
    using DegreeRule = std::function<bool(Cert, std::size_t)>;

    LocalVerifier(std::string name, unsigned width, std::uint32_t radius, Kind promise, Decide decide)
        : name_(std::move(name)), width_(width), radius_(radius), promise_(promise), decide_(std::move(decide)),
          cache_(std::make_shared<Cache>())
    {
        require(width <= 63, "certificate width above 63 bits");
        require(radius >= 1, "verification radius must be at least 1");
    }

    static LocalVerifier from_table(std::string name, unsigned width, std::uint32_t radius, Kind promise,
                                    std::set<std::string> accepted)
    {
        auto table = std::make_shared<const std::set<std::string>>(std::move(accepted));
        LocalVerifier v(std::move(name), width, radius, promise,
                        [table](const View& view) { return table->count(view.encoding) > 0; });
        v.table_ = table;
        return v;
    }

    /// Constant verifier, handy as a baseline.
    static LocalVerifier constant(bool accept, unsigned width, std::uint32_t radius, Kind promise)
    {
        return LocalVerifier(accept ? "all-accept" : "all-reject", width, radius, promise,
                             [accept](const View&) { return accept; });
    }

    LocalVerifier with_own_check(OwnCheck f) const
    {
        auto v = fresh();
        v.own_ = std::move(f);
        return v;
    }
    LocalVerifier with_compat(Compat f) const
    {
        auto v = fresh();
        v.compat_ = std::move(f);
        return v;
    }
    LocalVerifier with_domain(Domain f) const
    {
        auto v = fresh();
        v.domain_ = std::move(f);
        return v;
    }
    LocalVerifier with_degree_rule(DegreeRule f) const
    {
        auto v = fresh();
        v.degree_ = std::move(f);
        return v;
    }
    LocalVerifier with_ids_visible(bool on) const
    {
        auto v = fresh();
        v.ids_visible_ = on;
        return v;
    }

    const std::string& name() const { return name_; }
    unsigned width() const { return width_; }
    std::uint32_t radius() const { return radius_; }
    Kind promise() const { return promise_; }
    bool ids_visible() const { return ids_visible_; }
    bool table_backed() const { return table_ != nullptr; }

    bool accepts(const View& v) const
    {
        const Cert lim = cert_count(width_);
        for (auto c : v.certs)
            if (c >= lim) return false;
        return decide_(v);
    }

    /// Necessary condition on a vertex's own certificate.
    bool admits(Cert c) const { return c < cert_count(width_) && (!own_ || own_(c)); }

    /// Necessary condition on a certificate held by a vertex of the given degree.
    bool admits_at(Cert c, std::size_t degree) const { return admits(c) && (!degree_ || degree_(c, degree)); }

    /// Necessary condition on the certificates of two adjacent accepting vertices.
    bool compatible(Cert a, Cert b) const { return !compat_ || compat_(a, b); }

    /// Admissible certificates in increasing order.
    std::vector<Cert> domain() const
    {
        return derived<std::vector<Cert>>("domain", [&] {
            std::vector<Cert> out;
            if (domain_) {
                for (auto c : domain_())
                    if (admits(c)) out.push_back(c);
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                return out;
            }
            require(width_ <= 26, "verifier domain too large to enumerate without a domain hint");
            for (Cert c = 0; c < cert_count(width_); ++c)
                if (admits(c)) out.push_back(c);
            return out;
        });
    }

    /// Lazily computed per-verifier artefact (automata, graphs, length tables), shared across copies.
    template <class T, class F>
    const T& derived(const std::string& key, F&& make) const
    {
        {
            std::lock_guard lock(cache_->mu);
            auto it = cache_->slots.find(key);
            if (it != cache_->slots.end()) return *std::any_cast<std::shared_ptr<T>>(it->second);
        }
        auto value = std::make_shared<T>(make());
        std::lock_guard lock(cache_->mu);
        auto [it, inserted] = cache_->slots.emplace(key, value);
        return *std::any_cast<std::shared_ptr<T>>(it->second);
    }

    template <class T>
    T* mutable_derived(const std::string& key) const
    {
        std::lock_guard lock(cache_->mu);
        auto it = cache_->slots.find(key);
        if (it == cache_->slots.end()) {
            auto value = std::make_shared<T>();
            it = cache_->slots.emplace(key, value).first;
        }
        return std::any_cast<std::shared_ptr<T>>(it->second).get();
    }

    std::mutex& derived_mutex() const { return cache_->work_mu; }

    const std::set<std::string>* table() const { return table_.get(); }

private:
    struct Cache {
        std::mutex mu;
        std::mutex work_mu;
        std::map<std::string, std::any> slots;
    };

    LocalVerifier fresh() const
    {
        LocalVerifier v = *this;
        v.cache_ = std::make_shared<Cache>();
        return v;
    }

    std::string name_;
    unsigned width_;
    std::uint32_t radius_;
    Kind promise_;
    Decide decide_;
    OwnCheck own_;
    Compat compat_;
    Domain domain_;
    DegreeRule degree_;
    bool ids_visible_ = false;
    std::shared_ptr<const std::set<std::string>> table_;
    std::shared_ptr<Cache> cache_;
};

enum class IdMode { Anonymous, IdsInRangeN, ApproxN, ExactN };

inline std::string_view to_string(IdMode m)
{
    switch (m) {
    case IdMode::Anonymous: return "anonymous";
    case IdMode::IdsInRangeN: return "idsInRangeN";
    case IdMode::ApproxN: return "approxN";
    case IdMode::ExactN: return "exactN";
    }
    return "?";
}

/// Prover plus verifier family; the property oracle is ground truth for tests only.
struct Scheme {
    std::string name;
    Kind promise = Kind::Path;
    std::uint32_t radius = 1;
    IdMode id_mode = IdMode::Anonymous;
    std::string size_bound;
    std::function<LocalVerifier(unsigned)> make_verifier;
    std::function<CertAssignment(const Topology&)> prover;
    std::function<bool(const Topology&)> property;

    const LocalVerifier& verifier(unsigned k) const
    {
        std::lock_guard lock(cache_->mu);
        auto it = cache_->family.find(k);
        if (it == cache_->family.end()) it = cache_->family.emplace(k, make_verifier(k)).first;
        return it->second;
    }

private:
    struct FamilyCache {
        std::mutex mu;
        std::map<unsigned, LocalVerifier> family;
    };
    std::shared_ptr<FamilyCache> cache_ = std::make_shared<FamilyCache>();
};

struct VerificationResult {
    bool globally_accepted = true;
    std::vector<Vertex> rejecting;
};

inline void check_run_inputs(const Topology& t, const CertAssignment& c, const LocalVerifier& v)
{
    require(c.width == v.width(), "certificate width does not match verifier width");
    require(c.certs.size() == t.size(), "assignment does not cover every vertex");
    require(t.in_class(v.promise()), "topology outside the verifier's class promise");
}

inline bool decide_at(const Topology& t, const std::vector<Cert>& certs, const LocalVerifier& v, Vertex x)
{
    return v.accepts(view_at(t, x, v.radius(), certs, v.ids_visible()));
}

inline VerificationResult run_verification(const Topology& t, const CertAssignment& c, const LocalVerifier& v)
{
    check_run_inputs(t, c, v);
    VerificationResult r;
    const bool compact = v.radius() == 1 && !t.labeled() && !t.has_ids() && !t.n_hat() && t.max_degree() <= 2;
    if (!compact) {
        for (Vertex x = 0; x < t.size(); ++x)
            if (!decide_at(t, c.certs, v, x)) r.rejecting.push_back(x);
        r.globally_accepted = r.rejecting.empty();
        return r;
    }
    // radius-1 views on max-degree-2 anonymous instances are determined by
    // (degree, own certificate, sorted neighbour certificates)
    struct Slot {
        Cert self = 0, lo = 0, hi = 0;
        std::uint64_t stamp = 0;
        std::uint8_t deg = 0, state = 0; // state: 1 reject, 2 accept
    };
    constexpr std::size_t slots = 1u << 14;
    thread_local std::vector<Slot> memo(slots);
    thread_local std::uint64_t generation = 0;
    const std::uint64_t stamp = ++generation;
    for (Vertex x = 0; x < t.size(); ++x) {
        auto nb = t.neighbors(x);
        Cert lo = 0, hi = 0;
        if (nb.size() >= 1) lo = hi = c.certs[nb[0]];
        if (nb.size() == 2) {
            hi = c.certs[nb[1]];
            if (hi < lo) std::swap(lo, hi);
        }
        const Cert self = c.certs[x];
        const auto deg = static_cast<std::uint8_t>(nb.size());
        std::uint64_t h = self * 0x9E3779B97F4A7C15ULL ^ (lo + 0x632BE59BD9B4E019ULL) * 0xC2B2AE3D27D4EB4FULL ^
                          (hi * 0x165667B19E3779F9ULL) ^ deg;
        h ^= h >> 29;
        auto& s = memo[h & (slots - 1)];
        if (s.stamp != stamp || s.self != self || s.lo != lo || s.hi != hi || s.deg != deg) {
            s = Slot{self, lo, hi, stamp, deg, static_cast<std::uint8_t>(decide_at(t, c.certs, v, x) ? 2 : 1)};
        }
        if (s.state == 1) r.rejecting.push_back(x);
    }
    r.globally_accepted = r.rejecting.empty();
    return r;
}

/// Exact search for an all-accepting assignment by ordered backtracking.
/// With memo on, failed partial assignments are recorded by the certificates of
/// the still-relevant prefix vertices, which makes path-like instances polynomial.
inline std::optional<std::vector<Cert>> backtrack_assignment(const Topology& t, const LocalVerifier& v,
                                                             bool memo = true)
{
    require(t.in_class(v.promise()), "topology outside the verifier's class promise");
    const std::size_t n = t.size();
    const auto r = v.radius();
    auto d0 = t.distances_from(0);
    Vertex start = static_cast<Vertex>(std::max_element(d0.begin(), d0.end()) - d0.begin());

    std::vector<Vertex> order{start};
    std::vector<std::size_t> pos(n, n);
    pos[start] = 0;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (Vertex w : t.neighbors(order[h]))
            if (pos[w] == n) {
                pos[w] = order.size();
                order.push_back(w);
            }

    std::vector<std::vector<Vertex>> checks_at(n);
    std::vector<std::size_t> last_needed(n, 0);
    for (Vertex x = 0; x < n; ++x) {
        auto d = t.distances_from(x);
        std::size_t cp = 0;
        for (Vertex y = 0; y < n; ++y)
            if (d[y] <= r) cp = std::max(cp, pos[y]);
        checks_at[cp].push_back(x);
        for (Vertex y = 0; y < n; ++y)
            if (d[y] <= r) last_needed[y] = std::max(last_needed[y], cp);
    }
    for (Vertex y = 0; y < n; ++y)
        for (Vertex w : t.neighbors(y)) last_needed[y] = std::max(last_needed[y], pos[w]);

    std::vector<std::vector<Vertex>> frontier(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q <= p; ++q)
            if (last_needed[order[q]] > p) frontier[p].push_back(order[q]);

    const auto dom = v.domain();
    std::vector<Cert> certs(n, 0);
    std::vector<std::unordered_set<std::string>> failed(memo ? n : 0);

    auto key_of = [&](std::size_t p) {
        std::string k;
        k.reserve(frontier[p].size() * sizeof(Cert));
        for (Vertex y : frontier[p]) k.append(reinterpret_cast<const char*>(&certs[y]), sizeof(Cert));
        return k;
    };

    std::function<bool(std::size_t)> go = [&](std::size_t p) -> bool {
        if (p == n) return true;
        const Vertex x = order[p];
        for (Cert c : dom) {
            if (!v.admits_at(c, t.degree(x))) continue;
            certs[x] = c;
            bool ok = true;
            for (Vertex w : t.neighbors(x))
                if (pos[w] < p && !v.compatible(c, certs[w])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (Vertex y : checks_at[p])
                if (!decide_at(t, certs, v, y)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            if (memo && p + 1 < n) {
                auto k = key_of(p);
                if (failed[p].count(k)) continue;
                if (go(p + 1)) return true;
                failed[p].insert(std::move(k));
                continue;
            }
            if (go(p + 1)) return true;
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    return certs;
}

/// Literal enumeration of every assignment in C_k^n; only for tiny instances.
inline bool brute_force_exists(const Topology& t, const LocalVerifier& v)
{
    const std::size_t n = t.size();
    const Cert base = cert_count(v.width());
    double total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= static_cast<double>(base);
    require(total <= 1 << 22, "brute force limited to 2^22 assignments");
    std::vector<Cert> certs(n, 0);
    while (true) {
        bool all = true;
        for (Vertex x = 0; x < n && all; ++x) all = decide_at(t, certs, v, x);
        if (all) return true;
        std::size_t i = 0;
        while (i < n && ++certs[i] == base) certs[i++] = 0;
        if (i == n) return false;
    }
}

/// Accepted views of a radius-1 verifier on unlabeled paths or cycles, by enumeration.
inline std::vector<std::string> enumerate_accepted_views(const LocalVerifier& v)
{
    require(v.radius() == 1, "view enumeration implemented for radius 1");
    require(v.promise() == Kind::Path || v.promise() == Kind::Cycle,
            "view enumeration implemented for path and cycle classes");
    std::set<std::string> out;
    auto dom = v.domain();
    auto emit = [&](std::vector<Cert> line, Vertex center) {
        auto t = Topology::path(line.size());
        auto view = view_at(t, center, 1, line);
        if (v.accepts(view)) out.insert(view.encoding);
    };
    if (v.promise() == Kind::Path) {
        for (Cert a : dom) emit({a}, 0);
        for (Cert a : dom)
            for (Cert b : dom) emit({a, b}, 0);
    }
    for (Cert a : dom)
        for (Cert b : dom)
            for (Cert c : dom)
                if (a <= c) emit({a, b, c}, 1);
    return {out.begin(), out.end()};
}

inline Json verifier_to_json(const LocalVerifier& v)
{
    Json j;
    j["name"] = v.name();
    j["width"] = v.width();
    j["radius"] = v.radius();
    j["class"] = std::string(to_string(v.promise()));
    std::vector<std::string> acc;
    if (v.table()) {
        acc.assign(v.table()->begin(), v.table()->end());
    } else {
        acc = enumerate_accepted_views(v);
    }
    j["accepted"] = acc;
    return j;
}

inline LocalVerifier verifier_from_json(const Json& j)
{
    try {
        auto acc = j.at("accepted").get<std::vector<std::string>>();
        return LocalVerifier::from_table(j.value("name", std::string("table")), j.at("width").get<unsigned>(),
                                         j.at("radius").get<std::uint32_t>(),
                                         kind_from_string(j.at("class").get<std::string>()),
                                         std::set<std::string>(acc.begin(), acc.end()));
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput(std::string("malformed verifier JSON: ") + ex.what());
    }
}

/// Isomorphism-invariant pseudo-random verifier: decisions hash the canonical view encoding.
inline LocalVerifier random_verifier(std::uint64_t seed, unsigned width, std::uint32_t radius, Kind promise,
                                     double accept_rate = 0.5)
{
    auto threshold = static_cast<std::uint64_t>(accept_rate * 18446744073709551615.0);
    return LocalVerifier("random-" + std::to_string(seed), width, radius, promise,
                         [seed, threshold](const View& v) {
                             std::uint64_t h = 1469598103934665603ULL ^ seed;
                             for (unsigned char ch : v.encoding) {
                                 h ^= ch;
                                 h *= 1099511628211ULL;
                             }
                             h ^= h >> 33;
                             h *= 0xff51afd7ed558ccdULL;
                             h ^= h >> 33;
                             return h <= threshold;
                         });
}

} // namespace certilab
