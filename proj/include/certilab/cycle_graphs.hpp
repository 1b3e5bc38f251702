#pragma once

#include <map>
#include <numeric>

#include "path_automata.hpp"

namespace certilab {

struct Digraph {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::string> names;

    explicit Digraph(std::size_t n = 0) : out(n), names(n)
    {
        for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
    }

    std::size_t size() const { return out.size(); }
    std::uint32_t add_vertex(std::string name)
    {
        out.emplace_back();
        names.push_back(std::move(name));
        return static_cast<std::uint32_t>(out.size() - 1);
    }
    void add_edge(std::uint32_t u, std::uint32_t v)
    {
        auto& o = out[u];
        if (std::find(o.begin(), o.end(), v) == o.end()) o.push_back(v);
    }
    bool has_edge(std::uint32_t u, std::uint32_t v) const
    {
        return std::find(out[u].begin(), out[u].end(), v) != out[u].end();
    }
    std::size_t edge_count() const
    {
        std::size_t e = 0;
        for (const auto& o : out) e += o.size();
        return e;
    }
};

/// Strongly connected components (Tarjan, iterative), each sorted, in discovery order of their roots.
inline std::vector<std::vector<std::uint32_t>> strongly_connected_components(const Digraph& g)
{
    const auto n = static_cast<std::uint32_t>(g.size());
    constexpr auto none = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> index(n, none), low(n, 0), stack;
    std::vector<char> on(n, 0);
    std::vector<std::vector<std::uint32_t>> comps;
    std::uint32_t counter = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (index[s] != none) continue;
        std::vector<std::pair<std::uint32_t, std::size_t>> call{{s, 0}};
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on[s] = 1;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < g.out[v].size()) {
                auto w = g.out[v][i++];
                if (index[w] == none) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::uint32_t> comp;
                while (true) {
                    auto w = stack.back();
                    stack.pop_back();
                    on[w] = 0;
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            auto done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    std::sort(comps.begin(), comps.end());
    return comps;
}

struct SccInfo {
    std::vector<std::uint32_t> vertices;
    std::uint64_t period = 0; // 0 when the component carries no closed walk
};

/// gcd of BFS level differences over the component's internal edges.
inline std::uint64_t scc_period(const Digraph& g, const std::vector<std::uint32_t>& comp)
{
    std::vector<char> in(g.size(), 0);
    for (auto v : comp) in[v] = 1;
    std::vector<std::int64_t> level(g.size(), -1);
    std::vector<std::uint32_t> q{comp.front()};
    level[comp.front()] = 0;
    std::uint64_t d = 0;
    bool internal = false;
    for (std::size_t h = 0; h < q.size(); ++h) {
        auto u = q[h];
        for (auto w : g.out[u]) {
            if (!in[w]) continue;
            internal = true;
            if (level[w] < 0) {
                level[w] = level[u] + 1;
                q.push_back(w);
            } else {
                d = std::gcd(d, static_cast<std::uint64_t>(std::llabs(level[u] + 1 - level[w])));
            }
        }
    }
    if (!internal) return 0;
    return d;
}

/// Row-bitset reachability inside one component; exact closed-walk lengths.
class SccWalks {
public:
    SccWalks(const Digraph& g, std::vector<std::uint32_t> comp) : comp_(std::move(comp))
    {
        const auto s = comp_.size();
        words_ = (s + 63) / 64;
        std::vector<std::int64_t> pos(g.size(), -1);
        for (std::size_t i = 0; i < s; ++i) pos[comp_[i]] = static_cast<std::int64_t>(i);
        adj_.assign(s, std::vector<std::uint64_t>(words_, 0));
        for (std::size_t i = 0; i < s; ++i)
            for (auto w : g.out[comp_[i]])
                if (pos[w] >= 0) adj_[i][pos[w] / 64] |= std::uint64_t{1} << (pos[w] % 64);
        rows_.assign(s, std::vector<std::uint64_t>(words_, 0));
        for (std::size_t i = 0; i < s; ++i) rows_[i][i / 64] |= std::uint64_t{1} << (i % 64);
        lengths_.push_back(false);
    }

    std::size_t size() const { return comp_.size(); }

    /// Exact: some closed walk of length n inside the component.
    bool exact(std::size_t n)
    {
        while (lengths_.size() <= n) advance();
        return lengths_[n];
    }

    const std::vector<std::uint32_t>& vertices() const { return comp_; }

private:
    void advance()
    {
        const auto s = comp_.size();
        std::vector<std::vector<std::uint64_t>> next(s, std::vector<std::uint64_t>(words_, 0));
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t w = 0; w < words_; ++w)
                for (auto bits = rows_[i][w]; bits; bits &= bits - 1) {
                    auto j = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                    for (std::size_t x = 0; x < words_; ++x) next[i][x] |= adj_[j][x];
                }
        rows_ = std::move(next);
        bool any = false;
        for (std::size_t i = 0; i < s && !any; ++i) any = rows_[i][i / 64] >> (i % 64) & 1;
        lengths_.push_back(any);
    }

    std::vector<std::uint32_t> comp_;
    std::size_t words_ = 1;
    std::vector<std::vector<std::uint64_t>> adj_, rows_;
    std::vector<bool> lengths_;
};

/// Closed-walk spectrum of a digraph: per-component periods plus exact and asymptotic queries.
class WalkSpectrum {
public:
    explicit WalkSpectrum(const Digraph& g)
    {
        for (auto& comp : strongly_connected_components(g)) {
            auto d = scc_period(g, comp);
            sccs_.push_back({comp, d});
            if (d > 0) walks_.emplace_back(g, comp);
            else walks_.emplace_back(Digraph(0), std::vector<std::uint32_t>{});
        }
    }

    const std::vector<SccInfo>& sccs() const { return sccs_; }

    /// Beyond 2*s^2 a component realises exactly the multiples of its period.
    bool closed_walk_exists(std::uint64_t n)
    {
        require(n >= 3, "cycles shorter than 3 are outside the model");
        return any_closed_walk(n);
    }

    bool any_closed_walk(std::uint64_t n)
    {
        for (std::size_t c = 0; c < sccs_.size(); ++c) {
            const auto d = sccs_[c].period;
            if (d == 0 || n % d != 0) continue;
            const std::uint64_t s = sccs_[c].vertices.size();
            if (n >= 2 * s * s) return true;
            if (walks_[c].exact(n)) return true;
        }
        return false;
    }

    /// Exact matrix-power answer restricted to one component, ignoring the period shortcut.
    bool exact_in_scc(std::size_t scc, std::uint64_t n) { return walks_.at(scc).exact(n); }

    Json to_csv_rows() const
    {
        Json rows = Json::array();
        for (std::size_t i = 0; i < sccs_.size(); ++i)
            rows.push_back(Json::array({i, sccs_[i].vertices.size(), sccs_[i].period}));
        return rows;
    }

private:
    std::vector<SccInfo> sccs_;
    std::vector<SccWalks> walks_;
};

struct ElementaryCycles {
    std::vector<std::uint64_t> lengths; // sorted multiset
    bool partial = false;
};

/// Johnson-style enumeration of elementary cycles inside one component.
inline ElementaryCycles elementary_cycle_lengths(const Digraph& g, const std::vector<std::uint32_t>& comp,
                                                 std::size_t cap = 64, std::size_t max_cycles = 1000000)
{
    ElementaryCycles r;
    if (comp.size() > cap) {
        r.partial = true;
        return r;
    }
    const auto s = comp.size();
    std::vector<std::int64_t> pos(g.size(), -1);
    for (std::size_t i = 0; i < s; ++i) pos[comp[i]] = static_cast<std::int64_t>(i);
    std::vector<std::vector<std::size_t>> adj(s);
    for (std::size_t i = 0; i < s; ++i)
        for (auto w : g.out[comp[i]])
            if (pos[w] >= 0) adj[i].push_back(static_cast<std::size_t>(pos[w]));

    std::vector<char> blocked(s, 0);
    std::vector<std::set<std::size_t>> bset(s);
    std::vector<std::size_t> stack;
    std::size_t start = 0;
    std::function<void(std::size_t)> unblock = [&](std::size_t u) {
        blocked[u] = 0;
        auto b = std::move(bset[u]);
        bset[u].clear();
        for (auto w : b)
            if (blocked[w]) unblock(w);
    };
    std::function<bool(std::size_t)> circuit = [&](std::size_t v) -> bool {
        bool found = false;
        stack.push_back(v);
        blocked[v] = 1;
        for (auto w : adj[v]) {
            if (w < start || r.partial) continue;
            if (w == start) {
                r.lengths.push_back(stack.size());
                if (r.lengths.size() >= max_cycles) r.partial = true;
                found = true;
            } else if (!blocked[w] && circuit(w)) {
                found = true;
            }
        }
        if (found) unblock(v);
        else
            for (auto w : adj[v])
                if (w >= start) bset[w].insert(v);
        stack.pop_back();
        return found;
    };
    // all vertices >= start are strongly connected to start only within the component, and
    // cycles through start never leave it, so restricting by index is enough
    for (start = 0; start < s && !r.partial; ++start) {
        for (std::size_t i = start; i < s; ++i) {
            blocked[i] = 0;
            bset[i].clear();
        }
        circuit(start);
    }
    std::sort(r.lengths.begin(), r.lengths.end());
    return r;
}

// ---------------------------------------------------------------- certificate walk graph

struct CertWalkGraph {
    unsigned k = 0;
    Digraph graph;
    std::vector<std::pair<Cert, Cert>> pairs; // graph vertex -> certificate pair
    std::vector<std::array<Cert, 3>> triples; // accepted (a,b,c): edge (a,b)->(b,c)

    std::size_t universe() const { return std::size_t{1} << (2 * k); }

    Json to_json() const
    {
        Json j;
        j["k"] = k;
        Json e = Json::array();
        for (const auto& t : triples) e.push_back(Json::array({t[0], t[1], t[2]}));
        j["edges"] = std::move(e);
        return j;
    }
};

inline CertWalkGraph cert_walk_graph_from_triples(unsigned k, std::vector<std::array<Cert, 3>> triples)
{
    CertWalkGraph g;
    g.k = k;
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    std::map<std::pair<Cert, Cert>, std::uint32_t> id;
    auto get = [&](Cert a, Cert b) {
        auto [it, fresh] = id.emplace(std::make_pair(a, b), 0);
        if (fresh) {
            it->second = g.graph.add_vertex("(" + std::to_string(a) + "," + std::to_string(b) + ")");
            g.pairs.emplace_back(a, b);
        }
        return it->second;
    };
    for (const auto& t : triples) {
        auto u = get(t[0], t[1]);
        auto w = get(t[1], t[2]);
        g.graph.add_edge(u, w);
    }
    g.triples = std::move(triples);
    return g;
}

/// Edges (a,b)->(b,c) for every accepted degree-2 view with center b and neighbours a, c.
/// Only certificate pairs incident to some edge are materialised.
inline const CertWalkGraph& build_cert_graph(const LocalVerifier& v)
{
    require(v.radius() == 1, "certificate walk graph needs radius 1");
    require(v.promise() == Kind::Cycle, "certificate walk graph needs the cycle class");
    return v.derived<CertWalkGraph>("walk-graph", [&] {
        auto near = detail::neighbour_lists(v);
        const std::vector<int> none;
        std::vector<std::array<Cert, 3>> triples;
        for (const auto& [b, nb] : near)
            for (Cert a : nb)
                for (Cert c : nb)
                    if (a <= c && v.accepts(line_view({a, b, c}, none, 1, 1))) {
                        triples.push_back({a, b, c});
                        if (a != c) triples.push_back({c, b, a});
                    }
        return cert_walk_graph_from_triples(v.width(), std::move(triples));
    });
}

inline WalkSpectrum& cycle_spectrum(const LocalVerifier& v)
{
    std::lock_guard lock(v.derived_mutex());
    auto* slot = v.mutable_derived<std::unique_ptr<WalkSpectrum>>("spectrum");
    if (!*slot) *slot = std::make_unique<WalkSpectrum>(build_cert_graph(v).graph);
    return **slot;
}

/// Some certificate assignment makes every vertex of the n-cycle accept.
inline bool cycle_accepted(const LocalVerifier& v, std::uint64_t n)
{
    require(n >= 3, "cycles shorter than 3 are outside the model");
    auto& spec = cycle_spectrum(v);
    std::lock_guard lock(v.derived_mutex());
    return spec.closed_walk_exists(n);
}

// ---------------------------------------------------------------- numerical semigroups

inline std::vector<bool> representable_upto(const std::vector<std::uint64_t>& lengths, std::uint64_t N)
{
    require(!lengths.empty(), "length set must be non-empty");
    for (auto l : lengths) require(l >= 1, "lengths must be positive");
    std::vector<bool> ok(N + 1, false);
    ok[0] = true;
    for (std::uint64_t n = 1; n <= N; ++n)
        for (auto l : lengths)
            if (l <= n && ok[n - l]) {
                ok[n] = true;
                break;
            }
    return ok;
}

inline bool representable(const std::vector<std::uint64_t>& lengths, std::uint64_t n)
{
    return representable_upto(lengths, n)[n];
}

struct BezoutReport {
    std::uint64_t d = 0, m = 0;
    std::uint64_t threshold = 0; // least multiple of d from which every multiple is representable
    std::vector<std::uint64_t> violations;
    bool ok() const { return violations.empty(); }
};

/// Every multiple of gcd in [m^2, 2m^2] must be representable.
inline BezoutReport verify_bezout_window(const std::vector<std::uint64_t>& lengths)
{
    BezoutReport r;
    require(!lengths.empty(), "length set must be non-empty");
    r.m = *std::max_element(lengths.begin(), lengths.end());
    for (auto l : lengths) r.d = std::gcd(r.d, l);
    auto ok = representable_upto(lengths, 2 * r.m * r.m);
    for (std::uint64_t n = r.m * r.m; n <= 2 * r.m * r.m; ++n)
        if (n % r.d == 0 && !ok[n]) r.violations.push_back(n);
    std::uint64_t last_bad = 0;
    bool any_bad = false;
    for (std::uint64_t n = 0; n <= 2 * r.m * r.m; n += r.d)
        if (!ok[n]) {
            last_bad = n;
            any_bad = true;
        }
    r.threshold = any_bad ? last_bad + r.d : 0;
    return r;
}

struct RealizabilityReport {
    std::uint64_t size = 0, period = 0, from = 0, to = 0;
    std::vector<std::uint64_t> failures;
    bool ok() const { return failures.empty(); }
};

/// Exact check that every multiple of d in [2s^2, 6s^2] has a closed walk in the component.
inline RealizabilityReport walk_realizability_check(WalkSpectrum& spec, std::size_t scc)
{
    RealizabilityReport r;
    const auto& info = spec.sccs().at(scc);
    require(info.period > 0, "component carries no closed walk");
    r.size = info.vertices.size();
    r.period = info.period;
    r.from = 2 * r.size * r.size;
    r.to = r.from + 4 * r.size * r.size;
    for (std::uint64_t n = (r.from + r.period - 1) / r.period * r.period; n <= r.to; n += r.period)
        if (!spec.exact_in_scc(scc, n)) r.failures.push_back(n);
    return r;
}

/// True when seq (first vertex repeated at the end) is a closed walk of g.
inline bool is_closed_walk(const Digraph& g, const std::vector<std::uint32_t>& seq)
{
    if (seq.size() < 2 || seq.front() != seq.back()) return false;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!g.has_edge(seq[i], seq[i + 1])) return false;
    return true;
}

/// a copies of walk x followed by b copies of walk y; both must start and end at the same vertex.
inline std::vector<std::uint32_t> concat_walks(const std::vector<std::uint32_t>& x, std::uint64_t a,
                                               const std::vector<std::uint32_t>& y, std::uint64_t b)
{
    require(!x.empty() && !y.empty() && x.front() == y.front(), "walks must share their base vertex");
    std::vector<std::uint32_t> out{x.front()};
    for (std::uint64_t i = 0; i < a; ++i) out.insert(out.end(), x.begin() + 1, x.end());
    for (std::uint64_t i = 0; i < b; ++i) out.insert(out.end(), y.begin() + 1, y.end());
    return out;
}

} // namespace certilab
