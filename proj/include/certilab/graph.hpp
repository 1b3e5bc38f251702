#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace certilab {

using Cert = std::uint64_t;
using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;
using Json = nlohmann::ordered_json;

enum class Kind { Path, Cycle, Tree, Caterpillar };

inline std::string_view to_string(Kind k)
{
    switch (k) {
    case Kind::Path: return "path";
    case Kind::Cycle: return "cycle";
    case Kind::Tree: return "tree";
    case Kind::Caterpillar: return "caterpillar";
    }
    return "?";
}

inline Kind kind_from_string(std::string_view s)
{
    if (s == "path") return Kind::Path;
    if (s == "cycle") return Kind::Cycle;
    if (s == "tree") return Kind::Tree;
    if (s == "caterpillar") return Kind::Caterpillar;
    throw InvalidInput("unknown topology kind: " + std::string(s));
}

/// Immutable instance: one of the four families, with optional labels, identifiers
/// and a globally known size estimate.
class Topology {
public:
    Topology() = default;

    static Topology path(std::size_t n)
    {
        require(n >= 1, "path needs at least one vertex");
        return Topology(Kind::Path, n);
    }

    static Topology path(std::size_t n, std::vector<int> labels, int alphabet)
    {
        return path(n).with_labels(std::move(labels), alphabet);
    }

    static Topology cycle(std::size_t n)
    {
        require(n >= 3, "cycle needs at least three vertices");
        return Topology(Kind::Cycle, n);
    }

    /// Spine vertices come first (0..L-1), then the leaves of spine vertex 0, 1, ...
    static Topology caterpillar(const std::vector<std::size_t>& leaf_counts)
    {
        require(!leaf_counts.empty(), "caterpillar needs a non-empty spine");
        const std::size_t spine = leaf_counts.size();
        std::size_t n = spine;
        for (auto c : leaf_counts) n += c;
        std::vector<Edge> e;
        e.reserve(n);
        for (Vertex i = 0; i + 1 < spine; ++i) e.emplace_back(i, i + 1);
        Vertex next = static_cast<Vertex>(spine);
        for (Vertex i = 0; i < spine; ++i)
            for (std::size_t j = 0; j < leaf_counts[i]; ++j) e.emplace_back(i, next++);
        return Topology(Kind::Caterpillar, n, std::move(e));
    }

    static Topology tree(const std::vector<Edge>& edges)
    {
        std::size_t n = 1;
        for (auto [u, v] : edges) n = std::max<std::size_t>(n, std::max(u, v) + 1);
        return Topology(Kind::Tree, n, edges);
    }

    static Topology from_edges(Kind kind, std::size_t n, std::vector<Edge> edges)
    {
        return Topology(kind, n, std::move(edges));
    }

    Kind kind() const { return kind_; }
    std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::span<const Vertex> neighbors(Vertex v) const
    {
        return {nbrs_.data() + offsets_[v], nbrs_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    std::size_t max_degree() const
    {
        std::size_t d = 0;
        for (Vertex v = 0; v < size(); ++v) d = std::max(d, degree(v));
        return d;
    }
    const std::vector<Edge>& edges() const { return edges_; }

    bool labeled() const { return !labels_.empty(); }
    int label(Vertex v) const { return labels_.empty() ? -1 : labels_[v]; }
    const std::vector<int>& labels() const { return labels_; }
    int alphabet() const { return alphabet_; }

    bool has_ids() const { return !ids_.empty(); }
    std::uint64_t id(Vertex v) const { return ids_[v]; }
    const std::vector<std::uint64_t>& ids() const { return ids_; }

    std::optional<std::uint64_t> n_hat() const { return n_hat_; }

    Topology with_labels(std::vector<int> labels, int alphabet) const
    {
        require(labels.size() == size(), "label sequence length must equal n");
        require(alphabet >= 1, "alphabet must be non-empty");
        for (int l : labels) require(l >= 0 && l < alphabet, "label outside declared alphabet");
        Topology t = *this;
        t.labels_ = std::move(labels);
        t.alphabet_ = alphabet;
        return t;
    }

    Topology with_ids(std::vector<std::uint64_t> ids) const
    {
        require(ids.size() == size(), "identifier sequence length must equal n");
        auto sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                "identifiers must be pairwise distinct");
        for (auto x : ids) require(x >= 1, "identifiers must be positive");
        Topology t = *this;
        t.ids_ = std::move(ids);
        return t;
    }

    Topology with_n_hat(std::uint64_t n_hat) const
    {
        Topology t = *this;
        t.n_hat_ = n_hat;
        return t;
    }

    /// Same instance with vertex v renamed perm[v].
    Topology permuted(const std::vector<Vertex>& perm) const
    {
        require(perm.size() == size(), "permutation size mismatch");
        std::vector<Edge> e;
        for (auto [u, v] : edges_) e.emplace_back(perm[u], perm[v]);
        Topology t(kind_, size(), std::move(e));
        if (labeled()) {
            std::vector<int> l(size());
            for (Vertex v = 0; v < size(); ++v) l[perm[v]] = labels_[v];
            t.labels_ = std::move(l);
            t.alphabet_ = alphabet_;
        }
        if (has_ids()) {
            std::vector<std::uint64_t> x(size());
            for (Vertex v = 0; v < size(); ++v) x[perm[v]] = ids_[v];
            t.ids_ = std::move(x);
        }
        t.n_hat_ = n_hat_;
        return t;
    }

    std::vector<std::uint32_t> distances_from(Vertex s) const
    {
        constexpr auto inf = static_cast<std::uint32_t>(-1);
        std::vector<std::uint32_t> d(size(), inf);
        std::vector<Vertex> q{s};
        d[s] = 0;
        for (std::size_t h = 0; h < q.size(); ++h)
            for (Vertex w : neighbors(q[h]))
                if (d[w] == inf) {
                    d[w] = d[q[h]] + 1;
                    q.push_back(w);
                }
        return d;
    }

    std::size_t diameter() const
    {
        if (kind_ == Kind::Cycle) return size() / 2;
        // double sweep is exact on trees
        auto d0 = distances_from(0);
        Vertex far = static_cast<Vertex>(std::max_element(d0.begin(), d0.end()) - d0.begin());
        auto d1 = distances_from(far);
        return *std::max_element(d1.begin(), d1.end());
    }

    bool is_tree() const { return edges_.size() + 1 == size(); }

    bool in_class(Kind k) const { return (k == kind_ && size() > 0) || shape_in_class(k); }

    bool shape_in_class(Kind k) const
    {
        switch (k) {
        case Kind::Cycle:
            if (size() < 3 || edges_.size() != size()) return false;
            for (Vertex v = 0; v < size(); ++v)
                if (degree(v) != 2) return false;
            return true;
        case Kind::Tree: return is_tree();
        case Kind::Path:
            if (!is_tree()) return false;
            return max_degree() <= 2;
        case Kind::Caterpillar: {
            if (!is_tree()) return false;
            // the non-leaf vertices must induce a path
            std::size_t inner = 0, inner_edges = 0;
            for (Vertex v = 0; v < size(); ++v) {
                if (degree(v) < 2) continue;
                ++inner;
                std::size_t d = 0;
                for (Vertex w : neighbors(v))
                    if (degree(w) >= 2) ++d;
                if (d > 2) return false;
                inner_edges += d;
            }
            return inner == 0 || inner_edges / 2 + 1 == inner;
        }
        }
        return false;
    }

    /// Vertices of degree >= 2 in path order (empty for n <= 2).
    std::vector<Vertex> central_path() const
    {
        require(in_class(Kind::Caterpillar), "central path requires a caterpillar");
        std::vector<Vertex> inner;
        for (Vertex v = 0; v < size(); ++v)
            if (degree(v) >= 2) inner.push_back(v);
        if (inner.empty()) return {};
        auto inner_deg = [&](Vertex v) {
            std::size_t d = 0;
            for (Vertex w : neighbors(v))
                if (degree(w) >= 2) ++d;
            return d;
        };
        Vertex start = inner.front();
        for (Vertex v : inner)
            if (inner_deg(v) <= 1) {
                start = v;
                break;
            }
        std::vector<Vertex> out{start};
        Vertex prev = start, cur = start;
        while (out.size() < inner.size()) {
            for (Vertex w : neighbors(cur))
                if (degree(w) >= 2 && w != prev) {
                    prev = cur;
                    cur = w;
                    break;
                }
            out.push_back(cur);
        }
        return out;
    }

    std::size_t leaf_neighbors(Vertex v) const
    {
        std::size_t c = 0;
        for (Vertex w : neighbors(v))
            if (degree(w) == 1) ++c;
        return c;
    }

    std::vector<std::size_t> leaf_profile() const
    {
        std::vector<std::size_t> out;
        for (Vertex v : central_path()) out.push_back(leaf_neighbors(v));
        return out;
    }

    Json to_json() const
    {
        Json j;
        j["kind"] = std::string(to_string(kind_));
        j["n"] = size();
        Json e = Json::array();
        for (auto [u, v] : edges_) e.push_back(Json::array({u, v}));
        j["edges"] = std::move(e);
        if (labeled()) {
            j["labels"] = labels_;
            j["alphabet"] = alphabet_;
        }
        if (has_ids()) j["ids"] = ids_;
        if (n_hat_) j["n_hat"] = *n_hat_;
        return j;
    }

    static Topology from_json(const Json& j)
    {
        try {
            Kind k = kind_from_string(j.at("kind").get<std::string>());
            auto n = j.at("n").get<std::size_t>();
            std::vector<Edge> e;
            for (const auto& p : j.at("edges")) e.emplace_back(p.at(0).get<Vertex>(), p.at(1).get<Vertex>());
            Topology t(k, n, std::move(e));
            if (j.contains("labels")) {
                auto l = j.at("labels").get<std::vector<int>>();
                int sigma = j.contains("alphabet") ? j.at("alphabet").get<int>()
                                                   : (l.empty() ? 1 : *std::max_element(l.begin(), l.end()) + 1);
                t = t.with_labels(std::move(l), sigma);
            }
            if (j.contains("ids")) t = t.with_ids(j.at("ids").get<std::vector<std::uint64_t>>());
            if (j.contains("n_hat")) t = t.with_n_hat(j.at("n_hat").get<std::uint64_t>());
            return t;
        } catch (const nlohmann::json::exception& ex) {
            throw InvalidInput(std::string("malformed topology JSON: ") + ex.what());
        }
    }

    friend bool operator==(const Topology& a, const Topology& b)
    {
        return a.kind_ == b.kind_ && a.size() == b.size() && a.edges_ == b.edges_ && a.labels_ == b.labels_ &&
               a.alphabet_ == b.alphabet_ && a.ids_ == b.ids_ && a.n_hat_ == b.n_hat_;
    }

private:
    Topology(Kind kind, std::size_t n, std::vector<Edge> edges) : kind_(kind)
    {
        require(n >= 1, "topology needs at least one vertex");
        for (auto& [u, v] : edges) {
            require(u < n && v < n, "edge endpoint out of range");
            require(u != v, "self-loops are not allowed");
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(), "parallel edges are not allowed");
        edges_ = std::move(edges);

        std::vector<std::size_t> deg(n, 0);
        for (auto [u, v] : edges_) ++deg[u], ++deg[v];
        offsets_.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
        nbrs_.resize(offsets_[n]);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (auto [u, v] : edges_) {
            nbrs_[fill[u]++] = v;
            nbrs_[fill[v]++] = u;
        }

        auto d = distances_from(0);
        for (auto x : d) require(x != static_cast<std::uint32_t>(-1), "topology must be connected");
        require(shape_in_class(kind), std::string("edge set does not form a ") + std::string(to_string(kind)));
    }

    /// Path or cycle on 0..n-1 in index order, built without validation.
    Topology(Kind kind, std::size_t n) : kind_(kind)
    {
        const bool cyc = kind == Kind::Cycle;
        edges_.reserve(n);
        for (Vertex i = 0; i + 1 < n; ++i) edges_.emplace_back(i, i + 1);
        if (cyc) edges_.emplace_back(0, static_cast<Vertex>(n - 1));
        std::sort(edges_.begin(), edges_.end());
        offsets_.resize(n + 1);
        nbrs_.reserve(2 * n);
        for (Vertex v = 0; v < n; ++v) {
            offsets_[v] = nbrs_.size();
            if (cyc && v == 0) nbrs_.push_back(1), nbrs_.push_back(static_cast<Vertex>(n - 1));
            else if (cyc && v + 1 == n) nbrs_.push_back(0), nbrs_.push_back(v - 1);
            else {
                if (v > 0) nbrs_.push_back(v - 1);
                if (v + 1 < n) nbrs_.push_back(v + 1);
            }
        }
        offsets_[n] = nbrs_.size();
    }

    Kind kind_ = Kind::Path;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> nbrs_;
    std::vector<int> labels_;
    int alphabet_ = 0;
    std::vector<std::uint64_t> ids_;
    std::optional<std::uint64_t> n_hat_;
};

/// Radius-r neighbourhood of a vertex, canonically ordered; local index 0 is the center.
struct View {
    std::uint32_t radius = 1;
    bool cyclic = false;
    std::vector<Cert> certs;
    std::vector<std::uint32_t> dist;
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<int> labels;                       // empty when unlabeled
    std::vector<std::optional<std::uint64_t>> ids; // empty when the instance has no ids
    std::optional<std::uint64_t> n_hat;
    std::string encoding;

    std::size_t size() const { return certs.size(); }
    std::size_t edge_count() const
    {
        std::size_t s = 0;
        for (const auto& a : adj) s += a.size();
        return s / 2;
    }
    std::size_t degree(std::uint32_t i = 0) const { return adj[i].size(); }
    Cert cert(std::uint32_t i = 0) const { return certs[i]; }
    int label(std::uint32_t i = 0) const { return labels.empty() ? -1 : labels[i]; }
    std::optional<std::uint64_t> id(std::uint32_t i = 0) const
    {
        return ids.empty() ? std::nullopt : ids[i];
    }
    std::vector<Cert> neighbor_certs(std::uint32_t i = 0) const
    {
        std::vector<Cert> out;
        for (auto w : adj[i]) out.push_back(certs[w]);
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

inline std::string view_tag(const View& v, std::uint32_t i)
{
    std::string s = std::to_string(v.certs[i]);
    if (!v.labels.empty()) s += ":" + std::to_string(v.labels[i]);
    if (!v.ids.empty() && v.ids[i]) s += "#" + std::to_string(*v.ids[i]);
    return s;
}

/// Reorders a raw view (center at 0) canonically and fills its encoding.
inline void canonicalize(View& raw)
{
    const auto n = static_cast<std::uint32_t>(raw.size());
    std::vector<std::uint32_t> order;
    std::string enc;
    if (raw.edge_count() >= n && n >= 3) {
        // whole cycle is visible: read it from the center in the smaller direction
        raw.cyclic = true;
        auto walk = [&](std::uint32_t first) {
            std::vector<std::uint32_t> seq{0};
            std::uint32_t prev = 0, cur = first;
            while (cur != 0) {
                seq.push_back(cur);
                std::uint32_t nxt = raw.adj[cur][0] == prev ? raw.adj[cur][1] : raw.adj[cur][0];
                prev = cur;
                cur = nxt;
            }
            return seq;
        };
        auto a = walk(raw.adj[0][0]), b = walk(raw.adj[0][1]);
        std::vector<std::string> ta, tb;
        for (auto x : a) ta.push_back(view_tag(raw, x));
        for (auto x : b) tb.push_back(view_tag(raw, x));
        order = tb < ta ? b : a;
        auto& tags = tb < ta ? tb : ta;
        enc = "C[";
        for (std::size_t i = 0; i < tags.size(); ++i) enc += (i ? "," : "") + tags[i];
        enc += "]";
    } else {
        std::vector<std::uint32_t> parent(n, 0), bfs{0};
        std::vector<char> seen(n, 0);
        seen[0] = 1;
        std::vector<std::vector<std::uint32_t>> kids(n);
        for (std::size_t h = 0; h < bfs.size(); ++h)
            for (auto w : raw.adj[bfs[h]])
                if (!seen[w]) {
                    seen[w] = 1;
                    parent[w] = bfs[h];
                    kids[bfs[h]].push_back(w);
                    bfs.push_back(w);
                }
        std::vector<std::string> code(n);
        for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
            auto u = *it;
            auto& ch = kids[u];
            std::sort(ch.begin(), ch.end(), [&](auto x, auto y) { return code[x] < code[y]; });
            std::string s = "(" + view_tag(raw, u);
            for (auto w : ch) s += code[w];
            s += ")";
            code[u] = std::move(s);
        }
        std::vector<std::uint32_t> stack{0};
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            order.push_back(u);
            for (auto it = kids[u].rbegin(); it != kids[u].rend(); ++it) stack.push_back(*it);
        }
        enc = std::move(code[0]);
    }
    if (raw.n_hat) enc = "N" + std::to_string(*raw.n_hat) + "|" + enc;

    std::vector<std::uint32_t> pos(n);
    for (std::uint32_t i = 0; i < n; ++i) pos[order[i]] = i;
    View out;
    out.radius = raw.radius;
    out.cyclic = raw.cyclic;
    out.n_hat = raw.n_hat;
    out.certs.resize(n);
    out.dist.resize(n);
    out.adj.resize(n);
    if (!raw.labels.empty()) out.labels.resize(n);
    if (!raw.ids.empty()) out.ids.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        auto o = order[i];
        out.certs[i] = raw.certs[o];
        out.dist[i] = raw.dist[o];
        if (!raw.labels.empty()) out.labels[i] = raw.labels[o];
        if (!raw.ids.empty()) out.ids[i] = raw.ids[o];
        for (auto w : raw.adj[o]) out.adj[i].push_back(pos[w]);
        std::sort(out.adj[i].begin(), out.adj[i].end());
    }
    out.encoding = std::move(enc);
    raw = std::move(out);
}

} // namespace detail

/// Generic view extraction over any adjacency source.
/// label(v) < 0 means unlabeled; id(v) returns an optional identifier.
template <class NbrFn, class CertFn, class LabelFn, class IdFn>
View build_view(Vertex center, std::uint32_t radius, NbrFn&& nbrs, CertFn&& cert, LabelFn&& label, IdFn&& id,
                bool ids_visible, std::optional<std::uint64_t> n_hat)
{
    require(radius >= 1, "view radius must be at least 1");
    View v;
    v.radius = radius;
    v.n_hat = n_hat;
    std::vector<Vertex> global{center};
    std::unordered_map<Vertex, std::uint32_t> local{{center, 0}};
    v.dist.push_back(0);
    for (std::size_t h = 0; h < global.size(); ++h) {
        if (v.dist[h] >= radius) continue;
        for (Vertex w : nbrs(global[h]))
            if (local.emplace(w, static_cast<std::uint32_t>(global.size())).second) {
                global.push_back(w);
                v.dist.push_back(v.dist[h] + 1);
            }
    }
    const auto n = global.size();
    v.adj.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (v.dist[i] + 1 > radius) continue;
        for (Vertex w : nbrs(global[i])) {
            auto j = local.at(w);
            // each visible edge once: from its lower-distance end, ties broken by index
            if (v.dist[j] + 1 <= radius && j < i) continue;
            v.adj[i].push_back(j);
            v.adj[j].push_back(i);
        }
    }
    v.certs.resize(n);
    bool has_label = label(center) >= 0;
    if (has_label) v.labels.resize(n);
    bool has_id = id(center).has_value();
    if (has_id) v.ids.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        v.certs[i] = cert(global[i]);
        if (has_label) v.labels[i] = label(global[i]);
        if (has_id && (i == 0 || ids_visible)) v.ids[i] = id(global[i]);
    }
    detail::canonicalize(v);
    return v;
}

/// View of vertex c in t under the certificate vector certs.
inline View view_at(const Topology& t, Vertex c, std::uint32_t radius, const std::vector<Cert>& certs,
                    bool ids_visible = false)
{
    require(c < t.size(), "view center out of range");
    require(certs.size() == t.size(), "certificate vector size mismatch");
    return build_view(
        c, radius, [&](Vertex x) { return t.neighbors(x); }, [&](Vertex x) { return certs[x]; },
        [&](Vertex x) { return t.label(x); },
        [&](Vertex x) { return t.has_ids() ? std::optional<std::uint64_t>(t.id(x)) : std::nullopt; },
        ids_visible, t.n_hat());
}

} // namespace certilab
