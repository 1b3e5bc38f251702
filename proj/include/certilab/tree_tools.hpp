#pragma once

#include <map>
#include <random>

#include "certification.hpp"

namespace certilab {

/// Rooted tree with node 0 as root.
struct RootedTree {
    std::vector<std::vector<std::uint32_t>> children{{}};

    std::size_t size() const { return children.size(); }

    std::string encoding() const
    {
        std::vector<std::string> code(size());
        std::vector<std::uint32_t> order{0};
        for (std::size_t h = 0; h < order.size(); ++h)
            for (auto c : children[order[h]]) order.push_back(c);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::vector<std::string> parts;
            for (auto c : children[*it]) parts.push_back(std::move(code[c]));
            std::sort(parts.begin(), parts.end());
            std::string s = "(";
            for (auto& p : parts) s += p;
            code[*it] = s + ")";
        }
        return code[0];
    }

    static RootedTree from_encoding(const std::string& enc)
    {
        require(enc.size() >= 2 && enc.front() == '(' && enc.back() == ')', "malformed rooted-tree encoding");
        RootedTree t;
        t.children.clear();
        std::vector<std::uint32_t> stack;
        for (char ch : enc) {
            if (ch == '(') {
                auto id = static_cast<std::uint32_t>(t.children.size());
                t.children.emplace_back();
                if (!stack.empty()) t.children[stack.back()].push_back(id);
                else require(id == 0, "encoding holds more than one tree");
                stack.push_back(id);
            } else if (ch == ')') {
                require(!stack.empty(), "unbalanced rooted-tree encoding");
                stack.pop_back();
            } else {
                throw InvalidInput("unexpected character in rooted-tree encoding");
            }
        }
        require(stack.empty(), "unbalanced rooted-tree encoding");
        return t;
    }

    /// Component of `root` in t after deleting the edges in `cut`.
    static RootedTree from_topology(const Topology& t, Vertex root, const std::set<Edge>& cut)
    {
        RootedTree r;
        std::vector<std::pair<Vertex, std::uint32_t>> q{{root, 0}};
        std::set<Vertex> seen{root};
        for (std::size_t h = 0; h < q.size(); ++h) {
            auto [x, id] = q[h];
            for (Vertex w : t.neighbors(x)) {
                Edge e{std::min(x, w), std::max(x, w)};
                if (cut.count(e) || seen.count(w)) continue;
                seen.insert(w);
                auto cid = static_cast<std::uint32_t>(r.children.size());
                r.children.emplace_back();
                r.children[id].push_back(cid);
                q.emplace_back(w, cid);
            }
        }
        return r;
    }
};

struct TreeParsing {
    std::vector<RootedTree> parts;

    std::vector<std::string> encodings() const
    {
        std::vector<std::string> out;
        for (const auto& p : parts) out.push_back(p.encoding());
        return out;
    }

    Json to_json() const { return Json(encodings()); }

    static TreeParsing from_json(const Json& j)
    {
        TreeParsing p;
        try {
            for (const auto& e : j) p.parts.push_back(RootedTree::from_encoding(e.get<std::string>()));
        } catch (const nlohmann::json::exception& ex) {
            throw InvalidInput(std::string("malformed parsing JSON: ") + ex.what());
        }
        return p;
    }
};

inline std::vector<Vertex> tree_path(const Topology& t, Vertex u, Vertex v)
{
    require(u < t.size() && v < t.size(), "path endpoints must be vertices of the tree");
    std::vector<Vertex> parent(t.size(), static_cast<Vertex>(-1));
    std::vector<Vertex> q{u};
    parent[u] = u;
    for (std::size_t h = 0; h < q.size(); ++h)
        for (Vertex w : t.neighbors(q[h]))
            if (parent[w] == static_cast<Vertex>(-1)) {
                parent[w] = q[h];
                q.push_back(w);
            }
    std::vector<Vertex> path{v};
    while (path.back() != u) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

/// Rooted components hanging off the u-v path, in path order.
inline TreeParsing parse(const Topology& t, Vertex u, Vertex v)
{
    require(t.is_tree(), "parsing needs a tree");
    auto path = tree_path(t, u, v);
    std::set<Edge> cut;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        cut.insert({std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])});
    TreeParsing p;
    for (Vertex w : path) p.parts.push_back(RootedTree::from_topology(t, w, cut));
    return p;
}

struct Glued {
    Topology tree;
    std::vector<Vertex> roots;
};

/// Concatenates the parts, joining consecutive roots.
inline Glued glue_with_roots(const TreeParsing& p)
{
    require(!p.parts.empty(), "gluing needs at least one rooted tree");
    std::vector<Edge> edges;
    std::vector<Vertex> roots;
    Vertex offset = 0;
    for (const auto& part : p.parts) {
        roots.push_back(offset);
        for (std::uint32_t x = 0; x < part.size(); ++x)
            for (auto c : part.children[x]) edges.emplace_back(offset + x, offset + c);
        offset += static_cast<Vertex>(part.size());
    }
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) edges.emplace_back(roots[i], roots[i + 1]);
    return {Topology::from_edges(Kind::Tree, offset, std::move(edges)), roots};
}

inline Topology glue(const TreeParsing& p) { return glue_with_roots(p).tree; }

/// Isomorphism-invariant string for an unrooted tree (rooted at its center or bicenter).
inline std::string tree_canonical(const Topology& t)
{
    require(t.is_tree(), "canonical form needs a tree");
    const std::size_t n = t.size();
    std::vector<std::size_t> deg(n);
    std::vector<Vertex> layer;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = t.degree(v);
        if (deg[v] <= 1) layer.push_back(v);
    }
    std::size_t remaining = n;
    while (remaining > 2) {
        remaining -= layer.size();
        std::vector<Vertex> next;
        for (Vertex v : layer)
            for (Vertex w : t.neighbors(v))
                if (--deg[w] == 1) next.push_back(w);
        layer = std::move(next);
    }
    std::string best;
    for (Vertex c : layer) {
        auto enc = RootedTree::from_topology(t, c, {}).encoding();
        if (best.empty() || enc < best) best = enc;
    }
    return best;
}

// ---------------------------------------------------------------- tree membership

struct TreeDecision {
    bool accepted = false;
    std::vector<Cert> witness;
};

/// Leaf-to-root dynamic programme over feasible (parent certificate, own certificate) pairs.
inline TreeDecision tree_accepted(const Topology& t, const LocalVerifier& v, std::size_t combo_cap = 4000000)
{
    require(v.radius() == 1, "tree membership implemented for radius 1");
    require(t.is_tree(), "tree membership needs a tree");
    require(t.in_class(v.promise()), "topology outside the verifier's class promise");
    const std::size_t n = t.size();
    constexpr auto none = static_cast<Vertex>(-1);
    std::vector<Vertex> parent(n, none), order{0};
    std::vector<std::vector<Vertex>> kids(n);
    parent[0] = 0;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (Vertex w : t.neighbors(order[h]))
            if (parent[w] == none) {
                parent[w] = order[h];
                kids[order[h]].push_back(w);
                order.push_back(w);
            }
    const auto dom = v.domain();
    constexpr Cert no_parent = ~Cert{0};
    // feasible[x][(cp, cx)] = children certificates of one accepting completion
    std::vector<std::map<std::pair<Cert, Cert>, std::vector<Cert>>> feasible(n);
    // allowed[u][cp] = own certificates of u that extend to an accepted subtree under parent cp
    std::vector<std::map<Cert, std::vector<Cert>>> allowed(n);

    std::vector<Cert> star_certs;
    std::vector<int> star_labels;
    std::vector<std::optional<std::uint64_t>> star_ids;
    std::vector<Vertex> star_nbrs;
    const Vertex hub = 0;
    auto star_view = [&] {
        return build_view(
            0, 1,
            [&](Vertex y) {
                return y == 0 ? std::span<const Vertex>(star_nbrs) : std::span<const Vertex>(&hub, 1);
            },
            [&](Vertex y) { return star_certs[y]; }, [&](Vertex y) { return star_labels[y]; },
            [&](Vertex y) { return star_ids[y]; }, v.ids_visible(), t.n_hat());
    };

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Vertex x = *it;
        const auto& ch = kids[x];
        const bool root = x == 0;
        std::vector<Vertex> nbr_vertices(ch.begin(), ch.end());
        if (!root) nbr_vertices.push_back(parent[x]);
        const std::size_t deg = nbr_vertices.size();
        star_nbrs.resize(deg);
        for (std::size_t i = 0; i < deg; ++i) star_nbrs[i] = static_cast<Vertex>(i + 1);
        star_certs.assign(deg + 1, 0);
        star_labels.assign(deg + 1, -1);
        star_ids.assign(deg + 1, std::nullopt);
        star_labels[0] = t.label(x);
        for (std::size_t i = 0; i < deg; ++i) star_labels[i + 1] = t.label(nbr_vertices[i]);
        if (t.has_ids()) {
            star_ids[0] = t.id(x);
            if (v.ids_visible())
                for (std::size_t i = 0; i < deg; ++i) star_ids[i + 1] = t.id(nbr_vertices[i]);
        }
        const bool distinct_children = t.has_ids() && v.ids_visible();

        for (Cert cx : dom) {
            if (!v.admits_at(cx, t.degree(x))) continue;
            // children with equal label and equal allowed set are interchangeable in the view
            std::map<std::pair<int, std::vector<Cert>>, std::vector<std::size_t>> groups;
            bool dead = false;
            for (std::size_t i = 0; i < ch.size(); ++i) {
                auto a = allowed[ch[i]].find(cx);
                if (a == allowed[ch[i]].end() || a->second.empty()) {
                    dead = true;
                    break;
                }
                int key_label = distinct_children ? -2 - static_cast<int>(i) : t.label(ch[i]);
                groups[{key_label, a->second}].push_back(i);
            }
            if (dead) continue;
            std::vector<Cert> parents;
            if (root) parents.push_back(no_parent);
            else
                for (Cert cp : dom)
                    if (v.compatible(cx, cp) && v.compatible(cp, cx)) parents.push_back(cp);
            if (parents.empty()) continue;

            struct Group {
                const std::vector<Cert>* options;
                std::vector<std::size_t> members;
                std::vector<std::size_t> pick; // nondecreasing indices into options
            };
            std::vector<Group> gs;
            double combos = 1;
            for (auto& [key, members] : groups) {
                double c = 1;
                const double a = static_cast<double>(key.second.size());
                for (std::size_t j = 0; j < members.size(); ++j)
                    c = c * (a + static_cast<double>(j)) / static_cast<double>(j + 1);
                combos *= c;
                gs.push_back(Group{&key.second, members, std::vector<std::size_t>(members.size(), 0)});
            }
            if (combos * static_cast<double>(parents.size()) > static_cast<double>(combo_cap))
                throw CapacityExceeded("tree membership: too many neighbour combinations");

            std::vector<Cert> child_certs(ch.size());
            std::vector<char> found(parents.size(), 0);
            std::size_t found_count = 0;
            star_certs[0] = cx;
            while (found_count < parents.size()) {
                for (const auto& g : gs)
                    for (std::size_t j = 0; j < g.members.size(); ++j)
                        child_certs[g.members[j]] = (*g.options)[g.pick[j]];
                bool pair_ok = true;
                for (std::size_t i = 0; i < ch.size() && pair_ok; ++i)
                    pair_ok = v.compatible(cx, child_certs[i]) && v.compatible(child_certs[i], cx);
                if (pair_ok) {
                    for (std::size_t i = 0; i < ch.size(); ++i) star_certs[i + 1] = child_certs[i];
                    for (std::size_t pi = 0; pi < parents.size(); ++pi) {
                        if (found[pi]) continue;
                        if (!root) star_certs[deg] = parents[pi];
                        if (v.accepts(star_view())) {
                            found[pi] = 1;
                            ++found_count;
                            feasible[x][{parents[pi], cx}] = child_certs;
                        }
                    }
                }
                // next multiset combination, odometer over groups
                std::size_t gi = 0;
                for (; gi < gs.size(); ++gi) {
                    auto& g = gs[gi];
                    const std::size_t a = g.options->size();
                    std::size_t j = g.pick.size();
                    while (j > 0 && g.pick[j - 1] + 1 == a) --j;
                    if (j == 0) {
                        std::fill(g.pick.begin(), g.pick.end(), 0);
                        continue;
                    }
                    auto val = g.pick[j - 1] + 1;
                    for (std::size_t q = j - 1; q < g.pick.size(); ++q) g.pick[q] = val;
                    break;
                }
                if (gi == gs.size()) break;
            }
        }
        for (const auto& [key, kc] : feasible[x]) allowed[x][key.first].push_back(key.second);
        for (auto& [cp, list] : allowed[x]) std::sort(list.begin(), list.end());
    }

    TreeDecision d;
    auto root_it = allowed[0].find(no_parent);
    if (root_it == allowed[0].end() || root_it->second.empty()) return d;
    d.accepted = true;
    d.witness.assign(n, 0);
    d.witness[0] = root_it->second.front();
    for (Vertex x : order) {
        Cert cp = x == 0 ? no_parent : d.witness[parent[x]];
        const auto& kc = feasible[x].at({cp, d.witness[x]});
        for (std::size_t i = 0; i < kids[x].size(); ++i) d.witness[kids[x][i]] = kc[i];
    }
    return d;
}

// ---------------------------------------------------------------- caterpillar encodings

/// h: central path labeled by the number of pendant leaves.
inline Topology caterpillar_to_path(const Topology& g, int alphabet = 0)
{
    require(g.in_class(Kind::Caterpillar), "h needs a caterpillar");
    auto spine = g.central_path();
    require(!spine.empty(), "h needs a caterpillar with a non-empty central path");
    std::vector<int> labels;
    for (Vertex v : spine) labels.push_back(static_cast<int>(g.leaf_neighbors(v)));
    int sigma = alphabet > 0 ? alphabet : *std::max_element(labels.begin(), labels.end()) + 1;
    return Topology::path(spine.size(), labels, sigma);
}

/// f: caterpillar whose spine vertex i carries label(i) leaves.
inline Topology path_to_caterpillar(const Topology& p)
{
    require(p.in_class(Kind::Path) && p.labeled(), "f needs a labeled path");
    Vertex start = 0;
    for (Vertex v = 0; v < p.size(); ++v)
        if (p.degree(v) <= 1) {
            start = v;
            break;
        }
    std::vector<std::size_t> counts;
    Vertex prev = start, cur = start;
    for (std::size_t i = 0; i < p.size(); ++i) {
        counts.push_back(static_cast<std::size_t>(p.label(cur)));
        for (Vertex w : p.neighbors(cur))
            if (w != prev) {
                prev = cur;
                cur = w;
                break;
            }
    }
    return Topology::caterpillar(counts);
}

// ---------------------------------------------------------------- generators

/// Uniform labelled tree on n vertices from a random Pruefer sequence.
template <class Rng>
Topology random_tree(std::size_t n, Rng& rng)
{
    require(n >= 1, "trees need at least one vertex");
    if (n == 1) return Topology::tree({});
    if (n == 2) return Topology::tree({{0, 1}});
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
    std::vector<Vertex> code(n - 2);
    for (auto& c : code) c = pick(rng);
    std::vector<std::size_t> deg(n, 1);
    for (auto c : code) ++deg[c];
    std::vector<Edge> edges;
    std::set<Vertex> leaves;
    for (Vertex v = 0; v < n; ++v)
        if (deg[v] == 1) leaves.insert(v);
    for (auto c : code) {
        Vertex leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, c);
        if (--deg[c] == 1) leaves.insert(c);
    }
    Vertex a = *leaves.begin(), b = *std::next(leaves.begin());
    edges.emplace_back(a, b);
    return Topology::tree(edges);
}

} // namespace certilab
