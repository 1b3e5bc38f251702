#pragma once

#include <bit>
#include <map>
#include <numeric>
#include <unordered_map>

#include "certification.hpp"

namespace certilab {

namespace detail {

struct WordsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const
    {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (auto x : v) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace detail

/// Finite automaton over letters 0..alphabet-1; alphabet 1 is the unary case.
class Nfa {
public:
    struct Transition {
        std::uint32_t from, letter, to;
        friend auto operator<=>(const Transition&, const Transition&) = default;
    };

    std::size_t alphabet = 1;
    std::vector<std::string> names;
    std::vector<std::uint32_t> initial;
    std::vector<std::uint32_t> final_states;
    std::vector<Transition> transitions;

    std::size_t state_count() const { return names.size(); }

    std::uint32_t add_state(std::string name)
    {
        names.push_back(std::move(name));
        adj_.clear();
        return static_cast<std::uint32_t>(names.size() - 1);
    }

    void add_transition(std::uint32_t from, std::uint32_t letter, std::uint32_t to)
    {
        transitions.push_back({from, letter, to});
        adj_.clear();
    }

    /// Sorts and deduplicates transitions and state sets.
    void normalize()
    {
        auto tidy = [](auto& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        tidy(transitions);
        tidy(initial);
        tidy(final_states);
        adj_.clear();
    }

    using Set = std::vector<std::uint64_t>;

    Set make_set(const std::vector<std::uint32_t>& states) const
    {
        Set s((state_count() + 63) / 64, 0);
        for (auto q : states) s[q / 64] |= std::uint64_t{1} << (q % 64);
        return s;
    }

    bool hits_final(const Set& s) const
    {
        for (auto q : final_states)
            if (s[q / 64] >> (q % 64) & 1) return true;
        return false;
    }

    Set step(const Set& s, std::uint32_t letter = 0) const
    {
        build_adj();
        Set out(s.size(), 0);
        for (std::size_t w = 0; w < s.size(); ++w)
            for (auto bits = s[w]; bits; bits &= bits - 1) {
                auto q = static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits));
                for (auto t : adj_[letter][q]) out[t / 64] |= std::uint64_t{1} << (t % 64);
            }
        return out;
    }

    bool accepts(const std::vector<std::uint32_t>& word) const
    {
        auto s = make_set(initial);
        for (auto l : word) {
            require(l < alphabet, "letter outside the automaton's alphabet");
            s = step(s, l);
        }
        return hits_final(s);
    }

    /// Unary membership for every length 0..N.
    std::vector<bool> unary_lengths(std::size_t N) const
    {
        require(alphabet == 1, "length queries need a unary automaton");
        std::vector<bool> out(N + 1, false);
        auto s = make_set(initial);
        for (std::size_t t = 0; t <= N; ++t) {
            out[t] = hits_final(s);
            if (t < N) s = step(s);
        }
        return out;
    }

    Json to_json() const
    {
        Json j;
        j["states"] = names;
        Json ini = Json::array(), fin = Json::array(), tr = Json::array();
        for (auto q : initial) ini.push_back(names[q]);
        for (auto q : final_states) fin.push_back(names[q]);
        for (const auto& t : transitions) {
            if (alphabet == 1) tr.push_back(Json::array({names[t.from], names[t.to]}));
            else tr.push_back(Json::array({names[t.from], t.letter, names[t.to]}));
        }
        j["initial"] = std::move(ini);
        j["final"] = std::move(fin);
        j["transitions"] = std::move(tr);
        if (alphabet != 1) j["alphabet"] = alphabet;
        return j;
    }

    static Nfa from_json(const Json& j)
    {
        try {
            Nfa a;
            a.alphabet = j.value("alphabet", std::size_t{1});
            std::unordered_map<std::string, std::uint32_t> idx;
            for (const auto& s : j.at("states")) {
                auto name = s.get<std::string>();
                require(!idx.count(name), "duplicate state name " + name);
                idx[name] = a.add_state(name);
            }
            auto look = [&](const Json& s) {
                auto it = idx.find(s.get<std::string>());
                require(it != idx.end(), "unknown state " + s.dump());
                return it->second;
            };
            for (const auto& s : j.at("initial")) a.initial.push_back(look(s));
            for (const auto& s : j.at("final")) a.final_states.push_back(look(s));
            for (const auto& t : j.at("transitions")) {
                if (t.size() == 2) a.add_transition(look(t[0]), 0, look(t[1]));
                else a.add_transition(look(t[0]), t[1].get<std::uint32_t>(), look(t[2]));
            }
            a.normalize();
            return a;
        } catch (const nlohmann::json::exception& ex) {
            throw InvalidInput(std::string("malformed NFA JSON: ") + ex.what());
        }
    }

private:
    void build_adj() const
    {
        if (!adj_.empty()) return;
        std::lock_guard lock(*adj_mu_);
        if (!adj_.empty()) return;
        std::vector<std::vector<std::vector<std::uint32_t>>> a(alphabet,
                                                               std::vector<std::vector<std::uint32_t>>(state_count()));
        for (const auto& t : transitions) a[t.letter][t.from].push_back(t.to);
        adj_ = std::move(a);
    }

    mutable std::vector<std::vector<std::vector<std::uint32_t>>> adj_;
    std::shared_ptr<std::mutex> adj_mu_ = std::make_shared<std::mutex>();
};

/// View of position `center` on a line of vertices 0..len-1.
inline View line_view(const std::vector<Cert>& certs, const std::vector<int>& labels, Vertex center,
                      std::uint32_t radius, std::optional<std::uint64_t> n_hat = std::nullopt)
{
    const auto len = static_cast<Vertex>(certs.size());
    std::array<Vertex, 2> buf{};
    return build_view(
        center, radius,
        [&](Vertex x) {
            std::size_t k = 0;
            if (x > 0) buf[k++] = x - 1;
            if (x + 1 < len) buf[k++] = x + 1;
            return std::span<const Vertex>(buf.data(), k);
        },
        [&](Vertex x) { return certs[x]; }, [&](Vertex x) { return labels.empty() ? -1 : labels[x]; },
        [](Vertex) { return std::optional<std::uint64_t>{}; }, false, n_hat);
}

/// Builds the pair automaton from local rules on an oriented path:
/// single(c), begin(c, next), middle(prev, c, next), end(prev, c).
template <class Single, class Begin, class Middle, class End, class Near>
Nfa build_pair_nfa(const std::vector<Cert>& dom, Single&& single, Begin&& begin, Middle&& middle, End&& end,
                   Near&& near)
{
    Nfa a;
    const auto i = a.add_state("i");
    const auto f = a.add_state("f");
    a.initial = {i};
    a.final_states = {f};
    std::map<std::pair<Cert, Cert>, std::uint32_t> pair_state;
    auto state = [&](Cert x, Cert y) {
        auto [it, fresh] = pair_state.emplace(std::make_pair(x, y), 0);
        if (fresh) it->second = a.add_state("(" + std::to_string(x) + "," + std::to_string(y) + ")");
        return it->second;
    };
    for (Cert c : dom)
        if (single(c)) a.add_transition(i, 0, f);
    for (Cert x : dom)
        for (Cert y : near(x)) {
            if (begin(x, y)) a.add_transition(i, 0, state(x, y));
            if (end(x, y)) a.add_transition(state(x, y), 0, f);
        }
    for (Cert y : dom) {
        const auto& nb = near(y);
        for (Cert x : nb)
            for (Cert z : nb)
                if (middle(x, y, z)) a.add_transition(state(x, y), 0, state(y, z));
    }
    a.normalize();
    return a;
}

namespace detail {

/// Admissible neighbours of each admissible certificate under the verifier's compatibility hint.
inline std::map<Cert, std::vector<Cert>> neighbour_lists(const LocalVerifier& v)
{
    auto dom = v.domain();
    std::map<Cert, std::vector<Cert>> out;
    for (Cert x : dom) {
        auto& l = out[x];
        for (Cert y : dom)
            if (v.compatible(x, y) && v.compatible(y, x)) l.push_back(y);
    }
    return out;
}

} // namespace detail

/// Pair automaton of a radius-1 verifier on unlabeled paths: a path on t vertices has an
/// accepting assignment iff some run of t transitions reaches f.
inline const Nfa& cert_to_nfa(const LocalVerifier& v)
{
    require(v.radius() == 1, "pair automaton needs radius 1");
    require(v.promise() == Kind::Path, "pair automaton needs the path class");
    return v.derived<Nfa>("nfa", [&] {
        auto dom = v.domain();
        auto near = detail::neighbour_lists(v);
        const std::vector<int> none;
        std::map<std::pair<Cert, Cert>, bool> endpoint;
        auto ends = [&](Cert self, Cert other) {
            auto [it, fresh] = endpoint.emplace(std::make_pair(self, other), false);
            if (fresh) it->second = v.accepts(line_view({self, other}, none, 0, 1));
            return it->second;
        };
        return build_pair_nfa(
            dom, [&](Cert c) { return v.accepts(line_view({c}, none, 0, 1)); },
            [&](Cert x, Cert y) { return ends(x, y); },
            [&](Cert x, Cert y, Cert z) { return x <= z ? v.accepts(line_view({x, y, z}, none, 1, 1))
                                                        : v.accepts(line_view({z, y, x}, none, 1, 1)); },
            [&](Cert x, Cert y) { return ends(y, x); }, [&](Cert x) -> const std::vector<Cert>& { return near[x]; });
    });
}

/// Accepted path lengths of a radius-1 unlabeled path verifier on 0..N, extended on demand.
inline std::vector<bool> accepted_path_lengths(const LocalVerifier& v, std::size_t N)
{
    const Nfa& a = cert_to_nfa(v);
    struct Progress {
        std::vector<bool> bits;
        Nfa::Set cur;
    };
    std::lock_guard lock(v.derived_mutex());
    auto* p = v.mutable_derived<Progress>("lengths");
    if (p->bits.empty()) {
        p->cur = a.make_set(a.initial);
        p->bits.push_back(a.hits_final(p->cur));
    }
    while (p->bits.size() <= N) {
        p->cur = a.step(p->cur);
        p->bits.push_back(a.hits_final(p->cur));
    }
    return {p->bits.begin(), p->bits.begin() + static_cast<std::ptrdiff_t>(N + 1)};
}

/// Labeled radius-r translation: states are 2r-tuples of (certificate, letter) plus i, f and
/// the begin/end chains. Accepts exactly the words of length >= 2r whose labeled path has
/// an accepting assignment.
inline Nfa cert_to_nfa_labeled(const LocalVerifier& v, int sigma, std::uint32_t r)
{
    require(v.promise() == Kind::Path, "labeled translation needs the path class");
    require(v.radius() == r, "verifier radius does not match the requested radius");
    require(sigma >= 1, "alphabet must be non-empty");
    auto dom = v.domain();
    struct Sym {
        Cert c;
        int l;
    };
    std::vector<Sym> syms;
    for (Cert c : dom)
        for (int l = 0; l < sigma; ++l) syms.push_back({c, l});
    const std::size_t S = syms.size(), len = 2 * r + 1;
    double combos = std::pow(static_cast<double>(S), static_cast<double>(len));
    require(combos <= 4e6, "labeled translation too large for desk scale");

    Nfa a;
    a.alphabet = static_cast<std::size_t>(sigma);
    const auto i = a.add_state("i");
    const auto f = a.add_state("f");
    a.initial = {i};
    a.final_states = {f};
    std::map<std::vector<std::size_t>, std::uint32_t> tuple_state;
    auto tuple_name = [&](const std::vector<std::size_t>& tup) {
        std::string s = "<";
        for (std::size_t j = 0; j < tup.size(); ++j)
            s += (j ? " " : "") + std::to_string(syms[tup[j]].c) + ":" + std::to_string(syms[tup[j]].l);
        return s + ">";
    };
    auto state = [&](const std::vector<std::size_t>& tup) {
        auto [it, fresh] = tuple_state.emplace(tup, 0);
        if (fresh) it->second = a.add_state(tuple_name(tup));
        return it->second;
    };
    std::set<std::vector<std::size_t>> begun, ended;

    std::vector<std::size_t> idx(len, 0);
    std::vector<Cert> certs(len);
    std::vector<int> labels(len);
    while (true) {
        for (std::size_t j = 0; j < len; ++j) {
            certs[j] = syms[idx[j]].c;
            labels[j] = syms[idx[j]].l;
        }
        auto ok = [&](std::size_t j) { return v.accepts(line_view(certs, labels, static_cast<Vertex>(j), r)); };
        std::vector<std::size_t> head(idx.begin(), idx.end() - 1), tail(idx.begin() + 1, idx.end());
        if (ok(r)) a.add_transition(state(head), static_cast<std::uint32_t>(labels[r]), state(tail));
        if (!begun.count(head)) {
            bool all = true;
            for (std::size_t j = 0; j < r && all; ++j) all = ok(j);
            if (all) {
                begun.insert(head);
                auto prev = i;
                for (std::size_t j = 0; j + 1 < r; ++j) {
                    auto p = a.add_state("p" + std::to_string(j + 1) + tuple_name(head));
                    a.add_transition(prev, static_cast<std::uint32_t>(labels[j]), p);
                    prev = p;
                }
                a.add_transition(prev, static_cast<std::uint32_t>(labels[r - 1]), state(head));
            }
        }
        if (!ended.count(tail)) {
            bool all = true;
            for (std::size_t j = r + 1; j < len && all; ++j) all = ok(j);
            if (all) {
                ended.insert(tail);
                auto prev = state(tail);
                for (std::size_t j = r + 1; j + 1 < len; ++j) {
                    auto q = a.add_state("q" + std::to_string(j - r) + tuple_name(tail));
                    a.add_transition(prev, static_cast<std::uint32_t>(labels[j]), q);
                    prev = q;
                }
                a.add_transition(prev, static_cast<std::uint32_t>(labels[len - 1]), f);
            }
        }
        std::size_t j = 0;
        while (j < len && ++idx[j] == S) idx[j++] = 0;
        if (j == len) break;
    }
    a.normalize();
    return a;
}

/// Direct decision for a labeled path of any length: layered search over consecutive
/// certificate windows. Exact for every radius.
inline bool labeled_path_accepted(const LocalVerifier& v, const std::vector<int>& word,
                                  std::optional<std::uint64_t> n_hat = std::nullopt)
{
    require(!word.empty(), "paths have at least one vertex");
    auto t = Topology::path(word.size());
    if (word[0] >= 0) {
        int sigma = *std::max_element(word.begin(), word.end()) + 1;
        t = t.with_labels(word, sigma);
    }
    if (n_hat) t = t.with_n_hat(*n_hat);
    return backtrack_assignment(t, v).has_value();
}

// ---------------------------------------------------------------- closure

inline Nfa nfa_union(const Nfa& a, const Nfa& b)
{
    require(a.alphabet == b.alphabet, "alphabet mismatch");
    Nfa u;
    u.alphabet = a.alphabet;
    for (const auto& s : a.names) u.add_state("a." + s);
    const auto off = static_cast<std::uint32_t>(a.state_count());
    for (const auto& s : b.names) u.add_state("b." + s);
    for (auto q : a.initial) u.initial.push_back(q);
    for (auto q : b.initial) u.initial.push_back(q + off);
    for (auto q : a.final_states) u.final_states.push_back(q);
    for (auto q : b.final_states) u.final_states.push_back(q + off);
    for (const auto& t : a.transitions) u.add_transition(t.from, t.letter, t.to);
    for (const auto& t : b.transitions) u.add_transition(t.from + off, t.letter, t.to + off);
    u.normalize();
    return u;
}

inline Nfa nfa_intersection(const Nfa& a, const Nfa& b)
{
    require(a.alphabet == b.alphabet, "alphabet mismatch");
    Nfa p;
    p.alphabet = a.alphabet;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> id;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> work;
    auto get = [&](std::uint32_t x, std::uint32_t y) {
        auto [it, fresh] = id.emplace(std::make_pair(x, y), 0);
        if (fresh) {
            it->second = p.add_state("(" + a.names[x] + "|" + b.names[y] + ")");
            work.emplace_back(x, y);
        }
        return it->second;
    };
    for (auto x : a.initial)
        for (auto y : b.initial) p.initial.push_back(get(x, y));
    std::vector<std::vector<std::vector<std::uint32_t>>> ob(b.alphabet, std::vector<std::vector<std::uint32_t>>(b.state_count()));
    for (const auto& t : b.transitions) ob[t.letter][t.from].push_back(t.to);
    std::vector<std::vector<Nfa::Transition>> oa(a.state_count());
    for (const auto& t : a.transitions) oa[t.from].push_back(t);
    for (std::size_t h = 0; h < work.size(); ++h) {
        auto [x, y] = work[h];
        auto from = id.at({x, y});
        for (const auto& t : oa[x])
            for (auto y2 : ob[t.letter][y]) p.add_transition(from, t.letter, get(t.to, y2));
    }
    std::set<std::uint32_t> fa(a.final_states.begin(), a.final_states.end()), fb(b.final_states.begin(), b.final_states.end());
    for (const auto& [k, q] : id)
        if (fa.count(k.first) && fb.count(k.second)) p.final_states.push_back(q);
    p.normalize();
    return p;
}

inline constexpr std::size_t determinization_cap = std::size_t{1} << 20;

/// Complement via subset construction; the empty subset serves as the sink.
inline Nfa nfa_complement(const Nfa& a)
{
    Nfa c;
    c.alphabet = a.alphabet;
    std::unordered_map<Nfa::Set, std::uint32_t, detail::WordsHash> id;
    std::vector<Nfa::Set> work;
    auto get = [&](Nfa::Set s) {
        auto it = id.find(s);
        if (it != id.end()) return it->second;
        if (id.size() >= determinization_cap) throw CapacityExceeded("determinization exceeded 2^20 subset states");
        auto q = c.add_state("S" + std::to_string(id.size()));
        id.emplace(s, q);
        work.push_back(std::move(s));
        return q;
    };
    c.initial = {get(a.make_set(a.initial))};
    for (std::size_t h = 0; h < work.size(); ++h) {
        auto s = work[h];
        if (!a.hits_final(s)) c.final_states.push_back(static_cast<std::uint32_t>(h));
        for (std::uint32_t l = 0; l < a.alphabet; ++l) c.add_transition(static_cast<std::uint32_t>(h), l, get(a.step(s, l)));
    }
    c.normalize();
    return c;
}

// ---------------------------------------------------------------- eventually periodic sets

/// Set of naturals equal to `explicit_members` below T and to the residues mod p from T on.
struct EventuallyPeriodicSet {
    std::uint64_t T = 0;
    std::vector<std::uint64_t> explicit_members;
    std::uint64_t p = 1;
    std::vector<std::uint64_t> residues;

    bool contains(std::uint64_t n) const
    {
        if (n < T) return std::binary_search(explicit_members.begin(), explicit_members.end(), n);
        return std::binary_search(residues.begin(), residues.end(), n % p);
    }

    Json to_json() const
    {
        Json j;
        j["T"] = T;
        j["explicit"] = explicit_members;
        j["p"] = p;
        j["residues"] = residues;
        return j;
    }

    static EventuallyPeriodicSet from_json(const Json& j)
    {
        try {
            EventuallyPeriodicSet e;
            e.T = j.at("T").get<std::uint64_t>();
            e.explicit_members = j.at("explicit").get<std::vector<std::uint64_t>>();
            e.p = j.at("p").get<std::uint64_t>();
            e.residues = j.at("residues").get<std::vector<std::uint64_t>>();
            require(e.p >= 1, "period must be positive");
            std::sort(e.explicit_members.begin(), e.explicit_members.end());
            std::sort(e.residues.begin(), e.residues.end());
            for (auto x : e.explicit_members) require(x < e.T, "explicit member beyond preperiod");
            for (auto x : e.residues) require(x < e.p, "residue out of range");
            return e;
        } catch (const nlohmann::json::exception& ex) {
            throw InvalidInput(std::string("malformed EPS JSON: ") + ex.what());
        }
    }

    friend bool operator==(const EventuallyPeriodicSet&, const EventuallyPeriodicSet&) = default;
};

inline bool eps_membership(const EventuallyPeriodicSet& e, std::uint64_t n) { return e.contains(n); }

inline bool eps_equal_on_window(const EventuallyPeriodicSet& a, const EventuallyPeriodicSet& b, std::uint64_t N)
{
    for (std::uint64_t n = 0; n <= N; ++n)
        if (a.contains(n) != b.contains(n)) return false;
    return true;
}

/// Canonical form of a 0/1 sequence known to satisfy bits[t] = bits[t+P] for t >= T0;
/// `bits` must cover [0, T0+P).
inline EventuallyPeriodicSet canonical_eps(const std::vector<bool>& bits, std::uint64_t T0, std::uint64_t P)
{
    require(P >= 1 && bits.size() >= T0 + P, "lasso sequence too short");
    auto b = [&](std::uint64_t t) { return t < T0 ? bits[t] : bits[T0 + (t - T0) % P]; };
    std::uint64_t p = P;
    for (std::uint64_t d = 1; d <= P; ++d) {
        if (P % d) continue;
        bool ok = true;
        for (std::uint64_t t = T0; t < T0 + P && ok; ++t) ok = b(t) == b(t + d);
        if (ok) {
            p = d;
            break;
        }
    }
    std::uint64_t T = T0;
    while (T > 0 && b(T - 1) == b(T - 1 + p)) --T;
    EventuallyPeriodicSet e;
    e.T = T;
    e.p = p;
    for (std::uint64_t t = 0; t < T; ++t)
        if (b(t)) e.explicit_members.push_back(t);
    for (std::uint64_t t = T; t < T + p; ++t)
        if (b(t)) e.residues.push_back(t % p);
    std::sort(e.residues.begin(), e.residues.end());
    return e;
}

struct Lasso {
    std::uint64_t transient = 0; // first index of the cycle
    std::uint64_t cycle = 1;     // cycle length of the subset sequence
    std::vector<bool> bits;      // membership over [0, transient + cycle)
};

/// Subset sequence of a unary automaton: a path into a single cycle.
inline Lasso unary_lasso(const Nfa& a)
{
    require(a.alphabet == 1, "lasso extraction needs a unary automaton");
    std::unordered_map<Nfa::Set, std::uint64_t, detail::WordsHash> seen;
    Lasso l;
    auto s = a.make_set(a.initial);
    for (std::uint64_t t = 0;; ++t) {
        auto [it, fresh] = seen.emplace(s, t);
        if (!fresh) {
            l.transient = it->second;
            l.cycle = t - it->second;
            return l;
        }
        if (seen.size() > determinization_cap) throw CapacityExceeded("determinization exceeded 2^20 subset states");
        l.bits.push_back(a.hits_final(s));
        s = a.step(s);
    }
}

inline EventuallyPeriodicSet determinize_lasso(const Nfa& a)
{
    auto l = unary_lasso(a);
    return canonical_eps(l.bits, l.transient, l.cycle);
}

/// Least (T, p) in lexicographic order with T, p <= N/3 such that S(n) = S(n+p) for all
/// n in [T, N-p], or nothing when no such pair exists.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> periodicity_falsifier(const std::vector<bool>& s)
{
    require(!s.empty(), "window must contain at least one point");
    const std::uint64_t N = s.size() - 1;
    require(N >= 1, "window [0,N] needs N >= 1");
    std::optional<std::pair<std::uint64_t, std::uint64_t>> best;
    for (std::uint64_t p = 1; p <= N / 3; ++p) {
        std::uint64_t T = 0;
        for (std::uint64_t n = N - p + 1; n-- > 0;)
            if (s[n] != s[n + p]) {
                T = n + 1;
                break;
            }
        if (T > N / 3) continue;
        if (!best || T < best->first) best = std::make_pair(T, p);
    }
    return best;
}

// ---------------------------------------------------------------- tiny oriented verifiers

/// Path verifier over certificates {0,1} given by four rule tables on an oriented path:
/// bits 0-3 begin(c0,c1), bits 4-11 middle(prev,c,next), bits 12-15 end(prev,c), bits 16-17 single(c).
struct TinyPathVerifier {
    std::uint32_t code = 0;
    unsigned certs = 2;

    bool begin(unsigned a, unsigned b) const { return code >> (a * 2 + b) & 1; }
    bool middle(unsigned a, unsigned b, unsigned c) const { return code >> (4 + a * 4 + b * 2 + c) & 1; }
    bool end(unsigned a, unsigned b) const { return code >> (12 + a * 2 + b) & 1; }
    bool single(unsigned a) const { return code >> (16 + a) & 1; }

    static constexpr std::uint32_t family_size(unsigned k_bits) { return k_bits == 0 ? 16u : 1u << 18; }

    /// One-certificate members reuse the rule slots of certificate 0.
    static TinyPathVerifier nth(unsigned k_bits, std::uint32_t i)
    {
        if (k_bits == 1) return {i, 2};
        std::uint32_t code = (i & 1) | (i >> 1 & 1) << 4 | (i >> 2 & 1) << 12 | (i >> 3 & 1) << 16;
        return {code, 1};
    }

    Nfa to_nfa() const
    {
        std::vector<Cert> dom;
        for (Cert c = 0; c < certs; ++c) dom.push_back(c);
        return build_pair_nfa(
            dom, [&](Cert c) { return single(static_cast<unsigned>(c)); },
            [&](Cert x, Cert y) { return begin(static_cast<unsigned>(x), static_cast<unsigned>(y)); },
            [&](Cert x, Cert y, Cert z) {
                return middle(static_cast<unsigned>(x), static_cast<unsigned>(y), static_cast<unsigned>(z));
            },
            [&](Cert x, Cert y) { return end(static_cast<unsigned>(x), static_cast<unsigned>(y)); },
            [&](Cert) -> const std::vector<Cert>& { return dom; });
    }

    /// Subset-transition table over the six states: bits 0-3 pairs (2a+b), bit 4 f, bit 5 i.
    std::array<std::uint8_t, 64> successor_table() const
    {
        std::array<std::uint8_t, 6> one{};
        for (unsigned a = 0; a < certs; ++a)
            for (unsigned b = 0; b < certs; ++b) {
                if (begin(a, b)) one[5] |= 1u << (a * 2 + b);
                if (end(a, b)) one[a * 2 + b] |= 1u << 4;
                for (unsigned c = 0; c < certs; ++c)
                    if (middle(a, b, c)) one[a * 2 + b] |= 1u << (b * 2 + c);
            }
        for (unsigned a = 0; a < certs; ++a)
            if (single(a)) one[5] |= 1u << 4;
        std::array<std::uint8_t, 64> table{};
        for (unsigned m = 0; m < 64; ++m)
            for (unsigned q = 0; q < 6; ++q)
                if (m >> q & 1) table[m] |= one[q];
        return table;
    }

    std::vector<bool> lengths(std::size_t N) const
    {
        auto table = successor_table();
        std::vector<bool> out(N + 1, false);
        std::uint8_t cur = 1u << 5;
        for (std::size_t t = 1; t <= N; ++t) {
            cur = table[cur];
            out[t] = cur >> 4 & 1;
        }
        return out;
    }

    /// Backtracking with a dead-end memo on (position, previous, current).
    bool backtrack(std::size_t n) const
    {
        if (n == 0) return false;
        if (n == 1) {
            for (unsigned a = 0; a < certs; ++a)
                if (single(a)) return true;
            return false;
        }
        std::vector<std::uint8_t> dead(n * 4, 0);
        std::function<bool(std::size_t, unsigned, unsigned)> go = [&](std::size_t j, unsigned prev, unsigned cur) {
            // vertices before j accepted; j has certificate cur and predecessor prev
            if (j == n - 1) return end(prev, cur);
            auto& d = dead[j * 4 + prev * 2 + cur];
            if (d) return false;
            for (unsigned nxt = 0; nxt < certs; ++nxt)
                if (middle(prev, cur, nxt) && go(j + 1, cur, nxt)) return true;
            d = 1;
            return false;
        };
        for (unsigned a = 0; a < certs; ++a)
            for (unsigned b = 0; b < certs; ++b)
                if (begin(a, b) && go(1, a, b)) return true;
        return false;
    }
};

struct LowerBoundResult {
    std::optional<TinyPathVerifier> matched;
    std::uint64_t examined = 0;
};

/// Searches the tiny verifiers for one whose accepted lengths equal the target on [1, N].
/// Position 0 of the window is ignored since no path has zero vertices.
inline LowerBoundResult lower_bound_oracle(const std::vector<bool>& target, unsigned k_bits)
{
    require(k_bits <= 1, "tiny verifier enumeration supports at most two certificates");
    require(target.size() >= 21, "window [0,N] with N < 20 is inconclusive");
    const std::size_t N = target.size() - 1;
    LowerBoundResult r;
    for (std::uint32_t i = 0; i < TinyPathVerifier::family_size(k_bits); ++i) {
        ++r.examined;
        auto v = TinyPathVerifier::nth(k_bits, i);
        auto table = v.successor_table();
        std::uint8_t cur = 1u << 5;
        bool ok = true;
        for (std::size_t t = 1; t <= N && ok; ++t) {
            cur = table[cur];
            ok = static_cast<bool>(cur >> 4 & 1) == target[t];
        }
        if (ok) {
            r.matched = v;
            return r;
        }
    }
    return r;
}

} // namespace certilab
