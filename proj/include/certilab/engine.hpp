#pragma once

#include <atomic>
#include <sstream>
#include <thread>

#include "cycle_graphs.hpp"
#include "path_automata.hpp"
#include "schemes.hpp"
#include "tree_tools.hpp"

namespace certilab {

/// Largest labeled pair automaton the engine builds before falling back to backtracking.
inline constexpr double labeled_nfa_state_cap = 1 << 16;

inline bool plain_instance(const Topology& t) { return !t.has_ids() && !t.n_hat(); }

/// Whether some width-k assignment makes every vertex of t accept.
inline bool exists_accepting_assignment(const Topology& t, const LocalVerifier& v)
{
    require(t.in_class(v.promise()), "topology outside the verifier's class promise");
    const auto r = v.radius();
    const std::size_t n = t.size();
    switch (v.promise()) {
    case Kind::Path:
        if (!plain_instance(t)) break;
        if (!t.labeled() && r == 1) return accepted_path_lengths(v, n)[n];
        if (t.labeled() && n >= 2 * r) {
            const int sigma = t.alphabet();
            const double bound = 2.0 * r * std::pow(static_cast<double>(cert_count(v.width())) * sigma, 2.0 * r);
            if (bound > labeled_nfa_state_cap) break;
            const auto& a = v.derived<Nfa>("nfa-labeled-" + std::to_string(sigma),
                                           [&] { return cert_to_nfa_labeled(v, sigma, r); });
            auto order = path_order(t);
            std::vector<std::uint32_t> word;
            for (Vertex x : order) word.push_back(static_cast<std::uint32_t>(t.label(x)));
            return a.accepts(word);
        }
        break;
    case Kind::Cycle:
        if (r == 1 && !t.labeled() && plain_instance(t)) return cycle_accepted(v, n);
        break;
    case Kind::Tree:
    case Kind::Caterpillar:
        if (r == 1) return tree_accepted(t, v).accepted;
        break;
    }
    return backtrack_assignment(t, v).has_value();
}

/// Runs the prover on an in-property instance and verifies its assignment.
inline bool check_completeness(const Scheme& s, const Topology& t)
{
    require(s.property(t), "completeness is only defined on instances of the property");
    auto c = s.prover(t);
    return run_verification(t, c, s.verifier(c.width)).globally_accepted;
}

struct SweepRow {
    std::size_t instance_id = 0;
    std::size_t n = 0;
    unsigned k = 0;
    bool accepting_exists = false;
};

struct SweepReport {
    std::string scheme;
    unsigned k_max = 0;
    std::vector<SweepRow> rows;

    std::vector<SweepRow> violations() const
    {
        std::vector<SweepRow> out;
        for (const auto& r : rows)
            if (r.accepting_exists) out.push_back(r);
        return out;
    }
    bool sound() const { return violations().empty(); }

    std::string csv() const
    {
        std::ostringstream os;
        os << "# soundness checked for widths 0.." << k_max << " only\n";
        os << "instance_id,n,k,accepting_exists\n";
        for (const auto& r : rows)
            os << r.instance_id << ',' << r.n << ',' << r.k << ',' << (r.accepting_exists ? 1 : 0) << '\n';
        return os.str();
    }
};

/// Runs f(0..count-1) on a few worker threads; f must write only to its own slot.
template <class F>
void parallel_for(std::size_t count, F&& f)
{
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto work = [&] {
        try {
            for (std::size_t i = next++; i < count; i = next++) f(i);
        } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            next = count;
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Searches every width 0..k_max for an accepting assignment on out-of-property instances.
inline SweepReport soundness_sweep(const Scheme& s, const std::vector<Topology>& instances, unsigned k_max)
{
    for (const auto& t : instances) require(!s.property(t), "soundness sweep instance satisfies the property");
    for (unsigned k = 0; k <= k_max; ++k) s.verifier(k);
    SweepReport rep{s.name, k_max, {}};
    std::vector<std::vector<SweepRow>> per(instances.size());
    parallel_for(instances.size(), [&](std::size_t i) {
        for (unsigned k = 0; k <= k_max; ++k)
            per[i].push_back({i, instances[i].size(), k, exists_accepting_assignment(instances[i], s.verifier(k))});
    });
    for (auto& p : per) rep.rows.insert(rep.rows.end(), p.begin(), p.end());
    return rep;
}

/// Least width at which the n-vertex path has an accepting assignment.
inline std::optional<unsigned> min_cert_size_for_length(const Scheme& s, std::size_t n, unsigned k_max)
{
    require(s.promise == Kind::Path, "minimum size is measured on path schemes");
    const auto t = Topology::path(n);
    for (unsigned k = 0; k <= k_max; ++k)
        if (exists_accepting_assignment(t, s.verifier(k))) return k;
    return std::nullopt;
}

} // namespace certilab
