#pragma once

#include <cstdio>
#include <sstream>

#include "engine.hpp"

namespace certilab {

// ---------------------------------------------------------------- CSV helpers

inline std::string fixed6(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void comment(std::string line) { comments_.push_back(std::move(line)); }

    template <class... T>
    void row(const T&... cells)
    {
        std::vector<std::string> r;
        (r.push_back(cell(cells)), ...);
        require(r.size() == header_.size(), "row width differs from the header");
        rows_.push_back(std::move(r));
    }

    std::size_t size() const { return rows_.size(); }

    std::string str() const
    {
        std::string out;
        for (const auto& c : comments_) out += "# " + c + "\n";
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + quoted(r[i]);
            out += "\n";
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return out;
    }

private:
    static std::string quoted(const std::string& s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }

    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    static std::string cell(double x) { return fixed6(x); }
    template <class T>
        requires std::is_integral_v<T>
    static std::string cell(T x)
    {
        return std::to_string(x);
    }
    template <class T>
    static std::string cell(const std::optional<T>& x)
    {
        return x ? cell(*x) : std::string();
    }

    std::vector<std::string> header_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const
    {
        auto it = std::find(header.begin(), header.end(), name);
        require(it != header.end(), "missing column: " + name);
        return static_cast<std::size_t>(it - header.begin());
    }
};

inline ParsedCsv parse_csv(const std::string& text)
{
    ParsedCsv p;
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        bool in_quotes = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const char ch = s[i];
            if (ch == '"') {
                if (in_quotes && i + 1 < s.size() && s[i + 1] == '"') cur += s[++i];
                else in_quotes = !in_quotes;
            } else if (ch == ',' && !in_quotes) {
                out.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        out.push_back(cur);
        return out;
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (p.header.empty()) p.header = split(line);
        else p.rows.push_back(split(line));
    }
    return p;
}

// ---------------------------------------------------------------- experiment specs

struct ExperimentSpec {
    std::string kind;
    Json params = Json::object();
    std::uint64_t seed = 0;
    std::string out;

    static constexpr std::array<std::string_view, 7> kinds{"spectrum", "minsize",  "periodicity", "enumerate",
                                                          "soundness", "sequence", "landau"};

    Json to_json() const
    {
        Json j;
        j["kind"] = kind;
        j["params"] = params;
        j["seed"] = seed;
        j["out"] = out;
        return j;
    }

    static ExperimentSpec from_json(const Json& j)
    {
        ExperimentSpec s;
        try {
            s.kind = j.at("kind").get<std::string>();
            s.params = j.value("params", Json::object());
            s.seed = j.value("seed", std::uint64_t{0});
            s.out = j.value("out", std::string());
        } catch (const Json::exception& e) {
            throw InvalidInput(std::string("malformed experiment spec: ") + e.what());
        }
        require(std::find(kinds.begin(), kinds.end(), s.kind) != kinds.end(), "unknown experiment kind: " + s.kind);
        require(s.params.is_object(), "experiment params must be an object");
        return s;
    }
};

struct ExperimentOutput {
    std::string csv;
    Json summary = Json::object();
    std::vector<std::string> violations;
};

namespace detail {

template <class T>
T param(const ExperimentSpec& s, const std::string& key, T fallback)
{
    if (!s.params.contains(key)) return fallback;
    try {
        return s.params.at(key).get<T>();
    } catch (const Json::exception&) {
        throw InvalidInput("parameter " + key + " has the wrong type");
    }
}

inline GrowthFunction growth_by_name(const std::string& name)
{
    if (name == "half-log") return half_log_growth();
    if (name == "quarter-log") return quarter_log_growth();
    throw InvalidInput("unknown growth function: " + name + " (half-log, quarter-log)");
}

/// The verifier named by a spec: a catalog scheme at width k, or a table from JSON.
inline LocalVerifier spec_verifier(const ExperimentSpec& s)
{
    if (s.params.contains("verifier")) return verifier_from_json(s.params.at("verifier"));
    const auto name = param<std::string>(s, "scheme", "mod-0-3");
    auto e = catalog_entry(name);
    const auto k = param<unsigned>(s, "k", 2);
    return e.scheme.verifier(k);
}

inline Digraph nfa_graph(const Nfa& a)
{
    Digraph g(a.state_count());
    for (const auto& t : a.transitions) g.add_edge(t.from, t.to);
    return g;
}

inline std::vector<bool> named_set(const std::string& name, std::uint64_t m, std::size_t N)
{
    std::vector<bool> s(N + 1, false);
    if (name == "primorials") {
        for (auto a : primorials_upto(N)) s[a] = true;
    } else if (name == "squares") {
        for (std::uint64_t x = 0; x * x <= N; ++x) s[x * x] = true;
    } else if (name == "multiples") {
        require(m >= 1, "multiples need m >= 1");
        for (std::uint64_t x = 0; x <= N; x += m) s[x] = true;
    } else {
        throw InvalidInput("unknown set: " + name + " (primorials, squares, multiples)");
    }
    return s;
}

} // namespace detail

// ---------------------------------------------------------------- experiment kinds

/// Strongly connected components of the verifier's automaton (paths) or walk graph (cycles).
inline ExperimentOutput spectrum_experiment(const ExperimentSpec& s)
{
    auto v = detail::spec_verifier(s);
    const auto N = detail::param<std::uint64_t>(s, "N", 200);
    ExperimentOutput out;
    CsvTable csv({"scc_id", "size", "period"});
    out.summary["verifier"] = v.name();
    out.summary["width"] = v.width();
    out.summary["class"] = std::string(to_string(v.promise()));
    auto fill = [&](const WalkSpectrum& w) {
        for (std::size_t i = 0; i < w.sccs().size(); ++i)
            csv.row(i, w.sccs()[i].vertices.size(), w.sccs()[i].period);
    };
    if (v.promise() == Kind::Path) {
        const auto& a = cert_to_nfa(v);
        WalkSpectrum w(detail::nfa_graph(a));
        fill(w);
        auto eps = determinize_lasso(a);
        out.summary["states"] = a.state_count();
        out.summary["lengths"] = eps.to_json();
        auto bits = accepted_path_lengths(v, N);
        for (std::uint64_t n = 0; n <= N; ++n)
            if (eps.contains(n) != bits[n])
                out.violations.push_back("lasso disagrees with the automaton at length " + std::to_string(n));
    } else if (v.promise() == Kind::Cycle) {
        auto& w = cycle_spectrum(v);
        fill(w);
        std::vector<std::uint64_t> accepted;
        for (std::uint64_t n = 3; n <= N; ++n)
            if (w.closed_walk_exists(n)) accepted.push_back(n);
        out.summary["accepted_lengths"] = accepted;
        for (std::size_t c = 0; c < w.sccs().size(); ++c)
            if (w.sccs()[c].period && !walk_realizability_check(w, c).ok())
                out.violations.push_back("closed-walk realizability fails in component " + std::to_string(c));
    } else {
        throw InvalidInput("spectrum needs a path or cycle verifier");
    }
    out.summary["N"] = N;
    out.csv = csv.str();
    return out;
}

/// Prover width against the least width with an accepting assignment, per path length.
inline ExperimentOutput minsize_experiment(const ExperimentSpec& s)
{
    auto e = catalog_entry(detail::param<std::string>(s, "scheme", "primorial-complement"));
    require(e.scheme.promise == Kind::Path && e.scheme.id_mode == IdMode::Anonymous,
            "minsize runs on anonymous path schemes");
    const auto n_max = detail::param<std::uint64_t>(s, "n_max", 1000);
    const auto k_max = detail::param<unsigned>(s, "kmax", 8);
    require(n_max >= 1, "n_max must be positive");
    struct Row {
        std::uint64_t n;
        bool in;
        std::optional<unsigned> prover, min;
        double ll;
    };
    std::vector<Row> rows;
    ExperimentOutput out;
    double C = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        auto t = Topology::path(n);
        Row r{n, e.scheme.property(t), std::nullopt, min_cert_size_for_length(e.scheme, n, k_max), 0.0};
        if (n >= 3) r.ll = std::log2(std::log2(static_cast<double>(n)));
        if (r.in) {
            auto c = e.scheme.prover(t);
            r.prover = c.width;
            if (!run_verification(t, c, e.scheme.verifier(c.width)).globally_accepted)
                out.violations.push_back("prover assignment rejected at n = " + std::to_string(n));
            if (r.min && *r.min > c.width)
                out.violations.push_back("minimal width above prover width at n = " + std::to_string(n));
            if (n >= 4) C = std::max(C, c.width / r.ll);
        } else if (r.min) {
            out.violations.push_back("length outside the property accepted at n = " + std::to_string(n));
        }
        rows.push_back(r);
    }
    CsvTable csv({"n", "in_property", "prover_width", "min_width", "loglog_n", "bound"});
    csv.comment("minimal widths searched in 0.." + std::to_string(k_max));
    for (auto& r : rows) {
        std::optional<double> bound;
        if (r.n >= 4) bound = C * r.ll;
        csv.row(r.n, r.in, r.prover, r.min, r.ll, bound);
    }
    out.csv = csv.str();
    out.summary["scheme"] = e.scheme.name;
    out.summary["n_max"] = n_max;
    out.summary["kmax"] = k_max;
    out.summary["C"] = fixed6(C);
    return out;
}

/// Least (T, p) under which the named set looks eventually periodic on [0, N].
inline ExperimentOutput periodicity_experiment(const ExperimentSpec& s)
{
    const auto name = detail::param<std::string>(s, "set", "primorials");
    const auto N = detail::param<std::uint64_t>(s, "N", 10000);
    const auto m = detail::param<std::uint64_t>(s, "m", 1);
    require(N >= 3 && N <= (std::uint64_t{1} << 24), "N must lie in [3, 2^24]");
    auto bits = detail::named_set(name, m, N);
    auto w = periodicity_falsifier(bits);
    ExperimentOutput out;
    CsvTable csv({"set", "N", "verdict", "T", "p"});
    std::optional<std::uint64_t> T, p;
    if (w) T = w->first, p = w->second;
    csv.row(name, N, w ? "periodic" : "none", T, p);
    out.csv = csv.str();
    out.summary["set"] = name;
    if (name == "multiples") out.summary["m"] = m;
    out.summary["N"] = N;
    out.summary["verdict"] = w ? "periodic" : "none";
    if (w) out.summary["T"] = *T, out.summary["p"] = *p;
    return out;
}

/// Accepted radius-1 views of a path or cycle verifier.
inline ExperimentOutput enumerate_experiment(const ExperimentSpec& s)
{
    auto v = detail::spec_verifier(s);
    auto views = enumerate_accepted_views(v);
    CsvTable csv({"index", "encoding"});
    for (std::size_t i = 0; i < views.size(); ++i) csv.row(i, views[i]);
    ExperimentOutput out;
    out.csv = csv.str();
    out.summary["verifier"] = v.name();
    out.summary["width"] = v.width();
    out.summary["accepted_views"] = views.size();
    return out;
}

/// Soundness sweep of a catalog scheme over its generated negatives.
inline ExperimentOutput soundness_experiment(const ExperimentSpec& s)
{
    auto e = catalog_entry(detail::param<std::string>(s, "scheme", "primorial-complement"));
    const auto k_max = detail::param<unsigned>(s, "kmax", 8);
    const auto count = detail::param<std::size_t>(s, "count", 6);
    auto rep = soundness_sweep(e.scheme, e.negatives(s.seed, count), k_max);
    ExperimentOutput out;
    out.csv = rep.csv();
    for (auto& r : rep.violations())
        out.violations.push_back("instance " + std::to_string(r.instance_id) + " accepted at width " +
                                 std::to_string(r.k));
    out.summary["scheme"] = e.scheme.name;
    out.summary["kmax"] = k_max;
    out.summary["instances"] = count;
    out.summary["sound"] = rep.sound();
    return out;
}

/// Terms of the caterpillar sequences with the prefix inequality checked.
inline ExperimentOutput sequence_experiment(const ExperimentSpec& s)
{
    auto f = detail::growth_by_name(detail::param<std::string>(s, "f", "half-log"));
    const auto count = detail::param<std::size_t>(s, "count", 100);
    const auto kind = detail::param<std::string>(s, "kind", "A");
    require(kind == "A" || kind == "B", "sequence kind is A or B");
    auto a = build_sequence_a(f, count);
    ExperimentOutput out;
    CsvTable csv({"index", "term", "prefix_sum", "log_index", "f_prefix"});
    std::uint64_t prefix = 0;
    for (std::size_t d = 1; d <= count; ++d) {
        prefix += a.terms[d - 1];
        const double lg = std::log2(static_cast<double>(d)), fv = f(static_cast<double>(prefix));
        if (lg > fv + 1e-9 || fv > lg + 1 + 1e-9)
            out.violations.push_back("prefix inequality fails at d = " + std::to_string(d));
        const std::uint64_t term = kind == "A" ? a.terms[d - 1] : prefix - 2;
        csv.row(d, term, prefix, lg, fv);
    }
    out.csv = csv.str();
    out.summary["f"] = f.description;
    out.summary["kind"] = kind;
    out.summary["count"] = count;
    return out;
}

inline ExperimentOutput landau_experiment(const ExperimentSpec& s)
{
    const auto n_max = detail::param<std::size_t>(s, "n_max", 200);
    require(n_max >= 1 && n_max <= 200, "n_max must lie in [1, 200]");
    CsvTable csv({"n", "g"});
    ExperimentOutput out;
    BigInt prev = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        auto g = landau(n);
        if (g < prev) out.violations.push_back("landau decreases at n = " + std::to_string(n));
        prev = g;
        csv.row(n, g.str());
    }
    out.csv = csv.str();
    out.summary["n_max"] = n_max;
    out.summary["g"] = landau(n_max).str();
    return out;
}

inline ExperimentOutput run_experiment(const ExperimentSpec& s)
{
    ExperimentOutput out;
    if (s.kind == "spectrum") out = spectrum_experiment(s);
    else if (s.kind == "minsize") out = minsize_experiment(s);
    else if (s.kind == "periodicity") out = periodicity_experiment(s);
    else if (s.kind == "enumerate") out = enumerate_experiment(s);
    else if (s.kind == "soundness") out = soundness_experiment(s);
    else if (s.kind == "sequence") out = sequence_experiment(s);
    else if (s.kind == "landau") out = landau_experiment(s);
    else throw InvalidInput("unknown experiment kind: " + s.kind);
    Json full;
    full["spec"] = s.to_json();
    for (auto& [k, v] : out.summary.items()) full[k] = v;
    full["violations"] = out.violations;
    out.summary = std::move(full);
    return out;
}

// ---------------------------------------------------------------- SVG charts

/// Scatter chart of one or more numeric columns against an x column; empty cells are skipped.
inline std::string render_svg_chart(const std::string& csv_text, const std::string& x_col,
                                    const std::vector<std::string>& y_cols)
{
    require(!y_cols.empty(), "chart needs at least one y column");
    auto csv = parse_csv(csv_text);
    constexpr double W = 640, H = 400, L = 60, R = 20, T = 20, B = 50;
    std::vector<std::vector<std::pair<double, double>>> series(y_cols.size());
    bool have_columns = !csv.header.empty();
    if (have_columns) {
        const auto xi = csv.column(x_col);
        for (std::size_t s = 0; s < y_cols.size(); ++s) {
            const auto yi = csv.column(y_cols[s]);
            for (const auto& r : csv.rows) {
                if (xi >= r.size() || yi >= r.size() || r[xi].empty() || r[yi].empty()) continue;
                try {
                    series[s].emplace_back(std::stod(r[xi]), std::stod(r[yi]));
                } catch (const std::logic_error&) {
                    throw InvalidInput("non-numeric cell in column " + x_col + " or " + y_cols[s]);
                }
            }
        }
    }
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (auto& s : series)
        for (auto [x, y] : s) {
            if (first) x0 = x1 = x, y0 = y1 = y, first = false;
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    static constexpr std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + fixed6(L) + "\" y1=\"" + fixed6(H - B) + "\" x2=\"" + fixed6(W - R) + "\" y2=\"" +
           fixed6(H - B) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fixed6(L) + "\" y1=\"" + fixed6(T) + "\" x2=\"" + fixed6(L) + "\" y2=\"" + fixed6(H - B) +
           "\" stroke=\"black\"/>\n";
    auto text = [&](double x, double y, const std::string& s, const char* anchor) {
        std::string esc;
        for (char ch : s) {
            if (ch == '<') esc += "&lt;";
            else if (ch == '>') esc += "&gt;";
            else if (ch == '&') esc += "&amp;";
            else esc += ch;
        }
        svg += "<text x=\"" + fixed6(x) + "\" y=\"" + fixed6(y) + "\" font-size=\"12\" text-anchor=\"" + anchor +
               "\">" + esc + "</text>\n";
    };
    text((L + W - R) / 2, H - 10, x_col, "middle");
    if (!first) {
        text(L, H - B + 16, fixed6(x0), "start");
        text(W - R, H - B + 16, fixed6(x1), "end");
        text(L - 4, H - B, fixed6(y0), "end");
        text(L - 4, T + 10, fixed6(y1), "end");
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % colors.size()];
        text(W - R, T + 14.0 * (s + 1), y_cols[s], "end");
        svg += "<g fill=\"" + std::string(color) + "\">\n";
        for (auto [x, y] : series[s])
            svg += "<circle cx=\"" + fixed6(px(x)) + "\" cy=\"" + fixed6(py(y)) + "\" r=\"2\"/>\n";
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace certilab
