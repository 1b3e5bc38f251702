#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <certilab/experiments.hpp>

using namespace certilab;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Json read_json(const std::string& path)
{
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void emit(const std::string& out, const std::string& text)
{
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    require(static_cast<bool>(f), "cannot write " + out);
    f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Writes the CSV (and the summary next to it when writing to a file); 2 when violations were found.
int finish(const ExperimentOutput& r, const std::string& out)
{
    emit(out, r.csv);
    if (!out.empty()) emit(out + ".json", dump(r.summary));
    for (const auto& v : r.violations) std::cerr << "invariant violation: " << v << "\n";
    return r.violations.empty() ? 0 : 2;
}

struct Options {
    std::string name, verifier, out, set = "primorials", f = "half-log", kind = "A", tree, parsing, csv, x, y;
    std::optional<std::uint64_t> n, khat;
    std::uint64_t N = 200, m = 1, seed = 0, count = 6;
    unsigned k = 2, kmax = 8;
    std::uint32_t radius = 1, u = 0, v = 0;
};

void verifier_source(CLI::App* c, Options& o)
{
    c->add_option("--name", o.name, "catalog scheme name");
    c->add_option("--verifier", o.verifier, "verifier table JSON file");
    c->add_option("--k", o.k, "certificate width");
}

ExperimentSpec spec_with_verifier(const std::string& kind, const Options& o)
{
    ExperimentSpec s;
    s.kind = kind;
    s.seed = o.seed;
    s.out = o.out;
    if (!o.verifier.empty()) s.params["verifier"] = read_json(o.verifier);
    else s.params["scheme"] = o.name.empty() ? std::string("mod-0-3") : o.name;
    s.params["k"] = o.k;
    return s;
}

int scheme_run(const Options& o)
{
    require(!o.name.empty(), "scheme run needs --name");
    require(o.n.has_value(), "scheme run needs --n");
    auto e = catalog_entry(o.name);
    auto t = e.instance(*o.n, o.khat, o.seed);
    const bool in = e.scheme.property(t);
    bool accepted = false;
    std::optional<unsigned> width;
    if (in) {
        auto c = e.scheme.prover(t);
        width = c.width;
        accepted = run_verification(t, c, e.scheme.verifier(c.width)).globally_accepted;
    } else {
        for (unsigned k = 0; k <= o.kmax && !accepted; ++k)
            if (exists_accepting_assignment(t, e.scheme.verifier(k))) accepted = true, width = k;
    }
    CsvTable csv({"n", "in_property", "accepted", "width_used"});
    csv.row(t.size(), in, accepted, width);
    emit(o.out, csv.str());
    return in == accepted ? 0 : 2;
}

int scheme_list(const Options& o)
{
    CsvTable csv({"name", "class", "radius", "id_mode", "size_bound", "property"});
    for (auto& e : scheme_catalog())
        csv.row(e.scheme.name, std::string(to_string(e.scheme.promise)), e.scheme.radius,
                std::string(to_string(e.scheme.id_mode)), e.scheme.size_bound, e.property);
    emit(o.out, csv.str());
    return 0;
}

int eps_command(const Options& o)
{
    auto s = spec_with_verifier("spectrum", o);
    auto v = detail::spec_verifier(s);
    require(v.promise() == Kind::Path && v.radius() == 1, "eps needs a radius-1 path verifier");
    Json j;
    j["verifier"] = v.name();
    j["width"] = v.width();
    const auto lengths = determinize_lasso(cert_to_nfa(v)).to_json();
    for (auto& [key, val] : lengths.items()) j[key] = val;
    emit(o.out, dump(j));
    return 0;
}

int arith_classify(const Options& o)
{
    require(o.n.has_value(), "arith classify needs --n");
    auto c = classify_primorial(*o.n);
    Json j;
    j["n"] = *o.n;
    j["in_s"] = c.in_s;
    if (!c.in_s) {
        j["condition"] = c.condition;
        if (c.condition == 2) j["l"] = c.first, j["k"] = c.second;
        if (c.condition == 3) j["k"] = c.first, j["m"] = c.second;
    }
    emit(o.out, dump(j));
    return 0;
}

int arith_landau(const Options& o)
{
    require(o.n.has_value(), "arith landau needs --n");
    Json j;
    j["n"] = *o.n;
    j["g"] = landau(*o.n).str();
    emit(o.out, dump(j));
    return 0;
}

int tree_parse(const Options& o)
{
    auto t = Topology::from_json(read_json(o.tree));
    emit(o.out, dump(parse(t, o.u, o.v).to_json()));
    return 0;
}

int tree_glue(const Options& o)
{
    auto p = TreeParsing::from_json(read_json(o.parsing));
    emit(o.out, dump(glue(p).to_json()));
    return 0;
}

int chart(const Options& o)
{
    require(!o.csv.empty() && !o.x.empty() && !o.y.empty(), "chart needs --csv, --x and --y");
    std::vector<std::string> ys;
    std::stringstream ss(o.y);
    for (std::string col; std::getline(ss, col, ',');) ys.push_back(col);
    emit(o.out, render_svg_chart(read_file(o.csv), o.x, ys));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"certilab: local certification experiments on paths, cycles and trees"};
    app.require_subcommand(1);
    Options o;
    std::function<int()> action;
    auto common = [&](CLI::App* c) {
        c->add_option("--out", o.out, "output file (stdout when omitted)");
        c->add_option("--seed", o.seed, "random seed");
    };

    auto* scheme = app.add_subcommand("scheme", "certification schemes")->require_subcommand(1);
    auto* run = scheme->add_subcommand("run", "certify one instance");
    run->add_option("--name", o.name, "scheme name")->required();
    run->add_option("--n", o.n, "instance size")->required();
    run->add_option("--khat", o.khat, "estimate of n given to every vertex");
    run->add_option("--kmax", o.kmax, "largest width searched outside the property");
    common(run);
    run->callback([&] { action = [&] { return scheme_run(o); }; });
    auto* list = scheme->add_subcommand("list", "list the catalog");
    common(list);
    list->callback([&] { action = [&] { return scheme_list(o); }; });
    auto* sweep = scheme->add_subcommand("sweep", "soundness sweep over generated negatives");
    sweep->add_option("--name", o.name, "scheme name")->required();
    sweep->add_option("--kmax", o.kmax, "largest width");
    sweep->add_option("--count", o.count, "number of negative instances");
    common(sweep);
    sweep->callback([&] {
        action = [&] {
            ExperimentSpec s{"soundness", Json::object(), o.seed, o.out};
            s.params["scheme"] = o.name;
            s.params["kmax"] = o.kmax;
            s.params["count"] = o.count;
            return finish(run_experiment(s), o.out);
        };
    });

    auto* eps = app.add_subcommand("eps", "accepted path lengths as an eventually periodic set");
    verifier_source(eps, o);
    common(eps);
    eps->callback([&] { action = [&] { return eps_command(o); }; });

    auto* enumerate = app.add_subcommand("enumerate", "accepted radius-1 views");
    verifier_source(enumerate, o);
    common(enumerate);
    enumerate->callback([&] { action = [&] { return finish(run_experiment(spec_with_verifier("enumerate", o)), o.out); }; });

    auto* spectrum = app.add_subcommand("spectrum", "strongly connected components and periods");
    verifier_source(spectrum, o);
    spectrum->add_option("--N", o.N, "window for length checks");
    spectrum->add_option("--radius", o.radius, "verifier radius (radius 1 only)");
    common(spectrum);
    spectrum->callback([&] {
        action = [&] {
            require(o.radius == 1, "spectrum is implemented for radius 1");
            auto s = spec_with_verifier("spectrum", o);
            s.params["N"] = o.N;
            return finish(run_experiment(s), o.out);
        };
    });

    auto* minsize = app.add_subcommand("minsize", "prover width against minimal width per length");
    minsize->add_option("--name", o.name, "path scheme name");
    minsize->add_option("--n", o.n, "largest length");
    minsize->add_option("--kmax", o.kmax, "largest width searched");
    common(minsize);
    minsize->callback([&] {
        action = [&] {
            ExperimentSpec s{"minsize", Json::object(), o.seed, o.out};
            s.params["scheme"] = o.name.empty() ? std::string("primorial-complement") : o.name;
            s.params["n_max"] = o.n.value_or(1000);
            s.params["kmax"] = o.kmax;
            return finish(run_experiment(s), o.out);
        };
    });

    auto* periodicity = app.add_subcommand("periodicity", "periodicity falsifier on a window");
    periodicity->add_option("--set", o.set, "primorials, squares or multiples");
    periodicity->add_option("--m", o.m, "modulus for multiples");
    periodicity->add_option("--N", o.N, "window [0, N]");
    common(periodicity);
    periodicity->callback([&] {
        action = [&] {
            ExperimentSpec s{"periodicity", Json::object(), o.seed, o.out};
            s.params["set"] = o.set;
            s.params["m"] = o.m;
            s.params["N"] = o.N;
            return finish(run_experiment(s), o.out);
        };
    });

    auto* arith = app.add_subcommand("arith", "number theory helpers")->require_subcommand(1);
    auto* classify = arith->add_subcommand("classify", "primorial membership and witness condition");
    classify->add_option("--n", o.n)->required();
    common(classify);
    classify->callback([&] { action = [&] { return arith_classify(o); }; });
    auto* landau_cmd = arith->add_subcommand("landau", "maximal lcm over partitions of n");
    landau_cmd->add_option("--n", o.n)->required();
    common(landau_cmd);
    landau_cmd->callback([&] { action = [&] { return arith_landau(o); }; });
    auto* sequence = arith->add_subcommand("sequence", "caterpillar sequences");
    sequence->add_option("--f", o.f, "half-log or quarter-log");
    sequence->add_option("--kind", o.kind, "A or B");
    sequence->add_option("--N", o.N, "number of terms");
    common(sequence);
    sequence->callback([&] {
        action = [&] {
            ExperimentSpec s{"sequence", Json::object(), o.seed, o.out};
            s.params["f"] = o.f;
            s.params["kind"] = o.kind;
            s.params["count"] = o.N;
            return finish(run_experiment(s), o.out);
        };
    });
    auto* landau_table = arith->add_subcommand("landau-table", "landau values for 1..n");
    landau_table->add_option("--n", o.n)->required();
    common(landau_table);
    landau_table->callback([&] {
        action = [&] {
            ExperimentSpec s{"landau", Json::object(), o.seed, o.out};
            s.params["n_max"] = *o.n;
            return finish(run_experiment(s), o.out);
        };
    });

    auto* tree = app.add_subcommand("tree", "tree parsings")->require_subcommand(1);
    auto* tparse = tree->add_subcommand("parse", "split a tree along the u-v path");
    tparse->add_option("--tree", o.tree, "topology JSON file")->required();
    tparse->add_option("--u", o.u)->required();
    tparse->add_option("--v", o.v)->required();
    common(tparse);
    tparse->callback([&] { action = [&] { return tree_parse(o); }; });
    auto* tglue = tree->add_subcommand("glue", "glue a parsing back into a tree");
    tglue->add_option("--parsing", o.parsing, "parsing JSON file")->required();
    common(tglue);
    tglue->callback([&] { action = [&] { return tree_glue(o); }; });

    auto* chart_cmd = app.add_subcommand("chart", "SVG scatter chart from a CSV file");
    chart_cmd->add_option("--csv", o.csv)->required();
    chart_cmd->add_option("--x", o.x)->required();
    chart_cmd->add_option("--y", o.y, "comma-separated columns")->required();
    common(chart_cmd);
    chart_cmd->callback([&] { action = [&] { return chart(o); }; });

    auto* run_spec = app.add_subcommand("run", "run an experiment spec file");
    std::string spec_path;
    run_spec->add_option("--spec", spec_path, "experiment spec JSON")->required();
    run_spec->callback([&] {
        action = [&] {
            auto s = ExperimentSpec::from_json(read_json(spec_path));
            return finish(run_experiment(s), s.out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    try {
        return action ? action() : 1;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CapacityExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    }
}
