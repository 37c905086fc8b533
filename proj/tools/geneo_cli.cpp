// geneo: command-line front end for persistence diagrams, matching distances,
// natural pseudo-distances and operator experiments on the sampled circle.
//
// Exit codes: 0 success, 1 assertion or validation failure, 2 usage or I/O error.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geneo/approximation.hpp"
#include "geneo/io.hpp"
#include "geneo/matching.hpp"
#include "geneo/opdsl.hpp"
#include "geneo/persistence.hpp"
#include "geneo/validate.hpp"

namespace fs = std::filesystem;
using namespace geneo;

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kUsageError = 2;

struct Source {
    bool builtin;
    std::string value;
};

// --builtin and --input may be mixed; their relative order decides which
// function is first, so they are recovered from argv rather than from two
// separate option vectors.
std::vector<Source> ordered_sources(int argc, char** argv) {
    std::vector<Source> out;
    for (int i = 1; i < argc; ++i) {
        const std::string_view a = argv[i];
        for (const auto& [flag, builtin] : {std::pair{"--builtin", true}, std::pair{"--input", false}}) {
            const std::string_view f = flag;
            if (a == f && i + 1 < argc) {
                out.push_back({builtin, argv[++i]});
            } else if (a.size() > f.size() && a.substr(0, f.size()) == f && a[f.size()] == '=') {
                out.push_back({builtin, std::string(a.substr(f.size() + 1))});
            }
        }
    }
    return out;
}

// GENEO_SEED beats the config file and the default; an explicit --seed on
// the command line still wins.
std::optional<std::uint64_t> env_seed(int argc, char** argv) {
    const char* env = std::getenv("GENEO_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    for (int i = 1; i < argc; ++i) {
        const std::string_view a = argv[i];
        if (a == "--seed" || a.substr(0, 7) == "--seed=") return std::nullopt;
    }
    const std::string_view text = env;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw CLI::ValidationError("GENEO_SEED must be a nonnegative integer, got '" + std::string(text) + "'");
    }
    return v;
}

SampledFunction load(const Source& s, std::size_t n) {
    return s.builtin ? builtin_function(s.value, GridCircle(n)) : read_function_csv(fs::path(s.value));
}

std::string label(const Source& s) { return s.builtin ? s.value : fs::path(s.value).filename().string(); }

std::string element_name(const GroupElement& g) { return g.is_identity() ? "identity" : g.to_string(); }

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot write");
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string diagram_plot_rows(const PersistenceDiagram& d) {
    std::ostringstream ss;
    write_diagram_csv(ss, d);
    return ss.str();
}

struct Common {
    std::size_t n = 360;
    std::string group = "rotations";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--n", c.n, "grid size")->check(CLI::Range(std::size_t{3}, std::size_t{1} << 24));
    cmd->add_option("--group", c.group, "rotations, dihedral or trivial");
}

void add_sources(CLI::App* cmd, std::vector<std::string>& builtins, std::vector<std::string>& inputs) {
    cmd->add_option("--builtin", builtins, "builtin function: abs_sin, sin_sq, sin_sq_root:p, constant:c");
    cmd->add_option("--input", inputs, "function CSV (index,value)");
}

std::vector<SampledFunction> load_all(const std::vector<Source>& sources, std::size_t n) {
    std::vector<SampledFunction> out;
    for (const auto& s : sources) out.push_back(load(s, n));
    return out;
}

// ---------------------------------------------------------------------------

int cmd_diagram(const std::vector<Source>& sources, const Common& c, const std::string& op_text,
                bool plot_data) {
    if (sources.size() != 1) throw CLI::ValidationError("diagram takes exactly one --builtin or --input");
    SampledFunction f = load(sources[0], c.n);
    if (!op_text.empty()) {
        const Group g = Group::from_name(c.group, f.grid());
        f = apply(parse_operator(op_text, g, FunctionSpace::unit_lipschitz()), f);
    }
    const auto d = sublevel_diagram(f);
    std::cout << (plot_data ? diagram_plot_rows(d) : dump(diagram_to_json(d)));
    return kOk;
}

int cmd_match(const std::string& a_path, const std::string& b_path) {
    const auto a = read_diagram(a_path);
    const auto b = read_diagram(b_path);
    std::cout << dump(matching_to_json(bottleneck(a, b), a, b));
    return kOk;
}

int cmd_dg(const std::vector<Source>& sources, const Common& c) {
    if (sources.size() != 2) throw CLI::ValidationError("dg takes exactly two functions");
    const auto f = load_all(sources, c.n);
    const Group g = Group::from_name(c.group, f[0].grid());
    const auto d = natural_pseudo_distance(f[0], f[1], g);
    Json j;
    j["first"] = label(sources[0]);
    j["second"] = label(sources[1]);
    j["group"] = c.group;
    j["d_G"] = json_number(d.value);
    j["minimizer"] = element_name(d.minimizer);
    std::cout << dump(j);
    return kOk;
}

int cmd_validate(const std::string& expr, const Common& c, std::size_t probes, std::uint64_t seed,
                 double tol) {
    const GridCircle grid(c.n);
    const Group g = Group::from_name(c.group, grid);
    const auto op = parse_operator(expr, g, FunctionSpace::unit_lipschitz());
    Rng rng(seed);
    const auto fs_ = probe_set(rng, grid, probes);
    const auto pairs = probe_pairs(rng, grid, probes);
    const auto eq = verify_equivariance(op, g, fs_);
    const auto ne = verify_nonexpansivity(op, pairs);

    Json j;
    j["expression"] = describe(op);
    j["validated"] = op.validated();
    j["seed"] = seed;
    j["probes"] = probes;
    j["equivariance"] = {{"max_violation", json_number(eq.max_violation)},
                         {"probe", eq.probe},
                         {"element", eq.element ? element_name(*eq.element) : "none"}};
    j["nonexpansivity"] = {{"max_excess", json_number(ne.max_excess)},
                           {"pair", ne.pair},
                           {"input_distance", json_number(ne.input_distance)},
                           {"output_distance", json_number(ne.output_distance)}};
    const bool ok = eq.max_violation <= tol && ne.max_excess <= tol;
    j["tolerance"] = tol;
    j["pass"] = ok;
    std::cout << dump(j);
    return ok ? kOk : kAssertionFailed;
}

int cmd_apply(const std::string& expr, const std::vector<Source>& sources, const Common& c,
              const std::string& closure, const std::string& out_path) {
    if (sources.size() != 1) throw CLI::ValidationError("apply takes exactly one function");
    const auto f = load(sources[0], c.n);
    const Group g = Group::from_name(c.group, f.grid());
    const auto space = FunctionSpace::unit_lipschitz();
    const auto op = parse_operator(expr, g, space);
    std::optional<SampledFunction> result;
    if (closure == "none") {
        result = apply(op, f);
    } else {
        try {
            auto r = apply_in(op, f, space, closure == "strict" ? ClosureMode::strict : ClosureMode::lax);
            for (const auto& v : r.violations) {
                std::cerr << "warning: output leaves the function space (" << v.constraint << " at index "
                          << v.index << ": " << format12(v.value) << " > " << format12(v.limit) << ")\n";
            }
            result = std::move(r.value);
        } catch (const ClosureError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kAssertionFailed;
        }
    }
    std::ostringstream ss;
    write_function_csv(ss, *result);
    if (out_path.empty()) {
        std::cout << ss.str();
    } else {
        write_file(out_path, ss.str());
    }
    return kOk;
}

int cmd_gap(const std::vector<Source>& sources, const Common& c, GapConfig cfg,
            const std::vector<std::string>& base, const std::string& format, const std::string& out_path) {
    if (sources.size() < 2) throw CLI::ValidationError("gap needs a corpus of at least two functions");
    const auto corpus = load_all(sources, c.n);
    const Group g = Group::from_name(c.group, corpus[0].grid());
    const auto space = FunctionSpace::unit_lipschitz();
    for (const auto& b : base) cfg.base_family.push_back({b, parse_operator(b, g, space)});
    for (auto& b : cfg.base_family) b.id = describe(b.op);
    const auto report = gap_report(cfg, corpus, g, space);
    std::string text;
    if (format == "csv") {
        std::ostringstream ss;
        write_gap_csv(ss, report);
        text = ss.str();
    } else {
        Json j = gap_report_json(report);
        Json names = Json::array();
        for (const auto& s : sources) names.push_back(label(s));
        j["corpus"] = std::move(names);
        j["group"] = c.group;
        j["n"] = c.n;
        text = dump(j);
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
    bool sound = true;
    for (const auto& r : report.records) sound = sound && r.gap >= -1e-9;
    if (!sound) std::cerr << "error: a lower bound exceeds d_G\n";
    return sound ? kOk : kAssertionFailed;
}

// ---------------------------------------------------------------------------
// Worked-example bundle

struct PairPlan {
    std::string name;
    std::string second_builtin;
    double p;
};

struct Comparison {
    std::string stage;
    double distance;
    bool expect_zero;
    bool pass;
};

int cmd_reproduce(const fs::path& out_dir, double p, std::size_t n, double tol) {
    if (n % 4 != 0) throw CLI::ValidationError("reproduce-paper needs --n divisible by 4");
    if (!(p >= 1.0)) throw CLI::ValidationError("reproduce-paper needs --p >= 1");
    const GridCircle grid(n);
    const Group rot = Group::cyclic(grid);
    const auto space = FunctionSpace::unit_lipschitz();
    const auto quarter = precompose(GroupElement::rotation(n, static_cast<std::int64_t>(n / 4)), rot);
    const auto phi = abs_sin(grid);

    const std::vector<PairPlan> pairs{{"p1", "sin_sq", 1.0},
                                      {"p" + format12(p), "sin_sq_root:" + format12(p), p}};
    Json summary;
    summary["n"] = n;
    summary["p"] = json_number(p);
    summary["tolerance"] = tol;
    Json pair_json = Json::array();
    std::vector<std::string> failures;

    write_file(out_dir / "functions" / "abs_sin.csv", [&] {
        std::ostringstream ss;
        write_function_csv(ss, phi);
        return ss.str();
    }());

    for (const auto& plan : pairs) {
        const auto psi = builtin_function(plan.second_builtin, grid);
        const Operator mean = power_mean(plan.p, {Operator::identity(), quarter});
        const std::vector<std::pair<std::string, Operator>> stages{
            {"raw", Operator::identity()}, {"F1", Operator::identity()}, {"F2", quarter}, {"M", mean}};
        const std::string psi_name = plan.second_builtin == "sin_sq" ? "sin_sq" : "sin_sq_root_" + format12(plan.p);

        Json pj;
        pj["name"] = plan.name;
        pj["first"] = "abs_sin";
        pj["second"] = plan.second_builtin;
        pj["operator"] = describe(mean);
        const double dg = natural_pseudo_distance(phi, psi, rot).value;
        pj["d_G"] = json_number(dg);
        {
            std::ostringstream ss;
            write_function_csv(ss, psi);
            write_file(out_dir / "functions" / (psi_name + ".csv"), ss.str());
        }

        Json comps = Json::array();
        for (const auto& [stage, op] : stages) {
            const std::string tag = stage == "M" ? "M" + format12(plan.p) : stage;
            const auto a = apply(op, phi);
            const auto b = apply(op, psi);
            const auto da = sublevel_diagram(a);
            const auto db = sublevel_diagram(b);
            const auto prefix = out_dir / "diagrams" / plan.name;
            write_file(prefix / ("abs_sin_" + tag + ".json"), dump(diagram_to_json(da)));
            write_file(prefix / (psi_name + "_" + tag + ".json"), dump(diagram_to_json(db)));
            if (stage != "raw") {
                std::ostringstream sa, sb;
                write_function_csv(sa, a);
                write_function_csv(sb, b);
                write_file(out_dir / "functions" / plan.name / ("abs_sin_" + tag + ".csv"), sa.str());
                write_file(out_dir / "functions" / plan.name / (psi_name + "_" + tag + ".csv"), sb.str());
            }
            const auto m = bottleneck(da, db);
            write_file(prefix / ("matching_" + tag + ".json"), dump(matching_to_json(m, da, db)));

            const bool expect_zero = stage != "M";
            const bool pass = expect_zero ? m.distance <= tol : m.distance > tol;
            const bool sound = m.distance <= dg + 1e-9;
            if (!pass) {
                failures.push_back(plan.name + " " + tag + ": d_match = " + format12(m.distance) +
                                   (expect_zero ? " is not 0" : " is not positive"));
            }
            if (!sound) {
                failures.push_back(plan.name + " " + tag + ": d_match = " + format12(m.distance) +
                                   " exceeds d_G = " + format12(dg));
            }
            comps.push_back({{"stage", tag},
                             {"d_match", json_number(m.distance)},
                             {"expected", expect_zero ? "zero" : "positive"},
                             {"pass", pass && sound}});
        }
        pj["comparisons"] = std::move(comps);
        pair_json.push_back(std::move(pj));
    }
    summary["pairs"] = std::move(pair_json);
    summary["failures"] = failures;
    summary["pass"] = failures.empty();
    write_file(out_dir / "summary.json", dump(summary));
    std::cout << dump(summary);
    for (const auto& f : failures) std::cerr << "assertion failed: " << f << '\n';
    return failures.empty() ? kOk : kAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GENEO toolkit: persistence, matching distance and equivariant operators on the circle"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style configuration file");

    Common common;
    std::vector<std::string> builtins, inputs;
    std::uint64_t seed = 0;
    double tol = 1e-12;

    auto* diagram = app.add_subcommand("diagram", "sublevel persistence diagram of a function");
    add_common(diagram, common);
    add_sources(diagram, builtins, inputs);
    std::string diagram_op;
    bool plot_data = false;
    diagram->add_option("--op", diagram_op, "operator applied before computing the diagram");
    diagram->add_flag("--plot-data", plot_data, "emit birth,death rows instead of JSON");

    auto* match = app.add_subcommand("match", "bottleneck distance between two diagram files");
    std::string match_a, match_b;
    match->add_option("first", match_a, "diagram (.json or .csv)")->required();
    match->add_option("second", match_b, "diagram (.json or .csv)")->required();

    auto* dg = app.add_subcommand("dg", "natural pseudo-distance by exhaustive group scan");
    add_common(dg, common);
    add_sources(dg, builtins, inputs);

    auto* validate = app.add_subcommand("validate", "probe an operator for equivariance and non-expansivity");
    add_common(validate, common);
    std::string validate_expr;
    std::size_t probes = 100;
    validate->add_option("expression", validate_expr, "operator expression")->required();
    validate->add_option("--probes", probes, "random probes and probe pairs");
    validate->add_option("--seed", seed, "random seed (GENEO_SEED overrides the config file)");
    validate->add_option("--tol", tol, "tolerance for both checks");

    auto* apply_cmd = app.add_subcommand("apply", "apply an operator to a function");
    add_common(apply_cmd, common);
    add_sources(apply_cmd, builtins, inputs);
    std::string apply_expr, closure = "none", apply_out;
    apply_cmd->add_option("expression", apply_expr, "operator expression")->required();
    apply_cmd->add_option("--closure", closure, "check the output against the function space")
        ->check(CLI::IsMember({"none", "lax", "strict"}));
    apply_cmd->add_option("--out", apply_out, "output CSV (default stdout)");

    auto* gap = app.add_subcommand("gap", "lower bounds from random operator families versus d_G");
    add_common(gap, common);
    add_sources(gap, builtins, inputs);
    GapConfig gap_cfg;
    std::vector<std::string> base;
    std::string gap_format = "json", gap_out;
    gap->add_option("--seed", gap_cfg.seed, "random seed (GENEO_SEED overrides the config file)");
    gap->add_option("--sizes", gap_cfg.family_sizes, "family sizes")->delimiter(',');
    gap->add_option("--max-depth", gap_cfg.max_depth, "maximum tree depth")->check(CLI::Range(1, 16));
    gap->add_option("--base", base, "operator placed in every family");
    gap->add_option("--format", gap_format)->check(CLI::IsMember({"json", "csv"}));
    gap->add_option("--out", gap_out, "output file (default stdout)");

    auto* reproduce = app.add_subcommand("reproduce-paper", "regenerate the worked examples with checks");
    std::string out_dir = "example_output";
    double p = 3.0;
    std::size_t rn = 360;
    double rtol = 1e-9;
    reproduce->add_option("--out", out_dir, "output directory");
    reproduce->add_option("--p", p, "power-mean exponent for the second pair");
    reproduce->add_option("--n", rn, "grid size (divisible by 4)")->check(CLI::Range(std::size_t{4}, std::size_t{1} << 20));
    reproduce->add_option("--tol", rtol, "zero tolerance for matching distances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (const auto env = env_seed(argc, argv)) {
            seed = *env;
            gap_cfg.seed = *env;
        }
        const auto sources = ordered_sources(argc, argv);
        if (*diagram) return cmd_diagram(sources, common, diagram_op, plot_data);
        if (*match) return cmd_match(match_a, match_b);
        if (*dg) return cmd_dg(sources, common);
        if (*validate) return cmd_validate(validate_expr, common, probes, seed, tol);
        if (*apply_cmd) return cmd_apply(apply_expr, sources, common, closure, apply_out);
        if (*gap) return cmd_gap(sources, common, gap_cfg, base, gap_format, gap_out);
        if (*reproduce) return cmd_reproduce(out_dir, p, rn, rtol);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}
