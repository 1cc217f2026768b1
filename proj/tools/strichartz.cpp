// strichartz: evaluate, extremize, verify and sweep from the command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "strichartz/asymptotics.hpp"
#include "strichartz/bilinear_refined.hpp"
#include "strichartz/error.hpp"
#include "strichartz/extremizer.hpp"
#include "strichartz/parallel.hpp"
#include "strichartz/spacetime_norms.hpp"
#include "strichartz/suites.hpp"
#include "strichartz/thresholds.hpp"

#ifndef STRICHARTZ_VERSION
#define STRICHARTZ_VERSION "dev"
#endif

using namespace strichartz;
using json = nlohmann::ordered_json;

namespace {

struct Settings {
    std::optional<double> alpha, q, r;
    std::string profile = "gaussian";
    std::optional<std::size_t> grid_n;
    std::optional<double> grid_l;
    double window_tol = 1e-4;
    std::uint64_t seed = 1;
    std::string out;
    unsigned threads = 0;
    // sweep
    std::string kind = "threshold";
    std::optional<double> from, to, step;

    // Used for config-file values; flags given on the command line win.
    void apply(const std::string& key, const std::string& v) {
        auto num = [&] {
            double d = 0.0;
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
            if (ec != std::errc() || p != v.data() + v.size())
                fail(errc::invalid_input, "config key '" + key + "': '" + v + "' is not a number");
            return d;
        };
        if (key == "alpha") alpha = num();
        else if (key == "q") q = num();
        else if (key == "r") r = num();
        else if (key == "profile") profile = v;
        else if (key == "grid-n") grid_n = static_cast<std::size_t>(num());
        else if (key == "grid-l") grid_l = num();
        else if (key == "window-tol") window_tol = num();
        else if (key == "seed") seed = static_cast<std::uint64_t>(num());
        else if (key == "out") out = v;
        else if (key == "threads") threads = static_cast<unsigned>(num());
        else if (key == "kind") kind = v;
        else if (key == "from") from = num();
        else if (key == "to") to = num();
        else if (key == "step") step = num();
        else fail(errc::invalid_input, "unknown config key '" + key + "'");
    }
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string canonical_key(std::string k) {
    for (char& c : k)
        if (c == '_') c = '-';
    return k;
}

// Flat key = value lines ('#' comments), or JSON: a run manifest's "flags"
// object or a flat top-level object.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_input, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::map<std::string, std::string> kv;
    if (trim(text).starts_with("{")) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            fail(errc::invalid_input, "config '" + path + "': " + e.what());
        }
        const json& flags = j.contains("flags") ? j["flags"] : j;
        for (auto it = flags.begin(); it != flags.end(); ++it) {
            if (it.value().is_null()) continue;
            kv[canonical_key(it.key())] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
        }
        return kv;
    }
    std::istringstream lines(text);
    std::string line;
    for (int no = 1; std::getline(lines, line); ++no) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::invalid_input, path + ":" + std::to_string(no) + ": expected key = value");
        kv[canonical_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) {
        if (s->find_first_of(",\"\n") == std::string::npos) return *s;
        std::string q = "\"";
        for (char ch : *s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const double d = std::get<double>(c);
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, p);
}

json cell_json(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<double>(c);
}

struct Run {
    std::string command;
    Settings s;
    std::vector<Table> tables;
    json summary = json::object();
    std::vector<std::string> notes;
};

json manifest_json(const Run& run, double wall) {
    const Settings& s = run.s;
    json flags = json::object();
    auto opt = [&](const char* k, const auto& v) {
        if (v) flags[k] = *v;
    };
    opt("alpha", s.alpha);
    opt("q", s.q);
    opt("r", s.r);
    flags["profile"] = s.profile;
    opt("grid-n", s.grid_n);
    opt("grid-l", s.grid_l);
    flags["window-tol"] = s.window_tol;
    flags["seed"] = s.seed;
    if (run.command.starts_with("sweep")) {
        flags["kind"] = s.kind;
        opt("from", s.from);
        opt("to", s.to);
        opt("step", s.step);
    }
    json m;
    m["command"] = run.command;
    m["flags"] = flags;
    m["grid"] = {{"n", s.grid_n ? json(*s.grid_n) : json()}, {"l", s.grid_l ? json(*s.grid_l) : json()}};
    m["alpha"] = s.alpha ? json(*s.alpha) : json();
    m["q"] = s.q ? json(*s.q) : json();
    m["r"] = s.r ? json(*s.r) : json();
    m["window"] = {{"tol", s.window_tol}};
    m["seed"] = s.seed;
    m["version"] = STRICHARTZ_VERSION;
    m["wall_time_s"] = wall;
    m["summary"] = run.summary;
    m["notes"] = run.notes;
    json files = json::array();
    for (const auto& t : run.tables) files.push_back(std::filesystem::path(run.s.out).filename().string() + "." + t.name);
    m["tables"] = files;
    return m;
}

// <out>.<table>.csv and .json per table plus <out>.manifest.json; every row
// names the manifest.
void write_outputs(const Run& run, double wall) {
    if (run.s.out.empty()) return;
    const std::filesystem::path stem(run.s.out);
    if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
    const std::string manifest = stem.filename().string() + ".manifest.json";
    for (const auto& t : run.tables) {
        std::ofstream csv(run.s.out + "." + t.name + ".csv");
        csv << "manifest";
        for (const auto& c : t.columns) csv << ',' << c;
        csv << '\n';
        json rows = json::array();
        for (const auto& row : t.rows) {
            csv << manifest;
            json o;
            o["manifest"] = manifest;
            for (std::size_t i = 0; i < row.size(); ++i) {
                csv << ',' << cell_text(row[i]);
                o[t.columns[i]] = cell_json(row[i]);
            }
            csv << '\n';
            rows.push_back(std::move(o));
        }
        std::ofstream(run.s.out + "." + t.name + ".json") << json{{"table", t.name}, {"manifest", manifest}, {"rows", rows}}.dump(2)
                                                         << '\n';
    }
    std::ofstream(run.s.out + ".manifest.json") << manifest_json(run, wall).dump(2) << '\n';
}

WaveFunction make_profile(const std::string& spec, const SpectralGrid& g) {
    if (spec == "zero") return WaveFunction(g, cvec(g.size(), cplx(0.0)));
    std::istringstream in(spec);
    const auto fam = read_family(in, g);
    if (fam.size() != 1) fail(errc::invalid_input, "--profile needs exactly one family line");
    return fam.front().u;
}

WindowConfig window(const Settings& s) {
    WindowConfig w;
    w.tol = s.window_tol;
    return w;
}

// Fills the defaults in so the manifest records what actually ran.
void resolve(Settings& s, double alpha, std::size_t n, double l) {
    s.alpha = s.alpha.value_or(alpha);
    s.q = s.q.value_or(6.0);
    s.r = s.r.value_or(6.0);
    s.grid_n = s.grid_n.value_or(n);
    s.grid_l = s.grid_l.value_or(l);
}

int cmd_evaluate(Run& run) {
    resolve(run.s, 2.0, 2048, 40.0);
    const Settings& s = run.s;
    const double alpha = *s.alpha, q = *s.q, r = *s.r;
    const SpectralGrid g(*s.grid_n, *s.grid_l);
    const WaveFunction u = make_profile(s.profile, g);
    const NormReport rep = strichartz_ratio_report(u, alpha, q, r, window(s));
    Table t{"evaluate", {"alpha", "q", "r", "profile", "norm", "ratio", "halfwidth", "doublings", "tail_fraction"}, {}};
    t.add({alpha, q, r, s.profile, rep.norm, rep.ratio, rep.halfwidth, static_cast<long long>(rep.doublings),
           rep.tail_fraction});
    run.tables.push_back(std::move(t));
    run.summary = {{"ratio", rep.ratio}, {"norm", rep.norm}};
    std::cout.precision(10);
    std::cout << "ratio " << rep.ratio << '\n';
    return 0;
}

int cmd_extremize(Run& run) {
    Settings& s = run.s;
    const double alpha = s.alpha.value_or(2.0), q = s.q.value_or(6.0), r = s.r.value_or(6.0);
    check_alpha(alpha);
    ExtremizerConfig cfg;
    cfg.seed = s.seed;
    cfg.window = window(s);
    if (s.grid_n) cfg.grid_points = *s.grid_n;
    if (s.grid_l) cfg.extent = *s.grid_l;
    const ExtremizerResult res = extremize(alpha, q, r, cfg);
    resolve(s, alpha, res.setup.grid.size(), res.setup.grid.extent());
    const ThresholdReport rep = precompactness_report(alpha, q, r, res.final_ratio, 1e-2 * res.final_ratio);
    Table t{"extremize",
            {"alpha", "q", "r", "seed", "converged", "iterations", "final_ratio", "threshold", "margin", "verdict",
             "threshold_source"},
            {}};
    t.add({alpha, q, r, static_cast<long long>(s.seed), static_cast<long long>(res.converged),
           static_cast<long long>(res.iterations), res.final_ratio, rep.threshold, rep.margin,
           std::string(to_string(rep.verdict)), rep.threshold_source});
    Table h{"ratio_history", {"iteration", "ratio"}, {}};
    for (std::size_t i = 0; i < res.ratio_history.size(); ++i)
        h.add({static_cast<long long>(i), res.ratio_history[i]});
    Table p{"profile", {"x", "re", "im"}, {}};
    for (std::size_t j = 0; j < res.profile.values.size(); ++j)
        p.add({res.profile.grid.x(j), res.profile.values[j].real(), res.profile.values[j].imag()});
    run.tables = {std::move(t), std::move(h), std::move(p)};
    run.summary = {{"converged", res.converged},   {"iterations", res.iterations},
                   {"final_ratio", res.final_ratio}, {"threshold", rep.threshold},
                   {"margin", rep.margin},           {"verdict", to_string(rep.verdict)}};
    std::cout.precision(10);
    std::cout << "final_ratio " << res.final_ratio << " (" << (res.converged ? "converged" : "not converged") << ", "
              << res.iterations << " iterations)\nthreshold " << rep.threshold << " [" << rep.threshold_source
              << "] margin " << rep.margin << ' ' << to_string(rep.verdict) << '\n';
    if (!res.converged) {
        std::cerr << "no-convergence: ratio did not settle within the iteration budget\n";
        return 3;
    }
    return 0;
}

int cmd_verify(Run& run, const std::string& suite) {
    const Settings& s = run.s;
    SuiteOptions o;
    o.alpha = s.alpha;
    o.q = s.q;
    o.r = s.r;
    o.grid_n = s.grid_n.value_or(0);
    o.grid_l = s.grid_l.value_or(0.0);
    o.window_tol = s.window_tol;
    o.seed = s.seed;
    SuiteResult res = run_suite(suite, o);
    json checks = json::array();
    for (const auto& c : res.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    for (const auto& n : res.notes) std::cout << "note: " << n << '\n';
    Table t{"checks", {"suite", "check", "pass", "detail"}, {}};
    for (const auto& c : res.checks) t.add({suite, c.name, static_cast<long long>(c.pass), c.detail});
    run.tables = std::move(res.tables);
    run.tables.push_back(std::move(t));
    run.notes = res.notes;
    run.summary = {{"suite", suite}, {"pass", res.pass()}, {"checks", checks}};
    std::cout << suite << ": " << (res.pass() ? "PASS" : "FAIL") << '\n';
    return res.pass() ? 0 : 1;
}

std::vector<double> sweep_range(const Settings& s, double from, double to, double step, bool doubling) {
    from = s.from.value_or(from);
    to = s.to.value_or(to);
    step = s.step.value_or(step);
    std::vector<double> v;
    if (doubling) {
        if (from > 0.0)
            for (double x = from; x <= to * (1.0 + 1e-12); x *= 2.0) v.push_back(x);
    } else if (step > 0.0) {
        const long n = static_cast<long>(std::floor((to - from) / step + 1e-9));
        for (long i = 0; i <= n; ++i) v.push_back(from + static_cast<double>(i) * step);
    }
    if (v.empty()) fail(errc::invalid_input, "empty sweep range");
    return v;
}

int cmd_sweep(Run& run) {
    Settings& s = run.s;
    if (s.kind == "threshold") {
        const auto alphas = sweep_range(s, 1.5, 4.0, 0.5, false);
        const double q = s.q.value_or(6.0), r = s.r.value_or(6.0);
        const auto c = schrodinger_constant(q, r);
        const double constant = c ? *c : gaussian_schrodinger_ratio(q, r);
        std::vector<double> sym(alphas.size()), asym(alphas.size());
        parallel_for(alphas.size(), [&](std::size_t i) {
            sym[i] = symmetric_threshold(alphas[i]);
            asym[i] = asymmetric_threshold(alphas[i], q, constant);
        });
        Table t{"threshold", {"alpha", "q", "r", "symmetric_threshold", "asymmetric_threshold"}, {}};
        for (std::size_t i = 0; i < alphas.size(); ++i) t.add({alphas[i], q, r, sym[i], asym[i]});
        run.tables.push_back(std::move(t));
    } else if (s.kind == "xi" || s.kind == "vanishing") {
        const auto xi = sweep_range(s, 1.0, 32.0, 0.0, true);
        resolve(run.s, 4.0, 2048, 40.0);
        const double alpha = *s.alpha, q = *s.q, r = *s.r;
        const WaveFunction phi = make_profile(s.profile, SpectralGrid(*s.grid_n, *s.grid_l));
        Table t{s.kind == "xi" ? "limit_curve" : "vanishing_modulation", {"alpha", "q", "r", "xi", "value", "target", "rel_error"},
                {}};
        const auto curve = s.kind == "xi" ? schrodinger_limit_curve(phi, alpha, q, r, xi, window(s))
                                          : vanishing_modulation_curve(phi, alpha, xi, window(s));
        for (const auto& p : curve) t.add({alpha, q, r, p.xi, p.value, p.target, p.rel_error});
        run.tables.push_back(std::move(t));
    } else {
        fail(errc::invalid_input, "unknown sweep kind '" + s.kind + "' (known: threshold, xi, vanishing)");
    }
    for (const auto& t : run.tables) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) std::cout << (i ? "," : "") << t.columns[i];
        std::cout << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << cell_text(row[i]);
            std::cout << '\n';
        }
    }
    run.summary = {{"points", run.tables.front().rows.size()}};
    return 0;
}

int exit_code_for(const std::string& code) {
    return code == errc::no_convergence || code == errc::stalled ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments on Strichartz estimates for fractional dispersive flows"};
    app.require_subcommand(1);
    Settings s;
    std::string config, suite;
    std::map<CLI::App*, std::map<std::string, CLI::Option*>> by_sub;

    auto add_common = [&](CLI::App* sub) {
        auto& opts = by_sub[sub];
        opts["alpha"] = sub->add_option("--alpha", s.alpha, "dispersion exponent, alpha > 1");
        opts["q"] = sub->add_option("--q", s.q, "time exponent");
        opts["r"] = sub->add_option("--r", s.r, "space exponent");
        opts["profile"] = sub->add_option("--profile", s.profile, "family line, e.g. 'gaussian h=2', or 'zero'");
        opts["grid-n"] = sub->add_option("--grid-n", s.grid_n, "grid points");
        opts["grid-l"] = sub->add_option("--grid-l", s.grid_l, "grid extent");
        opts["window-tol"] = sub->add_option("--window-tol", s.window_tol, "time-window tolerance");
        opts["seed"] = sub->add_option("--seed", s.seed, "random seed");
        opts["out"] = sub->add_option("--out", s.out, "output stem for CSV, JSON and the manifest");
        opts["threads"] = sub->add_option("--threads", s.threads, "worker threads (0: hardware)");
        sub->add_option("--config", config, "key = value file or JSON manifest");
    };
    auto* evaluate = app.add_subcommand("evaluate", "Strichartz ratio of one profile");
    auto* extremize_cmd = app.add_subcommand("extremize", "search for an extremizer");
    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    auto* sweep = app.add_subcommand("sweep", "alpha or xi sweeps as CSV");
    for (auto* sub : {evaluate, extremize_cmd, verify, sweep}) add_common(sub);
    verify->add_option("suite", suite, "suite name")->required();
    by_sub[sweep]["kind"] = sweep->add_option("--kind", s.kind, "threshold | xi | vanishing");
    by_sub[sweep]["from"] = sweep->add_option("--from", s.from, "first alpha or xi");
    by_sub[sweep]["to"] = sweep->add_option("--to", s.to, "last alpha or xi");
    by_sub[sweep]["step"] = sweep->add_option("--step", s.step, "alpha step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Run run;
    CLI::App* chosen = app.get_subcommands().front();
    const auto& opts = by_sub[chosen];
    run.command = chosen->get_name();
    const auto start = std::chrono::steady_clock::now();
    try {
        if (!config.empty()) {
            for (const auto& [k, v] : read_config(config)) {
                // Keys of other subcommands (a sweep manifest's kind, say) are ignored.
                const auto it = opts.find(k);
                if (it == opts.end()) {
                    if (k != "kind" && k != "from" && k != "to" && k != "step") s.apply(k, v);
                    continue;
                }
                if (it->second->count() == 0) s.apply(k, v);
            }
        }
        run.s = s;
        if (s.threads) set_max_workers(s.threads);
        if (run.command == "verify") run.command += " " + suite;
        if (run.command == "sweep") run.command += " " + s.kind;
        int rc = 0;
        if (run.command == "evaluate") rc = cmd_evaluate(run);
        else if (run.command == "extremize") rc = cmd_extremize(run);
        else if (run.command.starts_with("verify")) rc = cmd_verify(run, suite);
        else rc = cmd_sweep(run);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_outputs(run, wall);
        return rc;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
