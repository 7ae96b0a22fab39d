// Command line driver: every analysis in the library as a subcommand with
// CSV + JSON output, a run manifest, and reproducible seeding.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heavytail/heavytail.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace heavytail;

namespace {

struct Options {
    std::string model = "poisson";
    double rate = 0.5;
    int n = 10;
    double T = 10.0;
    double alpha = 1.0;
    int k = 1;
    std::uint64_t seed = 1;
    std::uint64_t samples = 100000;
    std::uint64_t chunk_size = 65536;
    int threads = 0;
    int quad_nodes = 0;
    std::string out;
    std::string config_path;

    double r = 1.0;
    std::vector<std::uint64_t> n_grid{10, 30, 100, 300};
    double x = 200.0;
    std::vector<double> x_grid;
    bool oracle = false;
    double t0 = 1.0;
    double t1 = 2.0;
    double u = 1.5;
    std::vector<double> eps{0.1};
    std::uint64_t min_band_hits = 100;
    bool t0_zero = false;
    std::uint64_t min_hits = 500;
    double ks_level = 0.01;
    std::uint64_t rejection_cap = kRejectionCap;
    std::vector<double> jumps;
    std::vector<double> times;
    double drift = 0.0;
    bool risk = false;
    std::optional<double> assert_tol;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

BaseProcessModel make_model(const Options& o) {
    if (o.model == "poisson") return BaseProcessModel::poisson(o.rate, o.T);
    if (o.model == "gamma-renewal") return BaseProcessModel::gamma_renewal(o.T);
    if (o.model == "grid") return BaseProcessModel::grid(o.n, o.T);
    if (o.model == "binomial") return BaseProcessModel::binomial(o.n, o.T);
    throw std::invalid_argument("unknown model '" + o.model +
                                "' (expected poisson | gamma-renewal | grid | binomial)");
}

ExperimentConfig make_config(const Options& o) {
    ExperimentConfig c;
    c.model = make_model(o);
    c.alpha = o.alpha;
    c.k = o.k;
    c.samples = o.samples;
    c.seed = o.seed;
    c.chunk_size = o.chunk_size;
    c.threads = o.threads;
    c.validate();
    return c;
}

// The resolved configuration recorded in the manifest; "out" stays run-local.
json config_json(const Options& o) {
    json j{{"model", o.model},
           {"rate", o.rate},
           {"n", o.n},
           {"T", o.T},
           {"alpha", o.alpha},
           {"k", o.k},
           {"seed", o.seed},
           {"samples", o.samples},
           {"chunk_size", o.chunk_size},
           {"threads", o.threads},
           {"quad_nodes", o.quad_nodes},
           {"r", o.r},
           {"n_grid", o.n_grid},
           {"x", o.x},
           {"x_grid", o.x_grid},
           {"oracle", o.oracle},
           {"t0", o.t0},
           {"t1", o.t1},
           {"u", o.u},
           {"eps", o.eps},
           {"min_band_hits", o.min_band_hits},
           {"t0_zero", o.t0_zero},
           {"min_hits", o.min_hits},
           {"ks_level", o.ks_level},
           {"rejection_cap", o.rejection_cap},
           {"jumps", o.jumps},
           {"times", o.times},
           {"drift", o.drift},
           {"risk", o.risk}};
    if (o.assert_tol) j["assert"] = *o.assert_tol;
    return j;
}

void overlay_config(const json& j, Options& o) {
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("model", o.model);
    get("rate", o.rate);
    get("n", o.n);
    get("T", o.T);
    get("alpha", o.alpha);
    get("k", o.k);
    get("seed", o.seed);
    get("samples", o.samples);
    get("chunk_size", o.chunk_size);
    get("threads", o.threads);
    get("quad_nodes", o.quad_nodes);
    get("r", o.r);
    get("n_grid", o.n_grid);
    get("x", o.x);
    get("x_grid", o.x_grid);
    get("oracle", o.oracle);
    get("t0", o.t0);
    get("t1", o.t1);
    get("u", o.u);
    get("eps", o.eps);
    get("min_band_hits", o.min_band_hits);
    get("t0_zero", o.t0_zero);
    get("min_hits", o.min_hits);
    get("ks_level", o.ks_level);
    get("rejection_cap", o.rejection_cap);
    get("jumps", o.jumps);
    get("times", o.times);
    get("drift", o.drift);
    get("risk", o.risk);
    if (j.contains("assert")) o.assert_tol = j.at("assert").get<double>();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

struct CmdResult {
    std::vector<std::pair<std::string, std::string>> outputs;  // name, bytes
    json to_stdout;
    bool pass = true;
};

bool assert_pass(const Options& o, double ratio) {
    if (!o.assert_tol) return true;
    return std::abs(ratio - 1.0) <= *o.assert_tol;
}

json summary_json(double estimate, double asymptote, double ratio, double ci_lo, double ci_hi,
                  bool pass) {
    return json{{"estimate", estimate},
                {"asymptote", asymptote},
                {"ratio", ratio},
                {"ci", json::array({ci_lo, ci_hi})},
                {"pass", pass}};
}

void push_summary(CmdResult& res, json summary) {
    res.outputs.emplace_back("summary.json", summary.dump(2) + "\n");
    res.to_stdout = std::move(summary);
}

std::string convergence_csv(const char* grid_name, const std::vector<ConvergenceRow>& rows,
                            bool integer_grid) {
    std::ostringstream csv;
    csv << grid_name << ",scaled_estimate,ci_low,ci_high,asymptote,ratio\n";
    for (const auto& row : rows) {
        if (integer_grid)
            csv << static_cast<std::uint64_t>(row.grid_value);
        else
            csv << fmt(row.grid_value);
        csv << ',' << fmt(row.scaled_estimate) << ',' << fmt(row.ci_low) << ','
            << fmt(row.ci_high) << ',' << fmt(row.asymptote) << ',' << fmt(row.ratio) << '\n';
    }
    return csv.str();
}

CmdResult cmd_simulate(const Options& o) {
    const BaseProcessModel model = make_model(o);
    Rng rng(substream_seed(o.seed, 0));
    const MarkedPattern pattern = mark(sample(model, rng), ParetoLaw{o.alpha}, rng);

    CmdResult res;
    std::ostringstream csv;
    csv << "time,mark\n";
    for (std::size_t i = 0; i < pattern.count(); ++i)
        csv << fmt(pattern.times[i]) << ',' << fmt(pattern.marks[i]) << '\n';
    res.outputs.emplace_back("pattern.csv", csv.str());

    if (o.risk) {
        const RiskPath path = build_risk(pattern, o.drift);
        std::ostringstream risk_csv;
        write_csv(path, risk_csv);
        res.outputs.emplace_back("risk.csv", risk_csv.str());
    }

    json files = json::array();
    for (const auto& f : res.outputs) files.push_back(f.first);
    res.to_stdout = json{{"points", pattern.count()}, {"files", files}};
    return res;
}

CmdResult cmd_hrv_pp(const Options& o) {
    const ExperimentConfig cfg = make_config(o);
    const auto rows = hrv_convergence(cfg, o.r, o.n_grid);
    const ConvergenceRow& last = rows.back();

    CmdResult res;
    res.outputs.emplace_back("hrv_pp.csv", convergence_csv("n", rows, true));
    res.pass = assert_pass(o, last.ratio);
    json summary = summary_json(last.scaled_estimate, last.asymptote, last.ratio, last.ci_low,
                                last.ci_high, res.pass);
    summary["details"] = json{{"r", o.r},
                              {"final_n", static_cast<std::uint64_t>(last.grid_value)},
                              {"hits", last.hits},
                              {"samples", last.samples},
                              {"zero_hits", last.zero_hits}};
    push_summary(res, std::move(summary));
    return res;
}

CmdResult cmd_residual_tail(const Options& o) {
    CmdResult res;
    if (o.oracle) {
        const BaseProcessModel model = make_model(o);
        const OrderstatOracle orc = exact_orderstat_tail(model, o.alpha, o.k, o.x);
        const AsymptoticContext ctx(model, o.alpha, o.k, o.quad_nodes);
        const double asym = residual_tail(ctx, o.x);
        const double ratio = orc.value / asym;
        res.pass = assert_pass(o, ratio);

        std::ostringstream csv;
        csv << "x,exact,asymptote,ratio\n"
            << fmt(o.x) << ',' << fmt(orc.value) << ',' << fmt(asym) << ',' << fmt(ratio)
            << '\n';
        res.outputs.emplace_back("residual_tail.csv", csv.str());
        json summary = summary_json(orc.value, asym, ratio, orc.value, orc.value, res.pass);
        summary["details"] =
            json{{"x", o.x}, {"truncation", orc.truncation}, {"terms", orc.terms}};
        push_summary(res, std::move(summary));
        return res;
    }

    const ExperimentConfig cfg = make_config(o);
    const std::vector<double> grid = o.x_grid.empty() ? std::vector<double>{o.x} : o.x_grid;
    const auto rows = residual_convergence(cfg, grid);
    const ConvergenceRow& last = rows.back();
    res.outputs.emplace_back("residual_tail.csv", convergence_csv("x", rows, false));
    res.pass = assert_pass(o, last.ratio);
    json summary = summary_json(last.scaled_estimate, last.asymptote, last.ratio, last.ci_low,
                                last.ci_high, res.pass);
    summary["details"] = json{{"final_x", last.grid_value},
                              {"hits", last.hits},
                              {"samples", last.samples},
                              {"zero_hits", last.zero_hits}};
    push_summary(res, std::move(summary));
    return res;
}

CmdResult cmd_monitor(const Options& o) {
    const ExperimentConfig cfg = make_config(o);
    if (o.t0_zero && cfg.model.kind != BaseProcessModel::Kind::GammaRenewal)
        throw std::invalid_argument("--t0-zero applies to the gamma-renewal model only");
    const double asym = o.t0_zero
                            ? monitoring_limit_t0zero_gamma(o.t1, o.u, o.alpha, o.k)
                            : monitoring_limit(AsymptoticContext(cfg.model, o.alpha, o.k,
                                                                 o.quad_nodes),
                                               o.t0, o.t1, o.u);
    const auto ests = monitoring_mc_multi(cfg, o.x, o.t0, o.t1, o.u, o.eps, o.min_band_hits);

    std::ostringstream csv;
    csv << "eps,x,band_hits,success_hits,cond_p,scaled_estimate,ci_low,ci_high,asymptote,"
           "ratio,rare\n";
    for (const auto& est : ests) {
        const ConfidenceInterval ci = est.ci();
        csv << fmt(est.eps) << ',' << fmt(est.x) << ',' << est.band_hits << ','
            << est.success_hits << ',' << fmt(est.cond_p()) << ',' << fmt(est.value()) << ','
            << fmt(ci.lo) << ',' << fmt(ci.hi) << ',' << fmt(asym) << ','
            << fmt(est.value() / asym) << ',' << (est.rare ? 1 : 0) << '\n';
    }

    CmdResult res;
    res.outputs.emplace_back("monitor.csv", csv.str());
    const MonitoringEstimate& last = ests.back();
    const ConfidenceInterval ci = last.ci();
    const double ratio = last.value() / asym;
    res.pass = assert_pass(o, ratio) && !last.rare;
    json summary = summary_json(last.value(), asym, ratio, ci.lo, ci.hi, res.pass);
    summary["details"] = json{{"x", o.x},
                              {"t0", o.t0},
                              {"t1", o.t1},
                              {"u", o.u},
                              {"eps", last.eps},
                              {"t0_zero", o.t0_zero},
                              {"band_hits", last.band_hits},
                              {"success_hits", last.success_hits},
                              {"rare", last.rare}};
    push_summary(res, std::move(summary));
    return res;
}

CmdResult cmd_cond_law(const Options& o) {
    const ExperimentConfig cfg = make_config(o);
    const ConditionalDiagnostics diag =
        conditional_diagnostics(cfg, o.x, o.min_hits, o.ks_level, o.rejection_cap);

    std::ostringstream csv;
    csv << "x,samples,conditioned,exact_hits,freq_exact,freq_ci_low,freq_ci_high,ks_times,"
           "ks_times_critical,pooled_times,ks_sizes,ks_sizes_critical,limit_draws,"
           "limit_acceptance_rate,insufficient\n";
    csv << fmt(o.x) << ',' << diag.samples << ',' << diag.conditioned << ',' << diag.exact_hits
        << ',' << fmt(diag.freq_exact) << ',' << fmt(diag.freq_ci.lo) << ','
        << fmt(diag.freq_ci.hi) << ',' << fmt(diag.ks_times) << ','
        << fmt(diag.ks_times_critical) << ',' << diag.pooled_times << ',' << fmt(diag.ks_sizes)
        << ',' << fmt(diag.ks_sizes_critical) << ',' << diag.limit_draws << ','
        << fmt(diag.limit_acceptance_rate) << ',' << (diag.insufficient ? 1 : 0) << '\n';

    CmdResult res;
    res.outputs.emplace_back("cond_law.csv", csv.str());
    // the limit law puts exactly k+1 claims above the level, so the target is 1
    const double ratio = diag.freq_exact;
    res.pass = assert_pass(o, ratio) && !diag.insufficient;
    json summary =
        summary_json(diag.freq_exact, 1.0, ratio, diag.freq_ci.lo, diag.freq_ci.hi, res.pass);
    summary["details"] = json{{"x", o.x},
                              {"conditioned", diag.conditioned},
                              {"exact_hits", diag.exact_hits},
                              {"ks_times", diag.ks_times},
                              {"ks_times_critical", diag.ks_times_critical},
                              {"pooled_times", diag.pooled_times},
                              {"ks_sizes", diag.ks_sizes},
                              {"ks_sizes_critical", diag.ks_sizes_critical},
                              {"limit_draws", diag.limit_draws},
                              {"limit_acceptance_rate", diag.limit_acceptance_rate},
                              {"insufficient", diag.insufficient}};
    push_summary(res, std::move(summary));
    return res;
}

CmdResult cmd_dist(const Options& o) {
    if (o.jumps.empty()) throw std::invalid_argument("dist: --jumps must list at least one size");
    if (!o.times.empty() && o.times.size() != o.jumps.size())
        throw std::invalid_argument("dist: --times must match --jumps in length");

    RiskPath path;
    path.drift = o.drift;
    path.jump_sizes = o.jumps;
    if (o.times.empty()) {
        const double m = static_cast<double>(o.jumps.size());
        path.T = o.T;
        for (std::size_t i = 0; i < o.jumps.size(); ++i)
            path.jump_times.push_back((static_cast<double>(i) + 0.5) * o.T / m);
    } else {
        path.jump_times = o.times;
        path.T = std::max(o.T, *std::max_element(o.times.begin(), o.times.end()));
    }

    const double d_dk = dist_to_jump_cone(path, o.k);
    const double d_jk = dist_to_small_jump_cone(path, o.k);

    CmdResult res;
    json point{{"d_Dk", d_dk}, {"d_Jk", d_jk}};
    res.outputs.emplace_back("dist.json", point.dump(2) + "\n");
    // bound from the distance identities: 2 d(R, D_k) <= d(R, J_k)
    const double bound = d_jk / 2.0;
    const double ratio = d_dk == bound ? 1.0 : d_dk / bound;
    res.pass = 2.0 * d_dk <= d_jk + 1e-12 && assert_pass(o, ratio);
    json summary = summary_json(d_dk, bound, ratio, d_dk, d_dk, res.pass);
    summary["details"] = json{{"d_Dk", d_dk}, {"d_Jk", d_jk}, {"k", o.k}};
    res.outputs.emplace_back("summary.json", summary.dump(2) + "\n");
    res.to_stdout = std::move(point);
    return res;
}

CmdResult run_command(const std::string& name, const Options& o) {
    if (name == "simulate") return cmd_simulate(o);
    if (name == "hrv-pp") return cmd_hrv_pp(o);
    if (name == "residual-tail") return cmd_residual_tail(o);
    if (name == "monitor") return cmd_monitor(o);
    if (name == "cond-law") return cmd_cond_law(o);
    if (name == "dist") return cmd_dist(o);
    throw std::invalid_argument("unknown subcommand in manifest: " + name);
}

int finish(const std::string& name, const Options& o, const CmdResult& res, double walltime) {
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        json outputs = json::array();
        for (const auto& [file, bytes] : res.outputs) {
            std::ofstream f(fs::path(o.out) / file, std::ios::binary);
            f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            if (!f) throw std::runtime_error("failed to write " + file);
            outputs.push_back(json{{"file", file}, {"fnv1a64", fnv1a64_hex(bytes)}});
        }
        json manifest{{"subcommand", name},
                      {"version", kVersion},
                      {"seed", o.seed},
                      {"walltime_seconds", walltime},
                      {"config", config_json(o)},
                      {"outputs", outputs}};
        std::ofstream mf(fs::path(o.out) / "manifest.json", std::ios::binary);
        const std::string bytes = manifest.dump(2) + "\n";
        mf.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!mf) throw std::runtime_error("failed to write manifest.json");
    }
    if (!res.to_stdout.is_null()) std::printf("%s\n", res.to_stdout.dump(2).c_str());
    return res.pass ? 0 : 1;
}

void add_model_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--model", o.model,
                    "base process: poisson | gamma-renewal | grid | binomial");
    cmd->add_option("--rate", o.rate, "poisson arrival intensity (events per unit time)");
    cmd->add_option("--n", o.n, "point count for the grid/binomial models (count)");
    cmd->add_option("--T", o.T, "observation window length (time units)");
    cmd->add_option("--alpha", o.alpha, "claim size tail index (dimensionless, > 0)");
    cmd->add_option("--k", o.k, "number of top claims covered/removed (count)");
    cmd->add_option("--seed", o.seed, "master RNG seed (integer)");
    cmd->add_option("--threads", o.threads,
                    "worker cap; 0 = HEAVYTAIL_THREADS env var or hardware (count)");
    cmd->add_option("--quad-nodes", o.quad_nodes,
                    "quadrature nodes per axis for renewal moments; 0 = default (count)");
    cmd->add_option("--out", o.out, "output directory (path, created if missing)");
    cmd->add_option("--config", o.config_path,
                    "JSON config or run manifest (path); file values override flags");
}

void add_mc_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--samples", o.samples, "Monte Carlo sample paths (count)");
    cmd->add_option("--chunk-size", o.chunk_size,
                    "paths per reproducible substream chunk (count)");
    cmd->add_option("--assert", o.assert_tol,
                    "fail (exit 1) unless |ratio - 1| <= this tolerance (dimensionless)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heavy-tailed marked point processes, risk paths, and their tail limits"};
    app.require_subcommand(1);
    Options o;

    CLI::App* simulate = app.add_subcommand("simulate", "sample one marked pattern to CSV");
    add_model_flags(simulate, o);
    simulate->add_option("--drift", o.drift, "linear drift of the risk path (per unit time)");
    simulate->add_flag("--risk", o.risk, "also write the cumulative risk path CSV");

    CLI::App* hrv = app.add_subcommand(
        "hrv-pp", "scaled exceedance of k+1 marks vs the point-process tail limit");
    add_model_flags(hrv, o);
    add_mc_flags(hrv, o);
    hrv->add_option("--r", o.r, "mark threshold in norming units (dimensionless)");
    hrv->add_option("--n-grid", o.n_grid, "norming indices, comma separated (counts)")
        ->delimiter(',');

    CLI::App* residual = app.add_subcommand(
        "residual-tail", "tail of the residual claim sum vs its asymptote");
    add_model_flags(residual, o);
    add_mc_flags(residual, o);
    residual->add_option("--x", o.x, "tail level (claim size units, > 1)");
    residual->add_option("--x-grid", o.x_grid, "tail levels, comma separated (claim size units)")
        ->delimiter(',');
    residual->add_flag("--oracle", o.oracle,
                       "evaluate the exact order-statistic tail instead of Monte Carlo");

    CLI::App* monitor = app.add_subcommand(
        "monitor", "conditional residual exceedance between two inspection times");
    add_model_flags(monitor, o);
    add_mc_flags(monitor, o);
    monitor->add_option("--x", o.x, "conditioning level (claim size units)");
    monitor->add_option("--t0", o.t0, "first inspection time (time units, > 0)");
    monitor->add_option("--t1", o.t1, "second inspection time (time units, <= T)");
    monitor->add_option("--u", o.u, "exceedance factor at t1 (dimensionless, > 1)");
    monitor->add_option("--eps", o.eps, "band widths, comma separated (dimensionless)")
        ->delimiter(',');
    monitor->add_option("--min-band-hits", o.min_band_hits,
                        "band hits below this flag the estimate as rare (count)");
    monitor->add_flag("--t0-zero", o.t0_zero,
                      "compare against the t0 -> 0 gamma-renewal limit instead");

    CLI::App* cond = app.add_subcommand(
        "cond-law", "diagnostics of the conditional limit law given a large residual");
    add_model_flags(cond, o);
    add_mc_flags(cond, o);
    cond->add_option("--x", o.x, "conditioning level (claim size units, > 1)");
    cond->add_option("--min-hits", o.min_hits,
                     "conditioned paths below this set the insufficient flag (count)");
    cond->add_option("--ks-level", o.ks_level,
                     "significance level for KS critical values (probability)");
    cond->add_option("--rejection-cap", o.rejection_cap,
                     "max proposals for the renewal limit-law sampler (count)");

    CLI::App* dist = app.add_subcommand(
        "dist", "distances of a jump path to the small-jump cones");
    dist->add_option("--jumps", o.jumps, "jump sizes, comma separated (claim size units)")
        ->delimiter(',');
    dist->add_option("--times", o.times, "jump times, comma separated (time units)")
        ->delimiter(',');
    dist->add_option("--T", o.T, "observation window length (time units)");
    dist->add_option("--k", o.k, "number of top jumps covered (count)");
    dist->add_option("--drift", o.drift, "linear drift (per unit time; cone distance needs 0)");
    dist->add_option("--out", o.out, "output directory (path, created if missing)");
    dist->add_option("--config", o.config_path,
                     "JSON config or run manifest (path); file values override flags");
    dist->add_option("--assert", o.assert_tol,
                     "fail (exit 1) unless |ratio - 1| <= this tolerance (dimensionless)");

    CLI::App* replay = app.add_subcommand("replay", "re-run a recorded manifest byte-for-byte");
    std::string manifest_path;
    replay->add_option("manifest", manifest_path, "manifest.json from a previous run (path)")
        ->required();
    replay->add_option("--out", o.out, "output directory for the replayed run (path)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::string name;
        if (replay->parsed()) {
            const json manifest = load_json_file(manifest_path);
            if (!manifest.contains("subcommand") || !manifest.contains("config"))
                throw std::invalid_argument("replay: not a manifest: " + manifest_path);
            name = manifest.at("subcommand").get<std::string>();
            Options fresh;
            fresh.out = o.out;
            overlay_config(manifest.at("config"), fresh);
            o = fresh;
        } else {
            name = app.get_subcommands().front()->get_name();
            if (!o.config_path.empty()) {
                json j = load_json_file(o.config_path);
                if (j.contains("config") && j.contains("subcommand")) j = j.at("config");
                overlay_config(j, o);
            }
        }
        const auto start = std::chrono::steady_clock::now();
        const CmdResult res = run_command(name, o);
        const double walltime =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return finish(name, o, res, walltime);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 3;
    }
}
