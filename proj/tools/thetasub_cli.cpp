#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thetasub/config.hpp"
#include "thetasub/data.hpp"
#include "thetasub/diagnostics.hpp"
#include "thetasub/error.hpp"
#include "thetasub/mcmc.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace thetasub;

namespace
{
constexpr char const* version = "0.1.0";

std::ofstream open_out(fs::path const& file)
{
    if (file.has_parent_path())
        fs::create_directories(file.parent_path());
    std::ofstream os(file);
    if (!os)
        throw DataError("cannot write " + file.string());
    return os;
}

void write_json(fs::path const& file, ordered_json const& j)
{
    auto os = open_out(file);
    os << j.dump(2) << '\n';
}

ordered_json read_json(fs::path const& file)
{
    std::ifstream is(file);
    if (!is)
        throw DataError("cannot open " + file.string());
    return ordered_json::parse(is);
}

double rate(std::size_t accepted, std::size_t attempted)
{
    return attempted ? static_cast<double>(accepted) / static_cast<double>(attempted) : 0.0;
}

//---------------------------------------------------------------------------//
struct FitArgs
{
    std::string config;
    std::string obs;
    std::string out;
    std::size_t iterations{1000};
    std::optional<std::size_t> burn_in;
    std::size_t thinning{1};
    std::uint64_t seed{1};
    std::size_t workers{1};
};

int run_fit(FitArgs const& a)
{
    FitConfig const cfg = load_config(a.config);
    std::ifstream obs_in(a.obs);
    if (!obs_in)
        throw DataError("cannot open observations " + a.obs);
    Observations const obs = read_observations_csv(obs_in);

    RunOptions opt;
    opt.iterations = a.iterations;
    opt.burn_in = a.burn_in.value_or(a.iterations / 10);
    opt.thinning = a.thinning;
    opt.refinement = cfg.refinement;
    opt.seed = a.seed;
    opt.workers = a.workers;

    fs::path const out(a.out);
    fs::create_directories(out);
    auto chain = open_out(out / "chain.csv");
    Parameterisation const param = cfg.prior.parameterisation;
    auto const header = chain_csv_header(cfg.params0.bin_count(), param);
    for (std::size_t i = 0; i < header.size(); ++i)
        chain << (i ? "," : "") << header[i];
    chain << '\n';

    RunSummary const summary
        = run_mcmc(obs, cfg.params0, cfg.prior, cfg.proposal, opt, [&](ChainRecord const& r) {
              chain << chain_csv_row(r, param) << '\n';
          });
    chain.close();

    ordered_json meta;
    meta["program"] = "thetasub fit";
    meta["version"] = version;
    ordered_json config = ordered_json::object();
    for (auto const& [k, v] : cfg.entries)
        config[k] = v;
    meta["config_file"] = a.config;
    meta["config"] = config;
    meta["bin_edges"] = cfg.params0.bin_edges;
    meta["parameterisation"] = param == Parameterisation::split_gamma ? "split_gamma" : "standard";
    meta["beta_free"] = cfg.prior.beta_free();
    meta["observations"] = {{"file", a.obs},
                            {"points", obs.size()},
                            {"horizon", obs.times.back()},
                            {"final_value", obs.values.back()}};
    meta["run"] = {{"iterations", opt.iterations}, {"burn_in", opt.burn_in},
                   {"thinning", opt.thinning},     {"refinement", opt.refinement},
                   {"seed", opt.seed},             {"workers", opt.workers}};
    meta["records"] = summary.records;
    meta["acceptance"] = {{"segment", summary.segment_acceptance},
                          {"param", rate(summary.param_accepts, summary.param_attempts)},
                          {"param_attempts", summary.param_attempts},
                          {"beta", rate(summary.beta_accepts, summary.beta_attempts)},
                          {"beta_attempts", summary.beta_attempts}};
    write_json(out / "meta.json", meta);

    std::cout << "wrote " << summary.records << " records to " << (out / "chain.csv").string()
              << "\nacceptance: segment " << summary.segment_acceptance << ", param "
              << rate(summary.param_accepts, summary.param_attempts);
    if (summary.beta_attempts)
        std::cout << ", beta " << rate(summary.beta_accepts, summary.beta_attempts);
    std::cout << '\n';
    return 0;
}

//---------------------------------------------------------------------------//
struct SimulateArgs
{
    std::string model{"two-gamma"};
    double a1{2.0}, b1{0.4}, a2{0.2}, b2{0.04};
    double alpha{1.0}, beta{1.0};
    double horizon{200};
    std::size_t n{1000};
    std::uint64_t seed{1};
    std::string out;
    std::string truth;
};

int run_simulate(SimulateArgs const& a)
{
    ordered_json truth;
    Observations obs;
    if (a.model == "two-gamma")
    {
        auto data = synth_two_gamma(a.a1, a.b1, a.a2, a.b2, a.horizon, a.n, a.seed);
        obs = std::move(data.obs);
        truth["model"] = "two-gamma";
        truth["a1"] = a.a1;
        truth["b1"] = a.b1;
        truth["a2"] = a.a2;
        truth["b2"] = a.b2;
        truth["alpha_bar"] = data.truth.alpha_bar();
        truth["beta"] = data.truth.beta();
    }
    else
    {
        obs = synth_gamma(a.alpha, a.beta, a.horizon, a.n, a.seed);
        truth["model"] = "gamma";
        truth["alpha"] = a.alpha;
        truth["beta"] = a.beta;
    }
    truth["horizon"] = a.horizon;
    truth["n"] = a.n;
    truth["seed"] = a.seed;

    auto os = open_out(a.out);
    write_observations_csv(os, obs);
    fs::path const truth_file = a.truth.empty() ? fs::path(a.out).replace_extension(".truth.json")
                                                : fs::path(a.truth);
    write_json(truth_file, truth);
    std::cout << "wrote " << obs.size() << " observations to " << a.out << " and truth to "
              << truth_file.string() << '\n';
    return 0;
}

//---------------------------------------------------------------------------//
struct IngestArgs
{
    std::string input;
    std::string out;
    int window_days{7};
};

int run_ingest(IngestArgs const& a)
{
    std::ifstream in(a.input);
    if (!in)
        throw DataError("cannot open " + a.input);
    AggregationSpec spec;
    spec.window_days = a.window_days;
    IngestResult const r = ingest_losses(in, spec);
    for (auto const& d : r.diagnostics)
        std::cerr << "note: " << d << '\n';

    auto os = open_out(a.out);
    write_observations_csv(os, r.obs);

    ordered_json manifest;
    manifest["program"] = "thetasub ingest";
    manifest["input"] = a.input;
    manifest["window_days"] = a.window_days;
    manifest["observations"] = r.obs.size();
    manifest["merged_windows"] = r.merged_windows;
    manifest["diagnostics"] = r.diagnostics;
    manifest["boundary"] = "first and last windows are kept as-is even when partially covered";
    write_json(fs::path(a.out).replace_extension(".ingest.json"), manifest);
    std::cout << "wrote " << r.obs.size() << " observations to " << a.out << '\n';
    return 0;
}

//---------------------------------------------------------------------------//
struct DiagnoseArgs
{
    std::string chain;
    std::string meta;
    std::string out;
    std::string truth;
    std::vector<std::string> figures{"trace", "hist", "band"};
    std::vector<std::string> params;
    std::size_t hist_bins{30};
    double level{0.95};
    std::string functional{"theta_plus_alpha_x"};
    double x_max{4};
    std::size_t x_points{80};
};

bool wants(DiagnoseArgs const& a, char const* fig)
{
    return std::find(a.figures.begin(), a.figures.end(), fig) != a.figures.end();
}

int run_diagnose(DiagnoseArgs const& a)
{
    fs::path const chain_file(a.chain);
    std::ifstream in(chain_file);
    if (!in)
        throw DataError("cannot open chain " + a.chain);
    ChainTable const table = read_chain_csv(in);
    if (table.row_count() == 0)
        throw DataError("chain has no records");

    fs::path const out = a.out.empty() ? chain_file.parent_path() : fs::path(a.out);
    if (!out.empty())
        fs::create_directories(out);

    std::vector<std::string> params = a.params;
    if (params.empty())
    {
        for (auto const& c : table.columns)
        {
            if (c == "iteration" || c == "segment_acceptance" || c.find("accepted") != std::string::npos
                || c.find("log_ratio") != std::string::npos)
            {
                continue;
            }
            params.push_back(c);
        }
    }
    for (auto const& p : params)
    {
        if (wants(a, "trace"))
            emit_trace(out, table, p);
        if (wants(a, "hist"))
            emit_histogram(out, table, p, a.hist_bins);
    }

    if (wants(a, "band"))
    {
        fs::path const meta_file
            = a.meta.empty() ? chain_file.parent_path() / "meta.json" : fs::path(a.meta);
        auto const meta = read_json(meta_file);
        auto const edges = meta.at("bin_edges").get<std::vector<double>>();

        BandSpec spec;
        spec.level = a.level;
        spec.x_grid = BandSpec::uniform_grid(a.x_max, a.x_points);
        if (a.functional == "neg_log_xv")
            spec.functional = BandFunctional::neg_log_xv;
        else if (a.functional != "theta_plus_alpha_x")
            throw ConfigError("unknown band functional '" + a.functional + "'");

        auto const samples = table.params(edges);
        Band const band = credible_band(samples, spec);
        std::vector<double> truth;
        if (!a.truth.empty())
        {
            auto const t = read_json(a.truth);
            if (t.at("model") == "two-gamma")
            {
                TwoGammaTruth const tg{t.at("a1"), t.at("b1"), t.at("a2"), t.at("b2")};
                for (double x : spec.x_grid)
                {
                    truth.push_back(spec.functional == BandFunctional::neg_log_xv
                                        ? tg.neg_log_xv(x)
                                        : tg.theta_plus_alpha_x(x));
                }
            }
            else
            {
                double const alpha = t.at("alpha");
                double const beta = t.at("beta");
                for (double x : spec.x_grid)
                {
                    truth.push_back(spec.functional == BandFunctional::neg_log_xv
                                        ? alpha * x - std::log(beta)
                                        : alpha * x);
                }
            }
        }
        emit_band(out, band, truth);
    }
    std::cout << "wrote diagnostics for " << table.row_count() << " records to "
              << (out.empty() ? fs::path(".") : out).string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bayesian inference for theta-subordinators from discrete observations"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Run the sampler and write chain.csv and meta.json");
    fit_cmd->add_option("-c,--config", fit.config, "Model/prior/proposal config")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("-o,--obs", fit.obs, "Observations CSV (time,value)")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("-n,--iterations", fit.iterations, "Sweeps")->capture_default_str();
    fit_cmd->add_option("-b,--burn-in", fit.burn_in, "Discarded sweeps (default 10%)");
    fit_cmd->add_option("-t,--thinning", fit.thinning, "Keep every k-th sweep")->capture_default_str();
    fit_cmd->add_option("-s,--seed", fit.seed, "Random seed")->capture_default_str();
    fit_cmd->add_option("-w,--workers", fit.workers, "Threads for the bridge refresh")->capture_default_str();
    fit_cmd->add_option("--out", fit.out, "Output directory")->required();

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate observations with a known truth");
    sim_cmd->add_option("-m,--model", sim.model, "two-gamma or gamma")
        ->check(CLI::IsMember({"two-gamma", "gamma"}))
        ->capture_default_str();
    sim_cmd->add_option("--a1", sim.a1, "Rate of the first component")->capture_default_str();
    sim_cmd->add_option("--b1", sim.b1, "Activity of the first component")->capture_default_str();
    sim_cmd->add_option("--a2", sim.a2, "Rate of the second component")->capture_default_str();
    sim_cmd->add_option("--b2", sim.b2, "Activity of the second component")->capture_default_str();
    sim_cmd->add_option("--alpha", sim.alpha, "Gamma model rate")->capture_default_str();
    sim_cmd->add_option("--beta", sim.beta, "Gamma model activity")->capture_default_str();
    sim_cmd->add_option("-T,--horizon", sim.horizon, "Observation horizon")->capture_default_str();
    sim_cmd->add_option("-n,--points", sim.n, "Number of increments")->capture_default_str();
    sim_cmd->add_option("-s,--seed", sim.seed, "Random seed")->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "Observations CSV")->required();
    sim_cmd->add_option("--truth", sim.truth, "Truth JSON (default <out>.truth.json)");

    IngestArgs ing;
    auto* ing_cmd = app.add_subcommand("ingest", "Aggregate date,loss records into observations");
    ing_cmd->add_option("-i,--input", ing.input, "CSV with header date,loss")->required()->check(CLI::ExistingFile);
    ing_cmd->add_option("--out", ing.out, "Observations CSV")->required();
    ing_cmd->add_option("--window-days", ing.window_days, "Window length in days")->capture_default_str();

    DiagnoseArgs diag;
    auto* diag_cmd = app.add_subcommand("diagnose", "Traces, histograms and credible bands");
    diag_cmd->add_option("--chain", diag.chain, "chain.csv from fit")->required()->check(CLI::ExistingFile);
    diag_cmd->add_option("--meta", diag.meta, "meta.json from fit (default next to the chain)");
    diag_cmd->add_option("--out", diag.out, "Output directory (default next to the chain)");
    diag_cmd->add_option("--figures", diag.figures, "Any of trace, hist, band")
        ->delimiter(',')
        ->check(CLI::IsMember({"trace", "hist", "band"}));
    diag_cmd->add_option("--params", diag.params, "Chain columns (default all parameters)")->delimiter(',');
    diag_cmd->add_option("--hist-bins", diag.hist_bins, "Histogram bins")->capture_default_str();
    diag_cmd->add_option("--level", diag.level, "Band level")->capture_default_str();
    diag_cmd->add_option("--functional", diag.functional, "theta_plus_alpha_x or neg_log_xv")
        ->capture_default_str();
    diag_cmd->add_option("--x-max", diag.x_max, "Band grid upper end")->capture_default_str();
    diag_cmd->add_option("--x-points", diag.x_points, "Band grid points")->capture_default_str();
    diag_cmd->add_option("--truth", diag.truth, "Truth JSON from simulate to overlay");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*fit_cmd)
            return run_fit(fit);
        if (*sim_cmd)
            return run_simulate(sim);
        if (*ing_cmd)
            return run_ingest(ing);
        if (*diag_cmd)
            return run_diagnose(diag);
    }
    catch (ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    catch (DataError const& e)
    {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
