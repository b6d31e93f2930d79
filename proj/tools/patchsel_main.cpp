// patchsel: analyze, simulate, and solve patch-selection dynamics in
// stochastic environments. See README.md for the file formats.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patchsel/patchsel.hpp"

namespace {

using namespace patchsel;

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

std::vector<std::string> landscape_header(const Landscape& land) {
    return {"n=" + std::to_string(land.n), "mu=" + join_doubles(land.mu),
            "kappa=" + join_doubles(land.kappa),
            "sigma=" + join_doubles(land.sigma)};
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PATCHSEL_SEED")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw UsageError("PATCHSEL_SEED is not an unsigned integer: " +
                             std::string(env));
        return v;
    }
    return 42;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("bad numeric list entry '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return vals;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileNotFound("cannot write '" + path + "'");
    return out;
}

struct SimFlags {
    std::string landscape_path;
    std::string alpha, beta;
    std::string model = "monomorphic";
    double x0 = 1.0;
    double y0 = 1.0;
    std::string x0_list;
    std::string dispersal_rates;
    double delta = 1.0;
    int replicate = 0;
    std::string out_path;
    SimConfig cfg;
};

void run_simulate(const SimFlags& flags) {
    const auto land = load_landscape(flags.landscape_path);
    validate(flags.cfg);
    if (flags.model != "dispersal" && flags.alpha.empty())
        throw UsageError("--alpha is required for model " + flags.model);
    if ((flags.model == "dimorphic" || flags.model == "linearized") &&
        flags.beta.empty())
        throw UsageError("--beta is required for model " + flags.model);
    if (flags.model == "dispersal" && flags.dispersal_rates.empty())
        throw UsageError("--dispersal-rates is required for model dispersal");

    std::vector<std::string> header = {"patchsel simulate model=" + flags.model};
    for (auto& line : landscape_header(land)) header.push_back(line);
    header.push_back("dt=" + format_double(flags.cfg.dt) +
                     " t_max=" + format_double(flags.cfg.t_max) +
                     " burn_in=" + format_double(flags.cfg.burn_in) +
                     " seed=" + std::to_string(flags.cfg.seed) +
                     " replicates=" + std::to_string(flags.cfg.replicates));

    Trajectory traj;
    nlohmann::json extra;
    if (flags.model == "monomorphic") {
        const auto a = parse_strategy(flags.alpha);
        header.push_back("alpha=" + join_doubles(a.alpha));
        traj = simulate_monomorphic(land, a, flags.x0, flags.cfg, flags.replicate);
    } else if (flags.model == "dimorphic") {
        const auto a = parse_strategy(flags.alpha);
        const auto b = parse_strategy(flags.beta);
        header.push_back("alpha=" + join_doubles(a.alpha) +
                         " beta=" + join_doubles(b.alpha));
        traj = simulate_dimorphic(land, a, b, flags.x0, flags.y0, flags.cfg,
                                  flags.replicate);
    } else if (flags.model == "linearized") {
        const auto a = parse_strategy(flags.alpha);
        const auto b = parse_strategy(flags.beta);
        header.push_back("alpha=" + join_doubles(a.alpha) +
                         " beta=" + join_doubles(b.alpha));
        auto res = simulate_linearized_invasion(land, a, b, flags.x0, flags.y0,
                                                flags.cfg);
        extra["slope"] = res.slope;
        extra["slope_stderr"] = res.slope_stderr;
        extra["invasion_rate"] = invasion_rate(land, a, b);
        traj = std::move(res.trajectory);
    } else if (flags.model == "dispersal") {
        const auto rates = parse_double_list(flags.dispersal_rates);
        const auto disp = make_dispersal(land.n, rates, flags.delta);
        std::vector<double> x0(land.n, flags.x0);
        if (!flags.x0_list.empty()) x0 = parse_double_list(flags.x0_list);
        header.push_back("delta=" + format_double(flags.delta));
        traj = simulate_dispersal(land, disp, x0, flags.cfg, flags.replicate);
        extra["occupancy_time_average"] =
            occupancy_time_average(traj, flags.cfg.burn_in);
    } else {
        throw UsageError("unknown model '" + flags.model + "'");
    }

    if (flags.out_path.empty()) throw UsageError("--out is required");
    auto out = open_output(flags.out_path);
    write_trajectory_csv(out, traj, header);

    auto stats = stats_to_json(traj);
    for (auto& [k, v] : extra.items()) stats[k] = v;
    std::cout << stats.dump(2) << "\n";
}

void run_sweep_pair(const std::string& landscape_path, int resolution,
                    double tol_zero, const std::string& out_path) {
    const auto land = load_landscape(landscape_path);
    if (land.n != 2)
        throw UsageError("strategy-pair sweeps need a two-patch landscape");
    if (resolution < 1) throw UsageError("--resolution must be >= 1");

    auto out = open_output(out_path);
    out << "# patchsel sweep pair\n";
    for (const auto& line : landscape_header(land)) out << "# " << line << "\n";
    out << "# resolution=" << resolution
        << " tol_zero=" << format_double(tol_zero) << "\n";
    out << "alpha1,beta1,i_ab,i_ba,outcome\n";
    for (int i = 0; i < resolution; ++i) {
        const double a1 = resolution == 1
                              ? 0.0
                              : static_cast<double>(i) / (resolution - 1);
        const auto a = make_strategy({a1, 1.0 - a1});
        for (int j = 0; j < resolution; ++j) {
            const double b1 = resolution == 1
                                  ? 0.0
                                  : static_cast<double>(j) / (resolution - 1);
            const auto rep =
                classify_outcome(land, a, make_strategy({b1, 1.0 - b1}), tol_zero);
            out << format_double(a1) << "," << format_double(b1) << ","
                << format_double(rep.i_ab) << "," << format_double(rep.i_ba) << ","
                << to_string(rep.outcome) << "\n";
        }
    }
}

void run_sweep_ess(const std::string& landscape_path, const std::string& param,
                   int index, double from, double to, int points,
                   double regularize_eps, const EssOptions& opts,
                   const std::string& out_path) {
    const auto base = load_landscape(landscape_path);
    if (index < 1 || index > base.n)
        throw UsageError("--index must be a patch number in [1, n]");
    if (points < 1) throw UsageError("--points must be >= 1");

    auto out = open_output(out_path);
    out << "# patchsel sweep ess param=" << param << " index=" << index << "\n";
    for (const auto& line : landscape_header(base)) out << "# " << line << "\n";
    out << "# from=" << format_double(from) << " to=" << format_double(to)
        << " points=" << points << " regularize=" << format_double(regularize_eps)
        << " samples=" << opts.certificate_samples << " seed=" << opts.seed
        << "\n";
    out << "param";
    for (int i = 1; i <= base.n; ++i) out << ",alpha" << i;
    out << ",mean_abundance\n";

    for (int p = 0; p < points; ++p) {
        const double value =
            points == 1 ? from : from + (to - from) * p / (points - 1);
        auto mu = base.mu;
        auto kappa = base.kappa;
        auto sigma = base.sigma;
        if (param == "mu") {
            mu[index - 1] = value;
        } else if (param == "kappa") {
            kappa[index - 1] = value;
        } else if (param == "sigma") {
            sigma[static_cast<std::size_t>(index - 1) * base.n + (index - 1)] = value;
        } else {
            throw UsageError("--param must be one of mu, kappa, sigma");
        }
        auto land = build_landscape(base.n, mu, kappa, sigma);
        if (regularize_eps > 0.0) land = regularized(land, regularize_eps);

        const auto res = solve_ess(land, opts);
        double mean = std::numeric_limits<double>::quiet_NaN();
        if (res.kind != EssKind::NotFound &&
            stochastic_growth_rate(land, res.strategy) > 0.0)
            mean = stationary_gamma(land, res.strategy).mean;

        out << format_double(value);
        for (double a : res.strategy.alpha) out << "," << format_double(a);
        out << "," << format_double(mean) << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"stochastic patch-selection dynamics"};
    app.require_subcommand(1);

    std::string landscape_path;
    std::string alpha_text, beta_text;
    double tol_zero = kTolZero;
    std::string format = "json";
    const std::uint64_t seed0 = default_seed();

    auto* validate_cmd = app.add_subcommand("validate", "check a landscape file");
    validate_cmd->add_option("--landscape", landscape_path)->required();

    auto* analyze = app.add_subcommand("analyze", "invasion report for a strategy pair");
    analyze->add_option("--landscape", landscape_path)->required();
    analyze->add_option("--alpha", alpha_text)->required();
    analyze->add_option("--beta", beta_text)->required();
    analyze->add_option("--tol-zero", tol_zero);
    analyze->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    SimFlags sim;
    sim.cfg.seed = seed0;
    auto* simulate = app.add_subcommand("simulate", "write a trajectory CSV");
    simulate->add_option("--landscape", sim.landscape_path)->required();
    simulate->add_option("--model", sim.model)
        ->check(CLI::IsMember({"monomorphic", "dimorphic", "linearized", "dispersal"}));
    simulate->add_option("--alpha", sim.alpha);
    simulate->add_option("--beta", sim.beta);
    simulate->add_option("--x0", sim.x0);
    simulate->add_option("--y0", sim.y0);
    simulate->add_option("--x0-per-patch", sim.x0_list,
                         "initial abundances for dispersal runs");
    simulate->add_option("--dispersal-rates", sim.dispersal_rates,
                         "row-major n*n rate matrix");
    simulate->add_option("--delta", sim.delta);
    simulate->add_option("--dt", sim.cfg.dt);
    simulate->add_option("--t-max", sim.cfg.t_max);
    simulate->add_option("--burn-in", sim.cfg.burn_in);
    simulate->add_option("--seed", sim.cfg.seed);
    simulate->add_option("--replicates", sim.cfg.replicates);
    simulate->add_option("--replicate", sim.replicate);
    simulate->add_option("--out", sim.out_path);

    EssOptions ess_opts;
    ess_opts.seed = seed0;
    double regularize_eps = 0.0;
    auto* ess_cmd = app.add_subcommand("ess", "solve for an evolutionarily stable strategy");
    ess_cmd->add_option("--landscape", landscape_path)->required();
    ess_cmd->add_option("--samples", ess_opts.certificate_samples);
    ess_cmd->add_option("--seed", ess_opts.seed);
    ess_cmd->add_option("--regularize", regularize_eps,
                        "add eps to the diagonal of sigma");

    auto* sweep = app.add_subcommand("sweep", "parameter sweeps to CSV");
    sweep->require_subcommand(1);

    int resolution = 101;
    std::string out_path;
    auto* pair = sweep->add_subcommand("pair", "strategy-pair invasion grid");
    pair->add_option("--landscape", landscape_path)->required();
    pair->add_option("--resolution", resolution);
    pair->add_option("--tol-zero", tol_zero);
    pair->add_option("--out", out_path)->required();

    std::string param = "mu";
    int index = 2;
    double from = 0.0, to = 1.0;
    int points = 50;
    auto* essweep = sweep->add_subcommand("ess", "ESS along a landscape parameter");
    essweep->add_option("--landscape", landscape_path)->required();
    essweep->add_option("--param", param);
    essweep->add_option("--index", index);
    essweep->add_option("--from", from)->required();
    essweep->add_option("--to", to)->required();
    essweep->add_option("--points", points);
    essweep->add_option("--samples", ess_opts.certificate_samples);
    essweep->add_option("--seed", ess_opts.seed);
    essweep->add_option("--regularize", regularize_eps);
    essweep->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (validate_cmd->parsed()) {
        const auto land = load_landscape(landscape_path);
        std::cout << "ok: " << land.n << " patches\n";
        return 0;
    }
    if (analyze->parsed()) {
        const auto land = load_landscape(landscape_path);
        const auto rep = classify_outcome(land, parse_strategy(alpha_text),
                                          parse_strategy(beta_text), tol_zero);
        if (format == "csv")
            std::cout << report_csv_header() << "\n" << report_csv_row(rep) << "\n";
        else
            std::cout << report_to_json(rep).dump(2) << "\n";
        return 0;
    }
    if (simulate->parsed()) {
        run_simulate(sim);
        return 0;
    }
    if (ess_cmd->parsed()) {
        auto land = load_landscape(landscape_path);
        if (regularize_eps > 0.0) land = regularized(land, regularize_eps);
        std::cout << ess_result_to_json(solve_ess(land, ess_opts)).dump(2) << "\n";
        return 0;
    }
    if (pair->parsed()) {
        run_sweep_pair(landscape_path, resolution, tol_zero, out_path);
        return 0;
    }
    if (essweep->parsed()) {
        run_sweep_ess(landscape_path, param, index, from, to, points,
                      regularize_eps, ess_opts, out_path);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const patchsel::UsageError& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const patchsel::Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
