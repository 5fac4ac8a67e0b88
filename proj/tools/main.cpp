// Command-line driver: reproducible experiments over the gas sampler, the
// limit laws, the rate functions, and the equilibrium solver, with CSV/JSON
// artifacts and a replayable run manifest per invocation.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include "schatten/coulomb.hpp"
#include "schatten/csv.hpp"
#include "schatten/empirical.hpp"
#include "schatten/equilibrium.hpp"
#include "schatten/ratefn.hpp"
#include "schatten/special.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace schatten;

namespace {

struct ResourceGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One run: subcommand, normalized parameters, artifacts written.
struct RunContext {
    std::string subcommand;
    std::map<std::string, std::string> params;
    fs::path out_dir;
    uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void set(const std::string& key, const std::string& value) { params[key] = value; }
    void set(const std::string& key, double value) { params[key] = format_double(value); }
    void set(const std::string& key, int value) { params[key] = std::to_string(value); }

    void write(const std::string& name, const std::string& content) {
        fs::create_directories(out_dir);
        write_file_atomic((out_dir / name).string(), content);
        outputs.push_back(name);
    }

    void finish() {
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json m;
        m["subcommand"] = subcommand;
        m["params"] = json::object();
        for (const auto& [k, v] : params) m["params"][k] = v;
        m["seed"] = seed;
        m["outputs"] = outputs;
        m["duration_seconds"] = dt;
        fs::create_directories(out_dir);
        write_file_atomic((out_dir / "manifest.json").string(), m.dump(2) + "\n");
        for (const auto& name : outputs)
            std::cout << "wrote " << (out_dir / name).string() << "\n";
    }
};

// Independent per-task randomness derived from the run seed: the task id keys
// a counter-based stream, so replicas are order-free.
uint64_t derive_seed(uint64_t seed, uint64_t task_id) {
    Philox s(seed, task_id);
    return s.next_u64();
}

json constants_json(const Exponent& p, double beta) {
    json j;
    j["p"] = p.str();
    j["beta"] = beta;
    if (p.is_infinite()) {
        j["C"] = rate_constant(p, beta);
        return j;
    }
    const auto mc = model_constants(p.value(), beta);
    j["b_p"] = mc.law_edge;
    j["alpha_p"] = mc.h_moment;
    j["r_p"] = mc.gas_edge;
    j["B"] = mc.free_energy;
    j["C"] = mc.rate_shift;
    return j;
}

Ensemble parse_ensemble(const std::string& s) {
    if (s == "eigen") return Ensemble::eigenvalue;
    if (s == "singular") return Ensemble::singular;
    throw CLI::ValidationError("--ensemble must be 'eigen' or 'singular'");
}

// ---------------------------------------------------------------------------
// converge: LLN trend of normalized gas spectra against the limit law.

struct ConvergeRow {
    int n;
    int replica;
    double ks;
    double w1;
    std::vector<double> atoms;
};

ConvergeRow converge_one(double p, double beta, Ensemble ens, bool cone, int n, int n_index,
                         int replica, uint64_t seed, int sweeps, int burn_in,
                         const LimitLaw& law) {
    Philox stream(seed, (static_cast<uint64_t>(n_index + 1) << 32) |
                            static_cast<uint64_t>(replica));
    GasConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.beta = beta;
    cfg.ensemble = ens;
    cfg.sweeps = sweeps;
    cfg.burn_in = burn_in;
    cfg.thin = std::max(1, sweeps - burn_in);  // keep exactly the final state
    cfg.seed = stream.next_u64();
    const double u = stream.uniform01();
    const GasChain chain = mcmc_run(cfg);
    const auto& state = chain.states.back();

    EmpiricalMeasure mu = [&] {
        if (ens == Ensemble::eigenvalue)
            return cone ? normalize_cone(state, p) : normalize_uniform(state, u, p, beta);
        const auto squared =
            normalize_singular(state, cone ? std::nullopt : std::optional<double>(u), p, beta);
        return pushforward_sqrt(squared);  // singular-value atoms n^{1/p} s_j
    }();
    return ConvergeRow{n, replica, ks_distance(mu, law), wasserstein1(mu, law), mu.atoms()};
}

// ---------------------------------------------------------------------------

int run(std::vector<std::string> args);

int replay_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open manifest: " + path);
    json m = json::parse(is);
    std::vector<std::string> args;
    args.push_back(m.at("subcommand").get<std::string>());
    for (const auto& [k, v] : m.at("params").items()) {
        const std::string sv = v.get<std::string>();
        if (sv == "true") {
            args.push_back("--" + k);
        } else if (sv == "false") {
            continue;
        } else {
            args.push_back("--" + k);
            args.push_back(sv);
        }
    }
    return run(std::move(args));
}

int run(std::vector<std::string> args) {
    CLI::App app{"spectral-measure laboratory for random matrices in Schatten p-balls"};
    app.require_subcommand(1);

    std::string replay_path;

    // ---- constants ----
    auto* cmd_constants = app.add_subcommand("constants", "closed-form model constants");
    std::string c_p;
    double c_beta = 2.0;
    std::string c_out = ".";
    cmd_constants->add_option("--p", c_p, "exponent (float or 'inf')")->required();
    cmd_constants->add_option("--beta", c_beta, "inverse temperature")->required();
    cmd_constants->add_option("--out", c_out, "output directory");

    // ---- limit-density ----
    auto* cmd_density = app.add_subcommand("limit-density", "tabulate a limiting density");
    std::string d_p, d_ens = "eigen", d_out = ".", d_quantity = "density";
    int d_points = 1000;
    cmd_density->add_option("--p", d_p)->required();
    cmd_density->add_option("--ensemble", d_ens, "eigen|singular");
    cmd_density->add_option("--points", d_points, "row count");
    cmd_density->add_option("--quantity", d_quantity, "density|cdf");
    cmd_density->add_option("--out", d_out);

    // ---- converge ----
    auto* cmd_converge = app.add_subcommand("converge", "LLN trend of normalized gas spectra");
    double v_p = 2.0, v_beta = 2.0;
    std::string v_ens = "eigen", v_measure = "cone", v_out = ".";
    std::vector<int> v_ns;
    int v_replicas = 8, v_sweeps = 2500, v_burnin = 500;
    uint64_t v_seed = 0;
    bool v_force = false;
    cmd_converge->add_option("--p", v_p)->required();
    cmd_converge->add_option("--beta", v_beta)->required();
    cmd_converge->add_option("--ensemble", v_ens, "eigen|singular");
    cmd_converge->add_option("--measure", v_measure, "cone|uniform");
    cmd_converge->add_option("--n", v_ns, "particle counts, ascending")->required()->delimiter(',');
    cmd_converge->add_option("--replicas", v_replicas);
    cmd_converge->add_option("--sweeps", v_sweeps);
    cmd_converge->add_option("--burn-in", v_burnin);
    cmd_converge->add_option("--seed", v_seed);
    cmd_converge->add_flag("--force", v_force, "lift the n <= 4096 resource guard");
    bool v_save_measures = false;
    cmd_converge->add_flag("--save-measures", v_save_measures,
                           "also write each normalized measure as an atoms csv");
    cmd_converge->add_option("--out", v_out);

    // ---- rate ----
    auto* cmd_rate = app.add_subcommand("rate", "evaluate a rate function on a grid measure");
    std::string r_in, r_p, r_variant = "spectral", r_out = ".";
    double r_beta = 2.0, r_m = -1.0;
    cmd_rate->add_option("--in", r_in, "grid measure csv (center,weight)")->required();
    cmd_rate->add_option("--p", r_p)->required();
    cmd_rate->add_option("--beta", r_beta)->required();
    cmd_rate->add_option("--variant", r_variant, "spectral|spectral-inf|singular|gas|pair");
    cmd_rate->add_option("--m", r_m, "moment coordinate (pair variant)");
    cmd_rate->add_option("--out", r_out);

    // ---- equilibrium ----
    auto* cmd_eq = app.add_subcommand("equilibrium", "minimize the spectral rate function");
    std::string e_p, e_ens = "eigen", e_out = ".";
    double e_beta = 2.0, e_L = 0.0, e_gap = 1e-5;
    int e_cells = 1024;
    long e_maxit = 4'000'000;
    bool e_away = false;
    cmd_eq->add_option("--p", e_p)->required();
    cmd_eq->add_option("--beta", e_beta)->required();
    cmd_eq->add_option("--cells", e_cells);
    cmd_eq->add_option("--L", e_L, "domain half-width (default: 1.1 x support edge)");
    cmd_eq->add_option("--gap-tol", e_gap);
    cmd_eq->add_option("--max-iter", e_maxit);
    cmd_eq->add_flag("--away", e_away, "use away steps");
    cmd_eq->add_option("--ensemble", e_ens, "eigen|singular");
    cmd_eq->add_option("--out", e_out);

    // ---- sample ----
    auto* cmd_sample = app.add_subcommand("sample", "run the gas chain and export it");
    double s_p = 2.0, s_beta = 2.0, s_sigma = 0.5;
    std::string s_ens = "eigen", s_out = ".";
    int s_n = 16, s_sweeps = 2000, s_burnin = 500, s_thin = 10;
    uint64_t s_seed = 0;
    cmd_sample->add_option("--n", s_n)->required();
    cmd_sample->add_option("--p", s_p)->required();
    cmd_sample->add_option("--beta", s_beta)->required();
    cmd_sample->add_option("--ensemble", s_ens, "eigen|singular");
    cmd_sample->add_option("--sweeps", s_sweeps);
    cmd_sample->add_option("--burn-in", s_burnin);
    cmd_sample->add_option("--thin", s_thin);
    cmd_sample->add_option("--sigma", s_sigma, "initial proposal scale");
    cmd_sample->add_option("--seed", s_seed);
    cmd_sample->add_option("--out", s_out);

    {
        std::vector<const char*> argv;
        argv.push_back("schatten-gas");
        for (const auto& a : args) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }
    }

    if (cmd_constants->parsed()) {
        const Exponent p = Exponent::parse(c_p);
        RunContext ctx{.subcommand = "constants", .params = {}, .out_dir = c_out};
        ctx.set("p", p.str());
        ctx.set("beta", c_beta);
        ctx.set("out", c_out);
        const json j = constants_json(p, c_beta);
        std::cout << j.dump(2) << "\n";
        ctx.write("constants.json", j.dump(2) + "\n");
        ctx.finish();
        return 0;
    }

    if (cmd_density->parsed()) {
        const Exponent p = Exponent::parse(d_p);
        const Ensemble ens = parse_ensemble(d_ens);
        if (d_points < 1) throw std::domain_error("--points must be >= 1");
        if (d_quantity != "density" && d_quantity != "cdf")
            throw CLI::ValidationError("--quantity must be 'density' or 'cdf'");
        RunContext ctx{.subcommand = "limit-density", .params = {}, .out_dir = d_out};
        ctx.set("p", p.str());
        ctx.set("ensemble", d_ens);
        ctx.set("points", d_points);
        ctx.set("quantity", d_quantity);
        ctx.set("out", d_out);
        const LimitLaw law(p, ens);
        std::string csv = "x," + d_quantity + "\n";
        for (const auto& [x, f] : tabulate_density(law, d_points)) {
            const double value = d_quantity == "density" ? f : law.cdf(x);
            csv += format_double(x) + "," + format_double(value) + "\n";
        }
        ctx.write(d_quantity + ".csv", csv);
        ctx.finish();
        return 0;
    }

    if (cmd_converge->parsed()) {
        const Ensemble ens = parse_ensemble(v_ens);
        if (v_measure != "cone" && v_measure != "uniform")
            throw CLI::ValidationError("--measure must be 'cone' or 'uniform'");
        if (v_ns.empty()) throw std::domain_error("--n list is empty");
        for (std::size_t i = 1; i < v_ns.size(); ++i)
            if (v_ns[i] <= v_ns[i - 1]) throw std::domain_error("--n must be ascending");
        for (int n : v_ns)
            if (n > 4096 && !v_force)
                throw ResourceGuardError("n > 4096 needs --force");
        RunContext ctx{.subcommand = "converge", .params = {}, .out_dir = v_out};
        ctx.seed = v_seed;
        ctx.set("p", v_p);
        ctx.set("beta", v_beta);
        ctx.set("ensemble", v_ens);
        ctx.set("measure", v_measure);
        {
            std::string ns;
            for (std::size_t i = 0; i < v_ns.size(); ++i)
                ns += (i ? "," : "") + std::to_string(v_ns[i]);
            ctx.params["n"] = ns;
        }
        ctx.set("replicas", v_replicas);
        ctx.set("sweeps", v_sweeps);
        ctx.set("burn-in", v_burnin);
        ctx.params["seed"] = std::to_string(v_seed);
        ctx.params["force"] = v_force ? "true" : "false";
        ctx.params["save-measures"] = v_save_measures ? "true" : "false";
        ctx.set("out", v_out);

        const LimitLaw law(Exponent::finite(v_p),
                           ens == Ensemble::eigenvalue ? Ensemble::eigenvalue
                                                       : Ensemble::singular);
        const bool cone = v_measure == "cone";
        std::string csv = "n,replica,ks,w1\n";
        for (std::size_t i = 0; i < v_ns.size(); ++i) {
            std::vector<std::future<ConvergeRow>> futures;
            for (int r = 0; r < v_replicas; ++r)
                futures.push_back(std::async(std::launch::async, converge_one, v_p, v_beta,
                                             ens, cone, v_ns[i], static_cast<int>(i), r,
                                             v_seed, v_sweeps, v_burnin, std::cref(law)));
            for (auto& f : futures) {
                const ConvergeRow row = f.get();
                csv += std::to_string(row.n) + "," + std::to_string(row.replica) + "," +
                       format_double(row.ks) + "," + format_double(row.w1) + "\n";
                if (v_save_measures)
                    ctx.write("measure_n" + std::to_string(row.n) + "_r" +
                                  std::to_string(row.replica) + ".csv",
                              empirical_measure_csv(EmpiricalMeasure(row.atoms)));
            }
        }
        ctx.write("converge.csv", csv);
        ctx.finish();
        return 0;
    }

    if (cmd_rate->parsed()) {
        const Exponent p = Exponent::parse(r_p);
        RunContext ctx{.subcommand = "rate", .params = {}, .out_dir = r_out};
        ctx.set("in", r_in);
        ctx.set("p", p.str());
        ctx.set("beta", r_beta);
        ctx.set("variant", r_variant);
        if (r_variant == "pair") ctx.set("m", r_m);
        ctx.set("out", r_out);

        std::ifstream is(r_in);
        if (!is) throw std::runtime_error("cannot open measure csv: " + r_in);
        const GridMeasure mu = parse_grid_measure_csv(is);

        Rate rate = Rate::infinity();
        json j;
        j["variant"] = r_variant;
        j["p"] = p.str();
        j["beta"] = r_beta;
        if (r_variant == "spectral") {
            rate = rate_spectral(mu, p, r_beta, RateEnsemble::eigenvalue);
            j["moment"] = mu.moment(p.value());
        } else if (r_variant == "spectral-inf") {
            rate = rate_spectral(mu, p, r_beta, RateEnsemble::eigenvalue_inf);
            j["mass_outside"] = mu.mass_outside(-1.0, 1.0);
        } else if (r_variant == "singular") {
            rate = rate_spectral(mu, p, r_beta, RateEnsemble::singular);
            j["moment"] = mu.moment(0.5 * p.value());
        } else if (r_variant == "gas") {
            rate = rate_gas(mu, p.value(), r_beta);
            j["moment"] = mu.moment(p.value());
        } else if (r_variant == "pair") {
            if (r_m < 0.0) throw std::domain_error("--m is required for the pair variant");
            rate = rate_pair(mu, r_m, p.value(), r_beta);
            j["moment"] = mu.moment(p.value());
            j["m"] = r_m;
        } else {
            throw CLI::ValidationError("unknown --variant: " + r_variant);
        }
        j["log_energy"] = grid_log_energy(mu);
        if (rate.is_infinite())
            j["rate"] = "infinity";
        else
            j["rate"] = rate.value();
        std::cout << j.dump(2) << "\n";
        ctx.write("rate.json", j.dump(2) + "\n");
        ctx.finish();
        return 0;
    }

    if (cmd_eq->parsed()) {
        const Exponent p = Exponent::parse(e_p);
        const Ensemble ens = parse_ensemble(e_ens);
        double L = e_L;
        if (L <= 0.0 && !p.is_infinite()) {
            const double edge = model_constants(p.value(), e_beta).law_edge;
            L = 1.1 * (ens == Ensemble::eigenvalue ? edge : edge * edge);
        }
        RunContext ctx{.subcommand = "equilibrium", .params = {}, .out_dir = e_out};
        ctx.set("p", p.str());
        ctx.set("beta", e_beta);
        ctx.set("cells", e_cells);
        ctx.set("L", L);
        ctx.set("gap-tol", e_gap);
        ctx.set("max-iter", static_cast<int>(e_maxit));
        ctx.params["away"] = e_away ? "true" : "false";
        ctx.set("ensemble", e_ens);
        ctx.set("out", e_out);

        SolveOptions opt;
        opt.gap_tol = e_gap;
        opt.max_iter = e_maxit;
        opt.away_steps = e_away;
        const SolveReport rep = solve_equilibrium(p, e_beta, L, e_cells, opt, ens);

        json j;
        j["p"] = p.str();
        j["beta"] = e_beta;
        j["ensemble"] = e_ens;
        j["cells"] = e_cells;
        j["L"] = L;
        j["gap_tol"] = e_gap;
        j["away"] = e_away;
        j["objective"] = rep.objective;
        j["fw_gap"] = rep.fw_gap;
        j["iterations"] = rep.iterations;
        j["moment"] = rep.moment;
        std::cout << j.dump(2) << "\n";
        ctx.write("equilibrium.json", j.dump(2) + "\n");
        ctx.write("minimizer.csv", grid_measure_csv(rep.minimizer));
        ctx.finish();
        return 0;
    }

    if (cmd_sample->parsed()) {
        GasConfig cfg;
        cfg.n = s_n;
        cfg.p = s_p;
        cfg.beta = s_beta;
        cfg.ensemble = parse_ensemble(s_ens);
        cfg.sweeps = s_sweeps;
        cfg.burn_in = s_burnin;
        cfg.thin = s_thin;
        cfg.proposal_sigma = s_sigma;
        cfg.seed = s_seed;
        cfg.validate();
        if (s_n > 4096) throw ResourceGuardError("n > 4096 needs the converge --force path");

        RunContext ctx{.subcommand = "sample", .params = {}, .out_dir = s_out};
        ctx.seed = s_seed;
        ctx.set("n", s_n);
        ctx.set("p", s_p);
        ctx.set("beta", s_beta);
        ctx.set("ensemble", s_ens);
        ctx.set("sweeps", s_sweeps);
        ctx.set("burn-in", s_burnin);
        ctx.set("thin", s_thin);
        ctx.set("sigma", s_sigma);
        ctx.params["seed"] = std::to_string(s_seed);
        ctx.set("out", s_out);

        const GasChain chain = mcmc_run(cfg);
        std::string csv;
        for (int i = 0; i < cfg.n; ++i) csv += (i ? ",x" : "x") + std::to_string(i);
        csv += "\n";
        for (const auto& state : chain.states) {
            for (int i = 0; i < cfg.n; ++i) {
                if (i) csv += ',';
                csv += format_double(state[i]);
            }
            csv += '\n';
        }
        ctx.write("chain.csv", csv);
        std::ostringstream cfg_text;
        save_gas_config(cfg_text, cfg);
        ctx.write("gas_config.txt", cfg_text.str());
        std::cout << "acceptance_rate " << format_double(chain.acceptance_rate) << "\n";
        ctx.finish();
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty() && args[0] == "--replay") {
            if (args.size() != 2) {
                std::cerr << "usage: schatten-gas --replay manifest.json\n";
                return 2;
            }
            return replay_manifest(args[1]);
        }
        return run(std::move(args));
    } catch (const ResourceGuardError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 4;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
