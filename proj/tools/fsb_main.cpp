// fsb: robust scale/location estimation under f-separable Bregman
// distortion measures. Subcommands: estimate, check, are, experiment,
// sample. Exit codes: 0 ok, 1 error, 2 non-convergence, 3 divergent
// condition.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fsb/fsb.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitDivergent = 3;

std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json make_manifest(const std::string& command,
                   const std::map<std::string, std::string>& params,
                   std::uint64_t seed) {
    json m;
    m["command"] = command;
    m["parameters"] = params;
    m["seed"] = seed;
    m["artifact_version"] = fsb::kVersion;
    m["timestamp"] = iso_timestamp();
    return m;
}

void write_manifest_sidecar(const std::string& out_path, const json& manifest) {
    std::ofstream f(out_path + ".manifest.json");
    if (!f) throw fsb::Error("cannot write manifest next to " + out_path);
    f << manifest.dump(2) << '\n';
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
    if (seed_opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("FSB_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return flag_value;
}

// --f lse:ALPHA | pow:BETA[,A] | linear
fsb::WeightFunction parse_weight(const std::string& spec) {
    if (spec == "linear") return fsb::WeightFunction::linear();
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if (colon == std::string::npos) {
        throw fsb::Error("--f: expected lse:ALPHA, pow:BETA[,A], or linear; got '" +
                         spec + "'");
    }
    const std::string args = spec.substr(colon + 1);
    if (head == "lse") {
        return fsb::WeightFunction::log_sum_exp(std::stod(args));
    }
    if (head == "pow") {
        const auto comma = args.find(',');
        const double beta = std::stod(args.substr(0, comma));
        const double a =
            comma == std::string::npos ? 0.0 : std::stod(args.substr(comma + 1));
        return fsb::WeightFunction::power_mean(beta, a);
    }
    throw fsb::Error("--f: unknown family '" + head + "'");
}

// --g exp:K | gauss | student:NU (dim supplied separately)
fsb::GeneratorFunction parse_generator(const std::string& spec, int dim) {
    if (spec == "gauss") return fsb::GeneratorFunction::gaussian_shape();
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if (colon != std::string::npos) {
        const double v = std::stod(spec.substr(colon + 1));
        if (head == "exp") return fsb::GeneratorFunction::exponential(v);
        if (head == "student") return fsb::GeneratorFunction::student_shape(v, dim);
    }
    throw fsb::Error("--g: expected exp:K, gauss, or student:NU; got '" + spec +
                     "'");
}

// --divergence sq | mahalanobis:FILE | is
fsb::BregmanDivergence parse_divergence(const std::string& spec, int dim) {
    if (spec == "sq") return fsb::BregmanDivergence::squared_euclidean(dim);
    if (spec == "is") return fsb::BregmanDivergence::itakura_saito();
    const std::string prefix = "mahalanobis:";
    if (spec.rfind(prefix, 0) == 0) {
        const Eigen::MatrixXd A =
            fsb::read_matrix_csv_file(spec.substr(prefix.size()));
        if (A.rows() != dim) {
            throw fsb::Error("--divergence: matrix is " +
                             std::to_string(A.rows()) + "x" +
                             std::to_string(A.cols()) + " but data has " +
                             std::to_string(dim) + " columns");
        }
        return fsb::BregmanDivergence::mahalanobis(A);
    }
    throw fsb::Error(
        "--divergence: expected sq, mahalanobis:FILE, or is; got '" + spec +
        "'");
}

json theta_to_json(const Eigen::VectorXd& theta) {
    if (theta.size() == 1) return theta[0];
    json arr = json::array();
    for (Eigen::Index i = 0; i < theta.size(); ++i) arr.push_back(theta[i]);
    return arr;
}

// ---------------------------------------------------------------- estimate

int cmd_estimate(const std::string& input_csv, const std::string& div_spec,
                 const std::string& f_spec, double tol, int max_iter,
                 int starts, std::uint64_t seed, const std::string& out_path) {
    const Eigen::MatrixXd data = fsb::read_dataset_csv_file(input_csv);
    const int dim = static_cast<int>(data.cols());
    const fsb::BregmanDivergence div = parse_divergence(div_spec, dim);
    const fsb::WeightFunction w = parse_weight(f_spec);

    fsb::EstimatorConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.n_starts = starts;
    cfg.start_seed = seed;

    json out;
    int code = kExitOk;
    try {
        const fsb::EstimateResult r = fsb::estimate(data, div, w, cfg);
        out["theta_hat"] = theta_to_json(r.theta_hat);
        out["objective"] = r.objective;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["residual"] = r.residual;
    } catch (const fsb::NonConvergenceError& e) {
        const fsb::EstimateResult& r = e.best();
        out["theta_hat"] =
            r.theta_hat.size() > 0 ? theta_to_json(r.theta_hat) : json();
        out["objective"] = r.objective;
        out["iterations"] = r.iterations;
        out["converged"] = false;
        out["residual"] = r.residual;
        std::cerr << e.what() << "\n";
        code = kExitNonConvergence;
    }
    out["manifest"] = make_manifest(
        "estimate",
        {{"input", input_csv}, {"divergence", div_spec}, {"f", f_spec},
         {"tol", num_str(tol)}, {"max_iter", std::to_string(max_iter)},
         {"starts", std::to_string(starts)}},
        seed);

    if (out_path.empty() || out_path == "-") {
        std::cout << out.dump(2) << '\n';
    } else {
        std::ofstream f(out_path);
        if (!f) throw fsb::Error("cannot open '" + out_path + "' for writing");
        f << out.dump(2) << '\n';
    }
    return code;
}

// ------------------------------------------------------------------ check

int cmd_check(int theorem, const std::string& g_spec, const std::string& f_spec,
              int dim, const std::string& phi_spec,
              const std::string& domain_spec) {
    const fsb::WeightFunction w = parse_weight(f_spec);
    const fsb::GeneratorFunction g = parse_generator(g_spec, dim);

    fsb::ConditionVerdict v;
    if (theorem == 1) {
        v = fsb::check_theorem1(g, w, dim);
    } else if (theorem == 2) {
        v = fsb::check_theorem2(g, w);
    } else if (theorem == 4) {
        fsb::Interval domain;
        fsb::BregmanDivergence phi = fsb::BregmanDivergence::itakura_saito();
        if (phi_spec == "is") {
            domain = fsb::Interval{0.0, std::numeric_limits<double>::infinity()};
        } else if (phi_spec == "sq") {
            phi = fsb::BregmanDivergence::squared_euclidean(1);
            domain = fsb::Interval{};
        } else {
            throw fsb::Error("--phi: expected is or sq, got '" + phi_spec + "'");
        }
        if (!domain_spec.empty()) {
            const auto colon = domain_spec.find(':');
            if (colon == std::string::npos) {
                throw fsb::Error("--domain: expected LO:HI");
            }
            domain.lo = std::stod(domain_spec.substr(0, colon));
            domain.hi = std::stod(domain_spec.substr(colon + 1));
        }
        const fsb::ContinuousBregmanModel model(phi, g, domain);
        v = fsb::check_theorem4(model, w);
    } else {
        throw fsb::Error("--theorem: expected 1, 2, or 4");
    }
    std::cout << v.to_json() << '\n';
    return v.finite ? kExitOk : kExitDivergent;
}

// -------------------------------------------------------------------- are

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
        !(step > 0.0)) {
        throw fsb::Error("--alpha-grid: expected START:STOP:STEP with STEP > 0");
    }
    std::vector<double> grid;
    for (double a = start; a <= stop + 0.5 * step; a += step) {
        grid.push_back(a);
    }
    return grid;
}

int cmd_are(double k, const std::string& grid_spec, bool baselines,
            const std::string& out_path, std::uint64_t seed) {
    const std::vector<double> grid = parse_grid(grid_spec);
    for (double a : grid) {
        if (!(a > -0.5 * k)) {
            throw fsb::Error("--alpha-grid: alpha = " + std::to_string(a) +
                             " violates alpha > -k/2");
        }
    }
    const auto rows = fsb::are_curve(k, grid, baselines);
    std::ofstream f(out_path);
    if (!f) throw fsb::Error("cannot open '" + out_path + "' for writing");
    fsb::write_are_csv(f, rows);
    write_manifest_sidecar(
        out_path,
        make_manifest("are",
                      {{"k", num_str(k)}, {"alpha_grid", grid_spec},
                       {"baselines", baselines ? "true" : "false"},
                       {"out", out_path}},
                      seed));
    return kExitOk;
}

// ------------------------------------------------------------- experiment

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw fsb::Error("config schema: " + path + ": " + what);
}

double need_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) schema_error(path + "." + key, "missing");
    if (!j[key].is_number()) schema_error(path + "." + key, "expected a number");
    return j[key].get<double>();
}

std::string need_string(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) schema_error(path + "." + key, "missing");
    if (!j[key].is_string()) schema_error(path + "." + key, "expected a string");
    return j[key].get<std::string>();
}

fsb::ContaminationSpec spec_from_config(const json& cfg) {
    if (!cfg.contains("target") || !cfg["target"].is_object()) {
        schema_error("$.target", "missing object");
    }
    const json& tj = cfg["target"];
    const std::string model_kind = need_string(tj, "$.target", "model");
    const std::string g_spec = need_string(tj, "$.target", "g");
    const double theta_star = need_number(tj, "$.target", "theta_star");

    fsb::ContaminationSpec spec;
    spec.target_g = parse_generator(g_spec, 1);
    spec.theta_star = theta_star;
    if (model_kind == "is") {
        const fsb::ISModel m(spec.target_g);
        spec.target = m.scalar_view();
    } else if (model_kind == "elliptical") {
        const fsb::EllipticalModel m(spec.target_g,
                                     Eigen::MatrixXd::Identity(1, 1));
        spec.target = m.scalar_view();
    } else {
        schema_error("$.target.model", "expected 'is' or 'elliptical'");
    }

    spec.epsilon = need_number(cfg, "$", "epsilon");

    if (!cfg.contains("contaminant") || !cfg["contaminant"].is_object()) {
        schema_error("$.contaminant", "missing object");
    }
    const json& cj = cfg["contaminant"];
    const std::string ckind = need_string(cj, "$.contaminant", "type");
    if (ckind == "pointmass") {
        spec.contaminant =
            fsb::PointMass{need_number(cj, "$.contaminant", "location")};
    } else if (ckind == "model") {
        const std::string cg = need_string(cj, "$.contaminant", "g");
        const double ct = need_number(cj, "$.contaminant", "theta");
        const fsb::ISModel cm(parse_generator(cg, 1));
        spec.contaminant = fsb::ContaminantModel{cm.scalar_view(), ct};
    } else {
        schema_error("$.contaminant.type", "expected 'pointmass' or 'model'");
    }
    spec.validate();
    return spec;
}

int cmd_experiment(const std::string& kind, const std::string& config_path,
                   std::uint64_t seed, const std::string& out_path) {
    std::ifstream cf(config_path);
    if (!cf) throw fsb::Error("cannot open config '" + config_path + "'");
    json cfg;
    try {
        cf >> cfg;
    } catch (const json::exception& e) {
        throw fsb::Error("config is not valid JSON: " + std::string(e.what()));
    }

    std::ofstream f(out_path);
    if (!f) throw fsb::Error("cannot open '" + out_path + "' for writing");

    if (kind == "latent-bias") {
        const fsb::ContaminationSpec spec = spec_from_config(cfg);
        if (!cfg.contains("alphas") || !cfg["alphas"].is_array() ||
            cfg["alphas"].empty()) {
            schema_error("$.alphas", "expected a non-empty array of numbers");
        }
        std::vector<fsb::WeightFunction> ws;
        for (const auto& a : cfg["alphas"]) {
            if (!a.is_number()) schema_error("$.alphas[]", "expected a number");
            ws.push_back(fsb::WeightFunction::log_sum_exp(a.get<double>()));
        }
        const auto n = static_cast<std::size_t>(need_number(cfg, "$", "n"));
        const int reps =
            static_cast<int>(need_number(cfg, "$", "replications"));
        const auto rows = fsb::latent_bias_sweep(
            spec, fsb::BregmanDivergence::itakura_saito(), ws, n, reps,
            fsb::RngSeed{seed});
        fsb::write_sweep_csv(f, rows);
    } else if (kind == "small-inlier") {
        const double theta_star = need_number(cfg, "$", "theta_star");
        const double inlier = need_number(cfg, "$", "inlier_location");
        const double eps = need_number(cfg, "$", "epsilon");
        const double alpha = need_number(cfg, "$", "alpha");
        const auto n = static_cast<std::size_t>(need_number(cfg, "$", "n"));
        const int reps =
            static_cast<int>(need_number(cfg, "$", "replications"));
        const auto r = fsb::small_inlier_experiment(theta_star, inlier, eps,
                                                    alpha, n, reps,
                                                    fsb::RngSeed{seed});
        f << "alpha,bias_fsep,bias_mle\n";
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", alpha,
                      r.bias_fsep, r.bias_mle);
        f << buf;
    } else {
        throw fsb::Error("--kind: expected latent-bias or small-inlier");
    }

    write_manifest_sidecar(
        out_path, make_manifest("experiment",
                                {{"kind", kind}, {"config", config_path},
                                 {"out", out_path}},
                                seed));
    return kExitOk;
}

// ----------------------------------------------------------------- sample

int cmd_sample(const std::string& model_spec, const std::string& g_spec,
               const std::string& theta_spec, std::size_t n,
               std::uint64_t seed, const std::string& out_path,
               const std::string& a_file, const std::string& phi_spec) {
    // parse theta (scalar or comma-separated vector)
    std::vector<double> tv;
    {
        std::stringstream ss(theta_spec);
        std::string item;
        while (std::getline(ss, item, ',')) tv.push_back(std::stod(item));
        if (tv.empty()) throw fsb::Error("--theta: empty");
    }
    const int dim = static_cast<int>(tv.size());
    Eigen::VectorXd theta(dim);
    for (int i = 0; i < dim; ++i) theta[i] = tv[static_cast<std::size_t>(i)];

    Eigen::MatrixXd data;
    if (model_spec == "is") {
        if (dim != 1) throw fsb::Error("--model is: theta must be scalar");
        const fsb::ISModel m(parse_generator(g_spec, 1));
        const auto xs = m.sample(theta[0], n, fsb::RngSeed{seed});
        data.resize(static_cast<Eigen::Index>(xs.size()), 1);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            data(static_cast<Eigen::Index>(i), 0) = xs[i];
        }
    } else if (model_spec == "elliptical") {
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(dim, dim);
        if (!a_file.empty()) {
            A = fsb::read_matrix_csv_file(a_file);
            if (A.rows() != dim) {
                throw fsb::Error("--A: matrix dimension does not match theta");
            }
        }
        const fsb::EllipticalModel m(parse_generator(g_spec, dim), A);
        const auto xs = m.sample(theta, n, fsb::RngSeed{seed});
        data.resize(static_cast<Eigen::Index>(xs.size()), dim);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            data.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
        }
    } else if (model_spec == "cbregman") {
        if (dim != 1) throw fsb::Error("--model cbregman: theta must be scalar");
        fsb::BregmanDivergence phi = fsb::BregmanDivergence::itakura_saito();
        fsb::Interval domain{0.0, std::numeric_limits<double>::infinity()};
        if (phi_spec == "sq") {
            phi = fsb::BregmanDivergence::squared_euclidean(1);
            domain = fsb::Interval{};
        } else if (phi_spec != "is") {
            throw fsb::Error("--phi: expected is or sq");
        }
        const fsb::ContinuousBregmanModel m(phi, parse_generator(g_spec, 1),
                                            domain);
        const auto xs = m.sample(theta[0], n, fsb::RngSeed{seed});
        data.resize(static_cast<Eigen::Index>(xs.size()), 1);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            data(static_cast<Eigen::Index>(i), 0) = xs[i];
        }
    } else {
        throw fsb::Error("--model: expected elliptical, is, or cbregman");
    }

    fsb::write_dataset_csv_file(out_path, data);
    write_manifest_sidecar(
        out_path,
        make_manifest("sample",
                      {{"model", model_spec}, {"g", g_spec},
                       {"theta", theta_spec}, {"n", std::to_string(n)},
                       {"out", out_path}},
                      seed));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust estimation under f-separable Bregman distortion measures"};
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand("estimate", "fit theta to a CSV dataset");
    std::string est_input, est_div = "sq", est_f = "linear", est_out;
    double est_tol = 1e-10;
    int est_max_iter = 500, est_starts = 5;
    std::uint64_t est_seed = 0;
    est->add_option("input", est_input, "input dataset CSV")->required();
    est->add_option("--divergence", est_div, "sq | mahalanobis:FILE | is");
    est->add_option("--f", est_f, "lse:ALPHA | pow:BETA[,A] | linear");
    est->add_option("--tol", est_tol, "convergence tolerance");
    est->add_option("--max-iter", est_max_iter, "iteration budget per start");
    est->add_option("--starts", est_starts, "number of starts");
    auto* est_seed_opt = est->add_option("--seed", est_seed, "start-selection seed");
    est->add_option("--out", est_out, "output JSON path (default stdout)");

    // check
    auto* chk = app.add_subcommand("check", "verify an unbiasedness condition");
    int chk_theorem = 2, chk_dim = 1;
    std::string chk_g = "exp:1", chk_f = "lse:1", chk_phi = "is", chk_domain;
    chk->add_option("--theorem", chk_theorem, "1 | 2 | 4")->required();
    chk->add_option("--g", chk_g, "exp:K | gauss | student:NU");
    chk->add_option("--f", chk_f, "lse:ALPHA | pow:BETA[,A] | linear");
    chk->add_option("--dim", chk_dim, "dimension (theorem 1)");
    chk->add_option("--phi", chk_phi, "is | sq (theorem 4)");
    chk->add_option("--domain", chk_domain, "LO:HI (theorem 4, optional)");

    // are
    auto* arec = app.add_subcommand("are", "asymptotic relative efficiency table");
    double are_k = 1.0;
    std::string are_grid = "0:3:0.1", are_out = "are.csv";
    bool are_baselines = false;
    std::uint64_t are_seed = 0;
    arec->add_option("--k", are_k, "gamma shape parameter");
    arec->add_option("--alpha-grid", are_grid, "START:STOP:STEP");
    arec->add_flag("--baselines", are_baselines,
                   "include beta/gamma divergence baselines (k = 1)");
    arec->add_option("--out", are_out, "output CSV path")->required();
    auto* are_seed_opt = arec->add_option("--seed", are_seed, "manifest seed");

    // experiment
    auto* expc = app.add_subcommand("experiment", "contamination experiments");
    std::string exp_kind, exp_config, exp_out = "experiment.csv";
    std::uint64_t exp_seed = 0;
    expc->add_option("--kind", exp_kind, "latent-bias | small-inlier")->required();
    expc->add_option("--config", exp_config, "JSON experiment config")->required();
    auto* exp_seed_opt = expc->add_option("--seed", exp_seed, "replication seed");
    expc->add_option("--out", exp_out, "output CSV path")->required();

    // sample
    auto* smp = app.add_subcommand("sample", "draw a dataset from a model");
    std::string smp_model, smp_g = "exp:1", smp_theta = "1", smp_out = "sample.csv";
    std::string smp_a, smp_phi = "is";
    std::size_t smp_n = 0;
    std::uint64_t smp_seed = 0;
    smp->add_option("--model", smp_model, "elliptical | is | cbregman")->required();
    smp->add_option("--g", smp_g, "exp:K | gauss | student:NU");
    smp->add_option("--theta", smp_theta, "scalar or comma-separated vector");
    smp->add_option("--n", smp_n, "number of observations")->required();
    auto* smp_seed_opt = smp->add_option("--seed", smp_seed, "sampling seed");
    smp->add_option("--out", smp_out, "output CSV path")->required();
    smp->add_option("--A", smp_a, "matrix CSV for the elliptical model");
    smp->add_option("--phi", smp_phi, "is | sq (cbregman)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) {
            return cmd_estimate(est_input, est_div, est_f, est_tol,
                                est_max_iter, est_starts,
                                resolve_seed(est_seed_opt, est_seed), est_out);
        }
        if (chk->parsed()) {
            return cmd_check(chk_theorem, chk_g, chk_f, chk_dim, chk_phi,
                             chk_domain);
        }
        if (arec->parsed()) {
            return cmd_are(are_k, are_grid, are_baselines, are_out,
                           resolve_seed(are_seed_opt, are_seed));
        }
        if (expc->parsed()) {
            return cmd_experiment(exp_kind, exp_config,
                                  resolve_seed(exp_seed_opt, exp_seed), exp_out);
        }
        if (smp->parsed()) {
            return cmd_sample(smp_model, smp_g, smp_theta, smp_n,
                              resolve_seed(smp_seed_opt, smp_seed), smp_out,
                              smp_a, smp_phi);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
