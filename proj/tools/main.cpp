#include <chrono>
#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cohtherm/awgn.hpp"
#include "cohtherm/chernoff.hpp"
#include "cohtherm/csv.hpp"
#include "cohtherm/experiment.hpp"
#include "cohtherm/fock.hpp"
#include "cohtherm/receivers.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cohtherm;

namespace {

// Usage problems exit with code 2, numerical failures with 3.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw UsageError("bad number: " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw UsageError("bad number: " + s);
    } catch (const std::out_of_range&) {
        throw UsageError("number out of range: " + s);
    }
}

// Grid spec: "start:stop:step" (inclusive), a comma list, or one value.
std::vector<double> parse_grid(const std::string& spec) {
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw UsageError("range must be start:stop:step");
        const double start = parse_double(parts[0]);
        const double stop = parse_double(parts[1]);
        const double step = parse_double(parts[2]);
        if (step <= 0.0 || stop < start) throw UsageError("range requires step > 0 and stop >= start");
        std::vector<double> grid;
        const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (int i = 0; i < n; ++i) grid.push_back(start + i * step);
        return grid;
    }
    std::vector<double> grid;
    for (const std::string& item : split(spec, ',')) grid.push_back(parse_double(item));
    if (grid.empty()) throw UsageError("empty grid spec");
    return grid;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> values;
    for (const std::string& item : split(spec, ',')) values.push_back(static_cast<int>(parse_double(item)));
    if (values.empty()) throw UsageError("empty list");
    return values;
}

ReceiverKind parse_receiver(const std::string& name) {
    if (name == "kennedy") return ReceiverKind::Kennedy;
    if (name == "gk") return ReceiverKind::GeneralizedKennedy;
    if (name == "dd") return ReceiverKind::DirectDetection;
    throw UsageError("unknown receiver: " + name);
}

struct Global {
    std::uint64_t seed = 12345;
    std::string out = ".";
    std::string config_path;
    int threads = 1;
};

struct ManifestWriter {
    ManifestWriter(const Global& g, std::string cmd) : global(g), command(std::move(cmd)) {}

    const Global& global;
    std::string command;
    json config = json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    fs::path out_path(const std::string& name) {
        fs::create_directories(global.out);
        fs::path p = fs::path(global.out) / name;
        outputs.push_back(p.string());
        return p;
    }

    void finish() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json manifest;
        manifest["command"] = command;
        manifest["version"] = kVersion;
        manifest["seed"] = global.seed;
        manifest["threads"] = global.threads;
        manifest["config"] = config;
        manifest["outputs"] = outputs;
        manifest["duration_seconds"] = secs;
        fs::create_directories(global.out);
        std::ofstream f(fs::path(global.out) / (command + "_manifest.json"));
        f << manifest.dump(2) << '\n';
    }
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file: " + path);
    json j = json::parse(f, nullptr, true, true);
    // A manifest can be replayed directly: its resolved config is nested.
    if (j.contains("config") && j["config"].is_object()) j = j["config"];
    return j;
}

template <typename T>
void apply_config(const json& cfg, const CLI::Option* opt, const char* key, T& var) {
    if ((opt == nullptr || opt->count() == 0) && cfg.contains(key)) var = cfg.at(key).get<T>();
}

// ----- exponents ------------------------------------------------------------

int cmd_exponents(const Global& global, const std::string& nbar_spec,
                  const std::string& receivers_csv, double efficiency) {
    if (receivers_csv.empty()) throw UsageError("at least one receiver is required");
    if (efficiency <= 0.0 || efficiency > 1.0) throw UsageError("--efficiency must be in (0,1]");
    const std::vector<double> grid = parse_grid(nbar_spec);
    for (double nbar : grid) {
        if (nbar < 0.0) throw UsageError("--nbar must be non-negative");
    }
    const std::vector<std::string> names = split(receivers_csv, ',');
    if (names.empty()) throw UsageError("at least one receiver is required");
    for (const std::string& name : names) {
        if (name != "kennedy" && name != "gk" && name != "dd" && name != "helstrom" &&
            name != "helstrom2")
            throw UsageError("unknown receiver: " + name);
    }

    ManifestWriter manifest{global, "exponents"};
    manifest.config = {{"seed", global.seed},       {"threads", global.threads},
                       {"out", global.out},         {"nbar", nbar_spec},
                       {"receivers", receivers_csv}, {"efficiency", efficiency}};

    const DetectorModel ideal = DetectorModel::ideal();
    std::ofstream csv(manifest.out_path("exponents.csv"));
    csv << "nbar_s,nbar_r,receiver,xi,xi_asymptotic\n";
    for (const double nbar_s : grid) {
        const double nbar_r = efficiency * nbar_s;
        const Table1Asymptotics asym = table1_asymptotics(nbar_r);
        for (const std::string& name : names) {
            double xi = 0.0;
            double xi_asym = 0.0;
            if (name == "kennedy") {
                xi = qcb_coh_thermal(nbar_r);
                xi_asym = asym.qcb_kennedy;
            } else if (name == "gk") {
                if (nbar_r > 0.0) {
                    const SingleCopyStats s = gk_hard_stats(nbar_r, optimize_gk_beta(nbar_r));
                    xi = binary_chernoff_exponent(s.p, s.q).xi;
                }
                xi_asym = asym.gk_upper;
            } else if (name == "dd") {
                if (nbar_r > 0.0) {
                    const auto [coh, th] =
                        likelihoods(ReceiverSpec::direct_detection(), nbar_r, ideal);
                    xi = chernoff_exponent_pmf(coh, th).xi;
                }
                xi_asym = asym.dd;
            } else if (name == "helstrom") {
                xi = nbar_r > 0.0 ? helstrom_exponent_exact(nbar_r, adequate_cutoff(nbar_r)).xi : 0.0;
                xi_asym = asym.helstrom;
            } else {  // helstrom2
                xi = nbar_r > 0.0 ? helstrom_exponent_exact(nbar_r, 2).xi : 0.0;
                xi_asym = asym.helstrom;
            }
            csv << format_g12(nbar_s) << ',' << format_g12(nbar_r) << ',' << name << ','
                << format_g12(xi) << ',' << format_g12(xi_asym) << '\n';
        }
    }
    csv.close();
    manifest.finish();
    return 0;
}

// ----- simulate -------------------------------------------------------------

int cmd_simulate(const Global& global, const std::string& receiver_name,
                 const std::string& nbar_spec, const std::string& m_grid_spec, int trials,
                 int copies, int replications, double efficiency, double dark, int saturation,
                 bool without_replacement) {
    if (receiver_name.empty()) throw UsageError("--receiver is required");
    const ReceiverKind kind = parse_receiver(receiver_name);
    if (trials < 1) throw UsageError("--trials must be positive");
    if (copies < 1) throw UsageError("--copies must be positive");
    if (replications < 1) throw UsageError("--replications must be positive");
    if (efficiency <= 0.0 || efficiency > 1.0) throw UsageError("--efficiency must be in (0,1]");
    if (dark < 0.0) throw UsageError("--dark must be non-negative");
    if (saturation < 1) throw UsageError("--saturation must be positive");
    const std::vector<double> grid = parse_grid(nbar_spec);
    for (double nbar : grid) {
        if (nbar < 0.0) throw UsageError("--nbar must be non-negative");
    }
    std::vector<int> m_grid;  // empty selects the exponent-adapted default
    if (!m_grid_spec.empty()) {
        m_grid = parse_int_list(m_grid_spec);
        for (int m : m_grid) {
            if (m < 1 || m > copies) throw UsageError("--m-grid entries must lie in [1, copies]");
        }
    }

    ManifestWriter manifest{global, "simulate"};
    manifest.config = {{"seed", global.seed},
                       {"threads", global.threads},
                       {"out", global.out},
                       {"receiver", receiver_name},
                       {"nbar", nbar_spec},
                       {"m-grid", m_grid_spec},
                       {"trials", trials},
                       {"copies", copies},
                       {"replications", replications},
                       {"efficiency", efficiency},
                       {"dark", dark},
                       {"saturation", saturation},
                       {"without-replacement", without_replacement}};

    ExperimentConfig config;
    config.detector = DetectorModel{efficiency, dark, saturation};
    config.copies_per_dataset = copies;
    config.m_grid = m_grid;
    config.trials_per_m = trials;
    config.replications = replications;
    config.seed = global.seed;
    config.resample_with_replacement = !without_replacement;
    config.threads = global.threads;

    const auto rows = sweep_exponents(grid, {kind}, config);
    {
        std::ofstream curve(manifest.out_path("simulate_curve.csv"));
        write_curve_csv(curve, rows);
    }
    {
        std::ofstream fit(manifest.out_path("simulate_fit.csv"));
        write_summary_csv(fit, rows);
    }
    manifest.finish();
    return 0;
}

// ----- classical ------------------------------------------------------------

int cmd_classical(const Global& global, const std::string& snr_spec,
                  const std::string& m_grid_spec, int trials) {
    if (snr_spec.empty()) throw UsageError("--snr is required");
    const std::vector<double> snrs = parse_grid(snr_spec);
    const std::vector<int> m_grid = parse_int_list(m_grid_spec);
    if (trials < 1) throw UsageError("--trials must be positive");
    for (double snr : snrs) {
        if (snr <= 0.0) throw UsageError("--snr must be positive");
    }

    ManifestWriter manifest{global, "classical"};
    manifest.config = {{"seed", global.seed},
                       {"threads", global.threads},
                       {"out", global.out},
                       {"snr", snr_spec},
                       {"m-grid", m_grid_spec},
                       {"trials", trials}};

    std::ofstream csv(manifest.out_path("classical.csv"));
    csv << "snr,M,soft_perr,hard_perr,soft_xi,hard_xi,ratio\n";
    for (std::size_t si = 0; si < snrs.size(); ++si) {
        const AwgnProblem prob{snrs[si], 1.0};
        const double soft_xi = soft_exponent(prob);
        const double hard_xi = hard_exponent(prob);
        for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
            const auto [soft, hard] = simulate_awgn(
                prob, m_grid[mi], trials, rng::derive_seed(global.seed, {si, mi}));
            csv << format_g12(prob.snr()) << ',' << m_grid[mi] << ',' << format_g12(soft) << ','
                << format_g12(hard) << ',' << format_g12(soft_xi) << ',' << format_g12(hard_xi)
                << ',' << format_g12(soft_xi / hard_xi) << '\n';
        }
    }
    csv.close();
    manifest.finish();
    return 0;
}

// ----- helstrom -------------------------------------------------------------

int cmd_helstrom(const Global& global, const std::string& nbar_spec, int dim) {
    if (dim < 0 || dim == 1) throw UsageError("--dim must be >= 2, or 0 for an adaptive cutoff");
    const std::vector<double> grid = parse_grid(nbar_spec);

    ManifestWriter manifest{global, "helstrom"};
    manifest.config = {{"seed", global.seed},
                       {"threads", global.threads},
                       {"out", global.out},
                       {"nbar", nbar_spec},
                       {"dim", dim}};

    std::ofstream csv(manifest.out_path("helstrom.csv"));
    csv << "nbar_r,dim,p,q,bias,perr,s_min,xi\n";
    for (const double nbar : grid) {
        if (nbar < 0.0) throw UsageError("--nbar must be non-negative");
        const int use_dim = dim == 0 ? adequate_cutoff(nbar) : dim;
        const HelstromPoint point = helstrom_point(nbar, use_dim);
        csv << format_g12(nbar) << ',' << use_dim << ',' << format_g12(point.stats.p) << ','
            << format_g12(point.stats.q) << ',' << format_g12(point.stats.bias) << ','
            << format_g12(point.stats.perr) << ',' << format_g12(point.chernoff.s_min) << ','
            << format_g12(point.chernoff.xi) << '\n';
    }
    csv.close();
    manifest.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");
    CLI::App app{"Multi-copy coherent-vs-thermal state discrimination toolkit"};
    app.fallthrough(true);
    app.require_subcommand(0, 1);

    Global global;
    auto* opt_seed = app.add_option("--seed", global.seed, "Base seed for all randomness");
    auto* opt_out = app.add_option("--out", global.out, "Output directory for CSVs and manifests");
    app.add_option("--config", global.config_path,
                   "JSON config file (flags override; a manifest file is accepted)");
    auto* opt_threads = app.add_option("--threads", global.threads, "Worker threads for sweeps");

    // exponents
    auto* exponents = app.add_subcommand(
        "exponents",
        "Theoretical error exponents vs mean photon number.\n"
        "Writes exponents.csv: nbar_s,nbar_r,receiver,xi,xi_asymptotic");
    std::string exp_nbar = "0.05:1.0:0.05";
    std::string exp_receivers = "kennedy,gk,dd,helstrom,helstrom2";
    double exp_efficiency = 1.0;
    auto* o_exp_nbar = exponents->add_option("--nbar", exp_nbar, "Grid: start:stop:step, list, or value");
    auto* o_exp_recv =
        exponents->add_option("--receivers", exp_receivers,
                              "Comma list from kennedy,gk,dd,helstrom,helstrom2");
    auto* o_exp_eff = exponents->add_option(
        "--efficiency", exp_efficiency,
        "Receiver efficiency; the grid is then the source photon number and nbar_r = efficiency*nbar_s");

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate",
        "Monte Carlo receiver pipeline with exponential fits.\n"
        "Writes simulate_curve.csv: nbar_r,receiver,M,trials,perr_hat,err_coh_given_th,"
        "err_th_given_coh\n"
        "and simulate_fit.csv: nbar_r,receiver,xi_fit,xi_stderr,a_fit,xi_theory");
    std::string sim_receiver;
    std::string sim_nbar = "0.2";
    std::string sim_m_grid;
    int sim_trials = 100;
    int sim_copies = 1000;
    int sim_replications = 5;
    double sim_efficiency = 1.0;
    double sim_dark = 0.0;
    int sim_saturation = 20;
    bool sim_without_replacement = false;
    auto* o_sim_recv =
        simulate->add_option("--receiver", sim_receiver, "One of kennedy, gk, dd (required)");
    auto* o_sim_nbar = simulate->add_option("--nbar", sim_nbar, "Source photon number grid");
    auto* o_sim_mgrid = simulate->add_option(
        "--m-grid", sim_m_grid,
        "Comma list of copy counts M (default scales with the receiver's theoretical exponent)");
    auto* o_sim_trials = simulate->add_option("--trials", sim_trials, "Trials per M value");
    auto* o_sim_copies = simulate->add_option("--copies", sim_copies, "Dataset size per hypothesis");
    auto* o_sim_reps =
        simulate->add_option("--replications", sim_replications, "Pipeline repetitions for error bars");
    auto* o_sim_eff = simulate->add_option("--efficiency", sim_efficiency, "Detector efficiency");
    auto* o_sim_dark = simulate->add_option("--dark", sim_dark, "Mean extraneous counts per window");
    auto* o_sim_sat = simulate->add_option("--saturation", sim_saturation, "Detector count cap");
    auto* o_sim_worepl = simulate->add_flag("--without-replacement", sim_without_replacement,
                                            "Resample datasets without replacement");

    // classical
    auto* classical = app.add_subcommand(
        "classical",
        "Soft vs hard decisions for a signal in Gaussian noise.\n"
        "Writes classical.csv: snr,M,soft_perr,hard_perr,soft_xi,hard_xi,ratio");
    std::string cls_snr;
    std::string cls_m_grid = "1,4,16,40";
    int cls_trials = 100000;
    auto* o_cls_snr = classical->add_option("--snr", cls_snr, "E/sigma^2 grid (required)");
    auto* o_cls_mgrid = classical->add_option("--m-grid", cls_m_grid, "Comma list of copy counts M");
    auto* o_cls_trials = classical->add_option("--trials", cls_trials, "Monte Carlo trials per M");

    // helstrom
    auto* helstrom = app.add_subcommand(
        "helstrom",
        "Truncated minimum-error measurement stats vs nbar.\n"
        "Writes helstrom.csv: nbar_r,dim,p,q,bias,perr,s_min,xi");
    std::string hel_nbar = "0.05:1.0:0.05";
    int hel_dim = 2;
    auto* o_hel_nbar = helstrom->add_option("--nbar", hel_nbar, "Photon number grid");
    auto* o_hel_dim = helstrom->add_option("--dim", hel_dim, "Fock cutoff (0 = adaptive)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const json cfg = load_config(global.config_path);
        apply_config(cfg, opt_seed, "seed", global.seed);
        apply_config(cfg, opt_out, "out", global.out);
        apply_config(cfg, opt_threads, "threads", global.threads);
        if (global.threads < 1) throw UsageError("--threads must be positive");

        if (exponents->parsed()) {
            apply_config(cfg, o_exp_nbar, "nbar", exp_nbar);
            apply_config(cfg, o_exp_recv, "receivers", exp_receivers);
            apply_config(cfg, o_exp_eff, "efficiency", exp_efficiency);
            return cmd_exponents(global, exp_nbar, exp_receivers, exp_efficiency);
        }
        if (simulate->parsed()) {
            apply_config(cfg, o_sim_recv, "receiver", sim_receiver);
            apply_config(cfg, o_sim_nbar, "nbar", sim_nbar);
            apply_config(cfg, o_sim_mgrid, "m-grid", sim_m_grid);
            apply_config(cfg, o_sim_trials, "trials", sim_trials);
            apply_config(cfg, o_sim_copies, "copies", sim_copies);
            apply_config(cfg, o_sim_reps, "replications", sim_replications);
            apply_config(cfg, o_sim_eff, "efficiency", sim_efficiency);
            apply_config(cfg, o_sim_dark, "dark", sim_dark);
            apply_config(cfg, o_sim_sat, "saturation", sim_saturation);
            apply_config(cfg, o_sim_worepl, "without-replacement", sim_without_replacement);
            return cmd_simulate(global, sim_receiver, sim_nbar, sim_m_grid, sim_trials, sim_copies,
                                sim_replications, sim_efficiency, sim_dark, sim_saturation,
                                sim_without_replacement);
        }
        if (classical->parsed()) {
            apply_config(cfg, o_cls_snr, "snr", cls_snr);
            apply_config(cfg, o_cls_mgrid, "m-grid", cls_m_grid);
            apply_config(cfg, o_cls_trials, "trials", cls_trials);
            return cmd_classical(global, cls_snr, cls_m_grid, cls_trials);
        }
        if (helstrom->parsed()) {
            apply_config(cfg, o_hel_nbar, "nbar", hel_nbar);
            apply_config(cfg, o_hel_dim, "dim", hel_dim);
            return cmd_helstrom(global, hel_nbar, hel_dim);
        }
        std::cerr << app.help() << std::endl;
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 3;
    }
}
