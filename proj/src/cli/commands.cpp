#include "nhtop/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nhtop/analytics.hpp"
#include "nhtop/disorder.hpp"
#include "nhtop/dynamics.hpp"
#include "nhtop/model_config.hpp"
#include "nhtop/spectral.hpp"
#include "nhtop/topology.hpp"

namespace nhtop::cli {

namespace {

using netmodel::ModelKind;

struct ModelOptions {
    std::string config;
    std::string model;
    std::optional<int> N;
    std::map<std::string, std::optional<double>> params{
        {"J1", {}}, {"J2", {}}, {"J3", {}}, {"J", {}}, {"kappa", {}}, {"gamma", {}}, {"eps1", {}}, {"eps2", {}}};

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON model description")->check(CLI::ExistingFile);
        app->add_option("--model", model, "Model: custom, impurity, ssh, three-site (default ssh)");
        app->add_option("--N", N, "Number of sites");
        app->add_option("--J1", params["J1"], "Hopping J1 (ssh, three-site)");
        app->add_option("--J2", params["J2"], "Hopping J2 (ssh, three-site)");
        app->add_option("--J3", params["J3"], "Inter-cell hopping J3 (three-site)");
        app->add_option("--J", params["J"], "Chain hopping (impurity) or cell 1-3 hopping (three-site)");
        app->add_option("--kappa", params["kappa"], "Qubit-cavity coupling (impurity)");
        app->add_option("--gamma", params["gamma"], "Loss rate Gamma");
        app->add_option("--eps1", params["eps1"], "On-site energy of cell site 1 (three-site)");
        app->add_option("--eps2", params["eps2"], "On-site energy of cell site 2 (three-site)");
    }

    netmodel::ModelConfig resolve() const {
        netmodel::ModelConfig cfg;
        if (!config.empty()) {
            cfg = netmodel::load_model_config(config);
            if (!model.empty() && netmodel::model_kind_from_string(model) != cfg.model) {
                throw SpecificationError("--model conflicts with the model in --config");
            }
        } else {
            cfg.model = model.empty() ? ModelKind::ssh : netmodel::model_kind_from_string(model);
            if (cfg.model == ModelKind::custom) throw SpecificationError("model 'custom' needs --config");
        }
        if (N) cfg.N = *N;
        const auto& allowed = netmodel::default_params(cfg.model);
        for (const auto& [name, value] : params) {
            if (!value) continue;
            if (!allowed.contains(name)) {
                throw SpecificationError("--" + name + " does not apply to model " + netmodel::to_string(cfg.model));
            }
            cfg.params[name] = *value;
        }
        return cfg;
    }
};

struct OutputOptions {
    std::string path;
    bool gnuplot = false;

    void attach(CLI::App* app) {
        app->add_option("--output,-o", path, "Output file (default stdout)");
        app->add_flag("--gnuplot-header", gnuplot, "Prepend gnuplot-ready comment lines");
    }

    // Writes the CSV produced by `body`, optionally after gnuplot hints.
    void emit(std::ostream& out, const std::string& plot_using, const std::function<void(std::ostream&)>& body) const {
        std::ostringstream buf;
        if (gnuplot) {
            buf << "# gnuplot: set datafile separator ','\n";
            buf << "# gnuplot: plot '" << (path.empty() ? "data.csv" : path) << "' using " << plot_using
                << " with lines\n";
        }
        body(buf);
        if (path.empty()) {
            out << buf.str();
            return;
        }
        std::ofstream file(path, std::ios::binary);
        if (!file) throw SpecificationError("cannot open output file '" + path + "'");
        file << buf.str();
        if (!file) throw SpecificationError("failed writing '" + path + "'");
    }
};

struct TimeOptions {
    double t_max = 100.0;
    int t_points = 400;
    bool log_time = true;

    void attach(CLI::App* app) {
        app->add_option("--t-max", t_max, "Final time")->capture_default_str();
        app->add_option("--t-points", t_points, "Number of grid points")->capture_default_str();
        app->add_flag("--log-time,!--no-log-time", log_time, "Log-spaced grid from 1e-2 (default) or linear from 0");
    }

    std::vector<double> grid() const {
        return log_time ? dynamics::log_time_grid(t_max, t_points) : dynamics::linear_time_grid(t_max, t_points);
    }
};

std::vector<int> default_sizes(ModelKind kind) {
    switch (kind) {
    case ModelKind::three_site: return {6, 9, 12, 15, 18};
    case ModelKind::impurity: return {4, 8, 12, 16};
    default: return {8, 12, 16, 20};
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral, dynamical and winding-number analysis of a qubit in a lossy cavity network", "nhtop"};
    app.require_subcommand(1);

    std::function<void()> action;

    ModelOptions spec_model;
    OutputOptions spec_out;
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of L~ with weights and localization (CSV)");
    spec_model.attach(spectrum);
    spec_out.attach(spectrum);
    spectrum->callback([&] {
        action = [&] {
            const auto sd = spectral::decompose(netmodel::build_model(spec_model.resolve()));
            spec_out.emit(out, "4:5", [&](std::ostream& os) { spectral::write_spectrum_csv(os, sd); });
        };
    });

    ModelOptions coh_model;
    OutputOptions coh_out;
    TimeOptions coh_time;
    std::string coh_method = "auto";
    auto* coherence = app.add_subcommand("coherence", "Qubit coherence C(t) (CSV t,coherence)");
    coh_model.attach(coherence);
    coh_out.attach(coherence);
    coh_time.attach(coherence);
    coherence->add_option("--method", coh_method, "auto, spectral, expm or full")
        ->check(CLI::IsMember({"auto", "spectral", "expm", "full"}))
        ->capture_default_str();
    coherence->callback([&] {
        action = [&] {
            const auto h = netmodel::build_model(coh_model.resolve());
            const auto times = coh_time.grid();
            dynamics::CoherenceTrace trace;
            if (coh_method == "expm") trace = dynamics::coherence_trace_expm(h, times);
            else if (coh_method == "full") trace = dynamics::coherence_trace_full(h, times);
            else trace = dynamics::coherence_trace(h, times);
            if (coh_method == "spectral" && trace.method != dynamics::Method::spectral) {
                throw NumericError("eigenvector matrix too ill-conditioned for the spectral method");
            }
            coh_out.emit(out, "1:2", [&](std::ostream& os) { dynamics::write_trace_csv(os, trace); });
        };
    });

    ModelOptions wind_model;
    int n_k = 64;
    auto* winding = app.add_subcommand("winding", "Winding number of the Bloch Hamiltonian");
    wind_model.attach(winding);
    winding->add_option("--n-k", n_k, "Initial number of k points (>= 64)")->capture_default_str();
    winding->callback([&] {
        action = [&] {
            const auto cfg = wind_model.resolve();
            auto p = [&](const char* name) { return netmodel::param_or_default(cfg, name); };
            topology::BlochHamiltonian bloch;
            std::function<topology::WindingResult()> closed;
            if (cfg.model == ModelKind::ssh) {
                bloch = topology::bloch_ssh(p("J1"), p("J2"), p("gamma"));
                closed = [&] { return topology::winding_ssh_closed_form(p("J1"), p("J2")); };
            } else if (cfg.model == ModelKind::three_site) {
                bloch = topology::bloch_three_site(p("J1"), p("J2"), p("J3"), p("J"), p("eps1"), p("eps2"), p("gamma"));
                closed = [&] {
                    return topology::winding_three_site_closed_form(p("J1"), p("J2"), p("J3"), p("J"), p("eps1"),
                                                                    p("eps2"));
                };
            } else {
                throw SpecificationError("winding needs a periodic model (ssh or three-site)");
            }
            topology::WindingOptions opts;
            opts.n_k = n_k;
            const auto numeric = topology::winding_number_numeric(bloch, opts);
            out << "W=" << numeric.W << " method=numeric k_points=" << numeric.k_points
                << " max_phase_step=" << format_double(numeric.max_phase_step) << "\n";
            try {
                out << "W=" << closed().W << " method=closed_form\n";
            } catch (const PhaseBoundaryError&) {
                out << "W=undefined method=closed_form reason=phase_boundary\n";
            } catch (const std::domain_error&) {
                out << "W=undefined method=closed_form reason=mixing_angle\n";
            }
        };
    });

    double t1_J1 = 1.0, t1_J2 = 1.8, t1_gamma = 0.5;
    std::vector<int> t1_sizes{6, 8, 10, 20};
    OutputOptions t1_out;
    auto* table = app.add_subcommand("table1", "Exact vs closed-form coherence time and overlap for even SSH chains");
    table->add_option("--J1", t1_J1, "Hopping J1")->capture_default_str();
    table->add_option("--J2", t1_J2, "Hopping J2")->capture_default_str();
    table->add_option("--gamma", t1_gamma, "Loss rate Gamma")->capture_default_str();
    table->add_option("--Ns", t1_sizes, "Even chain lengths, comma separated")->delimiter(',')->capture_default_str();
    t1_out.attach(table);
    table->callback([&] {
        action = [&] {
            const auto rows = analytics::table1(t1_J1, t1_J2, t1_gamma, t1_sizes);
            t1_out.emit(out, "1:2", [&](std::ostream& os) { analytics::write_table1_csv(os, rows); });
        };
    });

    ModelOptions sc_model;
    OutputOptions sc_out;
    std::vector<int> sc_sizes;
    double sc_eps = 0.0;
    auto* scaling = app.add_subcommand("scaling", "Decay-rate scaling with N and bulk-edge comparison");
    sc_model.attach(scaling);
    sc_out.attach(scaling);
    scaling->add_option("--Ns", sc_sizes, "Chain lengths, comma separated (default per model)")->delimiter(',');
    scaling->add_option("--eps-dark", sc_eps, "Quasi-dark threshold (default 1e-3 Gamma)");
    scaling->callback([&] {
        action = [&] {
            const auto cfg = sc_model.resolve();
            topology::BulkEdgeOptions opts;
            opts.eps_dark = sc_eps;
            const auto report =
                topology::bulk_edge_report(cfg, sc_sizes.empty() ? default_sizes(cfg.model) : sc_sizes, opts);
            sc_out.emit(out, "1:6", [&](std::ostream& os) { topology::write_bulk_edge_csv(os, report); });
        };
    });

    ModelOptions dis_model;
    OutputOptions dis_out;
    TimeOptions dis_time;
    double mu = 0.4;
    int realizations = 1000;
    std::uint64_t seed = 1;
    std::string site_mask = "all";
    auto* dis = app.add_subcommand("disorder", "Coherence averaged over random on-site detunings");
    dis_model.attach(dis);
    dis_out.attach(dis);
    dis_time.attach(dis);
    dis->add_option("--mu", mu, "Half-width of the uniform detuning distribution")->capture_default_str();
    dis->add_option("--realizations", realizations, "Number of realizations")->capture_default_str();
    dis->add_option("--seed", seed, "Base seed")->capture_default_str();
    dis->add_option("--site-mask", site_mask, "'all', 'qubit', or one 0/1 character per site")->capture_default_str();
    dis->callback([&] {
        action = [&] {
            disorder::DisorderConfig cfg;
            cfg.base = netmodel::build_model(dis_model.resolve());
            cfg.mu = mu;
            cfg.n_realizations = realizations;
            cfg.base_seed = seed;
            cfg.times = dis_time.grid();
            const auto n = static_cast<std::size_t>(cfg.base.dim());
            if (site_mask == "qubit") {
                cfg.site_mask.assign(n, false);
                cfg.site_mask[0] = true;
            } else if (site_mask != "all") {
                if (site_mask.size() != n || site_mask.find_first_not_of("01") != std::string::npos) {
                    throw SpecificationError("--site-mask needs one 0/1 character per site");
                }
                for (char c : site_mask) cfg.site_mask.push_back(c == '1');
            }
            const auto result = disorder::run_ensemble(cfg);
            dis_out.emit(out, "1:2:3 with yerrorbars",
                         [&](std::ostream& os) { disorder::write_ensemble_csv(os, cfg, result); });
        };
    });

    ModelOptions mod_model;
    OutputOptions mod_out;
    auto* model = app.add_subcommand("model", "Dump H as CSV (row,col,re,im)");
    mod_model.attach(model);
    mod_out.attach(model);
    model->callback([&] {
        action = [&] {
            const auto h = netmodel::build_model(mod_model.resolve());
            mod_out.emit(out, "1:2:3 with image", [&](std::ostream& os) {
                os << "row,col,re,im\n";
                char buf[128];
                for (Eigen::Index i = 0; i < h.dim(); ++i) {
                    for (Eigen::Index j = 0; j < h.dim(); ++j) {
                        std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g\n", static_cast<long>(i + 1),
                                      static_cast<long>(j + 1), h.matrix(i, j).real(), h.matrix(i, j).imag());
                        os << buf;
                    }
                }
            });
        };
    });

    std::vector<std::string> argv_storage{"nhtop"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (action) action();
    } catch (const SpecificationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace nhtop::cli
