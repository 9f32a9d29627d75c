#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "nhtop/fit.hpp"
#include "nhtop/spectral.hpp"
#include "nhtop/topology.hpp"

namespace nhtop::topology {

namespace {

using netmodel::ModelKind;

constexpr double kExactDark = 1e-10;

std::optional<BlochHamiltonian> bloch_for(const netmodel::ModelConfig& cfg) {
    auto p = [&](const char* name) { return netmodel::param_or_default(cfg, name); };
    switch (cfg.model) {
    case ModelKind::ssh: return bloch_ssh(p("J1"), p("J2"), p("gamma"));
    case ModelKind::three_site:
        return bloch_three_site(p("J1"), p("J2"), p("J3"), p("J"), p("eps1"), p("eps2"), p("gamma"));
    default: return std::nullopt;
    }
}

int closed_form_w(const netmodel::ModelConfig& cfg) {
    auto p = [&](const char* name) { return netmodel::param_or_default(cfg, name); };
    try {
        switch (cfg.model) {
        case ModelKind::ssh: return winding_ssh_closed_form(p("J1"), p("J2")).W;
        case ModelKind::three_site:
            return winding_three_site_closed_form(p("J1"), p("J2"), p("J3"), p("J"), p("eps1"), p("eps2")).W;
        default: return -1;
        }
    } catch (const PhaseBoundaryError&) {
        return -1;
    } catch (const std::domain_error&) {
        return -1;
    }
}

bool exact_dark_by_construction(ModelKind model, int n) {
    if (model == ModelKind::ssh) return n % 2 == 1;
    if (model == ModelKind::three_site) return n % 3 == 2;
    return false;
}

} // namespace

BulkEdgeReport bulk_edge_report(const netmodel::ModelConfig& base, const std::vector<int>& sizes,
                                const BulkEdgeOptions& opts) {
    if (sizes.size() < 4) throw SpecificationError("bulk_edge_report: need at least 4 sizes");
    if (!std::is_sorted(sizes.begin(), sizes.end()) ||
        std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
        throw SpecificationError("bulk_edge_report: sizes must be strictly ascending");
    }
    if (opts.max_rank < 1) throw SpecificationError("bulk_edge_report: max_rank must be >= 1");

    BulkEdgeReport report;
    report.model = base.model;
    report.W_closed_form = closed_form_w(base);
    const auto bloch = bloch_for(base);
    report.min_bulk_decay = bloch ? min_bulk_decay_rate(*bloch) : std::nan("");

    for (int n : sizes) {
        netmodel::ModelConfig cfg = base;
        cfg.N = n;
        const auto h = netmodel::build_model(cfg);
        if (report.eps_dark == 0.0) report.eps_dark = opts.eps_dark > 0.0 ? opts.eps_dark : spectral::default_eps_dark(h);
        const auto sd = spectral::decompose(h);

        BulkEdgeRow row;
        row.N = n;
        const auto modes = spectral::find_quasi_dark_modes(sd, report.eps_dark, opts.site1_threshold);
        row.n_quasi_dark = static_cast<int>(modes.size());
        row.n_localized_site1 = static_cast<int>(
            std::count_if(modes.begin(), modes.end(), [](const auto& m) { return m.localized_at_qubit; }));
        row.slowest_decay_rate = sd.decay_rate(0);
        if (bloch) {
            row.n_in_gap = 0;
            for (Eigen::Index j = 0; j < sd.size(); ++j) {
                if (sd.decay_rate(j) < (1.0 - 1e-6) * report.min_bulk_decay) ++row.n_in_gap;
            }
        }
        for (Eigen::Index j = 0; j < sd.size(); ++j) {
            if (sd.decay_rate(j) < kExactDark) ++row.n_exact_dark;
            if (j < opts.max_rank) row.rates.push_back(sd.decay_rate(j));
        }
        report.rows.push_back(std::move(row));
    }

    std::vector<const BulkEdgeRow*> fit_rows;
    for (const auto& row : report.rows) {
        if (!exact_dark_by_construction(base.model, row.N)) {
            fit_rows.push_back(&row);
            report.fit_sizes.push_back(row.N);
        }
    }
    if (fit_rows.size() < 2) return report;

    for (int rank = 0; rank < opts.max_rank; ++rank) {
        std::vector<double> xs, ys;
        bool usable = true;
        for (const auto* row : fit_rows) {
            if (rank >= static_cast<int>(row->rates.size()) || !(row->rates[rank] > 0.0)) {
                usable = false;
                break;
            }
            xs.push_back(row->N);
            ys.push_back(std::log(row->rates[rank]));
        }
        if (!usable) continue;
        const LinearFit fit = linear_fit(xs, ys);
        RankFit rf;
        rf.rank = rank;
        rf.slope = fit.slope;
        rf.intercept = fit.intercept;
        rf.r_squared = fit.r_squared;
        rf.rate_at_max_n = fit_rows.back()->rates[rank];
        rf.protected_mode = fit.r_squared > opts.r_squared_min && fit.slope < 0.0 &&
                            rf.rate_at_max_n < report.eps_dark;
        if (rf.protected_mode) ++report.n_protected;
        report.fits.push_back(rf);
    }
    return report;
}

void write_bulk_edge_csv(std::ostream& out, const BulkEdgeReport& report) {
    out << "N,n_quasi_dark,n_localized_site1,n_in_gap,W_closed_form,slowest_decay_rate\n";
    char buf[256];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.17g\n", row.N, row.n_quasi_dark, row.n_localized_site1,
                      row.n_in_gap, report.W_closed_form, row.slowest_decay_rate);
        out << buf;
    }
    for (const auto& f : report.fits) {
        std::snprintf(buf, sizeof buf, "# fit rank=%d slope=%.10g intercept=%.10g r2=%.10g rate_at_max_N=%.10g protected=%d\n",
                      f.rank, f.slope, f.intercept, f.r_squared, f.rate_at_max_n, f.protected_mode ? 1 : 0);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "# protected_modes=%d eps_dark=%.10g\n", report.n_protected, report.eps_dark);
    out << buf;
}

} // namespace nhtop::topology
