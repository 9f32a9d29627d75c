// topology.hpp — Bloch Hamiltonians, winding numbers and bulk-edge checks

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nhtop/model_config.hpp"

namespace nhtop::topology {

struct BlochHamiltonian {
    int cell_size = 2;
    std::function<CMatrix(double)> evaluator;  // k in [0, 2pi) -> H(k)
    std::map<std::string, double> params;

    CMatrix operator()(double k) const { return evaluator(k); }
};

// [[0, v_k], [conj(v_k), -i Gamma]], v_k = J1 + J2 e^{ik}.
BlochHamiltonian bloch_ssh(double J1, double J2, double gamma);

// [[eps1, J1, J3 e^{ik} + J], [J1, eps2, J2], [J3 e^{-ik} + J, J2, -i Gamma]].
BlochHamiltonian bloch_three_site(double J1, double J2, double J3, double J, double eps1, double eps2,
                                  double gamma);

enum class WindingMethod { numeric, closed_form };

struct WindingResult {
    int W = 0;
    WindingMethod method = WindingMethod::numeric;
    int k_points = 0;
    double max_phase_step = 0.0;
    double raw = 0.0;        // accumulated phase / 2pi
    int n_perturbed = 0;     // k points shifted by 1e-9 to fix a vanishing overlap
};

struct WindingOptions {
    int n_k = 64;
    int max_k_points = 1 << 16;
    double gap_tolerance = 1e-10;
    std::optional<std::uint64_t> gauge_scramble_seed;  // randomize eigenvector phases first
};

// arg det U(k) accumulated over the Brillouin zone, where U diagonalizes the
// non-lossy block and makes U^dagger v~ real and positive.
WindingResult winding_number_numeric(const BlochHamiltonian& bloch, const WindingOptions& opts = {});

WindingResult winding_ssh_closed_form(double J1, double J2);

// The default mixing angle takes the root without a square
// on (eps1 - eps2); `squared_detuning` uses the corrected angle instead.
WindingResult winding_three_site_closed_form(double J1, double J2, double J3, double J, double eps1,
                                             double eps2, bool squared_detuning = false);

// min over k of the slowest decay rate -Im lambda of H(k).
double min_bulk_decay_rate(const BlochHamiltonian& bloch, int n_k = 1024);

struct BulkEdgeRow {
    int N = 0;
    int n_quasi_dark = 0;
    int n_localized_site1 = 0;
    int n_in_gap = -1;      // -1 when no Bloch Hamiltonian is defined
    int n_exact_dark = 0;   // decay rate < 1e-10
    double slowest_decay_rate = 0.0;
    std::vector<double> rates;  // slowest decay rates, ascending
};

struct RankFit {
    int rank = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double rate_at_max_n = 0.0;
    bool protected_mode = false;
};

struct BulkEdgeOptions {
    double eps_dark = 0.0;  // 0 selects 1e-3 * Gamma
    double site1_threshold = 0.1;
    double r_squared_min = 0.98;
    int max_rank = 4;
};

struct BulkEdgeReport {
    netmodel::ModelKind model = netmodel::ModelKind::ssh;
    int W_closed_form = -1;  // -1 on a phase boundary or for models without one
    double eps_dark = 0.0;
    double min_bulk_decay = 0.0;
    std::vector<BulkEdgeRow> rows;
    std::vector<int> fit_sizes;  // N values entering the rank fits
    std::vector<RankFit> fits;
    int n_protected = 0;
};

// Decomposes the model at each N. Ranks whose ln(decay rate) is linear in N
// (R^2 above the threshold, negative slope, final rate below eps_dark) count
// as protected. Sizes with exact dark states by construction (odd SSH chains,
// three-site chains with N mod 3 = 2) are kept out of the fits.
BulkEdgeReport bulk_edge_report(const netmodel::ModelConfig& base, const std::vector<int>& sizes,
                                const BulkEdgeOptions& opts = {});

// N,n_quasi_dark,n_localized_site1,n_in_gap,W_closed_form,slowest_decay_rate
// followed by "# fit ..." summary lines.
void write_bulk_edge_csv(std::ostream& out, const BulkEdgeReport& report);

} // namespace nhtop::topology
