// netmodel.hpp — Effective non-Hermitian generators for qubit/cavity networks
//
// A network with one excitation shared between a fiducial qubit (site 1) and
// lossy cavities reduces, on the coherence sector |0><j|, to L~ = -iH with
//
//   H[j][j] = detuning_j - i*Gamma_j/2,   H[i][j] = hopping amplitude.
//
// All reported mode eigenvalues elsewhere in the library are eigenvalues of
// L~ (decay rate = -Re lambda). The SSH and three-site builders place -i*Gamma
// (no factor 1/2) on their lossy sites, as written for those chains; the
// general and impurity builders use -i*Gamma/2.

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "nhtop/types.hpp"

namespace nhtop::netmodel {

enum class SiteKind { qubit, cavity };

struct SiteSpec {
    SiteKind kind = SiteKind::cavity;
    double detuning = 0.0;
    double loss_rate = 0.0;  // Lindblad rate Gamma_j, zero for qubits
};

// Hopping term between 1-based site indices.
struct Edge {
    int i = 0;
    int j = 0;
    double amplitude = 0.0;
};

struct NetworkSpec {
    std::vector<SiteSpec> sites;  // sites[0] is the fiducial qubit
    std::vector<Edge> edges;

    // Throws SpecificationError on the first violated invariant.
    void validate() const;
};

enum class ModelKind { custom, impurity, ssh, three_site };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct Provenance {
    ModelKind model = ModelKind::custom;
    std::map<std::string, double> params;
    int cell_size = 1;  // sites per unit cell, used for sublattice analysis
};

struct EffectiveHamiltonian {
    CMatrix matrix;
    Provenance provenance;

    Eigen::Index dim() const { return matrix.rows(); }

    // L~ = -iH.
    CMatrix generator() const { return -kI * matrix; }

    // Gamma_j = -2 Im H_jj (the Lindblad rate of each site).
    RVector loss_rates() const;

    // Hermitian part H0 = (H + H^dagger)/2.
    CMatrix hermitian_part() const;
};

// Checks that the anti-Hermitian part is diagonal with non-positive imaginary
// entries and that every eigenvalue of L~ has Re <= eps_rel * max|H|.
// Throws SpecificationError otherwise.
void check_dissipative(const EffectiveHamiltonian& h, double eps_rel = 1e-10);

EffectiveHamiltonian build_effective_hamiltonian(const NetworkSpec& spec);

// Qubit coupled by kappa to a uniform chain of N-1 cavities (hopping J, loss
// Gamma), in the frame rotating with the qubit.
EffectiveHamiltonian build_impurity_model(int n_sites, double J, double kappa, double gamma);

// Alternating J1, J2 bonds starting with J1 on (1,2); -i*Gamma on even sites.
EffectiveHamiltonian build_ssh_model(int n_sites, double J1, double J2, double gamma);

struct ThreeSiteParams {
    double J1 = 1.0;    // cell (1,2)
    double J2 = 0.3;    // cell (2,3)
    double J3 = 2.0;    // (3) to next cell (1)
    double J = 0.7;     // cell (1,3)
    double eps1 = 0.0;
    double eps2 = 0.0;
    double gamma = 0.5;  // -i*Gamma on site 3 of each cell
};

// Open chain of three-site cells; bonds leaving a partial final cell are dropped.
EffectiveHamiltonian build_three_site_model(int n_sites, const ThreeSiteParams& p);

// H' = H + diag(mu). Throws SpecificationError on a length mismatch.
EffectiveHamiltonian apply_detuning_disorder(const EffectiveHamiltonian& h,
                                             std::span<const double> mu_values);

} // namespace nhtop::netmodel
