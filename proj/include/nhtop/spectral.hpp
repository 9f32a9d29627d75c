// spectral.hpp — Biorthogonal eigen-decomposition of L~ and edge-mode analysis

#pragma once

#include <iosfwd>
#include <vector>

#include "nhtop/netmodel.hpp"

namespace nhtop::spectral {

// L~ = sum_j lambda_j r_j l_j^dagger with <l_i, r_j> = delta_ij.
struct SpectralData {
    CVector eigenvalues;  // sorted by decay rate, then by imaginary part
    CMatrix right;        // columns r_j, unit 2-norm
    CMatrix left;         // columns l_j
    double condition = 1.0;       // 2-norm condition number of `right`
    bool near_defective = false;  // condition > 1e10
    int cell_size = 1;
    std::vector<int> cluster;     // cluster id per eigenvalue (|lambda_i - lambda_j| < 1e-9)

    Eigen::Index size() const { return eigenvalues.size(); }
    double decay_rate(Eigen::Index j) const { return -eigenvalues(j).real(); }
};

inline constexpr double kDefectiveCondition = 1e10;

SpectralData decompose(const netmodel::EffectiveHamiltonian& h);

// c_j = <site|r_j><l_j|site>, site 1-based.
CVector overlap_weights(const SpectralData& sd, int site);

struct ClusterWeight {
    Complex eigenvalue;  // cluster mean
    Complex weight;      // summed over the cluster
    int multiplicity = 1;
};

// Weights with degenerate eigenvalues merged into one projector.
std::vector<ClusterWeight> clustered_weights(const SpectralData& sd, int site);

struct Localization {
    int site = 0;         // 1-based argmax of |psi|^2
    double length = 0.0;  // |psi|^2 decay length in lattice sites
    double r_squared = 0.0;
    bool delocalized = true;
};

// Fits ln|psi_n|^2 against n on the sublattice of the maximum (stride = cell size).
Localization localization_profile(const CVector& mode, int stride = 1);

struct EdgeMode {
    Eigen::Index index = 0;
    Complex eigenvalue;
    double decay_rate = 0.0;
    int localization_site = 0;
    double localization_length = 0.0;
    bool delocalized = true;
    double overlap_site1 = 0.0;     // |<1|P_j|1>|
    double site1_population = 0.0;  // |<1|r_j>|^2
    bool localized_at_qubit = false;
};

inline constexpr double kSite1Threshold = 0.1;

// Analysis of mode j. Localized at the qubit: site in the first cell and
// overlap_site1 > site1_threshold.
EdgeMode describe_mode(const SpectralData& sd, Eigen::Index j,
                       double site1_threshold = kSite1Threshold);

// Modes with decay_rate < eps_dark, slowest first.
std::vector<EdgeMode> find_quasi_dark_modes(const SpectralData& sd, double eps_dark,
                                            double site1_threshold = kSite1Threshold);

// Default threshold 1e-3 * Gamma: the model's Gamma parameter, else the largest loss rate.
double default_eps_dark(const netmodel::EffectiveHamiltonian& h);

// index,re_lambda,im_lambda,decay_rate,overlap_site1,localization_site,localization_length
void write_spectrum_csv(std::ostream& out, const SpectralData& sd);

} // namespace nhtop::spectral
