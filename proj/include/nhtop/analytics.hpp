// analytics.hpp — Closed-form predictions for the impurity, SSH and three-site chains
//
// Eigenvalues are reported for L~ = -iH; the H-convention value is lambda_H = i * lambda.

#pragma once

#include <iosfwd>
#include <vector>

#include "nhtop/spectral.hpp"

namespace nhtop::analytics {

struct ImpurityPrediction {
    Complex lambda_plus;
    Complex lambda_minus;
    bool validity_plus = false;   // Re lambda_plus < 0
    bool validity_minus = false;
    double zeta_plus = 0.0;       // localization lengths
    double zeta_minus = 0.0;
    double tau = 0.0;             // +inf for kappa = 0
};

// lambda_pm = -4 kappa^2 / (Gamma +- s),  s = sqrt(16 (J^2 - kappa^2) + Gamma^2).
ImpurityPrediction impurity_prediction(double J, double kappa, double gamma);

struct QuasimomentumRoot {
    Complex k;               // 0 < Re k < pi
    Complex lambda;          // i 2J cos k - Gamma/2
    double residual = 0.0;   // |f(k)| relative to the size of its terms
    int iterations = 0;
    bool asymptotic_seed = false;
};

// Roots of f(k) = (2 cos k + i a) sin(kN) - beta^2 sin(k(N-1)), a = Gamma/(2J),
// beta = kappa/J, by Newton iteration from the large-N solution and from the
// bulk points pi m / N. The asymptotic roots come first.
std::vector<QuasimomentumRoot> impurity_quasimomentum_roots(double J, double kappa, double gamma, int N);

// f(k) itself, for residual checks.
Complex impurity_secular(Complex k, double a, double beta, int N);

struct SshOddDarkState {
    CVector vector;          // A e^{ikn} on odd sites, zero on even sites
    double A2 = 0.0;
    double x = 0.0;          // |J1/J2|
    bool right_localized = false;
};

SshOddDarkState ssh_odd_dark_state(int N, double J1, double J2);

// (1 - x^2)/(1 - x^{N+1}) with x = J1/J2, and 2/(N+1) at |J1| = |J2|.
double ssh_odd_asymptotic_coherence(int N, double J1, double J2);

struct SshEvenPrediction {
    int N = 0;
    double d = 0.0;
    bool threshold_ok = false;  // d > 1 + 2/N
    double y = 0.0;
    double exp_y_first_order = 0.0;
    Complex lambda_plus;
    Complex lambda_minus;
    double tau_coh = 0.0;
    double overlap = 0.0;       // expanded first-order form
    double overlap_sinh = 0.0;  // sinh form at the solved y
    double sinh_residual = 0.0;
};

SshEvenPrediction ssh_even_prediction(int N, double J1, double J2, double gamma);

struct DarkSector {
    std::vector<Eigen::Index> indices;
    CVector eigenvalues;
    CVector weights;
    std::vector<double> frequencies;  // -Im lambda
    double rabi_period = 0.0;         // 2pi/|w1 - w2| for two modes, else +inf
};

DarkSector dark_sector(const spectral::SpectralData& sd, double eps_dark);

// |sum over dark modes of c_j e^{lambda_j t}|; 0 without dark modes.
double dark_sector_prediction(const spectral::SpectralData& sd, double eps_dark, double t);

struct Table1Row {
    int N = 0;
    double tau_exact = 0.0;
    double tau_theory = 0.0;
    double overlap_exact = 0.0;
    double overlap_theory = 0.0;
};

// Exact columns from the slowest mode of the SSH chain: 1/decay rate and
// |<1|r>|^2 of its unit-norm right eigenvector.
std::vector<Table1Row> table1(double J1, double J2, double gamma, const std::vector<int>& sizes);

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);

} // namespace nhtop::analytics
