// dynamics.hpp — Qubit coherence C(t) = |<1|exp(t L~)|1>| and derived timescales

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nhtop/fit.hpp"
#include "nhtop/netmodel.hpp"
#include "nhtop/spectral.hpp"

namespace nhtop::dynamics {

enum class Method { spectral, expm, full_superoperator };

std::string to_string(Method m);

struct CoherenceTrace {
    std::vector<double> times;
    std::vector<double> values;
    Method method = Method::spectral;
};

inline constexpr double kSpectralConditionLimit = 1e8;

// Spectral sum, falling back to expm when the eigenvector condition number
// reaches kSpectralConditionLimit.
CoherenceTrace coherence_trace(const netmodel::EffectiveHamiltonian& h, std::span<const double> times);

// Same, reusing an existing decomposition of h.
CoherenceTrace coherence_trace(const netmodel::EffectiveHamiltonian& h, const spectral::SpectralData& sd,
                               std::span<const double> times);

CoherenceTrace coherence_trace_expm(const netmodel::EffectiveHamiltonian& h, std::span<const double> times);

// Evolves |0><1| with the full (N+1)^2 superoperator and reads its |0><1| component.
CoherenceTrace coherence_trace_full(const netmodel::EffectiveHamiltonian& h, std::span<const double> times);

// Scaling-and-squaring with a degree-13 Pade kernel.
CMatrix expm(const CMatrix& a);

// exp(t L~).
CMatrix expm_oracle(const netmodel::EffectiveHamiltonian& h, double t);

std::vector<double> log_time_grid(double t_max, int n_points = 400, double t_min = 1e-2);
std::vector<double> linear_time_grid(double t_max, int n_points);

struct Timescales {
    double tau_min = 0.0;
    double tau_max = 0.0;
    double tau_lin = 0.0;
    double epsilon = 0.05;
};

inline constexpr double kWeightCutoff = 1e-14;

Timescales timescales(const CVector& eigenvalues, const CVector& weights, double epsilon = 0.05);

// 2 J1^2 / Gamma2.
double strong_dissipative_rate(double J1, double gamma2);

// lambda_k = -i e_k - (1/2) sum_j Gamma_j |<k|j>|^2, ordered by e_k.
CVector weak_dissipative_spectrum(const RMatrix& h0, std::span<const double> gammas);

// Least-squares fit of ln C(t) for t in [t_lo, t_hi].
LinearFit fit_log_coherence(const CoherenceTrace& trace, double t_lo, double t_hi);

// -slope of fit_log_coherence.
double fitted_decay_rate(const CoherenceTrace& trace, double t_lo, double t_hi);

// Header "t,coherence", 17 significant digits.
void write_trace_csv(std::ostream& out, const CoherenceTrace& trace);

} // namespace nhtop::dynamics
