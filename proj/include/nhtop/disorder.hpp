// disorder.hpp — Ensembles of random on-site detunings and averaged coherence
//
// Realization r draws mu_i uniform in [-mu, mu] from a std::mt19937_64 seeded
// with realization_seed(base_seed, r). Each variate uses the top 53 bits of one
// engine output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nhtop/dynamics.hpp"

namespace nhtop::disorder {

struct DisorderConfig {
    double mu = 0.0;
    int n_realizations = 1;
    std::uint64_t base_seed = 0;
    netmodel::EffectiveHamiltonian base;
    std::vector<double> times;
    std::vector<bool> site_mask;  // empty: disorder on every site
    bool store_realizations = false;
};

struct EnsembleResult {
    dynamics::CoherenceTrace mean_trace;
    std::vector<double> stderr_trace;
    int n_ok = 0;
    int n_failed = 0;
    std::vector<dynamics::CoherenceTrace> realizations;  // filled when requested; failed ones are empty
};

// splitmix64 finalizer of base_seed + golden-ratio increment * (r + 1).
std::uint64_t realization_seed(std::uint64_t base_seed, std::uint64_t r);

// Detunings of realization r (zero on masked-out sites).
std::vector<double> draw_detunings(const DisorderConfig& cfg, int r);

EnsembleResult run_ensemble(const DisorderConfig& cfg);

// Mean and standard error of per-realization values, summed in the sequence
// given by `order` with shifted compensated sums. Empty traces are skipped.
void aggregate(const std::vector<std::vector<double>>& traces, const std::vector<std::size_t>& order,
               std::vector<double>& mean, std::vector<double>& stderr_out);

// "#" config lines, then t,mean_coherence,stderr,n_ok.
void write_ensemble_csv(std::ostream& out, const DisorderConfig& cfg, const EnsembleResult& result);

} // namespace nhtop::disorder
