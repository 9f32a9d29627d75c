#include "nhtop/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "nhtop/superoperator.hpp"

namespace nhtop::dynamics {

namespace {

void check_times(std::span<const double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) {
            throw SpecificationError("times must be finite and non-negative");
        }
        if (i > 0 && times[i] < times[i - 1]) throw SpecificationError("times must be ascending");
    }
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
    case Method::spectral: return "spectral";
    case Method::expm: return "expm";
    case Method::full_superoperator: return "full";
    }
    return "spectral";
}

CoherenceTrace coherence_trace(const netmodel::EffectiveHamiltonian& h, std::span<const double> times) {
    check_times(times);
    return coherence_trace(h, spectral::decompose(h), times);
}

CoherenceTrace coherence_trace(const netmodel::EffectiveHamiltonian& h, const spectral::SpectralData& sd,
                               std::span<const double> times) {
    check_times(times);
    if (!(sd.condition < kSpectralConditionLimit)) return coherence_trace_expm(h, times);
    const CVector c = spectral::overlap_weights(sd, 1);
    CoherenceTrace trace;
    trace.method = Method::spectral;
    trace.times.assign(times.begin(), times.end());
    trace.values.reserve(times.size());
    for (double t : times) {
        Complex sum = 0.0;
        for (Eigen::Index j = 0; j < c.size(); ++j) sum += c(j) * std::exp(sd.eigenvalues(j) * t);
        trace.values.push_back(std::abs(sum));
    }
    return trace;
}

CoherenceTrace coherence_trace_expm(const netmodel::EffectiveHamiltonian& h, std::span<const double> times) {
    check_times(times);
    const CMatrix gen = h.generator();
    CoherenceTrace trace;
    trace.method = Method::expm;
    trace.times.assign(times.begin(), times.end());
    trace.values.reserve(times.size());
    for (double t : times) trace.values.push_back(std::abs(expm(t * gen)(0, 0)));
    return trace;
}

CoherenceTrace coherence_trace_full(const netmodel::EffectiveHamiltonian& h, std::span<const double> times) {
    check_times(times);
    const netmodel::Superoperator sop = netmodel::build_full_superoperator(h);
    const Eigen::Index idx = sop.ket0_bra(1);
    CoherenceTrace trace;
    trace.method = Method::full_superoperator;
    trace.times.assign(times.begin(), times.end());
    trace.values.reserve(times.size());
    for (double t : times) trace.values.push_back(std::abs(expm(t * sop.matrix)(idx, idx)));
    return trace;
}

CMatrix expm_oracle(const netmodel::EffectiveHamiltonian& h, double t) {
    if (!(t >= 0.0)) throw SpecificationError("expm_oracle: t must be >= 0");
    return expm(t * h.generator());
}

std::vector<double> log_time_grid(double t_max, int n_points, double t_min) {
    if (!(t_min > 0.0) || !(t_max > t_min) || n_points < 2) {
        throw SpecificationError("log grid needs 0 < t_min < t_max and at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    const double a = std::log(t_min), b = std::log(t_max);
    for (int i = 0; i < n_points; ++i) grid[i] = std::exp(a + (b - a) * i / (n_points - 1));
    grid.front() = t_min;
    grid.back() = t_max;
    return grid;
}

std::vector<double> linear_time_grid(double t_max, int n_points) {
    if (!(t_max > 0.0) || n_points < 2) throw SpecificationError("linear grid needs t_max > 0 and 2+ points");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) grid[i] = t_max * i / (n_points - 1);
    return grid;
}

Timescales timescales(const CVector& eigenvalues, const CVector& weights, double epsilon) {
    if (eigenvalues.size() != weights.size()) throw SpecificationError("timescales: size mismatch");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw SpecificationError("timescales: epsilon must lie in (0, 1)");
    const double inf = std::numeric_limits<double>::infinity();
    double max_rate = -inf, min_rate = inf;
    Complex drift = 0.0;
    double drift_scale = 0.0;
    bool any = false;
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
        drift += weights(j) * eigenvalues(j);
        drift_scale += std::abs(weights(j)) * std::abs(eigenvalues(j));
        if (std::abs(weights(j)) < kWeightCutoff) continue;
        any = true;
        const double rate = -eigenvalues(j).real();
        max_rate = std::max(max_rate, rate);
        min_rate = std::min(min_rate, rate);
    }
    if (!any) throw SpecificationError("timescales: all weights vanish");
    Timescales ts;
    ts.epsilon = epsilon;
    ts.tau_min = max_rate > 0.0 ? 1.0 / max_rate : inf;
    ts.tau_max = min_rate > 0.0 ? 1.0 / min_rate : inf;
    const double denom = -drift.real();
    ts.tau_lin = denom > 1e-12 * drift_scale ? epsilon / denom : inf;
    return ts;
}

double strong_dissipative_rate(double J1, double gamma2) {
    if (!(gamma2 > 0.0)) throw SpecificationError("strong_dissipative_rate: Gamma2 must be > 0");
    return 2.0 * J1 * J1 / gamma2;
}

CVector weak_dissipative_spectrum(const RMatrix& h0, std::span<const double> gammas) {
    if (h0.rows() != h0.cols()) throw SpecificationError("H0 must be square");
    if (static_cast<Eigen::Index>(gammas.size()) != h0.rows()) throw SpecificationError("gammas length mismatch");
    const double scale = std::max(1.0, h0.cwiseAbs().maxCoeff());
    if ((h0 - h0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw SpecificationError("H0 must be symmetric");
    }
    for (double g : gammas) {
        if (!(g >= 0.0)) throw SpecificationError("loss rates must be >= 0");
    }
    if (!gammas.empty() && gammas[0] != 0.0) throw SpecificationError("site 1 is a qubit and carries no loss");
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(h0);
    if (solver.info() != Eigen::Success) throw NumericError("weak_dissipative_spectrum: eigensolver failed");
    const RMatrix& v = solver.eigenvectors();
    CVector out(h0.rows());
    for (Eigen::Index k = 0; k < h0.rows(); ++k) {
        double damping = 0.0;
        for (Eigen::Index j = 0; j < h0.rows(); ++j) damping += gammas[j] * v(j, k) * v(j, k);
        out(k) = Complex(-0.5 * damping, -solver.eigenvalues()(k));
    }
    return out;
}

LinearFit fit_log_coherence(const CoherenceTrace& trace, double t_lo, double t_hi) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double t = trace.times[i];
        if (t >= t_lo && t <= t_hi && trace.values[i] > 0.0) {
            xs.push_back(t);
            ys.push_back(std::log(trace.values[i]));
        }
    }
    return linear_fit(xs, ys);
}

double fitted_decay_rate(const CoherenceTrace& trace, double t_lo, double t_hi) {
    return -fit_log_coherence(trace, t_lo, t_hi).slope;
}

void write_trace_csv(std::ostream& out, const CoherenceTrace& trace) {
    out << "t,coherence\n";
    char buf[96];
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", trace.times[i], trace.values[i]);
        out << buf;
    }
}

} // namespace nhtop::dynamics
