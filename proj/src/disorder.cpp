#include "nhtop/disorder.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "nhtop/parallel.hpp"

namespace nhtop::disorder {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

void validate(const DisorderConfig& cfg) {
    if (!(cfg.mu >= 0.0) || !std::isfinite(cfg.mu)) throw SpecificationError("disorder: mu must be finite and >= 0");
    if (cfg.n_realizations < 1) throw SpecificationError("disorder: need at least one realization");
    if (cfg.base.dim() == 0) throw SpecificationError("disorder: empty base Hamiltonian");
    if (!cfg.site_mask.empty() && static_cast<Eigen::Index>(cfg.site_mask.size()) != cfg.base.dim()) {
        throw SpecificationError("disorder: site mask length does not match N");
    }
    if (cfg.times.empty()) throw SpecificationError("disorder: empty time grid");
}

} // namespace

std::uint64_t realization_seed(std::uint64_t base_seed, std::uint64_t r) {
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (r + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> draw_detunings(const DisorderConfig& cfg, int r) {
    const auto n = static_cast<std::size_t>(cfg.base.dim());
    std::vector<double> mu(n, 0.0);
    std::mt19937_64 engine(realization_seed(cfg.base_seed, static_cast<std::uint64_t>(r)));
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;  // [0, 1)
        if (cfg.site_mask.empty() || cfg.site_mask[i]) mu[i] = cfg.mu * (2.0 * u - 1.0);
    }
    return mu;
}

void aggregate(const std::vector<std::vector<double>>& traces, const std::vector<std::size_t>& order,
               std::vector<double>& mean, std::vector<double>& stderr_out) {
    // The shift is taken from the lowest-index valid realization so it does not depend on `order`.
    const std::vector<double>* reference = nullptr;
    std::size_t n_points = 0;
    for (const auto& tr : traces) {
        if (!tr.empty()) {
            reference = &tr;
            n_points = tr.size();
            break;
        }
    }
    mean.assign(n_points, std::numeric_limits<double>::quiet_NaN());
    stderr_out.assign(n_points, std::numeric_limits<double>::quiet_NaN());
    if (!reference) return;

    for (std::size_t p = 0; p < n_points; ++p) {
        const double shift = (*reference)[p];
        CompensatedSum s;
        std::size_t count = 0;
        for (std::size_t idx : order) {
            const auto& tr = traces[idx];
            if (tr.empty()) continue;
            s.add(tr[p] - shift);
            ++count;
        }
        const double m = shift + s.value() / static_cast<double>(count);
        CompensatedSum sq;
        for (std::size_t idx : order) {
            const auto& tr = traces[idx];
            if (tr.empty()) continue;
            const double dv = tr[p] - m;
            sq.add(dv * dv);
        }
        mean[p] = m;
        stderr_out[p] = count > 1 ? std::sqrt(sq.value() / static_cast<double>(count - 1) / static_cast<double>(count))
                                  : 0.0;
    }
}

EnsembleResult run_ensemble(const DisorderConfig& cfg) {
    validate(cfg);
    const auto n_real = static_cast<std::size_t>(cfg.n_realizations);
    std::vector<std::vector<double>> values(n_real);
    std::vector<dynamics::Method> methods(n_real, dynamics::Method::spectral);

    if (cfg.mu == 0.0) {
        const auto clean = dynamics::coherence_trace(cfg.base, cfg.times);
        for (std::size_t r = 0; r < n_real; ++r) {
            values[r] = clean.values;
            methods[r] = clean.method;
        }
    } else {
        parallel_for(n_real, [&](std::size_t r) {
            try {
                const auto mu = draw_detunings(cfg, static_cast<int>(r));
                const auto h = netmodel::apply_detuning_disorder(cfg.base, mu);
                auto trace = dynamics::coherence_trace(h, cfg.times);
                for (double v : trace.values) {
                    if (!std::isfinite(v)) throw NumericError("non-finite coherence");
                }
                values[r] = std::move(trace.values);
                methods[r] = trace.method;
            } catch (const std::exception&) {
                values[r].clear();
            }
        });
    }

    EnsembleResult result;
    for (const auto& v : values) (v.empty() ? result.n_failed : result.n_ok) += 1;
    std::vector<std::size_t> order(n_real);
    std::iota(order.begin(), order.end(), 0);
    result.mean_trace.times = cfg.times;
    result.mean_trace.method = methods.front();
    aggregate(values, order, result.mean_trace.values, result.stderr_trace);
    if (cfg.store_realizations) {
        result.realizations.resize(n_real);
        for (std::size_t r = 0; r < n_real; ++r) {
            if (values[r].empty()) continue;
            result.realizations[r].times = cfg.times;
            result.realizations[r].values = values[r];
            result.realizations[r].method = methods[r];
        }
    }
    return result;
}

void write_ensemble_csv(std::ostream& out, const DisorderConfig& cfg, const EnsembleResult& result) {
    char buf[192];
    out << "# model=" << netmodel::to_string(cfg.base.provenance.model) << "\n";
    for (const auto& [key, value] : cfg.base.provenance.params) {
        std::snprintf(buf, sizeof buf, "# %s=%.17g\n", key.c_str(), value);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "# mu=%.17g\n# n_realizations=%d\n# base_seed=%llu\n", cfg.mu,
                  cfg.n_realizations, static_cast<unsigned long long>(cfg.base_seed));
    out << buf;
    out << "# site_mask=";
    if (cfg.site_mask.empty()) {
        out << "all";
    } else {
        for (bool b : cfg.site_mask) out << (b ? '1' : '0');
    }
    out << "\n# n_failed=" << result.n_failed << "\n";
    out << "t,mean_coherence,stderr,n_ok\n";
    for (std::size_t i = 0; i < result.mean_trace.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", result.mean_trace.times[i],
                      result.mean_trace.values[i], result.stderr_trace[i], result.n_ok);
        out << buf;
    }
}

} // namespace nhtop::disorder
