#include "nhtop/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace nhtop::analytics {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kInf = std::numeric_limits<double>::infinity();

Complex secular_derivative(Complex k, double a, double beta, int n) {
    const double nd = n;
    return -2.0 * std::sin(k) * std::sin(k * nd) +
           nd * (2.0 * std::cos(k) + kI * a) * std::cos(k * nd) -
           beta * beta * (nd - 1.0) * std::cos(k * (nd - 1.0));
}

// Size of the terms of f near k; max(|sin|, |cos|) keeps it away from zero at the roots.
double secular_scale(Complex k, double a, double beta, int n) {
    const double nd = n;
    auto size = [](Complex z) { return std::max(std::abs(std::sin(z)), std::abs(std::cos(z))); };
    return (2.0 * std::abs(std::cos(k)) + std::abs(a)) * size(k * nd) + beta * beta * size(k * (nd - 1.0));
}

double relative_residual(Complex k, double a, double beta, int n) {
    const double scale = secular_scale(k, a, beta, n);
    const double f = std::abs(impurity_secular(k, a, beta, n));
    return scale > 0.0 ? f / scale : f;
}

// Uses f(-k) = -f(k) and 2pi periodicity to bring Re k into (-pi, pi], then (0, pi).
Complex reduce_root(Complex k) {
    double x = std::remainder(k.real(), 2.0 * kPi);
    Complex r(x, k.imag());
    if (x < 0.0) r = -r;
    return r;
}

struct NewtonOutcome {
    Complex k;
    int iterations = 0;
    bool converged = false;
};

NewtonOutcome newton(Complex k, double a, double beta, int n) {
    NewtonOutcome out;
    for (int it = 1; it <= 200; ++it) {
        const Complex f = impurity_secular(k, a, beta, n);
        const Complex df = secular_derivative(k, a, beta, n);
        if (!std::isfinite(std::abs(f)) || !std::isfinite(std::abs(df)) || df == Complex(0.0)) break;
        const Complex step = f / df;
        k -= step;
        out.iterations = it;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(k)) || relative_residual(k, a, beta, n) < 1e-14) {
            out.converged = relative_residual(k, a, beta, n) < 1e-12;
            break;
        }
    }
    out.k = k;
    return out;
}

} // namespace

ImpurityPrediction impurity_prediction(double J, double kappa, double gamma) {
    if (!(gamma > 0.0)) throw SpecificationError("impurity_prediction: Gamma must be > 0");
    if (J == 0.0) throw SpecificationError("impurity_prediction: J must be nonzero");
    const Complex s = std::sqrt(Complex(16.0 * (J * J - kappa * kappa) + gamma * gamma, 0.0));
    ImpurityPrediction p;
    const double k2 = 4.0 * kappa * kappa;
    p.lambda_plus = -k2 / (gamma + s);
    p.lambda_minus = -k2 / (gamma - s);
    p.validity_plus = p.lambda_plus.real() < 0.0;
    p.validity_minus = p.lambda_minus.real() < 0.0;
    p.zeta_plus = 1.0 / std::log(std::abs(4.0 * J / (gamma + s)));
    p.zeta_minus = 1.0 / std::log(std::abs(4.0 * J / (gamma - s)));
    p.tau = kappa == 0.0 ? kInf : ((gamma + s) / k2).real();
    return p;
}

Complex impurity_secular(Complex k, double a, double beta, int N) {
    const double nd = N;
    return (2.0 * std::cos(k) + kI * a) * std::sin(k * nd) - beta * beta * std::sin(k * (nd - 1.0));
}

std::vector<QuasimomentumRoot> impurity_quasimomentum_roots(double J, double kappa, double gamma, int N) {
    if (N < 3) throw SpecificationError("impurity_quasimomentum_roots: N must be >= 3");
    if (J == 0.0) throw SpecificationError("impurity_quasimomentum_roots: J must be nonzero");
    const double a = gamma / (2.0 * J);
    const double beta = kappa / J;

    std::vector<QuasimomentumRoot> roots;
    auto accept = [&](const NewtonOutcome& nr, bool asymptotic) {
        const Complex k = reduce_root(nr.k);
        if (!(k.real() > 1e-10 && k.real() < kPi - 1e-10)) return false;
        for (const auto& r : roots) {
            if (std::abs(r.k - k) < 1e-8) return false;
        }
        QuasimomentumRoot r;
        r.k = k;
        r.lambda = kI * 2.0 * J * std::cos(k) - gamma / 2.0;
        r.residual = relative_residual(k, a, beta, N);
        r.iterations = nr.iterations;
        r.asymptotic_seed = asymptotic;
        roots.push_back(r);
        return true;
    };

    // Large-N solution: z = e^{ik} from the quadratic with e^{-N|y|} terms dropped.
    const double one_minus_b2 = 1.0 - beta * beta;
    if (std::abs(one_minus_b2) > 1e-12) {
        const Complex root = std::sqrt(Complex(a * a + 4.0 * one_minus_b2, 0.0));
        for (double sign : {1.0, -1.0}) {
            const Complex z = -kI * (a + sign * root) / (2.0 * one_minus_b2);
            if (std::abs(z) == 0.0) continue;
            const Complex seed = -kI * std::log(z);
            const NewtonOutcome nr = newton(seed, a, beta, N);
            if (!nr.converged) {
                throw RootFindingError("Newton iteration from the asymptotic seed k0 = (" +
                                       std::to_string(seed.real()) + ", " + std::to_string(seed.imag()) +
                                       ") did not converge in 200 iterations; last k = (" +
                                       std::to_string(nr.k.real()) + ", " + std::to_string(nr.k.imag()) +
                                       "), relative residual " +
                                       std::to_string(relative_residual(nr.k, a, beta, N)));
            }
            accept(nr, true);
        }
    }
    for (int m = 1; m < N; ++m) {
        const NewtonOutcome nr = newton(Complex(kPi * m / N, 0.0), a, beta, N);
        if (nr.converged) accept(nr, false);
    }
    return roots;
}

SshOddDarkState ssh_odd_dark_state(int N, double J1, double J2) {
    if (N < 3 || N % 2 == 0) throw SpecificationError("ssh_odd_dark_state: N must be odd and >= 3");
    if (J2 == 0.0) throw SpecificationError("ssh_odd_dark_state: J2 must be nonzero");
    SshOddDarkState s;
    s.x = std::abs(J1 / J2);
    s.right_localized = s.x > 1.0;
    if (s.x == 1.0) {
        s.A2 = 2.0 / (N + 1.0);
    } else {
        s.A2 = (1.0 - s.x * s.x) / (s.x - std::pow(s.x, N + 2));
    }
    // e^{2ik} = -J1/J2
    const Complex eik = std::sqrt(Complex(-J1 / J2, 0.0));
    const double amp = std::sqrt(s.A2);
    s.vector = CVector::Zero(N);
    for (int n = 1; n <= N; n += 2) s.vector(n - 1) = amp * std::pow(eik, n);
    return s;
}

double ssh_odd_asymptotic_coherence(int N, double J1, double J2) {
    if (N < 3 || N % 2 == 0) throw SpecificationError("ssh_odd_asymptotic_coherence: N must be odd and >= 3");
    if (std::abs(J1) == std::abs(J2)) return 2.0 / (N + 1.0);
    if (J2 == 0.0) return 0.0;
    const double x = J1 / J2;
    return (1.0 - x * x) / (1.0 - std::pow(x, N + 1));
}

SshEvenPrediction ssh_even_prediction(int N, double J1, double J2, double gamma) {
    if (N < 4 || N % 2 == 1) throw SpecificationError("ssh_even_prediction: N must be even and >= 4");
    if (J1 == 0.0) throw SpecificationError("ssh_even_prediction: J1 must be nonzero");
    if (!(gamma > 0.0)) throw SpecificationError("ssh_even_prediction: Gamma must be > 0");
    SshEvenPrediction p;
    p.N = N;
    p.d = std::abs(J2 / J1);
    p.threshold_ok = p.d > 1.0 + 2.0 / N;
    p.y = p.exp_y_first_order = p.tau_coh = p.overlap = p.overlap_sinh = p.sinh_residual = kNaN;
    p.lambda_plus = p.lambda_minus = Complex(kNaN, kNaN);
    if (!p.threshold_ok) return p;

    const double d = p.d;
    const double x = 1.0 / d;
    const double ha = N / 2.0, hb = N / 2.0 + 1.0;
    // sinh(ha y)/sinh(hb y) without overflow; decreases from ha/hb to 0.
    auto ratio = [&](double y) {
        if (y == 0.0) return ha / hb;
        return std::exp(-y) * std::expm1(-2.0 * ha * y) / std::expm1(-2.0 * hb * y);
    };
    double lo = 0.0, hi = 10.0 * std::log(d);
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (ratio(mid) > x ? lo : hi) = mid;
    }
    const double y = 0.5 * (lo + hi);
    p.y = y;
    p.sinh_residual = std::abs(std::sinh(ha * y) - x * std::sinh(hb * y)) / std::sinh(ha * y);
    p.exp_y_first_order = d + std::pow(d, -N) * (1.0 / d - d);

    const double j1sq = J1 * J1;
    const double gap = 1.0 / d - d;
    const double rate = j1sq / gamma * std::pow(d, -N) * gap * gap;
    p.lambda_plus = -rate;
    p.lambda_minus = -gamma + rate;
    p.tau_coh = gamma / j1sq * std::pow(d, N) / (gap * gap);

    const double x2 = x * x;
    p.overlap = 1.0 - x2 + std::pow(x, N) * (1.0 - x2) * (1.0 - x2) *
                               ((N + 1.0) - (1.0 - x2) / x2 * j1sq / (gamma * gamma));
    const double s = std::sinh(ha * y);
    const double denom = std::sinh((N + 1.0) * y) / std::sinh(y) - (N + 1.0);
    p.overlap_sinh = 4.0 * s * s / denom * (gamma - rate) / (gamma - 2.0 * rate);
    return p;
}

DarkSector dark_sector(const spectral::SpectralData& sd, double eps_dark) {
    if (!(eps_dark > 0.0)) throw SpecificationError("eps_dark must be > 0");
    const CVector c = spectral::overlap_weights(sd, 1);
    DarkSector ds;
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        if (sd.decay_rate(j) < eps_dark) ds.indices.push_back(j);
    }
    const auto m = static_cast<Eigen::Index>(ds.indices.size());
    ds.eigenvalues.resize(m);
    ds.weights.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        ds.eigenvalues(i) = sd.eigenvalues(ds.indices[i]);
        ds.weights(i) = c(ds.indices[i]);
        ds.frequencies.push_back(-ds.eigenvalues(i).imag());
    }
    ds.rabi_period = kInf;
    if (m == 2) {
        const double dw = std::abs(ds.frequencies[0] - ds.frequencies[1]);
        if (dw > 0.0) ds.rabi_period = 2.0 * kPi / dw;
    }
    return ds;
}

double dark_sector_prediction(const spectral::SpectralData& sd, double eps_dark, double t) {
    if (!(t >= 0.0)) throw SpecificationError("dark_sector_prediction: t must be >= 0");
    const DarkSector ds = dark_sector(sd, eps_dark);
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < ds.eigenvalues.size(); ++i) sum += ds.weights(i) * std::exp(ds.eigenvalues(i) * t);
    return std::abs(sum);
}

std::vector<Table1Row> table1(double J1, double J2, double gamma, const std::vector<int>& sizes) {
    std::vector<Table1Row> rows;
    for (int n : sizes) {
        if (n < 4 || n % 2 == 1) throw SpecificationError("table1: sizes must be even and >= 4");
        const auto sd = spectral::decompose(netmodel::build_ssh_model(n, J1, J2, gamma));
        const auto pred = ssh_even_prediction(n, J1, J2, gamma);
        Table1Row row;
        row.N = n;
        row.tau_exact = 1.0 / sd.decay_rate(0);
        row.overlap_exact = std::norm(sd.right(0, 0));
        row.tau_theory = pred.tau_coh;
        row.overlap_theory = pred.overlap;
        rows.push_back(row);
    }
    return rows;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
    out << "N,tau_exact,tau_theory,overlap_exact,overlap_theory\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", r.N, r.tau_exact, r.tau_theory,
                      r.overlap_exact, r.overlap_theory);
        out << buf;
    }
}

} // namespace nhtop::analytics
