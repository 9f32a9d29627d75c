#include "nhtop/topology.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace nhtop::topology {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Index lossy_index(const CMatrix& hk) {
    Eigen::Index found = -1;
    for (Eigen::Index i = 0; i < hk.rows(); ++i) {
        if (hk(i, i).imag() < 0.0) {
            if (found >= 0) throw SpecificationError("Bloch Hamiltonian has more than one lossy site per cell");
            found = i;
        }
    }
    if (found < 0) throw SpecificationError("Bloch Hamiltonian has no lossy site");
    return found;
}

double slowest_rate(const CMatrix& hk) {
    Eigen::ComplexEigenSolver<CMatrix> solver(hk, false);
    return (-solver.eigenvalues().imag()).minCoeff();
}

// Gauge-fixed U(k); empty optional when some overlap u^dagger v vanishes.
std::optional<CMatrix> gauge_fixed_u(const CMatrix& hk, Eigen::Index lossy, std::mt19937_64* scramble) {
    const Eigen::Index n = hk.rows() - 1;
    CMatrix h(n, n);
    CVector v(n);
    for (Eigen::Index a = 0, ra = 0; a < hk.rows(); ++a) {
        if (a == lossy) continue;
        v(ra) = hk(a, lossy);
        for (Eigen::Index b = 0, rb = 0; b < hk.rows(); ++b) {
            if (b == lossy) continue;
            h(ra, rb++) = hk(a, b);
        }
        ++ra;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    CMatrix u = solver.eigenvectors();
    const RVector& e = solver.eigenvalues();

    if (scramble) {
        std::uniform_real_distribution<double> phase(0.0, kTwoPi);
        for (Eigen::Index m = 0; m < n; ++m) u.col(m) *= std::polar(1.0, phase(*scramble));
    }

    // Within a degenerate block put all of v on the first vector.
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    for (Eigen::Index m0 = 0; m0 < n;) {
        Eigen::Index m1 = m0 + 1;
        while (m1 < n && e(m1) - e(m1 - 1) < 1e-10 * scale) ++m1;
        if (m1 - m0 > 1) {
            const CMatrix block = u.middleCols(m0, m1 - m0);
            const CVector p = block * (block.adjoint() * v);
            if (p.norm() > 0.0) {
                CMatrix basis(n, m1 - m0);
                basis.col(0) = p.normalized();
                for (Eigen::Index c = 1; c < m1 - m0; ++c) {
                    CVector w = block.col(c);
                    for (Eigen::Index b = 0; b < c; ++b) w -= basis.col(b).dot(w) * basis.col(b);
                    if (w.norm() < 1e-12) w = block.col(c - 1);
                    basis.col(c) = w.normalized();
                }
                u.middleCols(m0, m1 - m0) = basis;
            }
        }
        m0 = m1;
    }

    const double vnorm = v.norm();
    for (Eigen::Index m = 0; m < n; ++m) {
        const Complex o = u.col(m).dot(v);
        if (std::abs(o) <= 1e-12 * vnorm || vnorm == 0.0) return std::nullopt;
        u.col(m) *= o / std::abs(o);
    }
    return u;
}

struct PhaseScan {
    double total = 0.0;
    double max_step = 0.0;
    int n_perturbed = 0;
};

PhaseScan scan(const BlochHamiltonian& bloch, int n_k, const WindingOptions& opts) {
    std::optional<std::mt19937_64> rng;
    if (opts.gauge_scramble_seed) rng.emplace(*opts.gauge_scramble_seed);
    PhaseScan out;
    Complex prev{};
    for (int m = 0; m <= n_k; ++m) {
        double k = kTwoPi * m / n_k;
        CMatrix hk = bloch(k);
        const Eigen::Index lossy = lossy_index(hk);
        if (slowest_rate(hk) < opts.gap_tolerance) {
            throw GapClosureError("dark Bloch state at k = " + std::to_string(k) + "; winding number undefined");
        }
        auto u = gauge_fixed_u(hk, lossy, rng ? &*rng : nullptr);
        for (int attempt = 0; !u && attempt < 3; ++attempt) {
            k += 1e-9;
            ++out.n_perturbed;
            hk = bloch(k);
            u = gauge_fixed_u(hk, lossy, rng ? &*rng : nullptr);
        }
        if (!u) throw GapClosureError("overlap with the lossy site vanishes near k = " + std::to_string(k));
        const Complex det = u->determinant();
        const Complex d = det / std::abs(det);
        if (m > 0) {
            const double step = std::arg(d * std::conj(prev));
            out.total += step;
            out.max_step = std::max(out.max_step, std::abs(step));
        }
        prev = d;
    }
    return out;
}

int heaviside_gt(double lhs, double rhs) {
    if (std::abs(lhs - rhs) < 1e-12) {
        throw PhaseBoundaryError("parameters lie on a phase boundary (|J3| = " + std::to_string(rhs) + ")");
    }
    return lhs > rhs ? 1 : 0;
}

} // namespace

BlochHamiltonian bloch_ssh(double J1, double J2, double gamma) {
    BlochHamiltonian b;
    b.cell_size = 2;
    b.params = {{"J1", J1}, {"J2", J2}, {"gamma", gamma}};
    b.evaluator = [=](double k) {
        const Complex v = J1 + J2 * std::polar(1.0, k);
        CMatrix h(2, 2);
        h << 0.0, v, std::conj(v), Complex(0.0, -gamma);
        return h;
    };
    return b;
}

BlochHamiltonian bloch_three_site(double J1, double J2, double J3, double J, double eps1, double eps2,
                                  double gamma) {
    BlochHamiltonian b;
    b.cell_size = 3;
    b.params = {{"J1", J1}, {"J2", J2}, {"J3", J3}, {"J", J}, {"eps1", eps1}, {"eps2", eps2}, {"gamma", gamma}};
    b.evaluator = [=](double k) {
        const Complex w = J3 * std::polar(1.0, k) + J;
        CMatrix h(3, 3);
        h << eps1, J1, w,
             J1, eps2, J2,
             std::conj(w), J2, Complex(0.0, -gamma);
        return h;
    };
    return b;
}

WindingResult winding_number_numeric(const BlochHamiltonian& bloch, const WindingOptions& opts) {
    if (opts.n_k < 64) throw SpecificationError("winding_number_numeric: n_k must be >= 64");
    for (int n_k = opts.n_k;; n_k *= 2) {
        if (n_k > opts.max_k_points) {
            throw ResolutionError("phase steps stay above pi/2 with " + std::to_string(opts.max_k_points) +
                                  " k points");
        }
        const PhaseScan s = scan(bloch, n_k, opts);
        if (s.max_step >= std::numbers::pi / 2) continue;
        WindingResult r;
        r.method = WindingMethod::numeric;
        r.k_points = n_k;
        r.max_phase_step = s.max_step;
        r.raw = s.total / kTwoPi;
        r.n_perturbed = s.n_perturbed;
        r.W = static_cast<int>(std::lround(r.raw));
        if (std::abs(r.raw - r.W) >= 0.05) {
            throw ResolutionError("accumulated phase " + std::to_string(r.raw) + " x 2pi is not an integer");
        }
        return r;
    }
}

WindingResult winding_ssh_closed_form(double J1, double J2) {
    WindingResult r;
    r.method = WindingMethod::closed_form;
    r.W = heaviside_gt(std::abs(J2), std::abs(J1));
    r.raw = r.W;
    return r;
}

WindingResult winding_three_site_closed_form(double J1, double J2, double J3, double J, double eps1,
                                             double eps2, bool squared_detuning) {
    const double de = eps1 - eps2;
    const double radicand = 4.0 * J1 * J1 + (squared_detuning ? de * de : de);
    if (!(radicand > 0.0)) throw std::domain_error("mixing angle undefined: non-positive radicand");
    const double c = de / std::sqrt(radicand);
    if (!(std::abs(c) <= 1.0)) throw std::domain_error("mixing angle undefined: arccos argument outside [-1, 1]");
    const double theta = std::acos(c);
    const double half = theta / 2.0;
    WindingResult r;
    r.method = WindingMethod::closed_form;
    const double a3 = std::abs(J3);
    r.W = heaviside_gt(a3, std::abs(J + J2 * std::tan(half)));
    if (std::sin(half) == 0.0) {
        throw std::domain_error("mixing angle undefined: cot(theta/2) diverges");
    }
    r.W += heaviside_gt(a3, std::abs(J - J2 * std::cos(half) / std::sin(half)));
    r.raw = r.W;
    return r;
}

double min_bulk_decay_rate(const BlochHamiltonian& bloch, int n_k) {
    if (n_k < 1) throw SpecificationError("min_bulk_decay_rate: n_k must be >= 1");
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m < n_k; ++m) best = std::min(best, slowest_rate(bloch(kTwoPi * m / n_k)));
    return best;
}

} // namespace nhtop::topology
