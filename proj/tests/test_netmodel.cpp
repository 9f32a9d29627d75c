#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "generators.hpp"
#include "nhtop/model_config.hpp"

using namespace nhtop;
using namespace nhtop::netmodel;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

CVector sort_complex(CVector ev) {
    std::sort(ev.data(), ev.data() + ev.size(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

CVector sorted_eigenvalues(const CMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> s(m, false);
    return sort_complex(s.eigenvalues());
}

// Symmetric nearest-neighbour distance between two spectra.
double spectrum_distance(const CVector& a, const CVector& b) {
    double worst = 0.0;
    for (const Complex& z : a) worst = std::max(worst, (b.array() - z).abs().minCoeff());
    for (const Complex& z : b) worst = std::max(worst, (a.array() - z).abs().minCoeff());
    return worst;
}

} // namespace

TEST_CASE("general builder places detunings, half loss rates and symmetric hoppings") {
    NetworkSpec spec;
    spec.sites = {{SiteKind::qubit, 0.0, 0.0}, {SiteKind::cavity, 0.0, 3.0}};
    spec.edges = {{1, 2, 0.7}};
    const auto h = build_effective_hamiltonian(spec);
    CMatrix expected(2, 2);
    expected << 0.0, 0.7, 0.7, Complex(0.0, -1.5);
    CHECK(max_abs_diff(h.matrix, expected) == 0.0);
}

TEST_CASE("network without edges gives a diagonal H") {
    NetworkSpec spec;
    spec.sites = {{SiteKind::qubit, 0.3, 0.0}, {SiteKind::cavity, -0.2, 1.0}, {SiteKind::cavity, 0.5, 2.0}};
    const auto h = build_effective_hamiltonian(spec);
    CHECK(h.matrix(0, 0) == Complex(0.3, 0.0));
    CHECK(h.matrix(1, 1) == Complex(-0.2, -0.5));
    CHECK(h.matrix(2, 2) == Complex(0.5, -1.0));
    CHECK((h.matrix - CMatrix(h.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("three-site linear chain spectrum matches direct diagonalization of H") {
    NetworkSpec spec;
    spec.sites = {{SiteKind::qubit, 0.0, 0.0}, {SiteKind::cavity, 0.0, 4.0}, {SiteKind::cavity, 0.0, 4.0}};
    spec.edges = {{1, 2, 1.0}, {2, 3, 1.0}};
    const auto h = build_effective_hamiltonian(spec);
    CHECK(h.matrix(1, 1) == Complex(0.0, -2.0));
    CHECK(h.matrix(2, 2) == Complex(0.0, -2.0));
    CHECK(h.matrix(0, 1) == Complex(1.0));
    CHECK(h.matrix(1, 2) == Complex(1.0));
    // eig(L~) = -i eig(H)
    const CVector from_h = -kI * sorted_eigenvalues(h.matrix);
    const CVector from_l = sorted_eigenvalues(h.generator());
    CHECK(spectrum_distance(from_h, from_l) < 1e-12);
}

TEST_CASE("network validation rejects malformed specifications") {
    NetworkSpec spec;
    spec.sites = {{SiteKind::qubit, 0.0, 0.0}, {SiteKind::cavity, 0.0, 1.0}};
    spec.edges = {{1, 3, 1.0}};
    CHECK_THROWS_AS(build_effective_hamiltonian(spec), SpecificationError);

    spec.edges = {{1, 2, 1.0}, {2, 1, 0.5}};
    CHECK_THROWS_AS(build_effective_hamiltonian(spec), SpecificationError);

    spec.edges = {{2, 2, 1.0}};
    CHECK_THROWS_AS(build_effective_hamiltonian(spec), SpecificationError);

    spec.edges = {};
    spec.sites[0].loss_rate = 0.5;
    CHECK_THROWS_AS(build_effective_hamiltonian(spec), SpecificationError);

    spec.sites = {{SiteKind::cavity, 0.0, 1.0}};
    CHECK_THROWS_AS(build_effective_hamiltonian(spec), SpecificationError);

    spec.sites = {{SiteKind::qubit, 0.0, 0.0}, {SiteKind::qubit, 0.0, 0.0}};
    spec.edges = {{1, 2, 1.0}};
    CHECK_THROWS_AS(build_effective_hamiltonian(spec), SpecificationError);

    spec.sites = {{SiteKind::qubit, 0.0, 0.0}, {SiteKind::cavity, 0.0, -1.0}};
    spec.edges = {};
    CHECK_THROWS_AS(build_effective_hamiltonian(spec), SpecificationError);
}

TEST_CASE("impurity model") {
    SUBCASE("smallest instance") {
        const auto h = build_impurity_model(2, 5.0, 1.0, 4.0);
        CMatrix expected(2, 2);
        expected << 0.0, 1.0, 1.0, Complex(0.0, -2.0);
        CHECK(max_abs_diff(h.matrix, expected) == 0.0);
    }
    SUBCASE("localized eigenvalue near the closed form at N=4 and N=400") {
        const double J = 1.0, kappa = 0.5, gamma = 4.0;
        const double closed = -4.0 * kappa * kappa / (gamma + std::sqrt(16.0 * (J * J - kappa * kappa) + gamma * gamma));
        for (int n : {4, 400}) {
            const CVector ev = sorted_eigenvalues(build_impurity_model(n, J, kappa, gamma).generator());
            const Complex slowest = ev(ev.size() - 1);
            CHECK(slowest.real() == doctest::Approx(closed).epsilon(n == 4 ? 1e-3 : 1e-9));
        }
        const CVector ev = sorted_eigenvalues(build_impurity_model(400, J, kappa, gamma).generator());
        CHECK(std::abs(ev(ev.size() - 1).real() - (-0.10762521851)) < 1e-9);
    }
    SUBCASE("kappa = 0 decouples the qubit") {
        const auto h = build_impurity_model(5, 1.0, 0.0, 4.0);
        Eigen::ComplexEigenSolver<CMatrix> s(h.generator());
        int zero_modes = 0;
        for (Eigen::Index j = 0; j < s.eigenvalues().size(); ++j) {
            if (std::abs(s.eigenvalues()(j)) < 1e-14) {
                ++zero_modes;
                const CVector v = s.eigenvectors().col(j);
                CHECK(std::abs(v(0)) == doctest::Approx(1.0));
                CHECK(v.tail(4).norm() < 1e-14);
            }
        }
        CHECK(zero_modes == 1);
    }
    CHECK_THROWS_AS(build_impurity_model(1, 1.0, 0.5, 4.0), SpecificationError);
    CHECK_THROWS_AS(build_impurity_model(4, 1.0, 0.5, -1.0), SpecificationError);
}

TEST_CASE("SSH model") {
    SUBCASE("N=2 reference case") {
        const auto h = build_ssh_model(2, 1.0, 1.8, 0.5);
        CMatrix expected(2, 2);
        expected << 0.0, 1.0, 1.0, Complex(0.0, -0.5);
        CHECK(max_abs_diff(h.matrix, expected) == 0.0);
    }
    SUBCASE("alternating bonds and loss on even sites only") {
        const auto h = build_ssh_model(6, 1.0, 1.8, 0.5);
        for (int s = 0; s < 6; ++s) {
            CHECK(h.matrix(s, s) == (s % 2 == 1 ? Complex(0.0, -0.5) : Complex(0.0)));
            if (s + 1 < 6) CHECK(h.matrix(s, s + 1).real() == (s % 2 == 0 ? 1.0 : 1.8));
        }
        CHECK(h.provenance.cell_size == 2);
    }
    SUBCASE("odd chain has exactly one dark eigenvalue") {
        const CVector ev = sorted_eigenvalues(build_ssh_model(3, 1.0, 1.8, 0.5).generator());
        int dark = 0;
        for (Eigen::Index j = 0; j < ev.size(); ++j) dark += std::abs(ev(j).real()) < 1e-12;
        CHECK(dark == 1);
    }
}

TEST_CASE("three-site model") {
    ThreeSiteParams p;
    p.J1 = 1.0;
    p.J2 = 0.3;
    p.J3 = 2.0;
    p.J = 0.7;
    p.eps1 = 0.1;
    p.eps2 = -0.2;
    p.gamma = 0.5;

    SUBCASE("single cell") {
        const auto h = build_three_site_model(3, p);
        CMatrix expected(3, 3);
        expected << 0.1, 1.0, 0.7, 1.0, -0.2, 0.3, 0.7, 0.3, Complex(0.0, -0.5);
        CHECK(max_abs_diff(h.matrix, expected) == 0.0);
    }
    SUBCASE("inter-cell bond and truncated final cell") {
        const auto h = build_three_site_model(5, p);
        CHECK(h.matrix(2, 3) == Complex(2.0));
        CHECK(h.matrix(3, 4) == Complex(1.0));
        CHECK(h.matrix(0, 4) == Complex(0.0));
        CHECK(h.matrix(4, 4) == Complex(-0.2));
        CHECK(h.matrix(0, 3) == Complex(0.0));
    }
    SUBCASE("N mod 3 = 2 gives two exactly dark modes") {
        ThreeSiteParams scaling_params{1.4, 0.3, 3.0, 0.7, 0.0, 0.0, 1.5};
        for (int n : {5, 8, 11}) {
            const CVector ev = sorted_eigenvalues(build_three_site_model(n, scaling_params).generator());
            int dark = 0;
            for (Eigen::Index j = 0; j < ev.size(); ++j) dark += std::abs(ev(j).real()) < 1e-10;
            CHECK(dark == 2);
        }
    }
    CHECK_THROWS_AS(build_three_site_model(2, p), SpecificationError);
}

TEST_CASE("detuning disorder") {
    const auto h = build_ssh_model(5, 1.0, 1.8, 0.5);
    SUBCASE("zero shift is the identity") {
        const std::vector<double> zeros(5, 0.0);
        CHECK(max_abs_diff(apply_detuning_disorder(h, zeros).matrix, h.matrix) == 0.0);
    }
    SUBCASE("constant shift moves eigenvalues of L~ by -ic") {
        const double c = 0.37;
        const std::vector<double> shift(5, c);
        const CVector before = sorted_eigenvalues(h.generator());
        const CVector after = sorted_eigenvalues(apply_detuning_disorder(h, shift).generator());
        CHECK(spectrum_distance(after, (before.array() - kI * c).matrix()) < 1e-12);
    }
    SUBCASE("anti-Hermitian part unchanged") {
        const std::vector<double> mu{0.1, -0.2, 0.3, -0.4, 0.5};
        const auto hp = apply_detuning_disorder(h, mu);
        CHECK(max_abs_diff(hp.matrix - hp.matrix.adjoint(), h.matrix - h.matrix.adjoint()) < 1e-15);
    }
    const std::vector<double> wrong(4, 0.0);
    CHECK_THROWS_AS(apply_detuning_disorder(h, wrong), SpecificationError);
}

TEST_CASE("property: random networks yield dissipative generators") {
    testing::Gen g(0x51u);
    for (int trial = 0; trial < 200; ++trial) {
        const auto spec = testing::random_network(g, g.integer(1, 8));
        const auto h = build_effective_hamiltonian(spec);
        const CMatrix herm = h.hermitian_part();
        CHECK(herm.imag().cwiseAbs().maxCoeff() == 0.0);
        CHECK((herm.real() - herm.real().transpose()).cwiseAbs().maxCoeff() == 0.0);
        const CMatrix anti = 0.5 * (h.matrix - h.matrix.adjoint());
        for (Eigen::Index i = 0; i < anti.rows(); ++i) {
            CHECK(anti(i, i).imag() <= 0.0);
            for (Eigen::Index j = 0; j < anti.cols(); ++j) {
                if (i != j) CHECK(anti(i, j) == Complex(0.0));
            }
        }
        const double bound = 1e-10 * h.matrix.cwiseAbs().maxCoeff();
        CHECK(sorted_eigenvalues(h.generator()).real().maxCoeff() <= bound);
        CHECK_NOTHROW(check_dissipative(h));
    }
    for (int trial = 0; trial < 60; ++trial) {
        const auto h = testing::random_canonical(g, trial, 30);
        CHECK_NOTHROW(check_dissipative(h));
    }
}

TEST_CASE("check_dissipative rejects gain") {
    EffectiveHamiltonian h = build_ssh_model(3, 1.0, 1.8, 0.5);
    h.matrix(1, 1) = Complex(0.0, 0.5);
    CHECK_THROWS_AS(check_dissipative(h), SpecificationError);
}

TEST_CASE("model config JSON") {
    SUBCASE("canonical model with overrides") {
        const auto cfg = parse_model_config(R"({"model": "ssh", "N": 6, "params": {"J2": 0.5}})");
        const auto h = build_model(cfg);
        CHECK(h.dim() == 6);
        CHECK(h.matrix(1, 2) == Complex(0.5));
        CHECK(h.matrix(0, 1) == Complex(1.0));
    }
    SUBCASE("defaults follow the reference parameters") {
        const auto h = build_model(parse_model_config(R"({"model": "three-site"})"));
        CHECK(h.dim() == 8);
        CHECK(h.matrix(2, 3) == Complex(2.0));
        CHECK(h.matrix(2, 2) == Complex(0.0, -0.5));
    }
    SUBCASE("custom network") {
        const auto cfg = parse_model_config(R"({"model": "custom", "custom": {
            "sites": [{"kind": "qubit"}, {"kind": "cavity", "detuning": 0.2, "gamma": 4}],
            "edges": [{"i": 1, "j": 2, "J": 0.5}]}})");
        const auto h = build_model(cfg);
        CHECK(h.matrix(1, 1) == Complex(0.2, -2.0));
        CHECK(h.matrix(0, 1) == Complex(0.5));
    }
    CHECK_THROWS_AS(parse_model_config("{not json"), SpecificationError);
    CHECK_THROWS_AS(parse_model_config(R"({"model": "ssh", "extra": 1})"), SpecificationError);
    CHECK_THROWS_AS(parse_model_config(R"({"model": "ssh", "params": {"J3": 1}})"), SpecificationError);
    CHECK_THROWS_AS(parse_model_config(R"({"model": "square"})"), SpecificationError);
    CHECK_THROWS_AS(parse_model_config(R"({"model": "custom"})"), SpecificationError);
    CHECK_THROWS_AS(parse_model_config(R"({"model": "ssh", "N": 2.5})"), SpecificationError);
    CHECK_THROWS_AS(parse_model_config(R"({"model": "custom", "custom": {"sites": [{"kind": "qubit", "spin": 1}]}})"),
                    SpecificationError);
}
