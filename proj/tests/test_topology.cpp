#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "generators.hpp"
#include "nhtop/topology.hpp"

using namespace nhtop;
using namespace nhtop::topology;
using netmodel::ModelConfig;
using netmodel::ModelKind;

namespace {

ModelConfig three_site_config(double j3, double j1 = 1.4, double gamma = 1.5) {
    ModelConfig cfg;
    cfg.model = ModelKind::three_site;
    cfg.params = {{"J1", j1}, {"J2", 0.3}, {"J3", j3}, {"J", 0.7}, {"gamma", gamma}};
    return cfg;
}

ModelConfig ssh_config(double j2) {
    ModelConfig cfg;
    cfg.model = ModelKind::ssh;
    cfg.params = {{"J1", 1.0}, {"J2", j2}, {"gamma", 0.5}};
    return cfg;
}

// Distance of J3 from both boundaries of the equal-detuning closed form.
double boundary_margin(double J2, double J3, double J) {
    return std::min(std::abs(std::abs(J3) - std::abs(J + J2)), std::abs(std::abs(J3) - std::abs(J - J2)));
}

} // namespace

TEST_CASE("Bloch Hamiltonians") {
    SUBCASE("SSH at k = 0") {
        const auto b = bloch_ssh(1.0, 1.8, 0.5);
        const CMatrix h0 = b(0.0);
        CHECK(std::abs(h0(0, 1) - Complex(2.8)) < 1e-15);
        CHECK(std::abs(h0(1, 0) - Complex(2.8)) < 1e-15);
        CHECK(h0(0, 0) == Complex(0.0));
        CHECK(h0(1, 1) == Complex(0.0, -0.5));
    }
    SUBCASE("SSH band structure") {
        const double J1 = 1.0, J2 = 1.8, G = 0.5;
        const auto b = bloch_ssh(J1, J2, G);
        for (double k : {0.0, 0.4, 1.7, 3.0, 5.5}) {
            Eigen::ComplexEigenSolver<CMatrix> es(b(k));
            const Complex root = std::sqrt(Complex(J1 * J1 + J2 * J2 + 2 * J1 * J2 * std::cos(k) - G * G / 4.0));
            for (const Complex expected : {Complex(0.0, -G / 2.0) + root, Complex(0.0, -G / 2.0) - root}) {
                CHECK((es.eigenvalues().array() - expected).abs().minCoeff() < 1e-12);
            }
        }
    }
    SUBCASE("gapped SSH modes all decay at Gamma/2") {
        const auto b = bloch_ssh(1.0, 1.8, 0.5);
        CHECK(min_bulk_decay_rate(b) == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("three-site structure") {
        const auto b = bloch_three_site(1.0, 0.3, 2.0, 0.7, 0.1, -0.2, 0.5);
        for (double k : {0.0, 1.0, 2.5, 4.0}) {
            const CMatrix h = b(k);
            CHECK(std::abs(h(0, 2) - (2.0 * std::exp(Complex(0.0, k)) + 0.7)) < 1e-15);
            const CMatrix upper = h.topLeftCorner(2, 2);
            CHECK((upper - upper.adjoint()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(h(2, 2).imag() < 0.0);
            CHECK(h(0, 0).imag() == 0.0);
            CHECK(h(1, 1).imag() == 0.0);
        }
        CHECK((b(0.0) - b(2.0 * std::numbers::pi)).cwiseAbs().maxCoeff() < 1e-14);
        const auto flat = bloch_three_site(1.0, 0.3, 0.0, 0.7, 0.0, 0.0, 0.5);
        CHECK((flat(0.3) - flat(2.1)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("winding number examples") {
    CHECK(winding_number_numeric(bloch_ssh(1.0, 1.8, 0.5)).W == 1);
    CHECK(winding_number_numeric(bloch_ssh(1.0, 0.5, 0.5)).W == 0);
    CHECK(winding_ssh_closed_form(1.0, 1.8).W == 1);
    CHECK(winding_ssh_closed_form(1.0, 0.5).W == 0);
    CHECK_THROWS_AS(winding_ssh_closed_form(1.0, 1.0), PhaseBoundaryError);
    CHECK_THROWS_AS(winding_ssh_closed_form(1.0, -1.0), PhaseBoundaryError);

    const std::pair<double, int> plateaus[] = {{0.2, 0}, {0.7, 1}, {2.0, 2}};
    for (const auto& [j3, w] : plateaus) {
        const auto numeric = winding_number_numeric(bloch_three_site(1.0, 0.3, j3, 0.7, 0.0, 0.0, 0.5));
        CHECK(numeric.W == w);
        CHECK(numeric.method == WindingMethod::numeric);
        CHECK(numeric.max_phase_step < std::numbers::pi / 2.0);
        CHECK(std::abs(numeric.raw - w) < 0.05);
        const auto closed = winding_three_site_closed_form(1.0, 0.3, j3, 0.7, 0.0, 0.0);
        CHECK(closed.W == w);
        CHECK(closed.method == WindingMethod::closed_form);
    }
    CHECK(winding_number_numeric(bloch_three_site(1.0, 0.3, 0.0, 0.7, 0.0, 0.0, 0.5)).W == 0);
}

TEST_CASE("winding number error paths") {
    // J3 = J + J2 = 1.0 closes the gap at k = pi.
    CHECK_THROWS_AS(winding_three_site_closed_form(1.0, 0.3, 1.0, 0.7, 0.0, 0.0), PhaseBoundaryError);
    CHECK_THROWS_AS(winding_number_numeric(bloch_three_site(1.4, 0.3, 1.0, 0.7, 0.0, 0.0, 1.5)), GapClosureError);
    CHECK_THROWS_AS(winding_number_numeric(bloch_ssh(1.0, 1.0, 0.5)), GapClosureError);
    WindingOptions coarse;
    coarse.n_k = 32;
    CHECK_THROWS_AS(winding_number_numeric(bloch_ssh(1.0, 1.8, 0.5), coarse), SpecificationError);
    WindingOptions capped;
    capped.max_k_points = 64;
    CHECK_THROWS_AS(winding_number_numeric(bloch_ssh(1.0, 1.001, 0.5), capped), ResolutionError);
    // The verbatim mixing angle has no real value when eps1 - eps2 < -4 J1^2.
    CHECK_THROWS_AS(winding_three_site_closed_form(0.5, 0.3, 2.0, 0.7, -1.5, 0.0), std::domain_error);
}

TEST_CASE("property: numeric winding is gauge independent") {
    testing::Gen g(0x6A);
    for (int trial = 0; trial < 30; ++trial) {
        const auto b = bloch_three_site(g.uniform(0.5, 1.5), g.uniform(0.1, 0.6), g.uniform(0.0, 3.0),
                                        g.uniform(0.2, 1.0), 0.0, 0.0, g.uniform(0.2, 1.5));
        int reference = 0;
        try {
            reference = winding_number_numeric(b).W;
        } catch (const NumericError&) {
            continue;
        }
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            WindingOptions opts;
            opts.gauge_scramble_seed = seed + 100u * static_cast<std::uint64_t>(trial);
            CHECK(winding_number_numeric(b, opts).W == reference);
        }
    }
}

TEST_CASE("property: closed form and numeric winding agree") {
    testing::Gen g(0xC105Eu);
    int compared = 0;
    while (compared < 200) {
        const double J1 = g.uniform(0.3, 2.0), J2 = g.uniform(0.05, 1.0), J3 = g.uniform(0.0, 3.0);
        const double J = g.uniform(-1.0, 1.0), eps = g.uniform(-1.0, 1.0), gamma = g.uniform(0.1, 2.0);
        if (boundary_margin(J2, J3, J) < 1e-3) continue;
        const int closed = winding_three_site_closed_form(J1, J2, J3, J, eps, eps).W;
        const auto numeric = winding_number_numeric(bloch_three_site(J1, J2, J3, J, eps, eps, gamma));
        CAPTURE(J1);
        CAPTURE(J2);
        CAPTURE(J3);
        CAPTURE(J);
        CAPTURE(eps);
        CHECK(numeric.W == closed);
        ++compared;
    }
}

TEST_CASE("unequal detunings: corrected mixing angle against numerics") {
    // Only the squared-detuning angle is compared; the verbatim angle is left as defined.
    testing::Gen g(0xDE7u);
    int compared = 0, agree = 0;
    for (int trial = 0; trial < 400 && compared < 100; ++trial) {
        const double J1 = g.uniform(0.5, 1.5), J2 = g.uniform(0.1, 0.8), J3 = g.uniform(0.0, 3.0);
        const double J = g.uniform(-1.0, 1.0), e1 = g.uniform(-1.0, 1.0), e2 = g.uniform(-1.0, 1.0);
        int closed = 0, numeric = 0;
        try {
            closed = winding_three_site_closed_form(J1, J2, J3, J, e1, e2, true).W;
            numeric = winding_number_numeric(bloch_three_site(J1, J2, J3, J, e1, e2, 0.7)).W;
        } catch (const NumericError&) {
            continue;
        }
        ++compared;
        agree += closed == numeric;
    }
    CHECK(compared >= 50);
    MESSAGE("squared-detuning agreement " << agree << "/" << compared);
}

TEST_CASE("property: refinement leaves W unchanged") {
    testing::Gen g(0x4EFu);
    for (int trial = 0; trial < 20; ++trial) {
        const auto b = bloch_three_site(1.0, 0.3, g.uniform(0.0, 3.0), 0.7, 0.0, 0.0, 0.5);
        try {
            const auto base = winding_number_numeric(b);
            for (int n_k : {base.k_points * 2, base.k_points * 8}) {
                WindingOptions opts;
                opts.n_k = n_k;
                const auto fine = winding_number_numeric(b, opts);
                CHECK(fine.W == base.W);
                CHECK(fine.max_phase_step <= base.max_phase_step + 1e-12);
            }
        } catch (const NumericError&) {
        }
    }
}

TEST_CASE("property: SSH winding changes only at |J1| = |J2|") {
    int previous = winding_number_numeric(bloch_ssh(1.0, 0.005, 0.5)).W;
    for (int step = 1; step <= 300; ++step) {
        const double j2 = 0.005 + 1e-2 * step;
        const int w = winding_number_numeric(bloch_ssh(1.0, j2, 0.5)).W;
        CHECK(w == winding_ssh_closed_form(1.0, j2).W);
        if (w != previous) {
            CHECK(j2 > 1.0);
            CHECK(j2 - 1e-2 < 1.0);
        }
        previous = w;
    }
}

TEST_CASE("bulk-edge report") {
    SUBCASE("three-site chain with W = 2 has two protected modes") {
        const auto report = bulk_edge_report(three_site_config(3.0), {6, 8, 9, 11, 12, 14, 15, 18});
        CHECK(report.W_closed_form == 2);
        CHECK(report.n_protected == 2);
        CHECK(report.eps_dark == doctest::Approx(1.5e-3));
        for (const auto& row : report.rows) {
            if (row.N % 3 == 2) CHECK(row.n_exact_dark == 2);
            CHECK(row.n_in_gap >= 0);
        }
        for (int n : report.fit_sizes) CHECK(n % 3 != 2);
        REQUIRE(report.fits.size() >= 2);
        for (int r = 0; r < 2; ++r) {
            CHECK(report.fits[r].protected_mode);
            CHECK(report.fits[r].slope < 0.0);
        }
    }
    SUBCASE("even SSH edge-mode rate decays as d^-N") {
        const auto report = bulk_edge_report(ssh_config(1.8), {8, 12, 16, 20});
        CHECK(report.W_closed_form == 1);
        REQUIRE(!report.fits.empty());
        CHECK(report.fits[0].slope == doctest::Approx(-std::log(1.8)).epsilon(0.05));
        CHECK(report.fits[0].r_squared > 0.98);
    }
    SUBCASE("below threshold there are no edge modes") {
        const auto report = bulk_edge_report(ssh_config(1.2), {8, 10, 12, 14});
        CHECK(report.rows[0].N == 8);
        CHECK(report.rows[0].n_in_gap == 0);
    }
    SUBCASE("impurity chain has no Bloch Hamiltonian") {
        ModelConfig cfg;
        cfg.model = ModelKind::impurity;
        const auto report = bulk_edge_report(cfg, {4, 6, 8, 10});
        CHECK(report.W_closed_form == -1);
        CHECK(report.rows[0].n_in_gap == -1);
    }
    SUBCASE("CSV layout") {
        const auto report = bulk_edge_report(ssh_config(1.8), {8, 12, 16, 20});
        std::ostringstream os;
        write_bulk_edge_csv(os, report);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "N,n_quasi_dark,n_localized_site1,n_in_gap,W_closed_form,slowest_decay_rate");
        std::getline(is, line);
        CHECK(line.rfind("8,", 0) == 0);
        CHECK(os.str().find("# protected_modes=") != std::string::npos);
    }
    CHECK_THROWS_AS(bulk_edge_report(ssh_config(1.8), {8, 10, 12}), SpecificationError);
    CHECK_THROWS_AS(bulk_edge_report(ssh_config(1.8), {8, 12, 10, 14}), SpecificationError);
}
