#include "nhtop/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace nhtop::netmodel {

namespace {

void require_size(int n_sites, int minimum, const char* model) {
    if (n_sites < minimum) {
        throw SpecificationError(std::string(model) + ": need at least " +
                                 std::to_string(minimum) + " sites, got " +
                                 std::to_string(n_sites));
    }
}

void set_bond(CMatrix& m, Eigen::Index a, Eigen::Index b, double amplitude) {
    m(a, b) = amplitude;
    m(b, a) = amplitude;
}

} // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::custom: return "custom";
    case ModelKind::impurity: return "impurity";
    case ModelKind::ssh: return "ssh";
    case ModelKind::three_site: return "three-site";
    }
    return "custom";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "custom") return ModelKind::custom;
    if (name == "impurity") return ModelKind::impurity;
    if (name == "ssh") return ModelKind::ssh;
    if (name == "three-site") return ModelKind::three_site;
    throw SpecificationError("unknown model '" + name + "'");
}

void NetworkSpec::validate() const {
    if (sites.empty()) throw SpecificationError("network has no sites");
    if (sites.front().kind != SiteKind::qubit) {
        throw SpecificationError("site 1 must be the fiducial qubit");
    }
    for (std::size_t s = 0; s < sites.size(); ++s) {
        const auto& site = sites[s];
        const auto label = "site " + std::to_string(s + 1);
        if (!std::isfinite(site.detuning)) throw SpecificationError(label + ": detuning not finite");
        if (!std::isfinite(site.loss_rate) || site.loss_rate < 0.0) {
            throw SpecificationError(label + ": loss rate must be finite and >= 0");
        }
        if (site.kind == SiteKind::qubit && site.loss_rate != 0.0) {
            throw SpecificationError(label + ": qubits carry no loss rate");
        }
    }
    const int n = static_cast<int>(sites.size());
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.i < 1 || e.i > n || e.j < 1 || e.j > n) {
            throw SpecificationError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                     ") references a site outside 1.." + std::to_string(n));
        }
        if (e.i == e.j) throw SpecificationError("edge joins site " + std::to_string(e.i) + " to itself");
        if (!std::isfinite(e.amplitude)) throw SpecificationError("edge amplitude not finite");
        if (sites[e.i - 1].kind == SiteKind::qubit && sites[e.j - 1].kind == SiteKind::qubit) {
            throw SpecificationError("qubit-qubit hopping is not part of the model");
        }
        if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) {
            throw SpecificationError("duplicate edge (" + std::to_string(e.i) + "," +
                                     std::to_string(e.j) + ")");
        }
    }
}

RVector EffectiveHamiltonian::loss_rates() const {
    return -2.0 * matrix.diagonal().imag();
}

CMatrix EffectiveHamiltonian::hermitian_part() const {
    return 0.5 * (matrix + matrix.adjoint());
}

void check_dissipative(const EffectiveHamiltonian& h, double eps_rel) {
    const CMatrix& m = h.matrix;
    if (m.rows() != m.cols() || m.rows() == 0) throw SpecificationError("H must be square and non-empty");
    const CMatrix anti = 0.5 * (m - m.adjoint());
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j && std::abs(anti(i, j)) > 1e-14 * scale) {
                throw SpecificationError("anti-Hermitian part of H is not diagonal");
            }
        }
        if (m(i, i).imag() > 0.0) throw SpecificationError("H has a gain site (Im H_jj > 0)");
    }
    Eigen::ComplexEigenSolver<CMatrix> solver(h.generator(), false);
    const double bound = eps_rel * m.cwiseAbs().maxCoeff();
    if (solver.eigenvalues().real().maxCoeff() > bound) {
        throw SpecificationError("L~ has an eigenvalue with positive real part");
    }
}

EffectiveHamiltonian build_effective_hamiltonian(const NetworkSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.sites.size());
    EffectiveHamiltonian h;
    h.matrix = CMatrix::Zero(n, n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const auto& site = spec.sites[static_cast<std::size_t>(s)];
        h.matrix(s, s) = Complex(site.detuning, -0.5 * site.loss_rate);
    }
    for (const auto& e : spec.edges) set_bond(h.matrix, e.i - 1, e.j - 1, e.amplitude);
    h.provenance.model = ModelKind::custom;
    h.provenance.params["N"] = static_cast<double>(n);
    return h;
}

EffectiveHamiltonian build_impurity_model(int n_sites, double J, double kappa, double gamma) {
    require_size(n_sites, 2, "impurity model");
    if (gamma < 0.0) throw SpecificationError("impurity model: Gamma must be >= 0");
    EffectiveHamiltonian h;
    h.matrix = CMatrix::Zero(n_sites, n_sites);
    set_bond(h.matrix, 0, 1, kappa);
    for (Eigen::Index s = 1; s < n_sites; ++s) {
        h.matrix(s, s) = Complex(0.0, -0.5 * gamma);
        if (s + 1 < n_sites) set_bond(h.matrix, s, s + 1, J);
    }
    h.provenance = {ModelKind::impurity,
                    {{"N", n_sites}, {"J", J}, {"kappa", kappa}, {"gamma", gamma}},
                    1};
    return h;
}

EffectiveHamiltonian build_ssh_model(int n_sites, double J1, double J2, double gamma) {
    require_size(n_sites, 2, "SSH model");
    EffectiveHamiltonian h;
    h.matrix = CMatrix::Zero(n_sites, n_sites);
    for (Eigen::Index s = 0; s < n_sites; ++s) {
        // 0-based odd index == 1-based even site
        if (s % 2 == 1) h.matrix(s, s) = Complex(0.0, -gamma);
        if (s + 1 < n_sites) set_bond(h.matrix, s, s + 1, s % 2 == 0 ? J1 : J2);
    }
    h.provenance = {ModelKind::ssh,
                    {{"N", n_sites}, {"J1", J1}, {"J2", J2}, {"gamma", gamma}},
                    2};
    return h;
}

EffectiveHamiltonian build_three_site_model(int n_sites, const ThreeSiteParams& p) {
    require_size(n_sites, 3, "three-site model");
    EffectiveHamiltonian h;
    h.matrix = CMatrix::Zero(n_sites, n_sites);
    auto bond = [&](Eigen::Index a, Eigen::Index b, double amplitude) {
        if (b < n_sites) set_bond(h.matrix, a, b, amplitude);
    };
    for (Eigen::Index s = 0; s < n_sites; ++s) {
        switch (s % 3) {
        case 0:
            h.matrix(s, s) = p.eps1;
            bond(s, s + 1, p.J1);
            bond(s, s + 2, p.J);
            break;
        case 1:
            h.matrix(s, s) = p.eps2;
            bond(s, s + 1, p.J2);
            break;
        default:
            h.matrix(s, s) = Complex(0.0, -p.gamma);
            bond(s, s + 1, p.J3);
            break;
        }
    }
    h.provenance = {ModelKind::three_site,
                    {{"N", n_sites},
                     {"J1", p.J1},
                     {"J2", p.J2},
                     {"J3", p.J3},
                     {"J", p.J},
                     {"eps1", p.eps1},
                     {"eps2", p.eps2},
                     {"gamma", p.gamma}},
                    3};
    return h;
}

EffectiveHamiltonian apply_detuning_disorder(const EffectiveHamiltonian& h,
                                             std::span<const double> mu_values) {
    if (static_cast<Eigen::Index>(mu_values.size()) != h.dim()) {
        throw SpecificationError("disorder vector has length " + std::to_string(mu_values.size()) +
                                 ", H has dimension " + std::to_string(h.dim()));
    }
    EffectiveHamiltonian out = h;
    for (Eigen::Index s = 0; s < h.dim(); ++s) {
        out.matrix(s, s) += mu_values[static_cast<std::size_t>(s)];
    }
    return out;
}

} // namespace nhtop::netmodel
