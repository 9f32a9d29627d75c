#include "nhtop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "nhtop/fit.hpp"

namespace nhtop::spectral {

namespace {

constexpr double kClusterTol = 1e-9;
constexpr double kProfileFloor = 1e-14;

std::vector<int> cluster_ids(const CVector& ev) {
    const auto n = ev.size();
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(ev(i) - ev(j)) < kClusterTol) {
                parent[find(static_cast<int>(j))] = find(static_cast<int>(i));
            }
        }
    }
    // Renumber in order of first appearance.
    std::vector<int> ids(static_cast<std::size_t>(n), -1), remap(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int root = find(static_cast<int>(i));
        if (remap[root] < 0) remap[root] = next++;
        ids[i] = remap[root];
    }
    return ids;
}

void check_site(const SpectralData& sd, int site) {
    if (site < 1 || site > sd.size()) {
        throw SpecificationError("site " + std::to_string(site) + " out of range 1.." +
                                 std::to_string(sd.size()));
    }
}

} // namespace

SpectralData decompose(const netmodel::EffectiveHamiltonian& h) {
    const CMatrix gen = h.generator();
    if (!gen.allFinite()) throw NumericError("decompose: H has non-finite entries");
    Eigen::ComplexEigenSolver<CMatrix> solver(gen, true);
    if (solver.info() != Eigen::Success) throw NumericError("decompose: eigensolver failed");

    const auto n = gen.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const CVector& ev = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (ev(a).real() != ev(b).real()) return ev(a).real() > ev(b).real();
        return ev(a).imag() < ev(b).imag();
    });

    SpectralData sd;
    sd.cell_size = h.provenance.cell_size;
    sd.eigenvalues.resize(n);
    sd.right.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        sd.eigenvalues(j) = ev(order[static_cast<std::size_t>(j)]);
        sd.right.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]).normalized();
    }

    Eigen::BDCSVD<CMatrix> svd(sd.right);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    sd.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    sd.near_defective = !(sd.condition <= kDefectiveCondition);

    // Rows of R^{-1} are l_j^dagger.
    const CMatrix rinv = sd.right.fullPivLu().inverse();
    sd.left = rinv.adjoint();
    sd.cluster = cluster_ids(sd.eigenvalues);
    return sd;
}

CVector overlap_weights(const SpectralData& sd, int site) {
    check_site(sd, site);
    const auto s = site - 1;
    CVector c(sd.size());
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        c(j) = sd.right(s, j) * std::conj(sd.left(s, j));
    }
    return c;
}

std::vector<ClusterWeight> clustered_weights(const SpectralData& sd, int site) {
    const CVector c = overlap_weights(sd, site);
    const int n_clusters = sd.cluster.empty() ? 0 : *std::max_element(sd.cluster.begin(), sd.cluster.end()) + 1;
    std::vector<ClusterWeight> out(static_cast<std::size_t>(n_clusters));
    for (auto& w : out) {
        w.multiplicity = 0;
        w.weight = 0.0;
        w.eigenvalue = 0.0;
    }
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        auto& w = out[static_cast<std::size_t>(sd.cluster[j])];
        w.weight += c(j);
        w.eigenvalue += sd.eigenvalues(j);
        ++w.multiplicity;
    }
    for (auto& w : out) w.eigenvalue /= static_cast<double>(w.multiplicity);
    return out;
}

Localization localization_profile(const CVector& mode, int stride) {
    if (stride < 1) throw SpecificationError("localization_profile: stride must be >= 1");
    const double norm2 = mode.squaredNorm();
    if (!(norm2 > 0.0)) throw SpecificationError("localization_profile: zero vector");
    const RVector p = mode.cwiseAbs2() / norm2;

    Eigen::Index peak = 0;
    p.maxCoeff(&peak);
    Localization loc;
    loc.site = static_cast<int>(peak) + 1;

    std::vector<double> xs, ys;
    for (Eigen::Index n = peak % stride; n < p.size(); n += stride) {
        if (p(n) > kProfileFloor) {
            xs.push_back(static_cast<double>(n + 1));
            ys.push_back(std::log(p(n)));
        }
    }
    if (xs.size() < 3) {
        loc.length = std::numeric_limits<double>::infinity();
        loc.delocalized = true;
        return loc;
    }
    const LinearFit fit = linear_fit(xs, ys);
    loc.r_squared = fit.r_squared;
    loc.length = fit.slope == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(fit.slope);
    loc.delocalized = fit.r_squared < 0.9 || !std::isfinite(loc.length);
    return loc;
}

EdgeMode describe_mode(const SpectralData& sd, Eigen::Index j, double site1_threshold) {
    if (j < 0 || j >= sd.size()) throw SpecificationError("describe_mode: index out of range");
    EdgeMode m;
    m.index = j;
    m.eigenvalue = sd.eigenvalues(j);
    m.decay_rate = sd.decay_rate(j);
    const Localization loc = localization_profile(sd.right.col(j), sd.cell_size);
    m.localization_site = loc.site;
    m.localization_length = loc.length;
    m.delocalized = loc.delocalized;
    m.overlap_site1 = std::abs(sd.right(0, j) * std::conj(sd.left(0, j)));
    m.site1_population = std::norm(sd.right(0, j));
    m.localized_at_qubit = loc.site <= sd.cell_size && m.overlap_site1 > site1_threshold;
    return m;
}

std::vector<EdgeMode> find_quasi_dark_modes(const SpectralData& sd, double eps_dark,
                                            double site1_threshold) {
    if (!(eps_dark > 0.0)) throw SpecificationError("eps_dark must be > 0");
    std::vector<EdgeMode> modes;
    // Eigenvalues are already sorted by decay rate.
    for (Eigen::Index j = 0; j < sd.size() && sd.decay_rate(j) < eps_dark; ++j) {
        modes.push_back(describe_mode(sd, j, site1_threshold));
    }
    return modes;
}

double default_eps_dark(const netmodel::EffectiveHamiltonian& h) {
    const auto& params = h.provenance.params;
    const auto it = params.find("gamma");
    const double gamma = it != params.end() ? it->second : h.loss_rates().maxCoeff();
    return gamma > 0.0 ? 1e-3 * gamma : 1e-3;
}

void write_spectrum_csv(std::ostream& out, const SpectralData& sd) {
    out << "index,re_lambda,im_lambda,decay_rate,overlap_site1,localization_site,localization_length\n";
    char buf[256];
    for (Eigen::Index j = 0; j < sd.size(); ++j) {
        const EdgeMode m = describe_mode(sd, j);
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n",
                      static_cast<long>(j + 1), m.eigenvalue.real(), m.eigenvalue.imag(),
                      m.decay_rate, m.overlap_site1, m.localization_site, m.localization_length);
        out << buf;
    }
}

} // namespace nhtop::spectral
