#include "nhtop/superoperator.hpp"

namespace nhtop::netmodel {

namespace {

Superoperator assemble(const CMatrix& h0, const RVector& gammas) {
    const int n = static_cast<int>(h0.rows());
    const Eigen::Index m = n + 1;
    Superoperator sop;
    sop.n_sites = n;
    sop.matrix = CMatrix::Zero(m * m, m * m);

    // Extended operators on {|0>, |1>, ..., |N>}; the vacuum has no energy and no loss.
    CMatrix hf = CMatrix::Zero(m, m);
    hf.bottomRightCorner(n, n) = h0;
    RVector gf = RVector::Zero(m);
    gf.tail(n) = gammas;

    auto index = [&](Eigen::Index a, Eigen::Index b) -> Eigen::Index {
        if (a == 0) return b;
        if (b == 0) return n + a;
        return 2 * n + (a - 1) * n + b;
    };

    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            const Eigen::Index col = index(a, b);
            if (a == 0 && b == 0) continue;
            // -i[H, |a><b|] = -i sum_c H_ca |c><b| + i sum_c H_bc |a><c|
            for (Eigen::Index c = 0; c < m; ++c) {
                if (hf(c, a) != Complex(0.0)) sop.matrix(index(c, b), col) += -kI * hf(c, a);
                if (hf(b, c) != Complex(0.0)) sop.matrix(index(a, c), col) += kI * hf(b, c);
            }
            sop.matrix(col, col) += -0.5 * (gf(a) + gf(b));
            if (a == b) sop.matrix(0, col) += gf(a);
        }
    }
    return sop;
}

} // namespace

Block Superoperator::block_of(Eigen::Index index) const {
    if (index == 0) return Block::v00;
    if (index <= n_sites) return Block::v01;
    if (index <= 2 * n_sites) return Block::v10;
    return Block::v11;
}

CMatrix Superoperator::block(Block to, Block from) const {
    auto range = [&](Block b) -> std::pair<Eigen::Index, Eigen::Index> {
        switch (b) {
        case Block::v00: return {0, 1};
        case Block::v01: return {1, n_sites};
        case Block::v10: return {1 + n_sites, n_sites};
        case Block::v11: return {1 + 2 * n_sites, static_cast<Eigen::Index>(n_sites) * n_sites};
        }
        return {0, 0};
    };
    const auto [r0, rn] = range(to);
    const auto [c0, cn] = range(from);
    return matrix.block(r0, c0, rn, cn);
}

bool block_allowed(Block to, Block from) {
    if (to == Block::v00) return from == Block::v11;
    return to == from;
}

Superoperator build_full_superoperator(const NetworkSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.sites.size());
    CMatrix h0 = CMatrix::Zero(n, n);
    RVector gammas(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const auto& site = spec.sites[static_cast<std::size_t>(s)];
        h0(s, s) = site.detuning;
        gammas(s) = site.loss_rate;
    }
    for (const auto& e : spec.edges) {
        h0(e.i - 1, e.j - 1) = e.amplitude;
        h0(e.j - 1, e.i - 1) = e.amplitude;
    }
    return assemble(h0, gammas);
}

Superoperator build_full_superoperator(const EffectiveHamiltonian& h) {
    const RVector gammas = h.loss_rates();
    if ((gammas.array() < 0.0).any()) throw SpecificationError("H has a site with gain");
    return assemble(h.hermitian_part(), gammas);
}

} // namespace nhtop::netmodel
