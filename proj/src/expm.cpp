// Higham's scaling-and-squaring algorithm with the [13/13] Pade approximant.

#include <array>
#include <cmath>

#include "nhtop/dynamics.hpp"

namespace nhtop::dynamics {

namespace {

constexpr double kTheta13 = 5.371920351148152;

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

} // namespace

CMatrix expm(const CMatrix& a) {
    if (a.rows() != a.cols()) throw SpecificationError("expm: matrix must be square");
    if (!a.allFinite()) throw NumericError("expm: non-finite input");
    const auto n = a.rows();
    if (n == 0) return a;
    if (a.cwiseAbs().maxCoeff() == 0.0) return CMatrix::Identity(n, n);

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm1 > kTheta13) s = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    const CMatrix as = a / std::ldexp(1.0, s);

    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix a2 = as * as;
    const CMatrix a4 = a2 * a2;
    const CMatrix a6 = a4 * a2;
    const auto& b = kPade13;

    const CMatrix u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    const CMatrix u = as * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const CMatrix v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    const CMatrix v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    CMatrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k) r = r * r;
    if (!r.allFinite()) throw NumericError("expm: overflow");
    return r;
}

} // namespace nhtop::dynamics
