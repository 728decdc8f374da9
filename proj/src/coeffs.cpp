#include "platform_eq/coeffs.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace peq {

namespace {

struct FamilyInfo {
    CoeffFamily family;
    const char* name;
};

constexpr std::array<FamilyInfo, 17> kFamilies{{
    {CoeffFamily::A, "a"},
    {CoeffFamily::S, "s"},
    {CoeffFamily::NPu, "n_pu"},
    {CoeffFamily::DPu, "d_pu"},
    {CoeffFamily::NPiu, "n_piu"},
    {CoeffFamily::DPiu, "d_piu"},
    {CoeffFamily::NCSu, "n_csu"},
    {CoeffFamily::DCSu, "d_csu"},
    {CoeffFamily::NP, "n_p"},
    {CoeffFamily::D, "d"},
    {CoeffFamily::NNx, "n_Nx"},
    {CoeffFamily::DNx, "d_Nx"},
    {CoeffFamily::NCSk, "n_CSk"},
    {CoeffFamily::DCSk, "d_CSk"},
    {CoeffFamily::NPik, "n_pik"},
    {CoeffFamily::DPik, "d_pik"},
    {CoeffFamily::Y, "y"},
}};

std::vector<double> a_coeffs(double b, double f, double N) {
    return {
        b * b * b,
        b * b * (b * (6 * N - 1) - 4 * f),
        b * (b * b * (15 * N * N - 6 * N + 1) + 4 * b * (1 - 4 * N) * f + 5 * f * f),
        2 * N * b * b * b * (10 * N * N - 7 * N + 2) + b * b * f * (-24 * N * N + 11 * N - 1) +
            b * f * f * (10 * N - 3) - 2 * f * f * f,
        b * N * (N * b * b * (15 * N * N - 16 * N + 6) + b * f * (-16 * N * N + 10 * N - 2) + (5 * N - 2) * f * f),
        b * N * N * (N * b * b * (6 * N * N - 9 * N + 4) + b * f * (-4 * N * N + 3 * N - 1) + f * f),
        b * b * b * (N - 1) * (N - 1) * N * N * N * N,
    };
}

std::vector<double> s_coeffs(double b, double f, double N) {
    const double b2 = b * b, b3 = b2 * b, b4 = b3 * b, f2 = f * f, f3 = f2 * f, f4 = f3 * f;
    const double N2 = N * N, N3 = N2 * N, N4 = N3 * N;
    return {
        -b4,
        b3 * (5 * f + b * (1 - 7 * N)),
        -3 * b2 * (b2 * N * (7 * N - 2) + b * f * (2 - 9 * N) + 3 * f2),
        b * (5 * b3 * N2 * (3 - 7 * N) + 4 * b2 * (N * (15 * N - 7) + 1) * f + 3 * b * (3 - 11 * N) * f2 + 7 * f3),
        5 * b4 * N3 * (4 - 7 * N) + 2 * b3 * N * (N * (35 * N - 26) + 7) * f + b2 * ((26 - 45 * N) * N - 5) * f2 +
            b * (13 * N - 4) * f3 - 2 * f4,
        b * (3 * b3 * (5 - 7 * N) * N4 + 3 * b2 * (N * (15 * N - 16) + 6) * N2 * f +
             b * ((25 - 27 * N) * N - 10) * N * f2 + (6 * N2 - 4 * N + 1) * f3),
        b * N * (b3 * (6 - 7 * N) * N4 + b2 * (N * (15 * N - 22) + 10) * N2 * f + b * (-6 * N2 + 8 * N - 5) * N * f2 + f3),
        -b3 * (N - 1) * N4 * (b * N2 + 2 * (1 - N) * f),
    };
}

std::vector<double> npu_coeffs(double b, double f, double N) {
    return {
        b * b * (b - f),
        2 * b * (2 * b * b * N - 2 * b * N * f + f * f),
        6 * b * b * b * N * N - N * b * b * (6 * N + 1) * f + f * f * b * (4 * N - 1) - f * f * f,
        2 * b * N * N * (b - f) * (2 * b * N - f),
        b * N * N * (b * b * N * N - f * N * b * (N + 1) + f * f),
    };
}

std::vector<double> npiu_coeffs(double b, double f, double N) {
    return {
        b * b * b,
        b * b * (5 * b * N - 4 * f),
        b * (10 * b * b * N * N + 2 * b * (1 - 7 * N) * f + 5 * f * f),
        10 * b * b * b * N * N * N + 2 * N * b * b * (2 - 9 * N) * f + b * (9 * N - 2) * f * f - 2 * f * f * f,
        b * N * (5 * b * b * N * N * N + 2 * N * b * (1 - 5 * N) * f + (4 * N - 1) * f * f),
        b * N * N * (b * b * N * N * N - 2 * b * N * N * f + f * f),
    };
}

std::vector<double> dpiu_coeffs(double b, double f, double N) {
    const double b2 = b * b, b3 = b2 * b, f2 = f * f, f3 = f2 * f, N2 = N * N;
    return {
        b3,
        b2 * (b * (7 * N - 1) - 4 * f),
        b * (b2 * (21 * N2 - 7 * N + 1) + 4 * b * (1 - 5 * N) * f + 5 * f2),
        N * b3 * (35 * N2 - 20 * N + 5) + b2 * (-40 * N2 + 15 * N - 1) * f + b * (15 * N - 3) * f2 - 2 * f3,
        N2 * b3 * (35 * N2 - 30 * N + 10) + N * b2 * (-40 * N2 + 21 * N - 3) * f + 5 * N * b * (3 * N - 1) * f2 -
            2 * N * f3,
        b * N2 * (N * b2 * (21 * N2 - 25 * N + 10) + b * (-20 * N2 + 13 * N - 3) * f + (5 * N - 1) * f2),
        b * N2 * N * (N * b2 * (7 * N2 - 11 * N + 5) + b * (-4 * N2 + 3 * N - 1) * f + f2),
        b3 * (N - 1) * (N - 1) * N2 * N2 * N,
    };
}

std::vector<double> ncsu_coeffs(double b, double f, double N) {
    const double N2 = N * N;
    return {
        b * b * (b - 2 * f),
        2 * b * (2 * b * b * N + b * (1 - 4 * N) * f + 2 * f * f),
        6 * b * b * b * N2 + b * b * (-12 * N2 + 5 * N - 1) * f + b * (8 * N - 3) * f * f - 2 * f * f * f,
        2 * b * N * (2 * b * b * N2 + b * (-4 * N2 + 2 * N - 1) * f + (2 * N - 1) * f * f),
        b * N2 * (b * b * N2 + b * (-2 * N2 + N - 1) * f + f * f),
    };
}

std::vector<double> np_coeffs(double b, double f, double N) {
    const double b2 = b * b, b3 = b2 * b, f2 = f * f, N2 = N * N;
    return {
        b3 * (f - b),
        -b2 * (4 * b2 * N + b * f * (1 - 4 * N) + 2 * f2),
        b * (-6 * b3 * N2 + 2 * b2 * f * N * (3 * N - 1) + b * f2 * (3 - 4 * N) + f2 * f),
        -b * (4 * b3 * N2 * N + b2 * f * N2 * (1 - 4 * N) + b * f2 * N * (2 * N - 3) + f2 * f),
        b3 * N2 * N2 * (f - b),
    };
}

std::vector<double> nnx_coeffs(double b, double f, double N) {
    const double b2 = b * b, b3 = b2 * b, f2 = f * f, N2 = N * N;
    return {
        b3,
        b2 * (b * (5 * N - 1) - 4 * f),
        b * (b2 * (10 * N2 - 4 * N + 1) + 2 * b * (2 - 7 * N) * f + 5 * f2),
        b3 * N * (10 * N2 - 6 * N + 3) + b2 * f * (-18 * N2 + 10 * N - 1) + 3 * b * f2 * (3 * N - 1) - 2 * f2 * f,
        b * N * (b2 * N * (5 * N2 - 4 * N + 3) + 2 * b * f * (-5 * N2 + 4 * N - 1) + (4 * N - 3) * f2),
        b2 * N2 * (b * N * (N2 - N + 1) - (2 * N2 - 2 * N + 1) * f),
    };
}

std::vector<double> ncsk_coeffs(double b, double f, double N) {
    const double b2 = b * b, b3 = b2 * b, b4 = b3 * b, f2 = f * f, f3 = f2 * f, N2 = N * N, N3 = N2 * N;
    return {
        b4,
        b3 * (b * (6 * N - 1) - 4 * f),
        b2 * (b2 * (15 * N2 - 5 * N + 2) + 2 * b * (1 - 9 * N) * f + 5 * f2),
        b * (b3 * N * (20 * N2 - 10 * N + 8) + b2 * f * (-32 * N2 + 6 * N + 2) + b * f2 * (14 * N + 1) - 2 * f3),
        b * (b3 * N2 * (15 * N2 - 10 * N + 12) + b2 * f * (-28 * N3 + 6 * N2 + 5 * N - 1) +
             b * f2 * (13 * N2 + 2 * N - 4) - 2 * (N + 1) * f3),
        b2 * N * (b2 * N2 * (6 * N2 - 5 * N + 8) + b * f * (-12 * N3 + 2 * N2 + 4 * N - 2) + f2 * (4 * N2 + N - 4)),
        b3 * N2 * (b * N2 * (N2 - N + 2) + (N - 1 - 2 * N3) * f),
    };
}

std::vector<double> npik_coeffs(double b, double f, double N, double u, double z) {
    const double b2 = b * b, b3 = b2 * b, f2 = f * f, N2 = N * N, N3 = N2 * N;
    return {
        b3 * (u + b * z),
        b2 * (b2 * ((5 * N - 2) * z - 1) + b * ((5 * N - 2) * u - 2 * z * f) - 2 * u * f),
        b * (b3 * (10 * N2 * z - 2 * N * (4 * z + 2) + z) + b2 * ((10 * N2 - 8 * N + 1) * u + (z + 1 - 6 * N * z) * f)) +
            b * (b * (u * (1 - 6 * N) * f + z * f2) + u * f2),
        b * (b3 * N * (10 * N2 * z - 12 * N * z - 6 * N + 3 * z) +
             b2 * (N * (10 * N2 - 12 * N + 3) * u + (2 * N * z + 4 * N - 1) * f - 6 * N2 * z * f)) +
            b * (b * f * (N * (2 - 6 * N) * u + (N * z + z + 2) * f) + (N + 1) * u * f2),
        b * (b3 * N2 * (5 * N2 * z - 2 * N * (4 * z + 2) + 3 * z) +
             b2 * (N2 * (5 * N2 - 8 * N + 3) * u + (N2 * z - 2 * N3 * z + 5 * N2 - 2 * N) * f)) +
            b * (b * f * N * (-2 * N2 * u + N * u + (z + 2) * f) + (N * u - 2 * f) * f2),
        b3 * N2 * (b * N * (N2 * z - 2 * N * z + z - N) + N * u + 2 * N * f - f + N3 * u - 2 * N2 * u),
    };
}

// Cubic in beta, lowest power first.
std::vector<double> y_coeffs(double f, double N) {
    const double N2 = N * N, N3 = N2 * N, N4 = N3 * N, N5 = N4 * N, N6 = N5 * N;
    return {
        -4 * (N + 2) * f * f * f,
        4 * (2 * N3 + 7 * N2 + 6 * N + 1) * f * f,
        -(2 * N5 + 24 * N4 + 51 * N3 + 45 * N2 + 18 * N + 2) * f,
        N6 + 11 * N5 + 22 * N4 + 36 * N3 + 34 * N2 + 18 * N + 3,
    };
}

}  // namespace

double CoeffSeries::coef(int m) const {
    if (m < start || m > end()) return 0.0;
    return coefficients[m - start];
}

double CoeffSeries::evaluate(double t) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
    return start == 0 ? acc : acc * std::pow(t, start);
}

const char* coeff_family_name(CoeffFamily f) {
    for (const auto& info : kFamilies)
        if (info.family == f) return info.name;
    return "?";
}

CoeffFamily coeff_family_from_name(std::string_view name) {
    for (const auto& info : kFamilies)
        if (name == info.name) return info.family;
    throw InvalidArgument("unknown coefficient family: " + std::string(name));
}

CoeffSeries build_coeffs(CoeffFamily family, double beta, double phi_kk, double N, std::optional<double> u0,
                         std::optional<double> z) {
    CoeffSeries out;
    out.family = family;
    out.beta = beta;
    out.phi = phi_kk;
    out.N = N;
    const double b = beta, f = phi_kk;
    switch (family) {
        case CoeffFamily::A:
        case CoeffFamily::DPu:
        case CoeffFamily::DCSu:
        case CoeffFamily::D:
            out.coefficients = a_coeffs(b, f, N);
            break;
        case CoeffFamily::S:
            out.coefficients = s_coeffs(b, f, N);
            break;
        case CoeffFamily::NPu:
            out.start = 1;
            out.coefficients = npu_coeffs(b, f, N);
            break;
        case CoeffFamily::NPiu:
            out.start = 1;
            out.coefficients = npiu_coeffs(b, f, N);
            break;
        case CoeffFamily::DPiu:
        case CoeffFamily::DNx:
        case CoeffFamily::DPik:
            out.coefficients = dpiu_coeffs(b, f, N);
            break;
        case CoeffFamily::NCSu:
            out.start = 1;
            out.coefficients = ncsu_coeffs(b, f, N);
            break;
        case CoeffFamily::NP:
            out.start = 2;
            out.coefficients = np_coeffs(b, f, N);
            break;
        case CoeffFamily::NNx:
            out.start = 1;
            out.coefficients = nnx_coeffs(b, f, N);
            break;
        case CoeffFamily::NCSk:
            out.coefficients = ncsk_coeffs(b, f, N);
            break;
        case CoeffFamily::DCSk:
            out.coefficients = a_coeffs(b, f, N);
            for (double& c : out.coefficients) c *= N + 1.0;
            break;
        case CoeffFamily::NPik:
            if (!u0 || !z) throw InvalidArgument("coefficient family n_pik needs u0 and z*");
            out.start = 2;
            out.u0 = u0;
            out.z = z;
            out.coefficients = npik_coeffs(b, f, N, *u0, *z);
            break;
        case CoeffFamily::Y:
            out.coefficients = y_coeffs(f, N);
            break;
        default:
            throw InvalidArgument("unknown coefficient family");
    }
    return out;
}

CoeffSeries build_coeffs(CoeffFamily family, const MarketParams& params, Side side, std::optional<double> z) {
    const int k = idx(side);
    return build_coeffs(family, params.beta[k], params.phi(k, k), params.N(), params.u0[k], z);
}

}  // namespace peq
