#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "platform_eq/model.hpp"

namespace peq {

// Polynomial families in t = e^{z} used by the decoupled (no cross externality)
// comparative statics. Y is the exception: it is a cubic in beta.
enum class CoeffFamily {
    A,       // numerator of -dM/dz
    S,       // second-order condition
    NPu,     // dp/du0 numerator
    DPu,     // dp/du0 denominator (same as A)
    NPiu,
    DPiu,
    NCSu,
    DCSu,    // same as DPu
    NP,      // dp/dN numerator
    D,       // dp/dN denominator (same as A)
    NNx,
    DNx,     // same as DPiu
    NCSk,
    DCSk,    // (N+1) * A
    NPik,    // needs u0 and z*
    DPik,    // same as DPiu
    Y,
};

struct CoeffSeries {
    CoeffFamily family = CoeffFamily::A;
    int start = 0;  // power of t carried by coefficients[0]
    std::vector<double> coefficients;
    double beta = 0, phi = 0, N = 0;
    std::optional<double> u0, z;

    int end() const { return start + static_cast<int>(coefficients.size()) - 1; }
    double coef(int m) const;  // by series index m; zero outside [start, end]
    // t^start * sum_i c_i t^i, Horner in t.
    double evaluate(double t) const;
};

const char* coeff_family_name(CoeffFamily f);
CoeffFamily coeff_family_from_name(std::string_view name);

CoeffSeries build_coeffs(CoeffFamily family, double beta, double phi_kk, double N,
                         std::optional<double> u0 = std::nullopt, std::optional<double> z = std::nullopt);
CoeffSeries build_coeffs(CoeffFamily family, const MarketParams& params, Side side,
                         std::optional<double> z = std::nullopt);

}  // namespace peq
