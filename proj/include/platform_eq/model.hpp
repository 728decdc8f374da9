#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace peq {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Base error for everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical method failed to produce an answer (bracket, divergence, non-convergence).
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what, double last_residual = 0.0)
        : Error(what), residual(last_residual) {}
    double residual;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

enum class Side { Buyer = 0, Seller = 1 };

constexpr int idx(Side s) { return static_cast<int>(s); }
constexpr Side other(Side s) { return s == Side::Buyer ? Side::Seller : Side::Buyer; }
const char* side_name(Side s);
inline constexpr std::array<Side, 2> kSides{Side::Buyer, Side::Seller};

constexpr double kEulerGamma = 0.5772156649015329;

struct MarketParams {
    // Number of platforms. Real valued so that N can be perturbed continuously;
    // the stage-2 share system requires an integer value.
    double n_platforms = 2.0;
    Vec2 beta{1.0, 1.0};
    Vec2 mu{0.0, 0.0};
    // Rows are the receiving side: phi(b, .) = (phi_bb, phi_bs), phi(s, .) = (phi_sb, phi_ss).
    Mat2 phi = Mat2::Zero();
    Vec2 u0{0.0, 0.0};

    double N() const { return n_platforms; }
    double phi_kk(Side k) const { return phi(idx(k), idx(k)); }
    bool cross_free() const { return phi(0, 1) == 0.0 && phi(1, 0) == 0.0; }
    bool integer_n() const;
    int n_int() const;

    // Throws InvalidArgument when beta <= 0, N < 2 or any entry is non-finite.
    void validate() const;
};

MarketParams base_case();

// f(N) = 2(N-1)/N^2
double existence_coef(double N);
// 8/(27N)
double ce_existence_coef(double N);

bool cne_exists(double N, double beta_k, double phi_kk);
bool ce_exists(double N, double beta_k, double phi_kk);
std::array<bool, 2> check_cne_existence(const MarketParams& p);
std::array<bool, 2> check_ce_existence(const MarketParams& p);

struct Cubic {
    double c3 = 0, c2 = 0, c1 = 0, c0 = 0;
    double operator()(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
    double derivative(double x) const { return (3 * c3 * x + 2 * c2) * x + c1; }
    double scale() const;
};

// All real roots in ascending order. Three-root case uses the trigonometric form,
// one-root case the radical form; every root is Newton polished.
std::vector<double> solve_cubic_real(const Cubic& c);

// Discriminant (s/2)^2 + (t/3)^3 of the depressed, monic form.
double cubic_discriminant(const Cubic& c);

}  // namespace peq
