#include "platform_eq/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace peq {

const char* side_name(Side s) { return s == Side::Buyer ? "b" : "s"; }

bool MarketParams::integer_n() const {
    return std::isfinite(n_platforms) && n_platforms == std::floor(n_platforms);
}

int MarketParams::n_int() const {
    if (!integer_n()) throw InvalidArgument("number of platforms must be an integer here");
    return static_cast<int>(n_platforms);
}

void MarketParams::validate() const {
    if (!std::isfinite(n_platforms) || n_platforms < 2.0)
        throw InvalidArgument("n_platforms must be >= 2");
    for (int k = 0; k < 2; ++k) {
        if (!std::isfinite(beta[k]) || beta[k] <= 0.0) throw InvalidArgument("beta must be positive");
        if (!std::isfinite(mu[k]) || !std::isfinite(u0[k])) throw InvalidArgument("non-finite mu or u0");
    }
    if (!phi.allFinite()) throw InvalidArgument("non-finite externality matrix");
}

MarketParams base_case() { return MarketParams{}; }

double existence_coef(double N) { return 2.0 * (N - 1.0) / (N * N); }
double ce_existence_coef(double N) { return 8.0 / (27.0 * N); }

bool cne_exists(double N, double beta_k, double phi_kk) {
    if (beta_k <= 0.0) return false;
    return phi_kk <= 0.0 || beta_k > existence_coef(N) * phi_kk;
}

bool ce_exists(double N, double beta_k, double phi_kk) {
    if (beta_k <= 0.0) return false;
    return phi_kk <= 0.0 || beta_k > ce_existence_coef(N) * phi_kk;
}

std::array<bool, 2> check_cne_existence(const MarketParams& p) {
    return {cne_exists(p.N(), p.beta[0], p.phi(0, 0)), cne_exists(p.N(), p.beta[1], p.phi(1, 1))};
}

std::array<bool, 2> check_ce_existence(const MarketParams& p) {
    return {ce_exists(p.N(), p.beta[0], p.phi(0, 0)), ce_exists(p.N(), p.beta[1], p.phi(1, 1))};
}

double Cubic::scale() const {
    return std::max({1.0, std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
}

namespace {

double polish(const Cubic& c, double x) {
    double fx = c(x);
    for (int it = 0; it < 50 && fx != 0.0; ++it) {
        double d = c.derivative(x);
        if (d == 0.0) break;
        double nx = x - fx / d;
        double nf = c(nx);
        if (!(std::abs(nf) < std::abs(fx))) break;
        x = nx;
        fx = nf;
    }
    return x;
}

struct Depressed {
    double b, t, s;
};

Depressed depress(const Cubic& c) {
    double b = c.c2 / c.c3, cc = c.c1 / c.c3, d = c.c0 / c.c3;
    double t = cc - b * b / 3.0;
    double s = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    return {b, t, s};
}

}  // namespace

double cubic_discriminant(const Cubic& c) {
    if (c.c3 == 0.0) throw InvalidArgument("not a cubic");
    auto [b, t, s] = depress(c);
    (void)b;
    return (s / 2.0) * (s / 2.0) + (t / 3.0) * (t / 3.0) * (t / 3.0);
}

std::vector<double> solve_cubic_real(const Cubic& c) {
    std::vector<double> roots;
    if (c.c3 == 0.0) {
        if (c.c2 == 0.0) {
            if (c.c1 == 0.0) throw InvalidArgument("degenerate polynomial");
            roots.push_back(-c.c0 / c.c1);
            return roots;
        }
        double disc = c.c1 * c.c1 - 4.0 * c.c2 * c.c0;
        if (disc < 0.0) return roots;
        double q = -0.5 * (c.c1 + std::copysign(std::sqrt(disc), c.c1));
        if (q != 0.0) {
            roots.push_back(q / c.c2);
            roots.push_back(c.c0 / q);
        } else {
            roots.push_back(0.0);
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        return roots;
    }

    auto [b, t, s] = depress(c);
    double delta = (s / 2.0) * (s / 2.0) + (t / 3.0) * (t / 3.0) * (t / 3.0);
    double unit = std::max({std::abs(b), std::sqrt(std::abs(t)), std::cbrt(std::abs(s))});
    double scale6 = std::pow(std::max(unit, 1e-300), 6);

    if (std::abs(delta) <= 1e-14 * scale6) {
        // Repeated root: y = 3s/t is simple, -3s/(2t) is double; t ~ 0 is a triple root.
        if (std::abs(t) <= 1e-12 * unit * unit) {
            roots.push_back(-b / 3.0);
        } else {
            roots.push_back(3.0 * s / t - b / 3.0);
            roots.push_back(-1.5 * s / t - b / 3.0);
        }
    } else if (delta < 0.0) {
        double r = 2.0 * std::sqrt(-t / 3.0);
        double cos_theta = (-s / 2.0) / std::sqrt(-(t / 3.0) * (t / 3.0) * (t / 3.0));
        double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
        for (int j = 0; j < 3; ++j)
            roots.push_back(r * std::cos((theta + 2.0 * std::numbers::pi * j) / 3.0) - b / 3.0);
    } else {
        double sq = std::sqrt(delta);
        double y = std::cbrt(-s / 2.0 + sq) + std::cbrt(-s / 2.0 - sq);
        roots.push_back(y - b / 3.0);
    }
    for (double& r : roots) r = polish(c, r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace peq
