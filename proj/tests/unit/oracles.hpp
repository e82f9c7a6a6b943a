#pragma once

// Independent reference computations used only by tests.

#include "laxhvac/thermal.hpp"

#include <Eigen/Dense>

namespace oracle {

/// Heun (explicit trapezoid) integration of dx/dt = a (x_out - x) + b u.
inline double integrate_zone(double x, double u, double x_out, const laxhvac::ZoneParams& p,
                             int substeps) {
    const double h = p.dt / substeps;
    auto f = [&](double v) { return p.a * (x_out - v) + p.b * u; };
    for (int i = 0; i < substeps; ++i) {
        const double k1 = f(x);
        const double k2 = f(x + h * k1);
        x += 0.5 * h * (k1 + k2);
    }
    return x;
}

/// Closed-form solution of a coupled building via the matrix exponential of
/// the augmented system [A, g; 0, 0], computed by scaling and squaring.
inline Eigen::VectorXd building_exact(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                      double x_out, const laxhvac::BuildingParams& p) {
    const auto n = x.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = p.system_matrix();
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& z = p.zones[static_cast<std::size_t>(i)];
        m(i, n) = z.efficiency / z.capacity * u(i) + x_out / (z.resistance * z.capacity);
    }
    m *= p.dt;
    int squarings = 0;
    while (m.cwiseAbs().rowwise().sum().maxCoeff() > 0.01) {
        m /= 2.0;
        ++squarings;
    }
    Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n + 1, n + 1);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n + 1, n + 1);
    for (int k = 1; k <= 20; ++k) {
        term = term * m / k;
        e += term;
    }
    for (int s = 0; s < squarings; ++s) {
        e = e * e;
    }
    Eigen::VectorXd aug(n + 1);
    aug.head(n) = x;
    aug(n) = 1.0;
    return (e * aug).head(n);
}

}  // namespace oracle
