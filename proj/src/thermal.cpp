#include "laxhvac/thermal.hpp"

#include "laxhvac/error.hpp"

#include <cmath>
#include <string>

namespace laxhvac {

namespace {

constexpr double kPowerTolerance = 1e-9;

void require(bool ok, const std::string& msg) {
    if (!ok) {
        throw PreconditionError(msg);
    }
}

}  // namespace

void ZoneParams::validate() const {
    require(a > 0.0, "zone: a must be > 0");
    require(b > 0.0, "zone: b must be > 0");
    require(x_lo < x_target && x_target < x_hi, "zone: require x_lo < x_target < x_hi");
    require(u_max > 0.0, "zone: u_max must be > 0");
    require(dt > 0.0, "zone: dt must be > 0");
}

void BuildingParams::validate() const {
    const auto n = static_cast<Eigen::Index>(zones.size());
    require(n > 0, "building: at least one zone required");
    require(dt > 0.0, "building: dt must be > 0");
    require(substeps >= 1, "building: substeps must be >= 1");
    for (std::size_t i = 0; i < zones.size(); ++i) {
        const auto& z = zones[i];
        const std::string at = "building.zones[" + std::to_string(i) + "]: ";
        require(z.capacity > 0.0, at + "capacity must be > 0");
        require(z.resistance > 0.0, at + "resistance must be > 0");
        require(z.efficiency > 0.0, at + "efficiency must be > 0");
        require(z.x_lo < z.x_target && z.x_target < z.x_hi, at + "require x_lo < x_target < x_hi");
        require(z.u_max > 0.0, at + "u_max must be > 0");
    }
    if (coupling.size() == 0) {
        return;
    }
    require(coupling.rows() == n && coupling.cols() == n, "building: coupling must be n x n");
    for (Eigen::Index i = 0; i < n; ++i) {
        require(coupling(i, i) == 0.0, "building: coupling diagonal must be zero");
        for (Eigen::Index j = 0; j < n; ++j) {
            require(coupling(i, j) >= 0.0, "building: coupling resistances must be >= 0");
            require(coupling(i, j) == coupling(j, i), "building: coupling must be symmetric");
        }
    }
}

Eigen::MatrixXd BuildingParams::system_matrix() const {
    const auto n = static_cast<Eigen::Index>(zones.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& z = zones[static_cast<std::size_t>(i)];
        a(i, i) -= 1.0 / (z.resistance * z.capacity);
        if (coupling.size() == 0) {
            continue;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (coupling(i, j) > 0.0) {
                const double k = 1.0 / (coupling(i, j) * z.capacity);
                a(i, j) += k;
                a(i, i) -= k;
            }
        }
    }
    return a;
}

double step_zone(double x, double u, double x_out, const ZoneParams& p) {
    if (std::abs(u) > p.u_max + kPowerTolerance) {
        throw PreconditionError("step_zone: |u| = " + std::to_string(std::abs(u)) +
                                " exceeds u_max = " + std::to_string(p.u_max));
    }
    const double decay = std::exp(-p.a * p.dt);
    const double steady = p.b * u / p.a + x_out;
    return decay * (x - steady) + steady;
}

double power_to_reach(double x, double x_to, double x_out, const ZoneParams& p) {
    const double decay = std::exp(-p.a * p.dt);
    const double steady = (x_to - decay * x) / (1.0 - decay);
    return p.a / p.b * (steady - x_out);
}

Eigen::VectorXd step_building(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double x_out,
                              const BuildingParams& p) {
    const auto n = static_cast<Eigen::Index>(p.zones.size());
    if (x.size() != n || u.size() != n) {
        throw PreconditionError("step_building: dimension mismatch (zones=" + std::to_string(n) +
                                ", x=" + std::to_string(x.size()) + ", u=" +
                                std::to_string(u.size()) + ")");
    }
    if (p.coupling.size() != 0) {
        if (p.coupling.rows() != n || p.coupling.cols() != n) {
            throw PreconditionError("step_building: coupling must be n x n");
        }
        if (!p.coupling.isApprox(p.coupling.transpose(), 0.0)) {
            throw PreconditionError("step_building: coupling matrix is not symmetric");
        }
    }
    if (p.substeps < 1) {
        throw PreconditionError("step_building: substeps must be >= 1");
    }

    Eigen::VectorXd forcing(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& z = p.zones[static_cast<std::size_t>(i)];
        if (std::abs(u(i)) > z.u_max + kPowerTolerance) {
            throw PreconditionError("step_building: |u[" + std::to_string(i) + "]| exceeds u_max");
        }
        forcing(i) = z.efficiency / z.capacity * u(i) + x_out / (z.resistance * z.capacity);
    }

    const Eigen::MatrixXd a = p.system_matrix();
    const double h = p.dt / p.substeps;
    Eigen::VectorXd state = x;
    for (int s = 0; s < p.substeps; ++s) {
        const Eigen::VectorXd k1 = a * state + forcing;
        const Eigen::VectorXd k2 = a * (state + 0.5 * h * k1) + forcing;
        const Eigen::VectorXd k3 = a * (state + 0.5 * h * k2) + forcing;
        const Eigen::VectorXd k4 = a * (state + h * k3) + forcing;
        state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return state;
}

}  // namespace laxhvac
