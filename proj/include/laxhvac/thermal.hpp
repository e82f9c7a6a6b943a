#pragma once

#include <Eigen/Dense>

#include <vector>

namespace laxhvac {

/// First-order thermal model of one zone:  dx/dt = a (x_out - x) + b u.
///
/// Units are hours, degrees Celsius and kW throughout. Heating power is
/// positive, cooling negative, with |u| <= u_max.
struct ZoneParams {
    double a = 0.2;         ///< heat-loss rate (1/h)
    double b = 0.5;         ///< power-to-temperature gain (degC per kWh)
    double x_lo = 19.0;     ///< comfort band lower edge (degC)
    double x_hi = 23.0;     ///< comfort band upper edge (degC)
    double x_target = 21.0; ///< preferred temperature (degC)
    double u_max = 5.0;     ///< max heating power; max cooling is -u_max (kW)
    double dt = 1.0;        ///< timestep (h)

    /// Throws PreconditionError naming the first violated invariant.
    void validate() const;
};

/// One zone of a multi-zone building in resistor-capacitor form.
struct BuildingZone {
    double capacity = 10.0;    ///< C_i, kWh/degC
    double resistance = 0.5;   ///< R_i to outdoors, degC/kW
    double efficiency = 1.0;   ///< w_i, input efficiency
    double x_lo = 19.0;
    double x_hi = 23.0;
    double x_target = 21.0;
    double u_max = 5.0;
};

/// Coupled zones of one building. `coupling(i, j)` is the inter-zone
/// resistance R_ij; zero means the zones are not adjacent.
struct BuildingParams {
    std::vector<BuildingZone> zones;
    Eigen::MatrixXd coupling;
    double dt = 1.0;
    int substeps = 8;

    std::size_t size() const noexcept { return zones.size(); }

    void validate() const;

    /// Continuous-time system matrix A of dx/dt = A x + B u + d.
    Eigen::MatrixXd system_matrix() const;
};

/// Exact zero-order-hold solution of the single-zone ODE over one step.
double step_zone(double x, double u, double x_out, const ZoneParams& p);

/// Signed constant power that moves the zone from `x` to exactly `x_to` in one
/// step. Not clamped to u_max.
double power_to_reach(double x, double x_to, double x_out, const ZoneParams& p);

/// Advances a coupled building over `dt` with `substeps` classical RK4 steps.
/// Outdoor temperature and powers are held constant over the step.
Eigen::VectorXd step_building(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double x_out,
                              const BuildingParams& p);

}  // namespace laxhvac
