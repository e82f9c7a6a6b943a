#pragma once

#include "laxhvac/thermal.hpp"

#include <Eigen/Dense>

#include <optional>

namespace laxhvac {

/// Stand-in for an infinite laxity (request not yet started). Finite so that
/// aggregation arithmetic stays total.
inline constexpr double kLaxitySentinel = 1e9;

inline bool is_sentinel(double laxity) noexcept { return laxity >= kLaxitySentinel; }

/// Temperatures this close to the target count as on target (degC).
inline constexpr double kTargetTolerance = 1e-9;

/// One HVAC operation request with its cached urgency quantities. All times
/// are timestep indices; penalty, laxity and min_time are in timesteps.
struct Request {
    int unit_id = 0;
    int t_start = 0;
    int t_end = 0;
    double penalty = 0.0;
    double laxity = 0.0;
    double min_time = 0.0;
};

/// How long a freshly issued request may take before it is due.
struct DurationConfig {
    int duration = 24;
};

/// Number of timesteps of constant power `u` needed to move the zone
/// temperature from `x2` to `x1` under outdoor temperature `x_out`.
/// Throws ZetaDomainError when the logarithm has no real value.
double zeta(double x1, double x2, double u, double x_out, const ZoneParams& p);

/// Time at maximum power back to the violated comfort edge; 0 inside the band.
double penalty(double x, double x_out, const ZoneParams& p);

/// Time at maximum heating (below target) or cooling (above) to reach target.
double min_time(double x, double x_out, const ZoneParams& p);

/// Constraint-augmented laxity of `req` at step `t`. Refreshes the cached
/// penalty, min_time and laxity inside `req` and returns the laxity.
/// Requires t <= req.t_end.
double laxity(Request& req, int t, double x, double x_out, const ZoneParams& p);

/// Issues a new request when the current one is past its deadline or the
/// temperature reached (crossed) the target between two steps.
std::optional<Request> renew_request(const Request& req, int t, double x_prev, double x_now,
                                     double x_target, const DurationConfig& cfg);

/// Single-zone view of one zone of a coupled building, with neighbours frozen
/// at their current temperatures. Used to compute zonal laxity.
struct ZonalView {
    ZoneParams params;
    double ambient = 0.0;
};

ZonalView zonal_view(const BuildingParams& b, std::size_t zone, const Eigen::VectorXd& x,
                     double x_out);

}  // namespace laxhvac
