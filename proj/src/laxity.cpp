#include "laxhvac/laxity.hpp"

#include "laxhvac/error.hpp"

#include <cmath>
#include <sstream>

namespace laxhvac {

namespace {

constexpr double kLogArgumentFloor = 1e-12;

}  // namespace

double zeta(double x1, double x2, double u, double x_out, const ZoneParams& p) {
    if (x1 == x2) {
        return 0.0;
    }
    const double steady = p.b * u / p.a + x_out;
    const double num = x1 - steady;
    const double den = x2 - steady;
    const double arg = (den == 0.0) ? 0.0 : num / den;
    // arg > 1 means x1 lies beyond the steady state: unreachable as well.
    if (!(arg > kLogArgumentFloor) || arg > 1.0) {
        std::ostringstream msg;
        msg << "zeta: cannot drive temperature from " << x2 << " to " << x1 << " degC with power "
            << u << " kW at outdoor " << x_out << " degC (steady state " << steady << " degC)";
        throw ZetaDomainError(msg.str(), x2, x1, u, x_out);
    }
    return -std::log(arg) / (p.a * p.dt);
}

double penalty(double x, double x_out, const ZoneParams& p) {
    if (x < p.x_lo) {
        return zeta(p.x_lo, x, p.u_max, x_out, p);
    }
    if (x > p.x_hi) {
        return zeta(p.x_hi, x, -p.u_max, x_out, p);
    }
    return 0.0;
}

double min_time(double x, double x_out, const ZoneParams& p) {
    if (std::abs(x - p.x_target) <= kTargetTolerance) {
        return 0.0;
    }
    if (x < p.x_target) {
        return zeta(p.x_target, x, p.u_max, x_out, p);
    }
    if (x > p.x_target) {
        return zeta(p.x_target, x, -p.u_max, x_out, p);
    }
    return 0.0;
}

double laxity(Request& req, int t, double x, double x_out, const ZoneParams& p) {
    if (t > req.t_end) {
        throw PreconditionError("laxity: step " + std::to_string(t) + " is past request deadline " +
                                std::to_string(req.t_end));
    }
    if (t < req.t_start) {
        req.penalty = 0.0;
        req.min_time = 0.0;
        req.laxity = kLaxitySentinel;
        return req.laxity;
    }
    req.penalty = penalty(x, x_out, p);
    req.min_time = min_time(x, x_out, p);
    if (x < p.x_lo || x > p.x_hi) {
        req.laxity = -req.penalty;
    } else {
        req.laxity = static_cast<double>(req.t_end - t) - req.min_time;
    }
    return req.laxity;
}

std::optional<Request> renew_request(const Request& req, int t, double x_prev, double x_now,
                                     double x_target, const DurationConfig& cfg) {
    const bool overdue = t > req.t_end;
    const bool reached = (x_prev - x_target) * (x_now - x_target) <= 0.0 ||
                         std::abs(x_now - x_target) <= kTargetTolerance;
    if (!overdue && !reached) {
        return std::nullopt;
    }
    Request next;
    next.unit_id = req.unit_id;
    next.t_start = t;
    next.t_end = t + cfg.duration;
    return next;
}

ZonalView zonal_view(const BuildingParams& b, std::size_t zone, const Eigen::VectorXd& x,
                     double x_out) {
    const auto& z = b.zones.at(zone);
    double conductance = 1.0 / z.resistance;
    double weighted = x_out / z.resistance;
    if (b.coupling.size() != 0) {
        const auto i = static_cast<Eigen::Index>(zone);
        for (Eigen::Index j = 0; j < b.coupling.cols(); ++j) {
            const double r = b.coupling(i, j);
            if (r > 0.0) {
                conductance += 1.0 / r;
                weighted += x(j) / r;
            }
        }
    }
    ZonalView view;
    view.params.a = conductance / z.capacity;
    view.params.b = z.efficiency / z.capacity;
    view.params.x_lo = z.x_lo;
    view.params.x_hi = z.x_hi;
    view.params.x_target = z.x_target;
    view.params.u_max = z.u_max;
    view.params.dt = b.dt;
    view.ambient = weighted / conductance;
    return view;
}

}  // namespace laxhvac
