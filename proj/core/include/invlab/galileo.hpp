#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "invlab/vec3.hpp"

namespace invlab::galileo
{

/// Raised when the speed root solve fails to converge.
class ConvergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Scaling G: [0, C) -> [1, inf), strictly increasing, G(0) = 1 and G -> inf
/// as the argument approaches the limiting speed C. With C = inf and G = 1 the
/// group reduces to ordinary vector addition.
class GFunction
{
public:
    /// `slope` is G'; when absent the root solve falls back to pure bisection.
    GFunction(std::string name,
              double limit,
              std::function<double(double)> scale,
              std::function<double(double)> slope = {});

    static GFunction lorentz_type(double limit = 1.0);
    static GFunction rational_type(double limit = 1.0);
    /// G = 1 on an unbounded domain.
    static GFunction classical();
    /// Named lookup: "lorentz", "rational" or "classical".
    static GFunction by_name(std::string const& name, double limit = 1.0);

    std::string const& name() const { return name_; }
    double limit() const { return limit_; }
    bool bounded() const { return std::isfinite(limit_); }

    double operator()(double speed) const { return scale_(speed); }

    /// The bijection a -> a G(a) of [0, C) onto [0, inf).
    double magnitude(double speed) const { return speed * scale_(speed); }

    /// Unique a in [0, C) with a G(a) = r: bracketed bisection refined by a
    /// safeguarded Newton step, converged to 1e-14 relative in r.
    double solve_speed(double r) const;

    friend bool operator==(GFunction const& a, GFunction const& b)
    {
        return a.name_ == b.name_ && a.limit_ == b.limit_;
    }

private:
    std::string name_;
    double limit_;
    std::function<double(double)> scale_;
    std::function<double(double)> slope_;
};

/// Velocity with |v| < C under a fixed G.
class BoundedVelocity
{
public:
    /// Throws std::invalid_argument when |v| >= C or v is not finite.
    BoundedVelocity(Vec3 v, std::shared_ptr<GFunction const> g);

    Vec3 const& value() const { return v_; }
    double speed() const { return norm(v_); }
    GFunction const& g() const { return *g_; }
    std::shared_ptr<GFunction const> const& g_ptr() const { return g_; }

    /// g(U) = G(|U|).
    double scale() const { return (*g_)(speed()); }
    /// g(U) U, the vector the group adds linearly.
    Vec3 rapidity() const { return v_ * scale(); }

    BoundedVelocity operator-() const { return {-v_, g_}; }

private:
    Vec3 v_;
    std::shared_ptr<GFunction const> g_;
};

/// Zero velocity in the given group.
BoundedVelocity zero(std::shared_ptr<GFunction const> g);

/// Velocity whose rapidity g(W) W equals `rapidity`.
BoundedVelocity from_rapidity(Vec3 const& rapidity, std::shared_ptr<GFunction const> g);

/// U (+) V, defined by g(W) W = g(U) U + g(V) V. Operands must share G.
BoundedVelocity oplus(BoundedVelocity const& u, BoundedVelocity const& v);

/// Limit of U (+) V as |U| -> C along `direction`: a signal moving at the
/// limiting speed keeps its direction and speed. Returns C * direction/|direction|.
Vec3 oplus_limit(Vec3 const& direction, BoundedVelocity const& v);

/// Proper time T = t / g(V).
double proper_time(double dt, BoundedVelocity const& v);

struct InvarianceCheck
{
    Vec3 composite;                 ///< V1 = V2 (+) V3
    double dt1{0};
    double dt2{0};
    double dt3{0};
    double distance_residual{0};    ///< |V1 dt1 - (V2 dt2 + V3 dt3)|
    double scale{0};                ///< max(1, |V2 dt2| + |V3 dt3|)
    int perturbed_leg{2};           ///< 2, or 3 when V2 = 0
    double perturbed_residual{0};   ///< residual after dt_leg *= 1 + perturbation
    double predicted_perturbed{0};  ///< perturbation * |V_leg| * dt_leg
    bool identity_holds{false};
    bool converse_confirmed{false};
};

/// Checks that a common proper-time interval dT gives additive displacements
/// (V2 (+) V3) dt1 = V2 dt2 + V3 dt3 with dt_i = dT g(V_i), and that a
/// relative perturbation of one proper time breaks the identity by the
/// first-order amount.
InvarianceCheck check_invariance_theorem(BoundedVelocity const& v2,
                                         BoundedVelocity const& v3,
                                         double proper_interval,
                                         double tolerance = 1e-12,
                                         double perturbation = 0.01);

struct LightQuotient
{
    double quotient{0};            ///< 2 L / elapsed proper time of the source
    double outbound{0};            ///< leg durations on the apparatus clock
    double inbound{0};
    double source_proper{0};       ///< round trip as proper time of the source
    double medium_subjective{0};   ///< round trip on the clock of the medium frame
};

/// Emission, reflection at a mirror `baseline` away along `direction`, and
/// detection back at the source, under the nonlinear group. The apparatus
/// moves with `frame_boost` relative to the frame in which the signal speed
/// is C; the signal keeps the limiting speed in every frame.
LightQuotient light_quotient(BoundedVelocity const& frame_boost, double baseline, Vec3 const& direction = {1, 0, 0});

/// The same experiment with plain Galilean addition: the signal moves at
/// `signal_speed` in the rest frame of the medium and the apparatus moves
/// through it with `apparatus_velocity`. Leg times come from event-by-event
/// intercept solves.
LightQuotient light_quotient_classical(Vec3 const& apparatus_velocity,
                                       double signal_speed,
                                       double baseline,
                                       Vec3 const& direction = {1, 0, 0});

}  // namespace invlab::galileo
