#include "invlab/galileo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace invlab::galileo
{

GFunction::GFunction(std::string name,
                     double limit,
                     std::function<double(double)> scale,
                     std::function<double(double)> slope)
    : name_(std::move(name))
    , limit_(limit)
    , scale_(std::move(scale))
    , slope_(std::move(slope))
{
    if (!(limit_ > 0))
    {
        throw std::invalid_argument("GFunction '" + name_ + "': limiting speed must be positive");
    }
    if (!scale_)
    {
        throw std::invalid_argument("GFunction '" + name_ + "': missing scale function");
    }
    if (scale_(0.0) != 1.0)
    {
        throw std::invalid_argument("GFunction '" + name_ + "': G(0) must equal 1");
    }
}

GFunction GFunction::lorentz_type(double limit)
{
    auto scale = [limit](double a) {
        double const beta = a / limit;
        return 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
    };
    auto slope = [limit, scale](double a) {
        double const g = scale(a);
        return a / (limit * limit) * g * g * g;
    };
    return {"lorentz", limit, scale, slope};
}

GFunction GFunction::rational_type(double limit)
{
    auto scale = [limit](double a) {
        double const beta = a / limit;
        return 1.0 / ((1.0 - beta) * (1.0 + beta));
    };
    auto slope = [limit, scale](double a) {
        double const g = scale(a);
        return 2.0 * a / (limit * limit) * g * g;
    };
    return {"rational", limit, scale, slope};
}

GFunction GFunction::classical()
{
    return {"classical", std::numeric_limits<double>::infinity(), [](double) { return 1.0; },
            [](double) { return 0.0; }};
}

GFunction GFunction::by_name(std::string const& name, double limit)
{
    if (name == "lorentz")
    {
        return lorentz_type(limit);
    }
    if (name == "rational")
    {
        return rational_type(limit);
    }
    if (name == "classical")
    {
        return classical();
    }
    throw std::invalid_argument("unknown G function '" + name + "' (expected lorentz, rational or classical)");
}

double GFunction::solve_speed(double r) const
{
    if (!(r >= 0) || !std::isfinite(r))
    {
        throw std::invalid_argument("solve_speed: target must be finite and non-negative");
    }
    if (r == 0)
    {
        return 0.0;
    }

    double lo = 0.0;
    double hi = 0.0;
    if (bounded())
    {
        hi = limit_ * (1.0 - 1e-15);
        if (magnitude(hi) < r)
        {
            throw ConvergenceError("solve_speed: |rhs| = " + std::to_string(r)
                                   + " is not resolvable below the limiting speed");
        }
    }
    else
    {
        hi = 1.0;
        while (magnitude(hi) < r)
        {
            hi *= 2;
            if (!std::isfinite(hi))
            {
                throw ConvergenceError("solve_speed: failed to bracket the root");
            }
        }
    }

    double const tol = 1e-14 * r;
    double x = 0.5 * (lo + hi);
    double best = x;
    double best_err = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 400; ++iter)
    {
        double const f = magnitude(x) - r;
        if (std::abs(f) < best_err)
        {
            best_err = std::abs(f);
            best = x;
        }
        if (std::abs(f) <= tol)
        {
            return x;
        }
        (f < 0 ? lo : hi) = x;
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi)
        {
            // Bracket exhausted at double resolution.
            return best;
        }

        double next = 0.5 * (lo + hi);
        if (slope_)
        {
            double const df = scale_(x) + x * slope_(x);
            if (df > 0 && std::isfinite(df))
            {
                double const newton = x - f / df;
                if (newton > lo && newton < hi)
                {
                    next = newton;
                }
            }
        }
        x = next;
    }
    throw ConvergenceError("solve_speed: no convergence for r = " + std::to_string(r));
}

BoundedVelocity::BoundedVelocity(Vec3 v, std::shared_ptr<GFunction const> g) : v_(v), g_(std::move(g))
{
    if (!g_)
    {
        throw std::invalid_argument("BoundedVelocity: missing G function");
    }
    if (!is_finite(v_))
    {
        throw std::invalid_argument("BoundedVelocity: non-finite velocity");
    }
    if (!(norm(v_) < g_->limit()))
    {
        throw std::invalid_argument("BoundedVelocity: |v| = " + std::to_string(norm(v_))
                                    + " is not below the limiting speed " + std::to_string(g_->limit()));
    }
}

BoundedVelocity zero(std::shared_ptr<GFunction const> g) { return {Vec3{}, std::move(g)}; }

BoundedVelocity from_rapidity(Vec3 const& rapidity, std::shared_ptr<GFunction const> g)
{
    double const r = norm(rapidity);
    if (r == 0)
    {
        return zero(std::move(g));
    }
    double const w = g->solve_speed(r);
    return {rapidity * (w / r), std::move(g)};
}

BoundedVelocity oplus(BoundedVelocity const& u, BoundedVelocity const& v)
{
    if (!(u.g() == v.g()))
    {
        throw std::invalid_argument("oplus: operands use different G functions ('" + u.g().name() + "' vs '"
                                    + v.g().name() + "')");
    }
    return from_rapidity(u.rapidity() + v.rapidity(), u.g_ptr());
}

Vec3 oplus_limit(Vec3 const& direction, BoundedVelocity const& v)
{
    double const n = norm(direction);
    if (!(n > 0))
    {
        throw std::invalid_argument("oplus_limit: zero direction");
    }
    if (!v.g().bounded())
    {
        throw std::invalid_argument("oplus_limit: G function has no limiting speed");
    }
    // g(U) U grows without bound while g(V) V stays finite, so the sum aligns
    // with U and its speed tends to C.
    return direction * (v.g().limit() / n);
}

double proper_time(double dt, BoundedVelocity const& v) { return dt / v.scale(); }

InvarianceCheck check_invariance_theorem(BoundedVelocity const& v2,
                                         BoundedVelocity const& v3,
                                         double proper_interval,
                                         double tolerance,
                                         double perturbation)
{
    if (!(proper_interval > 0))
    {
        throw std::invalid_argument("check_invariance_theorem: proper interval must be positive");
    }
    BoundedVelocity const v1 = oplus(v2, v3);

    InvarianceCheck c;
    c.composite = v1.value();
    c.dt1 = proper_interval * v1.scale();
    c.dt2 = proper_interval * v2.scale();
    c.dt3 = proper_interval * v3.scale();

    Vec3 const leg2 = v2.value() * c.dt2;
    Vec3 const leg3 = v3.value() * c.dt3;
    Vec3 const direct = v1.value() * c.dt1;
    c.distance_residual = norm(direct - (leg2 + leg3));
    c.scale = std::max(1.0, norm(leg2) + norm(leg3));
    c.identity_holds = c.distance_residual <= tolerance * c.scale;

    c.perturbed_leg = v2.speed() > 0 ? 2 : 3;
    Vec3 perturbed_sum;
    if (c.perturbed_leg == 2)
    {
        perturbed_sum = v2.value() * (c.dt2 * (1 + perturbation)) + leg3;
        c.predicted_perturbed = std::abs(perturbation) * norm(leg2);
    }
    else
    {
        perturbed_sum = leg2 + v3.value() * (c.dt3 * (1 + perturbation));
        c.predicted_perturbed = std::abs(perturbation) * norm(leg3);
    }
    c.perturbed_residual = norm(direct - perturbed_sum);
    c.converse_confirmed = c.predicted_perturbed > 0 && c.perturbed_residual > tolerance * c.scale
                           && std::abs(c.perturbed_residual - c.predicted_perturbed) <= 0.1 * c.predicted_perturbed;
    return c;
}

LightQuotient light_quotient(BoundedVelocity const& frame_boost, double baseline, Vec3 const& direction)
{
    if (!(baseline > 0))
    {
        throw std::invalid_argument("light_quotient: baseline must be positive");
    }
    double const n = norm(direction);
    if (!(n > 0))
    {
        throw std::invalid_argument("light_quotient: zero direction");
    }
    auto const& g = frame_boost.g();
    double const c = g.limit();
    Vec3 const unit = direction / n;

    // Signal velocities in the apparatus frame: the medium-frame signal at the
    // limiting speed composed with the inverse apparatus boost.
    BoundedVelocity const back = -frame_boost;
    Vec3 const out_velocity = oplus_limit(unit * c, back);
    Vec3 const in_velocity = oplus_limit(-unit * c, back);

    LightQuotient q;
    // Mirror and source are at rest in the apparatus frame.
    q.outbound = baseline / dot(out_velocity, unit);
    q.inbound = baseline / -dot(in_velocity, unit);
    double const apparatus_subjective = q.outbound + q.inbound;
    BoundedVelocity const at_rest = zero(frame_boost.g_ptr());
    double const apparatus_proper = proper_time(apparatus_subjective, at_rest);

    // In the medium frame the source moves with frame_boost; its clock there
    // reads the same proper interval stretched by g(frame_boost).
    q.medium_subjective = apparatus_proper * frame_boost.scale();
    q.source_proper = proper_time(q.medium_subjective, frame_boost);
    q.quotient = 2 * baseline / q.source_proper;
    return q;
}

namespace
{

/// Time for a signal of speed c emitted at the origin to meet a target that
/// starts at `offset` and moves with velocity w: |offset + w t| = c t.
double intercept_time(Vec3 const& offset, Vec3 const& w, double c)
{
    double const a = c * c - norm_squared(w);
    double const b = -2 * dot(offset, w);
    double const k = norm_squared(offset);
    if (!(a > 0))
    {
        throw std::invalid_argument("light_quotient_classical: apparatus must move slower than the signal");
    }
    double const disc = std::sqrt(b * b + 4 * a * k);
    // Stable form of the positive root.
    return b <= 0 ? (disc - b) / (2 * a) : 2 * k / (disc + b);
}

}  // namespace

LightQuotient light_quotient_classical(Vec3 const& apparatus_velocity,
                                       double signal_speed,
                                       double baseline,
                                       Vec3 const& direction)
{
    if (!(baseline > 0) || !(signal_speed > 0))
    {
        throw std::invalid_argument("light_quotient_classical: baseline and signal speed must be positive");
    }
    double const n = norm(direction);
    if (!(n > 0))
    {
        throw std::invalid_argument("light_quotient_classical: zero direction");
    }
    Vec3 const unit = direction / n;
    Vec3 const w = apparatus_velocity;

    // Events in the medium frame. Emission at t = 0 from the source at the origin.
    Vec3 const mirror0 = unit * baseline;
    double const t_reflect = intercept_time(mirror0, w, signal_speed);
    Vec3 const reflection = mirror0 + w * t_reflect;
    Vec3 const source_at_reflect = w * t_reflect;
    double const t_back = intercept_time(source_at_reflect - reflection, w, signal_speed);

    LightQuotient q;
    q.outbound = t_reflect;
    q.inbound = t_back;
    q.medium_subjective = t_reflect + t_back;
    // Absolute time: every clock agrees and G = 1.
    q.source_proper = q.medium_subjective;
    q.quotient = 2 * baseline / q.source_proper;
    return q;
}

}  // namespace invlab::galileo
