#include "invlab/dynamics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace invlab
{

std::string_view to_string(Method method)
{
    switch (method)
    {
    case Method::rk4:
        return "rk4";
    case Method::verlet:
        return "verlet";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    if (name == "rk4")
    {
        return Method::rk4;
    }
    if (name == "verlet")
    {
        return Method::verlet;
    }
    throw std::invalid_argument("unknown integration method '" + std::string(name) + "'");
}

namespace
{

using ForceFn = std::function<ForcePair(Body const&, Body const&)>;

struct State
{
    Vec3 xa, va, xb, vb;
};

struct Derivative
{
    Vec3 dxa, dva, dxb, dvb;
};

State advance(State const& s, Derivative const& d, double h)
{
    return {s.xa + d.dxa * h, s.va + d.dva * h, s.xb + d.dxb * h, s.vb + d.dvb * h};
}

class Stepper
{
public:
    Stepper(Body const& a0, Body const& b0, ForceFn force) : a_(a0), b_(b0), force_(std::move(force)) {}

    Derivative derivative(State const& s)
    {
        a_.set_state(s.xa, s.va);
        b_.set_state(s.xb, s.vb);
        ForcePair const f = force_(a_, b_);
        return {s.va, f.on_a / a_.mass(), s.vb, f.on_b / b_.mass()};
    }

    State rk4(State const& s, double h)
    {
        Derivative const k1 = derivative(s);
        Derivative const k2 = derivative(advance(s, k1, h / 2));
        Derivative const k3 = derivative(advance(s, k2, h / 2));
        Derivative const k4 = derivative(advance(s, k3, h));
        auto combine = [h](Vec3 const& y, Vec3 const& d1, Vec3 const& d2, Vec3 const& d3, Vec3 const& d4) {
            return y + (d1 + 2.0 * d2 + 2.0 * d3 + d4) * (h / 6);
        };
        return {combine(s.xa, k1.dxa, k2.dxa, k3.dxa, k4.dxa),
                combine(s.va, k1.dva, k2.dva, k3.dva, k4.dva),
                combine(s.xb, k1.dxb, k2.dxb, k3.dxb, k4.dxb),
                combine(s.vb, k1.dvb, k2.dvb, k3.dvb, k4.dvb)};
    }

    /// Kick-drift-kick; `acc` holds the accelerations at `s` on entry and
    /// at the returned state on exit.
    State verlet(State const& s, Derivative& acc, double h)
    {
        State next;
        next.xa = s.xa + s.va * h + acc.dva * (0.5 * h * h);
        next.xb = s.xb + s.vb * h + acc.dvb * (0.5 * h * h);
        next.va = s.va;
        next.vb = s.vb;
        Derivative const fresh = derivative(next);
        next.va = s.va + (acc.dva + fresh.dva) * (0.5 * h);
        next.vb = s.vb + (acc.dvb + fresh.dvb) * (0.5 * h);
        acc = fresh;
        return next;
    }

    Snapshot snapshot(State const& s) const
    {
        return {a_.with_state(s.xa, s.va), b_.with_state(s.xb, s.vb)};
    }

private:
    Body a_;
    Body b_;
    ForceFn force_;
};

Trajectory run(Body const& a0,
               Body const& b0,
               ForceFn force,
               bool velocity_independent,
               std::string law_name,
               double t_end,
               double step,
               Method method)
{
    if (!(step > 0) || !std::isfinite(step))
    {
        throw std::invalid_argument("integrate: step must be positive and finite");
    }
    if (!(t_end > 0) || !std::isfinite(t_end))
    {
        throw std::invalid_argument("integrate: t_end must be positive and finite");
    }
    if (method == Method::verlet && !velocity_independent)
    {
        throw MethodError("integrate: verlet requires a velocity-independent law (phi_s = phi_perp = 0), got '"
                          + law_name + "'");
    }

    auto const steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / step - 0.5)));

    Trajectory traj;
    traj.law_name = std::move(law_name);
    traj.method = method;
    traj.step = step;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);

    Stepper stepper(a0, b0, std::move(force));
    State s{a0.position(), a0.velocity(), b0.position(), b0.velocity()};
    // Evaluating at t = 0 rejects a singular initial configuration up front.
    Derivative acc = stepper.derivative(s);

    traj.times.push_back(0.0);
    traj.states.push_back({a0, b0});
    for (std::size_t i = 1; i <= steps; ++i)
    {
        s = method == Method::rk4 ? stepper.rk4(s, step) : stepper.verlet(s, acc, step);
        traj.times.push_back(static_cast<double>(i) * step);
        traj.states.push_back(stepper.snapshot(s));
    }
    return traj;
}

}  // namespace

Trajectory integrate(Body const& a0, Body const& b0, ForceLaw const& law, double t_end, double step, Method method)
{
    return run(
        a0, b0, [&law](Body const& a, Body const& b) { return forces(law, a, b); },
        law.velocity_independent(), law.name, t_end, step, method);
}

Trajectory integrate(Body const& a0,
                     Body const& b0,
                     std::span<ForceLaw const> laws,
                     double t_end,
                     double step,
                     Method method)
{
    bool velocity_independent = true;
    std::string name;
    for (auto const& law : laws)
    {
        velocity_independent = velocity_independent && law.velocity_independent();
        name += (name.empty() ? "" : "+") + law.name;
    }
    return run(
        a0, b0, [laws](Body const& a, Body const& b) { return superpose_pair(laws, a, b); },
        velocity_independent, name.empty() ? "isolated" : name, t_end, step, method);
}

double potential(ForceLaw const& law, Body const& a, Body const& b, double r, PotentialOptions const& options)
{
    if (!law.central())
    {
        throw std::invalid_argument("potential: law '" + law.name + "' is not central");
    }
    if (!law.has_phi_e())
    {
        return 0.0;
    }
    bool const softened = law.singular && law.singularity.mode == SingularityPolicy::Mode::soften;
    Source const sa(a);
    Source const sb(b);
    if (law.potential && !softened)
    {
        return (*law.potential)(sa, sb, r);
    }
    double const eps = softened ? law.singularity.epsilon : 0.0;
    auto integrand = [&](double s) {
        double const d = std::sqrt(s * s + eps * eps);
        return law.phi_e(sa, sb, PairInvariants{d, 0.0, 0.0}) * s;
    };
    double const r0 = options.reference_radius;
    if (r == r0)
    {
        return 0.0;
    }
    using boost::math::quadrature::gauss_kronrod;
    double const integral = gauss_kronrod<double, 61>::integrate(integrand, r0, r, 15, 1e-14);
    return -integral;
}

Observables observables(Body const& a, Body const& b, ForceLaw const& law, PotentialOptions const& options)
{
    PairState const ps = pair_state(a, b);
    Observables o;
    o.reduced_mass = a.mass() * b.mass() / (a.mass() + b.mass());
    o.total_momentum = a.velocity() * a.mass() + b.velocity() * b.mass();
    o.angular_momentum = cross(ps.separation, ps.relative_velocity * o.reduced_mass);
    if (law.central())
    {
        o.internal_energy = 0.5 * o.reduced_mass * norm_squared(ps.relative_velocity)
                            + potential(law, a, b, norm(ps.separation), options);
    }
    return o;
}

double path_time(std::span<Vec3 const> path, std::function<double(Vec3 const&)> const& speed)
{
    using boost::math::quadrature::gauss_kronrod;
    double total = 0;
    for (std::size_t i = 1; i < path.size(); ++i)
    {
        Vec3 const start = path[i - 1];
        Vec3 const delta = path[i] - start;
        double const length = norm(delta);
        if (length == 0)
        {
            continue;
        }
        auto inverse_speed = [&](double s) {
            double const v = speed(start + delta * s);
            if (!(v > 0) || !std::isfinite(v))
            {
                throw std::invalid_argument("path_time: speed must be positive and finite along the path");
            }
            return 1.0 / v;
        };
        total += length * gauss_kronrod<double, 31>::integrate(inverse_speed, 0.0, 1.0, 10, 1e-13);
    }
    return total;
}

}  // namespace invlab
