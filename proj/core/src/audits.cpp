#include "invlab/audits.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace invlab
{

namespace
{

template <class T>
std::vector<T> differentiate(std::span<double const> times, std::span<T const> values)
{
    if (times.size() != values.size())
    {
        throw std::invalid_argument("derivative: times and values differ in length");
    }
    std::size_t const n = times.size();
    if (n < 3)
    {
        throw std::invalid_argument("derivative: need at least three samples");
    }
    std::vector<T> out(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
    {
        out[i] = (values[i + 1] - values[i - 1]) * (1.0 / (times[i + 1] - times[i - 1]));
    }
    // Three-point one-sided stencils, exact for quadratics on uniform grids.
    double const h0 = times[1] - times[0];
    out[0] = (values[0] * -3.0 + values[1] * 4.0 - values[2]) * (1.0 / (2 * h0));
    double const hn = times[n - 1] - times[n - 2];
    out[n - 1] = (values[n - 1] * 3.0 - values[n - 2] * 4.0 + values[n - 3]) * (1.0 / (2 * hn));
    return out;
}

double relative_scale(PairState const& ps)
{
    return std::max(1e-300, norm(ps.separation) + norm(ps.relative_velocity));
}

}  // namespace

std::vector<Vec3> derivative(std::span<double const> times, std::span<Vec3 const> values)
{
    return differentiate<Vec3>(times, values);
}

std::vector<double> derivative(std::span<double const> times, std::span<double const> values)
{
    return differentiate<double>(times, values);
}

std::vector<Vec3> momentum_series(Trajectory const& traj)
{
    std::vector<Vec3> out;
    out.reserve(traj.size());
    for (auto const& s : traj.states)
    {
        out.push_back(s.a.velocity() * s.a.mass() + s.b.velocity() * s.b.mass());
    }
    return out;
}

std::vector<Vec3> angular_momentum_series(Trajectory const& traj)
{
    std::vector<Vec3> out;
    out.reserve(traj.size());
    for (auto const& s : traj.states)
    {
        double const mu = s.a.mass() * s.b.mass() / (s.a.mass() + s.b.mass());
        PairState const ps = pair_state(s.a, s.b);
        out.push_back(cross(ps.separation, ps.relative_velocity * mu));
    }
    return out;
}

std::vector<double> energy_series(Trajectory const& traj, ForceLaw const& law, PotentialOptions const& options)
{
    if (!law.central())
    {
        throw std::invalid_argument("internal energy is undefined for non-central law '" + law.name + "'");
    }
    std::vector<double> out;
    out.reserve(traj.size());
    for (auto const& s : traj.states)
    {
        out.push_back(*observables(s.a, s.b, law, options).internal_energy);
    }
    return out;
}

Vec3 expected_momentum_rate(ForceLaw const& law, Body const& a, Body const& b)
{
    PairState const ps = pair_state(a, b);
    Coefficients const c = evaluate(law, a, b);
    return cross(ps.separation, ps.relative_velocity) * (2 * c.perp);
}

Vec3 expected_torque(ForceLaw const& law, Body const& a, Body const& b)
{
    PairState const ps = pair_state(a, b);
    Coefficients const c = evaluate(law, a, b);
    Vec3 const xv = cross(ps.separation, ps.relative_velocity);
    double const asym = (b.mass() - a.mass()) / (a.mass() + b.mass());
    return xv * c.s + cross(ps.separation, xv) * (c.perp * asym);
}

double max_deviation(std::span<Vec3 const> series)
{
    double worst = 0;
    for (auto const& v : series)
    {
        worst = std::max(worst, norm(v - series.front()));
    }
    return worst;
}

double max_rate(std::span<double const> times, std::span<Vec3 const> series)
{
    double worst = 0;
    for (auto const& d : derivative(times, series))
    {
        worst = std::max(worst, norm(d));
    }
    return worst;
}

double max_relative_drift(std::span<double const> series)
{
    double const e0 = series.front();
    double const scale = std::max(std::abs(e0), 1e-300);
    double worst = 0;
    for (double e : series)
    {
        worst = std::max(worst, std::abs(e - e0) / scale);
    }
    return worst;
}

double secular_drift(std::span<double const> series, std::size_t window)
{
    if (window == 0 || 2 * window > series.size())
    {
        throw std::invalid_argument("secular_drift: window must be positive and fit twice in the series");
    }
    double const e0 = series.front();
    double const scale = std::max(std::abs(e0), 1e-300);
    double first = 0;
    double last = 0;
    for (std::size_t i = 0; i < window; ++i)
    {
        first += (series[i] - e0) / scale;
        last += (series[series.size() - window + i] - e0) / scale;
    }
    return (last - first) / static_cast<double>(window);
}

namespace
{

template <class Expected>
double identity_residual(Trajectory const& traj, std::vector<Vec3> const& series, Expected expected)
{
    auto const rate = derivative(traj.times, series);
    double worst = 0;
    for (std::size_t i = 0; i < traj.size(); ++i)
    {
        worst = std::max(worst, norm(rate[i] - expected(traj.states[i].a, traj.states[i].b)));
    }
    return worst;
}

}  // namespace

double momentum_identity_residual(Trajectory const& traj, ForceLaw const& law)
{
    return identity_residual(traj, momentum_series(traj),
                             [&](Body const& a, Body const& b) { return expected_momentum_rate(law, a, b); });
}

double torque_identity_residual(Trajectory const& traj, ForceLaw const& law)
{
    return identity_residual(traj, angular_momentum_series(traj),
                             [&](Body const& a, Body const& b) { return expected_torque(law, a, b); });
}

ConvergenceCheck identity_convergence(Body const& a0,
                                      Body const& b0,
                                      ForceLaw const& law,
                                      double t_end,
                                      double step,
                                      RateIdentity identity)
{
    auto residual = [&](double h) {
        Trajectory const traj = integrate(a0, b0, law, t_end, h, Method::rk4);
        return identity == RateIdentity::momentum ? momentum_identity_residual(traj, law)
                                                  : torque_identity_residual(traj, law);
    };
    ConvergenceCheck c;
    c.coarse = residual(step);
    c.fine = residual(step / 2);
    c.ratio = c.fine > 0 ? c.coarse / c.fine : std::numeric_limits<double>::infinity();
    return c;
}

double inertia_residual(Trajectory const& traj)
{
    PairState const initial = pair_state(traj.states.front().a, traj.states.front().b);
    double worst = 0;
    for (std::size_t i = 0; i < traj.size(); ++i)
    {
        double const t = traj.times[i];
        PairState const ps = pair_state(traj.states[i].a, traj.states[i].b);
        Vec3 const line = initial.separation + initial.relative_velocity * t;
        double const scale = std::max(1e-300, norm(initial.separation) + norm(initial.relative_velocity) * t);
        worst = std::max(worst, norm(ps.separation - line) / scale);
        double const vscale = std::max(1e-300, norm(initial.relative_velocity));
        worst = std::max(worst, norm(ps.relative_velocity - initial.relative_velocity) / vscale);
    }
    return worst;
}

double covariance_residual(Body const& a0,
                           Body const& b0,
                           ForceLaw const& law,
                           FrameTransform const& transform,
                           double t_end,
                           double step,
                           Method method)
{
    Trajectory const original = integrate(a0, b0, law, t_end, step, method);
    Trajectory const direct
        = integrate(apply(transform, a0, 0.0), apply(transform, b0, 0.0), law, t_end, step, method);
    double worst = 0;
    for (std::size_t i = 0; i < original.size(); ++i)
    {
        double const t = original.times[i];
        PairState const moved = pair_state(apply(transform, original.states[i].a, t),
                                           apply(transform, original.states[i].b, t));
        PairState const ps = pair_state(direct.states[i].a, direct.states[i].b);
        double const diff = norm(moved.separation - ps.separation) + norm(moved.relative_velocity - ps.relative_velocity);
        worst = std::max(worst, diff / relative_scale(moved));
    }
    return worst;
}

double superposition_residual(Body const& a0,
                              Body const& b0,
                              std::span<ForceLaw const> laws,
                              double t_end,
                              double step,
                              Method method)
{
    ForceLaw const merged = merge(laws);
    Trajectory const split = integrate(a0, b0, laws, t_end, step, method);
    Trajectory const whole = integrate(a0, b0, merged, t_end, step, method);
    double worst = 0;
    for (std::size_t i = 0; i < split.size(); ++i)
    {
        auto const& s = split.states[i];
        auto const& w = whole.states[i];
        double const scale = std::max(1.0, norm(s.a.position()) + norm(s.b.position()));
        worst = std::max(worst, (norm(s.a.position() - w.a.position()) + norm(s.b.position() - w.b.position())) / scale);
    }
    return worst;
}

double GroupLawResiduals::worst() const
{
    return std::max({identity, inverse, associativity, double_inverse, orthogonality});
}

GroupLawResiduals frame_group_residuals(std::mt19937_64& rng, std::size_t count)
{
    GroupLawResiduals r;
    FrameTransform const id = FrameTransform::identity();
    for (std::size_t i = 0; i < count; ++i)
    {
        FrameTransform const a = random_transform(rng);
        FrameTransform const b = random_transform(rng);
        FrameTransform const c = random_transform(rng);

        r.identity = std::max({r.identity, field_residual(compose(a, id), a), field_residual(compose(id, a), a)});
        r.inverse = std::max({r.inverse, field_residual(compose(a, inverse(a)), id),
                              field_residual(compose(inverse(a), a), id)});
        r.associativity
            = std::max(r.associativity, field_residual(compose(compose(a, b), c), compose(a, compose(b, c))));
        r.double_inverse = std::max(r.double_inverse, field_residual(inverse(inverse(a)), a));
        Mat3 const rot = compose(compose(a, b), c).rotation();
        r.orthogonality = std::max(r.orthogonality, max_abs_difference(transpose(rot) * rot, Mat3::identity()));
    }
    return r;
}

Vec3 random_vector(std::mt19937_64& rng, double max_norm)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec3 dir;
    double n = 0;
    while (n < 1e-8)
    {
        dir = {gauss(rng), gauss(rng), gauss(rng)};
        n = norm(dir);
    }
    return dir * (max_norm * unit(rng) / n);
}

OplusGroupResiduals oplus_group_residuals(std::mt19937_64& rng,
                                          std::shared_ptr<galileo::GFunction const> const& g,
                                          std::size_t count,
                                          double max_fraction)
{
    using galileo::BoundedVelocity;
    using galileo::oplus;
    double const c = g->bounded() ? g->limit() : 1.0;
    OplusGroupResiduals r;
    BoundedVelocity const zero = galileo::zero(g);
    for (std::size_t i = 0; i < count; ++i)
    {
        BoundedVelocity const u(random_vector(rng, max_fraction * c), g);
        BoundedVelocity const v(random_vector(rng, max_fraction * c), g);
        BoundedVelocity const w(random_vector(rng, max_fraction * c), g);

        BoundedVelocity const uv = oplus(u, v);
        BoundedVelocity const vu = oplus(v, u);
        BoundedVelocity const left = oplus(oplus(w, v), u);
        BoundedVelocity const right = oplus(w, oplus(v, u));

        for (auto const* x : {&uv, &vu, &left, &right})
        {
            r.closure = r.closure && x->speed() < g->limit();
        }
        r.commutativity = std::max(r.commutativity, norm(uv.value() - vu.value()));
        r.associativity = std::max(r.associativity, norm(left.value() - right.value()));
        r.neutral = std::max(r.neutral, norm(oplus(u, zero).value() - u.value()));
        r.inverse = std::max(r.inverse, norm(oplus(u, -u).value()));
        Vec3 const rhs = u.rapidity() + v.rapidity();
        r.reconstruction = std::max(r.reconstruction, norm(uv.rapidity() - rhs) / (1 + norm(rhs)));
    }
    return r;
}

}  // namespace invlab
