// Acceptance harness: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "invlab/audits.hpp"
#include "invlab/galileo.hpp"
#include "invlab/runner.hpp"
#include "invlab/scenario.hpp"

using namespace invlab;

namespace
{

using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool pass;
    std::string detail;
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Scenario kepler() { return load_scenario(std::string(INVLAB_SCENARIO_DIR) + "/kepler.json"); }

// 1. frame-group laws
Outcome frame_group()
{
    auto const start = Clock::now();
    std::mt19937_64 rng(1);
    GroupLawResiduals const r = frame_group_residuals(rng, 1000);
    double const seconds = std::chrono::duration<double>(Clock::now() - start).count();

    // Associativity seen through the action on bodies, not through fields.
    double action = 0;
    std::uniform_real_distribution<double> time(-5, 5);
    for (int i = 0; i < 100; ++i)
    {
        FrameTransform const a = random_transform(rng);
        FrameTransform const b = random_transform(rng);
        FrameTransform const c = random_transform(rng);
        Body const body("p", 1, {}, random_vector(rng, 10), random_vector(rng, 2));
        double const t = time(rng);
        Body const left = apply(compose(compose(a, b), c), body, t);
        Body const right = apply(a, apply(b, apply(c, body, t), t), t);
        action = std::max(action, norm(left.position() - right.position()) / (1 + norm(right.position())));
    }
    bool const ok = r.worst() <= 1e-12 && action <= 1e-12 && seconds < 1.0;
    return {ok, "worst field residual " + num(r.worst()) + ", action residual " + num(action) + ", " + num(seconds)
                    + " s"};
}

// 2. objectivity of relative quantities
Outcome objectivity()
{
    std::mt19937_64 rng(2);
    std::vector<FrameTransform> frames;
    for (int i = 0; i < 100; ++i)
    {
        frames.push_back(random_transform(rng));
    }
    Scenario const s = kepler();
    auto const reps = represent(s.a, s.b, 1.7, frames);
    double const x = norm(pair_state(s.a, s.b).separation);
    double const v = norm(pair_state(s.a, s.b).relative_velocity);
    auto const dx = check_objectivity([&](Representation const& r) { return norm(pair_state(r.a, r.b).separation) - x; },
                                      reps);
    auto const dv = check_objectivity(
        [&](Representation const& r) { return norm(pair_state(r.a, r.b).relative_velocity) - v; }, reps);
    double const xa = s.a.position().x;
    auto const subjective = check_objectivity([&](Representation const& r) { return r.a.position().x - xa; }, reps);
    bool const ok = dx.pass && dv.pass && !subjective.pass;
    return {ok, "|x_AB| " + num(dx.worst_residual) + ", |v_AB| " + num(dv.worst_residual)
                    + ", subjective x_A " + (subjective.pass ? "passed (wrong)" : "FAILs as expected")};
}

// 3. inertia
Outcome inertia()
{
    Body const a("a", 1, {}, {1, -2, 0.5}, {0.3, 0.1, -0.2});
    Body const b("b", 4, {}, {0, 0, 0}, {-0.1, 0.05, 0});
    double worst = 0;
    for (Method m : {Method::rk4, Method::verlet})
    {
        Trajectory const t = integrate(a, b, std::span<ForceLaw const>{}, 10.0, 1e-3, m);
        if (t.size() != 10001)
        {
            return {false, "expected 10^4 steps"};
        }
        worst = std::max(worst, inertia_residual(t));
    }
    return {worst < 1e-12, "max relative deviation " + num(worst) + " over 10^4 steps (rk4, verlet)"};
}

double max_change(std::vector<Vec3> const& series)
{
    return max_deviation(series);
}

Body charged(double m, Vec3 x, Vec3 v, double q) { return Body("b", m, {{"charge", q}}, x, v); }

// 4. momentum iff phi_perp = 0
Outcome momentum()
{
    Body const a = charged(1, {0, 0, 0}, {0, -0.3, 0.1}, 0.4);
    Body const b = charged(0.5, {1.2, 0, 0}, {0, 0.9, 0}, -0.6);
    double worst = 0;
    for (ForceLaw const& law : {laws::gravity(1), laws::coulomb(1), laws::spring(2)})
    {
        Trajectory const t = integrate(a, b, law, 10.0, 1e-3, Method::rk4);
        worst = std::max(worst, max_change(momentum_series(t)));
    }
    Body const pa("a", 2, {}, {0, 0, 0}, {0, 0, 0});
    Body const pb("b", 1, {}, {1, 0, 0}, {0, 0.8, 0.1});
    ForceLaw const demo = merge(std::vector<ForceLaw>{laws::spring(1), laws::perp_demo(1)});
    ConvergenceCheck const c = identity_convergence(pa, pb, demo, 5.0, 1e-2, RateIdentity::momentum);
    bool const ok = worst < 1e-9 && c.ratio >= 3.5;
    return {ok, "phi_perp=0: max |P(t)-P(0)| " + num(worst) + "; perp demo dP/dt residual " + num(c.coarse) + " -> "
                    + num(c.fine) + " on halving (ratio " + num(c.ratio) + ")"};
}

// 5. torque iff
Outcome torque()
{
    Body const a = charged(1, {0, 0, 0}, {0, -0.3, 0.1}, 0.4);
    Body const b = charged(0.5, {1.2, 0, 0}, {0, 0.9, 0}, -0.6);
    double worst = 0;
    for (ForceLaw const& law : {laws::gravity(1), laws::coulomb(1), laws::spring(2)})
    {
        Trajectory const t = integrate(a, b, law, 10.0, 1e-3, Method::rk4);
        worst = std::max(worst, max_change(angular_momentum_series(t)));
    }
    Body const da("a", 1, {}, {0, 0, 0}, {0.2, 0, 0});
    Body const db("b", 3, {}, {0, 1.5, 0}, {0.4, 0, -0.3});
    ForceLaw const drag = merge(std::vector<ForceLaw>{laws::spring(2), laws::linear_drag(0.3)});
    ConvergenceCheck const c = identity_convergence(da, db, drag, 5.0, 1e-2, RateIdentity::torque);
    bool const ok = worst < 1e-9 && c.ratio >= 3.5;
    return {ok, "central: max |L(t)-L(0)| " + num(worst) + "; drag dL/dt residual " + num(c.coarse) + " -> "
                    + num(c.fine) + " on halving (ratio " + num(c.ratio) + ")"};
}

// 6. energy
Outcome energy()
{
    Scenario const s = kepler();
    ForceLaw const law = merge(s.build_laws());
    // Relative orbit: separation 1, relative speed 1 for the bundled pair, so the period is 2 pi.
    PairState const p = pair_state(s.a, s.b);
    double const r = norm(p.separation);
    double const mu_total = s.a.mass() + s.b.mass();
    double const period = 2 * std::numbers::pi * std::sqrt(r * r * r / mu_total);

    Trajectory const verlet = integrate(s.a, s.b, law, 100 * period, period / 1000, Method::verlet);
    auto const ev = energy_series(verlet, law);
    double const oscillation = max_relative_drift(ev);
    // Mean energy over the first period against the mean over the last one.
    double const secular = std::abs(secular_drift(ev, 1000));

    Trajectory const rk4 = integrate(s.a, s.b, law, 10 * period, period / 1000, Method::rk4);
    double const rk4_drift = max_relative_drift(energy_series(rk4, law));

    bool const ok = oscillation < 1e-6 && secular < 1e-9 && rk4_drift < 1e-8;
    return {ok, "verlet 100 periods: oscillation " + num(oscillation) + ", first-vs-last period mean " + num(secular)
                    + "; rk4 10 periods drift " + num(rk4_drift)};
}

// 7. Galilean covariance
Outcome covariance()
{
    Scenario const s = kepler();
    ForceLaw const law = merge(s.build_laws());
    std::mt19937_64 rng(7);
    double worst = 0;
    for (int i = 0; i < 10; ++i)
    {
        FrameTransform const boost = FrameTransform::pure_boost(random_vector(rng, 1.0));
        worst = std::max(worst, covariance_residual(s.a, s.b, law, boost, s.integrator.t_end, s.integrator.step,
                                                    s.integrator.method));
    }
    return {worst < 1e-9, "10 random boosts, worst relative state residual " + num(worst)};
}

double bisection_oplus(double u)
{
    // Collinear u (+) u under g = 1/sqrt(1-b^2), C = 1: solve w g(w) = 2 u g(u).
    auto m = [](double w) { return w / std::sqrt(1 - w * w); };
    double const target = 2 * m(u);
    double lo = 0;
    double hi = 1;
    for (int i = 0; i < 200; ++i)
    {
        double const mid = 0.5 * (lo + hi);
        (m(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// 8. nonlinear group
Outcome nonlinear_group()
{
    std::mt19937_64 rng(8);
    bool ok = true;
    std::string detail;
    for (auto const& name : {"lorentz", "rational"})
    {
        auto const g = std::make_shared<galileo::GFunction const>(galileo::GFunction::by_name(name));
        OplusGroupResiduals const r = oplus_group_residuals(rng, g, 1000);
        ok = ok && r.closure && r.commutativity <= 1e-10 && r.associativity <= 1e-10 && r.inverse <= 1e-12;
        detail += std::string(name) + ": comm " + num(r.commutativity) + " assoc " + num(r.associativity) + " inv "
                  + num(r.inverse) + (r.closure ? "" : " closure violated") + "; ";
    }
    auto const g = std::make_shared<galileo::GFunction const>(galileo::GFunction::lorentz_type(1.0));
    galileo::BoundedVelocity const u({0.6, 0, 0}, g);
    double const got = galileo::oplus(u, u).value().x;
    double const oracle = bisection_oplus(0.6);
    ok = ok && std::abs(got - oracle) <= 1e-10;
    detail += "0.6(+)0.6 = " + std::to_string(got) + " vs oracle " + std::to_string(oracle);
    return {ok, detail};
}

// 9. invariance theorem
Outcome invariance()
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> interval(0.1, 10);
    double worst = 0;
    double worst_prediction = 0;
    bool converse = true;
    for (auto const& name : {"lorentz", "rational"})
    {
        auto const g = std::make_shared<galileo::GFunction const>(galileo::GFunction::by_name(name));
        for (int i = 0; i < 1000; ++i)
        {
            galileo::BoundedVelocity const v2(random_vector(rng, 0.9), g);
            galileo::BoundedVelocity const v3(random_vector(rng, 0.9), g);
            auto const c = galileo::check_invariance_theorem(v2, v3, interval(rng));
            worst = std::max(worst, c.distance_residual / c.scale);
            double const rel = std::abs(c.perturbed_residual - c.predicted_perturbed) / c.predicted_perturbed;
            worst_prediction = std::max(worst_prediction, rel);
            converse = converse && rel <= 0.1;
        }
    }
    return {worst < 1e-12 && converse, "identity residual " + num(worst)
                                            + ", 1% perturbation vs first-order prediction within " + num(worst_prediction)};
}

// Classical two-leg round trip, apparatus moving with w through the medium:
// T = 2 L sqrt(c^2 - w_perp^2) / (c^2 - w^2).
double classical_oracle(Vec3 const& w, double c, Vec3 const& unit)
{
    double const along = dot(w, unit);
    double const across2 = norm_squared(w) - along * along;
    double const round_trip = 2 * std::sqrt(c * c - across2) / (c * c - norm_squared(w));
    return 2 / round_trip;
}

// 10. light quotient
Outcome light()
{
    std::mt19937_64 rng(10);
    double worst = 0;
    double classical_error = 0;
    double classical_deviation = 0;
    for (auto const& name : {"lorentz", "rational"})
    {
        auto const g = std::make_shared<galileo::GFunction const>(galileo::GFunction::by_name(name));
        for (int i = 0; i < 20; ++i)
        {
            Vec3 const w = random_vector(rng, 0.9);
            Vec3 dir = random_vector(rng, 1.0) + Vec3{1e-3, 0, 0};
            dir = dir / norm(dir);
            auto const q = galileo::light_quotient(galileo::BoundedVelocity(w, g), 1.0, dir);
            worst = std::max(worst, std::abs(q.quotient - 1.0));
            auto const qc = galileo::light_quotient_classical(w, 1.0, 1.0, dir);
            classical_error = std::max(classical_error, std::abs(qc.quotient - classical_oracle(w, 1.0, dir)));
            classical_deviation = std::max(classical_deviation, std::abs(qc.quotient - 1.0));
        }
    }
    bool const ok = worst <= 1e-12 && classical_error <= 1e-10 && classical_deviation > 1e-3;
    return {ok, "nonlinear |q-C| " + num(worst) + "; classical |q-C| up to " + num(classical_deviation)
                    + ", matching the two-leg prediction to " + num(classical_error)};
}

// 11. property additivity
Outcome additivity()
{
    Body const b = charged(2, {2, 1, -1}, {}, 0.7);
    Body const a1 = charged(0.3, {0, 0, 0}, {}, 0.25);
    Body const a2 = charged(0.9, {0, 0, 0}, {}, -1.4);
    auto const grav = check_property_additivity(laws::gravity(1.3), "mass", a1, a2, b);
    auto const coul = check_property_additivity(laws::coulomb(0.8), "charge", a1, a2, b);
    double const k = 1.1;
    auto const quad = check_property_additivity(laws::quadratic_charge(k), "charge", a1, a2, b);
    double const r2 = norm_squared(Vec3{2, 1, -1});
    double const predicted = std::abs(2 * k * 0.25 * -1.4 * 0.7 * 0.7 / r2);
    bool const ok = grav.pass && coul.pass && !quad.pass && std::abs(quad.residual - predicted) <= 1e-10;
    return {ok, "gravity/mass " + num(grav.residual) + ", coulomb/charge " + num(coul.residual) + ", Q^2 law residual "
                    + num(quad.residual) + " vs predicted " + num(predicted)};
}

}  // namespace

int main()
{
    struct Criterion
    {
        char const* name;
        std::function<Outcome()> check;
    };
    std::vector<Criterion> const criteria{
        {"frame-group laws", frame_group},
        {"objectivity of relative quantities", objectivity},
        {"inertia", inertia},
        {"momentum iff phi_perp = 0", momentum},
        {"torque iff", torque},
        {"energy", energy},
        {"galilean covariance", covariance},
        {"nonlinear group", nonlinear_group},
        {"invariance theorem", invariance},
        {"light quotient", light},
        {"property additivity", additivity},
    };

    auto const start = Clock::now();
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            o = criteria[i].check();
        }
        catch (std::exception const& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    }
    double const seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%d/%zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
                seconds);
    return failed == 0 ? 0 : 1;
}
