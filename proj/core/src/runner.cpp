#include "invlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <random>

#include "invlab/audits.hpp"
#include "invlab/galileo.hpp"

namespace invlab
{

namespace
{

std::vector<AuditInfo> const kCatalog{
    {"inertia", "isolated pair moves on the closed-form straight line x_AB(0) + v_AB(0) t", "inertia-lemma", 1e-12},
    {"frame-group", "random frame transforms satisfy identity, inverse and associativity", "group-axioms", 1e-12},
    {"objectivity-sweep", "|x_AB|, |v_AB| and internal energy agree in every frame; a subjective coordinate does not",
     "objectivity-definition", 1e-12},
    {"time-order", "clock offsets and increasing reparameterizations keep the order of events", "time-order-axiom",
     0.0},
    {"momentum", "total momentum is constant: max |dP/dt| along the trajectory", "generalized-action-reaction", 1e-9},
    {"dpdt-identity", "finite-difference dP/dt matches 2 (x_AB x v_AB) phi_perp with second-order convergence",
     "generalized-action-reaction", 1e-9},
    {"angular-momentum", "angular momentum x_AB x mu v_AB is constant: max |dL/dt|", "torque-lemma", 1e-9},
    {"dldt-identity", "finite-difference dL/dt matches the internal torque formula with second-order convergence",
     "torque-lemma", 1e-9},
    {"energy", "internal energy 1/2 mu v_AB^2 + V(|x_AB|) stays constant (relative drift)", "energy-lemma", 1e-6},
    {"boost-covariance", "integrate-then-transform equals transform-then-integrate for random boosts",
     "objectivity-equations-of-motion", 1e-9},
    {"superposition", "force-by-force superposition equals the merged law", "additive-accelerations", 1e-9},
    {"property-additivity", "forces are additive in each law's defining property", "additive-property", 1e-12},
    {"oplus-group", "bounded velocity addition is closed, commutative, associative, with neutral and inverse",
     "nonlinear-galileo-theorem", 1e-10},
    {"invariance-theorem", "common proper time makes displacements additive; perturbing it breaks additivity",
     "proper-time-theorem", 1e-12},
    {"light-quotient", "round-trip distance over source proper time equals C in every frame; classical addition does not",
     "light-quotient", 1e-12},
};

constexpr double kConvergenceRatio = 3.5;

struct Context
{
    Scenario const& scenario;
    std::vector<ForceLaw> laws;
    ForceLaw law;
    Method method;
    double step;
    double t_end;
    Trajectory const* trajectory;
    std::string trajectory_error;
};

using AuditFn = std::function<AuditResult(Context const&, std::mt19937_64&, double)>;

AuditResult make(Verdict v, double residual, double tolerance, std::string detail = {})
{
    AuditResult r;
    r.verdict = v;
    r.residual = residual;
    r.tolerance = tolerance;
    r.detail = std::move(detail);
    return r;
}

AuditResult judge(double residual, double tolerance, std::string detail = {})
{
    return make(residual <= tolerance ? Verdict::pass : Verdict::fail, residual, tolerance, std::move(detail));
}

Trajectory const& require_trajectory(Context const& ctx)
{
    if (!ctx.trajectory)
    {
        throw std::runtime_error("trajectory unavailable: " + ctx.trajectory_error);
    }
    return *ctx.trajectory;
}

double momentum_scale(Body const& a, Body const& b)
{
    return std::max(1.0, a.mass() * norm(a.velocity()) + b.mass() * norm(b.velocity()));
}

std::vector<FrameTransform> sweep_frames(Context const& ctx, std::mt19937_64& rng, bool boosts_only)
{
    std::vector<FrameTransform> frames = ctx.scenario.frames;
    for (std::size_t i = 0; i < ctx.scenario.random_frames; ++i)
    {
        if (boosts_only)
        {
            frames.push_back(FrameTransform::pure_boost(random_vector(rng, 1.0)));
        }
        else
        {
            frames.push_back(random_transform(rng));
        }
    }
    return frames;
}

AuditResult audit_inertia(Context const& ctx, std::mt19937_64&, double tol)
{
    Trajectory const free = integrate(ctx.scenario.a, ctx.scenario.b, std::span<ForceLaw const>{}, ctx.t_end,
                                      ctx.step, ctx.method);
    return judge(inertia_residual(free), tol, std::to_string(free.size() - 1) + " steps without interaction");
}

AuditResult audit_frame_group(Context const& ctx, std::mt19937_64& rng, double tol)
{
    GroupLawResiduals r = frame_group_residuals(rng, 1000);
    FrameTransform const id = FrameTransform::identity();
    for (auto const& f : ctx.scenario.frames)
    {
        r.inverse = std::max(r.inverse, field_residual(compose(f, inverse(f)), id));
        r.identity = std::max(r.identity, field_residual(compose(f, id), f));
    }
    return judge(r.worst(), tol,
                 "1000 random triples; identity=" + format_number(r.identity) + " inverse=" + format_number(r.inverse)
                     + " associativity=" + format_number(r.associativity));
}

AuditResult audit_objectivity(Context const& ctx, std::mt19937_64& rng, double tol)
{
    auto const frames = sweep_frames(ctx, rng, false);
    auto const reps = represent(ctx.scenario.a, ctx.scenario.b, 0.0, frames);
    PairState const ref = pair_state(ctx.scenario.a, ctx.scenario.b);
    double const x_ref = norm(ref.separation);
    double const v_ref = norm(ref.relative_velocity);

    auto const distance = check_objectivity(
        [&](Representation const& r) {
            return (norm(pair_state(r.a, r.b).separation) - x_ref) / std::max(1.0, x_ref);
        },
        reps, tol);
    auto const speed = check_objectivity(
        [&](Representation const& r) {
            return (norm(pair_state(r.a, r.b).relative_velocity) - v_ref) / std::max(1.0, v_ref);
        },
        reps, tol);

    // Subjective coordinate: must be caught as non-objective under translations.
    std::vector<FrameTransform> shifts;
    for (std::size_t i = 0; i < std::max<std::size_t>(ctx.scenario.random_frames, 1); ++i)
    {
        shifts.push_back(FrameTransform::pure_translation(random_vector(rng, 10.0) + Vec3{1, 0, 0}));
    }
    auto const shifted = represent(ctx.scenario.a, ctx.scenario.b, 0.0, shifts);
    double const x0 = ctx.scenario.a.position().x;
    auto const subjective
        = check_objectivity([&](Representation const& r) { return r.a.position().x - x0; }, shifted, tol);

    double residual = std::max(distance.worst_residual, speed.worst_residual);
    std::string detail = std::to_string(reps.size()) + " frames; subjective x_A residual "
                         + format_number(subjective.worst_residual);

    // Internal energy integrated in each frame, compared at t_end.
    if (ctx.law.central() && ctx.trajectory && ctx.scenario.random_frames > 0)
    {
        auto const& traj = *ctx.trajectory;
        double const e_ref = *observables(traj.states.back().a, traj.states.back().b, ctx.law).internal_energy;
        std::size_t const n = std::min<std::size_t>(frames.size(), 3);
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            Trajectory const moved = integrate(apply(frames[i], ctx.scenario.a, 0.0), apply(frames[i], ctx.scenario.b, 0.0),
                                               ctx.law, ctx.t_end, ctx.step, ctx.method);
            double const e = *observables(moved.states.back().a, moved.states.back().b, ctx.law).internal_energy;
            worst = std::max(worst, std::abs(e - e_ref) / std::max(1.0, std::abs(e_ref)));
        }
        detail += "; internal energy spread " + format_number(worst) + " over " + std::to_string(n) + " frames";
        if (worst > kIntegratedTolerance)
        {
            return make(Verdict::fail, std::max(residual, worst), tol, detail);
        }
    }

    if (subjective.pass)
    {
        return make(Verdict::fail, residual, tol, detail + " (subjective coordinate was not detected)");
    }
    return judge(residual, tol, detail);
}

AuditResult audit_time_order(Context const& ctx, std::mt19937_64& rng, double)
{
    std::vector<double> events;
    if (ctx.trajectory)
    {
        events = ctx.trajectory->times;
    }
    else
    {
        for (int i = 0; i < 100; ++i)
        {
            events.push_back(0.01 * i);
        }
    }
    std::shuffle(events.begin(), events.end(), rng);

    std::uniform_real_distribution<double> dist(0.1, 5.0);
    double violations = 0;
    for (auto const& f : sweep_frames(ctx, rng, false))
    {
        double const tau = f.time_offset();
        violations += preserves_order(events, [tau](double t) { return t + tau; }) ? 0 : 1;
        auto shifted = offset_times(events, tau);
        for (std::size_t i = 0; i < events.size(); ++i)
        {
            if (shifted[i] - tau != events[i] && std::abs(shifted[i] - tau - events[i]) > 1e-12 * (1 + std::abs(tau)))
            {
                violations += 1;
            }
        }
        double const a = dist(rng);
        double const b = dist(rng);
        violations += preserves_order(events, [a, b](double t) { return a * t + b * std::tanh(t); }) ? 0 : 1;
    }
    bool const reversal_detected = !preserves_order(events, [](double t) { return -t; });
    if (!reversal_detected)
    {
        return make(Verdict::fail, violations, 0.0, "time reversal was not detected as order-breaking");
    }
    return make(violations == 0 ? Verdict::pass : Verdict::fail, violations, 0.0,
                std::to_string(events.size()) + " events; reversal detected");
}

AuditResult audit_momentum(Context const& ctx, std::mt19937_64&, double tol)
{
    auto const& traj = require_trajectory(ctx);
    auto const p = momentum_series(traj);
    double const rate = max_rate(traj.times, p);
    double expected = 0;
    for (auto const& s : traj.states)
    {
        expected = std::max(expected, norm(expected_momentum_rate(ctx.law, s.a, s.b)));
    }
    double const scale = momentum_scale(ctx.scenario.a, ctx.scenario.b);
    return judge(rate, tol * scale,
                 "max|P(t)-P(0)|=" + format_number(max_deviation(p)) + "; max|2(x_AB x v_AB) phi_perp|="
                     + format_number(expected));
}

AuditResult audit_rate_identity(Context const& ctx, double tol, RateIdentity which)
{
    ConvergenceCheck const c
        = identity_convergence(ctx.scenario.a, ctx.scenario.b, ctx.law, ctx.t_end, ctx.step, which);
    std::string const detail = "h=" + format_number(ctx.step) + " residual=" + format_number(c.coarse)
                               + "; h/2 residual=" + format_number(c.fine) + "; ratio=" + format_number(c.ratio)
                               + " (needs <= tolerance or ratio >= 3.5)";
    bool const ok = c.coarse <= tol || c.ratio >= kConvergenceRatio;
    return make(ok ? Verdict::pass : Verdict::fail, c.coarse, tol, detail);
}

AuditResult audit_angular(Context const& ctx, std::mt19937_64&, double tol)
{
    auto const& traj = require_trajectory(ctx);
    auto const l = angular_momentum_series(traj);
    double const rate = max_rate(traj.times, l);
    double const scale = std::max(1.0, norm(l.front()));
    return judge(rate, tol * scale, "max|L(t)-L(0)|=" + format_number(max_deviation(l)));
}

AuditResult audit_energy(Context const& ctx, std::mt19937_64&, double tol)
{
    if (!ctx.law.central())
    {
        return make(Verdict::error, 0.0, tol, "internal energy is undefined for non-central law '" + ctx.law.name + "'");
    }
    auto const& traj = require_trajectory(ctx);
    auto const e = energy_series(traj, ctx.law);
    double const drift = max_relative_drift(e);
    std::string detail = "E(0)=" + format_number(e.front());
    std::size_t const window = std::max<std::size_t>(1, e.size() / 10);
    if (2 * window <= e.size())
    {
        detail += "; secular drift (last vs first tenth)=" + format_number(secular_drift(e, window));
    }
    return judge(drift, tol, detail);
}

AuditResult audit_covariance(Context const& ctx, std::mt19937_64& rng, double tol)
{
    auto frames = sweep_frames(ctx, rng, true);
    if (frames.empty())
    {
        frames.push_back(FrameTransform::pure_boost(random_vector(rng, 1.0)));
    }
    double worst = 0;
    for (auto const& f : frames)
    {
        worst = std::max(worst,
                         covariance_residual(ctx.scenario.a, ctx.scenario.b, ctx.law, f, ctx.t_end, ctx.step, ctx.method));
    }
    return judge(worst, tol, std::to_string(frames.size()) + " frames");
}

AuditResult audit_superposition(Context const& ctx, std::mt19937_64&, double tol)
{
    double const r = superposition_residual(ctx.scenario.a, ctx.scenario.b, ctx.laws, ctx.t_end, ctx.step, ctx.method);
    return judge(r, tol, std::to_string(ctx.laws.size()) + " laws");
}

AuditResult audit_additivity(Context const& ctx, std::mt19937_64& rng, double tol)
{
    std::uniform_real_distribution<double> fraction(0.2, 0.8);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    double worst = 0;
    bool pass = true;
    std::string detail;
    for (auto const& law : ctx.laws)
    {
        if (law.additive_property.empty())
        {
            continue;
        }
        std::string const& q = law.additive_property;
        double const total = ctx.scenario.a.property(q);
        double const f = fraction(rng);
        double q1 = f * total;
        double q2 = (1 - f) * total;
        if (q != "mass")
        {
            double const d = shift(rng);
            q1 += d;
            q2 -= d;
        }
        Body const a1 = ctx.scenario.a.with_property(q, q1);
        Body const a2 = ctx.scenario.a.with_property(q, q2);
        AdditivityVerdict const v = check_property_additivity(law, q, a1, a2, ctx.scenario.b, tol);
        double const rel = v.residual / (v.tolerance / tol);
        worst = std::max(worst, rel);
        pass = pass && v.pass;
        detail += (detail.empty() ? "" : "; ") + law.name + "(" + q + "): " + (v.pass ? "additive" : "not additive")
                  + " residual " + format_number(v.residual);
    }
    if (detail.empty())
    {
        detail = "no law declares an additive property";
    }
    return make(pass ? Verdict::pass : Verdict::fail, worst, tol, detail);
}

galileo::GFunction make_g(std::string const& name, double limit) { return galileo::GFunction::by_name(name, limit); }

NonlinearSpec nonlinear_spec(Context const& ctx) { return ctx.scenario.nonlinear.value_or(NonlinearSpec{}); }

AuditResult audit_oplus(Context const& ctx, std::mt19937_64& rng, double tol)
{
    auto const spec = nonlinear_spec(ctx);
    double worst_group = 0;
    double worst_exact = 0;
    bool closure = true;
    std::string detail;
    for (auto const& name : spec.g_names)
    {
        auto const g = std::make_shared<galileo::GFunction const>(make_g(name, spec.limit));
        auto const r = oplus_group_residuals(rng, g, spec.samples);
        for (std::size_t i = 0; i + 1 < spec.velocities.size(); ++i)
        {
            galileo::BoundedVelocity const u(spec.velocities[i], g);
            galileo::BoundedVelocity const v(spec.velocities[i + 1], g);
            auto const w = galileo::oplus(u, v);
            Vec3 const rhs = u.rapidity() + v.rapidity();
            worst_exact = std::max(worst_exact, norm(w.rapidity() - rhs) / (1 + norm(rhs)));
            closure = closure && w.speed() < g->limit();
        }
        closure = closure && r.closure;
        worst_group = std::max({worst_group, r.commutativity, r.associativity});
        worst_exact = std::max({worst_exact, r.neutral, r.inverse, r.reconstruction});
        detail += (detail.empty() ? "" : "; ") + name + ": comm=" + format_number(r.commutativity)
                  + " assoc=" + format_number(r.associativity) + " inverse=" + format_number(r.inverse)
                  + " reconstruction=" + format_number(r.reconstruction);
    }
    detail += "; " + std::to_string(spec.samples) + " triples per G";
    bool const ok = closure && worst_group <= tol && worst_exact <= 1e-12;
    if (!closure)
    {
        detail += "; closure violated";
    }
    return make(ok ? Verdict::pass : Verdict::fail, std::max(worst_group, worst_exact), tol, detail);
}

AuditResult audit_invariance(Context const& ctx, std::mt19937_64& rng, double tol)
{
    auto const spec = nonlinear_spec(ctx);
    std::uniform_real_distribution<double> interval(0.1, 10.0);
    double worst = 0;
    double worst_converse = 0;
    bool ok = true;
    for (auto const& name : spec.g_names)
    {
        auto const g = std::make_shared<galileo::GFunction const>(make_g(name, spec.limit));
        for (std::size_t i = 0; i < spec.samples; ++i)
        {
            galileo::BoundedVelocity const v2(random_vector(rng, 0.9 * spec.limit), g);
            galileo::BoundedVelocity const v3(random_vector(rng, 0.9 * spec.limit), g);
            auto const c = galileo::check_invariance_theorem(v2, v3, interval(rng), tol);
            worst = std::max(worst, c.distance_residual / c.scale);
            worst_converse = std::max(worst_converse,
                                      std::abs(c.perturbed_residual - c.predicted_perturbed) / c.predicted_perturbed);
            ok = ok && c.identity_holds && c.converse_confirmed;
        }
    }
    return make(ok ? Verdict::pass : Verdict::fail, worst, tol,
                std::to_string(spec.samples) + " samples per G; worst relative error of the 1% perturbation prediction "
                    + format_number(worst_converse));
}

/// Closed-form classical round trip for an apparatus moving with w through
/// a medium where the signal speed is c, baseline along `unit`.
double classical_prediction(Vec3 const& w, double c, Vec3 const& unit)
{
    double const along = dot(w, unit);
    double const perp2 = norm_squared(w) - along * along;
    return (c * c - norm_squared(w)) / std::sqrt(c * c - perp2);
}

AuditResult audit_light(Context const& ctx, std::mt19937_64& rng, double tol)
{
    auto const spec = nonlinear_spec(ctx);
    double const c = spec.limit;
    double worst = 0;
    double classical_mismatch = 0;
    double classical_deviation = 0;
    for (auto const& name : spec.g_names)
    {
        auto const g = std::make_shared<galileo::GFunction const>(make_g(name, spec.limit));
        for (std::size_t i = 0; i < spec.light_boosts; ++i)
        {
            Vec3 const w = random_vector(rng, 0.9 * c);
            Vec3 const dir = random_vector(rng, 1.0) + Vec3{0, 0, 1e-3};
            auto const q = galileo::light_quotient(galileo::BoundedVelocity(w, g), spec.baseline, dir);
            worst = std::max(worst, std::abs(q.quotient - c) / c);

            auto const qc = galileo::light_quotient_classical(w, c, spec.baseline, dir);
            double const predicted = classical_prediction(w, c, dir / norm(dir));
            classical_mismatch = std::max(classical_mismatch, std::abs(qc.quotient - predicted) / c);
            classical_deviation = std::max(classical_deviation, std::abs(qc.quotient - c) / c);
        }
    }
    std::string detail = "max |q-C|/C=" + format_number(worst) + "; classical deviation from C up to "
                         + format_number(classical_deviation) + ", matching the two-leg prediction to "
                         + format_number(classical_mismatch);
    bool const ok = worst <= tol && classical_mismatch <= 1e-10 && (spec.light_boosts == 0 || classical_deviation > 1e-6);
    return make(ok ? Verdict::pass : Verdict::fail, worst, tol, detail);
}

AuditFn lookup(std::string const& name)
{
    using namespace std::placeholders;
    if (name == "inertia") return audit_inertia;
    if (name == "frame-group") return audit_frame_group;
    if (name == "objectivity-sweep") return audit_objectivity;
    if (name == "time-order") return audit_time_order;
    if (name == "momentum") return audit_momentum;
    if (name == "dpdt-identity")
        return [](Context const& c, std::mt19937_64&, double t) { return audit_rate_identity(c, t, RateIdentity::momentum); };
    if (name == "angular-momentum") return audit_angular;
    if (name == "dldt-identity")
        return [](Context const& c, std::mt19937_64&, double t) { return audit_rate_identity(c, t, RateIdentity::torque); };
    if (name == "energy") return audit_energy;
    if (name == "boost-covariance") return audit_covariance;
    if (name == "superposition") return audit_superposition;
    if (name == "property-additivity") return audit_additivity;
    if (name == "oplus-group") return audit_oplus;
    if (name == "invariance-theorem") return audit_invariance;
    if (name == "light-quotient") return audit_light;
    return {};
}

}  // namespace

std::span<AuditInfo const> audit_catalog() { return kCatalog; }

AuditInfo const* find_audit(std::string_view name)
{
    auto it = std::find_if(kCatalog.begin(), kCatalog.end(), [&](AuditInfo const& a) { return a.name == name; });
    return it == kCatalog.end() ? nullptr : &*it;
}

RunOutcome run_scenario(Scenario const& scenario, RunOptions const& options)
{
    for (std::size_t i = 0; i < scenario.audits.size(); ++i)
    {
        if (!find_audit(scenario.audits[i]))
        {
            throw ScenarioError("audits[" + std::to_string(i) + "]",
                                "unknown audit '" + scenario.audits[i] + "' (see `invlab audits`)");
        }
    }
    for (auto const& [name, _] : scenario.tolerances)
    {
        if (!find_audit(name))
        {
            throw ScenarioError("tolerances." + name, "unknown audit");
        }
    }

    auto const start = std::chrono::steady_clock::now();

    RunOutcome outcome;
    std::vector<ForceLaw> laws = scenario.build_laws();
    outcome.law = merge(laws, laws.empty() ? "isolated" : "");
    Method const method = options.method.value_or(scenario.integrator.method);
    double const step = options.step.value_or(scenario.integrator.step);
    if (!(step > 0) || !std::isfinite(step))
    {
        throw ScenarioError("integrator.step", "step must be positive");
    }
    if (method == Method::verlet && !outcome.law.velocity_independent())
    {
        throw ScenarioError("integrator.method", "verlet requires a velocity-independent law, but '" + outcome.law.name
                                                     + "' has phi_s or phi_perp");
    }

    Context ctx{scenario, laws, outcome.law, method, step, scenario.integrator.t_end, nullptr, {}};
    try
    {
        outcome.trajectory = integrate(scenario.a, scenario.b, outcome.law, ctx.t_end, step, method);
        ctx.trajectory = &*outcome.trajectory;
    }
    catch (SingularityError const& e)
    {
        ctx.trajectory_error = e.what();
    }

    std::vector<AuditInfo const*> selected;
    for (auto const& info : kCatalog)
    {
        if (std::find(scenario.audits.begin(), scenario.audits.end(), info.name) != scenario.audits.end())
        {
            selected.push_back(&info);
        }
    }

    auto evaluate_one = [&ctx, &options, &scenario](AuditInfo const* info, std::size_t index) {
        auto it = scenario.tolerances.find(info->name);
        double const tol = it == scenario.tolerances.end() ? info->default_tolerance : it->second;
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(index)};
        std::mt19937_64 rng(seq);
        AuditResult r;
        try
        {
            r = lookup(info->name)(ctx, rng, tol);
        }
        catch (std::exception const& e)
        {
            r = make(Verdict::error, std::numeric_limits<double>::quiet_NaN(), tol, e.what());
        }
        r.audit = info->name;
        r.lemma = info->lemma;
        return r;
    };

    std::vector<AuditResult> results(selected.size());
    if (options.parallel)
    {
        std::vector<std::future<AuditResult>> futures;
        for (std::size_t i = 0; i < selected.size(); ++i)
        {
            std::size_t const index = static_cast<std::size_t>(selected[i] - kCatalog.data());
            futures.push_back(std::async(std::launch::async, evaluate_one, selected[i], index));
        }
        for (std::size_t i = 0; i < futures.size(); ++i)
        {
            results[i] = futures[i].get();
        }
    }
    else
    {
        for (std::size_t i = 0; i < selected.size(); ++i)
        {
            results[i] = evaluate_one(selected[i], static_cast<std::size_t>(selected[i] - kCatalog.data()));
        }
    }

    AuditReport& report = outcome.report;
    report.scenario = scenario.name;
    report.seed = options.seed;
    report.method = method;
    report.step = step;
    report.t_end = scenario.integrator.t_end;
    report.results = std::move(results);
    if (options.timing)
    {
        report.wall_clock_seconds
            = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return outcome;
}

namespace
{

void write_oplus_curve(std::ostream& out, NonlinearSpec const& spec)
{
    out << "g,u,u_oplus_u,proper_time_ratio\n";
    for (auto const& name : spec.g_names)
    {
        auto const g = std::make_shared<galileo::GFunction const>(make_g(name, spec.limit));
        for (int i = 0; i <= 99; ++i)
        {
            double const u = spec.limit * 0.99 * i / 99.0;
            galileo::BoundedVelocity const v(Vec3{u, 0, 0}, g);
            auto const w = galileo::oplus(v, v);
            out << name << ',' << format_number(u) << ',' << format_number(w.speed()) << ','
                << format_number(galileo::proper_time(1.0, v)) << '\n';
        }
    }
}

template <class Writer>
void write_file(std::filesystem::path const& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    writer(out);
    if (!out)
    {
        throw std::runtime_error("failed while writing '" + path.string() + "'");
    }
}

}  // namespace

int run(std::filesystem::path const& scenario_path,
        std::filesystem::path const& out_dir,
        RunOptions const& options,
        std::ostream& out,
        std::ostream& diag)
{
    Scenario scenario;
    RunOutcome outcome;
    try
    {
        scenario = load_scenario(scenario_path);
        outcome = run_scenario(scenario, options);
    }
    catch (ScenarioError const& e)
    {
        diag << "invlab: " << scenario_path.string() << ": " << e.what() << '\n';
        return 1;
    }
    catch (std::invalid_argument const& e)
    {
        diag << "invlab: " << scenario_path.string() << ": " << e.what() << '\n';
        return 1;
    }

    try
    {
        std::filesystem::create_directories(out_dir);
        write_file(out_dir / "trajectory.csv", [&](std::ostream& os) {
            if (outcome.trajectory)
            {
                write_trajectory_csv(os, *outcome.trajectory, outcome.law);
            }
            else
            {
                os << kTrajectoryHeader << '\n';
            }
        });
        write_file(out_dir / "plot_invariants.csv", [&](std::ostream& os) {
            if (outcome.trajectory)
            {
                write_invariants_csv(os, *outcome.trajectory, outcome.law);
            }
            else
            {
                os << "t,dP,dL,dE_rel\n";
            }
        });
        if (scenario.nonlinear)
        {
            write_file(out_dir / "plot_oplus.csv", [&](std::ostream& os) { write_oplus_curve(os, *scenario.nonlinear); });
        }
        write_file(out_dir / "report.json", [&](std::ostream& os) { os << to_json(outcome.report); });
    }
    catch (std::exception const& e)
    {
        diag << "invlab: " << e.what() << '\n';
        return 1;
    }

    for (auto const& r : outcome.report.results)
    {
        out << to_string(r.verdict) << "  " << r.audit << "  residual=" << format_number(r.residual)
            << " tolerance=" << format_number(r.tolerance) << "  [" << r.lemma << "]\n";
        if (r.verdict != Verdict::pass && !r.detail.empty())
        {
            out << "      " << r.detail << '\n';
        }
    }
    return exit_code(outcome.report);
}

void list_audits(std::ostream& out)
{
    for (auto const& a : kCatalog)
    {
        out << a.name << "  [" << a.lemma << "]  " << a.description << '\n';
    }
}

}  // namespace invlab
