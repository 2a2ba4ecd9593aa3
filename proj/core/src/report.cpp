#include "invlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "invlab/audits.hpp"
#include <nlohmann/json.hpp>

namespace invlab
{

std::string_view to_string(Verdict verdict)
{
    switch (verdict)
    {
    case Verdict::pass:
        return "PASS";
    case Verdict::fail:
        return "FAIL";
    case Verdict::error:
        return "ERROR";
    }
    return "ERROR";
}

bool AuditReport::all_passed() const
{
    return std::all_of(results.begin(), results.end(), [](AuditResult const& r) { return r.verdict == Verdict::pass; });
}

int exit_code(AuditReport const& report) { return report.all_passed() ? 0 : 2; }

std::string format_number(double value)
{
    if (std::isnan(value))
    {
        return "nan";
    }
    if (std::isinf(value))
    {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto const [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

namespace
{

nlohmann::ordered_json number_or_string(double v)
{
    // JSON has no representation for inf/nan.
    if (std::isfinite(v))
    {
        return v;
    }
    return format_number(v);
}

}  // namespace

std::string to_json(AuditReport const& report)
{
    nlohmann::ordered_json doc;
    doc["scenario"] = report.scenario;
    doc["seed"] = report.seed;
    doc["integrator"] = {{"method", std::string(to_string(report.method))},
                         {"step", report.step},
                         {"t_end", report.t_end}};
    auto audits = nlohmann::ordered_json::array();
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t errors = 0;
    for (auto const& r : report.results)
    {
        audits.push_back({{"audit", r.audit},
                          {"lemma", r.lemma},
                          {"verdict", std::string(to_string(r.verdict))},
                          {"residual", number_or_string(r.residual)},
                          {"tolerance", number_or_string(r.tolerance)},
                          {"detail", r.detail}});
        (r.verdict == Verdict::pass ? passed : r.verdict == Verdict::fail ? failed : errors) += 1;
    }
    doc["audits"] = std::move(audits);
    doc["summary"] = {{"passed", passed}, {"failed", failed}, {"errors", errors}};
    if (report.wall_clock_seconds)
    {
        doc["wall_clock_seconds"] = *report.wall_clock_seconds;
    }
    return doc.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& out, Trajectory const& traj, ForceLaw const& law)
{
    out << kTrajectoryHeader << '\n';
    bool const central = law.central();
    auto vec = [&out](Vec3 const& v) {
        out << ',' << format_number(v.x) << ',' << format_number(v.y) << ',' << format_number(v.z);
    };
    for (std::size_t i = 0; i < traj.size(); ++i)
    {
        auto const& s = traj.states[i];
        Observables const o = central ? observables(s.a, s.b, law) : observables(s.a, s.b, ForceLaw{});
        out << format_number(traj.times[i]);
        vec(s.a.position());
        vec(s.a.velocity());
        vec(s.b.position());
        vec(s.b.velocity());
        vec(o.total_momentum);
        vec(o.angular_momentum);
        out << ',';
        if (central)
        {
            out << format_number(*o.internal_energy);
        }
        out << '\n';
    }
}

void write_invariants_csv(std::ostream& out, Trajectory const& traj, ForceLaw const& law)
{
    out << "t,dP,dL,dE_rel\n";
    if (traj.size() == 0)
    {
        return;
    }
    auto const p = momentum_series(traj);
    auto const l = angular_momentum_series(traj);
    std::vector<double> e;
    if (law.central())
    {
        e = energy_series(traj, law);
    }
    double const e_scale = e.empty() ? 1.0 : std::max(std::abs(e.front()), 1e-300);
    for (std::size_t i = 0; i < traj.size(); ++i)
    {
        out << format_number(traj.times[i]) << ',' << format_number(norm(p[i] - p.front())) << ','
            << format_number(norm(l[i] - l.front())) << ',';
        if (!e.empty())
        {
            out << format_number((e[i] - e.front()) / e_scale);
        }
        out << '\n';
    }
}

}  // namespace invlab
