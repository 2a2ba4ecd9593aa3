#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "invlab/dynamics.hpp"
#include "invlab/forces.hpp"

namespace invlab
{

enum class Verdict
{
    pass,
    fail,
    error,
};

std::string_view to_string(Verdict verdict);

struct AuditResult
{
    std::string audit;
    std::string lemma;
    Verdict verdict{Verdict::error};
    double residual{0};
    double tolerance{0};
    std::string detail;
};

struct AuditReport
{
    std::string scenario;
    std::uint64_t seed{0};
    Method method{Method::rk4};
    double step{0};
    double t_end{0};
    std::vector<AuditResult> results;
    std::optional<double> wall_clock_seconds;

    bool all_passed() const;
};

/// 0 when every audit passed, 2 otherwise.
int exit_code(AuditReport const& report);

/// Structured JSON report with one entry per audit:
/// {audit, lemma, verdict, residual, tolerance, detail}.
std::string to_json(AuditReport const& report);

/// Column header of the trajectory CSV.
inline constexpr char const* kTrajectoryHeader
    = "t,ax,ay,az,avx,avy,avz,bx,by,bz,bvx,bvy,bvz,Px,Py,Pz,Lx,Ly,Lz,E";

/// One row per sample; E is left blank when the law is not central.
void write_trajectory_csv(std::ostream& out, Trajectory const& traj, ForceLaw const& law);

/// Plot data: t, |P - P0|, |L - L0|, relative energy error (blank if undefined).
void write_invariants_csv(std::ostream& out, Trajectory const& traj, ForceLaw const& law);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace invlab
