#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "invlab/dynamics.hpp"
#include "invlab/report.hpp"
#include "invlab/scenario.hpp"

namespace invlab
{

struct AuditInfo
{
    std::string name;
    std::string description;
    std::string lemma;
    double default_tolerance;
};

/// Every audit the runner knows, in report order.
std::span<AuditInfo const> audit_catalog();

AuditInfo const* find_audit(std::string_view name);

struct RunOptions
{
    std::uint64_t seed{42};
    std::optional<double> step;
    std::optional<Method> method;
    /// Record wall-clock time in the report (makes reports non-reproducible).
    bool timing{false};
    /// Run independent audits concurrently.
    bool parallel{true};
};

struct RunOutcome
{
    AuditReport report;
    std::optional<Trajectory> trajectory;  ///< absent when integration failed
    ForceLaw law;                          ///< merged scenario law
};

/// Runs the requested audits in catalog order. Throws ScenarioError for an
/// unknown audit name or an integrator the law does not admit.
RunOutcome run_scenario(Scenario const& scenario, RunOptions const& options = {});

/// Full pipeline: load, run, write trajectory.csv, report.json,
/// plot_invariants.csv (and plot_oplus.csv with a nonlinear block) into
/// `out_dir`. Returns 0 when all audits pass, 2 on any audit failure or
/// error and 1 on input errors; diagnostics go to `diag`.
int run(std::filesystem::path const& scenario_path,
        std::filesystem::path const& out_dir,
        RunOptions const& options,
        std::ostream& out,
        std::ostream& diag);

/// Prints name, lemma tag and description of every audit.
void list_audits(std::ostream& out);

}  // namespace invlab
