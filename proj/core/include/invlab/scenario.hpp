#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "invlab/body.hpp"
#include "invlab/dynamics.hpp"
#include "invlab/forces.hpp"
#include "invlab/frames.hpp"

namespace invlab
{

inline constexpr char const* kScenarioSchema = "v1";

/// Schema or syntax problem in a scenario document. `field` is a path such
/// as "bodies[0].mass"; `line` is set for syntax errors.
class ScenarioError : public std::runtime_error
{
public:
    ScenarioError(std::string field, std::string message, std::optional<std::size_t> line = std::nullopt);

    std::string const& field() const { return field_; }
    std::optional<std::size_t> line() const { return line_; }

private:
    std::string field_;
    std::optional<std::size_t> line_;
};

struct LawSpec
{
    std::string preset;
    std::map<std::string, double> params;
    std::string property;  ///< charge property for coulomb-like presets
};

struct IntegratorSpec
{
    Method method{Method::rk4};
    double step{1e-3};
    double t_end{1.0};
};

struct NonlinearSpec
{
    std::vector<std::string> g_names{"lorentz", "rational"};
    double limit{1.0};
    std::vector<Vec3> velocities;  ///< explicit test velocities
    std::size_t samples{1000};
    double baseline{1.0};
    std::size_t light_boosts{20};
};

struct Scenario
{
    std::string schema{kScenarioSchema};
    std::string name;
    std::string units{"dimensionless"};
    Body a;
    Body b;
    std::vector<LawSpec> laws;
    SingularityPolicy singularity;
    std::vector<FrameTransform> frames;
    std::size_t random_frames{10};
    IntegratorSpec integrator;
    std::optional<NonlinearSpec> nonlinear;
    std::vector<std::string> audits;
    std::map<std::string, double> tolerances;

    /// Laws built from the presets with the scenario's singularity policy.
    std::vector<ForceLaw> build_laws() const;
};

/// Builds one preset. Throws ScenarioError naming `field` for an unknown
/// preset or parameter.
ForceLaw make_law(LawSpec const& spec, SingularityPolicy const& policy, std::string const& field = "laws");

Scenario parse_scenario(std::string const& text);
Scenario load_scenario(std::filesystem::path const& path);

}  // namespace invlab
