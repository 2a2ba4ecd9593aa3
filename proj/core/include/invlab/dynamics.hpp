#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "invlab/body.hpp"
#include "invlab/forces.hpp"
#include "invlab/vec3.hpp"

namespace invlab
{

enum class Method
{
    rk4,
    verlet,
};

std::string_view to_string(Method method);
/// Throws std::invalid_argument on an unknown name.
Method parse_method(std::string_view name);

/// Raised when the integrator cannot handle the requested law.
class MethodError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct Snapshot
{
    Body a;
    Body b;
};

struct Trajectory
{
    std::vector<double> times;
    std::vector<Snapshot> states;
    std::string law_name;
    Method method{Method::rk4};
    double step{0};

    std::size_t size() const { return times.size(); }
};

/// Integrates m_A a_A = f, m_B a_B = k from t = 0 with a fixed step. Samples
/// are taken every step at t_i = i * step up to the first t_i >= t_end - step/2.
///
/// Throws std::invalid_argument for non-positive step or t_end, MethodError
/// when verlet is requested for a velocity-dependent law and SingularityError
/// if the bodies come within the law's epsilon.
Trajectory integrate(Body const& a0,
                     Body const& b0,
                     ForceLaw const& law,
                     double t_end,
                     double step,
                     Method method = Method::rk4);

/// Same integration driven by the superposition of several laws, summed
/// force by force at every stage.
Trajectory integrate(Body const& a0,
                     Body const& b0,
                     std::span<ForceLaw const> laws,
                     double t_end,
                     double step,
                     Method method = Method::rk4);

struct PotentialOptions
{
    /// Reference radius where a quadrature potential vanishes.
    double reference_radius{1.0};
};

/// Potential V(r) for a central law: the closed form when the law has one,
/// otherwise V(r) = -int_{r0}^{r} h(s) s ds with h = phi_e.
/// Throws std::invalid_argument for non-central laws.
double potential(ForceLaw const& law,
                 Body const& a,
                 Body const& b,
                 double r,
                 PotentialOptions const& options = {});

struct Observables
{
    Vec3 total_momentum;
    Vec3 angular_momentum;  ///< x_AB x mu v_AB
    std::optional<double> internal_energy;  ///< absent for non-central laws
    double reduced_mass{0};
};

Observables observables(Body const& a,
                        Body const& b,
                        ForceLaw const& law,
                        PotentialOptions const& options = {});

/// Elapsed time along a polyline traversed at a position-dependent speed,
/// int |dx| / |v|. Throws std::invalid_argument on non-positive speed.
double path_time(std::span<Vec3 const> path, std::function<double(Vec3 const&)> const& speed);

}  // namespace invlab
