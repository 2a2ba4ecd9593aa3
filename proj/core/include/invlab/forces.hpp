#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "invlab/body.hpp"
#include "invlab/vec3.hpp"

namespace invlab
{

/// Read-only view of the objective attributes of one body: its mass and
/// its additive properties. Positions are deliberately absent.
class Source
{
public:
    explicit Source(Body const& body) : body_(&body) {}

    double mass() const { return body_->mass(); }
    double property(std::string_view name) const { return body_->property(name); }

private:
    Body const* body_;
};

/// Rotation-invariant scalars of a pair state.
struct PairInvariants
{
    double distance{0};      ///< |x_AB|, softened if the law asks for it
    double speed{0};         ///< |v_AB|
    double radial_rate{0};   ///< x_AB . v_AB
};

/// One scalar coefficient of the force decomposition. Must be symmetric
/// under exchange of the two sources.
using Coefficient = std::function<double(Source const& a, Source const& b, PairInvariants const&)>;

/// Potential V(r) of a central law, normalised however the law likes.
using Potential = std::function<double(Source const& a, Source const& b, double r)>;

class SingularityError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct SingularityPolicy
{
    enum class Mode
    {
        error,   ///< throw SingularityError when |x_AB| < epsilon
        soften,  ///< replace |x_AB| by sqrt(|x_AB|^2 + epsilon^2)
    };
    Mode mode{Mode::error};
    double epsilon{1e-9};
};

/// Pairwise interaction written as
///   f = x_AB phi_e + v_AB phi_s + (x_AB x v_AB) phi_perp      (force on A)
///   k = -x_AB phi_e - v_AB phi_s + (x_AB x v_AB) phi_perp     (force on B)
/// An empty coefficient is the identically-zero channel.
struct ForceLaw
{
    std::string name;
    Coefficient phi_e;
    Coefficient phi_s;
    Coefficient phi_perp;

    /// phi_e depends on the distance alone (given the sources).
    bool radial_phi_e{false};
    /// Some coefficient diverges at zero separation.
    bool singular{false};
    SingularityPolicy singularity;
    /// Closed-form V with -grad V = phi_e x_AB; only meaningful for central laws.
    std::optional<Potential> potential;
    /// Property this law is additive in (e.g. "mass" for gravity).
    std::string additive_property;

    bool has_phi_e() const { return static_cast<bool>(phi_e); }
    bool has_phi_s() const { return static_cast<bool>(phi_s); }
    bool has_phi_perp() const { return static_cast<bool>(phi_perp); }

    /// Velocity-independent force (phi_s == phi_perp == 0).
    bool velocity_independent() const { return !has_phi_s() && !has_phi_perp(); }
    /// Central law: velocity independent with radial phi_e.
    bool central() const { return velocity_independent() && (!has_phi_e() || radial_phi_e); }
};

/// Evaluated coefficients at one pair state.
struct Coefficients
{
    double e{0};
    double s{0};
    double perp{0};
};

PairInvariants invariants(PairState const& state, SingularityPolicy const& policy, bool singular);

Coefficients evaluate(ForceLaw const& law, Body const& a, Body const& b);

/// Force exerted by B on A.
Vec3 force_on_A(ForceLaw const& law, Body const& a, Body const& b);

/// Force exerted by A on B.
Vec3 force_on_B(ForceLaw const& law, Body const& a, Body const& b);

struct ForcePair
{
    Vec3 on_a;
    Vec3 on_b;
};

/// Both forces from one coefficient evaluation.
ForcePair forces(ForceLaw const& law, Body const& a, Body const& b);

/// Sum of force_on_A over the laws. Accelerations (and so forces) add.
Vec3 superpose(std::span<ForceLaw const> laws, Body const& a, Body const& b);

ForcePair superpose_pair(std::span<ForceLaw const> laws, Body const& a, Body const& b);

/// Single law whose coefficients are the sums of the given laws'.
ForceLaw merge(std::span<ForceLaw const> laws, std::string name = {});

struct AdditivityVerdict
{
    bool pass{false};
    double residual{0};
    double tolerance{0};
};

/// Compares f(a1 merged with a2) against f(a1) + f(a2), where the merged
/// body carries the sum of the named property. a1 and a2 must agree in
/// everything else.
AdditivityVerdict check_property_additivity(ForceLaw const& law,
                                            std::string_view property,
                                            Body const& a1,
                                            Body const& a2,
                                            Body const& b,
                                            double tolerance = 1e-12);

namespace laws
{

/// phi_e = -G m_A m_B / r^3.
ForceLaw gravity(double G = 1.0);
/// phi_e = k q_A q_B / r^3 using the named charge property.
ForceLaw coulomb(double k = 1.0, std::string charge = "charge");
/// phi_s = -gamma.
ForceLaw linear_drag(double gamma);
/// phi_e = -kappa.
ForceLaw spring(double kappa);
/// phi_perp = c.
ForceLaw perp_demo(double c = 1.0);
/// phi_e = k (q_A q_B)^2 / r^3: deliberately not additive in q.
ForceLaw quadratic_charge(double k = 1.0, std::string charge = "charge");

}  // namespace laws

}  // namespace invlab
