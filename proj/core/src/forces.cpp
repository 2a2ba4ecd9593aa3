#include "invlab/forces.hpp"

#include <cmath>
#include <utility>

namespace invlab
{

PairInvariants invariants(PairState const& state, SingularityPolicy const& policy, bool singular)
{
    double distance = norm(state.separation);
    if (singular)
    {
        if (policy.mode == SingularityPolicy::Mode::soften)
        {
            distance = std::sqrt(distance * distance + policy.epsilon * policy.epsilon);
        }
        else if (distance < policy.epsilon)
        {
            throw SingularityError("singular force: |x_AB| = " + std::to_string(distance)
                                   + " below epsilon " + std::to_string(policy.epsilon));
        }
    }
    return {distance, norm(state.relative_velocity), dot(state.separation, state.relative_velocity)};
}

Coefficients evaluate(ForceLaw const& law, Body const& a, Body const& b)
{
    PairInvariants const inv = invariants(pair_state(a, b), law.singularity, law.singular);
    Source const sa(a);
    Source const sb(b);
    Coefficients c;
    if (law.phi_e)
    {
        c.e = law.phi_e(sa, sb, inv);
    }
    if (law.phi_s)
    {
        c.s = law.phi_s(sa, sb, inv);
    }
    if (law.phi_perp)
    {
        c.perp = law.phi_perp(sa, sb, inv);
    }
    return c;
}

ForcePair forces(ForceLaw const& law, Body const& a, Body const& b)
{
    PairState const ps = pair_state(a, b);
    Coefficients const c = evaluate(law, a, b);
    Vec3 const symmetric = cross(ps.separation, ps.relative_velocity) * c.perp;
    Vec3 const antisymmetric = ps.separation * c.e + ps.relative_velocity * c.s;
    return {antisymmetric + symmetric, symmetric - antisymmetric};
}

Vec3 force_on_A(ForceLaw const& law, Body const& a, Body const& b) { return forces(law, a, b).on_a; }

Vec3 force_on_B(ForceLaw const& law, Body const& a, Body const& b) { return forces(law, a, b).on_b; }

Vec3 superpose(std::span<ForceLaw const> laws, Body const& a, Body const& b)
{
    return superpose_pair(laws, a, b).on_a;
}

ForcePair superpose_pair(std::span<ForceLaw const> laws, Body const& a, Body const& b)
{
    ForcePair total;
    for (auto const& law : laws)
    {
        ForcePair const f = forces(law, a, b);
        total.on_a += f.on_a;
        total.on_b += f.on_b;
    }
    return total;
}

namespace
{

Coefficient sum_channel(std::span<ForceLaw const> laws, Coefficient ForceLaw::*channel)
{
    std::vector<Coefficient> parts;
    for (auto const& law : laws)
    {
        if (law.*channel)
        {
            parts.push_back(law.*channel);
        }
    }
    if (parts.empty())
    {
        return {};
    }
    if (parts.size() == 1)
    {
        return parts.front();
    }
    return [parts = std::move(parts)](Source const& a, Source const& b, PairInvariants const& inv) {
        double sum = 0;
        for (auto const& p : parts)
        {
            sum += p(a, b, inv);
        }
        return sum;
    };
}

}  // namespace

ForceLaw merge(std::span<ForceLaw const> laws, std::string name)
{
    ForceLaw merged;
    if (name.empty())
    {
        for (auto const& law : laws)
        {
            merged.name += (merged.name.empty() ? "" : "+") + law.name;
        }
    }
    else
    {
        merged.name = std::move(name);
    }
    merged.phi_e = sum_channel(laws, &ForceLaw::phi_e);
    merged.phi_s = sum_channel(laws, &ForceLaw::phi_s);
    merged.phi_perp = sum_channel(laws, &ForceLaw::phi_perp);

    bool radial = true;
    bool all_potentials = true;
    std::vector<Potential> potentials;
    for (auto const& law : laws)
    {
        if (law.has_phi_e() && !law.radial_phi_e)
        {
            radial = false;
        }
        if (law.singular && !merged.singular)
        {
            merged.singular = true;
            merged.singularity = law.singularity;
        }
        if (law.potential)
        {
            potentials.push_back(*law.potential);
        }
        else if (law.has_phi_e())
        {
            all_potentials = false;
        }
    }
    merged.radial_phi_e = radial;
    if (all_potentials && merged.central())
    {
        merged.potential = [potentials = std::move(potentials)](Source const& a, Source const& b, double r) {
            double v = 0;
            for (auto const& p : potentials)
            {
                v += p(a, b, r);
            }
            return v;
        };
    }
    if (!laws.empty())
    {
        merged.additive_property = laws.front().additive_property;
        for (auto const& law : laws)
        {
            if (law.additive_property != merged.additive_property)
            {
                merged.additive_property.clear();
            }
        }
    }
    return merged;
}

AdditivityVerdict check_property_additivity(ForceLaw const& law,
                                            std::string_view property,
                                            Body const& a1,
                                            Body const& a2,
                                            Body const& b,
                                            double tolerance)
{
    Body const combined = a1.with_property(property, a1.property(property) + a2.property(property));
    Vec3 const f1 = force_on_A(law, a1, b);
    Vec3 const f2 = force_on_A(law, a2, b);
    Vec3 const f12 = force_on_A(law, combined, b);
    AdditivityVerdict v;
    v.residual = norm(f12 - f1 - f2);
    v.tolerance = tolerance * (1 + norm(f1) + norm(f2));
    v.pass = v.residual <= v.tolerance;
    return v;
}

namespace laws
{

ForceLaw gravity(double G)
{
    ForceLaw law;
    law.name = "gravity";
    law.phi_e = [G](Source const& a, Source const& b, PairInvariants const& inv) {
        double const r = inv.distance;
        return -G * a.mass() * b.mass() / (r * r * r);
    };
    law.radial_phi_e = true;
    law.singular = true;
    law.potential = [G](Source const& a, Source const& b, double r) { return -G * a.mass() * b.mass() / r; };
    law.additive_property = "mass";
    return law;
}

ForceLaw coulomb(double k, std::string charge)
{
    ForceLaw law;
    law.name = "coulomb";
    law.phi_e = [k, charge](Source const& a, Source const& b, PairInvariants const& inv) {
        double const r = inv.distance;
        return k * a.property(charge) * b.property(charge) / (r * r * r);
    };
    law.radial_phi_e = true;
    law.singular = true;
    law.potential = [k, charge](Source const& a, Source const& b, double r) {
        return k * a.property(charge) * b.property(charge) / r;
    };
    law.additive_property = charge;
    return law;
}

ForceLaw linear_drag(double gamma)
{
    ForceLaw law;
    law.name = "linear-drag";
    law.phi_s = [gamma](Source const&, Source const&, PairInvariants const&) { return -gamma; };
    return law;
}

ForceLaw spring(double kappa)
{
    ForceLaw law;
    law.name = "spring";
    law.phi_e = [kappa](Source const&, Source const&, PairInvariants const&) { return -kappa; };
    law.radial_phi_e = true;
    law.potential = [kappa](Source const&, Source const&, double r) { return 0.5 * kappa * r * r; };
    return law;
}

ForceLaw perp_demo(double c)
{
    ForceLaw law;
    law.name = "perp-demo";
    law.phi_perp = [c](Source const&, Source const&, PairInvariants const&) { return c; };
    return law;
}

ForceLaw quadratic_charge(double k, std::string charge)
{
    ForceLaw law;
    law.name = "quadratic-charge";
    law.phi_e = [k, charge](Source const& a, Source const& b, PairInvariants const& inv) {
        double const r = inv.distance;
        double const qq = a.property(charge) * b.property(charge);
        return k * qq * qq / (r * r * r);
    };
    law.radial_phi_e = true;
    law.singular = true;
    law.potential = [k, charge](Source const& a, Source const& b, double r) {
        double const qq = a.property(charge) * b.property(charge);
        return k * qq * qq / r;
    };
    law.additive_property = charge;
    return law;
}

}  // namespace laws

}  // namespace invlab
