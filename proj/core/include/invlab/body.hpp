#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "invlab/vec3.hpp"

namespace invlab
{

using PropertyMap = std::map<std::string, double, std::less<>>;

/// Point body: mass, additive scalar properties (charges) and kinematic state.
///
/// Property lookup is total; a property that was never set reads as zero.
/// The reserved name "mass" resolves to the body mass.
class Body
{
public:
    Body() = default;

    Body(std::string id, double mass, PropertyMap properties, Vec3 position, Vec3 velocity)
        : id_(std::move(id))
        , mass_(mass)
        , properties_(std::move(properties))
        , position_(position)
        , velocity_(velocity)
    {
        if (!(mass_ > 0) || !std::isfinite(mass_))
        {
            throw std::invalid_argument("body '" + id_ + "': mass must be positive and finite");
        }
        if (!is_finite(position_) || !is_finite(velocity_))
        {
            throw std::invalid_argument("body '" + id_ + "': non-finite kinematic state");
        }
    }

    std::string const& id() const { return id_; }
    double mass() const { return mass_; }
    PropertyMap const& properties() const { return properties_; }
    Vec3 const& position() const { return position_; }
    Vec3 const& velocity() const { return velocity_; }

    double property(std::string_view name) const
    {
        if (name == "mass")
        {
            return mass_;
        }
        auto it = properties_.find(name);
        return it == properties_.end() ? 0.0 : it->second;
    }

    Body with_state(Vec3 position, Vec3 velocity) const
    {
        Body b = *this;
        b.position_ = position;
        b.velocity_ = velocity;
        return b;
    }

    /// In-place state update for integrator scratch bodies.
    void set_state(Vec3 const& position, Vec3 const& velocity)
    {
        position_ = position;
        velocity_ = velocity;
    }

    /// Copy with one property replaced. Setting "mass" replaces the mass.
    Body with_property(std::string_view name, double value) const
    {
        if (name == "mass")
        {
            return Body(id_, value, properties_, position_, velocity_);
        }
        Body b = *this;
        b.properties_.insert_or_assign(std::string(name), value);
        return b;
    }

private:
    std::string id_;
    double mass_{1};
    PropertyMap properties_;
    Vec3 position_;
    Vec3 velocity_;
};

/// Relative state of an ordered pair (A, B).
struct PairState
{
    Vec3 separation;         ///< x_AB = x_A - x_B
    Vec3 relative_velocity;  ///< v_AB = v_A - v_B

    PairState swapped() const { return {-separation, -relative_velocity}; }
};

inline PairState pair_state(Body const& a, Body const& b)
{
    return {a.position() - b.position(), a.velocity() - b.velocity()};
}

}  // namespace invlab
