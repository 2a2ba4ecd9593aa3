#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "invlab/body.hpp"
#include "invlab/dynamics.hpp"
#include "invlab/forces.hpp"
#include "invlab/frames.hpp"
#include "invlab/galileo.hpp"

namespace invlab
{

/// Time derivative of a sampled vector series: central differences inside,
/// second-order one-sided differences at the two ends.
std::vector<Vec3> derivative(std::span<double const> times, std::span<Vec3 const> values);
std::vector<double> derivative(std::span<double const> times, std::span<double const> values);

std::vector<Vec3> momentum_series(Trajectory const& traj);
std::vector<Vec3> angular_momentum_series(Trajectory const& traj);
/// Internal energy at every sample. Throws std::invalid_argument for
/// non-central laws.
std::vector<double> energy_series(Trajectory const& traj, ForceLaw const& law, PotentialOptions const& options = {});

/// d(p_A + p_B)/dt = f + k = 2 (x_AB x v_AB) phi_perp.
Vec3 expected_momentum_rate(ForceLaw const& law, Body const& a, Body const& b);

/// dL/dt = phi_s (x_AB x v_AB) + phi_perp (m_B - m_A)/(m_A + m_B) x_AB x (x_AB x v_AB).
Vec3 expected_torque(ForceLaw const& law, Body const& a, Body const& b);

/// max_t |X(t) - X(0)|.
double max_deviation(std::span<Vec3 const> series);

/// max_t |d(series)/dt|, by finite differences.
double max_rate(std::span<double const> times, std::span<Vec3 const> series);

/// max_t |E(t) - E(0)| / |E(0)|.
double max_relative_drift(std::span<double const> series);

/// Mean of (E - E0)/|E0| over the last `window` samples minus the same mean
/// over the first `window` samples.
double secular_drift(std::span<double const> series, std::size_t window);

/// max_t |FD dP/dt - expected_momentum_rate|.
double momentum_identity_residual(Trajectory const& traj, ForceLaw const& law);
/// max_t |FD dL/dt - expected_torque|.
double torque_identity_residual(Trajectory const& traj, ForceLaw const& law);

/// Finite-difference identity measured at step h and h/2.
struct ConvergenceCheck
{
    double coarse{0};  ///< residual at h
    double fine{0};    ///< residual at h/2
    double ratio{0};   ///< coarse / fine
};

enum class RateIdentity
{
    momentum,
    torque,
};

ConvergenceCheck identity_convergence(Body const& a0,
                                      Body const& b0,
                                      ForceLaw const& law,
                                      double t_end,
                                      double step,
                                      RateIdentity identity);

/// Largest deviation of x_AB(t) from x_AB(0) + v_AB(0) t, relative to
/// max(1, |x_AB(t)|), plus the same for v_AB.
double inertia_residual(Trajectory const& traj);

/// Integrate-then-transform against transform-then-integrate: largest
/// difference of the relative state (x_AB, v_AB), relative to the scale of
/// the relative state.
double covariance_residual(Body const& a0,
                           Body const& b0,
                           ForceLaw const& law,
                           FrameTransform const& transform,
                           double t_end,
                           double step,
                           Method method);

/// Integrating a list of laws force-by-force against integrating their
/// merged law: largest difference of body positions, relative to scale.
double superposition_residual(Body const& a0,
                              Body const& b0,
                              std::span<ForceLaw const> laws,
                              double t_end,
                              double step,
                              Method method);

struct GroupLawResiduals
{
    double identity{0};
    double inverse{0};
    double associativity{0};
    double double_inverse{0};
    double orthogonality{0};

    double worst() const;
};

/// Group axioms on `count` random (A, B, C) triples. Field residuals are
/// absolute.
GroupLawResiduals frame_group_residuals(std::mt19937_64& rng, std::size_t count);

/// Oplus group axioms on random operands with speeds in [0, max_fraction C).
struct OplusGroupResiduals
{
    bool closure{true};           ///< every result strictly below C
    double commutativity{0};
    double associativity{0};
    double neutral{0};
    double inverse{0};
    double reconstruction{0};     ///< |g(W)W - g(U)U - g(V)V| / (1 + |rhs|)
};

OplusGroupResiduals oplus_group_residuals(std::mt19937_64& rng,
                                          std::shared_ptr<galileo::GFunction const> const& g,
                                          std::size_t count,
                                          double max_fraction = 0.9);

/// Random vector with uniformly distributed direction and norm in [0, max_norm).
Vec3 random_vector(std::mt19937_64& rng, double max_norm);

}  // namespace invlab
